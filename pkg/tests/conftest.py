from pathlib import Path

import numpy as np
import pytest

from bqpbench import BqpInstance, dual_value, is_dual_feasible

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def load_fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def rel_err(approx: np.ndarray, exact: np.ndarray) -> float:
    """Sup-norm error normalized by 1 + sup-norm of the exact value."""
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    return float(np.abs(approx - exact).max() / (1.0 + np.abs(exact).max()))


def fd_gradient(inst: BqpInstance, lam: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central finite differences of the dual value."""
    grad = np.empty_like(lam)
    for i in range(len(lam)):
        bump = np.zeros_like(lam)
        bump[i] = step
        up = dual_value(is_dual_feasible(inst, lam + bump), inst)
        down = dual_value(is_dual_feasible(inst, lam - bump), inst)
        grad[i] = (up - down) / (2.0 * step)
    return grad


def fd_hessian(inst: BqpInstance, lam: np.ndarray, step: float = 1e-4) -> np.ndarray:
    """Central finite differences of the dual gradient, symmetrized."""
    from bqpbench import dual_gradient

    n = len(lam)
    hess = np.empty((n, n))
    for i in range(n):
        bump = np.zeros_like(lam)
        bump[i] = step
        up = dual_gradient(is_dual_feasible(inst, lam + bump))
        down = dual_gradient(is_dual_feasible(inst, lam - bump))
        hess[:, i] = (up - down) / (2.0 * step)
    return 0.5 * (hess + hess.T)
