"""Certificate checking: feasibility, stationarity, and the zero-gap identity.

A certificate ``(x, lam)`` proves ``x`` globally optimal when the shifted
matrix is positive definite, ``(Q + diag(lam)) x = c``, and ``x`` is a
sign vector; those conditions force the primal-dual gap to zero.  The
same inverse condition can be phrased as positive semidefiniteness of the
bordered block ``[[Q+diag(lam), c], [c', t]]`` for ``t`` at least
``c'(Q+diag(lam))^-1 c``, which this module checks spectrally as an
independent route.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import nan

import numpy as np

from .generator import Certificate
from .model import (
    BqpInstance,
    Infeasible,
    as_vector,
    dual_value,
    is_dual_feasible,
    objective_value,
    q_of_lambda,
)
from .numerics import min_eigenvalue


@dataclass
class VerifyReport:
    """Outcome of the four certificate checks plus informational inertia.

    ``gap`` is NaN when the multipliers are infeasible (the dual value is
    undefined there); ``overall`` is the conjunction of the four booleans.
    """

    pd_ok: bool
    stationary_ok: bool
    boolean_ok: bool
    gap: float
    gap_ok: bool
    inertia_note: str
    overall: bool


@dataclass(frozen=True)
class SchurBlock:
    """Bordered matrix ``[[Q + diag(lam), c], [c', t]]`` for the scalar ``t``."""

    t: float
    block: np.ndarray


def _inertia_note(q: np.ndarray) -> str:
    eigs = np.linalg.eigvalsh(q)
    tol = 1e-8 * (1.0 + float(np.abs(q).sum(axis=1).max()))
    neg = int((eigs < -tol).sum())
    pos = int((eigs > tol).sum())
    zero = len(eigs) - neg - pos
    return f"Q inertia: {neg} negative, {zero} zero, {pos} positive"


def verify_certificate(inst: BqpInstance, cert: Certificate, tol: float = 1e-6) -> VerifyReport:
    """Check a certificate against its instance.

    pd_ok: the shifted matrix factorizes; stationary_ok: the residual
    ``(Q + diag(lam)) x - c`` has sup-norm at most ``tol * (1 + ||c||_inf)``;
    boolean_ok: every entry of ``x`` is exactly +/-1; gap_ok: the
    primal-dual gap is at most ``tol * (1 + |f(x)|)`` in magnitude.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    x = as_vector(cert.x, inst.n)
    lam = as_vector(cert.lam, inst.n)

    state = is_dual_feasible(inst, lam)
    pd_ok = state.feasible

    residual = q_of_lambda(inst.q, lam) @ x - inst.c
    stationary_ok = bool(np.abs(residual).max() <= tol * (1.0 + np.abs(inst.c).max()))

    boolean_ok = bool((np.abs(x) == 1.0).all())

    if pd_ok and boolean_ok:
        gap = objective_value(inst, x) - dual_value(state, inst)
        gap_ok = bool(abs(gap) <= tol * (1.0 + abs(objective_value(inst, x))))
    else:
        gap, gap_ok = nan, False

    return VerifyReport(
        pd_ok=pd_ok,
        stationary_ok=stationary_ok,
        boolean_ok=boolean_ok,
        gap=gap,
        gap_ok=gap_ok,
        inertia_note=_inertia_note(inst.q),
        overall=pd_ok and stationary_ok and boolean_ok and gap_ok,
    )


def duality_gap(inst: BqpInstance, x, lam) -> float:
    """Primal objective at ``x`` minus the dual value at ``lam``.

    Nonnegative (up to roundoff) by weak duality; raises
    :class:`Infeasible` where the dual is undefined.
    """
    state = is_dual_feasible(inst, lam)
    if not state.feasible:
        raise Infeasible("duality gap undefined: multipliers are not dual feasible")
    return objective_value(inst, x) - dual_value(state, inst)


def build_schur_block(inst: BqpInstance, lam, t: float) -> SchurBlock:
    lam = as_vector(lam, inst.n)
    block = np.zeros((inst.n + 1, inst.n + 1))
    block[: inst.n, : inst.n] = q_of_lambda(inst.q, lam)
    block[: inst.n, inst.n] = inst.c
    block[inst.n, : inst.n] = inst.c
    block[inst.n, inst.n] = t
    return SchurBlock(t=float(t), block=block)


def schur_block_psd(inst: BqpInstance, lam, t: float) -> tuple[bool, float]:
    """Spectral PSD test of the bordered block; returns (is_psd, min_eig).

    When the shifted matrix is positive definite this agrees with the
    closed-form condition ``t >= c'(Q + diag(lam))^-1 c`` up to the
    eigenvalue tolerance ``1e-8 * (1 + ||block||_inf)``.
    """
    block = build_schur_block(inst, lam, t).block
    low = min_eigenvalue(block)
    tol = 1e-8 * (1.0 + float(np.abs(block).sum(axis=1).max()))
    return bool(low >= -tol), low
