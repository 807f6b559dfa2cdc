"""Exact hitting-time laws derived from the killed eigensystem.

Starting from stationarity the hitting time of A is a mixture of
exponentials with weights c_i^2 and rates lambda_i; starting from a vertex x
the tail is sum_i c_i f_i(x) exp(-lambda_i t).  This module packages those
laws along with the quasi-stationary default of stationarity R_M = 1 - c_1^2
and the auxiliary time t_med at which the i >= 2 part of
sum c_i^2 (1 - exp(-lambda_i t))^2 reaches half of its limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ReversibleChain
from .killed import KilledSpectrum, QuasiStationaryComponent, TargetSet, killed_spectrum

__all__ = [
    "HittingLaw",
    "hitting_law",
    "tail_from_pi",
    "tail_from_vertex",
    "tail_from_alpha",
    "mean_from_pi",
    "mean_sq_hit_profile",
    "solve_t_med",
]

R_M_AGREEMENT_TOL = 1e-9
TMED_MASS_FLOOR = 1e-14
TMED_ABS_TOL = 1e-12
PROFILE_AGREEMENT_TOL = 1e-10


@dataclass(frozen=True)
class HittingLaw:
    """Hitting-time law of a target set, bundled with its error quantities."""

    chain: ReversibleChain
    ts: TargetSet
    killed: KilledSpectrum
    max_comp: QuasiStationaryComponent
    pi_a: float
    pi_b: float
    r_m: float
    e_pi_ta: float
    e_alpha_ta: float
    t_med: float


def _r_m_from_alpha(chain: ReversibleChain, comp: QuasiStationaryComponent) -> float:
    """R_M from the squared pi-norm of the density alpha_M / pi."""
    ratio_sq_norm = float(np.sum(comp.alpha**2 / chain.pi[comp.vertices]))
    return (ratio_sq_norm - 1.0) / ratio_sq_norm


def _solve_t_med(lambdas: np.ndarray, coeffs: np.ndarray, t_rel: float) -> float:
    """Bisect the defining equation of t_med to absolute tolerance 1e-12.

    Returns 0 when all spectral mass beyond the leading mode vanishes
    (e.g. complete graphs with a singleton target), where the defining
    equation is 0 = 0 for every t.
    """
    csq = coeffs[1:] ** 2
    lam = lambdas[1:]
    mass = float(csq.sum())
    if mass <= TMED_MASS_FLOOR:
        return 0.0
    target = 0.5 * mass

    def excess(t: float) -> float:
        return float(csq @ (1.0 - np.exp(-lam * t)) ** 2) - target

    hi = 2.0 * t_rel
    while excess(hi) < 0.0:  # guaranteed bracket at 2 t_rel; widen defensively
        hi *= 2.0
    lo = 0.0
    while hi - lo > TMED_ABS_TOL:
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def hitting_law(
    chain: ReversibleChain,
    ts: TargetSet,
    designate: int | None = None,
) -> HittingLaw:
    """Assemble the hitting law of A, checking R_M by two routes.

    R_M is computed both as 1 - c_1^2 and through the norm of alpha_M / pi;
    the two must agree to 1e-9.  The stored value is 1 - c_1^2.
    """
    ks = killed_spectrum(chain, ts, designate=designate)
    comp = ks.max_component
    pi_a = float(chain.pi[ts.target].sum())
    pi_b = float(chain.pi[ts.complement].sum())
    r_m = 1.0 - float(ks.coeffs[0] ** 2)
    r_m_alpha = _r_m_from_alpha(chain, comp)
    if abs(r_m - r_m_alpha) > R_M_AGREEMENT_TOL:
        raise RuntimeError(
            f"R_M disagreement: 1-c_1^2={r_m:.12e} vs alpha-route {r_m_alpha:.12e}"
        )
    e_pi_ta = float(np.sum(ks.coeffs**2 / ks.lambdas))
    t_med = _solve_t_med(ks.lambdas, ks.coeffs, chain.t_rel)
    return HittingLaw(
        chain=chain,
        ts=ts,
        killed=ks,
        max_comp=comp,
        pi_a=pi_a,
        pi_b=pi_b,
        r_m=r_m,
        e_pi_ta=e_pi_ta,
        e_alpha_ta=comp.mean_hit,
        t_med=t_med,
    )


def _clamp(values: np.ndarray) -> np.ndarray:
    return np.clip(values, 0.0, 1.0)


def tail_from_pi(law: HittingLaw, t) -> float | np.ndarray:
    """P_pi(T_A > t) = sum_i c_i^2 exp(-lambda_i t)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("time must be nonnegative")
    scalar = t_arr.ndim == 0
    out = _clamp((law.killed.coeffs**2) @ np.exp(-np.outer(law.killed.lambdas, np.atleast_1d(t_arr))))
    return float(out[0]) if scalar else out


def tail_from_vertex(law: HittingLaw, x: int, t) -> float | np.ndarray:
    """P_x(T_A > t) = sum_i c_i f_i(x) exp(-lambda_i t); zero for x in A."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("time must be nonnegative")
    scalar = t_arr.ndim == 0
    if x in law.ts.target:
        return 0.0 if scalar else np.zeros_like(t_arr)
    loc = int(np.searchsorted(law.killed.support, x))
    weights = law.killed.coeffs * law.killed.eigvecs[loc]
    out = _clamp(weights @ np.exp(-np.outer(law.killed.lambdas, np.atleast_1d(t_arr))))
    return float(out[0]) if scalar else out


def tail_from_alpha(law: HittingLaw, t) -> float | np.ndarray:
    """P_{alpha_M}(T_A > t): exactly exponential with rate lambda_1."""
    t_arr = np.asarray(t, dtype=float)
    out = np.exp(-law.killed.lambdas[0] * t_arr)
    return float(out) if t_arr.ndim == 0 else out


def mean_from_pi(law: HittingLaw) -> float:
    """E_pi[T_A] = sum_i c_i^2 / lambda_i."""
    return law.e_pi_ta


def mean_sq_hit_profile(law: HittingLaw, t: float) -> float:
    """pi-weighted squared hitting probability over B at time t.

    Computed both spectrally, sum_i c_i^2 (1 - exp(-lambda_i t))^2, and
    spatially, sum_{x in B} pi(x) P_x(T_A <= t)^2; the routes must agree to
    1e-10 and the spectral value is returned.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    ks = law.killed
    decay = np.exp(-ks.lambdas * t)
    spectral = float((ks.coeffs**2) @ (1.0 - decay) ** 2)
    per_vertex_tail = ks.eigvecs @ (ks.coeffs * decay)
    spatial = float(law.chain.pi[ks.support] @ (1.0 - per_vertex_tail) ** 2)
    if abs(spectral - spatial) > PROFILE_AGREEMENT_TOL:
        raise RuntimeError(
            f"hitting-profile routes disagree at t={t}: {spectral!r} vs {spatial!r}"
        )
    return spectral


def solve_t_med(law: HittingLaw) -> float:
    """Recompute t_med by bracketed bisection (absolute tolerance 1e-12)."""
    return _solve_t_med(law.killed.lambdas, law.killed.coeffs, law.chain.t_rel)
