"""Rate-1 continuous-time reversible chains and their spectral data.

The chain is stored through its jump matrix P, stationary law pi, and the
full eigensystem of I - P: eigenvalues 0 = beta_1 < beta_2 <= ... <= beta_n
with a pi-orthonormal basis of right eigenvectors g_1 = 1, g_2, ..., g_n.
The spectrum is obtained from the symmetric conjugate
Diag(pi)^{1/2} P Diag(pi)^{-1/2}, which is exact for reversible P.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .graphs import Graph

__all__ = [
    "ReversibleChain",
    "srw_chain",
    "heat_kernel",
    "eigentime_mean_hit",
    "spectral_counting",
]

ROW_SUM_TOL = 1e-12
BALANCE_TOL = 1e-12
CLUSTER_GAP = 1e-12


@dataclass(frozen=True)
class ReversibleChain:
    """Reversible jump chain with its full spectral decomposition.

    ``eigvecs[:, i]`` is the eigenvector g_i of I - P for eigenvalue
    ``betas[i]``; the basis is orthonormal in the pi-weighted inner product
    and g_1 is identically 1.
    """

    n: int
    transition: np.ndarray
    pi: np.ndarray
    betas: np.ndarray
    eigvecs: np.ndarray
    t_rel: float
    label: str = "chain"
    degree: int | None = None

    def __post_init__(self) -> None:
        for arr in (self.transition, self.pi, self.betas, self.eigvecs):
            arr.flags.writeable = False


def _pi_gram_schmidt_clusters(G: np.ndarray, betas: np.ndarray, pi: np.ndarray) -> None:
    """Re-orthonormalize eigenvectors within degenerate eigenvalue clusters.

    Modified Gram-Schmidt in the pi-inner product, applied in place.  The
    solver already returns an orthonormal basis; this pass pins down the
    numerics inside clusters where eigenvalues coincide to round-off.
    """
    n = len(betas)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and betas[stop] - betas[stop - 1] <= CLUSTER_GAP:
            stop += 1
        if stop - start > 1:
            for i in range(start, stop):
                v = G[:, i]
                for j in range(start, i):
                    v = v - np.dot(pi * G[:, j], v) * G[:, j]
                norm = np.sqrt(np.dot(pi * v, v))
                G[:, i] = v / norm
        start = stop


def from_matrix(P: np.ndarray, pi: np.ndarray, label: str = "chain",
                degree: int | None = None) -> ReversibleChain:
    """Build a ReversibleChain from a row-stochastic reversible matrix."""
    P = np.asarray(P, dtype=np.float64)
    pi = np.asarray(pi, dtype=np.float64)
    n = P.shape[0]
    if P.shape != (n, n) or pi.shape != (n,):
        raise ValueError("transition matrix and pi have inconsistent shapes")
    row_err = np.abs(P.sum(axis=1) - 1.0).max()
    if row_err > ROW_SUM_TOL:
        raise ValueError(f"rows of P do not sum to 1 (max error {row_err:.3e})")
    if np.any(pi <= 0) or abs(pi.sum() - 1.0) > ROW_SUM_TOL:
        raise ValueError("pi must be a strictly positive probability vector")
    flux = pi[:, None] * P
    balance_err = np.abs(flux - flux.T).max()
    if balance_err > BALANCE_TOL:
        raise ValueError(f"detailed balance fails (max error {balance_err:.3e})")

    sqrt_pi = np.sqrt(pi)
    S = (sqrt_pi[:, None] * P) / sqrt_pi[None, :]
    S = 0.5 * (S + S.T)
    try:
        thetas, V = scipy.linalg.eigh(S)
    except scipy.linalg.LinAlgError as exc:
        raise RuntimeError(
            f"eigensolver failed on {label} (n={n}): {exc}"
        ) from exc
    # eigh sorts ascending in theta; betas = 1 - theta ascending needs reversal
    thetas = thetas[::-1]
    V = V[:, ::-1]
    if thetas[0] > 1 + 1e-9 or thetas[-1] < -1 - 1e-9:
        raise RuntimeError(f"spectrum of {label} escapes [-1, 1]: {thetas[[0, -1]]}")
    betas = 1.0 - thetas
    betas[0] = 0.0
    G = V / sqrt_pi[:, None]
    G[:, 0] = 1.0  # beta_1 = 0 eigenvector is the constant function
    _pi_gram_schmidt_clusters(G, betas, pi)
    if betas[1] <= 0:
        raise RuntimeError(f"{label}: spectral gap is not positive (chain reducible?)")
    return ReversibleChain(
        n=n,
        transition=P,
        pi=pi,
        betas=betas,
        eigvecs=np.ascontiguousarray(G),
        t_rel=1.0 / betas[1],
        label=label,
        degree=degree,
    )


def srw_chain(g: Graph) -> ReversibleChain:
    """Simple random walk on a regular graph: P(x,y) = 1/d on edges."""
    P = np.zeros((g.n, g.n))
    rows = np.repeat(np.arange(g.n), g.degree)
    P[rows, g.adjacency.ravel()] = 1.0 / g.degree
    pi = np.full(g.n, 1.0 / g.n)
    return from_matrix(P, pi, label=f"srw({g.family_tag})", degree=g.degree)


def heat_kernel(c: ReversibleChain, t: float, x: int, y: int) -> float:
    """Transition probability p_t(x, y) of the rate-1 chain."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    weights = np.exp(-c.betas * t)
    value = float(np.sum(weights * c.eigvecs[x] * c.eigvecs[y]) * c.pi[y])
    return min(max(value, 0.0), 1.0)


def eigentime_mean_hit(c: ReversibleChain) -> float:
    """Sum of inverse nonzero eigenvalues of I - P.

    By the eigentime identity this equals sum_x pi(x) E_pi[T_x], which for a
    chain on a vertex-transitive graph is the stationary mean hitting time of
    any single vertex.
    """
    return float(np.sum(1.0 / c.betas[1:]))


def spectral_counting(c: ReversibleChain, r: float) -> float:
    """Mass of the spectral counting measure on (0, r]: (1/n) #{i>=2: beta_i <= r}."""
    if r <= 0:
        raise ValueError("r must be positive")
    return float(np.count_nonzero(c.betas[1:] <= r)) / c.n
