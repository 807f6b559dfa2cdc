"""Independent numerical oracles shared by the test suite.

These deliberately avoid the package's spectral code paths: survival
probabilities come from uniformization (Poisson-weighted powers of the jump
matrix) and heat kernels from scipy's matrix exponential.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse
from scipy.stats import poisson


def uniformization_survival(M: np.ndarray, start: np.ndarray, ts) -> np.ndarray:
    """Survival start^T exp(t (M - I)) 1 for a substochastic jump matrix M.

    Uses the rate-1 uniformization series sum_k Poisson(k; t) start^T M^k 1,
    truncated where the Poisson tail is below 1e-15.  Sparse matvecs keep
    this cheap even for thousands of series terms.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    t_max = float(ts.max(initial=0.0))
    k_max = int(t_max + 12.0 * np.sqrt(t_max + 1.0) + 60.0)
    M_sparse = scipy.sparse.csr_matrix(M)
    scores = np.empty(k_max + 1)
    w = np.ones(M.shape[0])
    for k in range(k_max + 1):
        scores[k] = start @ w
        w = M_sparse @ w
    ks = np.arange(k_max + 1)
    out = np.empty_like(ts)
    for i, t in enumerate(ts):
        out[i] = float(poisson.pmf(ks, t) @ scores)
    return out


def expm_heat_kernel(P: np.ndarray, t: float) -> np.ndarray:
    """Full transition kernel exp(t (P - I)) via scaling-and-squaring."""
    return scipy.linalg.expm(t * (P - np.eye(P.shape[0])))
