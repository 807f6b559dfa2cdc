"""Killed chains, quasi-stationary distributions, and their eigensystems.

For a nonempty proper target set A the chain killed on hitting A acts on
functions supported on B = A^c.  B splits into components inside which the
chain can travel without touching A; each carries a Perron eigenpair whose
left eigenvector, normalized to a probability, is the quasi-stationary
distribution.  The full pi-orthonormal eigensystem (lambda_i, f_i) of
I_B - P_B together with the coefficients c_i = E_pi[f_i] of the indicator
of B drives every hitting-time law downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .chain import ReversibleChain
from .graphs import Graph, bfs_distances

__all__ = [
    "TargetSet",
    "QuasiStationaryComponent",
    "KilledSpectrum",
    "target_set",
    "parse_set_spec",
    "quasi_stationary",
    "select_max_component",
    "killed_spectrum",
]

TIE_REL_TOL = 1e-9
ALPHA_NEG_ABORT = -1e-9


@dataclass(frozen=True)
class TargetSet:
    """A target A, its complement B, and the components of B."""

    target: np.ndarray
    complement: np.ndarray
    components: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        self.target.flags.writeable = False
        self.complement.flags.writeable = False
        for comp in self.components:
            comp.flags.writeable = False

    @property
    def size(self) -> int:
        return len(self.target)


@dataclass(frozen=True)
class QuasiStationaryComponent:
    """Quasi-stationary data of one component of B.

    ``alpha`` is supported on ``vertices`` (same order) and sums to 1;
    started from it, the hitting time of A is exponential with rate
    ``rate = 1 - rho`` and mean ``mean_hit = 1/rate``.
    """

    component_id: int
    vertices: np.ndarray
    alpha: np.ndarray
    rho: float
    rate: float
    mean_hit: float
    is_max: bool = False

    def __post_init__(self) -> None:
        self.vertices.flags.writeable = False
        self.alpha.flags.writeable = False

    def alpha_full(self, n: int) -> np.ndarray:
        """The quasi-stationary law extended by zero to all n states."""
        full = np.zeros(n)
        full[self.vertices] = self.alpha
        return full


@dataclass(frozen=True)
class KilledSpectrum:
    """Eigensystem of the chain killed on A, over C_0(B).

    ``eigvecs[:, i]`` holds f_i restricted to ``support`` (i.e. B, sorted);
    f_i vanishes on A.  Modes are ordered by increasing ``lambdas`` except
    that the designated maximal component's Perron mode is always mode 0,
    which resolves ties between components deterministically.
    """

    m: int
    n_states: int
    support: np.ndarray
    lambdas: np.ndarray
    gammas: np.ndarray
    eigvecs: np.ndarray
    coeffs: np.ndarray
    mode_component: np.ndarray
    components: tuple[QuasiStationaryComponent, ...]
    max_component: QuasiStationaryComponent

    def __post_init__(self) -> None:
        for arr in (self.support, self.lambdas, self.gammas, self.eigvecs,
                    self.coeffs, self.mode_component):
            arr.flags.writeable = False

    def f_values(self, mode: int) -> np.ndarray:
        """f_mode on the full state space (zero on A)."""
        full = np.zeros(self.n_states)
        full[self.support] = self.eigvecs[:, mode]
        return full


def target_set(chain: ReversibleChain, targets) -> TargetSet:
    """Split the complement of A into components avoiding A.

    Components are connected components of the positive-transition subgraph
    induced on B; detailed balance makes positivity symmetric, so an
    undirected search is valid.
    """
    A = np.unique(np.asarray(list(targets), dtype=np.int64))
    if len(A) == 0:
        raise ValueError("target set A must be nonempty")
    if A.min() < 0 or A.max() >= chain.n:
        raise ValueError("target set contains out-of-range states")
    if len(A) == chain.n:
        raise ValueError("target set A must be a proper subset of the states")
    in_A = np.zeros(chain.n, dtype=bool)
    in_A[A] = True
    B = np.flatnonzero(~in_A)

    positive = chain.transition > 0
    comp_id = np.full(chain.n, -1, dtype=np.int64)
    components: list[np.ndarray] = []
    for seed in B:
        if comp_id[seed] >= 0:
            continue
        cid = len(components)
        comp_id[seed] = cid
        stack = [int(seed)]
        members = [int(seed)]
        while stack:
            v = stack.pop()
            for u in np.flatnonzero(positive[v]):
                if not in_A[u] and comp_id[u] < 0:
                    comp_id[u] = cid
                    stack.append(int(u))
                    members.append(int(u))
        components.append(np.sort(np.array(members, dtype=np.int64)))
    return TargetSet(target=A, complement=B, components=tuple(components))


def parse_set_spec(spec: str, g: Graph) -> list[int]:
    """Parse a CLI target-set spec: ``0,4`` or ``ball:o=0,r=1``."""
    spec = spec.strip()
    if spec.startswith("ball:"):
        params = dict(chunk.split("=", 1) for chunk in spec[5:].split(",") if "=" in chunk)
        try:
            origin, radius = int(params["o"]), int(params["r"])
        except (KeyError, ValueError) as exc:
            raise ValueError(f"bad ball spec {spec!r}, expected ball:o=<v>,r=<r>") from exc
        dist = bfs_distances(g, origin)
        return np.flatnonzero(dist <= radius).tolist()
    try:
        return sorted({int(tok) for tok in spec.split(",") if tok.strip()})
    except ValueError as exc:
        raise ValueError(f"bad set spec {spec!r}") from exc


def _component_eigensystem(chain: ReversibleChain, verts: np.ndarray):
    """Eigen-decompose the killed restriction to one component.

    Returns (lambdas ascending, F) where column i of F is the eigenvector on
    ``verts``, orthonormal in the full pi-inner product.
    """
    sub = chain.transition[np.ix_(verts, verts)]
    w = np.sqrt(chain.pi[verts])
    S = (w[:, None] * sub) / w[None, :]
    S = 0.5 * (S + S.T)
    try:
        gammas, V = scipy.linalg.eigh(S)
    except scipy.linalg.LinAlgError as exc:
        raise RuntimeError(f"killed eigensolver failed on component of size {len(verts)}") from exc
    lambdas = (1.0 - gammas)[::-1]
    F = (V / w[:, None])[:, ::-1]
    # deterministic signs: largest-magnitude entry positive
    for i in range(F.shape[1]):
        j = int(np.argmax(np.abs(F[:, i])))
        if F[j, i] < 0:
            F[:, i] = -F[:, i]
    return lambdas, F


def _quasi_stationary_from_leading(chain, verts, lam, f_lead, component_id):
    """Build the QS component from the Perron eigenpair of its block."""
    raw = chain.pi[verts] * f_lead
    if raw.sum() < 0:
        raw = -raw
    scale = raw.sum()
    rel = raw / scale
    if np.any(rel < ALPHA_NEG_ABORT):
        raise RuntimeError(
            f"leading eigenvector on component {component_id} is not numerically "
            f"positive (min entry {rel.min():.3e})"
        )
    rel = np.clip(rel, 0.0, None)
    alpha = rel / rel.sum()
    rho = 1.0 - lam
    return QuasiStationaryComponent(
        component_id=component_id,
        vertices=np.array(verts),
        alpha=alpha,
        rho=float(rho),
        rate=float(lam),
        mean_hit=float(1.0 / lam),
    )


def quasi_stationary(chain: ReversibleChain, ts: TargetSet, component: int) -> QuasiStationaryComponent:
    """Quasi-stationary distribution of one component of B."""
    if not (0 <= component < len(ts.components)):
        raise ValueError(f"component index {component} out of range")
    verts = ts.components[component]
    lambdas, F = _component_eigensystem(chain, verts)
    return _quasi_stationary_from_leading(chain, verts, lambdas[0], F[:, 0], component)


def select_max_component(
    components: list[QuasiStationaryComponent] | tuple[QuasiStationaryComponent, ...],
) -> QuasiStationaryComponent:
    """The component with maximal quasi-stationary mean hitting time.

    Ties within relative 1e-9 are broken by the smallest minimum vertex
    index, standing in for the vanishing-laziness selection of a designated
    component.
    """
    if not components:
        raise ValueError("no components to select from")
    best = max(comp.mean_hit for comp in components)
    tied = [c for c in components if c.mean_hit >= best * (1.0 - TIE_REL_TOL)]
    return min(tied, key=lambda c: int(c.vertices.min()))


def killed_spectrum(
    chain: ReversibleChain,
    ts: TargetSet,
    designate: int | None = None,
) -> KilledSpectrum:
    """Assemble the full killed eigensystem from per-component solves.

    Per-component decomposition keeps degenerate eigenvalues from mixing
    eigenvectors across components.  ``designate`` forces the maximal
    component choice (used to check that verdicts do not depend on which
    tied component is designated).
    """
    comp_systems = [_component_eigensystem(chain, verts) for verts in ts.components]
    qs_components = [
        _quasi_stationary_from_leading(chain, verts, lams[0], F[:, 0], cid)
        for cid, (verts, (lams, F)) in enumerate(zip(ts.components, comp_systems))
    ]
    if designate is None:
        max_comp = select_max_component(qs_components)
    else:
        if not (0 <= designate < len(qs_components)):
            raise ValueError(f"designated component {designate} out of range")
        chosen = qs_components[designate]
        auto = select_max_component(qs_components)
        if chosen.mean_hit < auto.mean_hit * (1.0 - TIE_REL_TOL):
            raise ValueError(
                f"component {designate} does not attain the maximal mean hitting time"
            )
        max_comp = chosen
    qs_components = [
        replace(c, is_max=(c.component_id == max_comp.component_id)) for c in qs_components
    ]
    max_comp = qs_components[max_comp.component_id]

    m = len(ts.complement)
    loc_of_state = np.full(chain.n, -1, dtype=np.int64)
    loc_of_state[ts.complement] = np.arange(m)

    entries = []  # (lambda, comp_id, rank_in_component)
    for cid, (lams, _) in enumerate(comp_systems):
        for rank, lam in enumerate(lams):
            entries.append((float(lam), cid, rank))
    # designated Perron mode first, everything else by ascending lambda
    designated_key = (max_comp.component_id, 0)
    lead_entry = next(e for e in entries if (e[1], e[2]) == designated_key)
    rest = [e for e in entries if (e[1], e[2]) != designated_key]
    rest.sort(key=lambda e: (e[0], int(ts.components[e[1]].min()), e[2]))
    ordered = [lead_entry] + rest

    lambdas = np.array([e[0] for e in ordered])
    mode_component = np.array([e[1] for e in ordered], dtype=np.int64)
    F = np.zeros((m, m))
    for col, (_, cid, rank) in enumerate(ordered):
        rows = loc_of_state[ts.components[cid]]
        F[rows, col] = comp_systems[cid][1][:, rank]
    coeffs = (chain.pi[ts.complement] @ F)

    if lambdas[0] <= 0 or 1.0 - lambdas[0] >= 1:
        raise RuntimeError("killed spectrum must satisfy 0 < lambda_1 and gamma_1 < 1")
    return KilledSpectrum(
        m=m,
        n_states=chain.n,
        support=np.array(ts.complement),
        lambdas=lambdas,
        gammas=1.0 - lambdas,
        eigvecs=F,
        coeffs=coeffs,
        mode_component=mode_component,
        components=tuple(qs_components),
        max_component=max_comp,
    )
