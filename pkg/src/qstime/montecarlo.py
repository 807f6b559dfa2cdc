"""Continuous-time simulation of the walk, independent of the spectral code.

Holding times are i.i.d. Exponential(1) and jumps follow the rows of P, so
hitting times can be sampled without any eigendecomposition and used to
cross-validate the exact laws.  Streams come from the counter-based Philox
generator; worker substreams are derived from (seed, worker index) through
``SeedSequence(seed, spawn_key=(worker,))`` and merged in worker order, so a
fixed seed reproduces the sample stream exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .chain import ReversibleChain
from .killed import killed_spectrum, target_set

__all__ = [
    "SimConfig",
    "HitSample",
    "HitSampleBatch",
    "LocalTimeBatch",
    "TailEstimate",
    "sample_hitting",
    "empirical_tail",
    "sample_killed_local_time",
    "wilson_interval",
]

CENSOR_FRACTION_LIMIT = 1e-6
HORIZON_FACTOR = 1e4
CHUNK = 20_000


@dataclass(frozen=True)
class SimConfig:
    """Sampling configuration.

    ``start`` is one of ``"pi"`` (stationary), ``"qs"`` (quasi-stationary on
    the designated maximal component), ``"qs:<c>"`` (quasi-stationary on
    component c), or ``"vertex:<i>"``.
    """

    samples: int
    seed: int
    start: str = "pi"
    horizon: float | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("need at least one sample")
        if self.horizon is not None and self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass(frozen=True)
class HitSample:
    hit_time: float
    censored: bool
    trajectory_jumps: int
    local_time_at_origin: float


@dataclass(frozen=True)
class HitSampleBatch:
    """Structure-of-arrays record of hitting-time samples."""

    hit_times: np.ndarray
    censored: np.ndarray
    jumps: np.ndarray
    local_times: np.ndarray
    horizon: float
    flagged: bool = field(default=False)

    def __len__(self) -> int:
        return len(self.hit_times)

    def __iter__(self):
        for i in range(len(self)):
            yield HitSample(
                hit_time=float(self.hit_times[i]),
                censored=bool(self.censored[i]),
                trajectory_jumps=int(self.jumps[i]),
                local_time_at_origin=float(self.local_times[i]),
            )

    @property
    def censored_fraction(self) -> float:
        return float(self.censored.mean())


@dataclass(frozen=True)
class LocalTimeBatch:
    """Local time at the origin accumulated before an exponential kill."""

    local_times: np.ndarray
    hit_before_kill: np.ndarray

    def __len__(self) -> int:
        return len(self.local_times)


@dataclass(frozen=True)
class TailEstimate:
    t_grid: np.ndarray
    survival: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    samples: int


def _worker_rng(seed: int, worker: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(worker,)))
    )


def _chunk_sizes(total: int, workers: int) -> list[int]:
    base, extra = divmod(total, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def _resolve_start(chain: ReversibleChain, targets, start: str):
    """Return ('vertex', x) or ('dist', probability vector)."""
    if start.startswith("vertex:"):
        x = int(start.split(":", 1)[1])
        if not (0 <= x < chain.n):
            raise ValueError(f"start vertex {x} out of range")
        return "vertex", x
    if start == "pi":
        return "dist", chain.pi
    if start == "qs" or start.startswith("qs:"):
        ts = target_set(chain, targets)
        spectrum = killed_spectrum(chain, ts)
        if start == "qs":
            comp = spectrum.max_component
        else:
            cid = int(start.split(":", 1)[1])
            if not (0 <= cid < len(spectrum.components)):
                raise ValueError(f"quasi-stationary component {cid} out of range")
            comp = spectrum.components[cid]
        return "dist", comp.alpha_full(chain.n)
    raise ValueError(f"unknown start spec {start!r} (use vertex:<i>, pi, qs, or qs:<c>)")


def _draw_starts(rng: np.random.Generator, kind: str, payload, size: int) -> np.ndarray:
    if kind == "vertex":
        return np.full(size, payload, dtype=np.int64)
    cdf = np.cumsum(payload)
    cdf[-1] = 1.0  # exact inverse-CDF sampling from the computed vector
    return np.searchsorted(cdf, rng.random(size), side="right").astype(np.int64)


def _step_states(rng, cum_rows, states):
    u = rng.random(len(states))
    rows = cum_rows[states]
    return (u[:, None] > rows).sum(axis=1).astype(np.int64)


def _default_horizon(chain: ReversibleChain, targets) -> float:
    ts = target_set(chain, targets)
    comp = killed_spectrum(chain, ts).max_component
    return HORIZON_FACTOR * comp.mean_hit


def sample_hitting(chain: ReversibleChain, targets, cfg: SimConfig, origin: int = 0) -> HitSampleBatch:
    """Simulate first hitting times of the target set.

    Samples starting inside A report hit_time 0.  Runs exceeding the horizon
    are recorded as censored at the horizon, never dropped; a censored
    fraction above 1e-6 flags the batch with a warning.
    """
    targets = sorted(set(int(t) for t in targets))
    in_a = np.zeros(chain.n, dtype=bool)
    in_a[targets] = True
    if in_a.all() or not in_a.any():
        raise ValueError("target set must be a nonempty proper subset")
    horizon = cfg.horizon if cfg.horizon is not None else _default_horizon(chain, targets)
    kind, payload = _resolve_start(chain, targets, cfg.start)
    cum_rows = np.cumsum(chain.transition, axis=1)

    times_parts, censored_parts, jumps_parts, local_parts = [], [], [], []
    for worker, size in enumerate(_chunk_sizes(cfg.samples, cfg.workers)):
        if size == 0:
            continue
        rng = _worker_rng(cfg.seed, worker)
        done = 0
        while done < size:
            batch = min(CHUNK, size - done)
            out = _simulate_chunk(rng, cum_rows, in_a, kind, payload, batch, horizon, origin)
            times_parts.append(out[0])
            censored_parts.append(out[1])
            jumps_parts.append(out[2])
            local_parts.append(out[3])
            done += batch

    batch = HitSampleBatch(
        hit_times=np.concatenate(times_parts),
        censored=np.concatenate(censored_parts),
        jumps=np.concatenate(jumps_parts),
        local_times=np.concatenate(local_parts),
        horizon=horizon,
    )
    if batch.censored_fraction >= CENSOR_FRACTION_LIMIT:
        warnings.warn(
            f"censored fraction {batch.censored_fraction:.2e} exceeds {CENSOR_FRACTION_LIMIT}",
            stacklevel=2,
        )
        batch = HitSampleBatch(
            hit_times=batch.hit_times,
            censored=batch.censored,
            jumps=batch.jumps,
            local_times=batch.local_times,
            horizon=horizon,
            flagged=True,
        )
    return batch


def _simulate_chunk(rng, cum_rows, in_a, kind, payload, size, horizon, origin):
    states = _draw_starts(rng, kind, payload, size)
    times = np.zeros(size)
    jumps = np.zeros(size, dtype=np.int64)
    local = np.zeros(size)
    censored = np.zeros(size, dtype=bool)
    active = np.flatnonzero(~in_a[states])
    while len(active):
        holds = rng.exponential(1.0, size=len(active))
        at_origin = states[active] == origin
        new_times = times[active] + holds
        over = new_times > horizon
        if over.any():
            idx = active[over]
            local[idx] += np.where(
                states[idx] == origin, horizon - times[idx], 0.0
            )
            times[idx] = horizon
            censored[idx] = True
        keep = ~over
        active = active[keep]
        if not len(active):
            break
        holds = holds[keep]
        local[active] += np.where(at_origin[keep], holds, 0.0)
        times[active] = new_times[keep]
        nxt = _step_states(rng, cum_rows, states[active])
        states[active] = nxt
        jumps[active] += 1
        active = active[~in_a[nxt]]
    return times, censored, jumps, local


def wilson_interval(successes: np.ndarray, total: int, z: float = 1.96):
    """Wilson score interval for binomial proportions."""
    p_hat = successes / total
    z2 = z * z
    denom = 1.0 + z2 / total
    center = (p_hat + z2 / (2 * total)) / denom
    half = z * np.sqrt(p_hat * (1 - p_hat) / total + z2 / (4 * total**2)) / denom
    return np.clip(center - half, 0.0, 1.0), np.clip(center + half, 0.0, 1.0)


def empirical_tail(batch: HitSampleBatch, t_grid, z: float = 1.96) -> TailEstimate:
    """Empirical survival on a grid with Wilson confidence bands.

    With no censoring below max(t_grid) the Kaplan-style estimator reduces
    to the plain empirical survival fraction.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    t_max = float(t_grid.max())
    if np.any(batch.censored & (batch.hit_times <= t_max)):
        raise ValueError("censored samples below the evaluation grid bias the tail")
    n = len(batch)
    surv_counts = (batch.hit_times[None, :] > t_grid[:, None]).sum(axis=1)
    survival = surv_counts / n
    lower, upper = wilson_interval(surv_counts.astype(float), n, z=z)
    return TailEstimate(t_grid=t_grid, survival=survival, lower=lower, upper=upper, samples=n)


def sample_killed_local_time(
    chain: ReversibleChain, origin: int, rate: float, cfg: SimConfig
) -> LocalTimeBatch:
    """Local time at ``origin`` before an independent Exponential(rate) kill.

    Records L_origin(tau) per run together with whether the origin was
    reached before the kill; the ratio of mean local times between two start
    vertices estimates the memoryless hitting probability.
    """
    if rate <= 0:
        raise ValueError("kill rate must be positive")
    if not (0 <= origin < chain.n):
        raise ValueError("origin out of range")
    kind, payload = _resolve_start(chain, [origin], cfg.start)
    cum_rows = np.cumsum(chain.transition, axis=1)

    local_parts, hit_parts = [], []
    for worker, size in enumerate(_chunk_sizes(cfg.samples, cfg.workers)):
        if size == 0:
            continue
        rng = _worker_rng(cfg.seed, worker)
        done = 0
        while done < size:
            batch = min(CHUNK, size - done)
            taus = rng.exponential(1.0 / rate, size=batch)
            states = _draw_starts(rng, kind, payload, batch)
            local = np.zeros(batch)
            times = np.zeros(batch)
            hit = states == origin
            active = np.arange(batch)
            while len(active):
                holds = rng.exponential(1.0, size=len(active))
                at_origin = states[active] == origin
                remaining = taus[active] - times[active]
                killed = holds >= remaining
                add = np.where(killed, remaining, holds)
                local[active] += np.where(at_origin, add, 0.0)
                times[active] += add
                keep = ~killed
                active = active[keep]
                if not len(active):
                    break
                nxt = _step_states(rng, cum_rows, states[active])
                states[active] = nxt
                hit[active] |= nxt == origin
            local_parts.append(local)
            hit_parts.append(hit)
            done += batch
    return LocalTimeBatch(
        local_times=np.concatenate(local_parts),
        hit_before_kill=np.concatenate(hit_parts),
    )
