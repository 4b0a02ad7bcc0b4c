"""Monte Carlo engine: sample states, run the circuit, reduce to statistics.

Trial t of a run draws from substream t of the run seed, so the record list
is identical whatever the execution order or worker count. Chunks of trials
are evaluated with the batched entanglement kernels; per-trial numerical
failures (which should essentially never happen) are retried on a disjoint
substream and counted against a 1e-6 budget.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Union

import numpy as np

from .entanglement import eof, eof_batch
from .errors import NumericError, UsageError
from .gates import apply, circuit
from .qstate import DensityMatrix, densify
from .sampling import (
    RandomStream,
    haar_phase_fix,
    mixed_state_matrix,
    pure_state_vector,
    random_mixed_state,
    random_pure_state,
)

Kind = Literal["pure", "mixed"]

CHUNK_SIZE = 8192
RETRY_STRIDE = 1 << 48  # retry k of trial t uses substream t + k * stride
MAX_FAILURE_RATE = 1e-6
MAX_RETRIES = 8
MAX_TRIALS = 10**8
DEFAULT_MIN_OCCUPANCY = 100


@dataclass(frozen=True)
class EnsembleSpec:
    """One surveyed population: which measure, how many trials, which seed."""

    kind: Kind
    trials: int
    seed: int

    def __post_init__(self):
        if self.kind not in ("pure", "mixed"):
            raise UsageError(f"kind must be 'pure' or 'mixed', got {self.kind!r}")
        if self.trials < 1:
            raise UsageError("trials must be >= 1")
        if self.trials > MAX_TRIALS:
            raise UsageError(f"trials capped at {MAX_TRIALS} (memory guard)")


@dataclass(frozen=True)
class TrialRecord:
    """One sample's initial EoF, final EoF, and their difference."""

    e0: float
    ef: float
    delta: float


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    """Column-wise record storage for a whole ensemble run.

    Behaves as a sequence of TrialRecord while keeping the trial data in
    three flat float arrays.
    """

    e0: np.ndarray
    ef: np.ndarray
    delta: np.ndarray
    failures: int = 0

    def __len__(self) -> int:
        return self.e0.shape[0]

    def __iter__(self) -> Iterator[TrialRecord]:
        for i in range(len(self)):
            yield TrialRecord(float(self.e0[i]), float(self.ef[i]), float(self.delta[i]))

    def __getitem__(self, i: int) -> TrialRecord:
        return TrialRecord(float(self.e0[i]), float(self.ef[i]), float(self.delta[i]))


Records = Union[EnsembleResult, Iterable[TrialRecord]]


def _record_arrays(records: Records) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if isinstance(records, EnsembleResult):
        return records.e0, records.ef, records.delta
    rows = [(r.e0, r.ef, r.delta) for r in records]
    arr = np.asarray(rows, dtype=float).reshape(-1, 3)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def run_trial(kind: Kind, rng: RandomStream, state: DensityMatrix | None = None) -> TrialRecord:
    """One Monte Carlo trial: sample (or take the forced test state), push it
    through the circuit, and report (E_0, E_F, delta)."""
    if state is None:
        if kind == "pure":
            state = densify(random_pure_state(rng))
        else:
            state = random_mixed_state(rng)
    e0 = eof(state)
    ef = eof(apply(circuit(), state))
    return TrialRecord(e0=e0, ef=ef, delta=ef - e0)


def _sample_chunk(kind: Kind, seed: int, start: int, count: int) -> np.ndarray:
    """Stack of `count` raw density matrices for trials start..start+count-1.

    Draws per trial are identical to the scalar samplers; only the linear
    algebra (QR, outer products) is batched.
    """
    if kind == "pure":
        vecs = np.empty((count, 4), dtype=complex)
        for i in range(count):
            vecs[i] = pure_state_vector(RandomStream(seed, start + i))
        return vecs[:, :, None] * vecs.conj()[:, None, :]

    gin = np.empty((count, 4, 4), dtype=complex)
    uni = np.empty((count, 3))
    for i in range(count):
        gen = RandomStream(seed, start + i).generator
        z = gen.standard_normal((2, 4, 4))
        gin[i] = z[0] + 1j * z[1]
        uni[i] = gen.random(3)
    q, r = np.linalg.qr(gin)
    diag = np.abs(np.diagonal(r, axis1=-2, axis2=-1))
    q = haar_phase_fix(q, r)
    lam = np.diff(np.sort(uni, axis=1), prepend=0.0, append=1.0, axis=1)
    rhos = (q * lam[:, None, :]) @ q.conj().transpose(0, 2, 1)
    for i in np.flatnonzero(diag.min(axis=1) == 0.0):
        # measure-zero degenerate QR draw: redo via the scalar sampler,
        # which replays the same substream and keeps drawing
        rhos[i] = mixed_state_matrix(RandomStream(seed, start + int(i)))
    return rhos


def _chunk_task(kind: Kind, seed: int, start: int, count: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Evaluate one chunk of trials; returns (e0, ef, failure count)."""
    rhos = _sample_chunk(kind, seed, start, count)
    u = circuit().matrix
    e0 = eof_batch(rhos)
    ef = eof_batch(u @ rhos @ u.conj().T)
    failures = 0
    bad = np.flatnonzero(~(np.isfinite(e0) & np.isfinite(ef)))
    for i in bad:
        t = start + int(i)
        for retry in range(1, MAX_RETRIES + 1):
            failures += 1
            try:
                rec = run_trial(kind, RandomStream(seed, t + retry * RETRY_STRIDE))
            except NumericError:
                continue
            e0[i], ef[i] = rec.e0, rec.ef
            break
        else:
            raise NumericError(f"trial {t} failed {MAX_RETRIES} consecutive resamples")
    return e0, ef, failures


def run_ensemble(spec: EnsembleSpec, workers: int = 1) -> EnsembleResult:
    """Run the full ensemble; the result is a deterministic function of the
    spec alone, regardless of `workers`."""
    starts = list(range(0, spec.trials, CHUNK_SIZE))
    tasks = [(spec.kind, spec.seed, s, min(CHUNK_SIZE, spec.trials - s)) for s in starts]
    if workers > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk_task_star, tasks))
    else:
        parts = [_chunk_task(*t) for t in tasks]
    e0 = np.concatenate([p[0] for p in parts])
    ef = np.concatenate([p[1] for p in parts])
    failures = sum(p[2] for p in parts)
    if failures > MAX_FAILURE_RATE * spec.trials:
        raise NumericError(
            f"{failures} numeric failures in {spec.trials} trials exceeds the {MAX_FAILURE_RATE} budget"
        )
    return EnsembleResult(e0=e0, ef=ef, delta=ef - e0, failures=failures)


def _chunk_task_star(args):
    return _chunk_task(*args)


@dataclass(frozen=True, eq=False)
class Histogram:
    """Fixed-range binned counts; density = count / (total * bin width)."""

    lo: float
    hi: float
    bin_count: int
    counts: np.ndarray
    total: int

    @property
    def bin_width(self) -> float:
        return (self.hi - self.lo) / self.bin_count

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.bin_count + 1)

    def densities(self) -> np.ndarray:
        return self.counts / (self.total * self.bin_width)

    def bin_index(self, x: float) -> int:
        """Index of the half-open bin [edge, next) containing x (last bin closed)."""
        i = int(np.floor((x - self.lo) / self.bin_width))
        return min(max(i, 0), self.bin_count - 1)


def _histogram(values: np.ndarray, lo: float, hi: float, bin_count: int) -> Histogram:
    if bin_count < 2:
        raise UsageError("bin_count must be >= 2")
    counts, _ = np.histogram(values, bins=bin_count, range=(lo, hi))
    return Histogram(lo=lo, hi=hi, bin_count=bin_count, counts=counts.astype(np.int64), total=int(values.shape[0]))


def histogram_delta(records: Records, bin_count: int) -> Histogram:
    """P(delta E) histogram over the fixed range [-1, 1]."""
    _, _, delta = _record_arrays(records)
    return _histogram(delta, -1.0, 1.0, bin_count)


def entanglement_histogram(records: Records, bin_count: int) -> Histogram:
    """P(E_0) histogram over [0, 1], the optional companion output."""
    e0, _, _ = _record_arrays(records)
    return _histogram(e0, 0.0, 1.0, bin_count)


@dataclass(frozen=True, eq=False)
class ConditionalProfile:
    """Per-bin mean of final EoF conditioned on binned initial EoF.

    Bins with fewer than `min_count` samples carry mean NaN and are excluded
    from the occupied mask.
    """

    edges: np.ndarray
    mean_ef: np.ndarray
    counts: np.ndarray
    min_count: int

    @property
    def occupied(self) -> np.ndarray:
        return self.counts >= self.min_count

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


def conditional_mean(records: Records, bin_count: int, min_count: int = DEFAULT_MIN_OCCUPANCY) -> ConditionalProfile:
    """Mean E_F per E_0 bin over [0, 1]."""
    if bin_count < 2:
        raise UsageError("bin_count must be >= 2")
    e0, ef, _ = _record_arrays(records)
    edges = np.linspace(0.0, 1.0, bin_count + 1)
    idx = np.clip(np.searchsorted(edges, e0, side="right") - 1, 0, bin_count - 1)
    counts = np.bincount(idx, minlength=bin_count)
    sums = np.bincount(idx, weights=ef, minlength=bin_count)
    mean = np.full(bin_count, np.nan)
    ok = counts >= min_count
    mean[ok] = sums[ok] / counts[ok]
    return ConditionalProfile(edges=edges, mean_ef=mean, counts=counts.astype(np.int64), min_count=min_count)
