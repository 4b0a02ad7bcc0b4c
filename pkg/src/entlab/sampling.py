"""Measure-correct random two-qubit states from seedable substreams.

Mixed states follow the product measure on state space: a Haar-random
eigenbasis (Ginibre matrix -> QR -> phase correction; plain QR alone is not
Haar) combined with eigenvalues drawn uniformly from the probability
3-simplex (sorted-uniform spacings, equivalent to a flat Dirichlet). Pure
states are Haar-uniform on the unit sphere via normalized complex Gaussians.

Randomness comes from counter-based Philox streams keyed by
(seed, stream_index): trial t of a run owns substream t, so sequences are
reproducible independently of execution order. The draw order inside each
sampler is fixed and documented in the function bodies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .gates import UnitaryGate
from .qstate import DensityMatrix, PureState

SIMPLEX_SUM_TOL = 1e-12
_MASK64 = (1 << 64) - 1


@dataclass
class RandomStream:
    """Deterministic substream of a 64-bit seeded Philox generator.

    Equal (seed, stream_index) pairs reproduce identical sequences; distinct
    stream_index values give statistically independent streams.
    """

    seed: int
    stream_index: int = 0
    _gen: np.random.Generator | None = field(default=None, repr=False, compare=False)

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            key = [self.seed & _MASK64, self.stream_index & _MASK64]
            self._gen = np.random.Generator(np.random.Philox(key=key))
        return self._gen

    def substream(self, index: int) -> "RandomStream":
        return RandomStream(self.seed, index)


@dataclass(frozen=True, eq=False)
class SimplexPoint:
    """Four weights on the probability simplex: each in [0, 1], summing to 1."""

    lambdas: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float).reshape(-1)
        if lam.shape != (4,):
            raise UsageError(f"simplex point needs 4 weights, got {lam.shape}")
        if lam.min() < 0.0 or lam.max() > 1.0 or abs(lam.sum() - 1.0) > SIMPLEX_SUM_TOL:
            raise UsageError("weights must lie in [0,1] and sum to 1")
        object.__setattr__(self, "lambdas", lam)


def _ginibre(rng: RandomStream) -> np.ndarray:
    # draw order: one (2, 4, 4) block of standard normals; real part first
    z = rng.generator.standard_normal((2, 4, 4))
    return z[0] + 1j * z[1]


def haar_phase_fix(q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Rescale QR factor columns by the phases of R's diagonal so the result
    is Haar-distributed, not merely unitary."""
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def haar_unitary(rng: RandomStream) -> UnitaryGate:
    """One 4x4 unitary distributed per the Haar measure on U(4)."""
    while True:
        g = _ginibre(rng)
        q, r = np.linalg.qr(g)
        if np.abs(np.diagonal(r)).min() > 0.0:
            return UnitaryGate(haar_phase_fix(q, r))
        # measure-zero degenerate draw: keep consuming the same stream


def simplex_point(rng: RandomStream) -> SimplexPoint:
    """Uniform point on the 3-simplex via sorted-uniform spacings."""
    # draw order: 3 uniforms on [0, 1)
    u = np.sort(rng.generator.random(3))
    lam = np.diff(u, prepend=0.0, append=1.0)
    return SimplexPoint(lam)


def mixed_state_matrix(rng: RandomStream) -> np.ndarray:
    """Raw density matrix of a product-measure mixed draw (no validation).

    Draw order: Haar unitary first, then the simplex point.
    """
    u = haar_unitary(rng).matrix
    lam = simplex_point(rng).lambdas
    return (u * lam) @ u.conj().T


def pure_state_vector(rng: RandomStream) -> np.ndarray:
    """Raw Haar-uniform unit vector (no validation)."""
    while True:
        # draw order: one (2, 4) block of standard normals; real part first
        z = rng.generator.standard_normal((2, 4))
        v = z[0] + 1j * z[1]
        norm = np.linalg.norm(v)
        if norm > 0.0:
            return v / norm


def random_mixed_state(rng: RandomStream) -> DensityMatrix:
    """Mixed two-qubit state distributed per the product measure."""
    m = mixed_state_matrix(rng)
    return DensityMatrix(0.5 * (m + m.conj().T))


def random_pure_state(rng: RandomStream) -> PureState:
    """Haar-uniform pure two-qubit state."""
    return PureState(pure_state_vector(rng))
