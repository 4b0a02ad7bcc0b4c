"""Two-qubit state representations and the partial-transpose separability test.

Basis ordering throughout is |00>, |01>, |10>, |11>, with the first (left)
qubit acting as control for the CNOT gate and target of the Hadamard.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .linalg import HERMITIAN_TOL, as_matrix, max_abs

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_FLOOR = -1e-10
PPT_THRESHOLD = 1e-9


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector (a, b, c, d) over |00>, |01>, |10>, |11>."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.shape != (4,):
            raise UsageError(f"pure state needs 4 amplitudes, got {amp.shape}")
        if not (np.all(np.isfinite(amp.real)) and np.all(np.isfinite(amp.imag))):
            raise UsageError("pure state contains non-finite amplitudes")
        if abs(np.linalg.norm(amp) - 1.0) > NORM_TOL:
            raise UsageError(f"pure state norm {np.linalg.norm(amp):.12f} != 1")
        object.__setattr__(self, "amplitudes", amp)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated 4x4 density matrix: Hermitian, unit trace, PSD."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, dim=4)
        if max_abs(m - m.conj().T) > HERMITIAN_TOL:
            raise UsageError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise UsageError(f"density matrix trace {np.trace(m):.12f} != 1")
        if np.linalg.eigvalsh(m).min() < EIG_FLOOR:
            raise UsageError("density matrix has a negative eigenvalue beyond tolerance")
        object.__setattr__(self, "matrix", m)


def ket(bits: str) -> PureState:
    """Computational basis state from a two-character bit string, e.g. '01'."""
    if len(bits) != 2 or any(b not in "01" for b in bits):
        raise UsageError(f"expected a 2-bit string, got {bits!r}")
    amp = np.zeros(4, dtype=complex)
    amp[int(bits, 2)] = 1.0
    return PureState(amp)


def densify(psi: PureState) -> DensityMatrix:
    """Rank-1 projector |psi><psi|."""
    amp = psi.amplitudes
    return DensityMatrix(np.outer(amp, amp.conj()))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2), in [1/4, 1]: 1 for pure states, 1/4 for maximally mixed."""
    m = rho.matrix
    return float(np.trace(m @ m).real)


def partial_transpose(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """Transpose the second qubit's indices: entry (ij),(kl) -> (il),(kj).

    The result is Hermitian but generally not PSD, so it is returned as a
    plain matrix. Accepts a raw 4x4 array as well, which makes the
    involution property directly expressible.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else as_matrix(rho, dim=4)
    return m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def is_entangled_ppt(rho: DensityMatrix) -> bool:
    """Peres-Horodecki test, exact for two qubits: entangled iff the partial
    transpose has an eigenvalue below -1e-9."""
    return bool(np.linalg.eigvalsh(partial_transpose(rho)).min() < -PPT_THRESHOLD)
