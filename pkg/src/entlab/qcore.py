"""Dense state containers, partial traces and density-matrix checks.

Basis conventions (shared by every engine in the package):

* Atomic qubits: index 0 is the excited state ``e``, index 1 the ground
  state ``g``.
* Two-qubit density matrices use the ordering ``[ee, eg, ge, gg]``, i.e. the
  Kronecker product of the first and second qubit with the first qubit as
  the slow index.
* Field modes restricted to zero or one photon (vacuum engine) are indexed
  by photon number, so index 0 is the vacuum.
* Four-qubit pure states are arrays of shape ``(2, 2, 2, 2)`` indexed as
  ``(atom_A, atom_B, photon_a, photon_b)``.
* Joint atom-field amplitudes for the coherent-state engine are arrays of
  shape ``(2, 2, N + 1, N + 1)`` indexed as ``(atom_A, atom_B, n, m)``; the
  photon numbers are the fastest indices of the contiguous buffer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

E, G = 0, 1
BASIS = ("ee", "eg", "ge", "gg")

NORM_TOL = 1e-10
TRUNCATION_FLAG = 1e-6
EIG_CLAMP = 1e-9

# Positions of (atom_A, atom_B, photon_a, photon_b) in a four-qubit state.
_SLOT = {"A": 0, "B": 1, "a": 2, "b": 3}
PAIRS = ("AB", "ab", "Aa", "Bb", "Ab", "Ba")


class TruncationError(RuntimeError):
    """Raised when a truncated Fock representation has lost too much norm."""


class NonPhysicalStateError(ValueError):
    """Raised when a density matrix is too far from positive semidefinite."""


@dataclass(frozen=True)
class JointAmplitudeTensor:
    """Pure state of two atoms and two truncated field modes.

    ``leakage`` is the probability weight that the evolution pushed above the
    photon cutoff and that was discarded.
    """

    amps: np.ndarray
    leakage: float = 0.0

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amps, dtype=complex)
        if amps.ndim != 4 or amps.shape[:2] != (2, 2) or amps.shape[2] != amps.shape[3]:
            raise ValueError(f"expected shape (2, 2, N+1, N+1), got {amps.shape}")
        object.__setattr__(self, "amps", amps)

    @property
    def cutoff(self) -> int:
        return self.amps.shape[2] - 1

    def norm(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


@dataclass(frozen=True)
class DensityDiagnostics:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    def ok(self, tol: float = NORM_TOL, eig_tol: float = EIG_CLAMP) -> bool:
        return (
            self.hermiticity_defect <= tol
            and self.trace_defect <= tol
            and self.min_eigenvalue >= -eig_tol
        )


def validate_density(rho) -> DensityDiagnostics:
    """Report how far ``rho`` is from a valid density matrix.

    Never raises on physically bad input; callers pick their own thresholds.
    Eigenvalues are taken from the Hermitian part, and small negative values
    above ``-EIG_CLAMP`` are reported as zero.
    """
    rho = np.asarray(rho, dtype=complex)
    herm = float(np.max(np.abs(rho - rho.conj().T))) if rho.size else 0.0
    trace_defect = float(abs(np.trace(rho) - 1.0))
    evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    min_eig = float(evals[0])
    if -EIG_CLAMP < min_eig < 0.0:
        min_eig = 0.0
    return DensityDiagnostics(herm, trace_defect, min_eig)


def partial_trace_fields(psi: JointAmplitudeTensor) -> np.ndarray:
    """Trace both field modes out of a joint atom-field pure state.

    Returns the 4x4 atomic density matrix in the ``[ee, eg, ge, gg]`` basis.
    """
    if psi.cutoff < 1:
        raise ValueError(f"photon cutoff must be >= 1, got {psi.cutoff}")
    deficit = abs(1.0 - psi.norm())
    if deficit > TRUNCATION_FLAG:
        raise TruncationError(
            f"state norm deficit {deficit:.3e} exceeds {TRUNCATION_FLAG:g}; "
            "raise the photon cutoff"
        )
    m = psi.amps.reshape(4, -1)
    return m @ m.conj().T


def as_pure_state16(phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=complex)
    if phi.size != 16:
        raise ValueError(f"four-qubit state needs 16 amplitudes, got {phi.size}")
    phi = phi.reshape(2, 2, 2, 2)
    deficit = abs(1.0 - float(np.vdot(phi, phi).real))
    if deficit > NORM_TOL:
        raise ValueError(f"four-qubit state not normalized (deficit {deficit:.3e})")
    return phi


def pair_reduce(phi, pair: str) -> np.ndarray:
    """Reduced density matrix of two of the four qubits ``A, B, a, b``.

    ``pair`` names the kept qubits in order, e.g. ``"Ab"`` keeps atom A as
    the first qubit and field b as the second.
    """
    if pair not in PAIRS:
        raise ValueError(f"unknown pair {pair!r}; expected one of {PAIRS}")
    phi = as_pure_state16(phi)
    keep = [_SLOT[pair[0]], _SLOT[pair[1]]]
    rest = [k for k in range(4) if k not in keep]
    m = np.transpose(phi, keep + rest).reshape(4, 4)
    return m @ m.conj().T


def swap_sites(phi) -> np.ndarray:
    """Exchange site A/a with site B/b in a four-qubit state."""
    phi = np.asarray(phi, dtype=complex).reshape(2, 2, 2, 2)
    return np.transpose(phi, (1, 0, 3, 2)).copy()


def ket(*labels: str) -> np.ndarray:
    """Two-qubit basis ket from atomic labels, e.g. ``ket("e", "g")``."""
    v = np.zeros(4, dtype=complex)
    v[BASIS.index("".join(labels))] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())
