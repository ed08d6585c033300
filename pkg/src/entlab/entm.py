"""Two-qubit entanglement measures: Wootters concurrence and the X-state Q factor."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .qcore import NonPhysicalStateError

_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SYSY = np.kron(_SY, _SY)

PHYSICAL_TOL = 1e-6
_NOISE_FLOOR = 1e-14


class Channel(enum.Enum):
    """Which anti-diagonal coherence an X state carries."""

    INNER = "inner"  # rho_23, |eg> <-> |ge>
    OUTER = "outer"  # rho_14, |ee> <-> |gg>


@dataclass(frozen=True)
class XElements:
    r11: float
    r22: float
    r33: float
    r44: float
    coh: complex
    channel: Channel = Channel.INNER

    def __post_init__(self):
        object.__setattr__(self, "channel", Channel(self.channel))
        diag = (self.r11, self.r22, self.r33, self.r44)
        if min(diag) < -1e-12:
            raise ValueError(f"negative population in {diag}")
        if abs(sum(diag) - 1.0) > 1e-10:
            raise ValueError(f"populations sum to {sum(diag)!r}, not 1")
        # Positivity of the X matrix: each coherence is bounded by the
        # geometric mean of the two populations it connects.
        if self.channel is Channel.INNER:
            bound = math.sqrt(max(self.r22 * self.r33, 0.0))
        else:
            bound = math.sqrt(max(self.r11 * self.r44, 0.0))
        if abs(self.coh) > bound + 1e-9:
            raise ValueError(f"|coh| = {abs(self.coh):.6g} exceeds positivity bound {bound:.6g}")

    def to_matrix(self) -> np.ndarray:
        rho = np.diag(np.array([self.r11, self.r22, self.r33, self.r44], dtype=complex))
        i, j = (1, 2) if self.channel is Channel.INNER else (0, 3)
        rho[i, j] = self.coh
        rho[j, i] = np.conj(self.coh)
        return rho

    @classmethod
    def from_matrix(cls, rho, channel=Channel.INNER) -> "XElements":
        rho = np.asarray(rho)
        channel = Channel(channel)
        i, j = (1, 2) if channel is Channel.INNER else (0, 3)
        r = np.real(np.diag(rho))
        return cls(float(r[0]), float(r[1]), float(r[2]), float(r[3]), complex(rho[i, j]), channel)


def concurrence_general(rho):
    """Wootters concurrence of a two-qubit density matrix.

    Accepts a single 4x4 matrix or a stack of shape ``(..., 4, 4)``.

    The square roots of the eigenvalues of ``rho (sy x sy) rho* (sy x sy)``
    are the singular values of ``sqrt(rho) (sy x sy) sqrt(rho)*``, whose
    product with its adjoint is the Hermitian matrix
    ``sqrt(rho) (sy x sy) rho* (sy x sy) sqrt(rho)``. Taking singular values
    directly keeps the result accurate near rank-deficient states, where
    square roots of eigenvalues would turn rounding noise of order 1e-17
    into errors of order 1e-9. Eigenvalues of ``rho`` below ``1e-14`` of its
    largest one are likewise treated as zero before the square root.

    Raises
    ------
    NonPhysicalStateError
        If ``rho`` has an eigenvalue below ``-1e-6``.
    """
    rho = np.asarray(rho, dtype=complex)
    herm = 0.5 * (rho + np.swapaxes(rho.conj(), -1, -2))
    w, v = np.linalg.eigh(herm)
    if np.min(w) < -PHYSICAL_TOL:
        raise NonPhysicalStateError("density matrix has eigenvalues below -1e-6")
    # eigh leaves zero eigenvalues at +-1e-16; their square roots would
    # leak 1e-8 errors into the result, so treat them as exact zeros.
    floor = _NOISE_FLOOR * np.max(np.abs(w), axis=-1, keepdims=True)
    w = np.where(w > floor, w, 0.0)
    root = (v * np.sqrt(w)[..., None, :]) @ np.swapaxes(v.conj(), -1, -2)
    s = np.linalg.svd(root @ SYSY @ root.conj(), compute_uv=False)
    c = s[..., 0] - s[..., 1] - s[..., 2] - s[..., 3]
    c = np.clip(c, 0.0, 1.0)
    return float(c) if c.ndim == 0 else c


def q_factor(x: XElements) -> float:
    """Signed entanglement indicator of an X state for its own channel.

    Negative values certify a separable, mixed state.
    """
    if x.channel is Channel.INNER:
        return abs(x.coh) - math.sqrt(max(x.r11 * x.r44, 0.0))
    return abs(x.coh) - math.sqrt(max(x.r22 * x.r33, 0.0))


def concurrence_x(x: XElements) -> float:
    return 2.0 * max(0.0, q_factor(x))


def x_projection(rho) -> np.ndarray:
    """Zero every entry of ``rho`` off the diagonal and anti-diagonal."""
    rho = np.asarray(rho, dtype=complex)
    mask = np.eye(4, dtype=bool) | np.eye(4, dtype=bool)[::-1]
    return np.where(mask, rho, 0.0)


def q_of_matrix(rho):
    """Larger of the two channel Q values of the X part of ``rho``.

    Works on single matrices and on stacks.
    """
    rho = np.asarray(rho)
    d = np.clip(np.real(np.diagonal(rho, axis1=-2, axis2=-1)), 0.0, None)
    q_inner = np.abs(rho[..., 1, 2]) - np.sqrt(d[..., 0] * d[..., 3])
    q_outer = np.abs(rho[..., 0, 3]) - np.sqrt(d[..., 1] * d[..., 2])
    q = np.maximum(q_inner, q_outer)
    return float(q) if q.ndim == 0 else q
