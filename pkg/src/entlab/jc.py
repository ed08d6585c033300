"""Jaynes-Cummings spectrum and exact single-site propagators.

Evolution is ``exp(-i H t)`` in the interaction picture: the free phases
``n * omega`` and the bare atomic phases are dropped, which only multiplies
each site by local diagonal phases and leaves every concurrence unchanged.
Engine-facing functions take the dimensionless time ``tau = g * t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import E, G


@dataclass(frozen=True)
class SiteParams:
    g: float = 1.0
    delta: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"coupling g must be positive, got {self.g}")


@dataclass(frozen=True)
class DressedPair:
    lambda_plus: float
    lambda_minus: float
    theta: float
    c: float
    s: float


def rabi_freq(n: int, g: float) -> float:
    if n < 1:
        raise ValueError(f"Rabi frequency needs n >= 1, got {n}")
    return 2.0 * g * math.sqrt(n)


def dressed(n: int, p: SiteParams) -> DressedPair:
    """Dressed energies and mixing angle of the ``{|e, n-1>, |g, n>}`` manifold."""
    gn = rabi_freq(n, p.g)
    root = math.hypot(p.delta, gn)
    theta = math.atan2(gn, p.delta)
    return DressedPair(
        lambda_plus=n * p.omega + 0.5 * (p.delta + root),
        lambda_minus=n * p.omega + 0.5 * (p.delta - root),
        theta=theta,
        c=math.cos(theta / 2),
        s=math.sin(theta / 2),
    )


def propagate_site_resonant(atom: str, n: int, tau: float):
    """Resonant evolution of the bare state ``|atom; n>`` for a time ``tau = g t``.

    Returns a list of ``((atom, n), amplitude)`` components.
    """
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    if atom == "e":
        w = tau * math.sqrt(n + 1)
        return [(("e", n), complex(math.cos(w))), (("g", n + 1), -1j * math.sin(w))]
    if atom == "g":
        if n == 0:
            return [(("g", 0), 1.0 + 0j)]
        w = tau * math.sqrt(n)
        return [(("g", n), complex(math.cos(w))), (("e", n - 1), -1j * math.sin(w))]
    raise ValueError(f"atom must be 'e' or 'g', got {atom!r}")


def evolve_site_field(atom: int, field, tau) -> np.ndarray:
    """Resonant evolution of ``|atom> x sum_n field[n] |n>`` for one site.

    ``tau`` may be a scalar or an array; the result has shape
    ``tau.shape + (2, len(field) + 1)`` indexed by ``(atom, photon number)``.
    The last photon column only receives weight from ``|e, N>`` and is where
    truncation leakage shows up.
    """
    field = np.asarray(field)
    size = field.shape[-1]
    tau = np.asarray(tau, dtype=float)
    w = tau[..., None] * np.sqrt(np.arange(size + 1))
    cos_n, sin_n = np.cos(w), np.sin(w)
    out = np.zeros(tau.shape + (2, size + 1), dtype=complex)
    if atom == E:
        # |e, n> -> C_{n+1} |e, n> - i S_{n+1} |g, n+1>
        out[..., E, :size] = field * cos_n[..., 1:]
        out[..., G, 1:] = -1j * field * sin_n[..., 1:]
    elif atom == G:
        # |g, n> -> C_n |g, n> - i S_n |e, n-1>
        out[..., G, :size] = field * cos_n[..., :size]
        out[..., E, : size - 1] = -1j * field[1:] * sin_n[..., 1:size]
    else:
        raise ValueError(f"atom index must be {E} or {G}, got {atom}")
    return out


def propagate_vacuum_block_detuned(amp_e0, amp_g1, p: SiteParams, t: float):
    """Evolve ``amp_e0 |e,0> + amp_g1 |g,1>`` for a time ``t``.

    The state is decomposed on the n=1 dressed states, each picks up
    ``exp(-i lambda t)`` with ``lambda`` measured from ``omega``, and the
    result is returned in the bare basis.
    """
    d = dressed(1, p)
    c, s = d.c, d.s
    plus = c * amp_e0 + s * amp_g1
    minus = -s * amp_e0 + c * amp_g1
    plus = plus * np.exp(-1j * (d.lambda_plus - p.omega) * t)
    minus = minus * np.exp(-1j * (d.lambda_minus - p.omega) * t)
    return c * plus - s * minus, s * plus + c * minus
