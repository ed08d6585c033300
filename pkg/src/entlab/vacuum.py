"""Two atoms prepared in ``cos(a)|ee> + sin(a)|gg>`` inside two vacuum cavities.

Each site only explores ``{|g,0>, |e,0>, |g,1>}``, so atoms and fields are
all qubits and the joint state lives in 16 dimensions. Times are
dimensionless, ``tau = g t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import jc
from .entm import Channel, XElements, concurrence_general, concurrence_x, q_factor
from .qcore import E, G, PAIRS, pair_reduce


@dataclass(frozen=True)
class VacuumScenario:
    bell_angle: float = math.pi / 4
    site: jc.SiteParams = field(default_factory=jc.SiteParams)

    def __post_init__(self):
        if not (-math.pi / 2 < self.bell_angle <= math.pi / 2):
            raise ValueError(f"bell_angle must lie in (-pi/2, pi/2], got {self.bell_angle}")


def _require_resonant(sc: VacuumScenario):
    if sc.site.delta != 0:
        raise ValueError("closed-form vacuum concurrence needs zero detuning")


def q_ab_closed(sc: VacuumScenario, tau):
    """``cos^2 a cos^2 tau (|tan a| - sin^2 tau)`` at resonance.

    Written as ``cos^2 tau (|sin a cos a| - cos^2 a sin^2 tau)`` so that
    ``a = pi/2`` needs no special handling of ``tan``.
    """
    _require_resonant(sc)
    a = sc.bell_angle
    tau = np.asarray(tau, dtype=float)
    cos2a = math.cos(a) ** 2
    if cos2a < 1e-30:
        q = np.zeros_like(tau)
    else:
        q = np.cos(tau) ** 2 * (abs(math.sin(a) * math.cos(a)) - cos2a * np.sin(tau) ** 2)
    return float(q) if q.ndim == 0 else q


def concurrence_ab_closed(sc: VacuumScenario, tau):
    q = q_ab_closed(sc, tau)
    c = 2.0 * np.maximum(0.0, q)
    return float(c) if np.ndim(c) == 0 else c


ALWAYS_SEPARABLE = (-math.inf, math.inf)


def esd_interval(bell_angle: float):
    """Dead interval of the atomic concurrence within the first Rabi period.

    Returns ``(tau_death, tau_rebirth)`` when the concurrence vanishes on a
    finite interval, ``None`` when it only touches zero at ``tau = pi/2``,
    and ``ALWAYS_SEPARABLE`` when the initial state is a product state.
    """
    s, c = math.sin(bell_angle), math.cos(bell_angle)
    if abs(s) < 1e-15 or abs(c) < 1e-15:
        return ALWAYS_SEPARABLE
    t = abs(s / c)
    if t >= 1.0 - 1e-12:  # tan(pi/4) rounds to just below 1
        return None
    death = math.asin(math.sqrt(t))
    return death, math.pi - death


def _site_amps(sc: VacuumScenario, tau):
    """Amplitudes of ``|e,0>`` and ``|g,1>`` reached from ``|e,0>``."""
    t = np.asarray(tau, dtype=float) / sc.site.g
    return jc.propagate_vacuum_block_detuned(1.0 + 0j, 0j, sc.site, t)


def evolve_fourqubit(sc: VacuumScenario, tau) -> np.ndarray:
    """Exact joint state at ``tau``, shape ``(2, 2, 2, 2)`` = (A, B, a, b).

    ``|g,0>`` is stationary, so only the ``cos(a)|e,0>|e,0>`` branch moves.
    """
    ae, ag = _site_amps(sc, tau)
    site = np.zeros((2, 2), dtype=complex)  # (atom, photon)
    site[E, 0] = ae
    site[G, 1] = ag
    phi = math.cos(sc.bell_angle) * np.einsum("ij,kl->ikjl", site, site)
    phi[G, G, 0, 0] += math.sin(sc.bell_angle)
    return phi


def x_elements_detuned(sc: VacuumScenario, tau) -> XElements:
    """X elements of the atomic state from the dressed-state formulas.

    The field-qubit projection ``<1,1|Phi>`` is not zero: it carries
    ``cos(a) (c s0 - s c0)^2 |gg>`` into ``rho_44``.
    """
    a = sc.bell_angle
    d = jc.dressed(1, sc.site)
    c0, s0 = d.c, d.s
    t = tau / sc.site.g
    lp = d.lambda_plus - sc.site.omega
    lm = d.lambda_minus - sc.site.omega
    stay = c0 * c0 * np.exp(-1j * lp * t) + s0 * s0 * np.exp(-1j * lm * t)
    delta_t = math.hypot(sc.site.delta, 2.0 * sc.site.g) * t
    keep = c0**4 + s0**4 + 2.0 * c0**2 * s0**2 * math.cos(delta_t)
    cos2 = math.cos(a) ** 2
    r11 = cos2 * keep * keep
    r22 = cos2 * keep * c0**2 * s0**2 * (2.0 - 2.0 * math.cos(delta_t))
    r44 = math.sin(a) ** 2 + cos2 * (1.0 - keep) ** 2
    coh = math.cos(a) * math.sin(a) * stay * stay
    # r22 = r33 by site symmetry
    return XElements(r11, r22, r22, r44, complex(coh), Channel.OUTER)


def all_pairwise(phi) -> dict[str, float]:
    return {pair: concurrence_general(pair_reduce(phi, pair)) for pair in PAIRS}


def vacuum_rows(sc: VacuumScenario, taus) -> dict[str, np.ndarray]:
    """Columns for a vacuum sweep: closed-form and brute-force ``C_AB``,
    the five other pair concurrences, and ``Q_AB``.

    Off resonance the "closed" column comes from the detuned X elements.
    """
    taus = np.asarray(taus, dtype=float)
    cols = {k: np.empty(taus.size) for k in
            ("C_AB_closed", "C_AB_brute", "C_ab", "C_Aa", "C_Bb", "C_Ab", "C_Ba", "Q_AB")}
    resonant = sc.site.delta == 0
    for i, tau in enumerate(taus):
        if resonant:
            cols["Q_AB"][i] = q_ab_closed(sc, tau)
            cols["C_AB_closed"][i] = 2.0 * max(0.0, cols["Q_AB"][i])
        else:
            x = x_elements_detuned(sc, tau)
            cols["Q_AB"][i] = q_factor(x)
            cols["C_AB_closed"][i] = concurrence_x(x)
        conc = all_pairwise(evolve_fourqubit(sc, tau))
        cols["C_AB_brute"][i] = conc["AB"]
        for pair in ("ab", "Aa", "Bb", "Ab", "Ba"):
            cols[f"C_{pair}"][i] = conc[pair]
    return {"tau": taus, **cols}
