"""Large-photon-number formulas for the coherently driven atom pair.

The atomic X state is controlled by four Poisson-weighted sums

    S1 + i S2 = sum_n A_n^2 exp(i tau / (2 sqrt n))
    S3 + i S4 = sum_n A_n^2 exp(2 i tau sqrt n)

and ``rho23 - sqrt(rho11 rho44) ~ (S1^2 + S2^2 + 2 S3^2 - 2 S4^2 - 1) / 4``.
Saddle-point evaluation of the sums as integrals over ``n`` gives ``i12``
and ``i34``. All functions accept scalar or array ``tau``.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .coherent import choose_cutoff, poisson_amplitudes

VARIANTS = ("reconciled", "literal_half", "literal_full")


def _out(x):
    return x.item() if np.ndim(x) == 0 else x


def default_kmax(tau_max: float, coherent_amp: float) -> int:
    return math.ceil(tau_max / (2 * math.pi * coherent_amp)) + 1


def _check_amp(coherent_amp, minimum):
    if coherent_amp < minimum:
        raise ValueError(f"coherent_amp must be >= {minimum}, got {coherent_amp}")
    if coherent_amp < 10:
        warnings.warn(
            f"saddle-point formulas are only accurate for large fields (coherent_amp={coherent_amp})",
            stacklevel=3,
        )


def i12(tau, coherent_amp: float):
    """Saddle-point value of ``sum_n A_n^2 exp(i tau / (2 sqrt n))``."""
    if coherent_amp < 1:
        raise ValueError(f"coherent_amp must be >= 1, got {coherent_amp}")
    tau = np.asarray(tau, dtype=float)
    a = coherent_amp
    return _out(np.exp(-(tau**2) / (32 * a**4)) * np.exp(1j * tau / (2 * a)))


def _revival_terms(tau, a, kmax):
    """Real revival contributions of ``i34``, one row per ``k = 1..kmax``."""
    k = np.arange(1, kmax + 1).reshape((-1,) + (1,) * tau.ndim)
    shift = tau - 2 * np.pi * k * a
    return (
        np.sqrt(1.0 / (np.pi * k))
        * np.exp(-(shift**2) / (1 + np.pi**2 * k**2))
        * np.cos(2 * a * shift)
    )


def _collapse_term(tau, a):
    return np.exp(-(tau**2) / 2) * np.exp(2j * a * tau)


def i34(tau, coherent_amp: float, kmax: int | None = None):
    """Saddle-point value of ``sum_n A_n^2 exp(2 i tau sqrt n)``.

    A complex ``k = 0`` term plus real revival terms centred on
    ``tau = 2 pi k a`` for ``k = 1..kmax``.
    """
    if coherent_amp < 1:
        raise ValueError(f"coherent_amp must be >= 1, got {coherent_amp}")
    tau = np.asarray(tau, dtype=float)
    a = coherent_amp
    if kmax is None:
        kmax = default_kmax(float(np.max(np.abs(tau))), a)
    total = _collapse_term(tau, a) + _revival_terms(tau, a, kmax).sum(axis=0)
    return _out(total)


def lambda_from_sums(s1, s2, s3, s4):
    """Assemble ``rho23 - sqrt(rho11 rho44)`` from the four sums."""
    return 0.25 * (s1**2 + s2**2 + 2 * s3**2 - 2 * s4**2 - 1)


def lambda_approx(tau, coherent_amp: float, kmax: int | None = None, variant: str = "reconciled"):
    """Approximate ``rho23 - sqrt(rho11 rho44)`` of the atomic X state.

    ``variant="reconciled"`` squares ``i34`` term by term, dropping products
    of different revivals; it returns exactly 1/2 at ``tau = 0``.
    ``"literal_half"`` and ``"literal_full"`` keep an uncorrected closed form
    whose fast term decays as ``exp(-tau^2/2)`` or ``exp(-tau^2)``, for
    comparison only; both give 1/4 at ``tau = 0``.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    _check_amp(coherent_amp, 3)
    tau = np.asarray(tau, dtype=float)
    a = coherent_amp
    if kmax is None:
        kmax = default_kmax(float(np.max(np.abs(tau))), a)
    collapse = np.exp(-(tau**2) / (16 * a**4)) - 1
    if variant == "reconciled":
        square = np.real(_collapse_term(tau, a) ** 2) + (_revival_terms(tau, a, kmax) ** 2).sum(axis=0)
        return _out(0.25 * (collapse + 2 * square))

    k = np.arange(1, kmax + 1).reshape((-1,) + (1,) * tau.ndim)
    shift = tau - 2 * np.pi * k * a
    bumps = (
        np.exp(-2 * shift**2 / (1 + np.pi**2 * k**2)) * np.cos(4 * a * shift) / (2 * np.pi * k)
    ).sum(axis=0)
    width = 0.5 if variant == "literal_half" else 1.0
    fast = np.exp(-(tau**2) * width) * np.cos(4 * a * tau)
    return _out(0.25 * (collapse + fast) + bumps)


def concurrence_approx(tau, coherent_amp: float, kmax: int | None = None, variant: str = "reconciled"):
    lam = lambda_approx(tau, coherent_amp, kmax, variant)
    return _out(2 * np.maximum(0.0, lam))


def envelope(k: int, coherent_amp: float) -> float:
    """Peak concurrence of revival ``k``; negative when the revival is
    swamped by the slow collapse term (see ``envelope_clamped``)."""
    if k < 1:
        raise ValueError(f"revival index must be >= 1, got {k}")
    a = coherent_amp
    tau = 2 * math.pi * k * a
    return 1 / (math.pi * k) - (1 - math.exp(-(tau**2) / (16 * a**4))) / 2


def envelope_clamped(k: int, coherent_amp: float) -> float:
    return max(0.0, envelope(k, coherent_amp))


def discrete_sums(tau, coherent_amp: float, cutoff: int | None = None):
    """The four Poisson-weighted sums, evaluated directly.

    Returns ``(S1, S2, S3, S4)``. The ``n = 0`` term of ``S1``/``S2`` is left
    out; its weight is ``exp(-a^2)``.
    """
    a = coherent_amp
    if cutoff is None:
        cutoff = choose_cutoff(a * a)
    w = poisson_amplitudes(a, cutoff).A ** 2
    tau = np.asarray(tau, dtype=float)
    root = np.sqrt(np.arange(cutoff + 1))
    slow = tau[..., None] / (2 * root[1:])
    fast = 2 * tau[..., None] * root
    s1 = np.cos(slow) @ w[1:]
    s2 = np.sin(slow) @ w[1:]
    s3 = np.cos(fast) @ w
    s4 = np.sin(fast) @ w
    return _out(s1), _out(s2), _out(s3), _out(s4)
