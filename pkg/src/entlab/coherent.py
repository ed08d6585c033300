"""Entangled atom pair driven by two equal coherent fields, solved exactly.

The initial state is ``(|eg> + |ge>)/sqrt(2)`` (or ``cos b |ee> + sin b |gg>``)
times ``|alpha> x |alpha>``. At resonance every ``{|e,n>, |g,n+1>}`` block
rotates independently, so the state at any ``tau = g t`` is written down
directly; no time stepping is involved and grid points are independent.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .entm import concurrence_general, q_of_matrix, x_projection
from .jc import evolve_site_field
from .qcore import E, G, JointAmplitudeTensor, TruncationError
from .timeseries import TimeSeries

LEAKAGE_LIMIT = 1e-8
DEFAULT_TAIL = 1e-12
CHUNK = 256

BELL_STATES = ("psi_plus", "phi")


def cutoff_floor(nbar: float) -> int:
    return math.ceil(nbar + 6.0 * math.sqrt(nbar))


def _log_poisson(nbar: float, nmax: int) -> np.ndarray:
    """``log p_n`` for ``n = 0..nmax`` by the upward recursion
    ``p_{n+1} = p_n nbar / (n + 1)``, kept in log space so large ``nbar``
    does not underflow ``p_0``."""
    steps = math.log(nbar) - np.log(np.arange(1, nmax + 1))
    return np.concatenate(([-nbar], -nbar + np.cumsum(steps)))


def choose_cutoff(nbar: float, eps: float = DEFAULT_TAIL) -> int:
    """Smallest ``N`` whose Poisson tail mass above ``N`` is below ``eps``,
    never less than ``nbar + 6 sqrt(nbar)``."""
    if not nbar > 0:
        raise ValueError(f"mean photon number must be positive, got {nbar}")
    if not 0 < eps < 1:
        raise ValueError(f"tail tolerance must lie in (0, 1), got {eps}")
    nmax = int(nbar + 40.0 * math.sqrt(nbar) + 60)
    while True:
        logp = _log_poisson(nbar, nmax)
        if logp[-1] < math.log(eps) - 50:
            break
        nmax *= 2
    p = np.exp(logp)
    # tail[N] = sum_{n > N} p_n, accumulated from the far end for accuracy
    tail = np.concatenate((np.cumsum(p[::-1])[::-1][1:], [0.0]))
    n_eps = int(np.argmax(tail < eps))
    return max(n_eps, cutoff_floor(nbar))


@dataclass(frozen=True)
class PoissonAmps:
    A: np.ndarray
    mass_defect: float


def poisson_amplitudes(coherent_amp: float, cutoff: int, eps: float = DEFAULT_TAIL) -> PoissonAmps:
    """Fock amplitudes ``A_n = exp(-a^2/2) a^n / sqrt(n!)`` of a real coherent state."""
    if coherent_amp < 0:
        raise ValueError("coherent amplitude is taken real and non-negative")
    if coherent_amp == 0:
        a = np.zeros(cutoff + 1)
        a[0] = 1.0
        return PoissonAmps(a, 0.0)
    a = np.exp(0.5 * _log_poisson(coherent_amp**2, cutoff))
    defect = float(1.0 - np.sum(a * a))
    if defect > eps:
        warnings.warn(
            f"coherent-state mass defect {defect:.3e} exceeds {eps:g} at cutoff {cutoff}",
            stacklevel=2,
        )
    return PoissonAmps(a, defect)


@dataclass(frozen=True)
class CoherentScenario:
    """Engine configuration.

    ``cutoff=None`` picks the photon cutoff from ``tail_tolerance``; an
    explicit value is used as given, below the usual floor if need be.
    ``bell_angle`` only applies to ``bell_state="phi"``.
    """

    coherent_amp: float = 10.0
    bell_state: str = "psi_plus"
    bell_angle: float = math.pi / 4
    cutoff: int | None = None
    tail_tolerance: float = DEFAULT_TAIL
    amps: PoissonAmps = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.coherent_amp > 0:
            raise ValueError(f"coherent_amp must be positive, got {self.coherent_amp}")
        if self.bell_state not in BELL_STATES:
            raise ValueError(f"bell_state must be one of {BELL_STATES}, got {self.bell_state!r}")
        if self.cutoff is None:
            object.__setattr__(self, "cutoff", choose_cutoff(self.nbar, self.tail_tolerance))
        elif self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        object.__setattr__(
            self, "amps", poisson_amplitudes(self.coherent_amp, self.cutoff, self.tail_tolerance)
        )

    @property
    def nbar(self) -> float:
        return self.coherent_amp**2

    def atomic_coeffs(self) -> np.ndarray:
        """Initial atomic amplitudes ``c[atom_A, atom_B]``."""
        c = np.zeros((2, 2))
        if self.bell_state == "psi_plus":
            c[E, G] = c[G, E] = 1.0 / math.sqrt(2.0)
        else:
            c[E, E] = math.cos(self.bell_angle)
            c[G, G] = math.sin(self.bell_angle)
        return c


def _site_vectors(sc: CoherentScenario, tau) -> np.ndarray:
    """Evolved single-site states for each initial atomic level.

    Shape ``tau.shape + (2, 2, N + 2)``: (initial atom, atom, photon).
    """
    a = sc.amps.A
    return np.stack([evolve_site_field(E, a, tau), evolve_site_field(G, a, tau)], axis=-3)


def _check_leakage(leak):
    worst = float(np.max(leak))
    if worst > LEAKAGE_LIMIT:
        raise TruncationError(
            f"truncation leakage {worst:.3e} exceeds {LEAKAGE_LIMIT:g}; raise the cutoff"
        )


def evolve_exact(sc: CoherentScenario, tau: float) -> JointAmplitudeTensor:
    """Joint atom-field amplitudes at ``tau``, truncated at the cutoff.

    Weight pushed into photon number ``N + 1`` is dropped and reported as
    ``leakage``.
    """
    x = _site_vectors(sc, float(tau))
    c = sc.atomic_coeffs()
    full = np.einsum("uv,usn,vpm->spnm", c, x, x)
    n = sc.cutoff + 1
    amps = full[:, :, :n, :n]
    leak = max(0.0, float(np.vdot(full, full).real - np.vdot(amps, amps).real))
    _check_leakage(leak)
    return JointAmplitudeTensor(amps, leak)


def reduced_density(sc: CoherentScenario, taus):
    """Atomic density matrices on a batch of times without building the
    joint tensor.

    Because the state is a sum of products of single-site vectors, the
    field trace reduces to 2x2 overlap matrices per site. Returns
    ``(rho, leakage)`` with shapes ``(T, 4, 4)`` and ``(T,)``.
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    x = _site_vectors(sc, taus)
    c = sc.atomic_coeffs()
    n = sc.cutoff + 1

    def trace_out(v):
        gram = np.einsum("tusn,tvrn->tuvsr", v, v.conj())
        rho = np.einsum("uv,wx,tuwsr,tvxpq->tsprq", c, c, gram, gram)
        return rho.reshape(-1, 4, 4)

    rho = trace_out(x[..., :n])
    full_trace = np.real(np.trace(trace_out(x), axis1=1, axis2=2))
    leak = np.clip(full_trace - np.real(np.trace(rho, axis1=1, axis2=2)), 0.0, None)
    return rho, leak


class XSeries(NamedTuple):
    rho23: float
    rho11: float
    rho44: float


def x_elements_series(sc: CoherentScenario, tau: float) -> XSeries:
    """``rho_23``, ``rho_11``, ``rho_44`` from the truncated double sums.

    Each sum runs over ``0 <= n, m <= N`` with ``A_k = 0`` outside that
    range; the sums are evaluated term by term as outer products.
    """
    if sc.bell_state != "psi_plus":
        raise ValueError("the element series are written for the psi_plus initial state")
    N = sc.cutoff
    pad = 2
    A = np.zeros(N + 1 + 2 * pad + 1)
    A[pad : pad + N + 1] = sc.amps.A
    k = np.arange(-pad, N + pad + 2)
    root = np.sqrt(np.clip(k, 0, None))
    Cc = np.where(k >= 0, np.cos(tau * root), 0.0)
    Ss = np.where(k >= 0, np.sin(tau * root), 0.0)
    n = np.arange(N + 1)
    i = n + pad  # array position of index n

    def at(arr, shift):
        return arr[i + shift]

    def dsum(f, g):
        return float(np.outer(f, g).sum())

    A0, Am1, Ap1, Am2, Ap2 = at(A, 0), at(A, -1), at(A, 1), at(A, -2), at(A, 2)
    C0, Cp1, Cm1, Cp2 = at(Cc, 0), at(Cc, 1), at(Cc, -1), at(Cc, 2)
    S0, Sp1, Sm1, Sp2 = at(Ss, 0), at(Ss, 1), at(Ss, -1), at(Ss, 2)

    z = 0.5 * (
        dsum(A0**2 * C0 * Cp1, A0**2 * C0 * Cp1)
        - dsum(A0 * Am1 * S0 * Cp1, A0 * Ap1 * C0 * Sp1)
        + dsum(A0 * Am2 * S0 * Sm1, A0 * Ap2 * Sp1 * Sp2)
        - dsum(A0 * Am1 * S0 * Cm1, A0 * Ap1 * Sp1 * Cp2)
    )
    cross = (
        dsum(A0 * Ap1 * Sp1 * Cp1, A0 * Am1 * S0 * C0)
        + dsum(A0 * Am1 * S0 * C0, A0 * Ap1 * Sp1 * Cp1)
    )
    a = 0.5 * (
        dsum(A0**2 * Cp1**2, A0**2 * S0**2)
        + dsum(A0**2 * S0**2, A0**2 * Cp1**2)
        + cross
    )
    d = 0.5 * (
        dsum(A0**2 * Sp1**2, A0**2 * C0**2)
        + dsum(A0**2 * C0**2, A0**2 * Sp1**2)
        + cross
    )
    return XSeries(z, a, d)


def resolve_threads(threads=None) -> int:
    """Worker count: ``ENTLAB_THREADS`` wins over the argument; ``"auto"``
    or ``None`` means one per CPU."""
    env = os.environ.get("ENTLAB_THREADS")
    if env:
        threads = env
    if threads in (None, "auto"):
        return os.cpu_count() or 1
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def _chunk_columns(sc: CoherentScenario, taus: np.ndarray) -> dict[str, np.ndarray]:
    rho, leak = reduced_density(sc, taus)
    _check_leakage(leak)
    xrho = x_projection(rho)
    return {
        "C_full": np.atleast_1d(concurrence_general(rho)),
        "C_xproj": np.atleast_1d(concurrence_general(xrho)),
        "Q_xproj": np.atleast_1d(q_of_matrix(rho)),
        "rho23": np.real(rho[:, 1, 2]),
        "rho11": np.real(rho[:, 0, 0]),
        "rho44": np.real(rho[:, 3, 3]),
        "leakage": leak,
    }


def concurrence_timeseries(sc: CoherentScenario, grid, threads=1, with_elements=False) -> TimeSeries:
    """Exact concurrence of the full reduced state and of its X projection.

    Grid points are processed in fixed-size chunks (independent of the
    thread count) so the output is bit-identical for any ``threads``.
    """
    taus = np.asarray(grid, dtype=float)
    if taus.ndim != 1 or taus.size == 0:
        raise ValueError("grid must be a non-empty 1-D sequence")
    if np.any(np.diff(taus) < 0):
        raise ValueError("grid must be monotone non-decreasing")
    chunks = [taus[i : i + CHUNK] for i in range(0, taus.size, CHUNK)]
    workers = resolve_threads(threads)
    if workers == 1 or len(chunks) == 1:
        parts = [_chunk_columns(sc, ch) for ch in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ch: _chunk_columns(sc, ch), chunks))
    names = ["C_full", "C_xproj", "Q_xproj"]
    if with_elements:
        names += ["rho23", "rho11", "rho44"]
    names.append("leakage")
    cols = {"tau": taus}
    for name in names:
        cols[name] = np.concatenate([p[name] for p in parts])
    return TimeSeries.from_columns(cols)
