"""Time evolution and the beating of superposed stationary states.

In the dimensionless time t' = f t / hbar the coefficients obey
dc_l/dt' = (i/f) [ -beta (c_{l+1} + c_{l-1} + 2 c_l) + nu |c_l|^2 c_l
+ f l c_l ], so a stationary state rotates as e^{i mu t'/f}.  Above
nu/f = 1 three states share a well j -- {j}, {j, j+1} and {j-1, j} -- and
their coherent sum on that well beats with the Bloch period 2 pi plus the
two nu/f-dependent periods T1 = 4 pi/(1 + nu/f) and T2 = 4 pi/(nu/f - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .anticontinuum import LatticeParams, SolutionSet, StationaryState, build_state
from .errors import ConfigurationError, DomainError, IntegrationError

BLOCH_PERIOD = 2.0 * math.pi

# Fixed-step classical RK4 is comfortably non-stiff at this resolution;
# conservation is checked a posteriori rather than enforced.
DEFAULT_DT = BLOCH_PERIOD / 2048

NORM_DRIFT_LIMIT = 1e-6


@dataclass(frozen=True)
class DynamicsTrace:
    """Uniformly sampled complex coefficient history with its quality ledger.

    norm_drift is max |sum |c|^2 - 1| over the trace; energy_drift is the
    max relative drift of the conserved energy functional.
    """

    times: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)
    window: tuple[int, int]
    norm_drift: float
    energy_drift: float

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def site_column(self, site: int) -> np.ndarray:
        lo, hi = self.window
        if not lo <= site <= hi:
            raise ConfigurationError(f"site {site} outside window {self.window}")
        return self.states[:, site - lo]


@dataclass(frozen=True)
class BeatingPrediction:
    """Amplitudes and periods of the three-state beating at ratio x."""

    x: float
    amplitudes: tuple[float, float, float]
    periods: tuple[float, float, float]

    @classmethod
    def for_ratio(cls, x) -> "BeatingPrediction":
        x = float(x)
        periods = beat_periods(x)
        half_over = 0.5 / x  # f/(2 nu)
        amplitudes = (1.0,
                      math.sqrt(0.5 + half_over),
                      math.sqrt(0.5 - half_over))
        return cls(x=x, amplitudes=amplitudes, periods=periods)


def beat_periods(x) -> tuple[float, float, float]:
    """(Bloch period 2 pi, T1 = 4 pi/(1+x), T2 = 4 pi/(x-1)); needs x > 1."""
    x = float(x)
    if not (math.isfinite(x) and x > 1.0):
        raise DomainError(f"beating needs nu/f > 1, got {x}")
    return (BLOCH_PERIOD, 4.0 * math.pi / (1.0 + x), 4.0 * math.pi / (x - 1.0))


def beating_profile(x, signs, t_prime):
    """Well amplitude q(t') of the three-state sum, common phase removed.

    q = s1 c1 e^{i x t'/2} + s2 c2 e^{i t'/2} + s3 c3 e^{-i t'/2} with the
    closed-form amplitudes c1 = 1, c2 = sqrt(1/2 + 1/(2x)),
    c3 = sqrt(1/2 - 1/(2x)).  Vectorized over t_prime.
    """
    pred = BeatingPrediction.for_ratio(x)
    s1, s2, s3 = _three_signs(signs)
    c1, c2, c3 = pred.amplitudes
    t = np.asarray(t_prime, dtype=float)
    q = (s1 * c1 * np.exp(0.5j * pred.x * t)
         + s2 * c2 * np.exp(0.5j * t)
         + s3 * c3 * np.exp(-0.5j * t))
    return complex(q) if np.isscalar(t_prime) else q


def _three_signs(signs) -> tuple[int, int, int]:
    if isinstance(signs, str):
        if len(signs) != 3 or not all(ch in "+-" for ch in signs):
            raise DomainError(f"need three '+'/'-' signs, got {signs!r}")
        return tuple(1 if ch == "+" else -1 for ch in signs)
    out = tuple(signs)
    if len(out) != 3 or not all(s in (1, -1) for s in out):
        raise DomainError(f"need three +-1 signs, got {signs!r}")
    return out


def energy_functional(c: np.ndarray, params: LatticeParams) -> float:
    """Conserved first integral: hopping + tilt + quartic on-site terms."""
    sites = params.window_sites
    hop = 2.0 * float(np.real(np.vdot(c[:-1], c[1:])))
    abs2 = np.abs(c) ** 2
    return float(-params.beta * (hop + 2.0 * np.sum(abs2))
                 + 0.5 * params.nu * np.sum(abs2 ** 2)
                 + params.f * np.sum(sites * abs2))


def evolve(initial, params: LatticeParams, t_end, dt: float = DEFAULT_DT
           ) -> DynamicsTrace:
    """Integrate the time-dependent lattice equation with fixed-step RK4.

    `initial` is a normalized complex vector over the window.  The trace is
    sampled every step; norm drift beyond 1e-6 raises IntegrationError
    (use a smaller dt).
    """
    t_end = float(t_end)
    dt = float(dt)
    if not (math.isfinite(t_end) and t_end > 0):
        raise DomainError(f"t_end must be positive, got {t_end}")
    if not (math.isfinite(dt) and 0 < dt <= t_end):
        raise DomainError(f"dt must satisfy 0 < dt <= t_end, got {dt}")
    c0 = np.asarray(initial, dtype=complex)
    if c0.shape != (params.window_size,):
        raise ConfigurationError(
            f"initial vector has {c0.size} entries, window holds "
            f"{params.window_size}"
        )
    if abs(np.sum(np.abs(c0) ** 2) - 1.0) > 1e-8:
        raise DomainError("initial vector must be normalized")

    sites = params.window_sites.astype(float)
    beta, nu, f = params.beta, params.nu, params.f
    prefactor = 1j / f

    def rhs(c):
        hop = np.zeros_like(c)
        hop[:-1] += c[1:]
        hop[1:] += c[:-1]
        return prefactor * (-beta * (hop + 2.0 * c)
                            + nu * np.abs(c) ** 2 * c + f * sites * c)

    n_steps = max(1, round(t_end / dt))
    times = np.arange(n_steps + 1) * dt
    states = np.empty((n_steps + 1, c0.size), dtype=complex)
    states[0] = c0
    c = c0.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n_steps + 1):
            k1 = rhs(c)
            k2 = rhs(c + 0.5 * dt * k1)
            k3 = rhs(c + 0.5 * dt * k2)
            k4 = rhs(c + dt * k3)
            c = c + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            states[k] = c

    with np.errstate(over="ignore", invalid="ignore"):
        abs2 = np.abs(states) ** 2
        norms = np.sum(abs2, axis=1)
        norm_drift = float(np.max(np.abs(norms - 1.0)))
        hops = 2.0 * np.real(np.sum(np.conj(states[:, :-1]) * states[:, 1:],
                                    axis=1))
        energies = (-beta * (hops + 2.0 * norms)
                    + 0.5 * nu * np.sum(abs2 ** 2, axis=1)
                    + f * abs2 @ sites)
        scale = max(abs(energies[0]), 1e-30)
        energy_drift = float(np.max(np.abs(energies - energies[0])) / scale)
    if not math.isfinite(norm_drift) or norm_drift > NORM_DRIFT_LIMIT:
        raise IntegrationError(
            f"norm drifted by {norm_drift:.3e} (> {NORM_DRIFT_LIMIT}); "
            f"reduce dt below {dt}"
        )
    return DynamicsTrace(times=times, states=states, window=params.window,
                         norm_drift=norm_drift, energy_drift=energy_drift)


def _well_states(x, j: int, params: LatticeParams) -> list[StationaryState]:
    """The three zero-hopping states sharing well j: {j}, {j, j+1}, {j-1, j}."""
    if abs(params.ratio - float(x)) > 1e-9 * max(1.0, abs(float(x))):
        raise DomainError(
            f"requested ratio {x} inconsistent with params nu/f = {params.ratio}"
        )
    if not float(x) > 1.0:
        raise DomainError(f"three states share a well only for nu/f > 1, got {x}")
    return [build_state(SolutionSet(s), params)
            for s in ((j,), (j, j + 1), (j - 1, j))]


def superposition_state(x, j: int, params: LatticeParams) -> np.ndarray:
    """Normalized coherent sum of the three all-plus states on well j."""
    states = _well_states(x, j, params)
    total = np.sum([s.coefficients for s in states], axis=0).astype(complex)
    return total / math.sqrt(float(np.sum(np.abs(total) ** 2)))


def beating_trace(x, j: int, params: LatticeParams, t_end,
                  dt: float = DEFAULT_DT) -> DynamicsTrace:
    """Beating observable: the three well-j states integrated separately
    under the full equation and summed coherently.

    A sum of stationary states is not itself a solution, so evolving the
    summed vector washes the beats out; the observable superposition keeps
    each state on its own exact orbit.  The drift ledger reports the worst
    of the three underlying integrations.
    """
    traces = [evolve(s.coefficients.astype(complex), params, t_end, dt)
              for s in _well_states(x, j, params)]
    summed = traces[0].states + traces[1].states + traces[2].states
    return DynamicsTrace(
        times=traces[0].times,
        states=summed,
        window=params.window,
        norm_drift=max(t.norm_drift for t in traces),
        energy_drift=max(t.energy_drift for t in traces),
    )


MIN_SPECTRUM_SAMPLES = 1 << 10

# A maximum below this fraction of the strongest non-DC peak is noise.
PEAK_FLOOR = 0.01


def spectrum(trace: DynamicsTrace, site: int) -> list[tuple[float, float]]:
    """Beat peaks of |c_site(t')|^2: (angular frequency, power), strongest first.

    Hann-windowed rfft of the site density; peaks are local maxima above
    1% of the strongest non-DC maximum.
    """
    signal = np.abs(trace.site_column(site)) ** 2
    n = signal.size
    if n < MIN_SPECTRUM_SAMPLES:
        raise DomainError(
            f"trace has {n} samples; spectrum needs >= {MIN_SPECTRUM_SAMPLES}"
        )
    steps = np.diff(trace.times)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise DomainError("spectrum needs a uniformly sampled trace")
    window = 0.5 - 0.5 * np.cos(2.0 * math.pi * np.arange(n) / n)
    # Detrend before windowing so the DC skirt cannot shadow slow beats;
    # the zero-frequency line is restored from the mean itself.
    mean = float(signal.mean())
    power = np.abs(np.fft.rfft(window * (signal - mean))) ** 2
    power[0] = (mean * float(window.sum())) ** 2
    freqs = 2.0 * math.pi * np.fft.rfftfreq(n, d=trace.dt)

    left = np.empty_like(power)
    right = np.empty_like(power)
    left[0], left[1:] = -np.inf, power[:-1]
    right[-1], right[:-1] = -np.inf, power[1:]
    is_max = (power > left) & (power > right)
    maxima = np.flatnonzero(is_max)
    # gate at double-precision noise relative to the strongest line, so a
    # numerically constant signal yields only its zero-frequency peak
    noise_gate = 1e-24 * float(power.max())
    non_dc = maxima[(maxima > 0) & (power[maxima] > noise_gate)]
    floor = max(PEAK_FLOOR * (power[non_dc].max() if non_dc.size else power[0]),
                noise_gate)
    peaks = [(float(freqs[i]), float(power[i])) for i in maxima
             if power[i] >= floor]
    peaks.sort(key=lambda fp: -fp[1])
    return peaks
