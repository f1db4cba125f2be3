import math

import numpy as np
import pytest

from starktree import (
    BLOCH_PERIOD,
    BeatingPrediction,
    DomainError,
    DynamicsTrace,
    IntegrationError,
    LatticeParams,
    SolutionSet,
    beat_periods,
    beating_profile,
    beating_trace,
    build_state,
    continue_in_beta,
    enumerate_solution_sets,
    evolve,
    spectrum,
    superposition_state,
)

WINDOW = (-6, 6)


def beating_params(x, nu=0.05, beta=0.0):
    return LatticeParams(nu=nu, f=nu / x, beta=beta, window=WINDOW)


def trace_from_series(times, values):
    """Wrap a scalar complex series as a one-site trace for spectrum tests."""
    states = np.asarray(values, dtype=complex).reshape(-1, 1)
    norms = np.abs(states[:, 0]) ** 2
    return DynamicsTrace(times=np.asarray(times, dtype=float), states=states,
                         window=(0, 0),
                         norm_drift=float(np.max(np.abs(norms - 1.0))),
                         energy_drift=0.0)


# ---------------------------------------------------------------------------
# beat periods and profile


def test_beat_periods_reference_values():
    two_pi = 2.0 * math.pi
    assert beat_periods(1.5) == pytest.approx(
        (two_pi, 8.0 * math.pi / 5.0, 8.0 * math.pi), rel=1e-15)
    assert beat_periods(3.0) == pytest.approx((two_pi, math.pi, two_pi), rel=1e-15)


def test_beat_period_divergence_near_one():
    x = 1.0 + 1e-5  # below the 4 pi 1e-6 scale, T2 blows past 1e6
    assert beat_periods(x)[2] > 1e6


def test_beat_periods_domain():
    for bad in (1.0, 0.5, -2.0):
        with pytest.raises(DomainError):
            beat_periods(bad)


def test_beating_profile_at_zero():
    q0 = beating_profile(1.5, "+++", 0.0)
    expected = 1.0 + math.sqrt(5.0 / 6.0) + math.sqrt(1.0 / 6.0)
    assert q0 == pytest.approx(expected, rel=1e-14)
    assert isinstance(q0, complex)


def test_beating_profile_pairwise_realignment():
    # each two-state pair is periodic with its own beat period
    x = 1.5
    pred = BeatingPrediction.for_ratio(x)
    c1, c2, c3 = pred.amplitudes
    _, t1, t2 = pred.periods
    t = np.linspace(0.0, 12.0, 7)

    pair_13 = np.abs(c1 * np.exp(0.5j * x * t) + c3 * np.exp(-0.5j * t))
    pair_13_shifted = np.abs(c1 * np.exp(0.5j * x * (t + t1))
                             + c3 * np.exp(-0.5j * (t + t1)))
    assert np.allclose(pair_13, pair_13_shifted, atol=1e-12)

    pair_12 = np.abs(c1 * np.exp(0.5j * x * t) + c2 * np.exp(0.5j * t))
    pair_12_shifted = np.abs(c1 * np.exp(0.5j * x * (t + t2))
                             + c2 * np.exp(0.5j * (t + t2)))
    assert np.allclose(pair_12, pair_12_shifted, atol=1e-12)


def test_beating_profile_domain():
    with pytest.raises(DomainError):
        beating_profile(1.0, "+++", 0.0)
    with pytest.raises(DomainError):
        beating_profile(2.0, "++", 0.0)


def test_beating_prediction_amplitudes_match_built_states():
    x = 1.5
    p = beating_params(x)
    pred = BeatingPrediction.for_ratio(x)
    s2 = build_state(SolutionSet((0, 1)), p)
    s3 = build_state(SolutionSet((-1, 0)), p)
    assert s2.coefficient_at(0) == pytest.approx(pred.amplitudes[1], rel=1e-14)
    assert s3.coefficient_at(0) == pytest.approx(pred.amplitudes[2], rel=1e-14)


# ---------------------------------------------------------------------------
# evolve


def test_single_site_phase_rotation():
    # delta at site 2: |c| stays 1, phase advances at (nu + 2 f)/f
    p = LatticeParams(nu=0.8, f=1.0, beta=0.0, window=(-2, 6))
    initial = np.zeros(p.window_size, dtype=complex)
    initial[2 - p.window[0]] = 1.0
    trace = evolve(initial, p, t_end=3.0, dt=1e-3)
    column = trace.site_column(2)
    assert np.max(np.abs(np.abs(column) - 1.0)) < 1e-12
    expected = np.exp(1j * (p.nu + 2.0 * p.f) / p.f * trace.times)
    assert np.max(np.abs(column / column[0] - expected)) < 1e-9


def test_nonlinear_frequency_shift_on_home_site():
    # delta at site 0 with nu > 0: phase rate nu/f in t'
    p = LatticeParams(nu=1.3, f=0.7, beta=0.0, window=(-4, 4))
    initial = np.zeros(p.window_size, dtype=complex)
    initial[0 - p.window[0]] = 1.0
    trace = evolve(initial, p, t_end=2.0, dt=1e-3)
    column = trace.site_column(0)
    expected = np.exp(1j * (p.nu / p.f) * trace.times)
    assert np.max(np.abs(column - expected)) < 1e-9


def test_stationary_state_is_stationary_under_evolution():
    s = SolutionSet((0, 1))
    p = LatticeParams.for_set(s, nu=1.5, f=1.0)
    result = continue_in_beta(s, p, 0.02, steps=5)
    state = result.state
    trace = evolve(state.coefficients.astype(complex), state.params,
                   t_end=10.0 * BLOCH_PERIOD)
    drift = np.max(np.abs(np.abs(trace.states) - np.abs(trace.states[0])))
    assert drift < 1e-8
    # phase rotates as e^{i mu t'/f}
    column = trace.site_column(0)
    expected = state.coefficient_at(0) * np.exp(
        1j * state.mu / p.f * trace.times)
    assert np.max(np.abs(column - expected)) < 1e-7


def test_conservation_over_twenty_bloch_periods():
    p = beating_params(1.5)
    initial = superposition_state(1.5, 0, p)
    trace = evolve(initial, p, t_end=20.0 * BLOCH_PERIOD)
    assert trace.norm_drift < 1e-9
    assert trace.energy_drift < 1e-8


def test_summed_vector_is_flat_at_zero_hopping():
    # the site-decoupled equation freezes |c_l|; beats need beating_trace
    p = beating_params(1.5)
    initial = superposition_state(1.5, 0, p)
    trace = evolve(initial, p, t_end=2.0 * BLOCH_PERIOD)
    assert np.max(np.abs(np.abs(trace.states) - np.abs(trace.states[0]))) < 1e-10


def test_integrator_fourth_order():
    p = LatticeParams(nu=1.5, f=1.0, beta=0.1, window=WINDOW)
    initial = superposition_state(1.5, 0, p)

    def final(dt):
        return evolve(initial, p, t_end=2.0 * math.pi, dt=dt).states[-1]

    h = 2.0 * math.pi / 256.0
    reference = final(h / 8.0)
    e_coarse = np.max(np.abs(final(h) - reference))
    e_fine = np.max(np.abs(final(h / 2.0) - reference))
    assert 12.0 < e_coarse / e_fine < 20.0


def test_evolve_validation():
    p = beating_params(1.5)
    good = superposition_state(1.5, 0, p)
    with pytest.raises(DomainError):
        evolve(good, p, t_end=-1.0)
    with pytest.raises(DomainError):
        evolve(good, p, t_end=1.0, dt=0.0)
    with pytest.raises(DomainError):
        evolve(2.0 * good, p, t_end=1.0)


def test_evolve_flags_norm_drift():
    # absurdly large steps wreck conservation and must be reported
    p = LatticeParams(nu=1.5, f=0.01, beta=0.5, window=WINDOW)
    initial = superposition_state(150.0, 0, p)
    with pytest.raises(IntegrationError):
        evolve(initial, p, t_end=40.0, dt=0.5)


# ---------------------------------------------------------------------------
# superposition


def test_superposition_state_support_and_norm():
    p = beating_params(1.5)
    vec = superposition_state(1.5, 0, p)
    support = {int(s) for s, v in zip(p.window_sites, vec) if abs(v) > 1e-14}
    assert support == {-1, 0, 1}
    assert np.sum(np.abs(vec) ** 2) == pytest.approx(1.0, abs=1e-12)
    # site 0 proportional to the three-amplitude sum before normalization
    expected = 1.0 + math.sqrt(5.0 / 6.0) + math.sqrt(1.0 / 6.0)
    raw_norm = math.sqrt(5.0 / 6.0 + expected ** 2 + 1.0 / 6.0)
    site0 = vec[0 - p.window[0]]
    assert (site0 * raw_norm).real == pytest.approx(expected, rel=1e-12)
    assert abs(site0.imag) < 1e-15


def test_superposition_requires_consistent_ratio():
    p = beating_params(1.5)
    with pytest.raises(DomainError):
        superposition_state(2.0, 0, p)
    with pytest.raises(DomainError):
        superposition_state(0.9, 0, LatticeParams(nu=0.9, f=1.0, window=WINDOW))


# ---------------------------------------------------------------------------
# spectrum


def test_spectrum_of_analytic_beating_profile_one_bin():
    for x in (1.5, 2.5, 4.0):
        _, t1, t2 = beat_periods(x)
        dt = BLOCH_PERIOD / 512.0
        t_end = 40.0 * BLOCH_PERIOD
        times = np.arange(0.0, t_end + dt / 2, dt)
        trace = trace_from_series(times, beating_profile(x, "+++", times))
        peaks = spectrum(trace, 0)
        bin_width = 2.0 * math.pi / (times.size * dt)
        freqs = [f for f, _ in peaks]
        for expected in (2.0 * math.pi / t1, 2.0 * math.pi / t2):
            assert min(abs(f - expected) for f in freqs) <= bin_width, (x, expected)


def test_spectrum_constant_trace_single_dc_peak():
    times = np.arange(2048) * 0.01
    trace = trace_from_series(times, np.full(times.size, 0.8 + 0.0j))
    peaks = spectrum(trace, 0)
    assert len(peaks) == 1
    assert peaks[0][0] == 0.0


def test_spectrum_short_trace_rejected():
    times = np.arange(512) * 0.01
    trace = trace_from_series(times, np.exp(1j * times))
    with pytest.raises(DomainError):
        spectrum(trace, 0)


def test_simulated_beating_matches_predictions_two_bins():
    x = 1.5
    p = beating_params(x)
    trace = beating_trace(x, 0, p, t_end=20.0 * BLOCH_PERIOD)
    assert trace.norm_drift < 1e-9
    assert trace.energy_drift < 1e-8
    peaks = spectrum(trace, 0)
    bin_width = 2.0 * math.pi / (trace.times.size * trace.dt)
    freqs = [f for f, _ in peaks]
    _, t1, t2 = beat_periods(x)
    for expected in (2.0 * math.pi / t1, 2.0 * math.pi / t2):
        assert min(abs(f - expected) for f in freqs) <= 2.0 * bin_width
    # the Bloch line is there as well
    assert min(abs(f - 1.0) for f in freqs) <= 2.0 * bin_width


def test_beating_trace_around_other_wells():
    x = 2.5
    nu = 0.05
    p = LatticeParams(nu=nu, f=nu / x, beta=0.0, window=(-3, 9))
    trace = beating_trace(x, 3, p, t_end=6.0 * BLOCH_PERIOD)
    peaks = spectrum(trace, 3)
    bin_width = 2.0 * math.pi / (trace.times.size * trace.dt)
    _, t1, t2 = beat_periods(x)
    freqs = [f for f, _ in peaks]
    for expected in (2.0 * math.pi / t1, 2.0 * math.pi / t2):
        assert min(abs(f - expected) for f in freqs) <= 2.0 * bin_width


# ---------------------------------------------------------------------------
# frequency-count growth


def test_pairwise_frequency_count_grows_with_ratio():
    def distinct_differences(x):
        energies = set()
        for s in enumerate_solution_sets(x):
            n = s.cardinality
            mu_over_f = x / n + sum(s.sites) / n
            for site in s.sites:
                # translate so the tracked well is site 0
                energies.add(round(mu_over_f - site, 9))
        diffs = {round(abs(a - b), 9)
                 for a in energies for b in energies if a != b}
        return len(diffs)

    assert distinct_differences(6.0) > distinct_differences(2.0)
