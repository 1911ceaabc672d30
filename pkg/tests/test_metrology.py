"""Probe preparation, analytic bounds, Monte Carlo, noisy trajectories."""

import json
import math

import numpy as np
import pytest

from qecprobe.pauli import parse
from qecprobe.metrology import (
    CorrectionSchedule,
    ExperimentConfig,
    NoiseModel,
    cramer_rao_uncertainty,
    default_xi,
    logical_z_orbit_signal,
    loglog_slope,
    monte_carlo_estimate,
    noisy_run,
    prepare_probe,
    ramsey_signal,
    readout_operator,
    signal_profile,
    sql_baseline,
    syndrome_table,
    trajectory_uniforms,
)
from qecprobe.simulator import SignalHamiltonian
from qecprobe.stabilizer import get_builtin

REP3 = get_builtin("repetition3")
FIVE = get_builtin("fivequbit")
TRIVIAL = get_builtin("trivial")

REP3_SIGNAL = logical_z_orbit_signal(REP3)
FIVE_SIGNAL = logical_z_orbit_signal(FIVE)
TRIVIAL_SIGNAL = logical_z_orbit_signal(TRIVIAL)


# -- probe preparation ------------------------------------------------------------

def test_probe_rep3_z_signal_is_ghz():
    probe = prepare_probe(REP3, "Z")
    expected = np.zeros(8, dtype=complex)
    expected[0] = expected[7] = 1 / math.sqrt(2)
    assert np.allclose(probe.amplitudes, expected)

def test_probe_trivial_x_signal():
    probe = prepare_probe(TRIVIAL, "X")
    assert np.allclose(probe.amplitudes, [1.0, 0.0])

def test_probe_five_z_signal():
    probe = prepare_probe(FIVE, "Z")
    assert probe.amplitudes.shape == (32,)
    assert abs(probe.norm() - 1.0) < 1e-12

def test_readout_is_conjugate_logical():
    assert readout_operator(REP3, "Z") == REP3.logical_x
    assert readout_operator(REP3, "X") == REP3.logical_z
    assert readout_operator(REP3, "Y") == REP3.logical_z


# -- signal profiles ---------------------------------------------------------------

def test_signal_profiles():
    prof = signal_profile(REP3, REP3_SIGNAL)
    assert prof.uniform_logical
    assert prof.letter == "Z"
    assert prof.signs == (1, 1, 1)
    assert prof.effective_coupling == 3.0

    prof5 = signal_profile(FIVE, FIVE_SIGNAL)
    assert prof5.uniform_logical
    assert prof5.signs == (-1, -1, -1, -1, -1)
    assert prof5.coupling_magnitude == 5.0

def test_signal_with_non_logical_term_is_flagged():
    ham = SignalHamiltonian.from_strings(((1.0, "ZII"), (1.0, "XII")))
    prof = signal_profile(REP3, ham)
    assert not prof.uniform_logical
    assert any("non-logical" in f for f in prof.flags)
    with pytest.raises(ValueError, match="non-logical"):
        ramsey_signal(REP3, ham, 1.0, 0.1)

def test_signal_with_mixed_letters_is_flagged():
    ham = SignalHamiltonian.from_strings(((1.0, "ZII"), (1.0, "XXX")))
    prof = signal_profile(REP3, ham)
    assert any("mixes" in f for f in prof.flags)


# -- ramsey signal and analytic bound ------------------------------------------------

def test_ramsey_closed_form_values():
    assert ramsey_signal(TRIVIAL, TRIVIAL_SIGNAL, 1.0, math.pi / 4) == pytest.approx(0.0, abs=1e-12)
    assert ramsey_signal(REP3, REP3_SIGNAL, 1.0, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert ramsey_signal(REP3, REP3_SIGNAL, 1.0, math.pi / 12) == pytest.approx(0.0, abs=1e-12)

def test_ramsey_matches_cosine_model():
    for code, signal in ((REP3, REP3_SIGNAL), (FIVE, FIVE_SIGNAL)):
        prof = signal_profile(code, signal)
        for xi in (0.03, 0.1, 0.2):
            got = ramsey_signal(code, signal, 1.0, xi)
            assert got == pytest.approx(math.cos(2 * prof.coupling_magnitude * xi), abs=1e-9)

def test_cramer_rao_values():
    for code, signal, target in (
        (TRIVIAL, TRIVIAL_SIGNAL, 0.5),
        (REP3, REP3_SIGNAL, 1.0 / 6.0),
        (FIVE, FIVE_SIGNAL, 0.1),
    ):
        for tau in (1.0, 2.5):
            xi = default_xi(code, signal, tau)
            got = cramer_rao_uncertainty(code, signal, tau, xi)
            assert got == pytest.approx(target / tau, rel=1e-6)

def test_cramer_rao_xi_invariant():
    xi_star = default_xi(REP3, REP3_SIGNAL, 1.0)
    base = cramer_rao_uncertainty(REP3, REP3_SIGNAL, 1.0, xi_star)
    for frac in (0.2, 0.5, 1.4):
        got = cramer_rao_uncertainty(REP3, REP3_SIGNAL, 1.0, xi_star * frac)
        assert got == pytest.approx(base, rel=1e-6)

def test_cramer_rao_stationary_point_analytic_limit():
    # sin(2 C xi tau) = 0 there; the 0/0 limit must come out as 1/(2 C tau)
    xi = math.pi / (2 * 3 * 1.0)
    assert cramer_rao_uncertainty(REP3, REP3_SIGNAL, 1.0, xi) == pytest.approx(1 / 6, rel=1e-9)

def test_cancelling_signs_are_uninformative():
    ham = SignalHamiltonian.from_strings(((1.0, "ZII"), (-1.0, "IZI")))
    with pytest.raises(ValueError, match="uninformative|cancel"):
        cramer_rao_uncertainty(REP3, ham, 1.0, 0.1)

def test_sql_baseline():
    assert sql_baseline(2.0, 1) == 0.25
    assert sql_baseline(1.0, 4) == 0.25
    assert sql_baseline(1.0, 100) == pytest.approx(0.05)
    with pytest.raises(ValueError):
        sql_baseline(0.0, 10)

def test_default_xi_hits_max_information_point():
    xi = default_xi(FIVE, FIVE_SIGNAL, 2.0)
    assert 2 * 5 * xi * 2.0 == pytest.approx(math.pi / 2)


# -- syndrome decoding ------------------------------------------------------------------

def test_rep3_syndrome_table_frozen():
    table = {synd: str(op) for synd, op in syndrome_table(REP3).items()}
    assert table == {0: "III", 1: "XII", 2: "IIX", 3: "IXI"}

def test_five_syndrome_table_is_perfect():
    table = syndrome_table(FIVE)
    assert len(table) == 16
    weight1 = [op for synd, op in table.items() if synd != 0]
    assert len(weight1) == 15
    assert all(op.weight == 1 for op in weight1)


# -- Monte Carlo ---------------------------------------------------------------------------

def _config(code, signal, **kwargs):
    defaults = dict(
        xi=default_xi(code, signal, 1.0), tau=1.0, shots=10000, seed=10, batches=100
    )
    defaults.update(kwargs)
    return ExperimentConfig(code=code, signal=signal, **defaults)

def test_zero_signal_estimates_zero_exactly():
    result = monte_carlo_estimate(_config(REP3, REP3_SIGNAL, xi=0.0, shots=1000))
    assert result.estimate == 0.0
    assert all(o == 1 for o in result.outcomes)

def test_monte_carlo_matches_binomial_propagation():
    # batch estimates spread = (single-shot bound)/sqrt(batch size) at peak slope
    result = monte_carlo_estimate(_config(REP3, REP3_SIGNAL))
    assert result.empirical_std_shot == pytest.approx(result.cr_bound, rel=0.05)
    assert result.estimate == pytest.approx(result.xi_true, abs=3 * result.cr_bound / math.sqrt(10000) * 10)

def test_monte_carlo_consistent_across_shot_counts():
    for shots, rel in ((1000, 0.10), (10000, 0.05)):
        result = monte_carlo_estimate(_config(REP3, REP3_SIGNAL, shots=shots, seed=4))
        assert result.empirical_std_shot == pytest.approx(result.cr_bound, rel=rel)

def test_weighted_coefficients_change_effective_coupling():
    ham = SignalHamiltonian.from_strings(((2.0, "ZII"), (1.0, "IZI"), (1.0, "IIZ")))
    prof = signal_profile(REP3, ham)
    assert prof.effective_coupling == 4.0
    xi = default_xi(REP3, ham, 1.0)
    assert cramer_rao_uncertainty(REP3, ham, 1.0, xi) == pytest.approx(1 / 8, rel=1e-6)
    assert ramsey_signal(REP3, ham, 1.0, 0.05) == pytest.approx(math.cos(2 * 4 * 0.05), abs=1e-9)

def test_monte_carlo_deterministic():
    a = monte_carlo_estimate(_config(REP3, REP3_SIGNAL))
    b = monte_carlo_estimate(_config(REP3, REP3_SIGNAL))
    assert a == b
    assert a.to_json() == b.to_json()

def test_monte_carlo_seed_changes_outcomes():
    a = monte_carlo_estimate(_config(REP3, REP3_SIGNAL, seed=1))
    b = monte_carlo_estimate(_config(REP3, REP3_SIGNAL, seed=2))
    assert a.outcomes != b.outcomes

def test_branch_warning_past_principal_branch():
    xi = math.pi / (2 * 3) + 0.2  # 2 C xi tau > pi
    result = monte_carlo_estimate(_config(REP3, REP3_SIGNAL, xi=xi, shots=500))
    assert result.branch_warning

def test_result_json_roundtrips_as_dict():
    result = monte_carlo_estimate(_config(TRIVIAL, TRIVIAL_SIGNAL, shots=500))
    data = json.loads(result.to_json())
    assert data["kind"] == "noiseless"
    assert data["cr_bound"] == pytest.approx(0.5)
    assert len(data["outcomes"]) == 500

def test_config_validation():
    with pytest.raises(ValueError, match="tau"):
        _config(REP3, REP3_SIGNAL, tau=0.0)
    with pytest.raises(ValueError, match="shots"):
        _config(REP3, REP3_SIGNAL, shots=0)
    with pytest.raises(ValueError, match="batches"):
        _config(REP3, REP3_SIGNAL, shots=1050, batches=100)
    with pytest.raises(ValueError, match="probability"):
        NoiseModel.from_strings(("XII",), 1.5)
    with pytest.raises(ValueError, match="cycles"):
        CorrectionSchedule(0)


# -- noisy trajectories -------------------------------------------------------------------------

XFLIPS = ("XII", "IXI", "IIX")

def _noisy_config(p, **kwargs):
    defaults = dict(shots=2000, seed=11)
    defaults.update(kwargs)
    return _config(
        REP3,
        REP3_SIGNAL,
        noise=NoiseModel.from_strings(XFLIPS, p),
        correction=CorrectionSchedule(10),
        **defaults,
    )

def test_noisy_run_requires_noise_and_correction():
    with pytest.raises(ValueError, match="noise model and a correction"):
        noisy_run(_config(REP3, REP3_SIGNAL))

def test_zero_probability_matches_noiseless_bitwise():
    clean = monte_carlo_estimate(_config(REP3, REP3_SIGNAL, shots=2000, seed=11))
    noisy = noisy_run(_noisy_config(0.0))
    assert noisy.outcomes == clean.outcomes
    assert noisy.estimate == clean.estimate
    assert noisy.batch_estimates == clean.batch_estimates
    assert noisy.empirical_std_batch == clean.empirical_std_batch
    assert noisy.noise.mean_ideal_infidelity == 0.0
    assert noisy.noise.errors_applied == 0

def test_noisy_run_deterministic():
    a = noisy_run(_noisy_config(0.01))
    b = noisy_run(_noisy_config(0.01))
    assert a == b
    assert a.to_json() == b.to_json()

def test_correction_suppresses_first_order_noise():
    # infidelity must grow roughly quadratically for correctable noise
    values = []
    for p in (0.01, 0.02):
        r = noisy_run(_noisy_config(p, shots=30000, seed=21))
        values.append(r.noise.mean_ideal_infidelity)
        assert r.noise.decode_failures == 0
    slope = math.log(values[1] / values[0]) / math.log(2.0)
    assert 1.4 < slope < 2.6

def test_normalizer_noise_is_flagged_and_first_order():
    values = []
    for p in (0.01, 0.02):
        config = _config(
            REP3,
            REP3_SIGNAL,
            shots=10000,
            seed=22,
            noise=NoiseModel.from_strings(("ZII",), p),
            correction=CorrectionSchedule(10),
        )
        r = noisy_run(config)
        assert any("not detectable" in f for f in r.noise.noise_flags)
        values.append(r.noise.mean_ideal_infidelity)
    slope = math.log(values[1] / values[0]) / math.log(2.0)
    assert 0.6 < slope < 1.4

def test_errors_trigger_syndromes():
    r = noisy_run(_noisy_config(0.05, shots=2000, seed=23))
    assert r.noise.errors_applied > 0
    assert r.noise.nontrivial_syndrome_cycles > 0
    assert r.noise.mean_ideal_infidelity > 0


# -- helpers ------------------------------------------------------------------------------------

def test_trajectory_uniforms_reproducible():
    a = trajectory_uniforms(3, 10, 7)
    b = trajectory_uniforms(3, 10, 7)
    assert np.array_equal(a, b)
    c = trajectory_uniforms(4, 10, 7)
    assert not np.array_equal(a, c)

def test_loglog_slope_exact_power_law():
    xs = np.array([1.0, 2.0, 4.0, 8.0])
    assert loglog_slope(xs, xs ** -2) == pytest.approx(-2.0, abs=1e-12)
    assert loglog_slope(xs, 3.0 * xs ** -0.5) == pytest.approx(-0.5, abs=1e-12)
