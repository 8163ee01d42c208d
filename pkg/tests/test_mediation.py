import json

import numpy as np
import pytest

from conftest import random_models, random_stable_var
from varmediation import (
    Dataset,
    VarModel,
    VarSpec,
    ame,
    check_zero_mediation,
    compute_gir,
    contribution,
    identify_shock,
    impulse_response,
    lp_mediator_equation,
    lp_outcome_equation,
    lp_total_effect,
    simulate_var,
)
from varmediation.exceptions import DataError, SingularDesignError
from varmediation.mediation import save_reports_json
from varmediation.reference import GIR_XY_TABLE, PHI

SPEC = VarSpec(6, shock_var="X", outcome_var="Y", mediator_var="M")


def block_triangular_var(rng, K=3, p=3, radius=0.9) -> VarModel:
    """(X, Y) never load on M, so M has no path into Y at any horizon."""
    model = random_stable_var(rng, K, p, radius)
    phi = model.phi.copy()
    phi[:, :2, 2:] = 0.0
    # re-stabilise; zeroing entries can move the spectrum
    rho = max(abs(np.linalg.eigvals(VarModel(phi, np.eye(K), ()).companion())))
    if rho >= radius:
        phi = phi * ((radius / rho) ** np.arange(1, p + 1))[:, None, None]
    names = ("X", "Y", "M") + tuple(f"o{i}" for i in range(K - 3))
    return VarModel(phi, model.sigma_u, names)


# --- average mediation effect -----------------------------------------------


def test_ame_is_the_contribution_outcome_row(ref_gir, ref_irf):
    for n in range(8):
        for h in range(n + 1, 20):
            eff = ame(ref_gir, ref_irf, "M", "Y", n, h)
            assert eff.value == contribution(ref_gir, ref_irf, "M", n, h)[1]
            assert (eff.n, eff.h, eff.mediator, eff.outcome) == (n, h, "M", "Y")


def test_ame_one_period_in_vanishes(ref_gir, ref_irf):
    # Phi_1[Y, M] = 0 kills the outcome entry of (-0.04, 0, -0.14)
    assert PHI[0][1, 2] == 0
    assert ame(ref_gir, ref_irf, "M", "Y", 1, 2).value == 0.0


def test_ame_scales_with_the_shock(ref_model, ref_gir):
    shock = identify_shock(ref_model, "X", "unit")
    base = impulse_response(ref_gir, shock, 12)
    scaled = impulse_response(ref_gir, shock.scaled(-3.5), 12)
    for n, h in [(0, 4), (2, 9), (5, 12)]:
        assert ame(ref_gir, scaled, "M", "Y", n, h).value == pytest.approx(
            -3.5 * ame(ref_gir, base, "M", "Y", n, h).value, rel=1e-12, abs=1e-15
        )


def test_ame_zero_when_relevant_gir_entries_vanish():
    rng = np.random.default_rng(3)
    model = random_stable_var(rng, 3, 3)
    phi = model.phi.copy()
    phi[0, 1, 2] = 0.0  # only Phi_1[Y, M]; deeper lags still link M to Y
    model = VarModel(phi * 0.8 ** np.arange(1, 4)[:, None, None], model.sigma_u, ("X", "Y", "M"))
    gir = compute_gir(model, 6)
    irf = impulse_response(gir, identify_shock(model, "X"), 6)
    assert gir.coef(1, 1)[1, 2] == 0 and gir.coef(1, 2)[1, 2] != 0
    assert ame(gir, irf, "M", "Y", 0, 1).value == 0.0


def test_ame_rejects_same_variable(ref_gir, ref_irf):
    with pytest.raises(DataError):
        ame(ref_gir, ref_irf, "Y", "Y", 0, 1)


# --- local projections ------------------------------------------------------


def test_total_effect_matches_var_response(ref_sim, ref_model, ref_irf):
    for h in range(0, 7):
        lp = lp_total_effect(ref_sim, SPEC, h)
        assert lp.coefficients[0] == pytest.approx(ref_irf.theta[h, 1] / ref_irf.theta[0, 0], abs=0.02)


def test_total_effect_on_white_noise():
    T = 100_000
    rng = np.random.default_rng(4)
    data = Dataset(rng.normal(size=(T, 3)), ("X", "Y", "M"))
    for h in (1, 3):
        assert abs(lp_total_effect(data, SPEC.__class__(2, shock_var="X", outcome_var="Y"), h).coefficients[0]) < 4 / np.sqrt(T)


def test_total_effect_at_impact_is_the_innovation_regression():
    T = 100_000
    sigma = np.array([[1.0, 0.4, 0.1], [0.4, 2.0, 0.0], [0.1, 0.0, 1.0]])
    rng = np.random.default_rng(5)
    model = random_stable_var(rng, 3, 2)
    model = VarModel(model.phi, sigma, ("X", "Y", "M"))
    data = simulate_var(model, T, seed=5)
    lp = lp_total_effect(data, VarSpec(2, shock_var="X", outcome_var="Y"), 0)
    from varmediation import estimate_var

    u = estimate_var(data, VarSpec(2)).residuals
    ratio = (u[:, 1] @ u[:, 0]) / (u[:, 0] @ u[:, 0])
    assert abs(lp.coefficients[0] - ratio) < 4 / np.sqrt(T)
    assert abs(lp.coefficients[0] - 0.4) < 0.02


def test_mediator_equation_recovers_mediator_path(ref_sim):
    lp = lp_mediator_equation(ref_sim, SPEC, 1)
    np.testing.assert_allclose(lp.coefficients, [0.0, -0.2], atol=0.02)
    assert lp.residuals.shape[1] == 2


def test_mediator_equation_no_impact_pass_through(ref_sim):
    lp = lp_mediator_equation(ref_sim, SPEC, 0)
    assert abs(lp.coefficients[0]) < 4 / np.sqrt(ref_sim.T)


def test_mediator_slope_under_doubled_shock_variance():
    rng = np.random.default_rng(6)
    base = random_stable_var(rng, 3, 1, radius=0.6)
    slopes = []
    for var_x in (1.0, 2.0):
        sigma = np.array([[var_x, 0.0, 0.3], [0.0, 1.0, 0.0], [0.3, 0.0, 1.0]])
        model = VarModel(base.phi, sigma, ("X", "Y", "M"))
        data = simulate_var(model, 200_000, seed=6)
        slope = lp_mediator_equation(data, VarSpec(1, shock_var="X", outcome_var="Y", mediator_var="M"), 0).coefficients[0]
        sd_impact = identify_shock(model, "X", "sd").theta0[2]
        assert slope * np.sqrt(var_x) == pytest.approx(sd_impact, abs=0.01)
        slopes.append(slope)
    assert slopes[1] == pytest.approx(slopes[0] / 2, abs=0.01)


def test_outcome_equation_recovers_gir_block(ref_sim, ref_gir):
    lp = lp_outcome_equation(ref_sim, SPEC, 1, 3)
    expected = [ref_gir.coef(2, 1)[1, 2], ref_gir.coef(2, 2)[1, 2]]
    np.testing.assert_allclose(lp.coefficients, expected, atol=0.02)
    assert lp.regressors[:2] == ("M(t+1)", "M(t)")
    assert any("truncated" in note for note in lp.notes)


def test_outcome_equation_one_step_is_the_var(ref_sim):
    lp = lp_outcome_equation(ref_sim, SPEC, 2, 3)
    np.testing.assert_allclose(lp.coefficients, PHI[:3, 1, 2], atol=0.02)


def test_outcome_equation_duplicate_mediator_is_singular():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(2000, 3))
    data = Dataset(np.column_stack([x, x[:, 2]]), ("X", "Y", "M", "M2"))
    with pytest.raises(SingularDesignError):
        lp_outcome_equation(data, VarSpec(2, shock_var="X", outcome_var="Y", mediator_var="M"), 1, 2)


def test_lp_residuals_orthogonal(ref_sim):
    for lp in (
        lp_total_effect(ref_sim, SPEC, 3),
        lp_mediator_equation(ref_sim, SPEC, 2),
        lp_outcome_equation(ref_sim, SPEC, 1, 4),
    ):
        inner = lp.design.T @ lp.residuals
        assert np.max(np.abs(inner)) / lp.design.shape[0] < 1e-8


def test_lp_roles_default_from_dataset(ref_sim):
    data = ref_sim.with_roles({"X": "treatment", "Y": "outcome", "M": "mediator"})
    a = lp_total_effect(data, VarSpec(6), 2).coefficients
    b = lp_total_effect(ref_sim, SPEC, 2).coefficients
    assert np.array_equal(a, b)


def test_lp_estimates_converge(ref_model, ref_irf, ref_gir):
    errors = []
    for T in (5_000, 50_000, 500_000):
        data = simulate_var(ref_model, T, seed=123)
        e_total = max(abs(lp_total_effect(data, SPEC, h).coefficients[0] - ref_irf.theta[h, 1]) for h in range(1, 5))
        e_med = np.max(np.abs(lp_mediator_equation(data, SPEC, 2).coefficients - ref_irf.theta[:3, 2]))
        e_out = np.max(
            np.abs(lp_outcome_equation(data, SPEC, 1, 3).coefficients - [ref_gir.coef(2, 1)[1, 2], ref_gir.coef(2, 2)[1, 2]])
        )
        errors.append(max(e_total, e_med, e_out))
    assert errors[0] > errors[1] > errors[2]


# --- Granger non-causality implies zero mediation ---------------------------


def test_structural_zero_passes():
    rng = np.random.default_rng(9)
    model = block_triangular_var(rng)
    gir = compute_gir(model, 12)
    irf = impulse_response(gir, identify_shock(model, "X"), 12)
    report = check_zero_mediation(gir, irf, "M", "Y", 2, 7)
    assert report.noncausal and report.relevant_zero
    assert report.passed is True and report.status == "pass"
    assert report.ame == 0.0


def test_reference_precondition_unmet(ref_gir, ref_irf):
    # Y feeds X at horizon 2 through lag 2 (-0.248)
    report = check_zero_mediation(ref_gir, ref_irf, "Y", "X", 1, 3)
    assert not report.noncausal and not report.relevant_zero
    assert report.passed is None and report.status == "precondition unmet"
    assert round(report.granger_coeffs[1], 3) == -0.248


def test_reference_weak_condition(ref_gir, ref_irf):
    # at n = 0 only Phi_{XY,1}^(h) matters and it is zero for h <= 5
    report = check_zero_mediation(ref_gir, ref_irf, "Y", "X", 0, 4)
    assert not report.noncausal and report.relevant_zero
    assert report.passed is True and report.ame == 0.0


def test_weak_condition_with_deeper_lags():
    rng = np.random.default_rng(10)
    model = random_stable_var(rng, 3, 3, radius=0.8)
    phi = model.phi.copy()
    phi[0, 1, 2] = 0.0
    phi[1, 1, 2] = 0.3
    model = VarModel(phi * 0.7 ** np.arange(1, 4)[:, None, None], model.sigma_u, ("X", "Y", "M"))
    gir = compute_gir(model, 5)
    irf = impulse_response(gir, identify_shock(model, "X"), 5)
    report = check_zero_mediation(gir, irf, "M", "Y", 0, 1)
    assert not report.noncausal and report.relevant_zero and report.passed


def test_zero_mediation_on_fifty_constructed_models():
    rng = np.random.default_rng(11)
    for _ in range(50):
        K = int(rng.integers(3, 5))
        model = block_triangular_var(rng, K=K, p=int(rng.integers(1, 5)))
        gir = compute_gir(model, 12)
        irf = impulse_response(gir, identify_shock(model, "X"), 12)
        for h in range(1, 13):
            for n in range(h):
                report = check_zero_mediation(gir, irf, "M", "Y", n, h)
                assert report.noncausal and report.passed
                assert abs(report.ame) < 1e-10


def test_report_json(tmp_path, ref_gir, ref_irf):
    reports = [check_zero_mediation(ref_gir, ref_irf, "M", "Y", 0, h) for h in (1, 2)]
    path = tmp_path / "r.json"
    save_reports_json(reports, path)
    loaded = json.loads(path.read_text())
    assert {"n", "h", "mediator", "granger_coeffs", "noncausal", "ame", "pass"} <= set(loaded[0])
