//! Cross-engine agreement beyond the vanilla grid.

use risklab::pricing::{closed_form_price, futures_price, mc_price, pde_price};
use risklab::{ClaimSpec, Engine, IntrinsicRiskModel, MarketModel, PdeGrid, Tabulated, TermStructure};

fn market() -> MarketModel {
    MarketModel::flat(100.0, 0.07, 0.25, 0.04).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn digital_call_agrees_across_engines() {
    let z = IntrinsicRiskModel::constant(0.02);
    let claim = ClaimSpec::digital_call(105.0, 1.0).unwrap();
    let cf = closed_form_price(&market(), &z, &claim).unwrap().value;
    // oracle: e^{-νT} N(d2) with carry ν − ζ
    let d2 = ((100.0f64 / 105.0).ln() + 0.02 - 0.03125) / 0.25;
    let oracle = (-0.04f64).exp() * 0.5 * libm::erfc(-d2 / 2f64.sqrt());
    assert!(close(cf, oracle, 1e-14), "{cf} vs {oracle}");
    let pde = pde_price(&market(), &z, &claim, &PdeGrid::new(400, 200)).unwrap().value;
    assert!(close(pde, cf, 2e-3), "{pde} vs {cf}");
    let mc = mc_price(&market(), &z, &claim, 200_000, 1, 5).unwrap();
    assert!(close(mc.value, cf, 4.0 * mc.std_error));
}

#[test]
fn custom_table_reproduces_a_call_spread() {
    let table = Tabulated::new(vec![(0.0, 0.0), (90.0, 0.0), (110.0, 20.0), (400.0, 20.0)]).unwrap();
    let custom = ClaimSpec::custom(table, 0.75).unwrap();
    let z = IntrinsicRiskModel::vol_spread(1.0, 0.3);
    let m = market();
    let spread = closed_form_price(&m, &z, &ClaimSpec::call(90.0, 0.75).unwrap()).unwrap().value
        - closed_form_price(&m, &z, &ClaimSpec::call(110.0, 0.75).unwrap()).unwrap().value;
    let pde = pde_price(&m, &z, &custom, &PdeGrid::new(400, 200)).unwrap().value;
    assert!(close(pde, spread, 1e-3), "{pde} vs {spread}");
    let mc = mc_price(&m, &z, &custom, 200_000, 1, 6).unwrap();
    assert!(close(mc.value, spread, 4.0 * mc.std_error));
}

#[test]
fn term_structures_are_priced_consistently() {
    let nu = TermStructure::new(vec![(0.0, 0.01), (0.5, 0.05)]).unwrap();
    let sigma = TermStructure::new(vec![(0.0, 0.3), (0.25, 0.2), (0.8, 0.25)]).unwrap();
    let m = MarketModel::new(100.0, 0.05, sigma, nu).unwrap();
    let z = IntrinsicRiskModel::composite(0.01, IntrinsicRiskModel::vol_spread(0.5, 0.22));
    let claim = ClaimSpec::put(100.0, 1.2).unwrap();
    let cf = closed_form_price(&m, &z, &claim).unwrap().value;
    let pde = pde_price(&m, &z, &claim, &PdeGrid::new(800, 240)).unwrap().value;
    assert!(close(pde, cf, 1e-3), "{pde} vs {cf}");
    let mc = mc_price(&m, &z, &claim, 200_000, 12, 7).unwrap();
    assert!(close(mc.value, cf, 4.0 * mc.std_error), "{} ± {} vs {cf}", mc.value, mc.std_error);
}

#[test]
fn futures_engines_agree_for_state_dependent_intrinsic_risk() {
    let z = IntrinsicRiskModel::exp_family(
        Tabulated::new(vec![(50.0, -3.5), (200.0, -3.5)]).unwrap(),
        Tabulated::new(vec![(50.0, 0.5), (200.0, -0.5)]).unwrap(),
        0.0,
    );
    let pde = futures_price(&market(), &z, 1.0, &Engine::Pde(PdeGrid::new(400, 200))).unwrap();
    let mc = futures_price(&market(), &z, 1.0, &Engine::MonteCarlo { n_paths: 200_000, n_steps: 50, seed: 3 }).unwrap();
    assert!(close(pde.value, mc.value, 4.0 * mc.std_error), "{} vs {} ± {}", pde.value, mc.value, mc.std_error);
    assert!(Engine::Closed.price(&market(), &z, &ClaimSpec::call(100.0, 1.0).unwrap()).is_err());
}
