//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! measured error and runtime; the process fails if any criterion fails.

mod common;
mod support;

use std::time::{Duration, Instant};

use risklab::hedging::{delta_hedge_simulate, HedgeConfig, Strategy};
use risklab::measure::reweighted_expectation;
use risklab::pricing::{
    closed_form_price, convexity_adjustment, mc_price, mc_price_claims, pde_price, smile_surface,
};
use risklab::{
    ClaimSpec, Engine, IntrinsicRiskModel, MarketModel, MeasureTag, PdeGrid, Tabulated,
    TermStructure,
};

use common::bsm_dividend;
use support::{golden_cases, run_example};

const STRIKES: [f64; 5] = [80.0, 90.0, 100.0, 110.0, 120.0];
const MATURITIES: [f64; 3] = [0.25, 1.0, 2.0];
const VOLS: [f64; 3] = [0.1, 0.2, 0.4];
const RATES: [f64; 2] = [0.0, 0.05];

/// Outcome of one criterion: whether the numeric check held, plus a summary.
type Outcome = (bool, String);

/// Name, runtime budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn vanilla_grid() -> impl Iterator<Item = (f64, f64, f64)> {
    MATURITIES
        .into_iter()
        .flat_map(|t| VOLS.into_iter().flat_map(move |s| RATES.into_iter().map(move |r| (t, s, r))))
}

fn vanillas(maturity: f64) -> Vec<ClaimSpec> {
    STRIKES
        .iter()
        .flat_map(|&k| [ClaimSpec::call(k, maturity).unwrap(), ClaimSpec::put(k, maturity).unwrap()])
        .collect()
}

fn zero_intrinsic_reduction() -> Outcome {
    let zeta = IntrinsicRiskModel::default();
    let (mut pde_err, mut worst_z, mut n) = (0.0f64, 0.0f64, 0);
    for (seed, (t, s, r)) in vanilla_grid().enumerate() {
        let m = MarketModel::flat(100.0, 0.0, s, r).unwrap();
        let claims = vanillas(t);
        // constant coefficients: one log-Euler step is exact in law
        let mc = mc_price_claims(&m, &zeta, &claims, 1_000_000, 1, seed as u64).unwrap();
        for (claim, mc) in claims.iter().zip(mc) {
            let cf = closed_form_price(&m, &zeta, claim).unwrap().value;
            let pde = pde_price(&m, &zeta, claim, &PdeGrid::new(400, 200)).unwrap().value;
            pde_err = pde_err.max((pde - cf).abs());
            worst_z = worst_z.max((mc.value - cf).abs() / mc.std_error);
            n += 1;
        }
    }
    (
        pde_err <= 1e-3 && worst_z <= 4.0,
        format!("{n} options: max |cf-pde| = {pde_err:.2e}, max |cf-mc|/se = {worst_z:.2}"),
    )
}

fn dividend_yield_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for (t, s, r) in vanilla_grid() {
        let m = MarketModel::flat(100.0, 0.0, s, r).unwrap();
        for q in [-0.02, 0.0, 0.03, 0.08] {
            let zeta = IntrinsicRiskModel::constant(q);
            for claim in vanillas(t) {
                let cf = closed_form_price(&m, &zeta, &claim).unwrap().value;
                let call = claim.kind() == risklab::ClaimKind::Call;
                let oracle = bsm_dividend(call, 100.0, claim.strike().unwrap(), r, q, s, t);
                worst = worst.max((cf - oracle).abs());
            }
        }
    }
    (worst <= 1e-12, format!("max |closed form - yield BS| = {worst:.2e}"))
}

fn decreasing_exp_family() -> IntrinsicRiskModel {
    IntrinsicRiskModel::exp_family(
        Tabulated::new(vec![(50.0, -3.5), (200.0, -3.5)]).unwrap(),
        Tabulated::new(vec![(50.0, 0.5), (200.0, -0.5)]).unwrap(),
        0.0,
    )
}

fn pde_mc_consistency() -> Outcome {
    let m = MarketModel::flat(100.0, 0.08, 0.2, 0.05).unwrap();
    let zeta = decreasing_exp_family();
    let claims: Vec<_> = STRIKES.iter().map(|&k| ClaimSpec::call(k, 1.0).unwrap()).collect();
    let mc = mc_price_claims(&m, &zeta, &claims, 1_000_000, 100, 17).unwrap();
    let mut worst = 0.0f64;
    for (claim, mc) in claims.iter().zip(&mc) {
        let pde = pde_price(&m, &zeta, claim, &PdeGrid::new(400, 200)).unwrap().value;
        worst = worst.max((pde - mc.value).abs() / mc.std_error);
    }
    (worst <= 4.0, format!("5 strikes: max |pde-mc|/se = {worst:.2}"))
}

fn girsanov_reweighting() -> Outcome {
    let m = MarketModel::flat(100.0, 0.1, 0.2, 0.03).unwrap();
    let claim = ClaimSpec::call(100.0, 1.0).unwrap();
    let payoff = |x: f64| claim.payoff(x);
    let mut worst = 0.0f64;
    let mut density_z = 0.0f64;
    for (target, zeta) in [
        (MeasureTag::RiskNeutral, IntrinsicRiskModel::default()),
        (MeasureTag::RiskSubjective, IntrinsicRiskModel::constant(0.04)),
        (MeasureTag::RiskSubjective, IntrinsicRiskModel::vol_spread(1.0, 0.3)),
    ] {
        let (weighted, density) =
            reweighted_expectation(&m, target, Some(&zeta), payoff, 1.0, 50, 100_000, 21).unwrap();
        let direct = mc_price(&m, &zeta, &claim, 100_000, 50, 22).unwrap();
        let se = (weighted.std_error().powi(2) + direct.std_error.powi(2)).sqrt();
        worst = worst.max((weighted.mean - direct.value).abs() / se);
        density_z = density_z.max((density.mean - 1.0).abs() / density.std_error());
    }
    (
        worst <= 4.0 && density_z <= 4.0,
        format!("max |E_P[Lh]-E[h]|/se = {worst:.2}, max |E_P[L]-1|/se = {density_z:.2}"),
    )
}

fn hedging_error_identity() -> Outcome {
    let m = MarketModel::flat(100.0, 0.06, 0.2, 0.0).unwrap();
    let claim = ClaimSpec::call(100.0, 1.0).unwrap();
    let gap = |steps: usize| {
        let config = HedgeConfig {
            strategy: Strategy::Standard,
            rebalance_steps: steps,
            pricing_vol: TermStructure::constant(0.3),
            zeta: None,
            seed: 5,
            epsilon: None,
        };
        let r = delta_hedge_simulate(&m, &claim, &config, 10_000).unwrap();
        let mean = r
            .rows
            .iter()
            .map(|row| (row.realized_pnl - row.predicted_error.unwrap()).abs())
            .sum::<f64>()
            / r.rows.len() as f64;
        (mean, r.premium)
    };
    let (coarse, premium) = gap(500);
    let (fine, _) = gap(1000);
    let ratio = coarse / fine;
    (
        coarse <= 0.05 * premium && (1.2..=2.8).contains(&ratio),
        format!(
            "mean |pnl-pred| = {coarse:.4} ({:.2}% of premium) at 500 steps, {fine:.4} at 1000, ratio {ratio:.3}",
            100.0 * coarse / premium
        ),
    )
}

fn convexity_adjustment_check() -> Outcome {
    let mut worst = 0.0f64;
    let mut signs = true;
    for (t, _, r) in vanilla_grid() {
        let m = MarketModel::flat(100.0, 0.0, 0.2, r).unwrap();
        for z in [-0.05, -0.01, 0.0, 0.02, 0.07] {
            let c = convexity_adjustment(&m, &IntrinsicRiskModel::constant(z), t, &Engine::Closed).unwrap();
            let oracle = 100.0 * (r * t).exp() * (1.0 - (-z * t).exp());
            worst = worst.max((c.adjustment - oracle).abs());
            signs &= c.adjustment.signum() == z.signum() || (z == 0.0 && c.adjustment == 0.0);
        }
    }
    (worst <= 1e-12 && signs, format!("max error {worst:.2e}, signs follow zeta: {signs}"))
}

fn smile_mechanics() -> Outcome {
    let strikes = [80.0, 87.0, 94.0, 100.0, 106.0, 113.0, 120.0];
    let engine = Engine::Pde(PdeGrid::new(400, 200));
    let m = MarketModel::flat(100.0, 0.0, 0.2, 0.03).unwrap();
    let flat = smile_surface(&m, &IntrinsicRiskModel::default(), &strikes, &[0.5, 1.0, 2.0], &engine).unwrap();
    let flat_err = flat.iter().map(|p| (p.implied_vol - 0.2).abs()).fold(0.0, f64::max);

    let zeta = IntrinsicRiskModel::exp_family(
        Tabulated::new(vec![(50.0, -3.0), (150.0, -3.0)]).unwrap(),
        Tabulated::new(vec![(50.0, 1.5), (150.0, -1.5)]).unwrap(),
        0.0,
    );
    let m = MarketModel::flat(100.0, 0.0, 0.2, 0.05).unwrap();
    let skew = smile_surface(&m, &zeta, &strikes, &[0.5, 1.0], &engine).unwrap();
    let monotone = skew
        .chunks(strikes.len())
        .all(|slice| slice.windows(2).all(|w| w[1].implied_vol < w[0].implied_vol));
    (
        flat_err <= 1e-4 && monotone,
        format!("flat surface max error {flat_err:.2e}; skewed surface monotone in strike: {monotone}"),
    )
}

fn put_call_parity() -> Outcome {
    let m = MarketModel::flat(100.0, 0.0, 0.25, 0.04).unwrap();
    let (mut cf_err, mut pde_err) = (0.0f64, 0.0f64);
    for zeta in [
        IntrinsicRiskModel::constant(0.03),
        IntrinsicRiskModel::vol_spread(1.0, 0.3),
        IntrinsicRiskModel::composite(0.02, IntrinsicRiskModel::time_change(0.2)),
    ] {
        for t in [0.5, 1.0] {
            let iz = zeta.integrated(&m, 0.0, t, t).unwrap();
            for k in STRIKES {
                let parity = 100.0 * (-iz).exp() - k * (-0.04 * t).exp();
                let (c, p) = (ClaimSpec::call(k, t).unwrap(), ClaimSpec::put(k, t).unwrap());
                let cf = closed_form_price(&m, &zeta, &c).unwrap().value
                    - closed_form_price(&m, &zeta, &p).unwrap().value;
                let grid = PdeGrid::new(400, 200);
                let pde = pde_price(&m, &zeta, &c, &grid).unwrap().value
                    - pde_price(&m, &zeta, &p, &grid).unwrap().value;
                cf_err = cf_err.max((cf - parity).abs());
                pde_err = pde_err.max((pde - parity).abs());
            }
        }
    }
    (
        cf_err <= 1e-12 && pde_err <= 1e-3,
        format!("max parity gap: closed form {cf_err:.2e}, pde {pde_err:.2e}"),
    )
}

fn vol_spread_time_change() -> Outcome {
    let nu = TermStructure::new(vec![(0.0, 0.02), (0.3, 0.05), (0.7, 0.035)]).unwrap();
    let sigma = TermStructure::new(vec![(0.0, 0.25), (0.5, 0.18)]).unwrap();
    let sigma_bar = TermStructure::new(vec![(0.0, 0.3), (0.4, 0.2), (0.9, 0.22)]).unwrap();
    let m = MarketModel::new(100.0, 0.0, sigma, nu.clone()).unwrap();
    let mut knots: Vec<f64> = nu.knots().iter().chain(sigma_bar.knots()).map(|k| k.0).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let gamma = TermStructure::new(
        knots.iter().map(|&t| (t, nu.value(t) / sigma_bar.value(t).powi(2))).collect(),
    )
    .unwrap();
    let vs = IntrinsicRiskModel::vol_spread(gamma, sigma_bar.clone());
    let tc = IntrinsicRiskModel::time_change(sigma_bar);
    let worst = (0..100)
        .map(|i| {
            let t = i as f64 / 99.0;
            (vs.rate(&m, t, 100.0, 1.0).unwrap() - tc.rate(&m, t, 100.0, 1.0).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    (worst <= 1e-15, format!("100 points, max difference {worst:.2e}"))
}

fn cli_determinism() -> Outcome {
    let cases = golden_cases();
    let mut mismatches = Vec::new();
    for (cmd, config, golden) in &cases {
        let expected = std::fs::read(golden).unwrap();
        for threads in [1, 2, 8] {
            if run_example(cmd, config, Some(threads)) != expected {
                let name = golden.file_name().unwrap().to_string_lossy().into_owned();
                mismatches.push(format!("{name}@{threads}"));
            }
        }
    }
    (
        mismatches.is_empty(),
        format!("{} golden files x 3 worker counts, mismatches: {mismatches:?}", cases.len()),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("zero intrinsic risk reduces to Black-Scholes", 120, zero_intrinsic_reduction),
        ("constant intrinsic risk acts as a dividend yield", 1, dividend_yield_equivalence),
        ("PDE and Monte Carlo agree for state-dependent intrinsic risk", 180, pde_mc_consistency),
        ("Girsanov reweighting reproduces direct expectations", 30, girsanov_reweighting),
        ("hedging-error identity", 120, hedging_error_identity),
        ("convexity adjustment", 1, convexity_adjustment_check),
        ("smile mechanics", 120, smile_mechanics),
        ("put-call parity", 10, put_call_parity),
        ("vol-spread and time-change models coincide", 1, vol_spread_time_change),
        ("CLI determinism across worker counts", 60, cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*budget);
        let pass = ok && in_time;
        failed += usize::from(!pass);
        println!(
            "{} {:>2}. {name}: {detail} [{:.2} s, budget {budget} s{}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over budget" },
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
