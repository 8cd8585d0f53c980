use super::{ClaimSpec, Diagnostics, EngineTag, PricingResult};
use crate::error::{Error, Result};
use crate::intrinsic::IntrinsicRiskModel;
use crate::market::{MarketModel, MeasureTag};
use crate::paths::PathGenerator;
use crate::stats::{par_moments, Moments};

/// Sample moments of each `payoffs[k](X(T))` over `n_paths` risk-subjective
/// paths, undiscounted.
pub(crate) fn subjective_moments(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    payoffs: &[&(dyn Fn(f64) -> f64 + Sync)],
    maturity: f64,
    n_paths: u64,
    n_steps: usize,
    seed: u64,
) -> Result<Vec<Moments>> {
    if n_paths == 0 {
        return Err(Error::config("engine.n_paths must be at least 1"));
    }
    let generator = PathGenerator::new(
        market,
        MeasureTag::RiskSubjective,
        Some(zeta),
        maturity,
        n_steps,
        seed,
    )?;
    par_moments(n_paths, payoffs.len(), |id, out| {
        let x_t = generator.terminal(id)?;
        for (o, h) in out.iter_mut().zip(payoffs) {
            *o = h(x_t);
        }
        Ok(())
    })
}

/// Prices several claims sharing one maturity on the same set of paths.
pub fn mc_price_claims(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    claims: &[ClaimSpec],
    n_paths: u64,
    n_steps: usize,
    seed: u64,
) -> Result<Vec<PricingResult>> {
    let Some(first) = claims.first() else {
        return Ok(Vec::new());
    };
    let maturity = first.maturity();
    if claims.iter().any(|c| c.maturity() != maturity) {
        return Err(Error::config("claims priced together must share a maturity"));
    }
    let payoffs: Vec<Box<dyn Fn(f64) -> f64 + Sync>> = claims
        .iter()
        .map(|c| Box::new(move |x| c.payoff(x)) as Box<dyn Fn(f64) -> f64 + Sync>)
        .collect();
    let refs: Vec<&(dyn Fn(f64) -> f64 + Sync)> = payoffs.iter().map(|b| b.as_ref()).collect();
    let moments = subjective_moments(market, zeta, &refs, maturity, n_paths, n_steps, seed)?;
    let discount = (-market.nu.integral(0.0, maturity)).exp();
    Ok(moments
        .iter()
        .map(|m| PricingResult {
            value: discount * m.mean,
            std_error: discount * m.std_error(),
            engine: EngineTag::Mc,
            diagnostics: Diagnostics::Paths { n_paths, n_steps },
        })
        .collect())
}

/// `D(0)·E_S[h(X(T))/D(T)]` by simulation.
pub fn mc_price(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    claim: &ClaimSpec,
    n_paths: u64,
    n_steps: usize,
    seed: u64,
) -> Result<PricingResult> {
    Ok(mc_price_claims(market, zeta, std::slice::from_ref(claim), n_paths, n_steps, seed)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tabulated::Tabulated;

    fn identity(maturity: f64) -> ClaimSpec {
        ClaimSpec::custom(Tabulated::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap(), maturity).unwrap()
    }

    #[test]
    fn zero_strike_call_recovers_spot() {
        let m = MarketModel::flat(100.0, 0.1, 0.3, 0.04).unwrap();
        let r = mc_price(&m, &IntrinsicRiskModel::default(), &identity(1.0), 100_000, 1, 1).unwrap();
        assert!((r.value - 100.0).abs() < 4.0 * r.std_error);
    }

    #[test]
    fn zero_strike_call_under_intrinsic_risk() {
        for nu in [0.0, 0.05] {
            let m = MarketModel::flat(100.0, 0.1, 0.2, nu).unwrap();
            let z = IntrinsicRiskModel::constant(0.02);
            let r = mc_price(&m, &z, &identity(1.0), 100_000, 4, 2).unwrap();
            assert!((r.value - 98.01986733067553).abs() < 4.0 * r.std_error);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let m = MarketModel::flat(100.0, 0.1, 0.2, 0.03).unwrap();
        let z = IntrinsicRiskModel::constant(0.01);
        let c = ClaimSpec::put(95.0, 0.5).unwrap();
        let a = mc_price(&m, &z, &c, 10_000, 3, 5).unwrap();
        let b = mc_price(&m, &z, &c, 10_000, 3, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.std_error > 0.0);
    }

    #[test]
    fn mixed_maturities_rejected() {
        let m = MarketModel::flat(100.0, 0.1, 0.2, 0.03).unwrap();
        let claims = [ClaimSpec::call(100.0, 1.0).unwrap(), ClaimSpec::call(100.0, 2.0).unwrap()];
        assert!(mc_price_claims(&m, &IntrinsicRiskModel::default(), &claims, 10, 1, 0).is_err());
    }
}
