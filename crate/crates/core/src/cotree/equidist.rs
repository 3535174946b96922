//! Empirical frequency of an event against its exact wp/wlp bracket.

use serde::{Deserialize, Serialize};

use crate::approx::{converge_bracket, Bracket};
use crate::erat::ERat;
use crate::lazy::StepBudget;

use super::dist::{DistSpec, Event, Outcome};
use super::expect::{wlp_chain, wp_chain, Expectation};
use super::sample::{sample_many, BitSource};
use super::tree::Cotree;
use super::CotreeError;

/// Fuels tried, in order, when searching for a tight bracket.
const FUEL_SCHEDULE: &[usize] = &[8, 16, 32, 64, 128, 256];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistReport {
    pub dist: DistSpec,
    pub event: Event,
    pub seed: u64,
    pub n_samples: u64,
    /// Samples that reached a `Bot` subtree.
    pub n_diverged: u64,
    /// Samples that ran out of per-sample steps.
    pub n_budget_exhausted: u64,
    pub n_hits: u64,
    /// `n_hits` over the samples that produced a value.
    pub empirical_freq: f64,
    pub wp_lower: ERat,
    pub wlp_upper: ERat,
    pub fuel: usize,
    pub midpoint: f64,
    pub tolerance: ERat,
    pub pass: bool,
}

/// The tightest wp/wlp bracket for `[event]` with gap at most `eps`, trying
/// fuels from a fixed doubling schedule.
pub fn event_bracket(
    t: &Cotree<Outcome>,
    event: Event,
    eps: &ERat,
    steps: u64,
) -> Result<(Bracket, usize), CotreeError> {
    let f = Expectation::indicator(move |o| event.matches(o));
    let mut last_gap = ERat::infinity();
    for &fuel in FUEL_SCHEDULE {
        let budget = StepBudget::new(steps);
        let lo = wp_chain(&f, t, fuel, &budget)?;
        let hi = wlp_chain(&f, t, fuel, &budget)?;
        match converge_bracket(&lo, &hi, eps) {
            Ok(b) => return Ok((b, fuel)),
            Err(_) => last_gap = hi.last().sub_trunc(lo.last()),
        }
    }
    Err(CotreeError::BracketNotConverged {
        fuel: *FUEL_SCHEDULE.last().expect("nonempty schedule"),
        gap: last_gap,
    })
}

/// Draw `n` samples with the seeded bit source and compare the frequency
/// of `event` with the midpoint of a bracket of width at most `tol / 10`.
///
/// `steps` bounds each sample and each bracket evaluation separately.
pub fn equidist(
    dist: DistSpec,
    event: Event,
    n: u64,
    seed: u64,
    tolerance: &ERat,
    steps: u64,
) -> Result<EquidistReport, CotreeError> {
    event.check_against(&dist)?;
    if n == 0 {
        return Err(CotreeError::InvalidParameter("need at least one sample".into()));
    }
    let t = dist.build()?;
    let eps = tolerance
        .checked_div(&ERat::from(10))
        .ok_or_else(|| CotreeError::InvalidParameter("tolerance must be finite".into()))?;
    let (bracket, fuel) = event_bracket(&t, event, &eps, steps)?;

    let stats = sample_many(&t, &mut BitSource::seeded(seed), n, steps);
    let n_hits: u64 = stats
        .counts
        .iter()
        .filter(|(o, _)| event.matches(o))
        .map(|(_, c)| c)
        .sum();
    let produced = stats.sampled();
    let empirical_freq = if produced == 0 {
        f64::NAN
    } else {
        n_hits as f64 / produced as f64
    };
    let midpoint = bracket.midpoint_f64();
    let pass = (empirical_freq - midpoint).abs() <= tolerance.to_f64();
    Ok(EquidistReport {
        dist,
        event,
        seed,
        n_samples: n,
        n_diverged: stats.diverged_bot,
        n_budget_exhausted: stats.diverged_budget,
        n_hits,
        empirical_freq,
        wp_lower: bracket.lower,
        wlp_upper: bracket.upper,
        fuel,
        midpoint,
        tolerance: tolerance.clone(),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, d: u64) -> ERat {
        ERat::new(n, d)
    }

    #[test]
    fn certain_coin_is_exact() {
        let r = equidist(
            "bernoulli:1/1".parse().unwrap(),
            Event::Is(true),
            100,
            3,
            &q(1, 100),
            1000,
        )
        .unwrap();
        assert_eq!(r.empirical_freq, 1.0);
        assert_eq!((r.wp_lower.clone(), r.wlp_upper.clone()), (q(1, 1), q(1, 1)));
        assert!(r.pass);
    }

    #[test]
    fn small_run_passes_loose_tolerance() {
        let r = equidist(
            "bernoulli:2/3".parse().unwrap(),
            Event::Is(true),
            5000,
            11,
            &q(1, 20),
            10_000,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.n_diverged, 0);
        assert!(r.wp_lower <= q(2, 3) && q(2, 3) <= r.wlp_upper);
    }

    #[test]
    fn rejects_mismatched_events() {
        assert!(equidist("uniform:3".parse().unwrap(), Event::Is(true), 10, 0, &q(1, 10), 1000).is_err());
        assert!(equidist("uniform:3".parse().unwrap(), Event::Equals(0), 0, 0, &q(1, 10), 1000).is_err());
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = equidist("uniform:3".parse().unwrap(), Event::Equals(1), 300, 2, &q(1, 10), 1000).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: EquidistReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!(text.contains("\"dist\":\"uniform:3\""));
    }
}
