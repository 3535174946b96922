//! Running a cotree as a sampler on a stream of bits.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lazy::StepBudget;

use super::tree::{Cotree, CotreeCell};

/// Where sampling bits come from.
///
/// The seeded source is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`);
/// each 64-bit output is consumed most significant bit first.
#[derive(Debug, Clone)]
pub enum BitSource {
    Prng { rng: Box<ChaCha8Rng>, word: u64, left: u32 },
    Finite { bits: Vec<bool>, pos: usize },
}

impl BitSource {
    pub fn seeded(seed: u64) -> Self {
        BitSource::Prng {
            rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
            word: 0,
            left: 0,
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitSource::Finite { bits, pos: 0 }
    }

    /// The next bit, or `None` once a finite source runs dry.
    pub fn next_bit(&mut self) -> Option<bool> {
        match self {
            BitSource::Prng { rng, word, left } => {
                if *left == 0 {
                    *word = rng.next_u64();
                    *left = 64;
                }
                *left -= 1;
                Some((*word >> *left) & 1 == 1)
            }
            BitSource::Finite { bits, pos } => {
                let b = bits.get(*pos).copied();
                if b.is_some() {
                    *pos += 1;
                }
                b
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergeReason {
    /// The walk reached a `Bot` subtree.
    Bot,
    /// The per-sample step budget ran out first.
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleOutcome<A> {
    Sampled {
        value: A,
        bits_consumed: usize,
    },
    Diverged {
        reason: DivergeReason,
        bits_consumed: usize,
    },
    BitsExhausted {
        bits_consumed: usize,
    },
}

/// Walk from the root, taking the `true` child on bit 1, until a leaf.
pub fn sample<A: Clone + 'static>(t: &Cotree<A>, bits: &mut BitSource, budget: &StepBudget) -> SampleOutcome<A> {
    let mut cur = t.clone();
    let mut used = 0;
    loop {
        let next = match cur.force(budget) {
            Err(_) => {
                return SampleOutcome::Diverged {
                    reason: DivergeReason::Budget,
                    bits_consumed: used,
                }
            }
            Ok(CotreeCell::Bot) => {
                return SampleOutcome::Diverged {
                    reason: DivergeReason::Bot,
                    bits_consumed: used,
                }
            }
            Ok(CotreeCell::Leaf(a)) => {
                return SampleOutcome::Sampled {
                    value: a.clone(),
                    bits_consumed: used,
                }
            }
            Ok(CotreeCell::Node(l, r)) => match bits.next_bit() {
                None => return SampleOutcome::BitsExhausted { bits_consumed: used },
                Some(b) => {
                    used += 1;
                    if b {
                        l.clone()
                    } else {
                        r.clone()
                    }
                }
            },
        };
        cur = next;
    }
}

/// Tallies of repeated sampling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleStats<A: Ord> {
    pub n: u64,
    pub counts: BTreeMap<A, u64>,
    pub diverged_bot: u64,
    pub diverged_budget: u64,
    pub bits_exhausted: u64,
    pub total_bits: u64,
}

impl<A: Ord> SampleStats<A> {
    pub fn sampled(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Draw `n` samples from one bit source, each with a fresh budget of
/// `steps_per_sample` forces.
pub fn sample_many<A: Clone + Ord + 'static>(
    t: &Cotree<A>,
    bits: &mut BitSource,
    n: u64,
    steps_per_sample: u64,
) -> SampleStats<A> {
    let mut stats = SampleStats {
        n,
        counts: BTreeMap::new(),
        diverged_bot: 0,
        diverged_budget: 0,
        bits_exhausted: 0,
        total_bits: 0,
    };
    for _ in 0..n {
        let out = sample(t, bits, &StepBudget::new(steps_per_sample));
        let used = match out {
            SampleOutcome::Sampled { value, bits_consumed } => {
                *stats.counts.entry(value).or_insert(0) += 1;
                bits_consumed
            }
            SampleOutcome::Diverged { reason, bits_consumed } => {
                match reason {
                    DivergeReason::Bot => stats.diverged_bot += 1,
                    DivergeReason::Budget => stats.diverged_budget += 1,
                }
                bits_consumed
            }
            SampleOutcome::BitsExhausted { bits_consumed } => {
                stats.bits_exhausted += 1;
                bits_consumed
            }
        };
        stats.total_bits += used as u64;
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cotree::dist::bernoulli;
    use crate::cotree::tree::{bits_from_str, iter_cotree};
    use std::ops::ControlFlow::Continue;

    fn src(s: &str) -> BitSource {
        BitSource::from_bits(bits_from_str(s).unwrap())
    }

    #[test]
    fn two_thirds_paths() {
        let t = bernoulli(2, 3).unwrap();
        let b = StepBudget::default();
        assert_eq!(
            sample(&t, &mut src("1"), &b),
            SampleOutcome::Sampled {
                value: true,
                bits_consumed: 1
            }
        );
        assert_eq!(
            sample(&t, &mut src("01"), &b),
            SampleOutcome::Sampled {
                value: false,
                bits_consumed: 2
            }
        );
        assert_eq!(
            sample(&t, &mut src("00"), &b),
            SampleOutcome::BitsExhausted { bits_consumed: 2 }
        );
        assert_eq!(
            sample(&t, &mut src("001"), &b),
            SampleOutcome::Sampled {
                value: true,
                bits_consumed: 3
            }
        );
    }

    #[test]
    fn leaves_bottoms_and_budgets() {
        let b = StepBudget::default();
        assert_eq!(
            sample(&Cotree::leaf('a'), &mut src(""), &b),
            SampleOutcome::Sampled {
                value: 'a',
                bits_consumed: 0
            }
        );
        assert_eq!(
            sample(&Cotree::<u8>::bot(), &mut src("1"), &b),
            SampleOutcome::Diverged {
                reason: DivergeReason::Bot,
                bits_consumed: 0
            }
        );
        let spin = iter_cotree(|_: &()| Cotree::<std::ops::ControlFlow<u8, ()>>::leaf(Continue(())), ());
        assert_eq!(
            sample(&spin, &mut BitSource::seeded(0), &StepBudget::new(50)),
            SampleOutcome::Diverged {
                reason: DivergeReason::Budget,
                bits_consumed: 0
            }
        );
    }

    #[test]
    fn seeded_source_is_reproducible() {
        let take = |seed| {
            let mut s = BitSource::seeded(seed);
            (0..200).map(|_| s.next_bit().unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(take(5), take(5));
        assert_ne!(take(5), take(6));
        let ones = take(5).iter().filter(|&&b| b).count();
        assert!((60..140).contains(&ones));
    }

    #[test]
    fn tallies() {
        let t = bernoulli(2, 3).unwrap();
        let stats = sample_many(&t, &mut BitSource::seeded(1), 3000, 1000);
        assert_eq!(stats.sampled(), 3000);
        let freq = stats.counts[&true] as f64 / 3000.0;
        assert!((freq - 2.0 / 3.0).abs() < 0.05, "{freq}");
        // Expected bits E solves E = 1/2 + 2/4 + (2 + E)/4, so E = 2.
        let mean_bits = stats.total_bits as f64 / 3000.0;
        assert!((mean_bits - 2.0).abs() < 0.15, "{mean_bits}");
    }
}
