//! Randomized depth-bounded checks of the Kleene algebra axioms.
//!
//! Each trial draws three regexes of at most four constructors and checks
//! every equational axiom on the compiled tries with [`equiv_upto`]. The
//! star induction rules are checked on the instances `x := a*b` (left) and
//! `x := ba*` (right), where the premise is itself a theorem, and as
//! implications on a random `x`. Bounded containment is sound for the
//! implications: every step of the inductive argument only looks at words
//! no longer than the one being checked.
//!
//! The suite also records which join identity agrees with containment:
//! `a ⊑ b ⟺ a + b = b` or `a ⊑ b ⟺ a + b = a`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::regex::{compile, Regex};
use super::trie::{containment_witness, equiv_upto, Equiv};
use super::{Alphabet, LangError};
use crate::lazy::{Exhausted, StepBudget};

/// Counterexamples kept per law.
const KEEP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    /// `lhs = rhs`
    Equation,
    /// `lhs ⊑ rhs`
    Containment,
    /// premise `p ⊑ x` implies conclusion `lhs ⊑ rhs`
    Implication,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawFailure {
    pub trial: usize,
    pub lhs: String,
    pub rhs: String,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawResult {
    pub name: String,
    pub kind: LawKind,
    pub checked: usize,
    /// Implications whose premise failed, so nothing was concluded.
    pub vacuous: usize,
    pub failures: usize,
    pub counterexamples: Vec<LawFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderIdentity {
    pub pairs: usize,
    /// Pairs with `a ⊑ b` on the checked fragment.
    pub contained: usize,
    /// Pairs where `a ⊑ b` and `a + b = b` agree.
    pub agrees_sum_is_upper: usize,
    /// Pairs where `a ⊑ b` and `a + b = a` agree.
    pub agrees_sum_is_lower: usize,
    /// The identity that agreed on every pair, if any.
    pub matching: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawsReport {
    pub depth: usize,
    pub trials: usize,
    pub seed: u64,
    pub alphabet: String,
    pub laws: Vec<LawResult>,
    pub order_identity: OrderIdentity,
    pub total_counterexamples: usize,
}

impl LawsReport {
    pub fn passed(&self) -> bool {
        self.total_counterexamples == 0
    }
}

/// A random regex with between 1 and `max_size` constructors.
pub fn random_regex(rng: &mut impl Rng, sigma: &Alphabet, max_size: usize) -> Regex {
    let size = rng.random_range(1..=max_size.max(1));
    regex_of_size(rng, sigma, size)
}

fn regex_of_size(rng: &mut impl Rng, sigma: &Alphabet, size: usize) -> Regex {
    if size <= 1 {
        let k = sigma.len();
        return match rng.random_range(0..k + 2) {
            0 => Regex::Empty,
            1 => Regex::Eps,
            i => Regex::Chr(sigma.symbol(i - 2)),
        };
    }
    if size == 2 || rng.random_bool(0.3) {
        let a = regex_of_size(rng, sigma, size - 1);
        return if rng.random_bool(0.7) {
            Regex::star(a)
        } else {
            Regex::comp(a)
        };
    }
    let left = rng.random_range(1..size - 1);
    let a = regex_of_size(rng, sigma, left);
    let b = regex_of_size(rng, sigma, size - 1 - left);
    match rng.random_range(0..5) {
        0 | 1 => Regex::cat(a, b),
        2 | 3 => Regex::union(a, b),
        _ => Regex::inter(a, b),
    }
}

struct Ctx<'a> {
    sigma: &'a Alphabet,
    depth: usize,
    steps: u64,
}

impl Ctx<'_> {
    fn lang(&self, r: &Regex) -> Result<super::Lang, LangError> {
        compile(r, self.sigma)
    }

    /// A word in exactly one of the two languages, or in `lhs` only when
    /// `containment` is set.
    fn witness(&self, lhs: &Regex, rhs: &Regex, containment: bool) -> Result<Option<String>, LangError> {
        let (l, r) = (self.lang(lhs)?, self.lang(rhs)?);
        let budget = StepBudget::new(self.steps);
        let w = if containment {
            containment_witness(&l, &r, self.depth, &budget)?
        } else {
            match equiv_upto(&l, &r, self.depth, &budget)? {
                Equiv::Equal => None,
                Equiv::Counterexample(w) => Some(w),
            }
        };
        Ok(w.map(|w| self.sigma.decode(&w)))
    }

    fn le(&self, lhs: &Regex, rhs: &Regex) -> Result<bool, LangError> {
        Ok(self.witness(lhs, rhs, true)?.is_none())
    }
}

/// `(premise, lhs, rhs)`; the premise is a pair `(p, x)` meaning `p ⊑ x`.
type Instance = (Option<(Regex, Regex)>, Regex, Regex);

struct Law {
    name: &'static str,
    kind: LawKind,
    /// Builds the instance at `a, b, c`.
    build: fn(&Regex, &Regex, &Regex) -> Instance,
}

fn laws() -> Vec<Law> {
    use Regex as R;
    let eq = LawKind::Equation;
    let le = LawKind::Containment;
    let imp = LawKind::Implication;
    vec![
        Law {
            name: "plus_assoc",
            kind: eq,
            build: |a, b, c| (None, u_(cl(a), u_(cl(b), cl(c))), u_(u_(cl(a), cl(b)), cl(c))),
        },
        Law {
            name: "plus_comm",
            kind: eq,
            build: |a, b, _| (None, u_(cl(a), cl(b)), u_(cl(b), cl(a))),
        },
        Law {
            name: "plus_idem",
            kind: eq,
            build: |a, _, _| (None, u_(cl(a), cl(a)), cl(a)),
        },
        Law {
            name: "plus_zero",
            kind: eq,
            build: |a, _, _| (None, u_(cl(a), R::Empty), cl(a)),
        },
        Law {
            name: "cat_assoc",
            kind: eq,
            build: |a, b, c| (None, c_(cl(a), c_(cl(b), cl(c))), c_(c_(cl(a), cl(b)), cl(c))),
        },
        Law {
            name: "cat_unit_left",
            kind: eq,
            build: |a, _, _| (None, c_(R::Eps, cl(a)), cl(a)),
        },
        Law {
            name: "cat_unit_right",
            kind: eq,
            build: |a, _, _| (None, c_(cl(a), R::Eps), cl(a)),
        },
        Law {
            name: "cat_zero_left",
            kind: eq,
            build: |a, _, _| (None, c_(R::Empty, cl(a)), R::Empty),
        },
        Law {
            name: "cat_zero_right",
            kind: eq,
            build: |a, _, _| (None, c_(cl(a), R::Empty), R::Empty),
        },
        Law {
            name: "distrib_left",
            kind: eq,
            build: |a, b, c| {
                (
                    None,
                    c_(cl(a), u_(cl(b), cl(c))),
                    u_(c_(cl(a), cl(b)), c_(cl(a), cl(c))),
                )
            },
        },
        Law {
            name: "distrib_right",
            kind: eq,
            build: |a, b, c| {
                (
                    None,
                    c_(u_(cl(a), cl(b)), cl(c)),
                    u_(c_(cl(a), cl(c)), c_(cl(b), cl(c))),
                )
            },
        },
        Law {
            name: "star_unfold_left",
            kind: eq,
            build: |a, _, _| (None, u_(R::Eps, c_(cl(a), s_(cl(a)))), s_(cl(a))),
        },
        Law {
            name: "star_unfold_right",
            kind: eq,
            build: |a, _, _| (None, u_(R::Eps, c_(s_(cl(a)), cl(a))), s_(cl(a))),
        },
        Law {
            name: "star_induction_left_premise_at_a*b",
            kind: le,
            build: |a, b, _| {
                let x = c_(s_(cl(a)), cl(b));
                (None, u_(cl(b), c_(cl(a), x.clone())), x)
            },
        },
        Law {
            name: "star_induction_right_premise_at_ba*",
            kind: le,
            build: |a, b, _| {
                let x = c_(cl(b), s_(cl(a)));
                (None, u_(cl(b), c_(x.clone(), cl(a))), x)
            },
        },
        Law {
            name: "star_induction_left",
            kind: imp,
            build: |a, b, x| (Some((u_(cl(b), c_(cl(a), cl(x))), cl(x))), c_(s_(cl(a)), cl(b)), cl(x)),
        },
        Law {
            name: "star_induction_right",
            kind: imp,
            build: |a, b, x| (Some((u_(cl(b), c_(cl(x), cl(a))), cl(x))), c_(cl(b), s_(cl(a))), cl(x)),
        },
    ]
}

fn cl(r: &Regex) -> Regex {
    r.clone()
}

fn u_(a: Regex, b: Regex) -> Regex {
    Regex::union(a, b)
}

fn c_(a: Regex, b: Regex) -> Regex {
    Regex::cat(a, b)
}

fn s_(a: Regex) -> Regex {
    Regex::star(a)
}

/// Run every law on `trials` random triples, comparing on words of length
/// at most `depth`. Each comparison gets its own budget of
/// `steps_per_check` forces.
pub fn ka_axiom_suite(
    sigma: &Alphabet,
    depth: usize,
    trials: usize,
    seed: u64,
    steps_per_check: u64,
) -> Result<LawsReport, LangError> {
    let ctx = Ctx {
        sigma,
        depth,
        steps: steps_per_check,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let laws = laws();
    let mut results: Vec<LawResult> = laws
        .iter()
        .map(|l| LawResult {
            name: l.name.to_string(),
            kind: l.kind,
            checked: 0,
            vacuous: 0,
            failures: 0,
            counterexamples: Vec::new(),
        })
        .collect();
    let mut order = OrderIdentity {
        pairs: 0,
        contained: 0,
        agrees_sum_is_upper: 0,
        agrees_sum_is_lower: 0,
        matching: None,
    };

    for trial in 0..trials {
        let a = random_regex(&mut rng, sigma, 4);
        let b = random_regex(&mut rng, sigma, 4);
        let c = random_regex(&mut rng, sigma, 4);
        for (law, res) in laws.iter().zip(results.iter_mut()) {
            let (premise, lhs, rhs) = (law.build)(&a, &b, &c);
            if let Some((p, x)) = premise {
                if !ctx.le(&p, &x)? {
                    res.vacuous += 1;
                    continue;
                }
            }
            res.checked += 1;
            let containment = law.kind != LawKind::Equation;
            if let Some(witness) = ctx.witness(&lhs, &rhs, containment)? {
                res.failures += 1;
                if res.counterexamples.len() < KEEP {
                    res.counterexamples.push(LawFailure {
                        trial,
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                        witness,
                    });
                }
            }
        }
        // One unrelated pair and one pair with guaranteed containment.
        for (x, y) in [(a.clone(), b.clone()), (a.clone(), Regex::union(b.clone(), a.clone()))] {
            let le = ctx.le(&x, &y)?;
            let sum = Regex::union(x.clone(), y.clone());
            let sum_is_y = ctx.witness(&sum, &y, false)?.is_none();
            let sum_is_x = ctx.witness(&sum, &x, false)?.is_none();
            order.pairs += 1;
            order.contained += le as usize;
            order.agrees_sum_is_upper += (le == sum_is_y) as usize;
            order.agrees_sum_is_lower += (le == sum_is_x) as usize;
        }
    }
    order.matching = if order.agrees_sum_is_upper == order.pairs {
        Some("a + b = b".to_string())
    } else if order.agrees_sum_is_lower == order.pairs {
        Some("a + b = a".to_string())
    } else {
        None
    };

    let total_counterexamples = results.iter().map(|r| r.failures).sum();
    Ok(LawsReport {
        depth,
        trials,
        seed,
        alphabet: sigma.to_string(),
        laws: results,
        order_identity: order,
        total_counterexamples,
    })
}

/// Keeps the budget error type uniform for callers that only see
/// [`LangError`].
impl From<Exhausted> for LangError {
    fn from(_: Exhausted) -> Self {
        LangError::Exhausted
    }
}
