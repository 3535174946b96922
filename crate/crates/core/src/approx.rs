//! Fuel-indexed approximation chains.
//!
//! A continuous function on a coinductive carrier is determined by a monotone
//! function on its finite basis. Evaluating it at a carrier `a` means folding
//! the basis function over the truncations `idl(a, 0), idl(a, 1), ...` and
//! taking the supremum of the resulting chain. The supremum is not computable
//! in general, so [`ext_eval`] produces the chain itself as an
//! [`ApproxChain`], and [`converge`] / [`converge_bracket`] decide what, if
//! anything, can be concluded from it.

use std::fmt;

use crate::erat::ERat;
use crate::lazy::{Exhausted, StepBudget};

/// A partial order. `leq` must be reflexive, antisymmetric and transitive.
pub trait Poset {
    fn leq(&self, other: &Self) -> bool;
}

macro_rules! total_poset {
    ($($t:ty),*) => {
        $(impl Poset for $t {
            fn leq(&self, other: &Self) -> bool {
                self <= other
            }
        })*
    };
}

total_poset!(u8, u16, u32, u64, usize, i32, i64, bool, ERat);

impl Poset for () {
    fn leq(&self, _: &Self) -> bool {
        true
    }
}

/// A flat domain: `Bot` below every value, distinct values incomparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Flat<T> {
    #[default]
    Bot,
    Val(T),
}

impl<T> Flat<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Flat<U> {
        match self {
            Flat::Bot => Flat::Bot,
            Flat::Val(v) => Flat::Val(f(v)),
        }
    }

    pub fn into_option(self) -> Option<T> {
        match self {
            Flat::Bot => None,
            Flat::Val(v) => Some(v),
        }
    }
}

impl<T: PartialEq> Poset for Flat<T> {
    fn leq(&self, other: &Self) -> bool {
        match (self, other) {
            (Flat::Bot, _) => true,
            (Flat::Val(a), Flat::Val(b)) => a == b,
            (Flat::Val(_), Flat::Bot) => false,
        }
    }
}

/// A carrier with a finite basis it can be truncated into.
pub trait Approximable {
    type Basis;

    /// The `fuel`-th finite approximation.
    fn idl(&self, fuel: usize, budget: &StepBudget) -> Result<Self::Basis, Exhausted>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    /// Approximation from below (continuous extensions).
    Increasing,
    /// Approximation from above (cocontinuous extensions).
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Every value from this fuel up to the end of the chain is equal.
    Stabilized(usize),
    /// No repeated tail was observed; the chain only gives bounds.
    BoundsOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("approximation chain is not monotone at fuel {fuel}")]
    MonotonicityViolation { fuel: usize },
    #[error(transparent)]
    Exhausted(#[from] Exhausted),
}

/// Values of a basis function on successive truncations, indexed by fuel.
#[derive(Clone, PartialEq)]
pub struct ApproxChain<V> {
    values: Vec<V>,
    direction: Direction,
    verdict: Verdict,
}

impl<V: Poset + PartialEq> ApproxChain<V> {
    /// Validate the chain order and compute its verdict.
    ///
    /// Panics if `values` is empty; a chain always has a fuel-0 entry.
    pub fn from_values(values: Vec<V>, direction: Direction) -> Result<Self, ChainError> {
        assert!(!values.is_empty(), "approximation chain needs a fuel-0 value");
        for (i, w) in values.windows(2).enumerate() {
            let ok = match direction {
                Direction::Increasing => w[0].leq(&w[1]),
                Direction::Decreasing => w[1].leq(&w[0]),
            };
            if !ok {
                return Err(ChainError::MonotonicityViolation { fuel: i + 1 });
            }
        }
        let last = values.len() - 1;
        let mut k = last;
        while k > 0 && values[k - 1] == values[last] {
            k -= 1;
        }
        let verdict = if k < last {
            Verdict::Stabilized(k)
        } else {
            Verdict::BoundsOnly
        };
        Ok(ApproxChain {
            values,
            direction,
            verdict,
        })
    }
}

impl<V> ApproxChain<V> {
    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    /// Largest fuel in the chain.
    pub fn max_fuel(&self) -> usize {
        self.values.len() - 1
    }

    pub fn at(&self, fuel: usize) -> Option<&V> {
        self.values.get(fuel)
    }

    /// The value at the highest fuel: the tightest bound the chain offers.
    pub fn last(&self) -> &V {
        self.values.last().expect("nonempty chain")
    }

    pub fn stabilized_value(&self) -> Option<&V> {
        match self.verdict {
            Verdict::Stabilized(k) => Some(&self.values[k]),
            Verdict::BoundsOnly => None,
        }
    }
}

impl<V: fmt::Debug> fmt::Debug for ApproxChain<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ApproxChain")
            .field("values", &self.values)
            .field("direction", &self.direction)
            .field("verdict", &self.verdict)
            .finish()
    }
}

/// `f` applied `n` times to `z`.
pub fn iter<A>(z: A, mut f: impl FnMut(A) -> A, n: usize) -> A {
    let mut x = z;
    for _ in 0..n {
        x = f(x);
    }
    x
}

/// The increasing chain `iter(bottom, f, i)` for `i` in `0..=fuel`.
///
/// `f` is expected to be monotone; a violation is reported, not assumed away.
pub fn coiter_approx<A: Poset + PartialEq + Clone>(
    mut f: impl FnMut(&A) -> A,
    bottom: A,
    fuel: usize,
) -> Result<ApproxChain<A>, ChainError> {
    let mut values = Vec::with_capacity(fuel + 1);
    values.push(bottom);
    for _ in 0..fuel {
        let next = f(values.last().expect("nonempty"));
        values.push(next);
    }
    ApproxChain::from_values(values, Direction::Increasing)
}

/// Evaluate the extension of `basis_fn` at a carrier described by its
/// truncation function `idl`, for fuels `0..=max_fuel`.
pub fn ext_eval<B, V: Poset + PartialEq>(
    mut idl: impl FnMut(usize) -> Result<B, Exhausted>,
    mut basis_fn: impl FnMut(&B) -> V,
    max_fuel: usize,
    direction: Direction,
) -> Result<ApproxChain<V>, ChainError> {
    let mut values = Vec::with_capacity(max_fuel + 1);
    for i in 0..=max_fuel {
        values.push(basis_fn(&idl(i)?));
    }
    ApproxChain::from_values(values, direction)
}

/// [`ext_eval`] for carriers implementing [`Approximable`].
pub fn extend<C: Approximable, V: Poset + PartialEq>(
    carrier: &C,
    basis_fn: impl FnMut(&C::Basis) -> V,
    max_fuel: usize,
    direction: Direction,
    budget: &StepBudget,
) -> Result<ApproxChain<V>, ChainError> {
    ext_eval(|i| carrier.idl(i, budget), basis_fn, max_fuel, direction)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Take the value at exactly this fuel.
    FixedFuel(usize),
    /// Take the final value, provided the last this-many entries agree.
    StabilizeWindow(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("approximation did not converge under the requested policy")]
pub struct NotConverged;

pub fn converge<V: Clone + PartialEq>(chain: &ApproxChain<V>, policy: Policy) -> Result<V, NotConverged> {
    match policy {
        Policy::FixedFuel(n) => chain.at(n).cloned().ok_or(NotConverged),
        Policy::StabilizeWindow(w) => {
            let vals = chain.values();
            let w = w.max(1);
            if vals.len() < w {
                return Err(NotConverged);
            }
            let tail = &vals[vals.len() - w..];
            if tail.iter().all(|v| *v == tail[0]) {
                Ok(tail[0].clone())
            } else {
                Err(NotConverged)
            }
        }
    }
}

/// Lower and upper bounds drawn from a paired increasing/decreasing chain.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Bracket {
    pub lower: ERat,
    /// First fuel at which `lower` is attained.
    pub lower_fuel: usize,
    pub upper: ERat,
    /// First fuel at which `upper` is attained.
    pub upper_fuel: usize,
}

impl Bracket {
    pub fn gap(&self) -> ERat {
        self.upper.sub_trunc(&self.lower)
    }

    pub fn contains(&self, x: &ERat) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// Midpoint as a float; `∞` if the upper bound is infinite.
    pub fn midpoint_f64(&self) -> f64 {
        (&self.lower + &self.upper).div2().to_f64()
    }
}

/// The tightest bracket offered by an increasing `lower` and a decreasing
/// `upper` chain.
pub fn tightest_bracket(lower: &ApproxChain<ERat>, upper: &ApproxChain<ERat>) -> Bracket {
    debug_assert_eq!(lower.direction(), Direction::Increasing);
    debug_assert_eq!(upper.direction(), Direction::Decreasing);
    let lo = lower.last().clone();
    let hi = upper.last().clone();
    let lower_fuel = lower.values().iter().position(|v| *v == lo).expect("present");
    let upper_fuel = upper.values().iter().position(|v| *v == hi).expect("present");
    Bracket {
        lower: lo,
        lower_fuel,
        upper: hi,
        upper_fuel,
    }
}

/// Succeeds when the tightest bracket has `upper - lower <= eps`.
pub fn converge_bracket(
    lower: &ApproxChain<ERat>,
    upper: &ApproxChain<ERat>,
    eps: &ERat,
) -> Result<Bracket, NotConverged> {
    let b = tightest_bracket(lower, upper);
    if &b.gap() <= eps {
        Ok(b)
    } else {
        Err(NotConverged)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, d: u64) -> ERat {
        ERat::new(n, d)
    }

    #[test]
    fn iter_examples() {
        assert_eq!(iter(0, |x| x + 1, 3), 3);
        assert_eq!(iter(7, |x| x + 1, 0), 7);
        assert_eq!(iter(1, |x| x * 2, 4), 16);
    }

    #[test]
    fn coiter_identity_is_constant() {
        let c = coiter_approx(|x: &Flat<u8>| *x, Flat::Bot, 3).unwrap();
        assert_eq!(c.values(), &[Flat::Bot; 4]);
        assert_eq!(c.verdict(), Verdict::Stabilized(0));
    }

    #[test]
    fn coiter_reaches_fixed_point() {
        let c = coiter_approx(|x: &u32| (*x + 1).min(2), 0, 4).unwrap();
        assert_eq!(c.values(), &[0, 1, 2, 2, 2]);
        assert_eq!(c.verdict(), Verdict::Stabilized(2));
    }

    #[test]
    fn coiter_affine_map_matches_closed_form() {
        // Oracle: x_k = (2/3)(1 - 4^-k), the closed form of x -> 1/2 + x/4.
        let closed = |k: u32| {
            let p = 4u64.pow(k);
            ERat::new(2 * (p - 1), 3 * p)
        };
        let c = coiter_approx(|x: &ERat| &q(1, 2) + &x.div2().div2(), ERat::zero(), 3).unwrap();
        let expected: Vec<ERat> = (0..=3).map(closed).collect();
        assert_eq!(c.values(), &expected[..]);
        assert_eq!(c.values(), &[ERat::zero(), q(1, 2), q(5, 8), q(21, 32)]);
        assert_eq!(c.verdict(), Verdict::BoundsOnly);
    }

    #[test]
    fn ext_eval_constant_and_violation() {
        let c = ext_eval(Ok, |_| 7u32, 5, Direction::Increasing).unwrap();
        assert_eq!(c.verdict(), Verdict::Stabilized(0));
        let err = ext_eval(Ok, |&i| 10 - i as u32, 3, Direction::Increasing).unwrap_err();
        assert_eq!(err, ChainError::MonotonicityViolation { fuel: 1 });
        let ok = ext_eval(Ok, |&i| 10 - i as u32, 3, Direction::Decreasing).unwrap();
        assert_eq!(ok.values(), &[10, 9, 8, 7]);
    }

    #[test]
    fn ext_eval_propagates_exhaustion() {
        let err = ext_eval(
            |i| if i < 2 { Ok(i) } else { Err(Exhausted) },
            |&i| i,
            4,
            Direction::Increasing,
        )
        .unwrap_err();
        assert_eq!(err, ChainError::Exhausted(Exhausted));
    }

    #[test]
    fn converge_policies() {
        let c = ApproxChain::from_values(vec![0u32, 1, 2, 3, 3, 3], Direction::Increasing).unwrap();
        assert_eq!(c.verdict(), Verdict::Stabilized(3));
        assert_eq!(converge(&c, Policy::StabilizeWindow(2)), Ok(3));
        assert_eq!(converge(&c, Policy::FixedFuel(1)), Ok(1));
        assert_eq!(converge(&c, Policy::FixedFuel(6)), Err(NotConverged));
        let up = ApproxChain::from_values(vec![0u32, 1, 2, 3, 4], Direction::Increasing).unwrap();
        assert_eq!(up.verdict(), Verdict::BoundsOnly);
        assert_eq!(converge(&up, Policy::StabilizeWindow(3)), Err(NotConverged));
    }

    #[test]
    fn single_value_chain_is_bounds_only() {
        let c = ApproxChain::from_values(vec![5u8], Direction::Increasing).unwrap();
        assert_eq!(c.verdict(), Verdict::BoundsOnly);
    }

    #[test]
    fn bracket_uses_tightest_ends() {
        let lo = ApproxChain::from_values(vec![q(0, 1), q(1, 2), q(1, 2)], Direction::Increasing).unwrap();
        let hi = ApproxChain::from_values(vec![q(1, 1), q(3, 4), q(3, 4)], Direction::Decreasing).unwrap();
        let b = converge_bracket(&lo, &hi, &q(1, 4)).unwrap();
        assert_eq!((b.lower_fuel, b.upper_fuel), (1, 1));
        assert_eq!(b.gap(), q(1, 4));
        assert!(b.contains(&q(2, 3)));
        assert_eq!(converge_bracket(&lo, &hi, &q(1, 5)), Err(NotConverged));
    }

    #[test]
    fn flat_order() {
        assert!(Flat::<u8>::Bot.leq(&Flat::Val(3)));
        assert!(Flat::Val(3).leq(&Flat::Val(3)));
        assert!(!Flat::Val(3).leq(&Flat::Val(4)));
        assert!(!Flat::Val(3).leq(&Flat::Bot));
    }
}
