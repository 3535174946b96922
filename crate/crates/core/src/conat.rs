//! Lazy conatural numbers.

use crate::approx::Approximable;
use crate::lazy::{Exhausted, StepBudget, Thunk};

#[derive(Debug, Clone)]
pub enum ConatCell {
    Zero,
    Succ(Conat),
}

/// A possibly infinite natural number, one lazy successor at a time.
#[derive(Debug, Clone)]
pub struct Conat(Thunk<ConatCell>);

impl Drop for Conat {
    fn drop(&mut self) {
        let mut next = self.0.take_if_unique();
        while let Some(ConatCell::Succ(mut n)) = next {
            next = n.0.take_if_unique();
        }
    }
}

impl Conat {
    pub fn zero() -> Self {
        Conat(Thunk::ready(ConatCell::Zero))
    }

    pub fn succ(n: Conat) -> Self {
        Conat(Thunk::ready(ConatCell::Succ(n)))
    }

    /// The finite conat `k`, unfolded lazily.
    pub fn incl(k: u64) -> Self {
        Conat(Thunk::new(move |_| {
            Ok(if k == 0 {
                ConatCell::Zero
            } else {
                ConatCell::Succ(Conat::incl(k - 1))
            })
        }))
    }

    /// `ω = succ ω`.
    pub fn omega() -> Self {
        Conat(Thunk::new(|_| Ok(ConatCell::Succ(Conat::omega()))))
    }

    pub fn force(&self, budget: &StepBudget) -> Result<&ConatCell, Exhausted> {
        self.0.force(budget)
    }

    /// `min(self, fuel)`, forcing at most `fuel + 1` cells.
    pub fn trunc(&self, fuel: u64) -> u64 {
        let budget = StepBudget::new(fuel + 1);
        let mut cur = self.clone();
        for i in 0..fuel {
            match cur.force(&budget).expect("at most fuel+1 forces") {
                ConatCell::Zero => return i,
                ConatCell::Succ(n) => {
                    let n = n.clone();
                    cur = n;
                }
            }
        }
        fuel
    }
}

impl Approximable for Conat {
    type Basis = u64;

    fn idl(&self, fuel: usize, _budget: &StepBudget) -> Result<u64, Exhausted> {
        Ok(self.trunc(fuel as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{extend, Direction, Verdict};

    #[test]
    fn truncation_examples() {
        assert_eq!(Conat::omega().trunc(5), 5);
        assert_eq!(Conat::incl(3).trunc(5), 3);
        assert_eq!(Conat::incl(0).trunc(0), 0);
        assert_eq!(Conat::succ(Conat::zero()).trunc(9), 1);
    }

    #[test]
    fn truncation_is_monotone_and_bounded() {
        for n in [Conat::omega(), Conat::incl(4), Conat::incl(0)] {
            for i in 0..10 {
                let (a, b) = (n.trunc(i), n.trunc(i + 1));
                assert!(a <= b && b <= i + 1);
            }
        }
        for k in 0..8 {
            for i in 0..10 {
                assert_eq!(Conat::incl(k).trunc(i), k.min(i));
            }
        }
    }

    #[test]
    fn as_approximable_carrier() {
        let b = StepBudget::unlimited();
        let c = extend(&Conat::incl(3), |&k| k, 6, Direction::Increasing, &b).unwrap();
        assert_eq!(c.values(), &[0, 1, 2, 3, 3, 3, 3]);
        assert_eq!(c.verdict(), Verdict::Stabilized(3));
        let w = extend(&Conat::omega(), |&k| k, 4, Direction::Increasing, &b).unwrap();
        assert_eq!(w.verdict(), Verdict::BoundsOnly);
    }
}
