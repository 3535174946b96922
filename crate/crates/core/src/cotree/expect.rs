//! Expectations, weakest (liberal) pre-expectations and measures.
//!
//! At fuel `i` every quantity is a fold over the depth-`i` truncation:
//!
//! ```text
//! wp f  : Bot ↦ 0, Leaf a ↦ f(a), Node ↦ (t + f) / 2
//! wlp f : Bot ↦ 1, Leaf a ↦ f(a), Node ↦ (t + f) / 2
//! mu    : Bot ↦ 0, Leaf bs ↦ 1/2^|bs|, Node ↦ t + f
//! ```
//!
//! `wp` chains increase with fuel and `wlp` chains decrease, so together
//! they bracket the exact value. The chains are computed on the cotree
//! directly, evaluating shared subtrees once per depth; the `*_fold`
//! functions give the same values on an explicit truncation.

use std::fmt;
use std::rc::Rc;

use crate::approx::{ApproxChain, Direction};
use crate::erat::ERat;
use crate::lazy::StepBudget;

use super::tree::{atree_fold, fold_upto, ATree, Bits, Cotree};
use super::CotreeError;

/// A map from outcomes to `[0, ∞]`.
pub struct Expectation<A>(Rc<dyn Fn(&A) -> ERat>);

impl<A> Clone for Expectation<A> {
    fn clone(&self) -> Self {
        Expectation(Rc::clone(&self.0))
    }
}

impl<A> fmt::Debug for Expectation<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Expectation(..)")
    }
}

impl<A: 'static> Expectation<A> {
    pub fn new(f: impl Fn(&A) -> ERat + 'static) -> Self {
        Expectation(Rc::new(f))
    }

    /// `[Q]`: one where `q` holds, zero elsewhere.
    pub fn indicator(q: impl Fn(&A) -> bool + 'static) -> Self {
        Expectation::new(move |a| if q(a) { ERat::one() } else { ERat::zero() })
    }

    pub fn constant(c: ERat) -> Self {
        Expectation::new(move |_| c.clone())
    }

    pub fn eval(&self, a: &A) -> ERat {
        (self.0)(a)
    }
}

fn avg(x: &ERat, y: &ERat) -> ERat {
    (x + y).div2()
}

/// `wp f` on a finite tree.
pub fn wp_fold<A>(f: &Expectation<A>, t: &ATree<A>) -> ERat {
    atree_fold(&ERat::zero(), &|a| (f.0)(a), &|x, y| avg(&x, &y), t)
}

/// `wlp f` on a finite tree.
pub fn wlp_fold<A>(f: &Expectation<A>, t: &ATree<A>) -> ERat {
    atree_fold(&ERat::one(), &|a| (f.0)(a), &|x, y| avg(&x, &y), t)
}

/// Measure of a finite set of bitstrings.
pub fn mu_fold(s: &ATree<Bits>) -> ERat {
    atree_fold(&ERat::zero(), &|bs: &Bits| ERat::recip_pow2(bs.len()), &|x, y| x + y, s)
}

/// `wp f t` at fuels `0..=fuel`.
pub fn wp_chain<A: Clone + 'static>(
    f: &Expectation<A>,
    t: &Cotree<A>,
    fuel: usize,
    budget: &StepBudget,
) -> Result<ApproxChain<ERat>, CotreeError> {
    let values = fold_upto(
        t,
        fuel,
        budget,
        &ERat::zero(),
        &|a| Ok::<_, CotreeError>(f.eval(a)),
        &avg,
    )?;
    Ok(ApproxChain::from_values(values, Direction::Increasing)?)
}

/// `wlp f t` at fuels `0..=fuel`. Every leaf reached within `fuel` must
/// have `f ≤ 1`.
pub fn wlp_chain<A: Clone + fmt::Debug + 'static>(
    f: &Expectation<A>,
    t: &Cotree<A>,
    fuel: usize,
    budget: &StepBudget,
) -> Result<ApproxChain<ERat>, CotreeError> {
    let leaf = |a: &A| {
        let v = f.eval(a);
        if v > ERat::one() {
            return Err(CotreeError::ExpectationAboveOne {
                leaf: format!("{a:?}"),
                value: v,
            });
        }
        Ok(v)
    };
    let values = fold_upto(t, fuel, budget, &ERat::one(), &leaf, &avg)?;
    Ok(ApproxChain::from_values(values, Direction::Decreasing)?)
}

/// Measure of a bitstring set at fuels `0..=fuel`.
pub fn mu_chain(s: &Cotree<Bits>, fuel: usize, budget: &StepBudget) -> Result<ApproxChain<ERat>, CotreeError> {
    let leaf = |bs: &Bits| Ok::<_, CotreeError>(ERat::recip_pow2(bs.len()));
    let values = fold_upto(s, fuel, budget, &ERat::zero(), &leaf, &|x, y| x + y)?;
    Ok(ApproxChain::from_values(values, Direction::Increasing)?)
}

/// Markov's inequality on a finite tree: `wp [f ≥ a] t ≤ wp f t / a`.
pub fn markov_check<A: 'static>(f: &Expectation<A>, t: &ATree<A>, a: &ERat) -> Result<bool, CotreeError> {
    let g = f.clone();
    let thr = a.clone();
    let above = Expectation::indicator(move |x| g.eval(x) >= thr);
    let rhs = wp_fold(f, t).checked_div(a).ok_or_else(|| {
        CotreeError::InvalidParameter(format!("Markov threshold must be finite and positive, got {a}"))
    })?;
    Ok(wp_fold(&above, t) <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{converge_bracket, Verdict};
    use crate::cotree::tree::{iter_cotree, preimage};
    use std::ops::ControlFlow::{Break, Continue};

    fn q(n: u64, d: u64) -> ERat {
        ERat::new(n, d)
    }

    fn two_thirds() -> Cotree<bool> {
        iter_cotree(
            |_: &()| {
                Cotree::node(
                    Cotree::leaf(Break(true)),
                    Cotree::node(Cotree::leaf(Break(false)), Cotree::leaf(Continue(()))),
                )
            },
            (),
        )
    }

    fn is_true() -> Expectation<bool> {
        Expectation::indicator(|x: &bool| *x)
    }

    #[test]
    fn fold_on_half_tree() {
        let t = ATree::node(ATree::Leaf(true), ATree::Bot);
        assert_eq!(wp_fold(&is_true(), &t), q(1, 2));
        assert_eq!(wlp_fold(&is_true(), &t), q(1, 1));
    }

    #[test]
    fn two_thirds_chains() {
        let b = StepBudget::default();
        let wp = wp_chain(&is_true(), &two_thirds(), 4, &b).unwrap();
        assert_eq!(wp.values(), &[q(0, 1), q(0, 1), q(1, 2), q(1, 2), q(5, 8)]);
        let wlp = wlp_chain(&is_true(), &two_thirds(), 5, &b).unwrap();
        assert_eq!(wlp.at(1), Some(&q(1, 1)));
        assert_eq!(wlp.at(3), Some(&q(3, 4)));
        assert_eq!(wlp.at(5), Some(&q(11, 16)));
        assert_eq!(wlp.at(0), Some(&q(1, 1)));
        assert_eq!(wlp.at(4), Some(&q(3, 4)));
    }

    #[test]
    fn leaf_and_bottom_rules() {
        let b = StepBudget::default();
        let f = Expectation::new(|x: &u8| ERat::from(*x as u64));
        let leaf = wp_chain(&f, &Cotree::leaf(3u8), 3, &b).unwrap();
        assert_eq!(leaf.values(), &[q(0, 1), q(3, 1), q(3, 1), q(3, 1)]);
        assert_eq!(leaf.verdict(), Verdict::Stabilized(1));
        let bot = wp_chain(&f, &Cotree::bot(), 3, &b).unwrap();
        assert!(bot.values().iter().all(ERat::is_zero));
        let ind = Expectation::indicator(|x: &u8| *x > 0);
        let bot = wlp_chain(&ind, &Cotree::bot(), 3, &b).unwrap();
        assert!(bot.values().iter().all(|v| *v == ERat::one()));
    }

    #[test]
    fn wlp_rejects_large_expectations() {
        let f = Expectation::new(|x: &u8| ERat::from(*x as u64));
        let err = wlp_chain(&f, &Cotree::leaf(2u8), 2, &StepBudget::default()).unwrap_err();
        assert_eq!(
            err,
            CotreeError::ExpectationAboveOne {
                leaf: "2".into(),
                value: q(2, 1)
            }
        );
    }

    #[test]
    fn divergence_mass_decays() {
        let b = StepBudget::default();
        let zero = Expectation::constant(ERat::zero());
        let c = wlp_chain(&zero, &two_thirds(), 9, &b).unwrap();
        // Mass still undecided after 2k+1 levels is 4^-k.
        for k in 0..5 {
            assert_eq!(c.at(2 * k + 1), Some(&ERat::new(1u64, 4u64.pow(k as u32))));
        }
    }

    #[test]
    fn bracket_converges_to_two_thirds() {
        let b = StepBudget::default();
        let t = two_thirds();
        let wp = wp_chain(&is_true(), &t, 25, &b).unwrap();
        let wlp = wlp_chain(&is_true(), &t, 25, &b).unwrap();
        let br = converge_bracket(&wp, &wlp, &q(1, 1_000_000)).unwrap();
        assert!(br.contains(&q(2, 3)));
        assert!(converge_bracket(&wp, &wlp, &q(1, 10_000_000_000)).is_err());
    }

    #[test]
    fn measure_of_preimage_matches_wp() {
        let b = StepBudget::default();
        let t = two_thirds();
        let wp = wp_chain(&is_true(), &t, 12, &b).unwrap();
        let mu = mu_chain(&preimage(|x: &bool| *x, &t), 12, &b).unwrap();
        assert_eq!(wp.values(), mu.values());
        let leaf = Cotree::leaf(vec![true, false]);
        assert_eq!(mu_chain(&leaf, 1, &b).unwrap().last(), &q(1, 4));
        assert!(mu_chain(&Cotree::bot(), 4, &b).unwrap().last().is_zero());
    }

    #[test]
    fn chains_match_folds_over_truncations() {
        use crate::cotree::dist::{geometric, uniform};
        use crate::cotree::tree::cotree_idl;
        let b = StepBudget::unlimited();
        let check = |t: &Cotree<u64>, f: &Expectation<u64>| {
            let wp = wp_chain(f, t, 14, &b).unwrap();
            let wlp = wlp_chain(f, t, 14, &b).unwrap();
            for i in 0..=14 {
                let tr = cotree_idl(t, i, &b).unwrap();
                assert_eq!(wp.at(i), Some(&wp_fold(f, &tr)));
                assert_eq!(wlp.at(i), Some(&wlp_fold(f, &tr)));
            }
        };
        let even = Expectation::indicator(|k: &u64| k.is_multiple_of(2));
        check(&uniform(5).unwrap(), &even);
        check(&uniform(6).unwrap(), &even);
        check(&geometric(1, 3).unwrap(), &even);
        check(&geometric(2, 5).unwrap(), &Expectation::indicator(|k: &u64| *k < 2));
    }

    #[test]
    fn markov_examples() {
        let f = Expectation::new(|x: &u8| ERat::from(*x as u64));
        assert!(markov_check(&f, &ATree::Leaf(3), &q(2, 1)).unwrap());
        let t = ATree::node(ATree::Leaf(0), ATree::node(ATree::Leaf(4), ATree::Bot));
        assert!(markov_check(&f, &t, &q(1, 2)).unwrap());
        let c = Expectation::constant(q(3, 2));
        assert!(markov_check(&c, &t, &q(3, 2)).unwrap());
        assert!(markov_check(&f, &t, &ERat::zero()).is_err());
    }
}
