//! Lazy bottom-terminated streams and their finite-list basis.
//!
//! A [`Colist`] has no `nil`: a stream either continues with another cell or
//! is `Bot`, the divergent stream. Finite lists ([`AList`]) embed into
//! streams by sending `nil` to `Bot`, and every stream is the limit of its
//! truncations under the prefix order.

use std::rc::Rc;

use crate::approx::{ext_eval, ApproxChain, Approximable, ChainError, Direction, Poset};
use crate::lazy::{Exhausted, StepBudget, Thunk};

/// A finite list, head first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AList<A>(Vec<A>);

impl<A> AList<A> {
    pub fn nil() -> Self {
        AList(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[A] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<A> {
        self.0
    }

    /// Right-associative fold: `nil ↦ z`, `cons a t ↦ f(a, fold t)`.
    pub fn fold<B>(&self, z: B, mut f: impl FnMut(&A, B) -> B) -> B {
        self.0.iter().rev().fold(z, |acc, a| f(a, acc))
    }

    /// The first `n` elements.
    pub fn take(&self, n: usize) -> AList<A>
    where
        A: Clone,
    {
        AList(self.0.iter().take(n).cloned().collect())
    }
}

impl<A> From<Vec<A>> for AList<A> {
    fn from(v: Vec<A>) -> Self {
        AList(v)
    }
}

impl<A> FromIterator<A> for AList<A> {
    fn from_iter<I: IntoIterator<Item = A>>(iter: I) -> Self {
        AList(iter.into_iter().collect())
    }
}

/// The prefix order: `nil` is below everything, `cons` is congruent.
impl<A: PartialEq> Poset for AList<A> {
    fn leq(&self, other: &Self) -> bool {
        other.0.starts_with(&self.0)
    }
}

/// Free-function form of [`AList::fold`].
pub fn list_fold<A, B>(z: B, f: impl FnMut(&A, B) -> B, l: &AList<A>) -> B {
    l.fold(z, f)
}

#[derive(Debug, Clone)]
pub enum ColistCell<A> {
    Bot,
    Cons(A, Colist<A>),
}

/// A lazy stream whose cells are memoized [`Thunk`]s.
#[derive(Debug)]
pub struct Colist<A>(Thunk<ColistCell<A>>);

impl<A> Clone for Colist<A> {
    fn clone(&self) -> Self {
        Colist(self.0.clone())
    }
}

impl<A> Drop for Colist<A> {
    fn drop(&mut self) {
        let mut next = self.0.take_if_unique();
        while let Some(ColistCell::Cons(_, mut tail)) = next {
            next = tail.0.take_if_unique();
        }
    }
}

impl<A: Clone + 'static> Colist<A> {
    pub fn bot() -> Self {
        Colist(Thunk::ready(ColistCell::Bot))
    }

    pub fn cons(head: A, tail: Colist<A>) -> Self {
        Colist(Thunk::ready(ColistCell::Cons(head, tail)))
    }

    /// A stream whose first cell is computed on demand.
    pub fn lazy(f: impl Fn(&StepBudget) -> Result<ColistCell<A>, Exhausted> + 'static) -> Self {
        Colist(Thunk::new(f))
    }

    /// Corecursive generator: `step(s)` yields the next element and state,
    /// or `None` for `Bot`.
    pub fn unfold<S: Clone + 'static>(seed: S, step: impl Fn(&S) -> Option<(A, S)> + 'static) -> Self {
        type Step<S, A> = Rc<dyn Fn(&S) -> Option<(A, S)>>;
        fn go<A: Clone + 'static, S: Clone + 'static>(seed: S, step: Step<S, A>) -> Colist<A> {
            Colist::lazy(move |_| {
                Ok(match step(&seed) {
                    None => ColistCell::Bot,
                    Some((a, next)) => ColistCell::Cons(a, go(next, Rc::clone(&step))),
                })
            })
        }
        go(seed, Rc::new(step))
    }

    pub fn force(&self, budget: &StepBudget) -> Result<&ColistCell<A>, Exhausted> {
        self.0.force(budget)
    }

    /// Embed a finite list; `nil` becomes `Bot`.
    pub fn incl(l: &AList<A>) -> Self {
        l.as_slice()
            .iter()
            .rev()
            .fold(Colist::bot(), |tail, a| Colist::cons(a.clone(), tail))
    }

    /// Up to `n` heads, stopping early at `Bot`.
    pub fn idl(&self, n: usize, budget: &StepBudget) -> Result<AList<A>, Exhausted> {
        let mut out = Vec::with_capacity(n.min(1024));
        let mut cur = self.clone();
        while out.len() < n {
            let next = match cur.force(budget)? {
                ColistCell::Bot => break,
                ColistCell::Cons(a, t) => {
                    out.push(a.clone());
                    t.clone()
                }
            };
            cur = next;
        }
        Ok(AList(out))
    }
}

impl<A: Clone + 'static> Approximable for Colist<A> {
    type Basis = AList<A>;

    fn idl(&self, fuel: usize, budget: &StepBudget) -> Result<AList<A>, Exhausted> {
        Colist::idl(self, fuel, budget)
    }
}

pub fn colist_idl<A: Clone + 'static>(l: &Colist<A>, n: usize, budget: &StepBudget) -> Result<AList<A>, Exhausted> {
    l.idl(n, budget)
}

pub fn colist_incl<A: Clone + 'static>(l: &AList<A>) -> Colist<A> {
    Colist::incl(l)
}

/// Semantic cofold: the chain `fold(bottom, f, idl(l, i))` for `i` in
/// `0..=fuel`. `f(a, ·)` must be monotone for every `a`.
pub fn cofold_sem<A, B>(
    f: impl Fn(&A, B) -> B,
    bottom: B,
    l: &Colist<A>,
    fuel: usize,
    budget: &StepBudget,
) -> Result<ApproxChain<B>, ChainError>
where
    A: Clone + 'static,
    B: Poset + PartialEq + Clone,
{
    // idl(l, i) is the length-i prefix of idl(l, fuel).
    let prefix = l.idl(fuel, budget)?;
    ext_eval(
        |i| Ok(prefix.take(i)),
        |p: &AList<A>| p.fold(bottom.clone(), &f),
        fuel,
        Direction::Increasing,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LazyError {
    #[error("step budget exhausted")]
    Exhausted,
    /// The divergent stream was forced.
    #[error("forced the bottom stream")]
    HitBottom,
}

impl From<Exhausted> for LazyError {
    fn from(_: Exhausted) -> Self {
        LazyError::Exhausted
    }
}

type LazyStep<A, B> = Rc<dyn Fn(&A, Deferred<A, B>, &StepBudget) -> Result<B, LazyError>>;

/// The not-yet-computed cofold of a stream's tail.
///
/// Forcing is not memoized: each call re-runs the cofold over the (memoized)
/// tail.
pub struct Deferred<A, B> {
    tail: Colist<A>,
    step: LazyStep<A, B>,
}

impl<A, B> Clone for Deferred<A, B> {
    fn clone(&self) -> Self {
        Deferred {
            tail: self.tail.clone(),
            step: Rc::clone(&self.step),
        }
    }
}

impl<A: Clone + 'static, B> Deferred<A, B> {
    pub fn force(&self, budget: &StepBudget) -> Result<B, LazyError> {
        run_lazy(&self.step, &self.tail, budget)
    }
}

fn run_lazy<A: Clone + 'static, B>(step: &LazyStep<A, B>, l: &Colist<A>, budget: &StepBudget) -> Result<B, LazyError> {
    match l.force(budget)? {
        ColistCell::Bot => Err(LazyError::HitBottom),
        ColistCell::Cons(a, t) => {
            let rest = Deferred {
                tail: t.clone(),
                step: Rc::clone(step),
            };
            step(a, rest, budget)
        }
    }
}

/// Lazy cofold in the style of a demand-driven extraction: on `cons a t`
/// the result is `f(a, <cofold of t, on demand>)`; reaching `Bot` is an
/// error rather than a value.
pub fn cofold_lazy<A, B>(
    f: impl Fn(&A, Deferred<A, B>, &StepBudget) -> Result<B, LazyError> + 'static,
    l: &Colist<A>,
    budget: &StepBudget,
) -> Result<B, LazyError>
where
    A: Clone + 'static,
{
    let step: LazyStep<A, B> = Rc::new(f);
    run_lazy(&step, l, budget)
}

/// Keep the elements satisfying `pred`, lazily.
///
/// Forcing a cell of the result forces as many cells of `l` as it takes to
/// find the next match, so an always-false predicate exhausts any budget.
pub fn filter<A: Clone + 'static>(pred: impl Fn(&A) -> bool + 'static, l: &Colist<A>) -> Colist<A> {
    filter_rc(Rc::new(pred), l.clone())
}

fn filter_rc<A: Clone + 'static>(pred: Rc<dyn Fn(&A) -> bool>, l: Colist<A>) -> Colist<A> {
    Colist::lazy(move |budget| {
        let mut cur = l.clone();
        loop {
            let next = match cur.force(budget)? {
                ColistCell::Bot => return Ok(ColistCell::Bot),
                ColistCell::Cons(a, t) if pred(a) => {
                    return Ok(ColistCell::Cons(a.clone(), filter_rc(Rc::clone(&pred), t.clone())));
                }
                ColistCell::Cons(_, t) => t.clone(),
            };
            cur = next;
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exists {
    Found(usize),
    /// Not a refutation: a later element may still satisfy the predicate.
    NotFoundUpTo(usize),
}

/// Semi-decide `∃ i. pred(l[i])`, inspecting positions `0..max_fuel`.
pub fn coexists<A: Clone + 'static>(
    pred: impl Fn(&A) -> bool,
    l: &Colist<A>,
    max_fuel: usize,
    budget: &StepBudget,
) -> Result<Exists, Exhausted> {
    let mut cur = l.clone();
    for i in 0..max_fuel {
        let next = match cur.force(budget)? {
            ColistCell::Bot => break,
            ColistCell::Cons(a, _) if pred(a) => return Ok(Exists::Found(i)),
            ColistCell::Cons(_, t) => t.clone(),
        };
        cur = next;
    }
    Ok(Exists::NotFoundUpTo(max_fuel))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Forall {
    HoldsUpTo(usize),
    CounterexampleAt(usize),
}

/// Check `pred` on every element of `idl(l, depth)`.
pub fn coforall_upto<A: Clone + 'static>(
    pred: impl Fn(&A) -> bool,
    l: &Colist<A>,
    depth: usize,
    budget: &StepBudget,
) -> Result<Forall, Exhausted> {
    let prefix = l.idl(depth, budget)?;
    Ok(match prefix.as_slice().iter().position(|a| !pred(a)) {
        Some(i) => Forall::CounterexampleAt(i),
        None => Forall::HoldsUpTo(depth),
    })
}

/// Lengths of successive truncations.
pub fn colength_chain<A: Clone + 'static>(
    l: &Colist<A>,
    fuel: usize,
    budget: &StepBudget,
) -> Result<ApproxChain<usize>, ChainError> {
    let prefix = l.idl(fuel, budget)?;
    ext_eval(|i| Ok(i.min(prefix.len())), |&n| n, fuel, Direction::Increasing)
}

/// Whether `n` cells can be forced. `Ok(false)` means the stream reached
/// `Bot` first.
pub fn check_productive<A: Clone + 'static>(l: &Colist<A>, n: usize, budget: &StepBudget) -> Result<bool, Exhausted> {
    Ok(l.idl(n, budget)?.len() == n)
}

/// Whether every element of `idl(l, depth)` is `rel`-related to every later
/// one.
pub fn ordered_upto<A: Clone + 'static>(
    rel: impl Fn(&A, &A) -> bool,
    l: &Colist<A>,
    depth: usize,
    budget: &StepBudget,
) -> Result<bool, Exhausted> {
    let p = l.idl(depth, budget)?;
    let p = p.as_slice();
    Ok(p.iter().enumerate().all(|(i, a)| p[i + 1..].iter().all(|b| rel(a, b))))
}

/// The stream order restricted to the first `depth` cells of `l1`:
/// `idl(l1, depth)` must be a prefix of `l2`.
pub fn prefix_le_upto<A: Clone + PartialEq + 'static>(
    l1: &Colist<A>,
    l2: &Colist<A>,
    depth: usize,
    budget: &StepBudget,
) -> Result<bool, Exhausted> {
    let p = l1.idl(depth, budget)?;
    let q = l2.idl(p.len(), budget)?;
    Ok(p == q)
}
