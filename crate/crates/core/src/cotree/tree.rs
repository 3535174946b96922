//! Finite and lazy binary trees.
//!
//! Children are indexed by a bit. Bit `true` (written `1`) selects the first
//! child, drawn on the left.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::rc::Rc;

use crate::approx::{Approximable, Poset};
use crate::lazy::{Exhausted, StepBudget, Thunk};

/// A finite tree: the basis of [`Cotree`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ATree<A> {
    Bot,
    Leaf(A),
    /// `(true child, false child)`
    Node(Box<ATree<A>>, Box<ATree<A>>),
}

impl<A> ATree<A> {
    pub fn node(t: ATree<A>, f: ATree<A>) -> Self {
        ATree::Node(Box::new(t), Box::new(f))
    }

    /// Longest root-to-leaf path, counting nodes; `Bot` and leaves count 1.
    pub fn depth(&self) -> usize {
        match self {
            ATree::Bot | ATree::Leaf(_) => 1,
            ATree::Node(t, f) => 1 + t.depth().max(f.depth()),
        }
    }

    /// Cut the tree at depth `n`; what lies below becomes `Bot`.
    pub fn truncate(&self, n: usize) -> ATree<A>
    where
        A: Clone,
    {
        match (n, self) {
            (0, _) | (_, ATree::Bot) => ATree::Bot,
            (_, ATree::Leaf(a)) => ATree::Leaf(a.clone()),
            (_, ATree::Node(t, f)) => ATree::node(t.truncate(n - 1), f.truncate(n - 1)),
        }
    }

    /// Leaves together with their paths from the root.
    pub fn leaves(&self) -> Vec<(Vec<bool>, &A)> {
        fn go<'a, A>(t: &'a ATree<A>, path: &mut Vec<bool>, out: &mut Vec<(Vec<bool>, &'a A)>) {
            match t {
                ATree::Bot => {}
                ATree::Leaf(a) => out.push((path.clone(), a)),
                ATree::Node(l, r) => {
                    path.push(true);
                    go(l, path, out);
                    path.pop();
                    path.push(false);
                    go(r, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// `Bot` is least, leaves are only below themselves, nodes compare
/// child-wise.
impl<A: PartialEq> Poset for ATree<A> {
    fn leq(&self, other: &Self) -> bool {
        match (self, other) {
            (ATree::Bot, _) => true,
            (ATree::Leaf(a), ATree::Leaf(b)) => a == b,
            (ATree::Node(t1, f1), ATree::Node(t2, f2)) => t1.leq(t2) && f1.leq(f2),
            _ => false,
        }
    }
}

/// `Bot ↦ z`, `Leaf a ↦ leaf(a)`, `Node ↦ node(fold true child, fold false child)`.
pub fn atree_fold<A, B: Clone>(z: &B, leaf: &impl Fn(&A) -> B, node: &impl Fn(B, B) -> B, t: &ATree<A>) -> B {
    match t {
        ATree::Bot => z.clone(),
        ATree::Leaf(a) => leaf(a),
        ATree::Node(l, r) => node(atree_fold(z, leaf, node, l), atree_fold(z, leaf, node, r)),
    }
}

/// Monadic bind on finite trees: graft `k(a)` at every leaf `a`.
pub fn atree_bind<A, B>(t: &ATree<A>, k: &impl Fn(&A) -> ATree<B>) -> ATree<B> {
    match t {
        ATree::Bot => ATree::Bot,
        ATree::Leaf(a) => k(a),
        ATree::Node(l, r) => ATree::node(atree_bind(l, k), atree_bind(r, k)),
    }
}

#[derive(Clone)]
pub enum CotreeCell<A> {
    Bot,
    Leaf(A),
    /// `(true child, false child)`
    Node(Cotree<A>, Cotree<A>),
}

/// A lazy, possibly infinite binary tree.
pub struct Cotree<A>(Thunk<CotreeCell<A>>);

impl<A> Clone for Cotree<A> {
    fn clone(&self) -> Self {
        Cotree(self.0.clone())
    }
}

impl<A> Drop for Cotree<A> {
    fn drop(&mut self) {
        let mut stack: Vec<CotreeCell<A>> = self.0.take_if_unique().into_iter().collect();
        while let Some(cell) = stack.pop() {
            if let CotreeCell::Node(mut l, mut r) = cell {
                stack.extend(l.0.take_if_unique());
                stack.extend(r.0.take_if_unique());
            }
        }
    }
}

impl<A: fmt::Debug> fmt::Debug for Cotree<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.peek() {
            None => f.write_str("<unforced>"),
            Some(CotreeCell::Bot) => f.write_str("Bot"),
            Some(CotreeCell::Leaf(a)) => f.debug_tuple("Leaf").field(a).finish(),
            Some(CotreeCell::Node(l, r)) => f.debug_tuple("Node").field(l).field(r).finish(),
        }
    }
}

impl<A: Clone + 'static> Cotree<A> {
    pub fn bot() -> Self {
        Cotree(Thunk::ready(CotreeCell::Bot))
    }

    pub fn leaf(a: A) -> Self {
        Cotree(Thunk::ready(CotreeCell::Leaf(a)))
    }

    pub fn node(t: Cotree<A>, f: Cotree<A>) -> Self {
        Cotree(Thunk::ready(CotreeCell::Node(t, f)))
    }

    pub fn lazy(f: impl Fn(&StepBudget) -> Result<CotreeCell<A>, Exhausted> + 'static) -> Self {
        Cotree(Thunk::new(f))
    }

    pub fn force(&self, budget: &StepBudget) -> Result<&CotreeCell<A>, Exhausted> {
        self.0.force(budget)
    }

    /// Identity of the underlying cell; equal for clones of one handle.
    pub fn addr(&self) -> usize {
        self.0.addr()
    }

    /// The embedding of a finite tree.
    pub fn incl(t: &ATree<A>) -> Self {
        match t {
            ATree::Bot => Cotree::bot(),
            ATree::Leaf(a) => Cotree::leaf(a.clone()),
            ATree::Node(l, r) => Cotree::node(Cotree::incl(l), Cotree::incl(r)),
        }
    }
}

/// Depth-`n` truncation: `n = 0` and `Bot` give `Bot`, leaves are kept,
/// nodes truncate their children at `n - 1`.
pub fn cotree_idl<A: Clone + 'static>(t: &Cotree<A>, n: usize, budget: &StepBudget) -> Result<ATree<A>, Exhausted> {
    if n == 0 {
        return Ok(ATree::Bot);
    }
    Ok(match t.force(budget)? {
        CotreeCell::Bot => ATree::Bot,
        CotreeCell::Leaf(a) => ATree::Leaf(a.clone()),
        CotreeCell::Node(l, r) => ATree::node(cotree_idl(l, n - 1, budget)?, cotree_idl(r, n - 1, budget)?),
    })
}

impl<A: Clone + 'static> Approximable for Cotree<A> {
    type Basis = ATree<A>;

    fn idl(&self, fuel: usize, budget: &StepBudget) -> Result<ATree<A>, Exhausted> {
        cotree_idl(self, fuel, budget)
    }
}

type Kont<A, B> = Rc<dyn Fn(&A) -> Cotree<B>>;

fn bind_rc<A: Clone + 'static, B: Clone + 'static>(t: &Cotree<A>, k: &Kont<A, B>) -> Cotree<B> {
    let (t, k) = (t.clone(), Rc::clone(k));
    Cotree::lazy(move |budget| {
        Ok(match t.force(budget)? {
            CotreeCell::Bot => CotreeCell::Bot,
            CotreeCell::Leaf(a) => k(a).force(budget)?.clone(),
            CotreeCell::Node(l, r) => CotreeCell::Node(bind_rc(l, &k), bind_rc(r, &k)),
        })
    })
}

/// Monadic bind: replace every leaf `a` by `k(a)`, lazily.
pub fn bind<A: Clone + 'static, B: Clone + 'static>(t: &Cotree<A>, k: impl Fn(&A) -> Cotree<B> + 'static) -> Cotree<B> {
    bind_rc(t, &(Rc::new(k) as Kont<A, B>))
}

pub fn map<A: Clone + 'static, B: Clone + 'static>(t: &Cotree<A>, f: impl Fn(&A) -> B + 'static) -> Cotree<B> {
    bind(t, move |a| Cotree::leaf(f(a)))
}

type Body<I, A> = Rc<dyn Fn(&I) -> Cotree<ControlFlow<A, I>>>;

fn iter_rc<I: Clone + PartialEq + 'static, A: Clone + 'static>(body: &Body<I, A>, i0: I) -> Cotree<A> {
    let body = Rc::clone(body);
    Cotree::lazy(move |budget| {
        let mut i = i0.clone();
        loop {
            let step = body(&i);
            match step.force(budget)? {
                CotreeCell::Bot => return Ok(CotreeCell::Bot),
                CotreeCell::Leaf(ControlFlow::Break(a)) => return Ok(CotreeCell::Leaf(a.clone())),
                CotreeCell::Leaf(ControlFlow::Continue(j)) => i = j.clone(),
                CotreeCell::Node(l, r) => {
                    // Leaves of this unfolding that continue with the same
                    // state share one subtree.
                    let b2 = Rc::clone(&body);
                    let seen: RefCell<Vec<(I, Cotree<A>)>> = RefCell::new(Vec::new());
                    let k: Kont<ControlFlow<A, I>, A> = Rc::new(move |e| match e {
                        ControlFlow::Break(a) => Cotree::leaf(a.clone()),
                        ControlFlow::Continue(j) => {
                            if let Some((_, t)) = seen.borrow().iter().find(|(s, _)| s == j) {
                                return t.clone();
                            }
                            let t = iter_rc(&b2, j.clone());
                            seen.borrow_mut().push((j.clone(), t.clone()));
                            t
                        }
                    });
                    return Ok(CotreeCell::Node(bind_rc(l, &k), bind_rc(r, &k)));
                }
            }
        }
    })
}

/// The loop `iter body i = bind (body i) (Continue j ↦ iter body j; Break a ↦ leaf a)`.
///
/// A body that keeps continuing without ever reaching a node or an exit
/// spins in place; forcing it runs until the step budget is exhausted.
pub fn iter_cotree<I: Clone + PartialEq + 'static, A: Clone + 'static>(
    body: impl Fn(&I) -> Cotree<ControlFlow<A, I>> + 'static,
    i0: I,
) -> Cotree<A> {
    iter_rc(&(Rc::new(body) as Body<I, A>), i0)
}

/// `z` at depth 0 and at `Bot`, `leaf` at leaves, `node` at nodes, for
/// every depth `0..=fuel`: entry `i` equals the fold over the depth-`i`
/// truncation. Shared subtrees are evaluated once per depth.
pub fn fold_upto<A: Clone + 'static, B: Clone, E: From<Exhausted>>(
    t: &Cotree<A>,
    fuel: usize,
    budget: &StepBudget,
    z: &B,
    leaf: &dyn Fn(&A) -> Result<B, E>,
    node: &dyn Fn(&B, &B) -> B,
) -> Result<Vec<B>, E> {
    struct Fold<'a, A, B, E> {
        budget: &'a StepBudget,
        z: &'a B,
        leaf: &'a dyn Fn(&A) -> Result<B, E>,
        node: &'a dyn Fn(&B, &B) -> B,
        memo: HashMap<(usize, usize), B>,
        // Keeps memoized cells alive so their addresses are not reused.
        alive: Vec<Cotree<A>>,
    }

    impl<A: Clone + 'static, B: Clone, E: From<Exhausted>> Fold<'_, A, B, E> {
        fn go(&mut self, t: &Cotree<A>, depth: usize) -> Result<B, E> {
            if depth == 0 {
                return Ok(self.z.clone());
            }
            let key = (t.addr(), depth);
            if let Some(v) = self.memo.get(&key) {
                return Ok(v.clone());
            }
            let v = match t.force(self.budget)? {
                CotreeCell::Bot => self.z.clone(),
                CotreeCell::Leaf(a) => (self.leaf)(a)?,
                CotreeCell::Node(l, r) => {
                    let (l, r) = (l.clone(), r.clone());
                    let x = self.go(&l, depth - 1)?;
                    let y = self.go(&r, depth - 1)?;
                    (self.node)(&x, &y)
                }
            };
            self.memo.insert(key, v.clone());
            self.alive.push(t.clone());
            Ok(v)
        }
    }

    let mut f = Fold {
        budget,
        z,
        leaf,
        node,
        memo: HashMap::new(),
        alive: Vec::new(),
    };
    (0..=fuel).map(|i| f.go(t, i)).collect()
}

/// Leaves failing `pred` become `Bot`; the shape is otherwise unchanged.
pub fn filter_cotree<A: Clone + 'static>(pred: impl Fn(&A) -> bool + 'static, t: &Cotree<A>) -> Cotree<A> {
    bind(t, move |a| {
        if pred(a) {
            Cotree::leaf(a.clone())
        } else {
            Cotree::bot()
        }
    })
}

/// A finite bitstring; `true` is written `1`.
pub type Bits = Vec<bool>;

pub fn bits_to_string(bs: &[bool]) -> String {
    bs.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Parse a string of `0`s and `1`s.
pub fn bits_from_str(s: &str) -> Option<Bits> {
    s.chars()
        .map(|c| match c {
            '1' => Some(true),
            '0' => Some(false),
            _ => None,
        })
        .collect()
}

fn lang_from(t: &Cotree<impl Clone + 'static>, prefix: Bits) -> Cotree<Bits> {
    let t = t.clone();
    Cotree::lazy(move |budget| {
        Ok(match t.force(budget)? {
            CotreeCell::Bot => CotreeCell::Bot,
            CotreeCell::Leaf(_) => CotreeCell::Leaf(prefix.clone()),
            CotreeCell::Node(l, r) => {
                let with = |b: bool| {
                    let mut p = prefix.clone();
                    p.push(b);
                    p
                };
                CotreeCell::Node(lang_from(l, with(true)), lang_from(r, with(false)))
            }
        })
    })
}

/// The set of bitstrings that lead to a leaf: every leaf is replaced by
/// its path from the root. Same shape as `t`.
pub fn lang_cotree<A: Clone + 'static>(t: &Cotree<A>) -> Cotree<Bits> {
    lang_from(t, Vec::new())
}

/// The paths that lead to a leaf satisfying `pred`.
pub fn preimage<A: Clone + 'static>(pred: impl Fn(&A) -> bool + 'static, t: &Cotree<A>) -> Cotree<Bits> {
    lang_cotree(&filter_cotree(pred, t))
}

/// Whether no leaf bitstring of the depth-`depth` truncation is a prefix
/// of another.
pub fn disjoint_upto(s: &Cotree<Bits>, depth: usize, budget: &StepBudget) -> Result<bool, Exhausted> {
    let t = cotree_idl(s, depth, budget)?;
    let mut strings: Vec<&Bits> = t.leaves().into_iter().map(|(_, bs)| bs).collect();
    // In lexicographic order a string and its extensions are contiguous.
    strings.sort();
    Ok(strings.windows(2).all(|w| !w[1].starts_with(w[0])))
}
