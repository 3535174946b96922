//! Languages as lazy tries and their finite truncations.
//!
//! A [`Lang`] node carries an accept label (does the language contain the
//! empty word?) and one child per alphabet symbol (the derivative by that
//! symbol). Union, intersection and complement work label-wise and
//! child-wise. Concatenation and star are lazy corecursions following the
//! derivative rules
//!
//! ```text
//! o(a·b) = o(a) ∧ o(b)     δx(a·b) = δx(a)·b + (if o(a) then δx(b) else ∅)
//! o(a*)  = true            δx(a*)  = δx(a)·a*
//! ```
//!
//! `∅` and `ε` are tagged when built: `∅ + x`, `ε·x` and `x·ε` reduce to `x`,
//! `∅·x` and `x·∅` to `∅`.

use std::collections::VecDeque;
use std::fmt;

use crate::approx::Poset;
use crate::lazy::{Exhausted, StepBudget, Thunk};

use super::{Alphabet, LangError};

/// A forced trie node.
pub struct LNode {
    pub accept: bool,
    pub children: Vec<Lang>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Empty,
    Eps,
    Other,
}

/// A possibly infinite trie over a fixed alphabet.
#[derive(Clone)]
pub struct Lang {
    cell: Thunk<LNode>,
    shape: Shape,
}

impl Drop for Lang {
    fn drop(&mut self) {
        let mut stack: Vec<LNode> = self.cell.take_if_unique().into_iter().collect();
        while let Some(node) = stack.pop() {
            for mut child in node.children {
                stack.extend(child.cell.take_if_unique());
            }
        }
    }
}

impl fmt::Debug for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cell.peek() {
            Some(n) => write!(f, "Lang(accept={}, ..)", n.accept),
            None => f.write_str("Lang(<unforced>)"),
        }
    }
}

impl Lang {
    pub fn lazy(f: impl Fn(&StepBudget) -> Result<LNode, Exhausted> + 'static) -> Self {
        Lang::with_shape(Shape::Other, f)
    }

    fn with_shape(shape: Shape, f: impl Fn(&StepBudget) -> Result<LNode, Exhausted> + 'static) -> Self {
        Lang {
            cell: Thunk::new(f),
            shape,
        }
    }

    pub fn node(accept: bool, children: Vec<Lang>) -> Self {
        Lang {
            cell: Thunk::ready(LNode { accept, children }),
            shape: Shape::Other,
        }
    }

    pub fn force(&self, budget: &StepBudget) -> Result<&LNode, Exhausted> {
        self.cell.force(budget)
    }

    /// Whether the empty word is in the language.
    pub fn accepts_empty(&self, budget: &StepBudget) -> Result<bool, Exhausted> {
        Ok(self.force(budget)?.accept)
    }

    /// The derivative by the symbol at `index`.
    pub fn deriv(&self, index: usize, budget: &StepBudget) -> Result<Lang, Exhausted> {
        Ok(self.force(budget)?.children[index].clone())
    }
}

fn empty_n(k: usize) -> Lang {
    Lang::with_shape(Shape::Empty, move |_| {
        Ok(LNode {
            accept: false,
            children: (0..k).map(|_| empty_n(k)).collect(),
        })
    })
}

fn eps_n(k: usize) -> Lang {
    Lang::with_shape(Shape::Eps, move |_| {
        Ok(LNode {
            accept: true,
            children: (0..k).map(|_| empty_n(k)).collect(),
        })
    })
}

/// `∅`: every label false.
pub fn empty(sigma: &Alphabet) -> Lang {
    empty_n(sigma.len())
}

/// `ε`: only the empty word.
pub fn eps(sigma: &Alphabet) -> Lang {
    eps_n(sigma.len())
}

/// The single one-symbol word `c`.
pub fn chr(sigma: &Alphabet, c: char) -> Result<Lang, LangError> {
    let i = sigma.index(c).ok_or(LangError::UnknownSymbol(c))?;
    Ok(chr_index(sigma.len(), i))
}

pub(crate) fn chr_index(k: usize, i: usize) -> Lang {
    Lang::lazy(move |_| {
        Ok(LNode {
            accept: false,
            children: (0..k).map(|j| if j == i { eps_n(k) } else { empty_n(k) }).collect(),
        })
    })
}

fn pointwise(a: &Lang, b: &Lang, label: fn(bool, bool) -> bool, op: fn(&Lang, &Lang) -> Lang) -> Lang {
    let (a, b) = (a.clone(), b.clone());
    Lang::lazy(move |budget| {
        let na = a.force(budget)?;
        let nb = b.force(budget)?;
        Ok(LNode {
            accept: label(na.accept, nb.accept),
            children: na.children.iter().zip(&nb.children).map(|(x, y)| op(x, y)).collect(),
        })
    })
}

/// `a + b`
pub fn union(a: &Lang, b: &Lang) -> Lang {
    if a.shape == Shape::Empty {
        return b.clone();
    }
    if b.shape == Shape::Empty {
        return a.clone();
    }
    pointwise(a, b, |x, y| x || y, union)
}

/// `a & b`
pub fn inter(a: &Lang, b: &Lang) -> Lang {
    pointwise(a, b, |x, y| x && y, inter)
}

/// `¬a`, the complement relative to all words.
pub fn comp(a: &Lang) -> Lang {
    let a = a.clone();
    Lang::lazy(move |budget| {
        let na = a.force(budget)?;
        Ok(LNode {
            accept: !na.accept,
            children: na.children.iter().map(comp).collect(),
        })
    })
}

/// `a · b`. The right operand is only forced when `a` accepts the empty word.
pub fn concat(a: &Lang, b: &Lang) -> Lang {
    match (a.shape, b.shape) {
        (Shape::Empty, _) | (_, Shape::Eps) => return a.clone(),
        (_, Shape::Empty) | (Shape::Eps, _) => return b.clone(),
        _ => {}
    }
    let (a, b) = (a.clone(), b.clone());
    Lang::lazy(move |budget| {
        let na = a.force(budget)?;
        if !na.accept {
            return Ok(LNode {
                accept: false,
                children: na.children.iter().map(|x| concat(x, &b)).collect(),
            });
        }
        let nb = b.force(budget)?;
        Ok(LNode {
            accept: nb.accept,
            children: na
                .children
                .iter()
                .zip(&nb.children)
                .map(|(x, y)| union(&concat(x, &b), y))
                .collect(),
        })
    })
}

/// `a*`
pub fn star(a: &Lang) -> Lang {
    let a = a.clone();
    Lang::lazy(move |budget| {
        let na = a.force(budget)?;
        let again = star(&a);
        Ok(LNode {
            accept: true,
            children: na.children.iter().map(|x| concat(x, &again)).collect(),
        })
    })
}

/// Membership of a word given as symbol indices. Forces `|word| + 1` nodes
/// of `t`.
pub fn in_lang(t: &Lang, word: &[usize], budget: &StepBudget) -> Result<bool, Exhausted> {
    let mut cur = t.clone();
    for &i in word {
        let next = cur.deriv(i, budget)?;
        cur = next;
    }
    cur.accepts_empty(budget)
}

/// Membership of a string over `sigma`.
pub fn in_lang_str(t: &Lang, sigma: &Alphabet, s: &str, budget: &StepBudget) -> Result<bool, LangError> {
    let word = sigma.encode(s)?;
    Ok(in_lang(t, &word, budget)?)
}

/// A finite trie: the basis of [`Lang`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TLang {
    Bot,
    Node(bool, Vec<TLang>),
}

impl TLang {
    /// `⊥`, or a rejecting node all of whose children are bottom: the
    /// truncations of `∅`.
    pub fn is_bot(&self) -> bool {
        match self {
            TLang::Bot => true,
            TLang::Node(b, ks) => !b && ks.iter().all(TLang::is_bot),
        }
    }

    /// The label reached by following `word`; words that run into `⊥`
    /// are rejected.
    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut cur = self;
        for &i in word {
            match cur {
                TLang::Bot => return false,
                TLang::Node(_, ks) => cur = &ks[i],
            }
        }
        matches!(cur, TLang::Node(true, _))
    }

    /// Mutual `⊑`.
    pub fn equiv(&self, other: &TLang) -> bool {
        self.leq(other) && other.leq(self)
    }
}

/// Every bottom-like trie is below everything; otherwise labels compare
/// `false ≤ true` and children compare pointwise.
impl Poset for TLang {
    fn leq(&self, other: &Self) -> bool {
        if self.is_bot() {
            return true;
        }
        match (self, other) {
            (TLang::Node(b1, f), TLang::Node(b2, g)) => (!b1 || *b2) && f.iter().zip(g).all(|(x, y)| x.leq(y)),
            _ => false,
        }
    }
}

/// Depth-`n` truncation: `n = 0` gives `⊥`, otherwise the root label and
/// children truncated at `n - 1`.
pub fn lang_idl(t: &Lang, n: usize, budget: &StepBudget) -> Result<TLang, Exhausted> {
    if n == 0 {
        return Ok(TLang::Bot);
    }
    let node = t.force(budget)?;
    let children = node
        .children
        .iter()
        .map(|c| lang_idl(c, n - 1, budget))
        .collect::<Result<_, _>>()?;
    Ok(TLang::Node(node.accept, children))
}

/// The embedding of a finite trie, with `⊥` sent to `∅`.
pub fn lang_incl(t: &TLang, k: usize) -> Lang {
    match t {
        TLang::Bot => empty_n(k),
        TLang::Node(b, ks) => Lang::node(*b, ks.iter().map(|c| lang_incl(c, k)).collect()),
    }
}

/// Concatenation with a finite left operand, by structural recursion:
/// `⊥ ↦ ∅`, `node b f ↦ node (b ∧ o(l)) (λx. f x · l + (if b then δx(l) else ∅))`.
pub fn tconcat(t: &TLang, l: &Lang, k: usize) -> Lang {
    match t {
        TLang::Bot => empty_n(k),
        TLang::Node(b, f) => {
            let (b, f, l) = (*b, f.clone(), l.clone());
            Lang::lazy(move |budget| {
                let nl = l.force(budget)?;
                Ok(LNode {
                    accept: b && nl.accept,
                    children: f
                        .iter()
                        .zip(&nl.children)
                        .map(|(fx, dx)| {
                            let tail = if b { dx.clone() } else { empty_n(k) };
                            union(&tconcat(fx, &l, k), &tail)
                        })
                        .collect(),
                })
            })
        }
    }
}

/// Verdict of a depth-bounded language comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equiv {
    Equal,
    /// A shortest word (as symbol indices) on which the languages differ;
    /// ties are broken by alphabet order.
    Counterexample(Vec<usize>),
}

/// Walk both tries breadth first, in alphabet order, over every word of
/// length at most `depth`, stopping at the first word where `bad` holds.
fn first_word_where(
    a: &Lang,
    b: &Lang,
    depth: usize,
    budget: &StepBudget,
    bad: fn(bool, bool) -> bool,
) -> Result<Option<Vec<usize>>, Exhausted> {
    let mut queue = VecDeque::from([(a.clone(), b.clone(), Vec::new())]);
    while let Some((x, y, word)) = queue.pop_front() {
        let nx = x.force(budget)?;
        let ny = y.force(budget)?;
        if bad(nx.accept, ny.accept) {
            return Ok(Some(word));
        }
        if word.len() < depth {
            for (i, (cx, cy)) in nx.children.iter().zip(&ny.children).enumerate() {
                let mut w = word.clone();
                w.push(i);
                queue.push_back((cx.clone(), cy.clone(), w));
            }
        }
    }
    Ok(None)
}

/// Compare the languages on every word of length at most `depth`.
pub fn equiv_upto(a: &Lang, b: &Lang, depth: usize, budget: &StepBudget) -> Result<Equiv, Exhausted> {
    Ok(match first_word_where(a, b, depth, budget, |x, y| x != y)? {
        None => Equiv::Equal,
        Some(w) => Equiv::Counterexample(w),
    })
}

/// Containment on words of length at most `depth`.
pub fn le_upto(a: &Lang, b: &Lang, depth: usize, budget: &StepBudget) -> Result<bool, Exhausted> {
    Ok(containment_witness(a, b, depth, budget)?.is_none())
}

/// A shortest word of length at most `depth` in `a` but not in `b`.
pub fn containment_witness(
    a: &Lang,
    b: &Lang,
    depth: usize,
    budget: &StepBudget,
) -> Result<Option<Vec<usize>>, Exhausted> {
    first_word_where(a, b, depth, budget, |x, y| x && !y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Alphabet {
        Alphabet::default()
    }

    fn mem(t: &Lang, s: &str) -> bool {
        in_lang_str(t, &sigma(), s, &StepBudget::default()).unwrap()
    }

    fn a() -> Lang {
        chr(&sigma(), 'a').unwrap()
    }

    fn b() -> Lang {
        chr(&sigma(), 'b').unwrap()
    }

    fn all_words(n: usize) -> Vec<String> {
        let s = sigma();
        s.words_upto(n).iter().map(|w| s.decode(w)).collect()
    }

    #[test]
    fn basic_languages() {
        let s = sigma();
        assert!(mem(&eps(&s), ""));
        assert!(!mem(&eps(&s), "a"));
        assert!(mem(&a(), "a"));
        assert!(!mem(&a(), ""));
        assert!(!mem(&empty(&s), ""));
        assert!(!mem(&comp(&eps(&s)), ""));
        assert!(matches!(chr(&s, 'c'), Err(LangError::UnknownSymbol('c'))));
        assert!(matches!(
            in_lang_str(&a(), &s, "ac", &StepBudget::default()),
            Err(LangError::UnknownSymbol('c'))
        ));
    }

    #[test]
    fn boolean_operations() {
        let s = sigma();
        assert!(mem(&union(&a(), &b()), "b"));
        assert!(!mem(&inter(&a(), &b()), "a"));
        let full = comp(&empty(&s));
        for w in all_words(6) {
            assert!(mem(&full, &w), "{w}");
        }
    }

    #[test]
    fn concat_and_star() {
        let ab = concat(&a(), &b());
        assert!(mem(&ab, "ab"));
        assert!(!mem(&ab, "a"));
        let astar_b = concat(&star(&a()), &b());
        // a*b: some a's followed by exactly one b.
        for w in all_words(6) {
            let expect = w.ends_with('b') && w[..w.len() - 1].chars().all(|c| c == 'a');
            assert_eq!(mem(&astar_b, &w), expect, "{w}");
        }
        let astar = star(&a());
        assert!(mem(&astar, ""));
        assert!(mem(&astar, "aaa"));
        assert!(!mem(&astar, "ab"));
        let all = star(&union(&a(), &b()));
        for w in all_words(6) {
            assert!(mem(&all, &w));
        }
        let abstar = star(&ab);
        assert!(mem(&abstar, "abab"));
        assert!(!mem(&abstar, "aba"));
    }

    #[test]
    fn membership_forces_one_node_per_symbol() {
        let t = comp(&empty(&sigma()));
        let budget = StepBudget::unlimited();
        in_lang(&t, &[0, 1, 0], &budget).unwrap();
        // Each complement node forces itself and its operand node.
        assert_eq!(budget.used(), 2 * 4);
        let t = Lang::node(true, vec![]);
        let budget = StepBudget::unlimited();
        in_lang(&t, &[], &budget).unwrap();
        assert_eq!(budget.used(), 1);
    }

    #[test]
    fn truncations() {
        let s = sigma();
        let bud = StepBudget::default();
        assert!(lang_idl(&empty(&s), 3, &bud).unwrap().is_bot());
        assert_eq!(
            lang_idl(&eps(&s), 1, &bud).unwrap(),
            TLang::Node(true, vec![TLang::Bot, TLang::Bot])
        );
        assert_eq!(lang_idl(&a(), 0, &bud).unwrap(), TLang::Bot);
        let t = star(&concat(&a(), &b()));
        for n in 0..6 {
            let lo = lang_idl(&t, n, &bud).unwrap();
            let hi = lang_idl(&t, n + 1, &bud).unwrap();
            assert!(lo.leq(&hi));
        }
    }

    #[test]
    fn tlang_order_collapses_bottoms() {
        let bot_node = TLang::Node(false, vec![TLang::Bot, TLang::Bot]);
        assert!(bot_node.leq(&TLang::Bot));
        assert!(TLang::Bot.leq(&bot_node));
        let acc = TLang::Node(true, vec![TLang::Bot, TLang::Bot]);
        assert!(!acc.leq(&TLang::Bot));
        assert!(bot_node.leq(&acc));
        assert!(!acc.leq(&bot_node));
    }

    #[test]
    fn equivalence_and_containment() {
        let s = sigma();
        let budget = StepBudget::unlimited();
        let lhs = star(&union(&a(), &b()));
        let rhs = star(&concat(&star(&a()), &star(&b())));
        assert_eq!(equiv_upto(&lhs, &rhs, 6, &budget).unwrap(), Equiv::Equal);
        assert_eq!(
            equiv_upto(&a(), &b(), 1, &budget).unwrap(),
            Equiv::Counterexample(vec![0])
        );
        assert_eq!(
            equiv_upto(&a(), &concat(&a(), &a()), 2, &budget).unwrap(),
            Equiv::Counterexample(vec![0])
        );
        assert_eq!(equiv_upto(&a(), &b(), 0, &budget).unwrap(), Equiv::Equal);
        assert_eq!(
            equiv_upto(&empty(&s), &comp(&comp(&empty(&s))), 4, &budget).unwrap(),
            Equiv::Equal
        );
        assert!(le_upto(&a(), &star(&a()), 4, &budget).unwrap());
        assert!(!le_upto(&star(&a()), &a(), 4, &budget).unwrap());
    }

    #[test]
    fn counterexample_is_shortest_then_alphabet_first() {
        let budget = StepBudget::unlimited();
        // Differ on "ba" and "ab" only: "ab" comes first.
        let x = union(&concat(&a(), &b()), &concat(&b(), &a()));
        let y = empty(&sigma());
        assert_eq!(
            equiv_upto(&x, &y, 5, &budget).unwrap(),
            Equiv::Counterexample(vec![0, 1])
        );
    }

    #[test]
    fn tconcat_matches_lazy_concat_on_truncations() {
        let k = 2;
        let budget = StepBudget::unlimited();
        let l = star(&b());
        for lhs in [a(), star(&a()), union(&eps(&sigma()), &concat(&a(), &b()))] {
            for n in 0..6 {
                let t = lang_idl(&lhs, n, &budget).unwrap();
                let folded = lang_idl(&tconcat(&t, &l, k), n, &budget).unwrap();
                let direct = lang_idl(&concat(&lhs, &l), n, &budget).unwrap();
                assert!(folded.equiv(&direct), "n={n}");
            }
        }
    }

    #[test]
    fn long_membership_chain_drops_cleanly() {
        let word = vec![0; 50_000];
        assert!(in_lang(&star(&a()), &word, &StepBudget::unlimited()).unwrap());
        let word: Vec<usize> = (0..50_000).map(|i| i % 2).collect();
        assert!(in_lang(&star(&concat(&a(), &b())), &word, &StepBudget::unlimited()).unwrap());
    }
}
