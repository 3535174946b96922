//! The stream sieve of Eratosthenes and a finite verification harness.
//!
//! `sieve_aux (cons n l) = cons n (filter (m mod n != 0) (sieve_aux l))`:
//! every candidate `m` is emitted by its own layer and then has to pass the
//! filter of every smaller candidate. It is the "unfaithful" sieve, kept in
//! that form on purpose.

use serde::{Deserialize, Serialize};

use crate::colist::{check_productive, coexists, filter, ordered_upto, Colist, ColistCell, Exists};
use crate::lazy::{Exhausted, StepBudget};

/// `n, n+1, n+2, ...`
pub fn nats(n: u64) -> Colist<u64> {
    Colist::unfold(n, |&k| Some((k, k + 1)))
}

fn sieve_aux(l: Colist<u64>) -> Colist<u64> {
    Colist::lazy(move |budget| {
        Ok(match l.force(budget)? {
            ColistCell::Bot => ColistCell::Bot,
            ColistCell::Cons(n, rest) => {
                let n = *n;
                ColistCell::Cons(n, filter(move |m: &u64| !m.is_multiple_of(n), &sieve_aux(rest.clone())))
            }
        })
    })
}

/// The lazy stream of primes.
pub fn sieve() -> Colist<u64> {
    sieve_aux(nats(2))
}

/// Trial division: `1 < n` and no `m` in `2..n` divides `n`.
pub fn is_prime(n: u64) -> bool {
    n > 1 && (2..n).take_while(|m| m * m <= n).all(|m| !n.is_multiple_of(m))
}

/// Primes up to and including `bound`, by trial division.
pub fn primes_upto(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveReport {
    pub bound: u64,
    pub sound: bool,
    pub complete: bool,
    pub sorted: bool,
    pub nodup: bool,
    /// Number of sieve cells forced within the budget.
    pub productive_to: u64,
    /// The forced outputs that are `<= bound`.
    pub outputs: Vec<u64>,
    pub exhausted: bool,
}

/// Force the sieve far enough to cover every prime `<= bound` and check the
/// forced prefix against trial division.
///
/// The search fuel is `π(bound) + 1` cells: if the stream is sorted, the
/// prime `p` sits at index `π(p) - 1`.
pub fn verify_sieve(bound: u64, budget: &StepBudget) -> SieveReport {
    let oracle = primes_upto(bound);
    let fuel = oracle.len() + 1;
    let stream = sieve();

    let mut forced = Vec::with_capacity(fuel);
    let mut exhausted = false;
    let mut cur = stream.clone();
    while forced.len() < fuel {
        let next = match cur.force(budget) {
            Err(Exhausted) => {
                exhausted = true;
                break;
            }
            Ok(ColistCell::Bot) => break,
            Ok(ColistCell::Cons(n, rest)) => {
                forced.push(*n);
                rest.clone()
            }
        };
        cur = next;
    }
    let productive_to = forced.len() as u64;
    let depth = forced.len();
    let outputs: Vec<u64> = forced.iter().copied().filter(|&n| n <= bound).collect();

    let sound = outputs.iter().all(|&n| is_prime(n));
    let complete = !exhausted
        && oracle
            .iter()
            .all(|&p| matches!(coexists(|&n| n == p, &stream, fuel, budget), Ok(Exists::Found(_))));
    // The checked prefix is already forced: one step per cell suffices.
    let check = |rel: fn(&u64, &u64) -> bool| {
        ordered_upto(rel, &stream, depth, &StepBudget::new(depth as u64 + 1)).unwrap_or(false)
    };
    let sorted = check(|a, b| a < b);
    let nodup = check(|a, b| a != b);

    SieveReport {
        bound,
        sound,
        complete,
        sorted,
        nodup,
        productive_to,
        outputs,
        exhausted: exhausted || budget.is_exhausted(),
    }
}

/// Whether `n` sieve cells can be forced within `budget`.
pub fn sieve_productive(n: usize, budget: &StepBudget) -> Result<bool, Exhausted> {
    check_productive(&sieve(), n, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colist::{coforall_upto, Forall};
    use crate::lazy::with_large_stack;

    fn naive_is_prime(n: u64) -> bool {
        n > 1 && (2..n).all(|m| !n.is_multiple_of(m))
    }

    #[test]
    fn is_prime_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(91));
        for n in 0..2000 {
            assert_eq!(is_prime(n), naive_is_prime(n), "{n}");
        }
    }

    #[test]
    fn nats_examples() {
        let b = StepBudget::default();
        assert_eq!(nats(2).idl(3, &b).unwrap().as_slice(), &[2, 3, 4]);
        assert_eq!(nats(0).idl(1, &b).unwrap().as_slice(), &[0]);
        assert_eq!(check_productive(&nats(5), 1000, &b), Ok(true));
    }

    #[test]
    fn sieve_prefixes() {
        let b = StepBudget::default();
        assert_eq!(sieve().idl(5, &b).unwrap().as_slice(), &[2, 3, 5, 7, 11]);
        assert_eq!(sieve().idl(1, &b).unwrap().as_slice(), &[2]);
        assert!(sieve().idl(0, &b).unwrap().is_empty());
        let ps = primes_upto(100);
        assert_eq!(ps.len(), 25);
        assert_eq!(sieve().idl(25, &b).unwrap().as_slice(), &ps[..]);
    }

    #[test]
    fn first_sieve_element_is_prime() {
        let b = StepBudget::default();
        assert_eq!(coexists(|&n| is_prime(n), &sieve(), 1, &b), Ok(Exists::Found(0)));
        assert_eq!(
            coforall_upto(|&n| is_prime(n), &sieve(), 50, &b),
            Ok(Forall::HoldsUpTo(50))
        );
        assert_eq!(ordered_upto(|a, c| a < c, &sieve(), 25, &b), Ok(true));
    }

    #[test]
    fn verify_small_bounds() {
        let r = verify_sieve(100, &StepBudget::default());
        assert!(r.sound && r.complete && r.sorted && r.nodup && !r.exhausted);
        assert_eq!(r.outputs, primes_upto(100));
        assert_eq!(r.productive_to, 26);

        let r = verify_sieve(2, &StepBudget::default());
        assert_eq!(r.outputs, vec![2]);
        assert!(r.complete);
    }

    #[test]
    fn verify_with_tiny_budget_is_partial() {
        let r = with_large_stack(|| verify_sieve(1000, &StepBudget::new(500)));
        assert!(r.exhausted);
        assert!(!r.complete);
        assert!(r.productive_to < 169);
        assert!(r.sound);
    }
}
