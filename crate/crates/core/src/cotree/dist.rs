//! Samplers for discrete distributions in the random bit model.
//!
//! Each node consumes one fair bit. `bernoulli(num/den)` and `uniform(n)`
//! read `k = ⌈log2 den⌉` (resp. `⌈log2 n⌉`) bits, most significant first,
//! and retry when the value read is out of range. `bernoulli(2/3)` is
//! built as the three-leaf loop `1 ↦ true`, `01 ↦ false`, `00 ↦ retry`.

use std::fmt;
use std::ops::ControlFlow::{self, Break, Continue};
use std::rc::Rc;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::tree::{iter_cotree, Cotree};
use super::CotreeError;

/// Largest accepted denominator or range size.
pub const MAX_DENOMINATOR: u64 = 1 << 32;

fn bits_needed(n: u64) -> u32 {
    // ⌈log2 n⌉ for n ≥ 1
    64 - (n - 1).leading_zeros()
}

/// A complete tree of depth `k` whose leaf at bit path `b1..bk` is
/// `leaf(b1..bk read as a binary number)`.
fn bits_tree<X: Clone + 'static>(k: u32, acc: u64, leaf: Rc<dyn Fn(u64) -> Cotree<X>>) -> Cotree<X> {
    if k == 0 {
        return leaf(acc);
    }
    Cotree::lazy(move |_| {
        Ok(super::tree::CotreeCell::Node(
            bits_tree(k - 1, 2 * acc + 1, Rc::clone(&leaf)),
            bits_tree(k - 1, 2 * acc, Rc::clone(&leaf)),
        ))
    })
}

/// Retry loop: draw `k` bits, keep the value if `< range`.
fn rejection<X: Clone + 'static>(range: u64, out: impl Fn(u64) -> X + 'static) -> Cotree<X> {
    let k = bits_needed(range);
    let out = Rc::new(out);
    iter_cotree(
        move |_: &()| {
            let out = Rc::clone(&out);
            bits_tree(
                k,
                0,
                Rc::new(move |v| Cotree::leaf(if v < range { Break(out(v)) } else { Continue(()) })),
            )
        },
        (),
    )
}

fn check_probability(num: u64, den: u64) -> Result<(u64, u64), CotreeError> {
    if den == 0 {
        return Err(CotreeError::InvalidParameter("zero denominator".into()));
    }
    if num > den {
        return Err(CotreeError::InvalidParameter(format!(
            "probability {num}/{den} exceeds 1"
        )));
    }
    let g = num.gcd(&den);
    let (num, den) = (num / g, den / g);
    if den > MAX_DENOMINATOR {
        return Err(CotreeError::InvalidParameter(format!(
            "denominator {den} exceeds {MAX_DENOMINATOR}"
        )));
    }
    Ok((num, den))
}

fn coin<X: Clone + 'static>(num: u64, den: u64, out: impl Fn(bool) -> X + 'static) -> Result<Cotree<X>, CotreeError> {
    let (num, den) = check_probability(num, den)?;
    Ok(match (num, den) {
        (0, _) => Cotree::leaf(out(false)),
        (n, d) if n == d => Cotree::leaf(out(true)),
        (2, 3) => {
            let (t, f) = (out(true), out(false));
            iter_cotree(
                move |_: &()| {
                    Cotree::node(
                        Cotree::leaf(Break(t.clone())),
                        Cotree::node(Cotree::leaf(Break(f.clone())), Cotree::leaf(Continue(()))),
                    )
                },
                (),
            )
        }
        (num, den) => rejection(den, move |v| out(v < num)),
    })
}

fn uniform_with<X: Clone + 'static>(n: u64, out: impl Fn(u64) -> X + 'static) -> Result<Cotree<X>, CotreeError> {
    if n == 0 || n > MAX_DENOMINATOR {
        return Err(CotreeError::InvalidParameter(format!(
            "uniform range must be in 1..={MAX_DENOMINATOR}, got {n}"
        )));
    }
    Ok(if n == 1 {
        Cotree::leaf(out(0))
    } else {
        rejection(n, out)
    })
}

fn geometric_with<X: Clone + 'static>(
    num: u64,
    den: u64,
    out: impl Fn(u64) -> X + 'static,
) -> Result<Cotree<X>, CotreeError> {
    if check_probability(num, den)?.0 == 0 {
        return Err(CotreeError::InvalidParameter(
            "geometric needs a positive success probability".into(),
        ));
    }
    let out = Rc::new(out);
    Ok(iter_cotree(
        move |&c: &u64| -> Cotree<ControlFlow<X, u64>> {
            let out = Rc::clone(&out);
            coin(num, den, move |hit| if hit { Break(out(c)) } else { Continue(c + 1) }).expect("checked above")
        },
        0,
    ))
}

/// A coin that lands `true` with probability `num/den`.
pub fn bernoulli(num: u64, den: u64) -> Result<Cotree<bool>, CotreeError> {
    coin(num, den, |b| b)
}

/// Uniform on `0..n`.
pub fn uniform(n: u64) -> Result<Cotree<u64>, CotreeError> {
    uniform_with(n, |k| k)
}

/// Number of failures before the first success of a `num/den` coin.
pub fn geometric(num: u64, den: u64) -> Result<Cotree<u64>, CotreeError> {
    geometric_with(num, den, |k| k)
}

/// A sampled value: a coin face or a natural number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    Bool(bool),
    Nat(u64),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Bool(b) => write!(f, "{b}"),
            Outcome::Nat(n) => write!(f, "{n}"),
        }
    }
}

/// `bernoulli:NUM/DEN`, `uniform:N` or `geometric:NUM/DEN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistSpec {
    Bernoulli { num: u64, den: u64 },
    Uniform { n: u64 },
    Geometric { num: u64, den: u64 },
}

impl DistSpec {
    /// Whether outcomes are booleans (otherwise naturals).
    pub fn is_boolean(&self) -> bool {
        matches!(self, DistSpec::Bernoulli { .. })
    }

    pub fn build(&self) -> Result<Cotree<Outcome>, CotreeError> {
        Ok(match *self {
            DistSpec::Bernoulli { num, den } => coin(num, den, Outcome::Bool)?,
            DistSpec::Uniform { n } => uniform_with(n, Outcome::Nat)?,
            DistSpec::Geometric { num, den } => geometric_with(num, den, Outcome::Nat)?,
        })
    }
}

fn parse_fraction(s: &str) -> Option<(u64, u64)> {
    match s.split_once('/') {
        Some((n, d)) => Some((n.trim().parse().ok()?, d.trim().parse().ok()?)),
        None => Some((s.trim().parse().ok()?, 1)),
    }
}

impl FromStr for DistSpec {
    type Err = CotreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CotreeError::InvalidParameter(format!("unrecognized distribution `{s}`"));
        let (kind, arg) = s.trim().split_once(':').ok_or_else(bad)?;
        let spec = match kind {
            "bernoulli" => {
                let (num, den) = parse_fraction(arg).ok_or_else(bad)?;
                DistSpec::Bernoulli { num, den }
            }
            "geometric" => {
                let (num, den) = parse_fraction(arg).ok_or_else(bad)?;
                DistSpec::Geometric { num, den }
            }
            "uniform" => DistSpec::Uniform {
                n: arg.trim().parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        // Reject out-of-range parameters at parse time.
        spec.build()?;
        Ok(spec)
    }
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::Bernoulli { num, den } => write!(f, "bernoulli:{num}/{den}"),
            DistSpec::Uniform { n } => write!(f, "uniform:{n}"),
            DistSpec::Geometric { num, den } => write!(f, "geometric:{num}/{den}"),
        }
    }
}

impl Serialize for DistSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DistSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `true`, `false` or `k=N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    Is(bool),
    Equals(u64),
}

impl Event {
    pub fn matches(&self, o: &Outcome) -> bool {
        match (self, o) {
            (Event::Is(b), Outcome::Bool(x)) => b == x,
            (Event::Equals(n), Outcome::Nat(k)) => n == k,
            _ => false,
        }
    }

    /// Events on booleans only make sense for coins, `k=N` only for
    /// natural-valued distributions.
    pub fn check_against(&self, spec: &DistSpec) -> Result<(), CotreeError> {
        match (self, spec.is_boolean()) {
            (Event::Is(_), true) | (Event::Equals(_), false) => Ok(()),
            _ => Err(CotreeError::InvalidParameter(format!(
                "event `{self}` does not apply to `{spec}`"
            ))),
        }
    }
}

impl FromStr for Event {
    type Err = CotreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "true" => Ok(Event::Is(true)),
            "false" => Ok(Event::Is(false)),
            t => t
                .strip_prefix("k=")
                .and_then(|n| n.trim().parse().ok())
                .map(Event::Equals)
                .ok_or_else(|| CotreeError::InvalidParameter(format!("unrecognized event `{s}`"))),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Is(b) => write!(f, "{b}"),
            Event::Equals(n) => write!(f, "k={n}"),
        }
    }
}

impl Serialize for Event {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Event {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
