use std::fmt::Write as _;

use coapprox::approx::converge_bracket;
use coapprox::colist::colist_idl;
use coapprox::cotree::equidist::EquidistReport;
use coapprox::cotree::{equidist, sample_many, wlp_chain, wp_chain, BitSource, DistSpec, Event, Expectation, Outcome};
use coapprox::erat::ERat;
use coapprox::lang::laws::LawsReport;
use coapprox::lang::{compile_str, equiv_upto, in_lang_str, ka_axiom_suite, Alphabet, Equiv};
use coapprox::lazy::StepBudget;
use coapprox::sieve::{is_prime, sieve};
use serde::Serialize;

use crate::{Cli, Command, RegexCommand, EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK};

/// A finished command: exit code, both renderings and an optional message
/// for stderr.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub code: i32,
    pub text: String,
    pub json: String,
    pub note: Option<String>,
}

impl Rendered {
    fn new<R: Serialize>(code: i32, report: &R, text: String) -> Self {
        Rendered {
            code,
            text,
            json: format!("{}\n", serde_json::to_string_pretty(report).expect("reports serialize")),
            note: None,
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }
}

type CmdResult = Result<Rendered, String>;

pub fn dispatch(cli: &Cli) -> CmdResult {
    let steps = cli.step_budget;
    match &cli.command {
        Command::Sieve { count } => run_sieve(*count, steps),
        Command::Regex(RegexCommand::Match {
            pattern,
            input,
            alphabet,
        }) => run_match(pattern, input, alphabet, steps),
        Command::Regex(RegexCommand::Equiv {
            left,
            right,
            depth,
            alphabet,
        }) => run_equiv(left, right, *depth, alphabet, steps),
        Command::Regex(RegexCommand::Laws {
            depth,
            trials,
            seed,
            alphabet,
        }) => run_laws(*depth, *trials, *seed, alphabet, steps),
        Command::Wp { dist, event, fuel, eps } => run_wp(*dist, *event, *fuel, eps.as_ref(), steps),
        Command::Sample { dist, n, seed } => run_sample(*dist, *n, *seed, steps),
        Command::Equidist {
            dist,
            event,
            n,
            seed,
            tol,
        } => run_equidist(*dist, *event, *n, *seed, tol, steps),
    }
}

#[derive(Serialize)]
struct SieveOutput {
    count: usize,
    primes: Vec<u64>,
    all_prime: bool,
    steps_used: u64,
}

fn run_sieve(count: usize, steps: u64) -> CmdResult {
    if count == 0 {
        return Err("--count must be at least 1".into());
    }
    let budget = StepBudget::new(steps);
    let primes = colist_idl(&sieve(), count, &budget)
        .map_err(|e| format!("{e} before {count} primes were produced; raise --step-budget"))?
        .into_vec();
    let all_prime = primes.iter().all(|&p| is_prime(p));
    let text = primes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ") + "\n";
    let out = SieveOutput {
        count,
        primes,
        all_prime,
        steps_used: budget.used(),
    };
    Ok(Rendered::new(EXIT_OK, &out, text))
}

fn alphabet(symbols: &str) -> Result<Alphabet, String> {
    Alphabet::new(symbols).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct MatchOutput<'a> {
    pattern: &'a str,
    input: &'a str,
    alphabet: &'a str,
    accepted: bool,
}

fn run_match(pattern: &str, input: &str, symbols: &str, steps: u64) -> CmdResult {
    let sigma = alphabet(symbols)?;
    let lang = compile_str(pattern, &sigma).map_err(|e| e.to_string())?;
    let accepted = in_lang_str(&lang, &sigma, input, &StepBudget::new(steps)).map_err(|e| e.to_string())?;
    let out = MatchOutput {
        pattern,
        input,
        alphabet: symbols,
        accepted,
    };
    let text = if accepted { "accept\n" } else { "reject\n" };
    Ok(Rendered::new(
        if accepted { EXIT_OK } else { EXIT_NEGATIVE },
        &out,
        text.into(),
    ))
}

#[derive(Serialize)]
struct EquivOutput<'a> {
    left: &'a str,
    right: &'a str,
    depth: usize,
    alphabet: &'a str,
    equivalent: bool,
    counterexample: Option<String>,
    /// Which side accepts the counterexample.
    accepted_by: Option<&'static str>,
}

fn run_equiv(left: &str, right: &str, depth: usize, symbols: &str, steps: u64) -> CmdResult {
    let sigma = alphabet(symbols)?;
    let l = compile_str(left, &sigma).map_err(|e| e.to_string())?;
    let r = compile_str(right, &sigma).map_err(|e| e.to_string())?;
    let budget = StepBudget::new(steps);
    let verdict = equiv_upto(&l, &r, depth, &budget).map_err(|e| e.to_string())?;
    let (counterexample, accepted_by) = match &verdict {
        Equiv::Equal => (None, None),
        Equiv::Counterexample(w) => {
            let word = sigma.decode(w);
            let in_left = in_lang_str(&l, &sigma, &word, &budget).map_err(|e| e.to_string())?;
            (Some(word), Some(if in_left { "left" } else { "right" }))
        }
    };
    let text = match (&counterexample, accepted_by) {
        (Some(w), Some(side)) => format!("counterexample: {w:?} (accepted by {side} only)\n"),
        _ => format!("equal on all words of length <= {depth}\n"),
    };
    let out = EquivOutput {
        left,
        right,
        depth,
        alphabet: symbols,
        equivalent: counterexample.is_none(),
        counterexample,
        accepted_by,
    };
    Ok(Rendered::new(
        if out.equivalent { EXIT_OK } else { EXIT_NEGATIVE },
        &out,
        text,
    ))
}

fn run_laws(depth: usize, trials: usize, seed: u64, symbols: &str, steps: u64) -> CmdResult {
    let sigma = alphabet(symbols)?;
    let report = ka_axiom_suite(&sigma, depth, trials, seed, steps).map_err(|e| e.to_string())?;
    let text = laws_text(&report);
    Ok(Rendered::new(
        if report.passed() { EXIT_OK } else { EXIT_NEGATIVE },
        &report,
        text,
    ))
}

fn laws_text(r: &LawsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "alphabet {:?}, words up to length {}, {} trials, seed {}",
        r.alphabet, r.depth, r.trials, r.seed
    );
    let width = r.laws.iter().map(|l| l.name.len()).max().unwrap_or(0);
    for law in &r.laws {
        let kind = serde_json::to_value(law.kind).expect("kind serializes");
        let _ = write!(
            s,
            "{:width$}  {:<11}  checked {:>4}  failures {}",
            law.name,
            kind.as_str().unwrap_or_default(),
            law.checked,
            law.failures,
        );
        if law.vacuous > 0 {
            let _ = write!(s, "  vacuous {}", law.vacuous);
        }
        s.push('\n');
        for c in &law.counterexamples {
            let _ = writeln!(s, "    trial {}: {} vs {} on {:?}", c.trial, c.lhs, c.rhs, c.witness);
        }
    }
    let o = &r.order_identity;
    let _ = writeln!(
        s,
        "order: {} of {} pairs contained; `a + b = b` agrees on {}, `a + b = a` on {}; matching: {}",
        o.contained,
        o.pairs,
        o.agrees_sum_is_upper,
        o.agrees_sum_is_lower,
        o.matching.as_deref().unwrap_or("none"),
    );
    let _ = writeln!(s, "total counterexamples: {}", r.total_counterexamples);
    s
}

#[derive(Serialize)]
struct WpOutput {
    dist: DistSpec,
    event: Event,
    fuel: usize,
    wp: Vec<ERat>,
    wlp: Vec<ERat>,
    lower: ERat,
    upper: ERat,
    gap: ERat,
    eps: Option<ERat>,
    converged: Option<bool>,
}

fn run_wp(dist: DistSpec, event: Event, fuel: usize, eps: Option<&ERat>, steps: u64) -> CmdResult {
    event.check_against(&dist).map_err(|e| e.to_string())?;
    let t = dist.build().map_err(|e| e.to_string())?;
    let f = Expectation::indicator(move |o: &Outcome| event.matches(o));
    let budget = StepBudget::new(steps);
    let wp = wp_chain(&f, &t, fuel, &budget).map_err(|e| e.to_string())?;
    let wlp = wlp_chain(&f, &t, fuel, &budget).map_err(|e| e.to_string())?;
    let (lower, upper) = (wp.last().clone(), wlp.last().clone());
    let gap = upper.sub_trunc(&lower);
    let converged = eps.map(|e| converge_bracket(&wp, &wlp, e).is_ok());

    let mut text = String::new();
    let _ = writeln!(text, "{dist}, event {event}");
    let _ = writeln!(text, "{:>4}  {:<24}  wlp", "fuel", "wp");
    for (i, (a, b)) in wp.values().iter().zip(wlp.values()).enumerate() {
        let _ = writeln!(text, "{i:>4}  {:<24}  {}", a.to_string(), b);
    }
    let _ = writeln!(text, "bracket [{lower}, {upper}], gap {gap}");
    if let (Some(e), Some(ok)) = (eps, converged) {
        let verdict = if ok { "within" } else { "NOT within" };
        let _ = writeln!(text, "gap {verdict} eps {e}");
    }

    let out = WpOutput {
        dist,
        event,
        fuel,
        wp: wp.into_values(),
        wlp: wlp.into_values(),
        lower,
        upper,
        gap,
        eps: eps.cloned(),
        converged,
    };
    let r = Rendered::new(if converged == Some(false) { EXIT_ERROR } else { EXIT_OK }, &out, text);
    Ok(match (converged, eps) {
        (Some(false), Some(e)) => r.with_note(format!("bracket gap {} exceeds eps {e} at fuel {fuel}", out.gap)),
        _ => r,
    })
}

#[derive(Serialize)]
struct Bin {
    value: Outcome,
    count: u64,
}

#[derive(Serialize)]
struct SampleOutput {
    dist: DistSpec,
    seed: u64,
    n: u64,
    histogram: Vec<Bin>,
    diverged_bot: u64,
    diverged_budget: u64,
    total_bits: u64,
}

fn run_sample(dist: DistSpec, n: u64, seed: u64, steps: u64) -> CmdResult {
    let t = dist.build().map_err(|e| e.to_string())?;
    let stats = sample_many(&t, &mut BitSource::seeded(seed), n, steps);
    let histogram: Vec<Bin> = stats
        .counts
        .iter()
        .map(|(&value, &count)| Bin { value, count })
        .collect();

    let mut text = String::new();
    let _ = writeln!(text, "{dist}, {n} samples, seed {seed}");
    let peak = histogram.iter().map(|b| b.count).max().unwrap_or(0).max(1);
    let label = histogram.iter().map(|b| b.value.to_string().len()).max().unwrap_or(0);
    let digits = n.to_string().len();
    for b in &histogram {
        let bar = "#".repeat((b.count * 40).div_ceil(peak) as usize);
        let freq = b.count as f64 / n as f64;
        let _ = writeln!(
            text,
            "{:>label$}  {:>digits$}  {freq:.4}  {bar}",
            b.value.to_string(),
            b.count
        );
    }
    if stats.diverged_bot + stats.diverged_budget > 0 {
        let _ = writeln!(
            text,
            "diverged: {} at bottom, {} out of steps",
            stats.diverged_bot, stats.diverged_budget
        );
    }
    let _ = writeln!(text, "bits consumed: {}", stats.total_bits);

    let out = SampleOutput {
        dist,
        seed,
        n,
        histogram,
        diverged_bot: stats.diverged_bot,
        diverged_budget: stats.diverged_budget,
        total_bits: stats.total_bits,
    };
    Ok(Rendered::new(EXIT_OK, &out, text))
}

fn run_equidist(dist: DistSpec, event: Event, n: u64, seed: u64, tol: &ERat, steps: u64) -> CmdResult {
    let r = equidist(dist, event, n, seed, tol, steps).map_err(|e| e.to_string())?;
    let text = equidist_text(&r);
    Ok(Rendered::new(if r.pass { EXIT_OK } else { EXIT_NEGATIVE }, &r, text))
}

fn equidist_text(r: &EquidistReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}, event {}, {} samples, seed {}",
        r.dist, r.event, r.n_samples, r.seed
    );
    let _ = writeln!(
        s,
        "hits {}  diverged {}  out of steps {}",
        r.n_hits, r.n_diverged, r.n_budget_exhausted
    );
    let _ = writeln!(s, "empirical frequency {:.6}", r.empirical_freq);
    let _ = writeln!(
        s,
        "bracket [{}, {}] at fuel {}, midpoint {:.6}",
        r.wp_lower, r.wlp_upper, r.fuel, r.midpoint
    );
    let _ = writeln!(
        s,
        "|difference| {:.6}, tolerance {}: {}",
        (r.empirical_freq - r.midpoint).abs(),
        r.tolerance,
        if r.pass { "PASS" } else { "FAIL" }
    );
    s
}
