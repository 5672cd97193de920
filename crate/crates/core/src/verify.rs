//! End-to-end checks against the published listings and value tables.
//!
//! Each suite returns a [`Report`]: one line per check plus an overall
//! verdict. The CLI and the acceptance tests both run these.

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::Ratio;

use crate::canon::canonical_pattern;
use crate::error::{Error, Result};
use crate::pattern::{Game, MasetPattern};
use crate::poly::Polynomial;
use crate::solver::{closed_form_ab, closed_form_mm, Oracle};
use crate::system::{
    derive, derive_counts, eval_system, oracle_table, oracle_value, verify_fixpoint, DerivationOutput,
    Term,
};

/// Published equations, one per line: `id<TAB>equation`.
pub const REFERENCE_EQUATIONS: &str = include_str!("../reference/equations.tsv");

pub const MM2_QUEUE: [&str; 6] = [
    "(*_n,*_n)",
    "(0,*_{n-1}) | (*_{n-1},0)",
    "(1,*_{n-2}) | (*_{n-2},0)",
    "(0,0) | (0,*_{n-2}) | (1,1) | (*_{n-2},1)",
    "(*_{n-1},0)",
    "(0,0) | (0,*_{n-1})",
];

pub const AB2_QUEUE: [&str; 3] = ["(*_n,*_n)", "(1,*_{n-2}) | (*_{n-2},0)", "(*_{n-1},0)"];

/// Published `A_{2,i}(n)` values as `(i, first n, values...)`; blank cells
/// are simply absent.
pub const MM2_TABLE: [(usize, u32, &[i64]); 6] = [
    (0, 2, &[8, 21, 45, 81]),
    (1, 2, &[3, 7, 13, 21]),
    (2, 3, &[3, 7, 13]),
    (3, 3, &[7, 13, 21]),
    (4, 2, &[1, 3, 6, 9]),
    (5, 2, &[3, 6, 9, 13]),
];

pub const AB2_TABLE: [(usize, u32, &[i64]); 3] = [
    (0, 2, &[3, 13, 30, 60]),
    (1, 3, &[3, 7, 13]),
    (2, 2, &[1, 3, 6, 9]),
];

pub const SUITES: [&str; 7] = ["p1", "mm2", "ab2", "tables", "formulas", "fixpoint", "counts3"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    pub lines: Vec<String>,
}

impl Report {
    fn new(suite: &str) -> Self {
        Self {
            suite: suite.into(),
            passed: true,
            lines: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: impl Into<String>) {
        let line = line.into();
        self.passed &= ok;
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: impl Into<String>) {
        self.lines.push(format!("     {}", line.into()));
    }
}

/// An equation as printed: `A_{p,i}(n) = A_{p,l}(n-r) + ... + <poly>`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReferenceEquation {
    pub id: String,
    pub pattern: usize,
    /// Sorted.
    pub terms: Vec<Term>,
    pub w: Polynomial,
}

fn parse_error(message: String) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message,
    }
}

/// `A_{p,l}(n)` or `A_{p,l}(n-r)` → `(l, r)`.
fn parse_term(text: &str) -> Result<(usize, u32)> {
    let bad = || parse_error(format!("bad term {text:?}"));
    let rest = text.strip_prefix("A_{").ok_or_else(bad)?;
    let (indices, arg) = rest.split_once("}(").ok_or_else(bad)?;
    let l = indices
        .split_once(',')
        .and_then(|(_, l)| l.parse().ok())
        .ok_or_else(bad)?;
    let arg = arg.strip_suffix(')').ok_or_else(bad)?;
    let shift = match arg {
        "n" => 0,
        _ => arg.strip_prefix("n-").and_then(|r| r.parse().ok()).ok_or_else(bad)?,
    };
    Ok((l, shift))
}

/// Products like `2(n-1)`, `n(n-1)`, `n^2`, `(n-1)`, `3`.
fn parse_product(text: &str) -> Result<Polynomial> {
    let bad = || parse_error(format!("bad polynomial {text:?}"));
    let mut acc = Polynomial::constant(1);
    let mut rest = text.trim();
    while !rest.is_empty() {
        if let Some(inner) = rest.strip_prefix('(') {
            let (inside, after) = inner.split_once(')').ok_or_else(bad)?;
            let factor = match inside.trim() {
                "n" => Polynomial::shifted_n(0),
                s => {
                    if let Some(k) = s.strip_prefix("n-") {
                        Polynomial::shifted_n(k.trim().parse().map_err(|_| bad())?)
                    } else if let Some(k) = s.strip_prefix("n+") {
                        Polynomial::shifted_n(-k.trim().parse::<i64>().map_err(|_| bad())?)
                    } else {
                        return Err(bad());
                    }
                }
            };
            acc = &acc * &factor;
            rest = after;
        } else if let Some(after) = rest.strip_prefix('n') {
            let (power, after) = match after.strip_prefix('^') {
                Some(p) => {
                    let digits = p.chars().take_while(char::is_ascii_digit).count();
                    (p[..digits].parse().map_err(|_| bad())?, &p[digits..])
                }
                None => (1, after),
            };
            acc = &acc * &Polynomial::shifted_n(0).pow(power);
            rest = after;
        } else {
            let digits = rest.chars().take_while(char::is_ascii_digit).count();
            if digits == 0 {
                return Err(bad());
            }
            acc = &acc * &Polynomial::constant(rest[..digits].parse().map_err(|_| bad())?);
            rest = &rest[digits..];
        }
    }
    Ok(acc)
}

pub fn parse_equation(id: &str, text: &str) -> Result<ReferenceEquation> {
    let (lhs, rhs) = text
        .split_once(" = ")
        .ok_or_else(|| parse_error(format!("no '=' in {text:?}")))?;
    let (pattern, _) = parse_term(lhs.trim())?;
    let mut terms = Vec::new();
    let mut w = Polynomial::zero();
    for part in rhs.split(" + ") {
        let part = part.trim();
        if part.starts_with("A_{") {
            let (l, shift) = parse_term(part)?;
            terms.push(Term { pattern: l, shift });
        } else {
            w += &parse_product(part)?;
        }
    }
    terms.sort();
    Ok(ReferenceEquation {
        id: id.into(),
        pattern,
        terms,
        w,
    })
}

/// Published equations whose id starts with `prefix` (e.g. `"MM.2."`).
pub fn reference_equations(prefix: &str) -> Result<Vec<ReferenceEquation>> {
    REFERENCE_EQUATIONS
        .lines()
        .filter(|l| l.starts_with(prefix))
        .map(|l| {
            let (id, eq) = l
                .split_once('\t')
                .ok_or_else(|| parse_error(format!("bad reference line {l:?}")))?;
            parse_equation(id, eq)
        })
        .collect()
}

/// Derived equations in the same shape as the reference.
pub fn derived_shapes(out: &DerivationOutput) -> Vec<ReferenceEquation> {
    out.equations
        .iter()
        .map(|e| {
            let mut terms = e.terms.clone();
            terms.sort();
            ReferenceEquation {
                id: e.id.to_string(),
                pattern: e.id.pattern,
                terms,
                w: e.w.clone(),
            }
        })
        .collect()
}

/// Multiset difference of (pattern, terms, w), ignoring numbering.
fn unmatched(ours: &[ReferenceEquation], theirs: &[ReferenceEquation]) -> (Vec<String>, Vec<String>) {
    type Shape = (usize, Vec<Term>, Polynomial);
    let mut counts: BTreeMap<Shape, (Vec<String>, Vec<String>)> = BTreeMap::new();
    for e in ours {
        counts
            .entry((e.pattern, e.terms.clone(), e.w.clone()))
            .or_default()
            .0
            .push(e.id.clone());
    }
    for e in theirs {
        counts
            .entry((e.pattern, e.terms.clone(), e.w.clone()))
            .or_default()
            .1
            .push(e.id.clone());
    }
    let mut extra = Vec::new();
    let mut missing = Vec::new();
    for (a, b) in counts.into_values() {
        if a.len() > b.len() {
            extra.extend(a[b.len()..].iter().cloned());
        } else {
            missing.extend(b[a.len()..].iter().cloned());
        }
    }
    (extra, missing)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed().as_secs_f64())
}

pub fn suite_p1() -> Result<Report> {
    let mut r = Report::new("p1");
    let (out, secs) = timed(|| derive(Game::Mastermind, 1));
    let out = out?;
    r.check(
        out.queue.len() == 1 && out.equations.len() == 1,
        format!("{} pattern, {} equation ({secs:.3}s)", out.queue.len(), out.equations.len()),
    );
    let reference = reference_equations("MM.1.")?;
    let (extra, missing) = unmatched(&derived_shapes(&out), &reference);
    r.check(
        extra.is_empty() && missing.is_empty(),
        "A_{1,0}(n) = A_{1,0}(n-1) + n",
    );
    let oracle = Oracle::new();
    let base = oracle_table(&out, 0..=out.max_shift(), &oracle)?;
    let (values, _) = eval_system(&out, 50, &base)?;
    let bad: Vec<u32> = (1..=50u32)
        .filter(|&n| values.get(0, n) != Some(i64::from(n * (n + 1) / 2)))
        .collect();
    r.check(bad.is_empty(), format!("A_{{1,0}}(n) = n(n+1)/2 for 1 <= n <= 50; mismatches {bad:?}"));
    Ok(r)
}

fn derivation_suite(name: &str, game: Game, queue: &[&str], equations: usize) -> Result<Report> {
    let mut r = Report::new(name);
    let (out, secs) = timed(|| derive(game, 2));
    let out = out?;
    r.check(
        out.queue.len() == queue.len() && out.equations.len() == equations,
        format!("{} patterns, {} equations ({secs:.3}s)", out.queue.len(), out.equations.len()),
    );
    for (i, text) in queue.iter().enumerate() {
        let expected = MasetPattern::parse(game, 2, text)?;
        let ok = out
            .queue
            .get(i)
            .is_some_and(|p| canonical_pattern(p) == canonical_pattern(&expected));
        r.check(ok, format!("M_{{2,{i}}} ≅ {text}"));
    }
    let reference = reference_equations(&format!("{}.2.", game.tag()))?;
    let (extra, missing) = unmatched(&derived_shapes(&out), &reference);
    r.check(
        extra.is_empty() && missing.is_empty(),
        format!(
            "equation multiset matches the {} published equations; extra {extra:?}, missing {missing:?}",
            reference.len()
        ),
    );
    let conserving = out
        .equations
        .iter()
        .filter(|e| crate::system::conserves_secrets(&out, e))
        .count();
    r.check(
        conserving == out.equations.len(),
        format!("{conserving}/{} equations conserve the secret count", out.equations.len()),
    );
    Ok(r)
}

pub fn suite_mm2() -> Result<Report> {
    derivation_suite("mm2", Game::Mastermind, &MM2_QUEUE, 47)
}

pub fn suite_ab2() -> Result<Report> {
    derivation_suite("ab2", Game::Ab, &AB2_QUEUE, 17)
}

/// Oracle values of the reference queue patterns against the value tables.
pub fn suite_tables() -> Result<Report> {
    let mut r = Report::new("tables");
    let oracle = Oracle::new();
    let start = Instant::now();
    for (game, queue, table) in [
        (Game::Mastermind, &MM2_QUEUE[..], &MM2_TABLE[..]),
        (Game::Ab, &AB2_QUEUE[..], &AB2_TABLE[..]),
    ] {
        for &(i, first, values) in table {
            let pattern = MasetPattern::parse(game, 2, queue[i])?;
            let got = (first..)
                .take(values.len())
                .map(|n| oracle_value(&oracle, &pattern, n).map(|v| v.unwrap_or(-1)))
                .collect::<Result<Vec<_>>>()?;
            r.check(
                got == values,
                format!("{} A_{{2,{i}}}(n), n = {first}.. : {got:?}", game.tag()),
            );
        }
    }
    r.note(format!("{:.3}s", start.elapsed().as_secs_f64()));
    Ok(r)
}

/// Evaluated system against the closed forms up to `n_max`.
pub fn suite_formulas(n_max: u32) -> Result<Report> {
    let mut r = Report::new("formulas");
    let oracle = Oracle::new();
    for game in [Game::Mastermind, Game::Ab] {
        let start = Instant::now();
        let out = derive(game, 2)?;
        let base = oracle_table(&out, 0..=out.max_shift(), &oracle)?;
        let (values, argmin) = eval_system(&out, n_max, &base)?;
        let (from, size): (u32, fn(i64) -> i64) = match game {
            Game::Mastermind => (3, |n| n * n),
            Game::Ab => (2, |n| n * (n - 1)),
        };
        let mut bad = Vec::new();
        for n in from..=n_max {
            let n64 = i64::from(n);
            let expected = match game {
                Game::Mastermind => closed_form_mm(n64)?,
                Game::Ab => closed_form_ab(n64)?,
            } * size(n64);
            if values.get(0, n).map(Ratio::from_integer) != Some(expected) {
                bad.push(n);
            }
        }
        r.check(
            bad.is_empty(),
            format!(
                "{} A_{{2,0}}(n) = closed form · |S| for {from} <= n <= {n_max} ({:.3}s); mismatches {bad:?}",
                game.tag(),
                start.elapsed().as_secs_f64()
            ),
        );
        // the minimum must already be reached without the additional color
        let needs_additional: Vec<(usize, u32)> = argmin
            .keys()
            .filter(|&&(i, n)| {
                out.equations_of(i)
                    .filter(|e| !e.question.uses_additional())
                    .filter_map(|e| e.eval_with(n, |l, m| values.get(l, m)))
                    .min()
                    != values.get(i, n)
            })
            .copied()
            .collect();
        r.check(
            needs_additional.is_empty(),
            format!(
                "{}: every value is attained without the additional color; exceptions {needs_additional:?}",
                game.tag()
            ),
        );
    }
    Ok(r)
}

/// Oracle values against the equations evaluated on oracle values.
pub fn suite_fixpoint(range: std::ops::RangeInclusive<u32>) -> Result<Report> {
    let mut r = Report::new("fixpoint");
    let oracle = Oracle::new();
    for game in [Game::Mastermind, Game::Ab] {
        let start = Instant::now();
        let out = derive(game, 2)?;
        let cells = verify_fixpoint(&out, range.clone(), &oracle)?;
        let failures: Vec<String> = cells
            .iter()
            .filter(|c| !c.holds())
            .map(|c| format!("(i={}, n={}, lhs={}, rhs={:?})", c.pattern, c.n, c.lhs, c.rhs))
            .collect();
        r.check(
            failures.is_empty(),
            format!(
                "{}: {} cells, n in {range:?} ({:.1}s); failures {failures:?}",
                game.tag(),
                cells.len(),
                start.elapsed().as_secs_f64()
            ),
        );
        for c in &cells {
            if let Some(k) = c.argmin {
                let e = &out.equations[k];
                r.note(format!("A_{{2,{}}}({}) = {} via {} {}", c.pattern, c.n, c.lhs, e.id, e.question));
            }
        }
        let root_best: Vec<String> = cells
            .iter()
            .filter(|c| c.pattern == 0)
            .filter_map(|c| c.argmin.map(|k| out.equations[k].question.to_string()))
            .collect();
        r.check(
            root_best.iter().all(|q| q == "(0,1)"),
            format!("{}: optimal first question {root_best:?}", game.tag()),
        );
        let degenerate: Vec<String> = cells
            .iter()
            .filter_map(|c| c.argmin)
            .map(|k| &out.equations[k])
            .filter(|e| e.terms.iter().any(|t| t.pattern == e.id.pattern && t.shift == 0))
            .map(|e| e.id.to_string())
            .collect();
        r.check(
            degenerate.is_empty(),
            format!("{}: self-referential equations never minimal {degenerate:?}", game.tag()),
        );
        let base = oracle_table(&out, 0..=out.max_shift(), &oracle)?;
        let (values, _) = eval_system(&out, *range.end(), &base)?;
        let disagree: Vec<(usize, u32)> = cells
            .iter()
            .filter(|c| values.get(c.pattern, c.n) != Some(c.lhs))
            .map(|c| (c.pattern, c.n))
            .collect();
        r.check(
            disagree.is_empty(),
            format!("{}: evaluated system equals oracle; differs at {disagree:?}", game.tag()),
        );
    }
    Ok(r)
}

/// Three-peg queue and equation counts. Takes hours.
pub fn suite_counts3(mut progress: impl FnMut(&str)) -> Result<Report> {
    let mut r = Report::new("counts3");
    for (game, patterns, equations) in [(Game::Mastermind, 13388, 9096599), (Game::Ab, 7496, 4188421)] {
        let start = Instant::now();
        let (q, e) = derive_counts(game, 3, |i, len, count| {
            if i % 100 == 0 {
                progress(&format!(
                    "{} p=3: pattern {i}/{len}, {count} equations, {:.0}s",
                    game.tag(),
                    start.elapsed().as_secs_f64()
                ));
            }
        })?;
        r.check(
            q == patterns && e == equations,
            format!(
                "{} p=3: {q} patterns, {e} equations (expected {patterns}, {equations}; {:.0}s)",
                game.tag(),
                start.elapsed().as_secs_f64()
            ),
        );
    }
    Ok(r)
}

pub fn run_suite(name: &str, slow: bool) -> Result<Report> {
    match name {
        "p1" => suite_p1(),
        "mm2" => suite_mm2(),
        "ab2" => suite_ab2(),
        "tables" => suite_tables(),
        "formulas" => suite_formulas(100),
        "fixpoint" => suite_fixpoint(3..=7),
        "counts3" if slow => suite_counts3(|line| eprintln!("{line}")),
        "counts3" => {
            let mut r = Report::new("counts3");
            r.note("skipped; pass --slow to run (takes hours)");
            Ok(r)
        }
        other => Err(Error::InvalidPattern(format!("unknown suite {other:?}"))),
    }
}
