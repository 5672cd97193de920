//! The pattern queue, one equation per (pattern, question), and numeric
//! evaluation of the resulting system.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use dashmap::DashMap;
use rayon::prelude::*;

use crate::canon::{canonical_pattern, CanonicalKey};
use crate::error::{Error, Result};
use crate::pattern::{Game, MasetPattern};
use crate::poly::Polynomial;
use crate::question::{gen_questions, Question};
use crate::solver::{Oracle, StarFreeSolver};
use crate::split::{answers, extension_target, split_pattern, AnswerPair};

/// `A_{p,l}(n - r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub pattern: usize,
    pub shift: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChildOutcome {
    Empty,
    /// Star-free child whose path length is folded into `w`.
    StarFree { cost: u64 },
    Queue { index: usize, shift: u32 },
}

/// One answer bucket of an equation, with the stages shown in listings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Child {
    pub answer: AnswerPair,
    pub raw: MasetPattern,
    /// Present only when normalization renamed colors.
    pub normalized: Option<MasetPattern>,
    pub outcome: ChildOutcome,
}

impl Child {
    pub fn normal_form(&self) -> &MasetPattern {
        self.normalized.as_ref().unwrap_or(&self.raw)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EquationId {
    pub game: Game,
    pub pegs: usize,
    pub pattern: usize,
    /// 1-based, in question generation order.
    pub question: usize,
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}.{}", self.game.tag(), self.pegs, self.pattern, self.question)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub id: EquationId,
    pub question: Question,
    pub children: Vec<Child>,
    pub terms: Vec<Term>,
    pub w: Polynomial,
    /// Smallest `n` at which every step of the split is defined.
    pub valid_from: u32,
}

impl Equation {
    pub fn pattern(&self) -> usize {
        self.id.pattern
    }

    /// Right-hand side at `n`, reading `A_l(m)` through `value`; `None` when
    /// the equation is not valid at `n` or a value is missing.
    pub fn eval_with(&self, n: u32, mut value: impl FnMut(usize, u32) -> Option<i64>) -> Option<i64> {
        if n < self.valid_from {
            return None;
        }
        let mut total = self.w.eval(i64::from(n));
        for t in &self.terms {
            total = total.checked_add(value(t.pattern, n.checked_sub(t.shift)?)?)?;
        }
        Some(total)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationOutput {
    pub game: Game,
    pub pegs: usize,
    /// Tight, normalized, pairwise non-isomorphic; index 0 is all stars.
    pub queue: Vec<MasetPattern>,
    pub equations: Vec<Equation>,
}

impl DerivationOutput {
    pub fn equations_of(&self, pattern: usize) -> impl Iterator<Item = &Equation> {
        self.equations.iter().filter(move |e| e.id.pattern == pattern)
    }

    pub fn max_shift(&self) -> u32 {
        self.equations
            .iter()
            .flat_map(|e| e.terms.iter().map(|t| t.shift))
            .max()
            .unwrap_or(0)
    }
}

/// Work for one child that needs no queue access.
enum Pending {
    Empty,
    StarFree(u64),
    Star {
        tight: MasetPattern,
        shift: u32,
        key: CanonicalKey,
    },
}

struct Prepared {
    question: Question,
    children: Vec<(AnswerPair, MasetPattern, Option<MasetPattern>, Pending)>,
    w: Polynomial,
    valid_from: u32,
}

fn prepare(pattern: &MasetPattern, question: Question, star_free: &StarFreeSolver) -> Result<Prepared> {
    let buckets = split_pattern(pattern, &question)?;
    let last = buckets.len() - 1;
    let mut w = pattern.count_secrets();
    let mut children = Vec::with_capacity(buckets.len());
    for ((k, raw), answer) in buckets.into_iter().enumerate().zip(answers(pattern.pegs())) {
        let normal = raw.normalize();
        let pending = if raw.is_empty() {
            Pending::Empty
        } else if !raw.has_star() {
            let cost = star_free.solve(&normal, k == last)?;
            w += &Polynomial::constant(cost as i64);
            Pending::StarFree(cost)
        } else {
            let (tight, shift) = normal.tighten()?;
            let key = canonical_pattern(&tight);
            Pending::Star { tight, shift, key }
        };
        let normalized = (normal != raw).then_some(normal);
        children.push((answer, raw, normalized, pending));
    }
    Ok(Prepared {
        valid_from: pattern.deficit().max(extension_target(&question)),
        question,
        children,
        w,
    })
}

/// Queue plus the canonical-key index that deduplicates it.
struct Closure {
    queue: Vec<MasetPattern>,
    index: HashMap<CanonicalKey, usize>,
}

impl Closure {
    fn new(root: MasetPattern) -> Self {
        let mut index = HashMap::new();
        index.insert(canonical_pattern(&root), 0);
        Self {
            queue: vec![root],
            index,
        }
    }

    fn locate(&mut self, tight: MasetPattern, key: CanonicalKey) -> usize {
        let next = self.queue.len();
        let slot = *self.index.entry(key).or_insert(next);
        if slot == next {
            self.queue.push(tight);
        }
        slot
    }
}

fn prepare_all(
    pattern: &MasetPattern,
    star_free: &StarFreeSolver,
) -> Result<Vec<Prepared>> {
    gen_questions(pattern)
        .into_par_iter()
        .map(|q| prepare(pattern, q, star_free))
        .collect()
}

/// Resolves one prepared question against the queue, enqueueing unseen
/// children. Must run in question order to keep the queue deterministic.
fn build_equation(
    game: Game,
    pattern_index: usize,
    j: usize,
    prepared: Prepared,
    closure: &mut Closure,
) -> Equation {
    let pegs = closure.queue[pattern_index].pegs();
    let mut terms = Vec::new();
    let children = prepared
        .children
        .into_iter()
        .map(|(answer, raw, normalized, pending)| {
            let outcome = match pending {
                Pending::Empty => ChildOutcome::Empty,
                Pending::StarFree(cost) => ChildOutcome::StarFree { cost },
                Pending::Star { tight, shift, key } => {
                    let index = closure.locate(tight, key);
                    terms.push(Term {
                        pattern: index,
                        shift,
                    });
                    ChildOutcome::Queue { index, shift }
                }
            };
            Child {
                answer,
                raw,
                normalized,
                outcome,
            }
        })
        .collect();
    Equation {
        id: EquationId {
            game,
            pegs,
            pattern: pattern_index,
            question: j + 1,
        },
        question: prepared.question,
        children,
        terms,
        w: prepared.w,
        valid_from: prepared.valid_from,
    }
}

/// Breadth-first closure from the all-stars pattern, one equation per
/// pattern and question.
pub fn derive(game: Game, pegs: usize) -> Result<DerivationOutput> {
    let mut equations = Vec::new();
    let queue = derive_with(game, pegs, |_, e| equations.push(e))?;
    Ok(DerivationOutput {
        game,
        pegs,
        queue,
        equations,
    })
}

/// Queue size and equation count without keeping the equations.
pub fn derive_counts(game: Game, pegs: usize, mut progress: impl FnMut(usize, usize, usize)) -> Result<(usize, usize)> {
    let mut count = 0usize;
    let queue = derive_with(game, pegs, |queue_len, e| {
        count += 1;
        if e.id.question == 1 {
            progress(e.id.pattern, queue_len, count);
        }
    })?;
    Ok((queue.len(), count))
}

/// Drives the closure, handing each equation to `sink` together with the
/// current queue length.
pub fn derive_with(
    game: Game,
    pegs: usize,
    mut sink: impl FnMut(usize, Equation),
) -> Result<Vec<MasetPattern>> {
    if pegs == 0 {
        return Err(Error::InvalidPattern("a game needs at least one peg".into()));
    }
    let star_free = StarFreeSolver::new();
    let mut closure = Closure::new(MasetPattern::full(game, pegs));
    let mut i = 0;
    while i < closure.queue.len() {
        let pattern = closure.queue[i].clone();
        for (j, prepared) in prepare_all(&pattern, &star_free)?.into_iter().enumerate() {
            let eq = build_equation(game, i, j, prepared, &mut closure);
            sink(closure.queue.len(), eq);
        }
        i += 1;
    }
    Ok(closure.queue)
}

/// Values `A_i(n)` indexed by pattern then `n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValueTable {
    values: BTreeMap<(usize, u32), i64>,
}

impl ValueTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, pattern: usize, n: u32) -> Option<i64> {
        self.values.get(&(pattern, n)).copied()
    }

    pub fn insert(&mut self, pattern: usize, n: u32, value: i64) {
        self.values.insert((pattern, n), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, u32), i64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }
}

/// Oracle value of a queue pattern at `n` colors, with the additional color
/// allowed. `None` where the pattern is undefined (`n` below its deficit).
pub fn oracle_value(oracle: &Oracle, pattern: &MasetPattern, n: u32) -> Result<Option<i64>> {
    if n < pattern.deficit() {
        return Ok(None);
    }
    if pattern.game() == Game::Ab && (n as usize) < pattern.pegs() {
        // no secret fits
        return Ok(Some(0));
    }
    let maset = pattern.instantiate(n, true)?;
    Ok(Some(oracle.solve(&maset)? as i64))
}

/// Oracle values for every queue pattern and `n` in `range`.
pub fn oracle_table(
    out: &DerivationOutput,
    range: std::ops::RangeInclusive<u32>,
    oracle: &Oracle,
) -> Result<ValueTable> {
    let cells: Vec<(usize, u32)> = (0..out.queue.len())
        .flat_map(|i| range.clone().map(move |n| (i, n)))
        .collect();
    let values: Vec<Option<i64>> = cells
        .par_iter()
        .map(|&(i, n)| oracle_value(oracle, &out.queue[i], n))
        .collect::<Result<_>>()?;
    let mut table = ValueTable::new();
    for ((i, n), v) in cells.into_iter().zip(values) {
        if let Some(v) = v {
            table.insert(i, n, v);
        }
    }
    Ok(table)
}

/// Minimizing equation (index into `out.equations`) per `(pattern, n)`.
pub type Argmin = BTreeMap<(usize, u32), usize>;

/// Least fixpoint of `A_i(n) = min_j RHS_j(n)` for `n` up to `n_max`.
///
/// `base` supplies every value for `n ≤ max_shift()`; above that, each `n` is
/// relaxed from `+∞` using the equations valid at `n`. Also returns, per
/// cell, the index (into `out.equations`) of a minimizing equation.
pub fn eval_system(
    out: &DerivationOutput,
    n_max: u32,
    base: &ValueTable,
) -> Result<(ValueTable, Argmin)> {
    let size = out.queue.len();
    let from = out.max_shift() + 1;
    let mut table = ValueTable::new();
    for ((i, n), v) in base.iter() {
        if n < from && i < size {
            table.insert(i, n, v);
        }
    }
    let mut argmin = BTreeMap::new();
    let by_pattern: Vec<Vec<usize>> = (0..size)
        .map(|i| {
            out.equations
                .iter()
                .enumerate()
                .filter(|(_, e)| e.id.pattern == i)
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    for n in from..=n_max {
        let mut current: Vec<Option<(i64, usize)>> = vec![None; size];
        let mut rounds = 0;
        loop {
            let mut changed = false;
            for i in 0..size {
                for &k in &by_pattern[i] {
                    let rhs = out.equations[k].eval_with(n, |l, m| {
                        if m == n {
                            current[l].map(|(v, _)| v)
                        } else {
                            table.get(l, m)
                        }
                    });
                    if let Some(v) = rhs {
                        if current[i].is_none_or(|(best, _)| v < best) {
                            current[i] = Some((v, k));
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
            rounds += 1;
            if rounds > size + 1 {
                return Err(Error::NonConvergence { n });
            }
        }
        for (i, cell) in current.into_iter().enumerate() {
            let (v, k) = cell.ok_or(Error::Unresolved { pattern: i, n })?;
            table.insert(i, n, v);
            argmin.insert((i, n), k);
        }
    }
    Ok((table, argmin))
}

/// Outcome of checking one cell against the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointCell {
    pub pattern: usize,
    pub n: u32,
    pub lhs: i64,
    pub rhs: Option<i64>,
    /// Index into `out.equations` of the first minimizing equation.
    pub argmin: Option<usize>,
}

impl FixpointCell {
    pub fn holds(&self) -> bool {
        self.rhs == Some(self.lhs)
    }
}

/// Compares, for every queue pattern and `n`, the oracle value with the
/// smallest right-hand side evaluated on oracle values.
pub fn verify_fixpoint(
    out: &DerivationOutput,
    range: std::ops::RangeInclusive<u32>,
    oracle: &Oracle,
) -> Result<Vec<FixpointCell>> {
    let memo: DashMap<(usize, u32), Option<i64>> = DashMap::new();
    let value = |l: usize, m: u32| -> Result<Option<i64>> {
        if let Some(v) = memo.get(&(l, m)) {
            return Ok(*v);
        }
        let v = oracle_value(oracle, &out.queue[l], m)?;
        memo.insert((l, m), v);
        Ok(v)
    };
    let cells: Vec<(usize, u32)> = (0..out.queue.len())
        .flat_map(|i| range.clone().map(move |n| (i, n)))
        .collect();
    cells
        .into_par_iter()
        .filter_map(|(i, n)| {
            let lhs = match value(i, n) {
                Ok(Some(v)) => v,
                Ok(None) => return None,
                Err(e) => return Some(Err(e)),
            };
            let mut best: Option<(i64, usize)> = None;
            for (k, eq) in out.equations.iter().enumerate() {
                if eq.id.pattern != i {
                    continue;
                }
                let mut failure = None;
                let rhs = eq.eval_with(n, |l, m| match value(l, m) {
                    Ok(v) => v,
                    Err(e) => {
                        failure = Some(e);
                        None
                    }
                });
                if let Some(e) = failure {
                    return Some(Err(e));
                }
                if let Some(v) = rhs {
                    if best.is_none_or(|(b, _)| v < b) {
                        best = Some((v, k));
                    }
                }
            }
            Some(Ok(FixpointCell {
                pattern: i,
                n,
                lhs,
                rhs: best.map(|(v, _)| v),
                argmin: best.map(|(_, k)| k),
            }))
        })
        .collect()
}

/// Checks that the split loses no secrets: the term counts plus the
/// star-free children add up to the pattern's own count.
pub fn conserves_secrets(out: &DerivationOutput, eq: &Equation) -> bool {
    let mut total = Polynomial::zero();
    for child in &eq.children {
        total += &child.raw.count_secrets();
    }
    total == out.queue[eq.id.pattern].count_secrets()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shown(out: &DerivationOutput) -> Vec<String> {
        out.queue.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn one_peg() {
        let out = derive(Game::Mastermind, 1).unwrap();
        assert_eq!(shown(&out), ["(*_n)"]);
        assert_eq!(out.equations.len(), 1);
        let eq = &out.equations[0];
        assert_eq!(eq.terms, [Term { pattern: 0, shift: 1 }]);
        assert_eq!(eq.w, Polynomial::from_coeffs(vec![0, 1]));
    }

    #[test]
    fn mm_queue() {
        let out = derive(Game::Mastermind, 2).unwrap();
        assert_eq!(
            shown(&out),
            [
                "(*_n,*_n)",
                "(0,*_{n-1}) | (*_{n-1},0)",
                "(1,*_{n-2}) | (*_{n-2},0)",
                "(0,0) | (0,*_{n-2}) | (1,1) | (*_{n-2},1)",
                "(*_{n-1},0)",
                "(0,0) | (0,*_{n-1})",
            ]
        );
        assert_eq!(out.equations.len(), 47);
        let per: Vec<usize> = (0..6).map(|i| out.equations_of(i).count()).collect();
        assert_eq!(per, [3, 6, 10, 10, 9, 9]);
        assert!(out.equations.iter().all(|e| conserves_secrets(&out, e)));
    }

    #[test]
    fn ab_queue() {
        let out = derive(Game::Ab, 2).unwrap();
        assert_eq!(
            shown(&out),
            ["(*_n,*_n)", "(1,*_{n-2}) | (*_{n-2},0)", "(*_{n-1},0)"]
        );
        assert_eq!(out.equations.len(), 17);
        assert!(out.equations.iter().all(|e| conserves_secrets(&out, e)));
    }

    #[test]
    fn spot_equations() {
        let out = derive(Game::Mastermind, 2).unwrap();
        let find = |i: usize, q: &str| {
            out.equations_of(i)
                .find(|e| e.question.to_string() == q)
                .unwrap()
                .clone()
        };
        let e = find(0, "(0,1)");
        let mut terms = e.terms.clone();
        terms.sort();
        assert_eq!(
            terms,
            [
                Term { pattern: 0, shift: 2 },
                Term { pattern: 2, shift: 0 },
                Term { pattern: 3, shift: 0 }
            ]
        );
        assert_eq!(e.w.to_string(), "n^2 + 1");
        let e = find(1, "(0,1)");
        assert_eq!(e.terms, [Term { pattern: 4, shift: 1 }; 2]);
        assert_eq!(e.w.to_string(), "2n - 1");
    }

    #[test]
    fn eval_one_peg() {
        let out = derive(Game::Mastermind, 1).unwrap();
        let oracle = Oracle::new();
        let base = oracle_table(&out, 0..=out.max_shift(), &oracle).unwrap();
        let (values, _) = eval_system(&out, 50, &base).unwrap();
        for n in 1..=50 {
            assert_eq!(values.get(0, n), Some(i64::from(n * (n + 1) / 2)));
        }
    }

    #[test]
    fn eval_tables() {
        let oracle = Oracle::new();
        let out = derive(Game::Mastermind, 2).unwrap();
        let base = oracle_table(&out, 0..=out.max_shift(), &oracle).unwrap();
        let (values, _) = eval_system(&out, 5, &base).unwrap();
        let row: Vec<i64> = (0..6).map(|i| values.get(i, 5).unwrap()).collect();
        assert_eq!(row, [81, 21, 13, 21, 9, 13]);

        let out = derive(Game::Ab, 2).unwrap();
        let base = oracle_table(&out, 0..=out.max_shift(), &oracle).unwrap();
        let (values, _) = eval_system(&out, 4, &base).unwrap();
        let row: Vec<i64> = (0..3).map(|i| values.get(i, 4).unwrap()).collect();
        assert_eq!(row, [30, 7, 6]);
    }

    #[test]
    fn star_free_children_agree_with_oracle() {
        let oracle = Oracle::new();
        for game in [Game::Mastermind, Game::Ab] {
            let out = derive(game, 2).unwrap();
            for eq in &out.equations {
                for (k, child) in eq.children.iter().enumerate() {
                    let ChildOutcome::StarFree { cost } = child.outcome else {
                        continue;
                    };
                    if k == eq.children.len() - 1 {
                        continue;
                    }
                    let normal = child.normal_form();
                    let colors = normal.explicit_count() + 2;
                    let concrete = normal.instantiate(colors.max(normal.deficit()), true).unwrap();
                    assert_eq!(oracle.solve(&concrete).unwrap(), cost, "{} {normal}", eq.id);
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(derive(Game::Mastermind, 2).unwrap(), derive(Game::Mastermind, 2).unwrap());
    }
}
