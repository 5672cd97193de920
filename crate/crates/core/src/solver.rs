//! Exact minimal external path lengths.
//!
//! Two solvers over the same pruned search: one for star-free patterns,
//! asking symbolic questions with fresh colors, and a brute-force oracle for
//! explicit secret sets that asks every question the color count allows.

use std::collections::HashSet;

use dashmap::DashMap;
use num_rational::Ratio;
use smallvec::SmallVec;

use crate::canon::{canonical_table, secret_rows};
use crate::concrete::{ConcreteMaset, Secret};
use crate::error::{Error, Result};
use crate::pattern::{Game, MasetPattern, Sym};
use crate::question::{candidate_questions, concrete_alphabet, leaves_whole, tuples};
use crate::split::{answer_count, answer_indices};

/// Exact solver for masets without stars. A star-free pattern is a plain
/// set of secrets in which any number of unused colors may still be asked.
/// Memoized per isomorphism class; the memo may be shared between threads.
#[derive(Default)]
pub struct StarFreeSolver {
    memo: DashMap<Vec<u8>, u64>,
}

impl StarFreeSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// `just_guessed` marks the child of answer `(p,0)`: its only secret was
    /// the question itself and costs nothing further.
    pub fn solve(&self, pattern: &MasetPattern, just_guessed: bool) -> Result<u64> {
        if pattern.has_star() {
            return Err(Error::InvalidPattern(format!("{pattern} contains a star")));
        }
        if just_guessed || pattern.is_empty() {
            return Ok(0);
        }
        let rows: Vec<Secret> = pattern
            .clauses()
            .iter()
            .map(|c| c.iter().filter_map(|s| s.color()).collect())
            .collect();
        self.rows(pattern.game(), pattern.pegs(), compact(rows))
    }

    /// `rows` use exactly the colors `0..u`.
    fn rows(&self, game: Game, pegs: usize, rows: Vec<Secret>) -> Result<u64> {
        match rows.len() {
            0 => return Ok(0),
            1 => return Ok(1),
            2 => return Ok(3),
            _ => {}
        }
        let table: Vec<SmallVec<[Sym; 4]>> = rows
            .iter()
            .map(|r| r.iter().map(|&c| Sym::Color(c)).collect())
            .collect();
        let refs: Vec<&[Sym]> = table.iter().map(|r| &r[..]).collect();
        let mut key = vec![game.tag().as_bytes()[0], pegs as u8];
        key.extend(canonical_table(&refs, None, pegs));
        if let Some(l) = self.memo.get(&key) {
            return Ok(*l);
        }
        let explicit = rows.iter().flatten().map(|&c| u32::from(c) + 1).max().unwrap_or(0);
        let candidates = candidate_questions(game, pegs, explicit);
        let l = best_split(&rows, pegs, candidates.iter().map(|q| q.pegs()), |part| {
            self.rows(game, pegs, compact(part))
        })?;
        self.memo.insert(key, l);
        Ok(l)
    }
}

/// Renames colors onto `0..u`, keeping their order.
fn compact(mut rows: Vec<Secret>) -> Vec<Secret> {
    let mut palette: Vec<u8> = rows.iter().flatten().copied().collect();
    palette.sort_unstable();
    palette.dedup();
    for r in &mut rows {
        for c in r.iter_mut() {
            *c = palette.binary_search(c).expect("color in palette") as u8;
        }
    }
    rows
}

/// `|S| + Σ L(child)` minimized over the questions, children of `(p,0)`
/// excluded. Questions inducing the same partition are tried once, and in
/// order of the bound `L(c) ≥ 2c − 1` so that most can be cut off.
fn best_split<'q>(
    secrets: &[Secret],
    pegs: usize,
    questions: impl Iterator<Item = &'q [Sym]>,
    mut solve: impl FnMut(Vec<Secret>) -> Result<u64>,
) -> Result<u64> {
    let buckets = answer_count(pegs);
    let last = buckets - 1;
    let size = secrets.len() as u64;
    let mut seen = HashSet::new();
    let mut options: Vec<(u64, Vec<u8>)> = Vec::new();
    for q in questions {
        let idx = answer_indices(secrets, q, pegs);
        if leaves_whole(&idx, pegs) || !seen.insert(idx.clone()) {
            continue;
        }
        let mut sizes = vec![0u64; buckets];
        for &k in &idx {
            sizes[usize::from(k)] += 1;
        }
        let bound = size
            + sizes
                .iter()
                .enumerate()
                .filter(|&(k, &c)| k != last && c > 0)
                .map(|(_, &c)| 2 * c - 1)
                .sum::<u64>();
        options.push((bound, idx));
    }
    if options.is_empty() {
        return Err(Error::NoSplittingQuestion {
            size: secrets.len(),
        });
    }
    options.sort_by_key(|(bound, _)| *bound);

    let mut best = u64::MAX;
    for (bound, idx) in options {
        if bound >= best {
            break;
        }
        let mut parts: Vec<Vec<Secret>> = vec![Vec::new(); buckets];
        for (s, &k) in secrets.iter().zip(&idx) {
            parts[usize::from(k)].push(s.clone());
        }
        let mut total = size;
        for (k, part) in parts.into_iter().enumerate() {
            if k == last || part.is_empty() {
                continue;
            }
            total += solve(part)?;
            if total >= best {
                break;
            }
        }
        best = best.min(total);
    }
    Ok(best)
}

/// Convenience wrapper with a private memo.
pub fn solve_star_free(pattern: &MasetPattern, just_guessed: bool) -> Result<u64> {
    StarFreeSolver::new().solve(pattern, just_guessed)
}

/// Brute-force solver for explicit masets.
///
/// States are keyed by the canonical secret table, the number of unused
/// colors (capped at `p`, since a question holds at most `p` of them) and the
/// additional-color flag; nothing else affects the value.
#[derive(Default)]
pub struct Oracle {
    memo: DashMap<Vec<u8>, u64>,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn solve(&self, maset: &ConcreteMaset) -> Result<u64> {
        match maset.len() {
            0 => return Ok(0),
            1 => return Ok(1),
            // asking one of the two settles both
            2 => return Ok(3),
            _ => {}
        }
        let key = self.key(maset);
        if let Some(l) = self.memo.get(&key) {
            return Ok(*l);
        }
        let l = self.search(maset)?;
        self.memo.insert(key, l);
        Ok(l)
    }

    fn key(&self, maset: &ConcreteMaset) -> Vec<u8> {
        let rows = secret_rows(maset);
        let refs: Vec<&[Sym]> = rows.iter().map(|r| &r[..]).collect();
        let dead = maset.dead_colors().len().min(maset.pegs());
        let mut key = vec![maset.game().tag().as_bytes()[0], maset.pegs() as u8];
        key.push(dead as u8);
        key.push(maset.additional() as u8);
        key.extend(canonical_table(&refs, None, maset.pegs()));
        key
    }

    fn search(&self, maset: &ConcreteMaset) -> Result<u64> {
        let questions = tuples(maset.game(), maset.pegs(), &concrete_alphabet(maset));
        best_split(
            maset.secrets(),
            maset.pegs(),
            questions.iter().map(|q| q.pegs()),
            |part| self.solve(&maset.with_secrets(part)),
        )
    }
}

/// Convenience wrapper with a private memo.
pub fn solve_concrete(maset: &ConcreteMaset) -> Result<u64> {
    Oracle::new().solve(maset)
}

/// Expected number of questions, `L / |S|`.
pub fn expected_questions(maset: &ConcreteMaset) -> Result<Ratio<i64>> {
    if maset.is_empty() {
        return Err(Error::InvalidMaset("expected value of an empty maset".into()));
    }
    let l = solve_concrete(maset)?;
    Ok(Ratio::new(l as i64, maset.len() as i64))
}

/// Expected questions for Mastermind with two pegs, valid for `n ≥ 3`.
pub fn closed_form_mm(n: i64) -> Result<Ratio<i64>> {
    if n < 3 {
        return Err(Error::ClosedFormDomain { n, min: 3 });
    }
    let num = if n % 2 == 0 {
        8 * n.pow(3) + 51 * n * n - 74 * n + 48
    } else {
        8 * n.pow(3) + 51 * n * n - 80 * n + 69
    };
    Ok(Ratio::new(num, 24 * n * n))
}

/// Expected questions for AB with two pegs, valid for `n ≥ 2`.
pub fn closed_form_ab(n: i64) -> Result<Ratio<i64>> {
    if n < 2 {
        return Err(Error::ClosedFormDomain { n, min: 2 });
    }
    let num = if n % 2 == 0 {
        4 * n.pow(3) + 21 * n * n - 76 * n + 72
    } else {
        4 * n.pow(3) + 21 * n * n - 82 * n + 105
    };
    Ok(Ratio::new(num, 12 * n * (n - 1)))
}
