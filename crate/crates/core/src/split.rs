//! Answers and partitioning by answer.

use std::fmt;

use crate::concrete::{ConcreteMaset, Secret};
use crate::error::{Error, Result};
use crate::pattern::{MasetPattern, Sym};
use crate::question::Question;

/// `b` black pegs (right color, right position) and `w` white pegs (right
/// color, wrong position).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnswerPair {
    pub black: usize,
    pub white: usize,
}

impl AnswerPair {
    pub fn new(black: usize, white: usize) -> Self {
        Self { black, white }
    }
}

impl fmt::Display for AnswerPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.black, self.white)
    }
}

/// `P = p(p+3)/2`, the number of feasible answers.
pub fn answer_count(pegs: usize) -> usize {
    pegs * (pegs + 3) / 2
}

/// Feasible answers in index order: ascending `b + w`, then ascending `b`,
/// without `(p-1, 1)`.
pub fn answers(pegs: usize) -> Vec<AnswerPair> {
    let mut out = Vec::with_capacity(answer_count(pegs));
    for sum in 0..=pegs {
        for black in 0..=sum {
            let white = sum - black;
            if pegs >= 1 && black == pegs - 1 && white == 1 {
                continue;
            }
            out.push(AnswerPair::new(black, white));
        }
    }
    out
}

pub fn answer_index(answer: AnswerPair, pegs: usize) -> Result<usize> {
    let impossible = Error::ImpossibleAnswer {
        black: answer.black,
        white: answer.white,
        pegs,
    };
    if answer.black + answer.white > pegs {
        return Err(impossible);
    }
    answers(pegs)
        .iter()
        .position(|&a| a == answer)
        .ok_or(impossible)
}

pub fn index_to_answer(index: usize, pegs: usize) -> Result<AnswerPair> {
    answers(pegs)
        .get(index)
        .copied()
        .ok_or(Error::AnswerIndexOutOfRange { index, pegs })
}

/// Same as [`answer_index`] without validation; the pair must be feasible.
fn index_of(black: usize, white: usize, pegs: usize) -> usize {
    if black == pegs {
        return answer_count(pegs) - 1;
    }
    let sum = black + white;
    // groups below b+w are complete; (p-1,1) only precedes (p,0)
    sum * (sum + 1) / 2 + black
}

/// Peg score of `row` (explicit colors only; `Star` and `Additional` match
/// nothing) against `question`.
fn score(row: impl Iterator<Item = Option<u8>> + Clone, question: &[Sym]) -> (usize, usize) {
    let mut black = 0;
    let mut used = 0u32;
    let mut common = 0;
    for (i, s) in row.clone().enumerate() {
        if s.is_some() && s == question[i].color() {
            black += 1;
        }
    }
    for q in question.iter().filter_map(|q| q.color()) {
        for (i, s) in row.clone().enumerate() {
            if used & (1 << i) == 0 && s == Some(q) {
                used |= 1 << i;
                common += 1;
                break;
            }
        }
    }
    (black, common - black)
}

pub fn secret_answer(secret: &[u8], question: &[Sym]) -> AnswerPair {
    let (b, w) = score(secret.iter().map(|&c| Some(c)), question);
    AnswerPair::new(b, w)
}

/// Answer shared by every secret of the clause. Question colors must lie
/// below the deficit so that no star can take them.
pub fn clause_answer(clause: &[Sym], question: &Question, deficit: u32) -> Result<AnswerPair> {
    if clause.iter().any(|s| s.is_star()) {
        if let Some(c) = question
            .pegs()
            .iter()
            .filter_map(|s| s.color())
            .find(|&c| u32::from(c) >= deficit)
        {
            return Err(Error::QuestionColorAboveDeficit { color: c, deficit });
        }
    }
    let (b, w) = score(clause.iter().map(|s| s.color()), question.pegs());
    Ok(AnswerPair::new(b, w))
}

/// Extension target for a question: one past its largest explicit color.
pub fn extension_target(question: &Question) -> u32 {
    question
        .pegs()
        .iter()
        .filter_map(|s| s.color())
        .map(|c| u32::from(c) + 1)
        .max()
        .unwrap_or(0)
}

/// Splits a normalized pattern by the answer to `question`, extending it
/// first when the question names colors beyond the pattern's own. Returns
/// `P` buckets in answer-index order; all share the extended deficit.
pub fn split_pattern(pattern: &MasetPattern, question: &Question) -> Result<Vec<MasetPattern>> {
    let pegs = pattern.pegs();
    let target = extension_target(question);
    let extended;
    let source = if target > pattern.explicit_count() {
        extended = pattern.extend(target)?;
        &extended
    } else {
        pattern
    };
    let mut buckets =
        vec![MasetPattern::empty(pattern.game(), pegs, source.deficit()); answer_count(pegs)];
    for clause in source.clauses() {
        let a = clause_answer(clause, question, source.deficit())?;
        buckets[index_of(a.black, a.white, pegs)].push(clause.clone());
    }
    Ok(buckets)
}

/// Bucket index of every secret.
pub(crate) fn answer_indices(secrets: &[Secret], question: &[Sym], pegs: usize) -> Vec<u8> {
    secrets
        .iter()
        .map(|s| {
            let (b, w) = score(s.iter().map(|&c| Some(c)), question);
            index_of(b, w, pegs) as u8
        })
        .collect()
}

pub fn split_concrete(maset: &ConcreteMaset, question: &Question) -> Vec<Vec<Secret>> {
    let mut buckets = vec![Vec::new(); answer_count(maset.pegs())];
    for (s, k) in maset
        .secrets()
        .iter()
        .zip(answer_indices(maset.secrets(), question.pegs(), maset.pegs()))
    {
        buckets[usize::from(k)].push(s.clone());
    }
    buckets
}
