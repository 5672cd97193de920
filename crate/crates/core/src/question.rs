//! Questions and generation of pairwise non-isomorphic questions.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::canon::{canonical_concrete_with_question, canonical_with_question, CanonicalKey};
use crate::concrete::ConcreteMaset;
use crate::error::{Error, Result};
use crate::pattern::{Game, MasetPattern, Pegs, Sym};
use crate::split::{answer_count, answer_indices};

/// `p` pegs, each an explicit color or the additional color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Question(Pegs);

impl Question {
    pub fn new(pegs: impl IntoIterator<Item = Sym>) -> Result<Self> {
        let pegs: Pegs = pegs.into_iter().collect();
        if pegs.is_empty() {
            return Err(Error::InvalidQuestion("no pegs".into()));
        }
        if pegs.contains(&Sym::Star) {
            return Err(Error::InvalidQuestion("a star cannot be asked".into()));
        }
        if pegs.iter().all(|&s| s == Sym::Additional) {
            return Err(Error::InvalidQuestion(
                "a question made only of the additional color distinguishes nothing".into(),
            ));
        }
        Ok(Self(pegs))
    }

    /// Checks the variant rule: AB questions never repeat an explicit color.
    /// The additional color is not a secret color and may repeat; the
    /// published three-peg counts are only reached with such questions.
    pub fn check_game(&self, game: Game) -> Result<()> {
        if !game.allows_repeats() && repeats_color(&self.0) {
            return Err(Error::InvalidQuestion(format!("{self} repeats a color")));
        }
        Ok(())
    }

    pub fn pegs(&self) -> &[Sym] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn uses_additional(&self) -> bool {
        self.0.contains(&Sym::Additional)
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Question {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidQuestion(format!("bad question {s:?}")))?;
        let pegs = body
            .split(',')
            .map(|t| t.parse::<Sym>().map_err(|e| Error::InvalidQuestion(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Question::new(pegs)
    }
}

fn repeats_color(pegs: &[Sym]) -> bool {
    pegs.iter()
        .enumerate()
        .any(|(i, s)| s.color().is_some() && pegs[..i].contains(s))
}

/// Every question over the pattern's `u` explicit colors, up to `p` fresh
/// colors (first used in ascending order) and the additional color, in
/// lexicographic order.
pub(crate) fn candidate_questions(game: Game, pegs: usize, explicit: u32) -> Vec<Question> {
    fn walk(
        game: Game,
        pegs: usize,
        limit: u32,
        next_fresh: u32,
        prefix: &mut Pegs,
        out: &mut Vec<Question>,
    ) {
        if prefix.len() == pegs {
            if let Ok(q) = Question::new(prefix.iter().copied()) {
                out.push(q);
            }
            return;
        }
        let top = if next_fresh < limit { next_fresh + 1 } else { next_fresh };
        let options = (0..top).map(|c| Sym::Color(c as u8)).chain([Sym::Additional]);
        for sym in options {
            if !game.allows_repeats() && sym.color().is_some() && prefix.contains(&sym) {
                continue;
            }
            let fresh = match sym {
                Sym::Color(c) if u32::from(c) == next_fresh => next_fresh + 1,
                _ => next_fresh,
            };
            prefix.push(sym);
            walk(game, pegs, limit, fresh, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(
        game,
        pegs,
        explicit + pegs as u32,
        explicit,
        &mut Pegs::new(),
        &mut out,
    );
    out
}

fn first_of_each_class(candidates: Vec<Question>, keys: Vec<CanonicalKey>) -> Vec<Question> {
    let mut seen = HashSet::with_capacity(keys.len());
    candidates
        .into_iter()
        .zip(keys)
        .filter_map(|(q, k)| seen.insert(k).then_some(q))
        .collect()
}

/// One question per isomorphism class with respect to a normalized pattern,
/// each class represented by its lexicographically first member, in
/// ascending order.
pub fn gen_questions(pattern: &MasetPattern) -> Vec<Question> {
    let candidates = candidate_questions(pattern.game(), pattern.pegs(), pattern.explicit_count());
    let keys: Vec<CanonicalKey> = if candidates.len() > 32 {
        candidates
            .par_iter()
            .map(|q| canonical_with_question(pattern, q))
            .collect()
    } else {
        candidates
            .iter()
            .map(|q| canonical_with_question(pattern, q))
            .collect()
    };
    first_of_each_class(candidates, keys)
}

/// Symbols a concrete question may use: the colors some secret contains,
/// up to `p` of the others, and the additional color when allowed. Further
/// unused colors are interchangeable with the ones listed.
pub(crate) fn concrete_alphabet(maset: &ConcreteMaset) -> Vec<Sym> {
    let mut alphabet: Vec<Sym> = maset.live_colors().into_iter().map(Sym::Color).collect();
    alphabet.extend(
        maset
            .dead_colors()
            .into_iter()
            .take(maset.pegs())
            .map(Sym::Color),
    );
    alphabet.sort_unstable();
    if maset.additional() {
        alphabet.push(Sym::Additional);
    }
    alphabet
}

/// All legal tuples over `alphabet` in lexicographic order.
pub(crate) fn tuples(game: Game, pegs: usize, alphabet: &[Sym]) -> Vec<Question> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; pegs];
    if alphabet.is_empty() {
        return out;
    }
    loop {
        let pegs_now: Pegs = idx.iter().map(|&i| alphabet[i]).collect();
        let distinct_ok = game.allows_repeats() || !repeats_color(&pegs_now);
        if distinct_ok {
            if let Ok(q) = Question::new(pegs_now) {
                out.push(q);
            }
        }
        let mut k = pegs;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < alphabet.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// True if some answer other than `(p,0)` receives every secret.
pub(crate) fn leaves_whole(indices: &[u8], pegs: usize) -> bool {
    let last = (answer_count(pegs) - 1) as u8;
    match indices.split_first() {
        Some((&first, rest)) => first != last && rest.iter().all(|&k| k == first),
        None => true,
    }
}

/// Non-isomorphic questions that split a concrete maset.
pub fn gen_questions_concrete(maset: &ConcreteMaset) -> Vec<Question> {
    let candidates: Vec<Question> = tuples(maset.game(), maset.pegs(), &concrete_alphabet(maset))
        .into_iter()
        .filter(|q| !leaves_whole(&answer_indices(maset.secrets(), q.pegs(), maset.pegs()), maset.pegs()))
        .collect();
    let keys = candidates
        .par_iter()
        .map(|q| canonical_concrete_with_question(maset, q))
        .collect();
    first_of_each_class(candidates, keys)
}
