//! Symbolic maset patterns: alternatives of clauses over explicit colors and
//! stars, where every star stands for the `n - t` colors outside `0..t`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::concrete::{ConcreteMaset, Secret};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// One peg of a clause or question.
///
/// The derived order (explicit colors ascending, then `Star`, then
/// `Additional`) is the symbol order used by canonical forms and by
/// question enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Color(u8),
    Star,
    /// The question-only color that no secret can contain.
    Additional,
}

impl Sym {
    pub fn color(self) -> Option<u8> {
        match self {
            Sym::Color(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_star(self) -> bool {
        self == Sym::Star
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Color(c) => write!(f, "{c}"),
            Sym::Star => f.write_str("*"),
            Sym::Additional => f.write_str("a"),
        }
    }
}

impl FromStr for Sym {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "*" => Ok(Sym::Star),
            "a" => Ok(Sym::Additional),
            t => t
                .parse::<u8>()
                .map(Sym::Color)
                .map_err(|_| Error::InvalidPattern(format!("bad symbol {t:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Game {
    /// Repeated colors allowed in secrets and questions.
    Mastermind,
    /// Bulls and Cows: no repeated colors in secrets, nor explicit colors in
    /// questions.
    Ab,
}

impl Game {
    pub fn allows_repeats(self) -> bool {
        matches!(self, Game::Mastermind)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Game::Mastermind => "MM",
            Game::Ab => "AB",
        }
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Game {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mm" | "mastermind" => Ok(Game::Mastermind),
            "ab" | "bulls" => Ok(Game::Ab),
            other => Err(Error::InvalidPattern(format!("unknown game {other:?}"))),
        }
    }
}

pub type Pegs = SmallVec<[Sym; 4]>;

/// A p-tuple of explicit colors and stars.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(Pegs);

impl Clause {
    pub fn new(pegs: impl IntoIterator<Item = Sym>) -> Self {
        Clause(pegs.into_iter().collect())
    }

    pub fn star_count(&self) -> usize {
        self.0.iter().filter(|s| s.is_star()).count()
    }

    pub fn has_star(&self) -> bool {
        self.0.iter().any(|s| s.is_star())
    }

    fn map_colors(&self, f: impl Fn(u8) -> u8) -> Clause {
        Clause(
            self.0
                .iter()
                .map(|&s| match s {
                    Sym::Color(c) => Sym::Color(f(c)),
                    other => other,
                })
                .collect(),
        )
    }
}

impl Deref for Clause {
    type Target = [Sym];

    fn deref(&self) -> &[Sym] {
        &self.0
    }
}

/// Symbolic set of secrets.
///
/// `deficit` is the `t` of the common star `*_{n-t}`. Queue patterns are kept
/// tight (`deficit` equals the number of explicit colors); children of a split
/// usually are not.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MasetPattern {
    game: Game,
    pegs: usize,
    deficit: u32,
    clauses: Vec<Clause>,
}

impl MasetPattern {
    pub fn new(game: Game, pegs: usize, deficit: u32, clauses: Vec<Clause>) -> Result<Self> {
        if pegs == 0 {
            return Err(Error::InvalidPattern("zero pegs".into()));
        }
        for clause in &clauses {
            if clause.len() != pegs {
                return Err(Error::InvalidPattern(format!(
                    "clause of length {} in a {pegs}-peg pattern",
                    clause.len()
                )));
            }
            let mut seen = BTreeSet::new();
            for &s in clause.iter() {
                match s {
                    Sym::Additional => {
                        return Err(Error::InvalidPattern(
                            "the additional color cannot occur in a clause".into(),
                        ))
                    }
                    Sym::Color(c) if u32::from(c) >= deficit => {
                        return Err(Error::InvalidPattern(format!(
                            "explicit color {c} is not below the deficit {deficit}"
                        )))
                    }
                    Sym::Color(c) if !game.allows_repeats() && !seen.insert(c) => {
                        return Err(Error::InvalidPattern(format!(
                            "repeated color {c} in an AB clause"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(Self {
            game,
            pegs,
            deficit,
            clauses,
        })
    }

    /// `(*_n, ..., *_n)`: every secret of the game.
    pub fn full(game: Game, pegs: usize) -> Self {
        Self {
            game,
            pegs,
            deficit: 0,
            clauses: vec![Clause::new(std::iter::repeat_n(Sym::Star, pegs))],
        }
    }

    pub fn empty(game: Game, pegs: usize, deficit: u32) -> Self {
        Self {
            game,
            pegs,
            deficit,
            clauses: Vec::new(),
        }
    }

    pub fn game(&self) -> Game {
        self.game
    }

    pub fn pegs(&self) -> usize {
        self.pegs
    }

    pub fn deficit(&self) -> u32 {
        self.deficit
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn has_star(&self) -> bool {
        self.clauses.iter().any(Clause::has_star)
    }

    pub(crate) fn push(&mut self, clause: Clause) {
        self.clauses.push(clause);
    }

    pub fn with_deficit(&self, deficit: u32) -> Result<Self> {
        Self::new(self.game, self.pegs, deficit, self.clauses.clone())
    }

    pub fn explicit_colors(&self) -> BTreeSet<u8> {
        self.clauses
            .iter()
            .flat_map(|c| c.iter().filter_map(|s| s.color()))
            .collect()
    }

    /// Number of distinct explicit colors (`u`).
    pub fn explicit_count(&self) -> u32 {
        self.explicit_colors().len() as u32
    }

    pub fn is_normalized(&self) -> bool {
        self.explicit_colors()
            .iter()
            .enumerate()
            .all(|(i, &c)| usize::from(c) == i)
    }

    pub fn is_tight(&self) -> bool {
        self.is_normalized() && self.deficit == self.explicit_count()
    }

    /// Renames explicit colors onto `0..u`, keeping their relative order.
    /// The deficit is unchanged.
    pub fn normalize(&self) -> Self {
        let colors: Vec<u8> = self.explicit_colors().into_iter().collect();
        let mut rank = [0u8; 256];
        for (i, &c) in colors.iter().enumerate() {
            rank[usize::from(c)] = i as u8;
        }
        Self {
            game: self.game,
            pegs: self.pegs,
            deficit: self.deficit,
            clauses: self
                .clauses
                .iter()
                .map(|c| c.map_colors(|x| rank[usize::from(x)]))
                .collect(),
        }
    }

    /// Drops the `r = t - u` colors that no clause names, returning the tight
    /// pattern and `r`. Instantiating the result at `n - r` gives the input's
    /// instantiation at `n` with those colors deleted.
    pub fn tighten(&self) -> Result<(Self, u32)> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized);
        }
        let u = self.explicit_count();
        let mut tight = self.clone();
        tight.deficit = u;
        Ok((tight, self.deficit - u))
    }

    /// Names the colors `u..v` inside every star: each star position becomes
    /// one of the new colors or the residual star `*_{n-(t-u+v)}`.
    ///
    /// The secret set is preserved exactly only when the pattern is tight.
    /// Otherwise the named colors overlap the dead ones and the result agrees
    /// with the original only up to the tightening shift.
    pub fn extend(&self, target: u32) -> Result<Self> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized);
        }
        let u = self.explicit_count();
        if target <= u || self.deficit < u {
            return Err(Error::InvalidExtension {
                explicit: u,
                target,
            });
        }
        let mut choices: Vec<Sym> = (u..target).map(|c| Sym::Color(c as u8)).collect();
        choices.push(Sym::Star);
        let mut out = Self::empty(self.game, self.pegs, self.deficit - u + target);
        let repeats = self.game.allows_repeats();
        for clause in &self.clauses {
            // first star position varies slowest, residual star last
            let mut combos: Vec<Pegs> = vec![clause.0.clone()];
            for pos in (0..clause.len()).filter(|&i| clause[i].is_star()) {
                combos = combos
                    .into_iter()
                    .flat_map(|pegs| {
                        choices.iter().filter_map(move |&sym| {
                            if !repeats && sym != Sym::Star && pegs.contains(&sym) {
                                return None;
                            }
                            let mut next = pegs.clone();
                            next[pos] = sym;
                            Some(next)
                        })
                    })
                    .collect();
            }
            out.clauses.extend(combos.into_iter().map(Clause));
        }
        Ok(out)
    }

    /// Number of represented secrets as a polynomial in `n`.
    pub fn count_secrets(&self) -> Polynomial {
        let t = i64::from(self.deficit);
        self.clauses.iter().fold(Polynomial::zero(), |acc, clause| {
            let k = clause.star_count() as i64;
            let term = match self.game {
                Game::Mastermind => Polynomial::shifted_n(t).pow(k as u32),
                Game::Ab => (0..k).fold(Polynomial::constant(1), |p, j| {
                    &p * &Polynomial::shifted_n(t + j)
                }),
            };
            &acc + &term
        })
    }

    /// Expands the pattern into explicit secrets at `colors` colors; stars
    /// range over `deficit..colors`.
    pub fn instantiate(&self, colors: u32, additional: bool) -> Result<ConcreteMaset> {
        if colors < self.deficit {
            return Err(Error::TooFewColors {
                colors,
                deficit: self.deficit,
            });
        }
        if self.game == Game::Ab && (colors as usize) < self.pegs {
            return Err(Error::AbTooFewColors {
                colors,
                pegs: self.pegs,
            });
        }
        let star_colors: Vec<u8> = (self.deficit..colors).map(|c| c as u8).collect();
        let mut secrets = Vec::new();
        for clause in &self.clauses {
            let mut partial: Vec<Secret> = vec![Secret::new()];
            for &sym in clause.iter() {
                let mut next = Vec::with_capacity(partial.len());
                for prefix in &partial {
                    match sym {
                        Sym::Color(c) => {
                            let mut s = prefix.clone();
                            s.push(c);
                            next.push(s);
                        }
                        _ => {
                            for &c in &star_colors {
                                if self.game == Game::Ab && prefix.contains(&c) {
                                    continue;
                                }
                                let mut s = prefix.clone();
                                s.push(c);
                                next.push(s);
                            }
                        }
                    }
                }
                partial = next;
            }
            secrets.extend(partial);
        }
        ConcreteMaset::new(self.game, self.pegs, colors, additional, secrets)
    }

    /// Parses the listing notation, e.g. `(0,*_{n-2}) | (*_{n-2},1)`.
    ///
    /// Stars may carry an index (`*_n`, `*_{n-3}`); a bare `*` takes the
    /// deficit from indexed stars or, failing that, `max explicit + 1`.
    pub fn parse(game: Game, pegs: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "∅" || text.is_empty() {
            return Ok(Self::empty(game, pegs, 0));
        }
        let mut deficit: Option<u32> = None;
        let mut clauses = Vec::new();
        for part in text.split('|') {
            let body = part
                .trim()
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::InvalidPattern(format!("bad clause {part:?}")))?;
            let mut syms = Pegs::new();
            for token in body.split(',') {
                let token = token.trim();
                if let Some(index) = token.strip_prefix("*_") {
                    let t = parse_star_index(index)?;
                    if deficit.is_some_and(|d| d != t) {
                        return Err(Error::InvalidPattern("stars with different indices".into()));
                    }
                    deficit = Some(t);
                    syms.push(Sym::Star);
                } else {
                    syms.push(token.parse()?);
                }
            }
            clauses.push(Clause(syms));
        }
        let deficit = deficit.unwrap_or_else(|| {
            clauses
                .iter()
                .flat_map(|c| c.iter().filter_map(|s| s.color()))
                .map(|c| u32::from(c) + 1)
                .max()
                .unwrap_or(0)
        });
        Self::new(game, pegs, deficit, clauses)
    }
}

fn parse_star_index(index: &str) -> Result<u32> {
    let inner = index
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(index)
        .replace(' ', "");
    if inner == "n" {
        return Ok(0);
    }
    inner
        .strip_prefix("n-")
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::InvalidPattern(format!("bad star index {index:?}")))
}

pub(crate) fn star_label(deficit: u32) -> String {
    if deficit == 0 {
        "*_n".into()
    } else {
        format!("*_{{n-{deficit}}}")
    }
}

impl fmt::Display for MasetPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("∅");
        }
        let star = star_label(self.deficit);
        for (i, clause) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            f.write_str("(")?;
            for (j, sym) in clause.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                match sym {
                    Sym::Star => f.write_str(&star)?,
                    other => write!(f, "{other}")?,
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn mm(text: &str) -> MasetPattern {
        MasetPattern::parse(Game::Mastermind, 2, text).unwrap()
    }

    fn secret_set(p: &MasetPattern, n: u32) -> BTreeSet<Vec<u8>> {
        p.instantiate(n, true)
            .unwrap()
            .secrets()
            .iter()
            .map(|s| s.to_vec())
            .collect()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let p = mm("(0,0) | (0,*_{n-2}) | (1,1) | (*_{n-2},1)");
        assert_eq!(p.deficit(), 2);
        assert_eq!(p.to_string(), "(0,0) | (0,*_{n-2}) | (1,1) | (*_{n-2},1)");
        assert_eq!(mm("(*_n,*_n)"), MasetPattern::full(Game::Mastermind, 2));
        assert_eq!(mm("∅").to_string(), "∅");
    }

    #[test]
    fn rejects_additional_in_clause_and_ab_repeats() {
        assert!(MasetPattern::parse(Game::Mastermind, 2, "(a,*_{n-1})").is_err());
        assert!(MasetPattern::parse(Game::Ab, 2, "(0,0)").is_err());
        assert!(MasetPattern::parse(Game::Mastermind, 2, "(0,*_{n-1}) | (*_{n-2},0)").is_err());
        assert!(MasetPattern::parse(Game::Mastermind, 2, "(0,*_{n-1},1)").is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(mm("(1,*_{n-2})").normalize(), mm("(0,*_{n-2})"));
        assert_eq!(mm("(*_{n-3},1)").normalize(), mm("(*_{n-3},0)"));
        assert_eq!(mm("(0,*_{n-2})").normalize(), mm("(0,*_{n-2})"));
        // relative order of the colors is kept
        let p = mm("(1,*_{n-2}) | (*_{n-2},0)");
        assert_eq!(p.normalize(), p);
        assert_eq!(mm("(1,1) | (*_{n-2},1)").normalize(), mm("(0,0) | (*_{n-2},0)"));
    }

    #[test]
    fn tighten_examples() {
        let (t, r) = mm("(0,*_{n-2})").tighten().unwrap();
        assert_eq!((t.to_string(), r), ("(0,*_{n-1})".to_string(), 1));
        let (t, r) = mm("(*_{n-1},0)").tighten().unwrap();
        assert_eq!((t, r), (mm("(*_{n-1},0)"), 0));
        let (t, r) = mm("(1,*_{n-3})").normalize().tighten().unwrap();
        assert_eq!((t, r), (mm("(0,*_{n-1})"), 2));
        assert_eq!(mm("(1,*_{n-2})").tighten(), Err(Error::NotNormalized));
    }

    #[test]
    fn extend_four_colors() {
        let p = mm("(0,0) | (0,*_{n-2}) | (1,1) | (*_{n-2},1)");
        let e = p.extend(4).unwrap();
        assert_eq!(
            e,
            mm("(0,0) | (0,2) | (0,3) | (0,*_{n-4}) | (1,1) | (2,1) | (3,1) | (*_{n-4},1)")
        );
    }

    #[test]
    fn extend_one_color_is_cross_product() {
        let e = MasetPattern::full(Game::Mastermind, 2).extend(1).unwrap();
        assert_eq!(e, mm("(0,0) | (0,*_{n-1}) | (*_{n-1},0) | (*_{n-1},*_{n-1})"));
        for n in 1..=6 {
            assert_eq!(secret_set(&e, n), secret_set(&MasetPattern::full(Game::Mastermind, 2), n));
        }
    }

    #[test]
    fn extend_ab_drops_repeats() {
        let e = MasetPattern::full(Game::Ab, 2).extend(2).unwrap();
        assert_eq!(
            e.to_string(),
            "(0,1) | (0,*_{n-2}) | (1,0) | (1,*_{n-2}) | (*_{n-2},0) | (*_{n-2},1) | (*_{n-2},*_{n-2})"
        );
    }

    #[test]
    fn extend_requires_growth() {
        let p = mm("(*_{n-1},0)");
        assert_eq!(
            p.extend(1),
            Err(Error::InvalidExtension {
                explicit: 1,
                target: 1
            })
        );
        let e = p.extend(3).unwrap();
        assert_eq!(secret_set(&e, 6), secret_set(&p, 6));
    }

    #[test]
    fn count_examples() {
        assert_eq!(MasetPattern::full(Game::Mastermind, 2).count_secrets().coeffs(), &[0, 0, 1]);
        assert_eq!(MasetPattern::full(Game::Ab, 2).count_secrets().coeffs(), &[0, -1, 1]);
        let p = mm("(0,0) | (0,*_{n-2}) | (1,1) | (*_{n-2},1)");
        assert_eq!(p.count_secrets().coeffs(), &[-2, 2]);
        assert!(MasetPattern::empty(Game::Mastermind, 2, 0).count_secrets().is_zero());
    }

    #[test]
    fn instantiate_examples() {
        let s = secret_set(&mm("(*_{n-1},0)"), 3);
        assert_eq!(s, BTreeSet::from([vec![1, 0], vec![2, 0]]));
        assert_eq!(secret_set(&MasetPattern::full(Game::Mastermind, 2), 2).len(), 4);
        let s = secret_set(&mm("(0,0) | (0,*_{n-2}) | (1,1) | (*_{n-2},1)"), 4);
        let want: BTreeSet<Vec<u8>> = [[0, 0], [0, 2], [0, 3], [1, 1], [2, 1], [3, 1]]
            .iter()
            .map(|s| s.to_vec())
            .collect();
        assert_eq!(s, want);
        assert_eq!(
            mm("(*_{n-2},0)").instantiate(1, true),
            Err(Error::TooFewColors {
                colors: 1,
                deficit: 2
            })
        );
    }
}
