//! Explicit secret sets at a fixed color count, the oracle's state.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::pattern::Game;

pub type Secret = SmallVec<[u8; 4]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConcreteMaset {
    game: Game,
    pegs: usize,
    colors: u32,
    additional: bool,
    /// Sorted, duplicate-free.
    secrets: Vec<Secret>,
}

impl ConcreteMaset {
    pub fn new(
        game: Game,
        pegs: usize,
        colors: u32,
        additional: bool,
        mut secrets: Vec<Secret>,
    ) -> Result<Self> {
        if colors > 250 {
            return Err(Error::InvalidMaset(format!("{colors} colors is too many")));
        }
        for s in &secrets {
            if s.len() != pegs {
                return Err(Error::InvalidMaset(format!("secret {s:?} has the wrong length")));
            }
            if let Some(&c) = s.iter().find(|&&c| u32::from(c) >= colors) {
                return Err(Error::InvalidMaset(format!("color {c} out of range")));
            }
            if game == Game::Ab && has_repeat(s) {
                return Err(Error::InvalidMaset(format!("AB secret {s:?} repeats a color")));
            }
        }
        secrets.sort_unstable();
        let before = secrets.len();
        secrets.dedup();
        if secrets.len() != before {
            return Err(Error::InvalidMaset("duplicate secrets".into()));
        }
        Ok(Self {
            game,
            pegs,
            colors,
            additional,
            secrets,
        })
    }

    /// Every legal secret of the game.
    pub fn full(game: Game, pegs: usize, colors: u32, additional: bool) -> Result<Self> {
        if game == Game::Ab && (colors as usize) < pegs {
            return Err(Error::AbTooFewColors { colors, pegs });
        }
        crate::pattern::MasetPattern::full(game, pegs).instantiate(colors, additional)
    }

    pub(crate) fn from_sorted(
        game: Game,
        pegs: usize,
        colors: u32,
        additional: bool,
        secrets: Vec<Secret>,
    ) -> Self {
        debug_assert!(secrets.windows(2).all(|w| w[0] < w[1]));
        Self {
            game,
            pegs,
            colors,
            additional,
            secrets,
        }
    }

    pub fn game(&self) -> Game {
        self.game
    }

    pub fn pegs(&self) -> usize {
        self.pegs
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn additional(&self) -> bool {
        self.additional
    }

    pub fn secrets(&self) -> &[Secret] {
        &self.secrets
    }

    pub fn len(&self) -> usize {
        self.secrets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.secrets.is_empty()
    }

    /// Colors that occur in at least one secret, ascending.
    pub fn live_colors(&self) -> Vec<u8> {
        let mut seen = vec![false; self.colors as usize];
        for s in &self.secrets {
            for &c in s {
                seen[usize::from(c)] = true;
            }
        }
        (0..self.colors as u8).filter(|&c| seen[usize::from(c)]).collect()
    }

    /// Colors that no secret contains; asking them never scores a peg.
    pub fn dead_colors(&self) -> Vec<u8> {
        let live = self.live_colors();
        (0..self.colors as u8).filter(|c| !live.contains(c)).collect()
    }

    pub fn with_secrets(&self, secrets: Vec<Secret>) -> Self {
        Self::from_sorted(self.game, self.pegs, self.colors, self.additional, secrets)
    }
}

pub(crate) fn has_repeat(s: &[u8]) -> bool {
    s.iter().enumerate().any(|(i, c)| s[..i].contains(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    #[test]
    fn full_sizes() {
        assert_eq!(ConcreteMaset::full(Game::Mastermind, 2, 3, true).unwrap().len(), 9);
        assert_eq!(ConcreteMaset::full(Game::Ab, 2, 4, true).unwrap().len(), 12);
        assert_eq!(ConcreteMaset::full(Game::Mastermind, 3, 2, true).unwrap().len(), 8);
        assert!(ConcreteMaset::full(Game::Ab, 3, 2, true).is_err());
    }

    #[test]
    fn validation() {
        let bad = ConcreteMaset::new(Game::Ab, 2, 3, true, vec![smallvec![1, 1]]);
        assert!(bad.is_err());
        let bad = ConcreteMaset::new(Game::Mastermind, 2, 2, true, vec![smallvec![0, 2]]);
        assert!(bad.is_err());
        let dup = vec![smallvec![0, 1], smallvec![0, 1]];
        assert!(ConcreteMaset::new(Game::Mastermind, 2, 2, true, dup).is_err());
    }

    #[test]
    fn live_and_dead() {
        let m = ConcreteMaset::new(
            Game::Mastermind,
            2,
            5,
            false,
            vec![smallvec![3, 1], smallvec![1, 1]],
        )
        .unwrap();
        assert_eq!(m.live_colors(), vec![1, 3]);
        assert_eq!(m.dead_colors(), vec![0, 2, 4]);
        assert_eq!(m.secrets()[0].as_slice(), &[1, 1]);
    }
}
