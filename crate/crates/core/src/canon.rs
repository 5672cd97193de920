//! Canonical forms of symbol tables under row, column and explicit-color
//! permutations.
//!
//! A table is a set of rows of `p` symbols, optionally with one pinned row
//! (a question) that takes part in column and color permutations but is never
//! exchanged with the other rows. `Star` and `Additional` are fixed by every
//! color permutation.
//!
//! For each column permutation the explicit colors are split into classes by
//! iterated refinement, then every way of breaking the remaining ties
//! (individualize one color of the first non-trivial class, refine again) is
//! explored. Each leaf fixes a labeling; the smallest relabeled table (pinned
//! row first, other rows sorted) over all leaves and column permutations is
//! the key. Both the refinement and the choice of class depend only on the
//! isomorphism class of the input, so isomorphic tables yield equal keys.

use std::fmt;

use itertools::Itertools;
use smallvec::SmallVec;

use crate::concrete::ConcreteMaset;
use crate::pattern::{MasetPattern, Sym};
use crate::question::Question;

const STAR: u8 = 0xFE;
const ADDITIONAL: u8 = 0xFF;

/// Byte string identifying an isomorphism class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// Key of a normalized pattern; the star deficit is not part of it.
pub fn canonical_pattern(pattern: &MasetPattern) -> CanonicalKey {
    let rows: Vec<&[Sym]> = pattern.clauses().iter().map(|c| &c[..]).collect();
    let mut key = vec![b'P', pattern.pegs() as u8];
    key.extend_from_slice(&(rows.len() as u32).to_le_bytes());
    key.extend(canonical_table(&rows, None, pattern.pegs()));
    CanonicalKey(key)
}

/// Key of a pattern with a question row appended.
pub fn canonical_with_question(pattern: &MasetPattern, question: &Question) -> CanonicalKey {
    let rows: Vec<&[Sym]> = pattern.clauses().iter().map(|c| &c[..]).collect();
    let mut key = vec![b'Q', pattern.pegs() as u8];
    key.extend_from_slice(&(rows.len() as u32).to_le_bytes());
    key.extend(canonical_table(&rows, Some(question.pegs()), pattern.pegs()));
    CanonicalKey(key)
}

/// Key of an explicit secret set under color permutations of `0..n` and peg
/// permutations. The color count is part of the key.
pub fn canonical_concrete(maset: &ConcreteMaset) -> CanonicalKey {
    let rows = secret_rows(maset);
    let refs: Vec<&[Sym]> = rows.iter().map(|r| &r[..]).collect();
    let mut key = vec![b'C', maset.pegs() as u8];
    key.extend_from_slice(&maset.colors().to_le_bytes());
    key.extend_from_slice(&(refs.len() as u32).to_le_bytes());
    key.extend(canonical_table(&refs, None, maset.pegs()));
    CanonicalKey(key)
}

/// Key of a concrete maset with a question row appended.
pub fn canonical_concrete_with_question(maset: &ConcreteMaset, question: &Question) -> CanonicalKey {
    let rows = secret_rows(maset);
    let refs: Vec<&[Sym]> = rows.iter().map(|r| &r[..]).collect();
    let mut key = vec![b'D', maset.pegs() as u8];
    key.extend_from_slice(&maset.colors().to_le_bytes());
    key.extend_from_slice(&(refs.len() as u32).to_le_bytes());
    key.extend(canonical_table(&refs, Some(question.pegs()), maset.pegs()));
    CanonicalKey(key)
}

pub(crate) fn secret_rows(maset: &ConcreteMaset) -> Vec<SmallVec<[Sym; 4]>> {
    maset
        .secrets()
        .iter()
        .map(|s| s.iter().map(|&c| Sym::Color(c)).collect())
        .collect()
}

type Row = SmallVec<[u8; 4]>;

/// Canonical byte form of a table: pinned row first, then the sorted rows.
pub(crate) fn canonical_table(rows: &[&[Sym]], pinned: Option<&[Sym]>, pegs: usize) -> Vec<u8> {
    let mut palette: Vec<u8> = rows
        .iter()
        .copied()
        .chain(pinned)
        .flat_map(|r| r.iter().filter_map(|s| s.color()))
        .collect();
    palette.sort_unstable();
    palette.dedup();
    let mut dense = [0u8; 256];
    for (i, &c) in palette.iter().enumerate() {
        dense[usize::from(c)] = i as u8;
    }
    let encode = |r: &[Sym]| -> Row {
        r.iter()
            .map(|&s| match s {
                Sym::Color(c) => dense[usize::from(c)],
                Sym::Star => STAR,
                Sym::Additional => ADDITIONAL,
            })
            .collect()
    };
    let rows: Vec<Row> = rows.iter().map(|r| encode(r)).collect();
    let pinned: Option<Row> = pinned.map(encode);

    let mut best: Option<Vec<u8>> = None;
    for perm in (0..pegs).permutations(pegs) {
        let permute = |r: &Row| -> Row { perm.iter().map(|&j| r[j]).collect() };
        let search = Search::new(
            rows.iter().map(permute).collect(),
            pinned.as_ref().map(permute),
            palette.len(),
        );
        search.run(vec![0; palette.len()], &mut best);
    }
    best.unwrap_or_default()
}

struct Search {
    rows: Vec<Row>,
    pinned: Option<Row>,
    /// For each color, the (row, position) cells holding it; the pinned row
    /// has index `rows.len()`.
    occurrences: Vec<Vec<(u32, u8)>>,
}

const SELF: u32 = u32::MAX - 2;

impl Search {
    fn new(rows: Vec<Row>, pinned: Option<Row>, colors: usize) -> Self {
        let mut occurrences = vec![Vec::new(); colors];
        for (r, row) in rows.iter().chain(pinned.iter()).enumerate() {
            for (j, &cell) in row.iter().enumerate() {
                if cell < STAR {
                    occurrences[usize::from(cell)].push((r as u32, j as u8));
                }
            }
        }
        Self {
            rows,
            pinned,
            occurrences,
        }
    }

    fn row(&self, r: u32) -> &Row {
        match self.rows.get(r as usize) {
            Some(row) => row,
            None => self.pinned.as_ref().expect("pinned row"),
        }
    }

    fn signature(&self, color: usize, classes: &[u32]) -> Vec<u32> {
        let mut features: Vec<SmallVec<[u32; 8]>> = self.occurrences[color]
            .iter()
            .map(|&(r, j)| {
                let mut f: SmallVec<[u32; 8]> = SmallVec::new();
                f.push(u32::from(r as usize == self.rows.len()));
                f.push(u32::from(j));
                f.extend(self.row(r).iter().map(|&cell| match cell {
                    STAR => u32::MAX - 1,
                    ADDITIONAL => u32::MAX,
                    c if usize::from(c) == color => SELF,
                    c => classes[usize::from(c)],
                }));
                f
            })
            .collect();
        features.sort_unstable();
        let mut sig = Vec::with_capacity(1 + features.len() * 8);
        sig.push(classes[color]);
        for f in features {
            sig.extend(f);
        }
        sig
    }

    /// Splits classes until stable. Class ids stay dense and refine the
    /// previous order.
    fn refine(&self, classes: &mut [u32]) {
        let k = classes.len();
        let mut count = distinct(classes);
        while count < k {
            let mut sigs: Vec<(Vec<u32>, usize)> =
                (0..k).map(|c| (self.signature(c, classes), c)).collect();
            sigs.sort_unstable();
            let mut rank = 0;
            for i in 0..k {
                if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                    rank += 1;
                }
                classes[sigs[i].1] = rank;
            }
            let next = rank as usize + 1;
            if next == count {
                break;
            }
            count = next;
        }
    }

    fn run(&self, mut classes: Vec<u32>, best: &mut Option<Vec<u8>>) {
        self.refine(&mut classes);
        let k = classes.len();
        let mut sizes = vec![0u32; k];
        for &c in &classes {
            sizes[c as usize] += 1;
        }
        match (0..k as u32).find(|&c| sizes[c as usize] > 1) {
            None => self.leaf(&classes, best),
            Some(target) => {
                for chosen in (0..k).filter(|&c| classes[c] == target) {
                    let child = classes
                        .iter()
                        .enumerate()
                        .map(|(c, &v)| {
                            if v > target || (v == target && c != chosen) {
                                v + 1
                            } else {
                                v
                            }
                        })
                        .collect();
                    self.run(child, best);
                }
            }
        }
    }

    fn leaf(&self, labels: &[u32], best: &mut Option<Vec<u8>>) {
        let relabel = |row: &Row| -> Row {
            row.iter()
                .map(|&cell| {
                    if cell < STAR {
                        labels[usize::from(cell)] as u8
                    } else {
                        cell
                    }
                })
                .collect()
        };
        let mut rows: Vec<Row> = self.rows.iter().map(relabel).collect();
        rows.sort_unstable();
        let mut out = Vec::with_capacity((rows.len() + 1) * 4);
        if let Some(p) = &self.pinned {
            out.extend(relabel(p));
        }
        for r in rows {
            out.extend(r);
        }
        if best.as_ref().is_none_or(|b| out < *b) {
            *best = Some(out);
        }
    }
}

fn distinct(classes: &[u32]) -> usize {
    let mut v = classes.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Game;
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn mm(text: &str) -> MasetPattern {
        MasetPattern::parse(Game::Mastermind, 2, text).unwrap()
    }

    fn q(text: &str) -> Question {
        text.parse().unwrap()
    }

    #[test]
    fn isomorphic_pattern_pairs() {
        let pairs = [
            ("(0,*_{n-2})", "(*_{n-2},0)"),
            ("(*_n,*_n)", "(*_{n-1},*_{n-1})"),
            ("(0,*_{n-1})", "(*_{n-1},0)"),
            ("(0,0) | (*_{n-2},0)", "(0,0) | (0,*_{n-2})"),
            ("(0,*_{n-2}) | (*_{n-2},1)", "(1,*_{n-2}) | (*_{n-2},0)"),
        ];
        for (a, b) in pairs {
            let (a, b) = (mm(a).normalize(), mm(b).normalize());
            assert_eq!(canonical_pattern(&a), canonical_pattern(&b), "{a} vs {b}");
        }
        assert_ne!(canonical_pattern(&mm("(0,0)")), canonical_pattern(&mm("(0,1)")));
    }

    #[test]
    fn question_keys() {
        let full = MasetPattern::full(Game::Mastermind, 2);
        assert_eq!(
            canonical_with_question(&full, &q("(0,1)")),
            canonical_with_question(&full, &q("(1,0)"))
        );
        let keys: Vec<_> = ["(0,0)", "(0,1)", "(0,a)"]
            .iter()
            .map(|s| canonical_with_question(&full, &q(s)))
            .collect();
        assert!(keys[0] != keys[1] && keys[1] != keys[2] && keys[0] != keys[2]);

        let m23 = mm("(0,0) | (0,*_{n-2}) | (1,1) | (*_{n-2},1)");
        let rows: Vec<Vec<Sym>> = m23.clauses().iter().map(|c| c.to_vec()).collect();
        let a = q("(2,3)");
        let b = q("(3,2)");
        let expected = brute::isomorphic(&rows, Some(a.pegs()), &rows, Some(b.pegs()));
        assert_eq!(
            canonical_with_question(&m23, &a) == canonical_with_question(&m23, &b),
            expected
        );
        assert!(expected);
    }

    #[test]
    fn additional_is_fixed() {
        let full = MasetPattern::full(Game::Mastermind, 2);
        assert_ne!(
            canonical_with_question(&full, &q("(0,a)")),
            canonical_with_question(&full, &q("(0,1)"))
        );
    }

    fn concrete(n: u32, secrets: &[[u8; 2]]) -> ConcreteMaset {
        ConcreteMaset::new(
            Game::Mastermind,
            2,
            n,
            true,
            secrets.iter().map(|s| s.iter().copied().collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn concrete_keys() {
        assert_eq!(
            canonical_concrete(&concrete(2, &[[0, 1]])),
            canonical_concrete(&concrete(2, &[[1, 0]]))
        );
        assert_ne!(
            canonical_concrete(&concrete(2, &[[0, 0], [1, 1]])),
            canonical_concrete(&concrete(2, &[[0, 1], [1, 0]]))
        );
        assert_ne!(
            canonical_concrete(&concrete(2, &[[0, 1]])),
            canonical_concrete(&concrete(3, &[[0, 1]]))
        );
    }

    #[test]
    fn full_concrete_is_symmetric() {
        let full = ConcreteMaset::full(Game::Mastermind, 2, 3, true).unwrap();
        let key = canonical_concrete(&full);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let mut colors: Vec<u8> = (0..3).collect();
            colors.shuffle(&mut rng);
            let swap = rng.gen_bool(0.5);
            let secrets = full
                .secrets()
                .iter()
                .map(|s| {
                    let mut t: smallvec::SmallVec<[u8; 4]> =
                        s.iter().map(|&c| colors[usize::from(c)]).collect();
                    if swap {
                        t.swap(0, 1);
                    }
                    t
                })
                .collect();
            let image = ConcreteMaset::new(Game::Mastermind, 2, 3, true, secrets).unwrap();
            assert_eq!(canonical_concrete(&image), key);
        }
    }
}
