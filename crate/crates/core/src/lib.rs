//! Symbolic maset patterns for two-peg-and-up Mastermind and AB, the
//! recurrence systems they generate, and an exact brute-force oracle to check
//! them against.

pub mod canon;
pub mod concrete;
pub mod document;
pub mod error;
pub mod listing;
pub mod pattern;
pub mod poly;
pub mod question;
pub mod solver;
pub mod split;
pub mod system;
pub mod verify;

pub use canon::{
    canonical_concrete, canonical_concrete_with_question, canonical_pattern,
    canonical_with_question, CanonicalKey,
};
pub use concrete::{ConcreteMaset, Secret};
pub use error::{Error, Result};
pub use pattern::{Clause, Game, MasetPattern, Sym};
pub use poly::Polynomial;
pub use question::{gen_questions, gen_questions_concrete, Question};
pub use solver::{
    closed_form_ab, closed_form_mm, expected_questions, solve_concrete, solve_star_free, Oracle,
    StarFreeSolver,
};
pub use split::{
    answer_count, answer_index, answers, clause_answer, index_to_answer, secret_answer,
    split_concrete, split_pattern, AnswerPair,
};
