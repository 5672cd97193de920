use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot extend a pattern with {explicit} explicit colors to {target} colors")]
    InvalidExtension { explicit: u32, target: u32 },

    #[error("pattern is not normalized")]
    NotNormalized,

    #[error("{colors} colors is below the pattern deficit {deficit}")]
    TooFewColors { colors: u32, deficit: u32 },

    #[error("AB game needs at least {pegs} colors, got {colors}")]
    AbTooFewColors { colors: u32, pegs: usize },

    #[error("answer [{black},{white}] is impossible with {pegs} pegs")]
    ImpossibleAnswer { black: usize, white: usize, pegs: usize },

    #[error("answer index {index} is out of range for {pegs} pegs")]
    AnswerIndexOutOfRange { index: usize, pegs: usize },

    #[error("question color {color} collides with stars of deficit {deficit}")]
    QuestionColorAboveDeficit { color: u8, deficit: u32 },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid question: {0}")]
    InvalidQuestion(String),

    #[error("invalid maset: {0}")]
    InvalidMaset(String),

    #[error("closed form is only stated for n >= {min}, got {n}")]
    ClosedFormDomain { n: i64, min: i64 },

    #[error("no question splits a maset of {size} secrets")]
    NoSplittingQuestion { size: usize },

    #[error("child pattern {0} has no isomorphic queue entry")]
    MissingQueuePattern(String),

    #[error("relaxation did not converge at n = {n}")]
    NonConvergence { n: u32 },

    #[error("no equation of pattern {pattern} is evaluable at n = {n}")]
    Unresolved { pattern: usize, n: u32 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
