//! JSON form of a derivation. Field order is fixed by the structs below, so
//! output is byte-stable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{Clause, Game, MasetPattern, Sym};
use crate::poly::Polynomial;
use crate::question::Question;
use crate::split::{answers, AnswerPair};
use crate::system::{Child, ChildOutcome, DerivationOutput, Equation, EquationId, Term};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DerivationDocument {
    schema_version: u32,
    game: String,
    pegs: usize,
    patterns: Vec<PatternDoc>,
    equations: Vec<EquationDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternDoc {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    index: Option<usize>,
    deficit: u32,
    clauses: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EquationDoc {
    id: String,
    pattern: usize,
    question: Vec<String>,
    children: Vec<ChildDoc>,
    terms: Vec<TermDoc>,
    /// Ascending powers of `n`.
    w: Vec<i64>,
    valid_from: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChildDoc {
    answer: [usize; 2],
    raw: PatternDoc,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    normalized: Option<PatternDoc>,
    outcome: OutcomeDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum OutcomeDoc {
    Empty,
    StarFree { cost: u64 },
    Queue { index: usize, shift: u32 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    pattern: usize,
    shift: u32,
}

fn pattern_doc(p: &MasetPattern, index: Option<usize>) -> PatternDoc {
    PatternDoc {
        index,
        deficit: p.deficit(),
        clauses: p
            .clauses()
            .iter()
            .map(|c| c.iter().map(|s| s.to_string()).collect())
            .collect(),
    }
}

pub fn emit_document(out: &DerivationOutput) -> String {
    let doc = DerivationDocument {
        schema_version: SCHEMA_VERSION,
        game: out.game.tag().to_string(),
        pegs: out.pegs,
        patterns: out
            .queue
            .iter()
            .enumerate()
            .map(|(i, p)| pattern_doc(p, Some(i)))
            .collect(),
        equations: out
            .equations
            .iter()
            .map(|e| EquationDoc {
                id: e.id.to_string(),
                pattern: e.id.pattern,
                question: e.question.pegs().iter().map(|s| s.to_string()).collect(),
                children: e
                    .children
                    .iter()
                    .map(|c| ChildDoc {
                        answer: [c.answer.black, c.answer.white],
                        raw: pattern_doc(&c.raw, None),
                        normalized: c.normalized.as_ref().map(|p| pattern_doc(p, None)),
                        outcome: match c.outcome {
                            ChildOutcome::Empty => OutcomeDoc::Empty,
                            ChildOutcome::StarFree { cost } => OutcomeDoc::StarFree { cost },
                            ChildOutcome::Queue { index, shift } => OutcomeDoc::Queue { index, shift },
                        },
                    })
                    .collect(),
                terms: e
                    .terms
                    .iter()
                    .map(|t| TermDoc {
                        pattern: t.pattern,
                        shift: t.shift,
                    })
                    .collect(),
                w: e.w.coeffs().to_vec(),
                valid_from: e.valid_from,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

fn invalid(message: String) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message,
    }
}

fn parse_pattern(game: Game, pegs: usize, doc: PatternDoc) -> Result<MasetPattern> {
    let clauses = doc
        .clauses
        .iter()
        .map(|c| {
            c.iter()
                .map(|s| s.parse::<Sym>())
                .collect::<Result<Vec<_>>>()
                .map(Clause::new)
        })
        .collect::<Result<Vec<_>>>()?;
    MasetPattern::new(game, pegs, doc.deficit, clauses)
}

/// Reads a document back, checking it against the model's invariants.
/// Syntax errors carry the line and column reported by the JSON reader.
pub fn parse_document(text: &str) -> Result<DerivationOutput> {
    let doc: DerivationDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(invalid(format!("unsupported schema version {}", doc.schema_version)));
    }
    let game: Game = doc.game.to_lowercase().parse()?;
    let pegs = doc.pegs;
    let queue = doc
        .patterns
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            if p.index.is_some_and(|k| k != i) {
                return Err(invalid(format!("pattern {i} is out of order")));
            }
            parse_pattern(game, pegs, p)
        })
        .collect::<Result<Vec<_>>>()?;
    let legal = answers(pegs);
    let mut counters = vec![0usize; queue.len()];
    let mut equations = Vec::with_capacity(doc.equations.len());
    for e in doc.equations {
        if e.pattern >= queue.len() {
            return Err(invalid(format!("{}: no pattern {}", e.id, e.pattern)));
        }
        counters[e.pattern] += 1;
        let id = EquationId {
            game,
            pegs,
            pattern: e.pattern,
            question: counters[e.pattern],
        };
        if id.to_string() != e.id {
            return Err(invalid(format!("equation id {} should be {id}", e.id)));
        }
        let question = Question::new(
            e.question
                .iter()
                .map(|s| s.parse::<Sym>())
                .collect::<Result<Vec<_>>>()?,
        )?;
        question.check_game(game)?;
        if e.children.len() != legal.len() {
            return Err(invalid(format!("{}: expected {} children", e.id, legal.len())));
        }
        let mut children = Vec::with_capacity(e.children.len());
        for (c, &expected) in e.children.into_iter().zip(&legal) {
            let answer = AnswerPair::new(c.answer[0], c.answer[1]);
            if answer != expected {
                return Err(invalid(format!("{}: answer {answer} out of order", e.id)));
            }
            let outcome = match c.outcome {
                OutcomeDoc::Empty => ChildOutcome::Empty,
                OutcomeDoc::StarFree { cost } => ChildOutcome::StarFree { cost },
                OutcomeDoc::Queue { index, shift } => {
                    if index >= queue.len() {
                        return Err(invalid(format!("{}: no pattern {index}", e.id)));
                    }
                    ChildOutcome::Queue { index, shift }
                }
            };
            children.push(Child {
                answer,
                raw: parse_pattern(game, pegs, c.raw)?,
                normalized: c.normalized.map(|p| parse_pattern(game, pegs, p)).transpose()?,
                outcome,
            });
        }
        let terms = e
            .terms
            .into_iter()
            .map(|t| {
                if t.pattern >= queue.len() {
                    return Err(invalid(format!("{id}: no pattern {}", t.pattern)));
                }
                Ok(Term {
                    pattern: t.pattern,
                    shift: t.shift,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        equations.push(Equation {
            id,
            question,
            children,
            terms,
            w: Polynomial::from_coeffs(e.w),
            valid_from: e.valid_from,
        });
    }
    Ok(DerivationOutput {
        game,
        pegs,
        queue,
        equations,
    })
}
