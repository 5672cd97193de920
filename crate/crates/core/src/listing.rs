//! Plain-text listing of a derivation in the published arrow notation.
//!
//! ```text
//! M_{2,1} = (0,*_{n-1}) | (*_{n-1},0)
//!   (0,1)
//!     [0,0] → ∅
//!     [1,0] → (0,*_{n-2}) ⇛ (*_{n-2},0)
//!     A_{2,1}(n) = A_{2,4}(n-1) + A_{2,4}(n-1) + 2n - 1    (MM.2.1.2; n ≥ 2)
//! ```

use std::fmt::Write;

use crate::system::{ChildOutcome, DerivationOutput, Equation, Term};

fn term_label(pegs: usize, t: &Term) -> String {
    if t.shift == 0 {
        format!("A_{{{pegs},{}}}(n)", t.pattern)
    } else {
        format!("A_{{{pegs},{}}}(n-{})", t.pattern, t.shift)
    }
}

/// `A_{p,i}(n) = <terms> + <w>`.
pub fn equation_line(eq: &Equation) -> String {
    let pegs = eq.id.pegs;
    let mut parts: Vec<String> = eq.terms.iter().map(|t| term_label(pegs, t)).collect();
    if !eq.w.is_zero() || parts.is_empty() {
        parts.push(eq.w.to_string());
    }
    format!("A_{{{pegs},{}}}(n) = {}", eq.id.pattern, parts.join(" + "))
}

pub fn emit_listing(out: &DerivationOutput) -> String {
    let mut s = String::new();
    for (i, pattern) in out.queue.iter().enumerate() {
        let _ = writeln!(s, "M_{{{},{i}}} = {pattern}", out.pegs);
        for eq in out.equations_of(i) {
            let _ = writeln!(s, "  {}", eq.question);
            for child in &eq.children {
                let _ = write!(s, "    {} → {}", child.answer, child.raw);
                if let Some(normal) = &child.normalized {
                    let _ = write!(s, " ⇒ {normal}");
                }
                if let ChildOutcome::Queue { index, .. } = child.outcome {
                    let normal = child.normal_form();
                    let shown = out.queue[index]
                        .with_deficit(normal.deficit())
                        .map(|p| p.to_string())
                        .unwrap_or_else(|_| out.queue[index].to_string());
                    if shown != normal.to_string() {
                        let _ = write!(s, " ⇛ {shown}");
                    }
                }
                s.push('\n');
            }
            let _ = writeln!(
                s,
                "    {}    ({}; n ≥ {})",
                equation_line(eq),
                eq.id,
                eq.valid_from
            );
        }
    }
    s
}
