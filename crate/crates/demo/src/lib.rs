//! Three operations for the static page in `web/`. Each returns a string
//! (JSON or plain text); the wasm wrappers only turn errors into exceptions.

use serde_json::json;
use wasm_bindgen::prelude::*;

use maset_core::listing::emit_listing;
use maset_core::system::{derive, eval_system, oracle_table};
use maset_core::{ConcreteMaset, Game, Oracle};

/// Largest game the page will brute-force.
pub const MAX_SECRETS: usize = 400;
/// Derivation is instant for two pegs; three takes minutes and gigabytes.
pub const MAX_DERIVE_PEGS: usize = 2;
pub const MAX_CURVE_COLORS: u32 = 200;

fn game(tag: &str) -> Result<Game, String> {
    match tag.to_ascii_lowercase().as_str() {
        "mm" => Ok(Game::Mastermind),
        "ab" => Ok(Game::Ab),
        _ => Err(format!("unknown game {tag:?}; use mm or ab")),
    }
}

/// Exact optimum of the full game: `{"L":45,"N":16,"expected":"45/16","approx":2.8125}`.
pub fn solve_json(tag: &str, pegs: usize, colors: u32, additional: bool) -> Result<String, String> {
    let maset = ConcreteMaset::full(game(tag)?, pegs, colors, additional).map_err(|e| e.to_string())?;
    if maset.len() > MAX_SECRETS {
        return Err(format!("{} secrets is too many for the browser (limit {MAX_SECRETS})", maset.len()));
    }
    let l = Oracle::new().solve(&maset).map_err(|e| e.to_string())?;
    let n = maset.len() as u64;
    let expected = if n == 0 { None } else { Some(l as f64 / n as f64) };
    Ok(json!({
        "L": l,
        "N": n,
        "expected": expected.map(|_| ratio(l, n)),
        "approx": expected,
    })
    .to_string())
}

fn ratio(l: u64, n: u64) -> String {
    let g = gcd(l, n);
    if n / g == 1 {
        format!("{}", l / g)
    } else {
        format!("{}/{}", l / g, n / g)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn listing_text(tag: &str, pegs: usize) -> Result<String, String> {
    if pegs > MAX_DERIVE_PEGS {
        return Err(format!("the page derives at most {MAX_DERIVE_PEGS} pegs; use the CLI"));
    }
    let out = derive(game(tag)?, pegs).map_err(|e| e.to_string())?;
    Ok(emit_listing(&out))
}

/// Expected number of questions for the full game at `n = pegs..=n_max`,
/// evaluated from the derived equations, with the optimal first question.
pub fn curve_json(tag: &str, pegs: usize, n_max: u32) -> Result<String, String> {
    if pegs > MAX_DERIVE_PEGS {
        return Err(format!("the page derives at most {MAX_DERIVE_PEGS} pegs; use the CLI"));
    }
    if n_max > MAX_CURVE_COLORS {
        return Err(format!("at most {MAX_CURVE_COLORS} colors"));
    }
    let out = derive(game(tag)?, pegs).map_err(|e| e.to_string())?;
    let base = oracle_table(&out, 0..=out.max_shift(), &Oracle::new()).map_err(|e| e.to_string())?;
    let (values, argmin) = eval_system(&out, n_max, &base).map_err(|e| e.to_string())?;
    let count = out.queue[0].count_secrets();
    let points: Vec<_> = (pegs.max(1) as u32..=n_max)
        .filter_map(|n| {
            let l = values.get(0, n)?;
            let secrets = count.eval(i64::from(n));
            let question = argmin.get(&(0, n)).map(|&e| out.equations[e].question.to_string());
            Some(json!({
                "n": n,
                "L": l,
                "N": secrets,
                "expected": ratio(l as u64, secrets as u64),
                "approx": l as f64 / secrets as f64,
                "question": question,
            }))
        })
        .collect();
    Ok(serde_json::Value::Array(points).to_string())
}

#[wasm_bindgen]
pub fn solve(game: &str, pegs: usize, colors: u32, additional: bool) -> Result<String, JsError> {
    solve_json(game, pegs, colors, additional).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn derive_listing(game: &str, pegs: usize) -> Result<String, JsError> {
    listing_text(game, pegs).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn expected_curve(game: &str, pegs: usize, n_max: u32) -> Result<String, JsError> {
    curve_json(game, pegs, n_max).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn solve_mm_2_4() {
        let v: Value = serde_json::from_str(&solve_json("mm", 2, 4, true).unwrap()).unwrap();
        assert_eq!(v["L"], 45);
        assert_eq!(v["N"], 16);
        assert_eq!(v["expected"], "45/16");
    }

    #[test]
    fn rejects_large_and_unknown_games() {
        assert!(solve_json("mm", 4, 6, true).is_err());
        assert!(solve_json("go", 2, 4, true).is_err());
        assert!(listing_text("mm", 3).is_err());
    }

    #[test]
    fn listing_starts_with_the_full_pattern() {
        let text = listing_text("ab", 2).unwrap();
        assert!(text.starts_with("M_{2,0} = (*_n,*_n)\n"));
    }

    #[test]
    fn curve_matches_the_tables() {
        let v: Value = serde_json::from_str(&curve_json("mm", 2, 6).unwrap()).unwrap();
        let points = v.as_array().unwrap();
        assert_eq!(points[0]["n"], 2);
        let at4 = points.iter().find(|p| p["n"] == 4).unwrap();
        assert_eq!(at4["L"], 45);
        assert_eq!(at4["expected"], "45/16");
        assert_eq!(at4["question"], "(0,1)");
        let ab: Value = serde_json::from_str(&curve_json("ab", 2, 5).unwrap()).unwrap();
        assert_eq!(ab.as_array().unwrap().last().unwrap()["L"], 60);
    }
}
