//! Browser bindings. Every export takes text and returns a JSON string;
//! failures come back as `{"error": "..."}`.

use nested_asp::ptsp::{self, Objective, Tour};
use nested_asp::rational::{self, Rational};
use nested_asp::{parse_program, solve_program, Degree, GroundingConfig, SolveOptions, Strategy};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Answer sets shown in the page before truncating.
const MAX_SETS: usize = 500;

fn number(value: &Rational) -> Value {
    json!({
        "fraction": rational::to_fraction(value),
        "rounded": rational::round_to(value, 2),
    })
}

fn degree(d: &Degree) -> Value {
    match d {
        Degree::Index(i) => json!(i),
        Degree::Irrelevant => json!("irrelevant"),
    }
}

fn options() -> SolveOptions {
    SolveOptions { limit: Some(MAX_SETS), timeout: None, cap: Some(GroundingConfig::default().cap) }
}

pub fn solve_value(text: &str, strategy: &str) -> Result<Value, String> {
    let strategy: Strategy = strategy.parse()?;
    let program = parse_program(text).map_err(|e| e.to_string())?;
    let mut solved = solve_program(&program, GroundingConfig::default(), options()).map_err(|e| e.to_string())?;
    let ranked = solved.rank(strategy);
    let sets: Vec<Vec<String>> = solved
        .sets()
        .iter()
        .map(|s| {
            let mut atoms: Vec<String> = s.iter().map(ToString::to_string).collect();
            atoms.sort();
            atoms
        })
        .collect();
    Ok(json!({
        "answer_sets": sets,
        "truncated": sets.len() == MAX_SETS,
        "strategy": ranked.strategy.as_str(),
        "top": ranked.top,
        "degrees": ranked.degrees.iter().map(|ds| ds.iter().map(degree).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "warnings": ranked.warnings,
    }))
}

pub fn ground_value(text: &str) -> Result<Value, String> {
    let program = parse_program(text).map_err(|e| e.to_string())?;
    let ground = nested_asp::ground_program(&program, GroundingConfig::default()).map_err(|e| e.to_string())?;
    Ok(json!({ "program": ground.render(), "rules": ground.gen_rules.len() }))
}

pub fn tours_value(instance: &str) -> Result<Value, String> {
    let g = ptsp::load_instance(instance).map_err(|e| e.to_string())?;
    let (best, value) = ptsp::optimal_tours(&g, Objective::Ptsp).map_err(|e| e.to_string())?;
    let rows = ptsp::enumerate_tours(&g)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|t: Tour| {
            let expected = ptsp::expected_length(&t, &g);
            Ok(json!({
                "tour": t.to_string(),
                "expected_length": number(&expected),
                "oracle_agrees": ptsp::expected_length_oracle(&t, &g).map_err(|e| e.to_string())? == expected,
                "length": number(&ptsp::tour_length(&t, &g)),
                "optimal": best.contains(&t),
            }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(json!({ "tours": rows, "value": number(&value) }))
}

fn respond(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Answer sets of a program ranked under `pareto` or `maximal`.
#[wasm_bindgen]
pub fn solve(text: &str, strategy: &str) -> String {
    respond(solve_value(text, strategy))
}

#[wasm_bindgen]
pub fn ground(text: &str) -> String {
    respond(ground_value(text))
}

/// Every tour of an instance with its expected and plain length.
#[wasm_bindgen]
pub fn ptsp_tours(instance: &str) -> String {
    respond(tours_value(instance))
}

#[cfg(test)]
mod tests {
    use super::*;

    const INSTANCE: &str = include_str!("../../../data/example.json");

    #[test]
    fn ranks_disjunction() {
        let v = solve_value("a | b. #pref a >> b.", "pareto").unwrap();
        assert_eq!(v["answer_sets"], json!([["a"], ["b"]]));
        assert_eq!(v["top"], json!([0]));
    }

    #[test]
    fn errors_are_json() {
        let out: Value = serde_json::from_str(&solve("a :- b(.", "pareto")).unwrap();
        assert!(out["error"].is_string());
        let out: Value = serde_json::from_str(&solve("a.", "best")).unwrap();
        assert!(out["error"].as_str().unwrap().contains("best"));
    }

    #[test]
    fn grounds_join() {
        let v = ground_value("p(1). p(2). p(3). q(X) :- p(X).").unwrap();
        assert!(v["program"].as_str().unwrap().contains("q(2)"));
    }

    #[test]
    fn example_tours() {
        let v = tours_value(INSTANCE).unwrap();
        let tours = v["tours"].as_array().unwrap();
        assert_eq!(tours.len(), 6);
        assert!(tours.iter().all(|t| t["oracle_agrees"] == json!(true)));
        let optimal: Vec<&str> =
            tours.iter().filter(|t| t["optimal"] == json!(true)).map(|t| t["tour"].as_str().unwrap()).collect();
        assert_eq!(optimal, ["a,b,c,d", "a,d,c,b"]);
        assert_eq!(v["value"]["rounded"], "76.67");
    }
}
