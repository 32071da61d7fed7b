use std::collections::BTreeSet;
use std::fmt::Write;
use std::time::Duration;

use clap::ValueEnum;
use nested_asp::ptsp::{self, Objective, PtspError, PtspInstance, PtspSolution, Tour, Via};
use nested_asp::rational::{self, Rational};
use nested_asp::{Degree, GroundProgram, GroundingConfig, Interpretation, RankResult, SolveOptions, Solved, Symbol};
use serde_json::{json, Value};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

enum Body {
    AnswerSets { sets: Vec<Vec<String>>, rank: Option<RankResult> },
    Ground { rules: Vec<String>, families: Vec<String>, preferences: Vec<String> },
    Encoding { text: Option<String>, path: Option<String> },
    Ptsp { objective: Objective, via: Via, solution: PtspSolution },
    Verify(Verdict),
}

pub struct Report {
    body: Body,
    warnings: Vec<String>,
    timings: Vec<(String, Duration)>,
}

fn atoms(interp: &Interpretation, keep: Option<&BTreeSet<Symbol>>) -> Vec<String> {
    let mut out: Vec<String> = interp
        .iter()
        .filter(|l| keep.is_none_or(|k| k.contains(l.predicate())))
        .map(ToString::to_string)
        .collect();
    out.sort();
    out
}

fn rational_json(value: &Rational) -> Value {
    json!({
        "fraction": rational::to_fraction(value),
        "decimal": rational::to_decimal(value),
        "rounded": rational::round_to(value, 2),
    })
}

/// Two-decimal rounding, followed by the exact value when they differ.
fn rational_text(value: &Rational) -> String {
    let rounded = rational::round_to(value, 2);
    match rational::to_decimal(value) {
        Some(d) if d.split_once('.').is_none_or(|(_, frac)| frac.len() <= 2) => d,
        _ => format!("{rounded} ({})", rational::to_fraction(value)),
    }
}

fn degree_json(d: Degree) -> Value {
    match d {
        Degree::Index(i) => json!(i),
        Degree::Irrelevant => json!("irrelevant"),
    }
}

fn degree_text(d: Degree) -> String {
    match d {
        Degree::Index(i) => i.to_string(),
        Degree::Irrelevant => "irr".to_string(),
    }
}

impl Report {
    fn new(body: Body) -> Self {
        Report { body, warnings: Vec::new(), timings: Vec::new() }
    }

    pub fn answer_sets(solved: &Solved, rank: Option<RankResult>, keep: Option<BTreeSet<Symbol>>) -> Self {
        let sets = solved.sets().iter().map(|s| atoms(s, keep.as_ref())).collect();
        let warnings = rank.as_ref().map(|r| r.warnings.clone()).unwrap_or_default();
        let mut report = Report::new(Body::AnswerSets { sets, rank });
        report.warnings = warnings;
        report.timings = solved.timings.iter().map(|(k, d)| (k.to_string(), *d)).collect();
        report
    }

    pub fn ground(ground: &GroundProgram) -> Self {
        Report::new(Body::Ground {
            rules: ground.gen_rules.iter().map(ToString::to_string).collect(),
            families: ground.families.iter().map(|f| f.rule.to_string()).collect(),
            preferences: ground.pref_rules.iter().map(ToString::to_string).collect(),
        })
    }

    pub fn encoding(text: Option<String>, path: Option<String>) -> Self {
        Report::new(Body::Encoding { text, path })
    }

    pub fn ptsp(objective: Objective, via: Via, solution: &PtspSolution) -> Self {
        let mut report = Report::new(Body::Ptsp { objective, via, solution: solution.clone() });
        report.warnings = solution.warnings.clone();
        report
    }

    pub fn verify(verdict: Verdict) -> Self {
        Report::new(Body::Verify(verdict))
    }

    pub fn timing(&mut self, phase: &str, elapsed: Duration) {
        self.timings.push((phase.to_string(), elapsed));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut value = self.json_body();
                let timings: serde_json::Map<String, Value> =
                    self.timings.iter().map(|(k, d)| (format!("{k}_ms"), json!(d.as_secs_f64() * 1000.0))).collect();
                value["warnings"] = json!(self.warnings);
                value["timings"] = Value::Object(timings);
                let mut out = serde_json::to_string_pretty(&value).expect("reports serialize");
                out.push('\n');
                out
            }
            Format::Text => {
                let mut out = self.text_body();
                for w in &self.warnings {
                    writeln!(out, "warning: {w}").unwrap();
                }
                out
            }
        }
    }

    fn json_body(&self) -> Value {
        match &self.body {
            Body::AnswerSets { sets, rank } => {
                let rank = rank.as_ref().map(|r| {
                    json!({
                        "strategy": r.strategy.as_str(),
                        "top": r.top,
                        "degrees": r.degrees.iter().map(|ds| ds.iter().map(|d| degree_json(*d)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "comparisons": r.comparisons.iter().map(|(i, j, rel)| json!([i, j, rel.as_str()])).collect::<Vec<_>>(),
                    })
                });
                json!({ "answer_sets": sets, "rank": rank })
            }
            Body::Ground { rules, families, preferences } => {
                json!({ "rules": rules, "families": families, "preferences": preferences })
            }
            Body::Encoding { text, path } => json!({ "program": text, "written_to": path }),
            Body::Ptsp { objective, via, solution } => json!({
                "mode": objective_name(*objective),
                "via": via_name(*via),
                "value": rational_json(&solution.value),
                "tours": solution.optimal.iter().map(Tour::to_string).collect::<Vec<_>>(),
                "all_tours": solution.tours.iter().map(|(t, v)| json!({ "tour": t.to_string(), "value": rational_json(v) })).collect::<Vec<_>>(),
            }),
            Body::Verify(v) => json!({
                "tours": v.rows.iter().map(|r| json!({
                    "tour": r.tour.to_string(),
                    "expected_length": rational_json(&r.formula),
                    "oracle": rational_json(&r.oracle),
                    "equal": r.formula == r.oracle,
                })).collect::<Vec<_>>(),
                "oracle_optimal": v.oracle_optimal.iter().map(Tour::to_string).collect::<Vec<_>>(),
                "ranked_top": v.ranked_top.iter().map(Tour::to_string).collect::<Vec<_>>(),
                "top_matches": v.oracle_optimal == v.ranked_top,
                "passed": v.passed(),
            }),
        }
    }

    fn text_body(&self) -> String {
        let mut out = String::new();
        match &self.body {
            Body::AnswerSets { sets, rank } => {
                for (k, s) in sets.iter().enumerate() {
                    writeln!(out, "Answer set {}: {{{}}}", k + 1, s.join(", ")).unwrap();
                    if let Some(r) = rank {
                        let degrees: Vec<String> = r.degrees[k].iter().map(|d| degree_text(*d)).collect();
                        if !degrees.is_empty() {
                            writeln!(out, "  degrees: {}", degrees.join(", ")).unwrap();
                        }
                    }
                }
                match sets.len() {
                    0 => out.push_str("No answer sets\n"),
                    1 => out.push_str("1 answer set\n"),
                    n => writeln!(out, "{n} answer sets").unwrap(),
                }
                if let Some(r) = rank {
                    let top: Vec<String> = r.top.iter().map(|i| (i + 1).to_string()).collect();
                    writeln!(out, "Top ({}): {}", r.strategy, top.join(", ")).unwrap();
                }
            }
            Body::Ground { rules, families, preferences } => {
                for r in rules {
                    writeln!(out, "{r}").unwrap();
                }
                if !families.is_empty() {
                    out.push_str("% instantiated per answer set of the rules above:\n");
                    for f in families {
                        writeln!(out, "{f}").unwrap();
                    }
                }
                for p in preferences {
                    writeln!(out, "{p}").unwrap();
                }
            }
            Body::Encoding { text, path } => match (text, path) {
                (Some(text), _) => out.push_str(text),
                (None, Some(path)) => writeln!(out, "wrote {path}").unwrap(),
                (None, None) => {}
            },
            Body::Ptsp { objective, via, solution } => {
                let label = match objective {
                    Objective::Ptsp => "expected length",
                    Objective::Tsp => "length",
                };
                for (t, v) in &solution.tours {
                    let mark = if solution.optimal.contains(t) { "*" } else { " " };
                    writeln!(out, "{mark} {t}  {label} {}", rational_text(v)).unwrap();
                }
                writeln!(out, "Optimal via {}: {}", via_name(*via), rational_text(&solution.value)).unwrap();
                let tours: Vec<String> = solution.optimal.iter().map(Tour::to_string).collect();
                writeln!(out, "Optimal tours: {}", tours.join("  ")).unwrap();
            }
            Body::Verify(v) => {
                for r in &v.rows {
                    let verdict = if r.formula == r.oracle { "ok" } else { "MISMATCH" };
                    writeln!(
                        out,
                        "{}  formula {}  oracle {}  {verdict}",
                        r.tour,
                        rational_text(&r.formula),
                        rational_text(&r.oracle)
                    )
                    .unwrap();
                }
                let names = |ts: &[Tour]| ts.iter().map(Tour::to_string).collect::<Vec<_>>().join("  ");
                writeln!(out, "Oracle optimal: {}", names(&v.oracle_optimal)).unwrap();
                writeln!(out, "Ranked top:     {}", names(&v.ranked_top)).unwrap();
                writeln!(out, "{}", if v.passed() { "PASS" } else { "FAIL" }).unwrap();
            }
        }
        out
    }
}

fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::Ptsp => "ptsp",
        Objective::Tsp => "tsp",
    }
}

fn via_name(v: Via) -> &'static str {
    match v {
        Via::Naso => "naso",
        Via::Ndlp => "ndlp",
        Via::Oracle => "oracle",
    }
}

pub struct VerifyRow {
    tour: Tour,
    formula: Rational,
    oracle: Rational,
}

pub struct Verdict {
    rows: Vec<VerifyRow>,
    oracle_optimal: Vec<Tour>,
    ranked_top: Vec<Tour>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.formula == r.oracle) && self.oracle_optimal == self.ranked_top
    }
}

/// Closed form against subset enumeration for every tour, and the ranked
/// encoding's top tours against the enumerated optimum.
pub fn verify(g: &PtspInstance, grounding: GroundingConfig, options: SolveOptions) -> Result<Verdict, PtspError> {
    let mut rows = Vec::new();
    for tour in ptsp::enumerate_tours(g)? {
        let formula = ptsp::expected_length(&tour, g);
        let oracle = ptsp::expected_length_oracle(&tour, g)?;
        rows.push(VerifyRow { tour, formula, oracle });
    }
    let best = rows.iter().map(|r| &r.oracle).min().cloned();
    let oracle_optimal = rows.iter().filter(|r| Some(&r.oracle) == best.as_ref()).map(|r| r.tour.clone()).collect();
    let ranked = ptsp::solve_instance(g, Objective::Ptsp, Via::Naso, grounding, options)?;
    Ok(Verdict { rows, oracle_optimal, ranked_top: ranked.optimal })
}
