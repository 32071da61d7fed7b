use num_traits::Zero;

use super::{encode, expected_length_oracle, extract_tour, tour_length, Objective, PtspError, PtspInstance, Target, Tour};
use crate::grounder::GroundingConfig;
use crate::model::*;
use crate::pipeline::solve_program;
use crate::preference::{rank, Judge, Strategy};
use crate::rational::Rational;
use crate::solver::SolveOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Via {
    /// Rank the answer sets of the encoding with its preference rule.
    #[default]
    Naso,
    /// Read `length(L)` off every answer set and take the minimum.
    Ndlp,
    /// Enumerate tours directly.
    Oracle,
}

impl std::str::FromStr for Via {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naso" => Ok(Via::Naso),
            "ndlp" => Ok(Via::Ndlp),
            "oracle" => Ok(Via::Oracle),
            other => Err(format!("unknown method `{other}` (expected naso, ndlp or oracle)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PtspSolution {
    /// Every tour with its value, in canonical tour order.
    pub tours: Vec<(Tour, Rational)>,
    /// Optimal tours in canonical order.
    pub optimal: Vec<Tour>,
    pub value: Rational,
    pub warnings: Vec<String>,
}

fn number_arg(l: &Literal) -> Option<&Rational> {
    match l.atom.args.first() {
        Some(Term::Const(Constant::Number(v))) => Some(v),
        _ => None,
    }
}

/// Solves an instance by one of three independent routes.
pub fn solve_instance(
    g: &PtspInstance,
    objective: Objective,
    via: Via,
    grounding: GroundingConfig,
    options: SolveOptions,
) -> Result<PtspSolution, PtspError> {
    let mut warnings = Vec::new();
    let mut tours = match via {
        Via::Oracle => super::enumerate_tours(g)?
            .into_iter()
            .map(|t| {
                let v = match objective {
                    Objective::Ptsp => expected_length_oracle(&t, g)?,
                    Objective::Tsp => tour_length(&t, g),
                };
                Ok((t, v))
            })
            .collect::<Result<Vec<_>, PtspError>>()?,
        Via::Naso => {
            let solved = solve_program(&encode(g, objective, Target::Naso, false), grounding, options)?;
            let sets = solved.sets();
            let judge = Judge::new(sets);
            let opt = solved.preferences.iter().flat_map(|r| &r.head).find_map(|c| match c {
                BooleanCombination::Optimize(o) => Some(o),
                _ => None,
            });
            let values = opt.map(|o| judge.optimization_values(o)).unwrap_or_default();
            let ranked = rank(sets, &solved.preferences, Strategy::Pareto);
            warnings.extend(ranked.warnings);
            let mut out = Vec::new();
            for (k, s) in sets.iter().enumerate() {
                let tour = extract_tour(s, g)?;
                let value = values.get(k).and_then(|v| v.defined().cloned()).unwrap_or_else(Rational::zero);
                out.push((tour, value, ranked.top.contains(&k)));
            }
            out.sort();
            let optimal: Vec<Tour> = out.iter().filter(|(_, _, top)| *top).map(|(t, _, _)| t.clone()).collect();
            let value = out.iter().find(|(_, _, top)| *top).map(|(_, v, _)| v.clone()).unwrap_or_else(Rational::zero);
            let tours = out.into_iter().map(|(t, v, _)| (t, v)).collect();
            return Ok(PtspSolution { tours, optimal, value, warnings });
        }
        Via::Ndlp => {
            let solved = solve_program(&encode(g, objective, Target::Ndlp, false), grounding, options)?;
            let mut out = Vec::new();
            for s in solved.sets() {
                let tour = extract_tour(s, g)?;
                let value = s.with_predicate("length").find_map(number_arg).cloned().ok_or_else(|| {
                    PtspError::MalformedTour(format!("answer set for tour {tour} has no length"))
                })?;
                out.push((tour, value));
            }
            out
        }
    };
    tours.sort();
    let value = tours.iter().map(|(_, v)| v.clone()).min().unwrap_or_else(Rational::zero);
    let optimal = tours.iter().filter(|(_, v)| *v == value).map(|(t, _)| t.clone()).collect();
    Ok(PtspSolution { tours, optimal, value, warnings })
}
