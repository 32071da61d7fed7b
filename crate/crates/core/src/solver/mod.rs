//! Reducts, answer-set checking and enumeration.
//!
//! The reduct of a ground program with respect to `I` keeps the rules whose
//! bodies `I` satisfies, with their bodies unchanged. `I` is an answer set
//! when it is a ⊆-minimal model of that reduct.
//!
//! Enumeration splits the program. The lower part (no deferred variables)
//! is searched first over its possible atoms; each lower answer set fixes
//! every aggregate of the upper part, whose rule families are then
//! instantiated and searched in turn. Every candidate passes a final
//! [`is_answer_set`] check against the whole program.

mod engine;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::evaluator::{self, normalize_literal};
use crate::grounder::{GroundError, GroundProgram};
use crate::model::*;
use engine::{Engine, Mode};

#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error("answer set search timed out")]
    Timeout,
    #[error(transparent)]
    Ground(#[from] GroundError),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Keep only the first `limit` answer sets in canonical order.
    pub limit: Option<usize>,
    pub timeout: Option<Duration>,
    /// Bound on the atoms derived through rule families.
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnswerSetCollection {
    /// Answer sets in canonical (sorted) order.
    pub sets: Vec<Interpretation>,
    /// Every atom a candidate could contain.
    pub base: BTreeSet<Literal>,
}

impl AnswerSetCollection {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Rules of `rules` whose body holds in `interp`.
pub fn reduct_of(rules: &[NdlpRule], interp: &Interpretation) -> Vec<NdlpRule> {
    rules.iter().filter(|r| evaluator::satisfies_body(interp, &r.body)).cloned().collect()
}

/// The reduct of the whole ground program, families instantiated against
/// `interp`.
pub fn reduct(program: &GroundProgram, interp: &Interpretation) -> Vec<NdlpRule> {
    reduct_of(&program.rules_for(interp), interp)
}

fn atoms_of(interp: &Interpretation) -> BTreeSet<Literal> {
    interp.iter().cloned().collect()
}

/// Whether some proper subset of `interp` satisfies every rule.
fn has_proper_submodel(rules: &[NdlpRule], interp: &Interpretation) -> bool {
    let empty = Interpretation::new();
    let mut engine = Engine::new(rules, &atoms_of(interp), &empty, Mode::ProperSubmodel, None);
    let mut found = false;
    engine
        .search(|_| {
            found = true;
            true
        })
        .expect("no deadline");
    found
}

/// `interp` satisfies `rules` and no proper subset does.
pub fn is_minimal_model(rules: &[NdlpRule], interp: &Interpretation) -> bool {
    interp.is_consistent()
        && rules.iter().all(|r| evaluator::satisfies_rule(interp, r))
        && !has_proper_submodel(rules, interp)
}

/// Answer-set test for variable-free rules.
pub fn is_answer_set_of(rules: &[NdlpRule], interp: &Interpretation) -> bool {
    if !interp.is_consistent() || !rules.iter().all(|r| evaluator::satisfies_rule(interp, r)) {
        return false;
    }
    !has_proper_submodel(&reduct_of(rules, interp), interp)
}

pub fn is_answer_set(program: &GroundProgram, interp: &Interpretation) -> bool {
    is_answer_set_of(&program.rules_for(interp), interp)
}

fn facts(rules: &[NdlpRule]) -> Interpretation {
    let mut out = Interpretation::new();
    for r in rules.iter().filter(|r| r.is_fact()) {
        out.insert(normalize_literal(&r.head[0]));
    }
    out
}

struct Search {
    deadline: Option<Instant>,
}

impl Search {
    fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn run(
        &self,
        rules: &[NdlpRule],
        table: &BTreeSet<Literal>,
        fixed: &Interpretation,
        mut accept: impl FnMut(&Interpretation) -> bool,
    ) -> Result<Vec<Interpretation>, SolveError> {
        let mut engine = Engine::new(rules, table, fixed, Mode::AnswerSet, self.deadline);
        let mut found = Vec::new();
        engine
            .search(|candidate| {
                if accept(&candidate) {
                    found.push(candidate);
                }
                false
            })
            .map_err(|_| SolveError::Timeout)?;
        if self.timed_out() {
            return Err(SolveError::Timeout);
        }
        Ok(found)
    }
}

/// Atoms the upper part can derive once the lower answer set is fixed.
fn upper_possible(
    program: &GroundProgram,
    upper_rules: &[&NdlpRule],
    lower: &Interpretation,
    cap: u64,
) -> Result<BTreeSet<Literal>, SolveError> {
    let mut possible: BTreeSet<Literal> = BTreeSet::new();
    loop {
        let view = lower.union(&possible.iter().cloned().collect());
        let mut rules: Vec<NdlpRule> = upper_rules.iter().map(|r| (*r).clone()).collect();
        for f in &program.families {
            rules.extend(f.instantiate(&view));
        }
        let mut changed = false;
        for r in &rules {
            let may_hold = r.body.iter().all(|c| match c {
                Conjunct::Literal { naf: false, literal } => view.contains(&normalize_literal(literal)),
                Conjunct::Literal { naf: true, literal } => {
                    program.upper.contains(literal.predicate()) || !lower.contains(&normalize_literal(literal))
                }
                _ => evaluator::satisfies_conjunct(&view, c),
            });
            if may_hold {
                for h in &r.head {
                    let h = normalize_literal(h);
                    if !lower.contains(&h) && possible.insert(h) {
                        changed = true;
                    }
                }
            }
        }
        if possible.len() as u64 > cap {
            return Err(GroundError::CapExceeded { span: RuleSpan::default(), cap }.into());
        }
        if !changed {
            return Ok(possible);
        }
    }
}

/// All answer sets of the ground generator rules, in canonical order.
pub fn answer_sets(program: &GroundProgram, options: SolveOptions) -> Result<AnswerSetCollection, SolveError> {
    let search = Search { deadline: options.timeout.map(|t| Instant::now() + t) };
    let cap = options.cap.unwrap_or(crate::grounder::DEFAULT_GROUND_CAP);
    let (upper_rules, lower_rules): (Vec<&NdlpRule>, Vec<&NdlpRule>) =
        program.gen_rules.iter().partition(|r| program.is_upper(r));
    let lower_rules: Vec<NdlpRule> = lower_rules.into_iter().cloned().collect();
    let fixed = facts(&lower_rules);
    let lower_sets = search.run(&lower_rules, &program.possible, &fixed, |l| is_answer_set_of(&lower_rules, l))?;

    let mut base = program.possible.clone();
    let mut sets = Vec::new();
    let has_upper = !upper_rules.is_empty() || !program.families.is_empty();
    for lower in lower_sets {
        if !has_upper {
            sets.push(lower);
            continue;
        }
        let table = upper_possible(program, &upper_rules, &lower, cap)?;
        let view = lower.union(&table.iter().cloned().collect());
        let mut rules: Vec<NdlpRule> = upper_rules.iter().map(|r| (*r).clone()).collect();
        for f in &program.families {
            rules.extend(f.instantiate(&view));
        }
        base.extend(table.iter().cloned());
        for upper in search.run(&rules, &table, &lower, |i| is_answer_set(program, i))? {
            sets.push(upper);
        }
    }
    sets.sort();
    sets.dedup();
    if let Some(limit) = options.limit {
        sets.truncate(limit);
    }
    Ok(AnswerSetCollection { sets, base })
}
