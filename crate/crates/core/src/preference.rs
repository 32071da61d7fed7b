//! Preference rules over a collection of answer sets.
//!
//! An answer set satisfies a preference rule to degree `i` when its body
//! holds and `C_i` is the first head combination it satisfies; otherwise the
//! rule is irrelevant to it. Optimization aggregates are relative to the
//! whole collection, so every function here takes it as `all`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use serde::Serialize;

use crate::evaluator::{self, apply_function, multiset_of, Valuation};
use crate::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Preferred,
    Equal,
    Dispreferred,
    Incomparable,
}

impl Relation {
    pub fn inverse(self) -> Relation {
        match self {
            Relation::Preferred => Relation::Dispreferred,
            Relation::Dispreferred => Relation::Preferred,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Preferred => "preferred",
            Relation::Equal => "equal",
            Relation::Dispreferred => "dispreferred",
            Relation::Incomparable => "incomparable",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Pareto,
    Maximal,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Pareto => "pareto",
            Strategy::Maximal => "maximal",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pareto" => Ok(Strategy::Pareto),
            "maximal" => Ok(Strategy::Maximal),
            other => Err(format!("unknown strategy `{other}` (expected pareto or maximal)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub strategy: Strategy,
    /// Indices into the ranked collection, ascending.
    pub top: Vec<usize>,
    /// `(i, j, relation of i to j)` for every ordered pair `i != j`.
    pub comparisons: Vec<(usize, usize, Relation)>,
    #[serde(skip)]
    pub degrees: Vec<Vec<Degree>>,
    pub warnings: Vec<String>,
}

impl RankResult {
    pub fn relation(&self, i: usize, j: usize) -> Option<Relation> {
        if i == j {
            return Some(Relation::Equal);
        }
        self.comparisons.iter().find(|(a, b, _)| *a == i && *b == j).map(|(_, _, r)| *r)
    }
}

/// Evaluates combinations against one collection, caching the value of
/// every optimization aggregate in every answer set. Aggregates are cached
/// by address, so they must outlive the judge.
pub struct Judge<'a> {
    all: &'a [Interpretation],
    values: RefCell<HashMap<*const OptimizationAggregate, Rc<Vec<AggregateValue>>>>,
    warnings: RefCell<Vec<String>>,
}

impl<'a> Judge<'a> {
    pub fn new(all: &'a [Interpretation]) -> Self {
        Judge { all, values: RefCell::new(HashMap::new()), warnings: RefCell::new(Vec::new()) }
    }

    pub fn warnings(&self) -> Vec<String> {
        self.warnings.borrow().clone()
    }

    /// `f(S_I)` for every answer set `I` of the collection, in order.
    pub fn optimization_values(&self, opt: &'a OptimizationAggregate) -> Rc<Vec<AggregateValue>> {
        let key = opt as *const OptimizationAggregate;
        if let Some(v) = self.values.borrow().get(&key) {
            return v.clone();
        }
        let values: Vec<AggregateValue> = self
            .all
            .iter()
            .enumerate()
            .map(|(k, interp)| {
                let SetTerm::Ground(set) = &opt.set else { return AggregateValue::Undefined };
                match multiset_of(set, interp) {
                    Ok(m) => {
                        if opt.abbreviated && m.elements.len() != 1 {
                            self.warnings.borrow_mut().push(format!(
                                "abbreviated optimization `{opt}` ranges over {} elements in answer set {k}; their sum is used",
                                m.elements.len()
                            ));
                        }
                        apply_function(opt.fun, &m)
                    }
                    Err(_) => AggregateValue::Undefined,
                }
            })
            .collect();
        let values = Rc::new(values);
        self.values.borrow_mut().insert(key, values.clone());
        values
    }

    fn optimum_holds(&self, opt: &'a OptimizationAggregate, interp: &Interpretation) -> bool {
        let values = self.optimization_values(opt);
        let own = match self.all.iter().position(|i| i == interp) {
            Some(k) => values[k].clone(),
            None => match &opt.set {
                SetTerm::Ground(set) => evaluator::eval_aggregate(opt.fun, set, interp),
                SetTerm::Symbolic(_) => AggregateValue::Undefined,
            },
        };
        let Some(own) = own.defined() else { return false };
        values.iter().filter_map(AggregateValue::defined).all(|other| match opt.direction {
            Direction::Maximize => other <= own,
            Direction::Minimize => own <= other,
        })
    }

    pub fn satisfies(&self, interp: &Interpretation, c: &'a BooleanCombination) -> bool {
        match c {
            BooleanCombination::Literal { naf, literal } => interp.holds(&evaluator::normalize_literal(literal)) != *naf,
            BooleanCombination::Aggregate { naf, atom } => evaluator::aggregate_atom_holds(atom, interp) != *naf,
            BooleanCombination::Optimize(opt) => self.optimum_holds(opt, interp),
            BooleanCombination::And(parts) => parts.iter().all(|p| self.satisfies(interp, p)),
            BooleanCombination::Or(parts) => parts.iter().any(|p| self.satisfies(interp, p)),
        }
    }

    pub fn degree(&self, interp: &Interpretation, rule: &'a PreferenceRule) -> Degree {
        if !evaluator::satisfies_body(interp, &rule.body) {
            return Degree::Irrelevant;
        }
        match rule.head.iter().position(|c| self.satisfies(interp, c)) {
            Some(i) => Degree::Index(i + 1),
            None => Degree::Irrelevant,
        }
    }
}

pub fn satisfies_combination(interp: &Interpretation, c: &BooleanCombination, all: &[Interpretation]) -> bool {
    Judge::new(all).satisfies(interp, c)
}

pub fn satisfaction_degree(interp: &Interpretation, rule: &PreferenceRule, all: &[Interpretation]) -> Degree {
    Judge::new(all).degree(interp, rule)
}

/// Per-rule comparison of two degrees. Never incomparable.
pub fn compare_degrees(d1: Degree, d2: Degree) -> Relation {
    match d1.rank().cmp(&d2.rank()) {
        std::cmp::Ordering::Less => Relation::Preferred,
        std::cmp::Ordering::Equal => Relation::Equal,
        std::cmp::Ordering::Greater => Relation::Dispreferred,
    }
}

pub fn compare_by_rule(
    i1: &Interpretation,
    i2: &Interpretation,
    rule: &PreferenceRule,
    all: &[Interpretation],
) -> Relation {
    let judge = Judge::new(all);
    compare_degrees(judge.degree(i1, rule), judge.degree(i2, rule))
}

/// Pareto comparison of two degree profiles (one degree per rule).
pub fn pareto_from_degrees(d1: &[Degree], d2: &[Degree]) -> Relation {
    let (mut better, mut worse) = (false, false);
    for (a, b) in d1.iter().zip(d2) {
        match compare_degrees(*a, *b) {
            Relation::Preferred => better = true,
            Relation::Dispreferred => worse = true,
            _ => {}
        }
    }
    match (better, worse) {
        (true, false) => Relation::Preferred,
        (false, true) => Relation::Dispreferred,
        (false, false) => Relation::Equal,
        (true, true) => Relation::Incomparable,
    }
}

/// Maximal comparison: count the rules on which each side is at least as good.
pub fn maximal_from_degrees(d1: &[Degree], d2: &[Degree]) -> Relation {
    let at_least = |x: &[Degree], y: &[Degree]| x.iter().zip(y).filter(|(a, b)| a.rank() <= b.rank()).count();
    match at_least(d1, d2).cmp(&at_least(d2, d1)) {
        std::cmp::Ordering::Greater => Relation::Preferred,
        std::cmp::Ordering::Equal => Relation::Equal,
        std::cmp::Ordering::Less => Relation::Dispreferred,
    }
}

fn profile<'a>(judge: &Judge<'a>, interp: &Interpretation, rules: &'a [PreferenceRule]) -> Vec<Degree> {
    rules.iter().map(|r| judge.degree(interp, r)).collect()
}

pub fn pareto_compare(
    i1: &Interpretation,
    i2: &Interpretation,
    rules: &[PreferenceRule],
    all: &[Interpretation],
) -> Relation {
    let judge = Judge::new(all);
    pareto_from_degrees(&profile(&judge, i1, rules), &profile(&judge, i2, rules))
}

pub fn maximal_compare(
    i1: &Interpretation,
    i2: &Interpretation,
    rules: &[PreferenceRule],
    all: &[Interpretation],
) -> Relation {
    let judge = Judge::new(all);
    maximal_from_degrees(&profile(&judge, i1, rules), &profile(&judge, i2, rules))
}

/// Pairwise comparison of every answer set and the non-dominated ones.
pub fn rank(all: &[Interpretation], rules: &[PreferenceRule], strategy: Strategy) -> RankResult {
    let judge = Judge::new(all);
    let degrees: Vec<Vec<Degree>> = all.iter().map(|i| profile(&judge, i, rules)).collect();
    let compare = match strategy {
        Strategy::Pareto => pareto_from_degrees,
        Strategy::Maximal => maximal_from_degrees,
    };
    let mut comparisons = Vec::new();
    let mut dominated = vec![false; all.len()];
    for i in 0..all.len() {
        for j in 0..all.len() {
            if i == j {
                continue;
            }
            let relation = compare(&degrees[i], &degrees[j]);
            if relation == Relation::Preferred {
                dominated[j] = true;
            }
            comparisons.push((i, j, relation));
        }
    }
    let top = (0..all.len()).filter(|&i| !dominated[i]).collect();
    RankResult { strategy, top, comparisons, degrees, warnings: judge.warnings() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grounder::{Grounder, GroundingConfig};
    use crate::parser::parse_program;
    use crate::solver::{answer_sets, SolveOptions};

    fn solve_and_ground(text: &str) -> (Vec<Interpretation>, Vec<PreferenceRule>) {
        let program = parse_program(text).unwrap();
        let grounder = Grounder::new(&program, GroundingConfig::default()).unwrap();
        let ground = grounder.ground_generators().unwrap();
        let sets = answer_sets(&ground, SolveOptions::default()).unwrap().sets;
        let prefs = grounder.ground_preferences(&sets).unwrap();
        (sets, prefs)
    }

    fn names(sets: &[Interpretation], ids: &[usize]) -> Vec<String> {
        ids.iter().map(|&i| sets[i].to_string()).collect()
    }

    #[test]
    fn degree_comparisons() {
        use Degree::*;
        assert_eq!(compare_degrees(Index(1), Index(2)), Relation::Preferred);
        assert_eq!(compare_degrees(Irrelevant, Irrelevant), Relation::Equal);
        assert_eq!(compare_degrees(Index(3), Irrelevant), Relation::Preferred);
        assert_eq!(compare_degrees(Irrelevant, Index(3)), Relation::Dispreferred);
    }

    #[test]
    fn pareto_and_maximal_profiles() {
        use Degree::*;
        assert_eq!(pareto_from_degrees(&[Index(1)], &[Index(2)]), Relation::Preferred);
        assert_eq!(pareto_from_degrees(&[Index(1), Index(2)], &[Index(2), Index(1)]), Relation::Incomparable);
        assert_eq!(pareto_from_degrees(&[], &[]), Relation::Equal);
        assert_eq!(maximal_from_degrees(&[Index(1), Index(1)], &[Index(2), Index(1)]), Relation::Preferred);
        assert_eq!(maximal_from_degrees(&[Index(1), Index(2)], &[Index(1), Index(2)]), Relation::Equal);
        assert_eq!(maximal_from_degrees(&[Index(1), Index(2), Index(1)], &[Index(2), Index(1), Irrelevant]), Relation::Preferred);
    }

    #[test]
    fn head_order_gives_degrees() {
        let (sets, prefs) = solve_and_ground("a | b | c. #pref a >> b.");
        let all: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(all, ["{a}", "{b}", "{c}"]);
        let degrees: Vec<Degree> = sets.iter().map(|s| satisfaction_degree(s, &prefs[0], &sets)).collect();
        assert_eq!(degrees, [Degree::Index(1), Degree::Index(2), Degree::Irrelevant]);
        let r = rank(&sets, &prefs, Strategy::Pareto);
        assert_eq!(r.top, [0]);
        assert_eq!(r.relation(1, 2), Some(Relation::Preferred));
        assert_eq!(r.relation(2, 1), Some(Relation::Dispreferred));
    }

    #[test]
    fn unsatisfied_body_is_irrelevant() {
        let (sets, prefs) = solve_and_ground("a | b | c. #pref a >> b :- c.");
        assert!(sets.iter().all(|s| satisfaction_degree(s, &prefs[0], &sets) == Degree::Irrelevant));
        assert_eq!(rank(&sets, &prefs, Strategy::Pareto).top, [0, 1, 2]);
    }

    #[test]
    fn minimize_over_collection() {
        let (sets, prefs) = solve_and_ground(
            "c(1,5). c(2,3). c(3,3). pick(X) | skip(X) :- c(X,W). :- pick(X), pick(Y), X < Y. :- not some. \
             some :- pick(X). #pref #minimize(#sum{ W : pick(X), c(X,W) }).",
        );
        assert_eq!(sets.len(), 3);
        let r = rank(&sets, &prefs, Strategy::Pareto);
        let top = names(&sets, &r.top);
        assert_eq!(top.len(), 2);
        assert!(top.iter().all(|s| s.contains("pick(2)") || s.contains("pick(3)")));
        assert!(r.warnings.is_empty());
        assert_eq!(rank(&sets, &prefs, Strategy::Maximal).top, r.top);
    }

    #[test]
    fn maximize_and_undefined_values() {
        let (sets, prefs) = solve_and_ground("v(1) | v(2) | none. #pref #maximize(#max{ X : v(X) }).");
        assert_eq!(sets.len(), 3);
        let degrees: Vec<Degree> = sets.iter().map(|s| satisfaction_degree(s, &prefs[0], &sets)).collect();
        let by_name: HashMap<String, Degree> = sets.iter().map(|s| s.to_string()).zip(degrees).collect();
        assert_eq!(by_name["{v(2)}"], Degree::Index(1));
        assert_eq!(by_name["{v(1)}"], Degree::Irrelevant);
        assert_eq!(by_name["{none}"], Degree::Irrelevant);
    }

    #[test]
    fn singleton_collection_satisfies_minimize() {
        let (sets, prefs) = solve_and_ground("v(4). #pref #minimize(#sum{ X : v(X) }).");
        assert_eq!(sets.len(), 1);
        assert_eq!(satisfaction_degree(&sets[0], &prefs[0], &sets), Degree::Index(1));
        assert_eq!(rank(&sets, &prefs, Strategy::Maximal).top, [0]);
    }

    #[test]
    fn abbreviated_non_singleton_warns() {
        let (sets, prefs) = solve_and_ground("v(1). v(2). #pref #minimize{ X : v(X) }.");
        let r = rank(&sets, &prefs, Strategy::Pareto);
        assert_eq!(r.warnings.len(), 1);
        let (sets, prefs) = solve_and_ground("v(1). #pref #minimize{ X : v(X) }.");
        assert!(rank(&sets, &prefs, Strategy::Pareto).warnings.is_empty());
    }

    #[test]
    fn conflicting_rules_are_incomparable_under_pareto() {
        let (sets, prefs) = solve_and_ground("a | b. #pref a >> b. #pref b >> a.");
        let r = rank(&sets, &prefs, Strategy::Pareto);
        assert_eq!(r.relation(0, 1), Some(Relation::Incomparable));
        assert_eq!(r.top, [0, 1]);
        let r = rank(&sets, &prefs, Strategy::Maximal);
        assert_eq!(r.relation(0, 1), Some(Relation::Equal));
    }

    #[test]
    fn boolean_combinations() {
        let (sets, prefs) = solve_and_ground("a | b. c | d. #pref a, c >> b or d >> not a.");
        let by_name: HashMap<String, Degree> =
            sets.iter().map(|s| (s.to_string(), satisfaction_degree(s, &prefs[0], &sets))).collect();
        assert_eq!(by_name["{a, c}"], Degree::Index(1));
        assert_eq!(by_name["{a, d}"], Degree::Index(2));
        assert_eq!(by_name["{b, c}"], Degree::Index(2));
        assert_eq!(by_name["{b, d}"], Degree::Index(2));
    }

    #[test]
    fn empty_preferences_keep_everything() {
        let (sets, prefs) = solve_and_ground("a | b | c.");
        let r = rank(&sets, &prefs, Strategy::Pareto);
        assert_eq!(r.top, [0, 1, 2]);
        assert!(r.comparisons.iter().all(|(_, _, rel)| *rel == Relation::Equal));
    }
}
