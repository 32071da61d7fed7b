//! Variable scoping and program analysis.
//!
//! A variable is local to the innermost set whose own level (element,
//! literal arguments, builtins, guards of nested aggregates) mentions it and
//! no enclosing level does. Among the locals of a set, a *placeholder* is
//! one that only receives its value from the guard of a positive equality
//! aggregate at the same level; it is not enumerated.
//!
//! At rule level, a *deferred* variable is one whose value cannot come from
//! the universe: it is bound by the guard of an equality aggregate, or by a
//! literal over a predicate whose arguments are themselves aggregate values.
//! Rules with deferred variables are instantiated against interpretations.
//! The predicates they define, and everything depending on them, form the
//! *upper* part of the program; the rest is the *lower* part.

use std::collections::BTreeSet;

use super::GroundError;
use crate::model::*;

#[derive(Debug, Clone, Default)]
pub struct SetScope {
    /// Enumerated locals, sorted.
    pub locals: Vec<Variable>,
    /// Placeholders in binding order.
    pub placeholders: Vec<Variable>,
}

impl SetScope {
    pub fn level_vars(&self) -> impl Iterator<Item = &Variable> {
        self.locals.iter().chain(self.placeholders.iter())
    }
}

pub fn set_scope(set: &SymbolicSet, bound: &BTreeSet<Variable>, span: RuleSpan) -> Result<SetScope, GroundError> {
    let mut level = BTreeSet::new();
    set.element.collect_vars(&mut level);
    for c in &set.condition {
        c.collect_level_vars(&mut level);
    }
    let mut positive = BTreeSet::new();
    let mut guards = BTreeSet::new();
    for c in &set.condition {
        match c {
            Conjunct::Literal { naf: false, literal } => literal.atom.collect_vars(&mut positive),
            Conjunct::Aggregate { atom, .. } => atom.guard.collect_vars(&mut guards),
            _ => {}
        }
    }
    let mut scope = SetScope::default();
    for c in &set.condition {
        if let Some(v) = binding_guard(c) {
            if bound.contains(v) || positive.contains(v) || scope.placeholders.contains(v) {
                continue;
            }
            let Conjunct::Aggregate { atom, .. } = c else { unreachable!() };
            let mut inside = BTreeSet::new();
            atom.set.collect_all_vars(&mut inside);
            if !inside.contains(v) {
                scope.placeholders.push(v.clone());
            }
        }
    }
    for v in level.difference(bound) {
        if scope.placeholders.contains(v) {
            continue;
        }
        if !positive.contains(v) && guards.contains(v) {
            return Err(GroundError::Unsupported {
                span,
                message: format!(
                    "variable `{v}` is bound only by an aggregate guard; only a plain `= {v}` guard of a positive aggregate can bind a set variable"
                ),
            });
        }
        scope.locals.push(v.clone());
    }
    Ok(scope)
}

/// The variable `V` of a positive conjunct `f{...} = V`.
pub fn binding_guard(c: &Conjunct) -> Option<&Variable> {
    match c {
        Conjunct::Aggregate { naf: false, atom } if atom.cmp == Comparison::Eq => atom.guard.as_var(),
        _ => None,
    }
}

/// Every predicate mentioned by the conjunct, including inside sets.
pub fn collect_predicates(c: &Conjunct, out: &mut BTreeSet<Symbol>) {
    match c {
        Conjunct::Literal { literal, .. } => {
            out.insert(literal.predicate().clone());
        }
        Conjunct::Aggregate { atom, .. } => collect_set_predicates(&atom.set, out),
        Conjunct::Builtin(_) => {}
    }
}

pub fn collect_set_predicates(set: &SetTerm, out: &mut BTreeSet<Symbol>) {
    match set {
        SetTerm::Symbolic(s) => s.condition.iter().for_each(|c| collect_predicates(c, out)),
        SetTerm::Ground(g) => g.pairs.iter().flat_map(|p| &p.condition).for_each(|c| collect_predicates(c, out)),
    }
}

fn set_predicates(c: &Conjunct, out: &mut BTreeSet<Symbol>) {
    if let Conjunct::Aggregate { atom, .. } = c {
        collect_set_predicates(&atom.set, out);
    }
}

#[derive(Debug, Clone, Default)]
pub struct Analysis {
    pub upper: BTreeSet<Symbol>,
    /// Deferred variables per generator rule, sorted.
    pub deferred: Vec<Vec<Variable>>,
    /// Whether each generator rule belongs to the upper part.
    pub is_upper: Vec<bool>,
}

fn deferred_vars(rule: &NdlpRule, upper: &BTreeSet<Symbol>) -> Vec<Variable> {
    let mut static_bound = BTreeSet::new();
    let mut candidates = BTreeSet::new();
    for c in &rule.body {
        if let Conjunct::Literal { naf: false, literal } = c {
            if upper.contains(literal.predicate()) {
                literal.atom.collect_vars(&mut candidates);
            } else {
                literal.atom.collect_vars(&mut static_bound);
            }
        }
        if let Some(v) = binding_guard(c) {
            candidates.insert(v.clone());
        }
    }
    candidates.difference(&static_bound).cloned().collect()
}

fn rule_is_upper(rule: &NdlpRule, deferred: &[Variable], upper: &BTreeSet<Symbol>) -> bool {
    if !deferred.is_empty() || rule.head.iter().any(|l| upper.contains(l.predicate())) {
        return true;
    }
    let mut preds = BTreeSet::new();
    rule.body.iter().for_each(|c| collect_predicates(c, &mut preds));
    preds.iter().any(|p| upper.contains(p))
}

pub fn analyse(program: &Program) -> Result<Analysis, GroundError> {
    let mut upper = BTreeSet::new();
    loop {
        let deferred: Vec<Vec<Variable>> = program.gen_rules.iter().map(|r| deferred_vars(r, &upper)).collect();
        let is_upper: Vec<bool> =
            program.gen_rules.iter().zip(&deferred).map(|(r, d)| rule_is_upper(r, d, &upper)).collect();
        let mut next = upper.clone();
        for (r, up) in program.gen_rules.iter().zip(&is_upper) {
            if *up {
                next.extend(r.head.iter().map(|l| l.predicate().clone()));
            }
        }
        if next == upper {
            let analysis = Analysis { upper, deferred, is_upper };
            validate(program, &analysis)?;
            return Ok(analysis);
        }
        upper = next;
    }
}

fn validate(program: &Program, analysis: &Analysis) -> Result<(), GroundError> {
    for (i, rule) in program.gen_rules.iter().enumerate() {
        let deferred = &analysis.deferred[i];
        for c in &rule.body {
            if let Conjunct::Aggregate { atom, .. } = c {
                let mut inside = BTreeSet::new();
                atom.set.collect_all_vars(&mut inside);
                if let Some(v) = deferred.iter().find(|v| inside.contains(*v)) {
                    return Err(GroundError::Unsupported {
                        span: rule.span,
                        message: format!("variable `{v}` takes an aggregate value and cannot also occur inside a set"),
                    });
                }
            }
            if analysis.is_upper[i] {
                let mut preds = BTreeSet::new();
                set_predicates(c, &mut preds);
                if let Some(p) = preds.iter().find(|p| analysis.upper.contains(*p)) {
                    return Err(GroundError::Unsupported {
                        span: rule.span,
                        message: format!(
                            "aggregate over `{p}`, whose atoms depend on aggregate values, inside a rule of the same kind"
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn vars(names: &[&str]) -> Vec<Variable> {
        names.iter().map(|n| Variable::new(n)).collect()
    }

    fn first_set(rule: &NdlpRule) -> &SymbolicSet {
        rule.body
            .iter()
            .find_map(|c| match c {
                Conjunct::Aggregate { atom: AggregateAtom { set: SetTerm::Symbolic(s), .. }, .. } => Some(s),
                _ => None,
            })
            .unwrap()
    }

    #[test]
    fn outer_and_inner_locals() {
        let p = parse_program("s(X) :- #sum{ A : 1 <= I, I <= 2, #sum{ I+J : d(I,J), 1 <= J, J <= 2 } = A } = X.")
            .unwrap();
        let rule = &p.gen_rules[0];
        let outer = first_set(rule);
        let bound: BTreeSet<Variable> = vars(&["X"]).into_iter().collect();
        let scope = set_scope(outer, &bound, rule.span).unwrap();
        assert_eq!(scope.locals, vars(&["I"]));
        assert_eq!(scope.placeholders, vars(&["A"]));
        let Conjunct::Aggregate { atom, .. } = &outer.condition[2] else { panic!() };
        let SetTerm::Symbolic(inner) = &atom.set else { panic!() };
        let inner_bound: BTreeSet<Variable> = vars(&["A", "I", "X"]).into_iter().collect();
        let scope = set_scope(inner, &inner_bound, rule.span).unwrap();
        assert_eq!(scope.locals, vars(&["J"]));
        assert!(scope.placeholders.is_empty());
    }

    #[test]
    fn non_equality_guard_is_rejected() {
        let p = parse_program("s :- #sum{ A : q(I), #sum{ J : d(I,J) } < A } > 1.").unwrap();
        let rule = &p.gen_rules[0];
        assert!(set_scope(first_set(rule), &BTreeSet::new(), rule.span).is_err());
    }

    #[test]
    fn deferred_and_upper() {
        let p = parse_program(
            "d(1). s(X) :- #sum{ Y : d(Y) } = X. t(X) :- s(X), not u(X). u(X) :- d(X). w :- t(X), X > 1.",
        )
        .unwrap();
        let a = analyse(&p).unwrap();
        assert_eq!(a.deferred[1], vars(&["X"]));
        assert_eq!(a.deferred[2], vars(&["X"]));
        assert!(a.deferred[3].is_empty());
        assert_eq!(a.is_upper, vec![false, true, true, false, true]);
        let names: Vec<&str> = a.upper.iter().map(Symbol::as_str).collect();
        assert_eq!(names, ["s", "t", "w"]);
    }

    #[test]
    fn aggregate_over_upper_in_upper_rule_is_rejected() {
        let p = parse_program("d(1). s(X) :- #sum{ Y : d(Y) } = X. t :- #count{ X : s(X) } > 0.").unwrap();
        assert!(analyse(&p).is_err());
    }

    #[test]
    fn plain_programs_are_lower() {
        let p = parse_program("a | b. c :- a, not b. :- c, #count{ X : e(X) } > 2.").unwrap();
        let a = analyse(&p).unwrap();
        assert!(a.upper.is_empty());
        assert!(a.is_upper.iter().all(|u| !u));
    }
}
