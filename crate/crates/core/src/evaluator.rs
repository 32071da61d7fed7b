//! Ground evaluation: arithmetic, builtins, aggregate functions over ground
//! sets, and satisfaction of conjuncts and rules.
//!
//! Evaluation is total. Ill-typed comparisons and arithmetic (a symbol under
//! `<` or `+`, division by zero) make the comparison false; an ill-typed set
//! element makes the whole aggregate undefined.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::model::*;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("arithmetic on non-numeric constant `{0}`")]
    NonNumeric(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot order `{0}` and `{1}`")]
    Incomparable(String, String),
    #[error("term `{0}` is not ground")]
    NotGround(String),
}

/// Truth of ground literals. Implemented by [`Interpretation`] and by the
/// solver's partial assignments.
pub trait Valuation {
    fn holds(&self, literal: &Literal) -> bool;
}

impl Valuation for Interpretation {
    fn holds(&self, literal: &Literal) -> bool {
        self.contains(literal)
    }
}

impl<V: Valuation + ?Sized> Valuation for &V {
    fn holds(&self, literal: &Literal) -> bool {
        (**self).holds(literal)
    }
}

pub fn eval_term(term: &Term) -> Result<Constant, EvalError> {
    match term {
        Term::Const(c) => Ok(c.clone()),
        Term::Var(v) => Err(EvalError::NotGround(v.as_str().to_string())),
        Term::Arith(op, l, r) => {
            let l = eval_number(l)?;
            let r = eval_number(r)?;
            let value = match op {
                ArithOp::Add => l + r,
                ArithOp::Sub => l - r,
                ArithOp::Mul => l * r,
                ArithOp::Div => {
                    if r.is_zero() {
                        return Err(EvalError::DivisionByZero);
                    }
                    l / r
                }
            };
            Ok(Constant::Number(value))
        }
    }
}

fn eval_number(term: &Term) -> Result<Rational, EvalError> {
    match eval_term(term)? {
        Constant::Number(n) => Ok(n),
        Constant::Symbol(s) => Err(EvalError::NonNumeric(s.as_str().to_string())),
    }
}

/// Evaluates arithmetic where possible. Terms that cannot be evaluated
/// (non-ground, or ill-typed like `a+1`) are kept structurally.
pub fn normalize_term(term: &Term) -> Term {
    match term {
        Term::Arith(..) if term.is_ground() => match eval_term(term) {
            Ok(c) => Term::Const(c),
            Err(_) => term.clone(),
        },
        _ => term.clone(),
    }
}

pub fn normalize_atom(atom: &Atom) -> Atom {
    Atom { predicate: atom.predicate.clone(), args: atom.args.iter().map(normalize_term).collect() }
}

pub fn normalize_literal(literal: &Literal) -> Literal {
    Literal { negated: literal.negated, atom: normalize_atom(&literal.atom) }
}

pub fn compare_constants(left: &Constant, cmp: Comparison, right: &Constant) -> Result<bool, EvalError> {
    match (left, right) {
        (Constant::Number(a), Constant::Number(b)) => Ok(cmp.holds(a.cmp(b))),
        _ if cmp.is_order() => Err(EvalError::Incomparable(left.to_string(), right.to_string())),
        _ => Ok(cmp.holds(if left == right { Ordering::Equal } else { Ordering::Less })),
    }
}

pub fn eval_builtin(builtin: &BuiltinAtom) -> Result<bool, EvalError> {
    let l = eval_term(&builtin.left)?;
    let r = eval_term(&builtin.right)?;
    compare_constants(&l, builtin.cmp, &r)
}

/// An unordered collection of constants; equality ignores order.
#[derive(Debug, Clone, Default)]
pub struct Multiset {
    pub elements: Vec<Constant>,
}

impl Multiset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn sorted(&self) -> Vec<&Constant> {
        let mut v: Vec<&Constant> = self.elements.iter().collect();
        v.sort();
        v
    }
}

impl PartialEq for Multiset {
    fn eq(&self, other: &Self) -> bool {
        self.sorted() == other.sorted()
    }
}

impl Eq for Multiset {}

impl FromIterator<Constant> for Multiset {
    fn from_iter<I: IntoIterator<Item = Constant>>(iter: I) -> Self {
        Multiset { elements: iter.into_iter().collect() }
    }
}

/// The multiset `S_I`. Fails when a contributing element is ill-typed.
pub fn multiset_of<V: Valuation + ?Sized>(set: &GroundSet, valuation: &V) -> Result<Multiset, EvalError> {
    let mut elements = Vec::new();
    for pair in &set.pairs {
        if let Some(c) = pair_contribution(pair, valuation)? {
            elements.push(c);
        }
    }
    Ok(Multiset { elements })
}

/// Element contributed by one pair, or `None` when its condition is false.
/// Placeholders are bound by their equality aggregates first; an undefined
/// binding value excludes the pair.
pub fn pair_contribution<V: Valuation + ?Sized>(
    pair: &GroundPair,
    valuation: &V,
) -> Result<Option<Constant>, EvalError> {
    let mentions_placeholder = |c: &Conjunct| !pair.placeholders.is_empty() && conjunct_mentions(c, &pair.placeholders);
    let mut deferred = Vec::new();
    for c in &pair.condition {
        if mentions_placeholder(c) {
            deferred.push(c);
        } else if !satisfies_conjunct(valuation, c) {
            return Ok(None);
        }
    }
    let mut theta = Substitution::new();
    let mut rest = Vec::new();
    for c in deferred {
        if let Conjunct::Aggregate { naf: false, atom } = c {
            if atom.cmp == Comparison::Eq {
                if let Some(v) = atom.guard.as_var() {
                    if pair.placeholders.contains(v) && !theta.contains_key(v) {
                        let substituted;
                        let set = if theta.is_empty() {
                            &atom.set
                        } else {
                            substituted = atom.set.substitute(&theta);
                            &substituted
                        };
                        let SetTerm::Ground(g) = set else { return Ok(None) };
                        match eval_aggregate(atom.fun, g, valuation) {
                            AggregateValue::Defined(x) => {
                                theta.insert(v.clone(), Constant::Number(x));
                                continue;
                            }
                            AggregateValue::Undefined => return Ok(None),
                        }
                    }
                }
            }
        }
        rest.push(c);
    }
    for c in rest {
        if !satisfies_conjunct(valuation, &c.substitute(&theta)) {
            return Ok(None);
        }
    }
    eval_term(&pair.element.substitute(&theta)).map(Some)
}

fn term_mentions(t: &Term, vars: &[Variable]) -> bool {
    match t {
        Term::Const(_) => false,
        Term::Var(v) => vars.contains(v),
        Term::Arith(_, l, r) => term_mentions(l, vars) || term_mentions(r, vars),
    }
}

fn conjunct_mentions(c: &Conjunct, vars: &[Variable]) -> bool {
    match c {
        Conjunct::Literal { literal, .. } => literal.atom.args.iter().any(|t| term_mentions(t, vars)),
        Conjunct::Builtin(b) => term_mentions(&b.left, vars) || term_mentions(&b.right, vars),
        Conjunct::Aggregate { atom, .. } => {
            term_mentions(&atom.guard, vars)
                || match &atom.set {
                    SetTerm::Symbolic(s) => {
                        term_mentions(&s.element, vars) || s.condition.iter().any(|c| conjunct_mentions(c, vars))
                    }
                    SetTerm::Ground(g) => g.pairs.iter().any(|p| {
                        term_mentions(&p.element, vars) || p.condition.iter().any(|c| conjunct_mentions(c, vars))
                    }),
                }
        }
    }
}

pub fn apply_function(fun: AggregateFunction, multiset: &Multiset) -> AggregateValue {
    if fun == AggregateFunction::Count {
        return AggregateValue::Defined(Rational::from_integer(multiset.len().into()));
    }
    let mut numbers = Vec::with_capacity(multiset.len());
    for c in &multiset.elements {
        match c {
            Constant::Number(n) => numbers.push(n),
            Constant::Symbol(_) => return AggregateValue::Undefined,
        }
    }
    match fun {
        AggregateFunction::Sum => AggregateValue::Defined(numbers.into_iter().fold(Rational::zero(), |a, b| a + b)),
        AggregateFunction::Times => AggregateValue::Defined(numbers.into_iter().fold(Rational::one(), |a, b| a * b)),
        AggregateFunction::Min => numbers.into_iter().min().cloned().map_or(AggregateValue::Undefined, AggregateValue::Defined),
        AggregateFunction::Max => numbers.into_iter().max().cloned().map_or(AggregateValue::Undefined, AggregateValue::Defined),
        AggregateFunction::Count => unreachable!(),
    }
}

pub fn eval_aggregate<V: Valuation + ?Sized>(fun: AggregateFunction, set: &GroundSet, valuation: &V) -> AggregateValue {
    match multiset_of(set, valuation) {
        Ok(m) => apply_function(fun, &m),
        Err(_) => AggregateValue::Undefined,
    }
}

/// `f(S) cmp T` ignoring naf. Non-ground sets are false.
pub fn aggregate_atom_holds<V: Valuation + ?Sized>(atom: &AggregateAtom, valuation: &V) -> bool {
    let SetTerm::Ground(set) = &atom.set else { return false };
    let AggregateValue::Defined(v) = eval_aggregate(atom.fun, set, valuation) else { return false };
    match eval_term(&atom.guard) {
        Ok(guard) => compare_constants(&Constant::Number(v), atom.cmp, &guard).unwrap_or(false),
        Err(_) => false,
    }
}

pub fn satisfies_conjunct<V: Valuation + ?Sized>(valuation: &V, conjunct: &Conjunct) -> bool {
    match conjunct {
        Conjunct::Literal { naf, literal } => literal_holds(valuation, literal) != *naf,
        Conjunct::Aggregate { naf, atom } => aggregate_atom_holds(atom, valuation) != *naf,
        Conjunct::Builtin(b) => eval_builtin(b).unwrap_or(false),
    }
}

fn literal_holds<V: Valuation + ?Sized>(valuation: &V, literal: &Literal) -> bool {
    if literal.atom.args.iter().any(|t| matches!(t, Term::Arith(..))) {
        valuation.holds(&normalize_literal(literal))
    } else {
        valuation.holds(literal)
    }
}

pub fn satisfies_body<V: Valuation + ?Sized>(valuation: &V, body: &[Conjunct]) -> bool {
    body.iter().all(|c| satisfies_conjunct(valuation, c))
}

pub fn satisfies_head<V: Valuation + ?Sized>(valuation: &V, head: &[Literal]) -> bool {
    head.iter().any(|l| valuation.holds(&normalize_literal(l)))
}

pub fn satisfies_rule<V: Valuation + ?Sized>(valuation: &V, rule: &NdlpRule) -> bool {
    !satisfies_body(valuation, &rule.body) || satisfies_head(valuation, &rule.head)
}
