//! Ground instantiation of programs.
//!
//! Two modes share the same scoping rules:
//!
//! * [`GroundingMode::Naive`] substitutes every enumerated variable with every
//!   universe constant, exactly as the definitions read. Pairs and rules are
//!   kept even when their conditions can never hold.
//! * [`GroundingMode::Relevant`] (default) binds variables by joining positive
//!   literals against an over-approximation of the atoms any answer set can
//!   contain, and drops pairs and rules with a positive literal outside it
//!   or a false ground builtin. Variables no literal binds still range over
//!   the universe.
//!
//! Rules with deferred variables (see [`scope`]) are kept as [`Family`]
//! values and instantiated against interpretations by the solver.

pub mod scope;

use std::cell::Cell;
use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::evaluator::{self, normalize_literal, Valuation};
use crate::model::*;
use scope::{analyse, set_scope, Analysis};

pub const DEFAULT_GROUND_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroundingMode {
    Naive,
    #[default]
    Relevant,
}

#[derive(Debug, Clone, Copy)]
pub struct GroundingConfig {
    pub mode: GroundingMode,
    /// Maximum number of ground pairs plus ground rules.
    pub cap: u64,
}

impl Default for GroundingConfig {
    fn default() -> Self {
        GroundingConfig { mode: GroundingMode::Relevant, cap: DEFAULT_GROUND_CAP }
    }
}

#[derive(Debug, Clone, Error)]
pub enum GroundError {
    #[error("rule at {span}: grounding exceeds the cap of {cap} ground pairs and rules")]
    CapExceeded { span: RuleSpan, cap: u64 },
    #[error("rule at {span}: {message}")]
    Unsupported { span: RuleSpan, message: String },
}

/// A generator rule whose `deferred` variables are bound per interpretation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Family {
    pub rule: NdlpRule,
    pub deferred: Vec<Variable>,
}

impl Family {
    /// Every instance whose deferred variables take values from `interp`:
    /// positive literals are matched against it and equality guards take the
    /// aggregate's value in it.
    pub fn instantiate(&self, interp: &Interpretation) -> Vec<NdlpRule> {
        let deferred: BTreeSet<&Variable> = self.deferred.iter().collect();
        let mentions_deferred = |atom: &Atom| {
            let mut vs = BTreeSet::new();
            atom.collect_vars(&mut vs);
            vs.iter().any(|v| deferred.contains(v))
        };
        let mut subs = vec![Substitution::new()];
        for c in &self.rule.body {
            if let Conjunct::Literal { naf: false, literal } = c {
                if !mentions_deferred(&literal.atom) {
                    continue;
                }
                let mut next = Vec::new();
                for theta in &subs {
                    let pattern = literal.substitute(theta);
                    for candidate in interp.with_predicate(pattern.predicate().as_str()) {
                        if let Some(ext) = match_literal(&pattern, candidate, theta) {
                            next.push(ext);
                        }
                    }
                }
                subs = next;
            }
        }
        for c in &self.rule.body {
            let Some(v) = scope::binding_guard(c) else { continue };
            if !deferred.contains(v) {
                continue;
            }
            let Conjunct::Aggregate { atom, .. } = c else { unreachable!() };
            subs.retain_mut(|theta| {
                if theta.contains_key(v) {
                    return true;
                }
                let SetTerm::Ground(set) = atom.set.substitute(theta) else { return false };
                match evaluator::eval_aggregate(atom.fun, &set, interp) {
                    AggregateValue::Defined(x) => {
                        theta.insert(v.clone(), Constant::Number(x));
                        true
                    }
                    AggregateValue::Undefined => false,
                }
            });
        }
        subs.retain(|theta| self.deferred.iter().all(|v| theta.contains_key(v)));
        subs.sort();
        subs.dedup();
        subs.iter().map(|theta| normalize_rule(&self.rule.substitute(theta))).collect()
    }
}

/// Extends `theta` so that `pattern` equals `target`, binding plain
/// variables; arguments with unbound arithmetic are not constrained.
fn match_literal(pattern: &Literal, target: &Literal, theta: &Substitution) -> Option<Substitution> {
    if pattern.negated != target.negated || pattern.atom.args.len() != target.atom.args.len() {
        return None;
    }
    let mut ext = theta.clone();
    for (p, t) in pattern.atom.args.iter().zip(&target.atom.args) {
        let p = p.substitute(&ext);
        match &p {
            Term::Var(v) => {
                let Term::Const(c) = t else { return None };
                ext.insert(v.clone(), c.clone());
            }
            _ if p.is_ground() && evaluator::normalize_term(&p) != *t => return None,
            _ => {}
        }
    }
    Some(ext)
}

fn normalize_rule(rule: &NdlpRule) -> NdlpRule {
    NdlpRule {
        head: rule.head.iter().map(normalize_literal).collect(),
        body: rule.body.iter().map(normalize_conjunct).collect(),
        span: rule.span,
    }
}

fn normalize_conjunct(c: &Conjunct) -> Conjunct {
    match c {
        Conjunct::Literal { naf, literal } => Conjunct::Literal { naf: *naf, literal: normalize_literal(literal) },
        other => other.clone(),
    }
}

#[derive(Debug, Clone, Default)]
pub struct GroundProgram {
    /// Variable-free generator rules.
    pub gen_rules: Vec<NdlpRule>,
    pub families: Vec<Family>,
    pub pref_rules: Vec<PreferenceRule>,
    /// Over-approximation of the lower-part atoms of every answer set.
    pub possible: BTreeSet<Literal>,
    /// Predicates defined through aggregate values.
    pub upper: BTreeSet<Symbol>,
    pub universe: BTreeSet<Constant>,
}

impl GroundProgram {
    pub fn is_upper(&self, rule: &NdlpRule) -> bool {
        let mut preds = BTreeSet::new();
        rule.body.iter().for_each(|c| scope::collect_predicates(c, &mut preds));
        preds.extend(rule.head.iter().map(|l| l.predicate().clone()));
        preds.iter().any(|p| self.upper.contains(p))
    }

    /// Ground rules plus every family instance drawn from `interp`.
    pub fn rules_for(&self, interp: &Interpretation) -> Vec<NdlpRule> {
        let mut rules = self.gen_rules.clone();
        for f in &self.families {
            rules.extend(f.instantiate(interp));
        }
        rules
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.gen_rules {
            out.push_str(&format!("{r}\n"));
        }
        for f in &self.families {
            out.push_str(&format!("{}\n", f.rule));
        }
        for r in &self.pref_rules {
            out.push_str(&format!("{r}\n"));
        }
        out
    }
}

/// Indexed set of possible literals. Literals over predicates outside
/// `covered` are unknown and never used to bind or prune.
#[derive(Debug, Clone, Default)]
struct Possible {
    by_key: HashMap<(Symbol, bool, usize), Vec<Literal>>,
    all: HashSet<Literal>,
    covered: BTreeSet<Symbol>,
}

impl Possible {
    fn new(covered: BTreeSet<Symbol>) -> Self {
        Possible { covered, ..Default::default() }
    }

    fn insert(&mut self, l: Literal) -> bool {
        if self.all.contains(&l) {
            return false;
        }
        let key = (l.predicate().clone(), l.negated, l.atom.args.len());
        self.by_key.entry(key).or_default().push(l.clone());
        self.all.insert(l);
        true
    }

    fn candidates(&self, l: &Literal) -> &[Literal] {
        let key = (l.predicate().clone(), l.negated, l.atom.args.len());
        self.by_key.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    fn covers(&self, l: &Literal) -> bool {
        self.covered.contains(l.predicate())
    }

    /// `false` only for a covered ground literal that is impossible.
    fn admits(&self, l: &Literal) -> bool {
        !self.covers(l) || !l.atom.is_ground() || self.all.contains(&normalize_literal(l))
    }
}

impl Valuation for Possible {
    fn holds(&self, literal: &Literal) -> bool {
        self.all.contains(literal)
    }
}

struct Budget {
    used: Cell<u64>,
    cap: u64,
}

impl Budget {
    fn spend(&self, n: u64, span: RuleSpan) -> Result<(), GroundError> {
        let used = self.used.get().saturating_add(n);
        self.used.set(used);
        if used > self.cap {
            return Err(GroundError::CapExceeded { span, cap: self.cap });
        }
        Ok(())
    }
}

/// Grounds one program. Construction analyses the program and computes the
/// possible-atom over-approximation.
pub struct Grounder<'p> {
    program: &'p Program,
    config: GroundingConfig,
    universe: Vec<Constant>,
    analysis: Analysis,
    possible: Possible,
}

struct Ctx<'a> {
    universe: &'a [Constant],
    relevant: Option<&'a Possible>,
    budget: &'a Budget,
    span: RuleSpan,
}

impl<'p> Grounder<'p> {
    pub fn new(program: &'p Program, config: GroundingConfig) -> Result<Self, GroundError> {
        let analysis = analyse(program)?;
        let universe: Vec<Constant> = herbrand_universe(program).into_iter().collect();
        let mut grounder = Grounder { program, config, universe, analysis, possible: Possible::default() };
        grounder.possible = grounder.compute_possible()?;
        Ok(grounder)
    }

    pub fn universe(&self) -> &[Constant] {
        &self.universe
    }

    fn lower_predicates(&self) -> BTreeSet<Symbol> {
        let mut preds = BTreeSet::new();
        for r in &self.program.gen_rules {
            preds.extend(r.head.iter().map(|l| l.predicate().clone()));
            r.body.iter().for_each(|c| scope::collect_predicates(c, &mut preds));
        }
        for r in &self.program.pref_rules {
            r.body.iter().for_each(|c| scope::collect_predicates(c, &mut preds));
            r.head.iter().for_each(|c| combination_predicates(c, &mut preds));
        }
        preds.retain(|p| !self.analysis.upper.contains(p));
        preds
    }

    /// Least fixpoint of the lower rules with positive literals required,
    /// builtins decided exactly and every other conjunct assumed true.
    fn compute_possible(&self) -> Result<Possible, GroundError> {
        let mut possible = Possible::new(self.lower_predicates());
        let budget = Budget { used: Cell::new(0), cap: self.config.cap };
        loop {
            let mut derived = Vec::new();
            for (i, rule) in self.program.gen_rules.iter().enumerate() {
                if self.analysis.is_upper[i] {
                    continue;
                }
                let ctx = Ctx { universe: &self.universe, relevant: Some(&possible), budget: &budget, span: rule.span };
                let globals: Vec<Variable> = rule.rule_level_vars().into_iter().collect();
                for theta in ctx.bindings(&rule.body, &globals, &Substitution::new())? {
                    let body_ok = rule.body.iter().all(|c| match c {
                        Conjunct::Literal { naf: false, literal } => {
                            possible.all.contains(&normalize_literal(&literal.substitute(&theta)))
                        }
                        Conjunct::Builtin(_) => evaluator::satisfies_conjunct(&possible, &c.substitute(&theta)),
                        _ => true,
                    });
                    if body_ok {
                        derived.extend(rule.head.iter().map(|h| (normalize_literal(&h.substitute(&theta)), rule.span)));
                    }
                }
            }
            let mut changed = false;
            for (l, span) in derived {
                if possible.insert(l) {
                    changed = true;
                    budget.spend(1, span)?;
                }
            }
            if !changed {
                return Ok(possible);
            }
        }
    }

    pub fn possible_atoms(&self) -> BTreeSet<Literal> {
        self.possible.all.iter().cloned().collect()
    }

    fn ctx<'a>(&'a self, possible: &'a Possible, universe: &'a [Constant], budget: &'a Budget, span: RuleSpan) -> Ctx<'a> {
        let relevant = match self.config.mode {
            GroundingMode::Naive => None,
            GroundingMode::Relevant => Some(possible),
        };
        Ctx { universe, relevant, budget, span }
    }

    pub fn ground_generators(&self) -> Result<GroundProgram, GroundError> {
        let budget = Budget { used: Cell::new(0), cap: self.config.cap };
        let mut gen_rules = Vec::new();
        let mut families = Vec::new();
        let mut seen = HashSet::new();
        for (i, rule) in self.program.gen_rules.iter().enumerate() {
            let deferred = &self.analysis.deferred[i];
            let ctx = self.ctx(&self.possible, &self.universe, &budget, rule.span);
            let globals: Vec<Variable> =
                rule.rule_level_vars().into_iter().filter(|v| !deferred.contains(v)).collect();
            let mut bound: BTreeSet<Variable> = globals.iter().cloned().collect();
            bound.extend(deferred.iter().cloned());
            if self.config.mode == GroundingMode::Naive {
                ctx.precheck(&rule.body, globals.len(), &bound)?;
            }
            for theta in ctx.bindings(&rule.body, &globals, &Substitution::new())? {
                let Some(body) = ctx.ground_body(&rule.body, &theta, &bound)? else { continue };
                let head = rule.head.iter().map(|h| normalize_literal(&h.substitute(&theta))).collect();
                let ground = NdlpRule { head, body, span: rule.span };
                if !seen.insert(ground.clone()) {
                    continue;
                }
                budget.spend(1, rule.span)?;
                if deferred.is_empty() {
                    gen_rules.push(ground);
                } else {
                    families.push(Family { rule: ground, deferred: deferred.clone() });
                }
            }
        }
        Ok(GroundProgram {
            gen_rules,
            families,
            pref_rules: Vec::new(),
            possible: self.possible_atoms(),
            upper: self.analysis.upper.clone(),
            universe: self.universe.iter().cloned().collect(),
        })
    }

    /// Grounds the preference rules. Atoms of `answer_sets` extend both the
    /// universe and the possible atoms, so rules may refer to values that
    /// only exist in answer sets.
    pub fn ground_preferences(&self, answer_sets: &[Interpretation]) -> Result<Vec<PreferenceRule>, GroundError> {
        let mut universe: BTreeSet<Constant> = self.universe.iter().cloned().collect();
        let mut possible = self.possible.clone();
        for i in answer_sets {
            for l in i.iter() {
                for t in &l.atom.args {
                    t.collect_constants(&mut universe);
                }
                possible.covered.insert(l.predicate().clone());
                possible.insert(l.clone());
            }
        }
        if !answer_sets.is_empty() {
            possible.covered.extend(self.analysis.upper.iter().cloned());
        }
        let universe: Vec<Constant> = universe.into_iter().collect();
        let budget = Budget { used: Cell::new(0), cap: self.config.cap };
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for rule in &self.program.pref_rules {
            let ctx = self.ctx(&possible, &universe, &budget, rule.span);
            let mut level = BTreeSet::new();
            rule.body.iter().for_each(|c| c.collect_level_vars(&mut level));
            rule.head.iter().for_each(|c| combination_level_vars(c, &mut level));
            let globals: Vec<Variable> = level.iter().cloned().collect();
            for theta in ctx.bindings(&rule.body, &globals, &Substitution::new())? {
                let Some(body) = ctx.ground_body(&rule.body, &theta, &level)? else { continue };
                let head = rule
                    .head
                    .iter()
                    .map(|c| ctx.ground_combination(&c.substitute(&theta), &level))
                    .collect::<Result<Vec<_>, _>>()?;
                let ground = PreferenceRule { head, body, span: rule.span };
                if seen.insert(ground.clone()) {
                    budget.spend(1, rule.span)?;
                    out.push(ground);
                }
            }
        }
        Ok(out)
    }
}

impl Ctx<'_> {
    /// Substitutions for `vars` in lexicographic order. Relevant mode joins
    /// covered positive literals against the possible atoms first.
    fn bindings(
        &self,
        conjuncts: &[Conjunct],
        vars: &[Variable],
        base: &Substitution,
    ) -> Result<Vec<Substitution>, GroundError> {
        let mut subs = vec![base.clone()];
        if let Some(possible) = self.relevant {
            for c in conjuncts {
                let Conjunct::Literal { naf: false, literal } = c else { continue };
                if !possible.covers(literal) {
                    continue;
                }
                let mut next = Vec::new();
                for theta in &subs {
                    let pattern = literal.substitute(theta);
                    for candidate in possible.candidates(&pattern) {
                        if let Some(ext) = match_literal(&pattern, candidate, theta) {
                            next.push(ext);
                        }
                    }
                    self.budget.spend(0, self.span)?;
                }
                subs = next;
                if subs.is_empty() {
                    return Ok(subs);
                }
            }
        }
        let mut out = Vec::new();
        for theta in subs {
            let open: Vec<&Variable> = vars.iter().filter(|v| !theta.contains_key(*v)).collect();
            self.expand(&theta, &open, &mut out)?;
        }
        if let Some(possible) = self.relevant {
            out.retain(|theta| {
                conjuncts.iter().all(|c| match c {
                    Conjunct::Literal { naf: false, literal } => possible.admits(&literal.substitute(theta)),
                    _ => true,
                })
            });
        }
        for theta in &mut out {
            theta.retain(|v, _| vars.contains(v));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn expand(&self, theta: &Substitution, open: &[&Variable], out: &mut Vec<Substitution>) -> Result<(), GroundError> {
        let Some((first, rest)) = open.split_first() else {
            out.push(theta.clone());
            return Ok(());
        };
        for c in self.universe {
            let mut ext = theta.clone();
            ext.insert((*first).clone(), c.clone());
            self.expand(&ext, rest, out)?;
        }
        if out.len() as u64 > self.budget.cap {
            return Err(GroundError::CapExceeded { span: self.span, cap: self.budget.cap });
        }
        Ok(())
    }

    /// Exact instance count of a naive grounding, checked before any work.
    fn precheck(&self, body: &[Conjunct], globals: usize, bound: &BTreeSet<Variable>) -> Result<(), GroundError> {
        let u = self.universe.len() as f64;
        let mut per_instance = 1.0;
        for c in body {
            if let Conjunct::Aggregate { atom: AggregateAtom { set: SetTerm::Symbolic(s), .. }, .. } = c {
                per_instance += self.precount(s, bound)?;
            }
        }
        let total = u.powi(globals as i32) * per_instance;
        if total > (self.budget.cap - self.budget.used.get().min(self.budget.cap)) as f64 {
            return Err(GroundError::CapExceeded { span: self.span, cap: self.budget.cap });
        }
        Ok(())
    }

    fn precount(&self, set: &SymbolicSet, bound: &BTreeSet<Variable>) -> Result<f64, GroundError> {
        let scope = set_scope(set, bound, self.span)?;
        let mut inner_bound = bound.clone();
        inner_bound.extend(scope.level_vars().cloned());
        let mut per_pair = 1.0;
        for c in &set.condition {
            if let Conjunct::Aggregate { atom: AggregateAtom { set: SetTerm::Symbolic(s), .. }, .. } = c {
                per_pair += self.precount(s, &inner_bound)?;
            }
        }
        Ok((self.universe.len() as f64).powi(scope.locals.len() as i32) * per_pair)
    }

    /// Applies `theta` to a rule body and grounds its sets. `None` drops the
    /// instance: a ground builtin is false or ill-typed, or (relevant mode) a
    /// positive literal is impossible.
    fn ground_body(
        &self,
        body: &[Conjunct],
        theta: &Substitution,
        bound: &BTreeSet<Variable>,
    ) -> Result<Option<Vec<Conjunct>>, GroundError> {
        let mut out = Vec::with_capacity(body.len());
        for c in body {
            let c = c.substitute(theta);
            match &c {
                Conjunct::Builtin(b)
                    if b.left.is_ground() && b.right.is_ground() && !evaluator::eval_builtin(b).unwrap_or(false) =>
                {
                    return Ok(None)
                }
                Conjunct::Literal { naf: false, literal } if self.relevant.is_some_and(|p| !p.admits(literal)) => {
                    return Ok(None)
                }
                _ => {}
            }
            out.push(self.ground_conjunct(c, bound)?);
        }
        Ok(Some(out))
    }

    fn ground_conjunct(&self, c: Conjunct, bound: &BTreeSet<Variable>) -> Result<Conjunct, GroundError> {
        Ok(match c {
            Conjunct::Literal { naf, literal } => Conjunct::Literal { naf, literal: normalize_literal(&literal) },
            Conjunct::Aggregate { naf, atom } => Conjunct::Aggregate { naf, atom: self.ground_aggregate(atom, bound)? },
            b @ Conjunct::Builtin(_) => b,
        })
    }

    fn ground_aggregate(&self, atom: AggregateAtom, bound: &BTreeSet<Variable>) -> Result<AggregateAtom, GroundError> {
        let set = match atom.set {
            SetTerm::Symbolic(s) => SetTerm::Ground(self.ground_set(&s, bound, true)?),
            g => g,
        };
        Ok(AggregateAtom { set, ..atom })
    }

    fn ground_combination(
        &self,
        c: &BooleanCombination,
        bound: &BTreeSet<Variable>,
    ) -> Result<BooleanCombination, GroundError> {
        Ok(match c {
            BooleanCombination::Literal { naf, literal } => {
                BooleanCombination::Literal { naf: *naf, literal: normalize_literal(literal) }
            }
            BooleanCombination::Aggregate { naf, atom } => {
                BooleanCombination::Aggregate { naf: *naf, atom: self.ground_aggregate(atom.clone(), bound)? }
            }
            BooleanCombination::Optimize(o) => {
                let set = match &o.set {
                    SetTerm::Symbolic(s) => SetTerm::Ground(self.ground_set(s, bound, true)?),
                    g => g.clone(),
                };
                BooleanCombination::Optimize(OptimizationAggregate { set, ..o.clone() })
            }
            BooleanCombination::And(xs) => BooleanCombination::And(
                xs.iter().map(|x| self.ground_combination(x, bound)).collect::<Result<_, _>>()?,
            ),
            BooleanCombination::Or(xs) => BooleanCombination::Or(
                xs.iter().map(|x| self.ground_combination(x, bound)).collect::<Result<_, _>>()?,
            ),
        })
    }

    /// Local ground instantiation of `set`, recursing into nested sets when
    /// `deep` holds.
    fn ground_set(&self, set: &SymbolicSet, bound: &BTreeSet<Variable>, deep: bool) -> Result<GroundSet, GroundError> {
        let scope = set_scope(set, bound, self.span)?;
        let mut inner_bound = bound.clone();
        inner_bound.extend(scope.level_vars().cloned());
        let mut pairs = Vec::new();
        'subs: for sigma in self.bindings(&set.condition, &scope.locals, &Substitution::new())? {
            let mut condition = Vec::with_capacity(set.condition.len());
            for c in &set.condition {
                let c = c.substitute(&sigma);
                if let Some(possible) = self.relevant {
                    let impossible = match &c {
                        Conjunct::Literal { naf: false, literal } => !possible.admits(literal),
                        Conjunct::Builtin(b) if b.left.is_ground() && b.right.is_ground() => {
                            !evaluator::eval_builtin(b).unwrap_or(false)
                        }
                        _ => false,
                    };
                    if impossible {
                        continue 'subs;
                    }
                }
                let c = match c {
                    Conjunct::Aggregate { naf, atom } if deep => {
                        Conjunct::Aggregate { naf, atom: self.ground_aggregate(atom, &inner_bound)? }
                    }
                    Conjunct::Literal { naf, literal } => Conjunct::Literal { naf, literal: normalize_literal(&literal) },
                    other => other,
                };
                condition.push(c);
            }
            self.budget.spend(1, self.span)?;
            pairs.push(GroundPair {
                element: set.element.substitute(&sigma),
                condition,
                placeholders: scope.placeholders.clone(),
            });
        }
        Ok(GroundSet { pairs })
    }
}

fn combination_predicates(c: &BooleanCombination, out: &mut BTreeSet<Symbol>) {
    match c {
        BooleanCombination::Literal { literal, .. } => {
            out.insert(literal.predicate().clone());
        }
        BooleanCombination::Aggregate { atom, .. } => scope::collect_set_predicates(&atom.set, out),
        BooleanCombination::Optimize(o) => scope::collect_set_predicates(&o.set, out),
        BooleanCombination::And(xs) | BooleanCombination::Or(xs) => {
            xs.iter().for_each(|x| combination_predicates(x, out))
        }
    }
}

fn combination_level_vars(c: &BooleanCombination, out: &mut BTreeSet<Variable>) {
    match c {
        BooleanCombination::Literal { literal, .. } => literal.atom.collect_vars(out),
        BooleanCombination::Aggregate { atom, .. } => atom.guard.collect_vars(out),
        BooleanCombination::Optimize(_) => {}
        BooleanCombination::And(xs) | BooleanCombination::Or(xs) => {
            xs.iter().for_each(|x| combination_level_vars(x, out))
        }
    }
}

fn naive_ctx<'a>(universe: &'a [Constant], budget: &'a Budget) -> Ctx<'a> {
    Ctx { universe, relevant: None, budget, span: RuleSpan::default() }
}

/// One pair per substitution of the set's enumerated locals by universe
/// constants. Nested sets stay symbolic.
pub fn local_ground_instantiation(set: &SymbolicSet, universe: &BTreeSet<Constant>) -> Result<GroundSet, GroundError> {
    let universe: Vec<Constant> = universe.iter().cloned().collect();
    let budget = Budget { used: Cell::new(0), cap: DEFAULT_GROUND_CAP };
    naive_ctx(&universe, &budget).ground_set(set, &BTreeSet::new(), false)
}

/// Local ground instantiation of `set` and then of every nested set,
/// outermost first.
pub fn ground_symbolic_set(set: &SymbolicSet, universe: &BTreeSet<Constant>) -> Result<GroundSet, GroundError> {
    let universe: Vec<Constant> = universe.iter().cloned().collect();
    let budget = Budget { used: Cell::new(0), cap: DEFAULT_GROUND_CAP };
    naive_ctx(&universe, &budget).ground_set(set, &BTreeSet::new(), true)
}

/// Every instance of a generator rule over `universe`, naive mode, with
/// deferred variables left in place.
pub fn ground_rule(rule: &NdlpRule, universe: &BTreeSet<Constant>) -> Result<Vec<NdlpRule>, GroundError> {
    let program = Program { gen_rules: vec![rule.clone()], pref_rules: Vec::new() };
    let analysis = analyse(&program)?;
    let universe: Vec<Constant> = universe.iter().cloned().collect();
    let budget = Budget { used: Cell::new(0), cap: DEFAULT_GROUND_CAP };
    let ctx = Ctx { span: rule.span, ..naive_ctx(&universe, &budget) };
    let deferred = &analysis.deferred[0];
    let globals: Vec<Variable> = rule.rule_level_vars().into_iter().filter(|v| !deferred.contains(v)).collect();
    let mut bound: BTreeSet<Variable> = globals.iter().cloned().collect();
    bound.extend(deferred.iter().cloned());
    let mut out = Vec::new();
    for theta in ctx.bindings(&rule.body, &globals, &Substitution::new())? {
        if let Some(body) = ctx.ground_body(&rule.body, &theta, &bound)? {
            let head = rule.head.iter().map(|h| normalize_literal(&h.substitute(&theta))).collect();
            let r = NdlpRule { head, body, span: rule.span };
            if !out.contains(&r) {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Grounds generator and preference rules over the program's universe.
pub fn ground_program(program: &Program, config: GroundingConfig) -> Result<GroundProgram, GroundError> {
    let grounder = Grounder::new(program, config)?;
    let mut ground = grounder.ground_generators()?;
    ground.pref_rules = grounder.ground_preferences(&[])?;
    Ok(ground)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    const EXAMPLE: &str = "d(1,1). d(1,2). d(2,1). d(2,2). e(3,1).\n\
        s(X) :- #sum{ A : 1 <= I, I <= 2, #sum{ I+J : d(I,J), 1 <= J, J <= 2 } = A } = X.";

    fn example_set() -> SymbolicSet {
        let p = parse_program(EXAMPLE).unwrap();
        let Conjunct::Aggregate { atom, .. } = &p.gen_rules[5].body[0] else { panic!() };
        let SetTerm::Symbolic(s) = &atom.set else { panic!() };
        s.clone()
    }

    fn universe() -> BTreeSet<Constant> {
        herbrand_universe(&parse_program(EXAMPLE).unwrap())
    }

    #[test]
    fn first_step_keeps_inner_sets_symbolic() {
        let g = local_ground_instantiation(&example_set(), &universe()).unwrap();
        let shown: Vec<String> = g.pairs.iter().map(|p| format!("<{} | {}>", p.element, join(&p.condition))).collect();
        assert_eq!(
            shown,
            [
                "<A | 1 <= 1, 1 <= 2, #sum{ 1 + J : d(1,J), 1 <= J, J <= 2 } = A>",
                "<A | 1 <= 2, 2 <= 2, #sum{ 2 + J : d(2,J), 1 <= J, J <= 2 } = A>",
                "<A | 1 <= 3, 3 <= 2, #sum{ 3 + J : d(3,J), 1 <= J, J <= 2 } = A>",
            ]
        );
        assert!(g.pairs.iter().all(|p| p.placeholders == [Variable::new("A")]));
    }

    fn join(cs: &[Conjunct]) -> String {
        cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
    }

    #[test]
    fn second_step_grounds_inner_sets() {
        let g = ground_symbolic_set(&example_set(), &universe()).unwrap();
        assert_eq!(g.pairs.len(), 3);
        let rendered = SetTerm::Ground(g.clone()).to_string();
        assert!(rendered.contains("<1 + 1 | d(1,1), 1 <= 1, 1 <= 2>"), "{rendered}");
        assert!(rendered.contains("<3 + 3 | d(3,3), 1 <= 3, 3 <= 2>"), "{rendered}");
        for p in &g.pairs {
            let Conjunct::Aggregate { atom, .. } = &p.condition[2] else { panic!() };
            let SetTerm::Ground(inner) = &atom.set else { panic!() };
            assert_eq!(inner.pairs.len(), 3);
        }
        assert_eq!(g.total_pairs(), 12);
    }

    #[test]
    fn example_evaluates_to_twelve() {
        let g = ground_symbolic_set(&example_set(), &universe()).unwrap();
        let i: Interpretation = parse_program("d(1,1). d(1,2). d(2,1). d(2,2). e(3,1).")
            .unwrap()
            .gen_rules
            .iter()
            .map(|r| r.head[0].clone())
            .collect();
        let m = evaluator::multiset_of(&g, &i).unwrap();
        assert_eq!(m, [Constant::int(5), Constant::int(7)].into_iter().collect());
        assert_eq!(
            evaluator::eval_aggregate(AggregateFunction::Sum, &g, &i),
            AggregateValue::Defined(crate::rational::from_int(12))
        );
    }

    #[test]
    fn trivial_sets() {
        let p = parse_program("r :- #count{ X : p(X) } > 0. t :- #sum{ 5 : q } > 0. p(a).").unwrap();
        let set = |i: usize| {
            let Conjunct::Aggregate { atom, .. } = &p.gen_rules[i].body[0] else { panic!() };
            let SetTerm::Symbolic(s) = &atom.set else { panic!() };
            s.clone()
        };
        let u: BTreeSet<Constant> = [Constant::symbol("a")].into_iter().collect();
        let g = local_ground_instantiation(&set(0), &u).unwrap();
        assert_eq!(SetTerm::Ground(g).to_string(), "{ <a | p(a)> }");
        let g = local_ground_instantiation(&set(1), &universe()).unwrap();
        assert_eq!(SetTerm::Ground(g).to_string(), "{ <5 | q> }");
    }

    #[test]
    fn rule_instances_over_universe() {
        let p = parse_program("q(X) :- p(X).").unwrap();
        let u: BTreeSet<Constant> = [Constant::symbol("a"), Constant::symbol("b")].into_iter().collect();
        let rules = ground_rule(&p.gen_rules[0], &u).unwrap();
        let shown: Vec<String> = rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(shown, ["q(a) :- p(a).", "q(b) :- p(b)."]);
    }

    #[test]
    fn example_rule_carries_ground_set() {
        let p = parse_program(EXAMPLE).unwrap();
        let rules = ground_rule(&p.gen_rules[5], &universe()).unwrap();
        assert_eq!(rules.len(), 1);
        let Conjunct::Aggregate { atom, .. } = &rules[0].body[0] else { panic!() };
        assert_eq!(atom.set, SetTerm::Ground(ground_symbolic_set(&example_set(), &universe()).unwrap()));
        assert_eq!(atom.guard, Term::var("X"));
    }

    #[test]
    fn naive_program_grounding_keeps_family() {
        let p = parse_program(EXAMPLE).unwrap();
        let g = ground_program(&p, GroundingConfig { mode: GroundingMode::Naive, ..Default::default() }).unwrap();
        assert_eq!(g.gen_rules.len(), 5);
        assert_eq!(g.families.len(), 1);
        assert_eq!(g.families[0].deferred, [Variable::new("X")]);
        let i: Interpretation = g.gen_rules.iter().map(|r| r.head[0].clone()).collect();
        let inst = g.families[0].instantiate(&i);
        assert_eq!(inst.len(), 1);
        assert_eq!(inst[0].head[0].to_string(), "s(12)");
    }

    #[test]
    fn grounding_is_idempotent_on_ground_programs() {
        let p = parse_program("a | b. c :- a, not b. :- c, d.").unwrap();
        let g = ground_program(&p, GroundingConfig { mode: GroundingMode::Naive, ..Default::default() }).unwrap();
        assert_eq!(g.gen_rules, p.gen_rules);
    }

    #[test]
    fn relevant_mode_drops_impossible_and_false_pairs() {
        let p = parse_program(EXAMPLE).unwrap();
        let g = ground_program(&p, GroundingConfig::default()).unwrap();
        let Conjunct::Aggregate { atom, .. } = &g.families[0].rule.body[0] else { panic!() };
        let SetTerm::Ground(set) = &atom.set else { panic!() };
        assert_eq!(set.total_pairs(), 2 + 4);
    }

    #[test]
    fn relevant_joins_bind_rule_variables() {
        let p = parse_program("index(0,X) :- start(X). start(a). vertex(a). vertex(b).").unwrap();
        let g = ground_program(&p, GroundingConfig::default()).unwrap();
        let shown: Vec<String> = g.gen_rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(shown, ["index(0,a) :- start(a).", "start(a).", "vertex(a).", "vertex(b)."]);
        let naive = ground_program(&p, GroundingConfig { mode: GroundingMode::Naive, ..Default::default() }).unwrap();
        assert_eq!(naive.gen_rules.len(), 3 + 3);
    }

    #[test]
    fn cap_is_enforced_with_span() {
        let p = parse_program("p(1). p(2). p(3).\nq(X,Y,Z) :- p(X), p(Y), p(Z).").unwrap();
        let err = ground_program(&p, GroundingConfig { mode: GroundingMode::Naive, cap: 10 }).unwrap_err();
        match err {
            GroundError::CapExceeded { span, cap } => {
                assert_eq!(cap, 10);
                assert_eq!(span.0.unwrap().line, 2);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn false_builtins_drop_rules() {
        let p = parse_program("n(1). n(2). lt(X,Y) :- n(X), n(Y), X < Y.").unwrap();
        let g = ground_program(&p, GroundingConfig { mode: GroundingMode::Naive, ..Default::default() }).unwrap();
        let shown: Vec<String> = g.gen_rules.iter().skip(2).map(|r| r.to_string()).collect();
        assert_eq!(shown, ["lt(1,2) :- n(1), n(2), 1 < 2."]);
    }

    #[test]
    fn possible_atoms_over_approximate() {
        let p = parse_program("a | b. c :- a. d :- c, not a. e :- f.").unwrap();
        let g = ground_program(&p, GroundingConfig::default()).unwrap();
        let names: Vec<String> = g.possible.iter().map(|l| l.to_string()).collect();
        assert_eq!(names, ["a", "b", "c", "d"]);
    }
}
