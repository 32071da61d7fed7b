//! Abstract syntax and value types shared by the parser, grounder,
//! evaluator, solver and preference engine.
//!
//! Sets appear in two shapes: [`SymbolicSet`] (`{ F : C }`, as written) and
//! [`GroundSet`] (a list of instantiated `<F_G | C_G>` pairs). A ground pair
//! may still mention *placeholder* variables: locals that are bound by the
//! guard of an equality aggregate atom in the same pair and only receive a
//! value when the pair is evaluated against an interpretation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A logic variable. Names start with an uppercase letter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: &str) -> Self {
        Variable(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Numbers order before symbols; numbers compare numerically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constant {
    Number(Rational),
    Symbol(Symbol),
}

impl Constant {
    pub fn symbol(name: &str) -> Self {
        Constant::Symbol(Symbol::new(name))
    }

    pub fn int(value: i64) -> Self {
        Constant::Number(crate::rational::from_int(value))
    }

    pub fn as_number(&self) -> Option<&Rational> {
        match self {
            Constant::Number(n) => Some(n),
            Constant::Symbol(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            ArithOp::Mul | ArithOp::Div => 2,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }
}

/// Terms are constants, variables or arithmetic over terms. There are no
/// uninterpreted function symbols, which keeps the Herbrand universe finite.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(Constant),
    Var(Variable),
    Arith(ArithOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Variable::new(name))
    }

    pub fn symbol(name: &str) -> Self {
        Term::Const(Constant::symbol(name))
    }

    pub fn int(value: i64) -> Self {
        Term::Const(Constant::int(value))
    }

    pub fn arith(op: ArithOp, left: Term, right: Term) -> Self {
        Term::Arith(op, Box::new(left), Box::new(right))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Const(_) => true,
            Term::Var(_) => false,
            Term::Arith(_, l, r) => l.is_ground() && r.is_ground(),
        }
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Term::Const(_) => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Arith(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        match self {
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::Var(_) => {}
            Term::Arith(_, l, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
        }
    }

    pub fn substitute(&self, theta: &Substitution) -> Term {
        match self {
            Term::Const(_) => self.clone(),
            Term::Var(v) => match theta.get(v) {
                Some(c) => Term::Const(c.clone()),
                None => self.clone(),
            },
            Term::Arith(op, l, r) => Term::arith(*op, l.substitute(theta), r.substitute(theta)),
        }
    }
}

pub type Substitution = BTreeMap<Variable, Constant>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom { predicate: Symbol::new(predicate), args }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn substitute(&self, theta: &Substitution) -> Atom {
        Atom { predicate: self.predicate.clone(), args: self.args.iter().map(|t| t.substitute(theta)).collect() }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        for arg in &self.args {
            arg.collect_vars(out);
        }
    }
}

/// An atom or its classical negation (`-p(a)`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub negated: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn positive(atom: Atom) -> Self {
        Literal { negated: false, atom }
    }

    pub fn complement(&self) -> Literal {
        Literal { negated: !self.negated, atom: self.atom.clone() }
    }

    pub fn substitute(&self, theta: &Substitution) -> Literal {
        Literal { negated: self.negated, atom: self.atom.substitute(theta) }
    }

    pub fn predicate(&self) -> &Symbol {
        &self.atom.predicate
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Comparison {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl Comparison {
    pub fn token(self) -> &'static str {
        match self {
            Comparison::Eq => "=",
            Comparison::Ne => "!=",
            Comparison::Lt => "<",
            Comparison::Gt => ">",
            Comparison::Le => "<=",
            Comparison::Ge => ">=",
        }
    }

    pub fn holds(self, ordering: Ordering) -> bool {
        match self {
            Comparison::Eq => ordering == Ordering::Equal,
            Comparison::Ne => ordering != Ordering::Equal,
            Comparison::Lt => ordering == Ordering::Less,
            Comparison::Gt => ordering == Ordering::Greater,
            Comparison::Le => ordering != Ordering::Greater,
            Comparison::Ge => ordering != Ordering::Less,
        }
    }

    pub fn is_order(self) -> bool {
        !matches!(self, Comparison::Eq | Comparison::Ne)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BuiltinAtom {
    pub left: Term,
    pub cmp: Comparison,
    pub right: Term,
}

impl BuiltinAtom {
    pub fn new(left: Term, cmp: Comparison, right: Term) -> Self {
        BuiltinAtom { left, cmp, right }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AggregateFunction {
    Min,
    Max,
    Count,
    Sum,
    Times,
}

impl AggregateFunction {
    pub fn token(self) -> &'static str {
        match self {
            AggregateFunction::Min => "#min",
            AggregateFunction::Max => "#max",
            AggregateFunction::Count => "#count",
            AggregateFunction::Sum => "#sum",
            AggregateFunction::Times => "#times",
        }
    }
}

/// `{ element : condition }` before instantiation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolicSet {
    pub element: Term,
    pub condition: Vec<Conjunct>,
}

/// One instantiated `<element | condition>` pair.
///
/// `placeholders` lists, in binding order, the variables of this pair that
/// are bound by the guard of an equality aggregate atom in `condition`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundPair {
    pub element: Term,
    pub condition: Vec<Conjunct>,
    pub placeholders: Vec<Variable>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundSet {
    pub pairs: Vec<GroundPair>,
}

impl GroundSet {
    /// Total number of pairs at this level and in every nested ground set.
    pub fn total_pairs(&self) -> u64 {
        self.pairs
            .iter()
            .map(|p| 1 + p.condition.iter().map(Conjunct::nested_pairs).sum::<u64>())
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetTerm {
    Symbolic(SymbolicSet),
    Ground(GroundSet),
}

impl SetTerm {
    pub fn substitute(&self, theta: &Substitution) -> SetTerm {
        match self {
            SetTerm::Symbolic(s) => SetTerm::Symbolic(SymbolicSet {
                element: s.element.substitute(theta),
                condition: s.condition.iter().map(|c| c.substitute(theta)).collect(),
            }),
            SetTerm::Ground(g) => SetTerm::Ground(GroundSet {
                pairs: g
                    .pairs
                    .iter()
                    .map(|p| GroundPair {
                        element: p.element.substitute(theta),
                        condition: p.condition.iter().map(|c| c.substitute(theta)).collect(),
                        placeholders: p.placeholders.iter().filter(|v| !theta.contains_key(*v)).cloned().collect(),
                    })
                    .collect(),
            }),
        }
    }

    /// Every variable occurring anywhere inside the set, at any depth.
    pub fn collect_all_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            SetTerm::Symbolic(s) => {
                s.element.collect_vars(out);
                for c in &s.condition {
                    c.collect_all_vars(out);
                }
            }
            SetTerm::Ground(g) => {
                for p in &g.pairs {
                    p.element.collect_vars(out);
                    for c in &p.condition {
                        c.collect_all_vars(out);
                    }
                }
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, SetTerm::Ground(_))
    }
}

/// `f(S) cmp guard`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AggregateAtom {
    pub fun: AggregateFunction,
    pub set: SetTerm,
    pub cmp: Comparison,
    pub guard: Term,
}

impl AggregateAtom {
    pub fn substitute(&self, theta: &Substitution) -> AggregateAtom {
        AggregateAtom { fun: self.fun, set: self.set.substitute(theta), cmp: self.cmp, guard: self.guard.substitute(theta) }
    }
}

/// One element of a rule body or set condition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Conjunct {
    Literal { naf: bool, literal: Literal },
    Aggregate { naf: bool, atom: AggregateAtom },
    Builtin(BuiltinAtom),
}

impl Conjunct {
    pub fn pos(literal: Literal) -> Self {
        Conjunct::Literal { naf: false, literal }
    }

    pub fn substitute(&self, theta: &Substitution) -> Conjunct {
        match self {
            Conjunct::Literal { naf, literal } => Conjunct::Literal { naf: *naf, literal: literal.substitute(theta) },
            Conjunct::Aggregate { naf, atom } => Conjunct::Aggregate { naf: *naf, atom: atom.substitute(theta) },
            Conjunct::Builtin(b) => Conjunct::Builtin(BuiltinAtom {
                left: b.left.substitute(theta),
                cmp: b.cmp,
                right: b.right.substitute(theta),
            }),
        }
    }

    /// Variables visible at this conjunct's own level: literal arguments,
    /// builtin sides and aggregate guards, but not the inside of sets.
    pub fn collect_level_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Conjunct::Literal { literal, .. } => literal.atom.collect_vars(out),
            Conjunct::Aggregate { atom, .. } => atom.guard.collect_vars(out),
            Conjunct::Builtin(b) => {
                b.left.collect_vars(out);
                b.right.collect_vars(out);
            }
        }
    }

    pub fn collect_all_vars(&self, out: &mut BTreeSet<Variable>) {
        self.collect_level_vars(out);
        if let Conjunct::Aggregate { atom, .. } = self {
            atom.set.collect_all_vars(out);
        }
    }

    fn nested_pairs(&self) -> u64 {
        match self {
            Conjunct::Aggregate { atom: AggregateAtom { set: SetTerm::Ground(g), .. }, .. } => g.total_pairs(),
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Maximize,
    Minimize,
}

/// `#maximize(f{...})` / `#minimize(f{...})`. `abbreviated` records the
/// singleton shorthand `#minimize{ F : C }`, which stands for `#sum`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OptimizationAggregate {
    pub direction: Direction,
    pub fun: AggregateFunction,
    pub set: SetTerm,
    pub abbreviated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BooleanCombination {
    Literal { naf: bool, literal: Literal },
    Aggregate { naf: bool, atom: AggregateAtom },
    Optimize(OptimizationAggregate),
    And(Vec<BooleanCombination>),
    Or(Vec<BooleanCombination>),
}

impl BooleanCombination {
    pub fn substitute(&self, theta: &Substitution) -> BooleanCombination {
        match self {
            BooleanCombination::Literal { naf, literal } => {
                BooleanCombination::Literal { naf: *naf, literal: literal.substitute(theta) }
            }
            BooleanCombination::Aggregate { naf, atom } => {
                BooleanCombination::Aggregate { naf: *naf, atom: atom.substitute(theta) }
            }
            BooleanCombination::Optimize(o) => BooleanCombination::Optimize(OptimizationAggregate {
                direction: o.direction,
                fun: o.fun,
                set: o.set.substitute(theta),
                abbreviated: o.abbreviated,
            }),
            BooleanCombination::And(xs) => BooleanCombination::And(xs.iter().map(|x| x.substitute(theta)).collect()),
            BooleanCombination::Or(xs) => BooleanCombination::Or(xs.iter().map(|x| x.substitute(theta)).collect()),
        }
    }
}

/// 1-based source position of a rule. Never participates in equality,
/// ordering or hashing, so structurally equal programs compare equal
/// wherever they came from.
#[derive(Clone, Copy, Debug, Default)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RuleSpan(pub Option<SourceSpan>);

impl PartialEq for RuleSpan {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for RuleSpan {}
impl PartialOrd for RuleSpan {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for RuleSpan {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}
impl Hash for RuleSpan {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Display for RuleSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(s) => write!(f, "line {}, column {}", s.line, s.column),
            None => f.write_str("<generated>"),
        }
    }
}

/// `h1 | ... | hk :- body.` An empty head is a constraint.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NdlpRule {
    pub head: Vec<Literal>,
    pub body: Vec<Conjunct>,
    pub span: RuleSpan,
}

impl NdlpRule {
    pub fn new(head: Vec<Literal>, body: Vec<Conjunct>) -> Self {
        NdlpRule { head, body, span: RuleSpan::default() }
    }

    pub fn fact(literal: Literal) -> Self {
        NdlpRule::new(vec![literal], Vec::new())
    }

    pub fn is_fact(&self) -> bool {
        self.head.len() == 1 && self.body.is_empty()
    }

    pub fn substitute(&self, theta: &Substitution) -> NdlpRule {
        NdlpRule {
            head: self.head.iter().map(|l| l.substitute(theta)).collect(),
            body: self.body.iter().map(|c| c.substitute(theta)).collect(),
            span: self.span,
        }
    }

    /// Variables outside every aggregate set: head arguments, body literal
    /// arguments, builtins and aggregate guards.
    pub fn rule_level_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        for h in &self.head {
            h.atom.collect_vars(&mut out);
        }
        for c in &self.body {
            c.collect_level_vars(&mut out);
        }
        out
    }
}

/// `C1 >> C2 >> ... >> Ck :- body.`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PreferenceRule {
    pub head: Vec<BooleanCombination>,
    pub body: Vec<Conjunct>,
    pub span: RuleSpan,
}

impl PreferenceRule {
    pub fn new(head: Vec<BooleanCombination>, body: Vec<Conjunct>) -> Self {
        PreferenceRule { head, body, span: RuleSpan::default() }
    }

    pub fn substitute(&self, theta: &Substitution) -> PreferenceRule {
        PreferenceRule {
            head: self.head.iter().map(|c| c.substitute(theta)).collect(),
            body: self.body.iter().map(|c| c.substitute(theta)).collect(),
            span: self.span,
        }
    }
}

/// Generator rules plus preference rules.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub gen_rules: Vec<NdlpRule>,
    pub pref_rules: Vec<PreferenceRule>,
}

impl Program {
    pub fn is_empty(&self) -> bool {
        self.gen_rules.is_empty() && self.pref_rules.is_empty()
    }

    /// Predicates that occur in the head of some generator rule with a
    /// non-empty body.
    pub fn rule_defined_predicates(&self) -> BTreeSet<Symbol> {
        self.gen_rules
            .iter()
            .filter(|r| !r.body.is_empty())
            .flat_map(|r| r.head.iter().map(|l| l.predicate().clone()))
            .collect()
    }
}

/// Every constant symbol and number occurring anywhere in the program.
pub fn herbrand_universe(program: &Program) -> BTreeSet<Constant> {
    let mut out = BTreeSet::new();
    for rule in &program.gen_rules {
        for h in &rule.head {
            collect_atom_constants(&h.atom, &mut out);
        }
        for c in &rule.body {
            collect_conjunct_constants(c, &mut out);
        }
    }
    for rule in &program.pref_rules {
        for c in &rule.head {
            collect_combination_constants(c, &mut out);
        }
        for c in &rule.body {
            collect_conjunct_constants(c, &mut out);
        }
    }
    out
}

fn collect_atom_constants(atom: &Atom, out: &mut BTreeSet<Constant>) {
    for t in &atom.args {
        t.collect_constants(out);
    }
}

fn collect_set_constants(set: &SetTerm, out: &mut BTreeSet<Constant>) {
    match set {
        SetTerm::Symbolic(s) => {
            s.element.collect_constants(out);
            for c in &s.condition {
                collect_conjunct_constants(c, out);
            }
        }
        SetTerm::Ground(g) => {
            for p in &g.pairs {
                p.element.collect_constants(out);
                for c in &p.condition {
                    collect_conjunct_constants(c, out);
                }
            }
        }
    }
}

fn collect_conjunct_constants(c: &Conjunct, out: &mut BTreeSet<Constant>) {
    match c {
        Conjunct::Literal { literal, .. } => collect_atom_constants(&literal.atom, out),
        Conjunct::Aggregate { atom, .. } => {
            atom.guard.collect_constants(out);
            collect_set_constants(&atom.set, out);
        }
        Conjunct::Builtin(b) => {
            b.left.collect_constants(out);
            b.right.collect_constants(out);
        }
    }
}

fn collect_combination_constants(c: &BooleanCombination, out: &mut BTreeSet<Constant>) {
    match c {
        BooleanCombination::Literal { literal, .. } => collect_atom_constants(&literal.atom, out),
        BooleanCombination::Aggregate { atom, .. } => {
            atom.guard.collect_constants(out);
            collect_set_constants(&atom.set, out);
        }
        BooleanCombination::Optimize(o) => collect_set_constants(&o.set, out),
        BooleanCombination::And(xs) | BooleanCombination::Or(xs) => {
            for x in xs {
                collect_combination_constants(x, out);
            }
        }
    }
}

/// A consistent set of ground literals.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation {
    literals: BTreeSet<Literal>,
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, literal: &Literal) -> bool {
        self.literals.contains(literal)
    }

    /// Inserts a literal; returns `false` (leaving `self` unchanged) if its
    /// complement is already present.
    pub fn insert(&mut self, literal: Literal) -> bool {
        if self.literals.contains(&literal.complement()) {
            return false;
        }
        self.literals.insert(literal);
        true
    }

    pub fn remove(&mut self, literal: &Literal) -> bool {
        self.literals.remove(literal)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.literals.iter()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.literals.is_subset(&other.literals)
    }

    pub fn union(&self, other: &Interpretation) -> Interpretation {
        Interpretation { literals: self.literals.union(&other.literals).cloned().collect() }
    }

    pub fn is_consistent(&self) -> bool {
        self.literals.iter().all(|l| !l.negated || !self.literals.contains(&l.complement()))
    }

    /// Literals whose predicate is in `keep`.
    pub fn project(&self, keep: &BTreeSet<Symbol>) -> Interpretation {
        Interpretation { literals: self.literals.iter().filter(|l| keep.contains(l.predicate())).cloned().collect() }
    }

    pub fn with_predicate<'a>(&'a self, predicate: &'a str) -> impl Iterator<Item = &'a Literal> + 'a {
        self.literals.iter().filter(move |l| l.predicate().as_str() == predicate)
    }
}

impl FromIterator<Literal> for Interpretation {
    /// Collects without a consistency check.
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        Interpretation { literals: iter.into_iter().collect() }
    }
}

/// Value of `f(S_I)`: a number, or undefined when `S_I` lies outside the
/// domain of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AggregateValue {
    Defined(Rational),
    Undefined,
}

impl AggregateValue {
    pub fn defined(&self) -> Option<&Rational> {
        match self {
            AggregateValue::Defined(v) => Some(v),
            AggregateValue::Undefined => None,
        }
    }
}

/// Satisfaction degree of a preference rule: the least satisfied head index
/// (1-based), or irrelevance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Degree {
    Index(usize),
    Irrelevant,
}

impl Degree {
    /// Rank on the degree lattice: `Index(1) < Index(2) < ... < Irrelevant`.
    pub fn rank(self) -> usize {
        match self {
            Degree::Index(i) => i,
            Degree::Irrelevant => usize::MAX,
        }
    }
}
