//! Backtracking search over a table of unknown atoms.
//!
//! Rules are compiled against a fixed interpretation: literals outside the
//! table are decided by it, so only table atoms remain. Aggregates stay
//! undecided until every table atom they depend on is assigned.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use crate::evaluator::{self, normalize_literal, Valuation};
use crate::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Candidates for answer sets: adds support propagation and keeps the
    /// table consistent under classical negation.
    AnswerSet,
    /// Models of the rules that are proper subsets of the table.
    ProperSubmodel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimedOut;

#[derive(Debug, Clone)]
enum Item {
    Pos(usize),
    Neg(usize),
    Agg(Conjunct, Vec<usize>),
}

#[derive(Debug, Clone)]
struct CompiledRule {
    head: Vec<usize>,
    body: Vec<Item>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    True,
    False,
    Unknown,
}

pub struct Engine<'a> {
    atoms: Vec<Literal>,
    index: HashMap<Literal, usize>,
    fixed: &'a Interpretation,
    rules: Vec<CompiledRule>,
    occurs: Vec<Vec<usize>>,
    heads_of: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    queued: Vec<bool>,
    mode: Mode,
    deadline: Option<Instant>,
    contradiction: bool,
}

impl Valuation for Engine<'_> {
    fn holds(&self, literal: &Literal) -> bool {
        match self.index.get(literal) {
            Some(&id) => self.value[id] == Some(true),
            None => self.fixed.contains(literal),
        }
    }
}

impl<'a> Engine<'a> {
    pub fn new(
        rules: &[NdlpRule],
        table: &BTreeSet<Literal>,
        fixed: &'a Interpretation,
        mode: Mode,
        deadline: Option<Instant>,
    ) -> Self {
        let atoms: Vec<Literal> = table.iter().filter(|l| !fixed.contains(l)).cloned().collect();
        let index: HashMap<Literal, usize> = atoms.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let n = atoms.len();
        let mut engine = Engine {
            atoms,
            index,
            fixed,
            rules: Vec::new(),
            occurs: vec![Vec::new(); n],
            heads_of: vec![Vec::new(); n],
            value: vec![None; n],
            trail: Vec::new(),
            queue: Vec::new(),
            queued: Vec::new(),
            mode,
            deadline,
            contradiction: false,
        };
        for r in rules {
            if let Some(c) = engine.compile(r) {
                engine.add(c);
            }
        }
        if mode == Mode::AnswerSet {
            engine.add_consistency();
        }
        engine.queued = vec![false; engine.rules.len()];
        engine
    }

    fn add(&mut self, rule: CompiledRule) {
        if rule.head.is_empty() && rule.body.is_empty() {
            self.contradiction = true;
            return;
        }
        let id = self.rules.len();
        let mut touched = BTreeSet::new();
        for &h in &rule.head {
            self.heads_of[h].push(id);
            touched.insert(h);
        }
        for item in &rule.body {
            match item {
                Item::Pos(a) | Item::Neg(a) => {
                    touched.insert(*a);
                }
                Item::Agg(_, deps) => touched.extend(deps.iter().copied()),
            }
        }
        for a in touched {
            self.occurs[a].push(id);
        }
        self.rules.push(rule);
    }

    fn compile(&self, rule: &NdlpRule) -> Option<CompiledRule> {
        let mut head = Vec::new();
        for l in &rule.head {
            let l = normalize_literal(l);
            match self.index.get(&l) {
                Some(&id) => head.push(id),
                None if self.fixed.contains(&l) => return None,
                None => {}
            }
        }
        let mut body = Vec::new();
        for c in &rule.body {
            match c {
                Conjunct::Literal { naf, literal } => {
                    let l = normalize_literal(literal);
                    match self.index.get(&l) {
                        Some(&id) => body.push(if *naf { Item::Neg(id) } else { Item::Pos(id) }),
                        None if self.fixed.contains(&l) == *naf => return None,
                        None => {}
                    }
                }
                Conjunct::Builtin(b) => {
                    if !evaluator::eval_builtin(b).unwrap_or(false) {
                        return None;
                    }
                }
                Conjunct::Aggregate { .. } => {
                    let deps = self.dependencies(c);
                    if deps.is_empty() {
                        if !evaluator::satisfies_conjunct(self, c) {
                            return None;
                        }
                    } else {
                        body.push(Item::Agg(c.clone(), deps));
                    }
                }
            }
        }
        head.sort_unstable();
        head.dedup();
        Some(CompiledRule { head, body })
    }

    /// Table atoms an aggregate conjunct can depend on. A non-ground literal
    /// inside a set depends on every table atom of its predicate.
    fn dependencies(&self, c: &Conjunct) -> Vec<usize> {
        let mut literals = Vec::new();
        collect_set_literals(c, &mut literals);
        let mut deps = BTreeSet::new();
        for l in literals {
            if l.atom.is_ground() {
                if let Some(&id) = self.index.get(&normalize_literal(&l)) {
                    deps.insert(id);
                }
            } else {
                for (i, a) in self.atoms.iter().enumerate() {
                    if a.predicate() == l.predicate() {
                        deps.insert(i);
                    }
                }
            }
        }
        deps.into_iter().collect()
    }

    fn add_consistency(&mut self) {
        for i in 0..self.atoms.len() {
            let l = &self.atoms[i];
            if !l.negated {
                continue;
            }
            let complement = l.complement();
            let rule = match self.index.get(&complement) {
                Some(&j) => CompiledRule { head: Vec::new(), body: vec![Item::Pos(i), Item::Pos(j)] },
                None if self.fixed.contains(&complement) => CompiledRule { head: Vec::new(), body: vec![Item::Pos(i)] },
                None => continue,
            };
            self.add(rule);
        }
        for l in self.fixed.iter() {
            if l.negated && self.fixed.contains(&l.complement()) {
                self.contradiction = true;
            }
            if !l.negated {
                if let Some(&j) = self.index.get(&l.complement()) {
                    self.add(CompiledRule { head: Vec::new(), body: vec![Item::Pos(j)] });
                }
            }
        }
    }

    fn item_value(&self, item: &Item) -> Option<bool> {
        match item {
            Item::Pos(a) => self.value[*a],
            Item::Neg(a) => self.value[*a].map(|v| !v),
            Item::Agg(c, deps) => {
                if deps.iter().all(|d| self.value[*d].is_some()) {
                    Some(evaluator::satisfies_conjunct(self, c))
                } else {
                    None
                }
            }
        }
    }

    fn body_status(&self, rule: &CompiledRule) -> Status {
        let mut status = Status::True;
        for item in &rule.body {
            match self.item_value(item) {
                Some(false) => return Status::False,
                None => status = Status::Unknown,
                Some(true) => {}
            }
        }
        status
    }

    fn assign(&mut self, atom: usize, value: bool) {
        self.value[atom] = Some(value);
        self.trail.push(atom);
        for &r in &self.occurs[atom] {
            if !self.queued[r] {
                self.queued[r] = true;
                self.queue.push(r);
            }
        }
    }

    /// Returns `false` on conflict.
    fn propagate_rule(&mut self, r: usize) -> bool {
        let rule = &self.rules[r];
        let body = self.body_status(rule);
        if body == Status::False {
            return true;
        }
        let mut unknown_head = None;
        let mut unknown_count = 0;
        for &h in &rule.head {
            match self.value[h] {
                Some(true) => return true,
                None => {
                    unknown_count += 1;
                    unknown_head = Some(h);
                }
                Some(false) => {}
            }
        }
        match (body, unknown_count) {
            (Status::True, 0) => false,
            (Status::True, 1) => {
                self.assign(unknown_head.unwrap(), true);
                true
            }
            (Status::Unknown, 0) => {
                let mut open = None;
                for item in &rule.body {
                    if self.item_value(item).is_none() {
                        if open.is_some() {
                            return true;
                        }
                        open = Some(item);
                    }
                }
                match open {
                    Some(Item::Pos(a)) => {
                        let a = *a;
                        self.assign(a, false);
                    }
                    Some(Item::Neg(a)) => {
                        let a = *a;
                        self.assign(a, true);
                    }
                    _ => {}
                }
                true
            }
            _ => true,
        }
    }

    /// An atom can be true only through a rule whose body may hold and whose
    /// other head atoms are not true.
    fn propagate_support(&mut self) -> Option<bool> {
        let mut changed = false;
        for a in 0..self.atoms.len() {
            if self.value[a] == Some(false) {
                continue;
            }
            let supported = self.heads_of[a].iter().any(|&r| {
                let rule = &self.rules[r];
                rule.head.iter().all(|&h| h == a || self.value[h] != Some(true)) && self.body_status(rule) != Status::False
            });
            if !supported {
                if self.value[a] == Some(true) {
                    return None;
                }
                self.assign(a, false);
                changed = true;
            }
        }
        Some(changed)
    }

    fn propagate(&mut self) -> bool {
        loop {
            while let Some(r) = self.queue.pop() {
                self.queued[r] = false;
                if !self.propagate_rule(r) {
                    self.clear_queue();
                    return false;
                }
            }
            match self.mode {
                Mode::AnswerSet => match self.propagate_support() {
                    None => return false,
                    Some(true) => continue,
                    Some(false) => return true,
                },
                Mode::ProperSubmodel => {
                    let mut open = None;
                    let mut open_count = 0;
                    for (a, v) in self.value.iter().enumerate() {
                        match v {
                            Some(false) => return true,
                            None => {
                                open_count += 1;
                                open = Some(a);
                            }
                            Some(true) => {}
                        }
                    }
                    match open_count {
                        0 => return false,
                        1 => self.assign(open.unwrap(), false),
                        _ => return true,
                    }
                }
            }
        }
    }

    fn clear_queue(&mut self) {
        for r in self.queue.drain(..) {
            self.queued[r] = false;
        }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let a = self.trail.pop().unwrap();
            self.value[a] = None;
        }
    }

    fn all_satisfied(&self) -> bool {
        self.rules.iter().all(|r| self.body_status(r) != Status::True || r.head.iter().any(|&h| self.value[h] == Some(true)))
    }

    fn current(&self) -> Interpretation {
        let mut out: Interpretation = self.fixed.iter().cloned().collect();
        for (a, l) in self.atoms.iter().enumerate() {
            if self.value[a] == Some(true) {
                out.insert(l.clone());
            }
        }
        out
    }

    /// Calls `visit` with every total assignment satisfying the rules, until
    /// it returns `true`.
    pub fn search(&mut self, mut visit: impl FnMut(Interpretation) -> bool) -> Result<(), TimedOut> {
        if self.contradiction {
            return Ok(());
        }
        self.queue = (0..self.rules.len()).rev().collect();
        self.queued = vec![true; self.rules.len()];
        if !self.propagate() {
            return Ok(());
        }
        // (atom, trail length before the decision, second branch taken)
        let mut decisions: Vec<(usize, usize, bool)> = Vec::new();
        let mut steps: u64 = 0;
        loop {
            steps += 1;
            if steps.is_multiple_of(64) && self.deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(TimedOut);
            }
            let conflict = match self.value.iter().position(Option::is_none) {
                Some(a) => {
                    decisions.push((a, self.trail.len(), false));
                    self.assign(a, false);
                    !self.propagate()
                }
                None => {
                    if self.all_satisfied() && visit(self.current()) {
                        return Ok(());
                    }
                    true
                }
            };
            if conflict {
                loop {
                    let Some((a, len, flipped)) = decisions.pop() else { return Ok(()) };
                    self.undo_to(len);
                    if flipped {
                        continue;
                    }
                    decisions.push((a, len, true));
                    self.assign(a, true);
                    if self.propagate() {
                        break;
                    }
                }
            }
        }
    }
}

fn collect_set_literals(c: &Conjunct, out: &mut Vec<Literal>) {
    match c {
        Conjunct::Literal { literal, .. } => out.push(literal.clone()),
        Conjunct::Aggregate { atom, .. } => match &atom.set {
            SetTerm::Ground(g) => g.pairs.iter().flat_map(|p| &p.condition).for_each(|c| collect_set_literals(c, out)),
            SetTerm::Symbolic(s) => s.condition.iter().for_each(|c| collect_set_literals(c, out)),
        },
        Conjunct::Builtin(_) => {}
    }
}
