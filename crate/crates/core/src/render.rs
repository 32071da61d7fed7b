//! Textual rendering of programs. Non-ground programs re-parse to
//! structurally equal values; ground sets render as `<F | C>` pairs for
//! inspection only.

use std::fmt;

use crate::model::*;
use crate::rational;

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Number(n) => f.write_str(&rational::to_program_text(n)),
            Constant::Symbol(s) => write!(f, "{s}"),
        }
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, term: &Term, parent: Option<(ArithOp, bool)>) -> fmt::Result {
    match term {
        Term::Const(c) => write!(f, "{c}"),
        Term::Var(v) => write!(f, "{v}"),
        Term::Arith(op, l, r) => {
            let needs_parens = match parent {
                None => false,
                Some((p, is_right)) => {
                    op.precedence() < p.precedence() || (is_right && op.precedence() == p.precedence())
                }
            };
            if needs_parens {
                f.write_str("(")?;
            }
            write_term(f, l, Some((*op, false)))?;
            write!(f, " {} ", op.token())?;
            write_term(f, r, Some((*op, true)))?;
            if needs_parens {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, None)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Display for BuiltinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.cmp.token(), self.right)
    }
}

fn write_conjuncts(f: &mut fmt::Formatter<'_>, conjuncts: &[Conjunct]) -> fmt::Result {
    for (i, c) in conjuncts.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

impl fmt::Display for SetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetTerm::Symbolic(s) => {
                write!(f, "{{ {}", s.element)?;
                if !s.condition.is_empty() {
                    f.write_str(" : ")?;
                    write_conjuncts(f, &s.condition)?;
                }
                f.write_str(" }")
            }
            SetTerm::Ground(g) => {
                f.write_str("{")?;
                for (i, p) in g.pairs.iter().enumerate() {
                    f.write_str(if i > 0 { ", " } else { " " })?;
                    write!(f, "<{} | ", p.element)?;
                    write_conjuncts(f, &p.condition)?;
                    f.write_str(">")?;
                }
                f.write_str(" }")
            }
        }
    }
}

impl fmt::Display for AggregateAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} {} {}", self.fun.token(), self.set, self.cmp.token(), self.guard)
    }
}

impl fmt::Display for Conjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conjunct::Literal { naf, literal } => {
                if *naf {
                    f.write_str("not ")?;
                }
                write!(f, "{literal}")
            }
            Conjunct::Aggregate { naf, atom } => {
                if *naf {
                    f.write_str("not ")?;
                }
                write!(f, "{atom}")
            }
            Conjunct::Builtin(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Display for OptimizationAggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.direction {
            Direction::Maximize => "#maximize",
            Direction::Minimize => "#minimize",
        };
        if self.abbreviated {
            write!(f, "{name}{}", self.set)
        } else {
            write!(f, "{name}({}{})", self.fun.token(), self.set)
        }
    }
}

fn write_combination(f: &mut fmt::Formatter<'_>, c: &BooleanCombination, inside: Option<bool>) -> fmt::Result {
    // `inside` is Some(true) under a conjunction, Some(false) under a disjunction.
    match c {
        BooleanCombination::Literal { naf, literal } => {
            if *naf {
                f.write_str("not ")?;
            }
            write!(f, "{literal}")
        }
        BooleanCombination::Aggregate { naf, atom } => {
            if *naf {
                f.write_str("not ")?;
            }
            write!(f, "{atom}")
        }
        BooleanCombination::Optimize(o) => write!(f, "{o}"),
        BooleanCombination::And(xs) => {
            let parens = inside == Some(true);
            if parens {
                f.write_str("(")?;
            }
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_combination(f, x, Some(true))?;
            }
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
        BooleanCombination::Or(xs) => {
            let parens = inside.is_some();
            if parens {
                f.write_str("(")?;
            }
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(" or ")?;
                }
                write_combination(f, x, Some(false))?;
            }
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for BooleanCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self, None)
    }
}

impl fmt::Display for NdlpRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{h}")?;
        }
        if !self.body.is_empty() || self.head.is_empty() {
            f.write_str(if self.head.is_empty() { ":- " } else { " :- " })?;
            write_conjuncts(f, &self.body)?;
        }
        f.write_str(".")
    }
}

impl fmt::Display for PreferenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("#pref ")?;
        for (i, c) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" >> ")?;
            }
            write!(f, "{c}")?;
        }
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            write_conjuncts(f, &self.body)?;
        }
        f.write_str(".")
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// One rule per line, generator rules first.
pub fn render_program(program: &Program) -> String {
    let mut out = String::new();
    for r in &program.gen_rules {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    for r in &program.pref_rules {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_program(self))
    }
}
