//! Recursive-descent parser for `.ndlp` / `.naso` program files.
//!
//! ```text
//! program  := (rule | prefrule)*
//! rule     := [head] [":-" body] "."
//! head     := literal ("|" literal)*
//! prefrule := "#pref" combo (">>" combo)* [":-" body] "."
//! body     := conjunct ("," conjunct)*
//! conjunct := ["not"] (literal | aggatom) | builtin
//! literal  := ["-"] atom
//! aggatom  := aggfun "{" term [":" body] "}" cmp term
//! combo    := conj ("or" conj)* ; conj := cfact ("," cfact)*
//! cfact    := ["not"] (literal | aggatom) | optagg | "(" combo ")"
//! optagg   := ("#minimize" | "#maximize") ( "(" aggfun "{" term ":" body "}" ")" | "{" term ":" body "}" )
//! builtin  := term cmp term
//! ```

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::model::*;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Error)]
#[error("line {}, column {}: {message}", span.line, span.column)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept classical negation even without preference rules.
    pub naso: bool,
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_with(text, ParseOptions::default())
}

pub fn parse_program_with(text: &str, options: ParseOptions) -> Result<Program, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0, arities: HashMap::new(), first_classical: None };
    let program = parser.program()?;
    if let Some(span) = parser.first_classical {
        if program.pref_rules.is_empty() && !options.naso {
            return Err(ParseError {
                message: "classical negation is only allowed in programs with preference rules".into(),
                span,
            });
        }
    }
    Ok(program)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Number(Rational),
    Directive(String),
    Not,
    Or,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    If,
    Bar,
    Prefer,
    Cmp(Comparison),
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{}`", rational::to_program_text(n)),
            Tok::Directive(d) => write!(f, "`#{d}`"),
            Tok::Not => f.write_str("`not`"),
            Tok::Or => f.write_str("`or`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::If => f.write_str("`:-`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Prefer => f.write_str("`>>`"),
            Tok::Cmp(c) => write!(f, "`{}`", c.token()),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
    offset: usize,
    len: usize,
}

impl Token {
    fn span(&self) -> SourceSpan {
        SourceSpan { line: self.line, column: self.column, length: self.len.max(1) }
    }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let err = |message: String| ParseError { message, span: SourceSpan { line, column, length: 1 } };
        let peek = |k: usize| chars.get(i + k).copied();
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "not" => Tok::Not,
                "or" => Tok::Or,
                _ if c.is_ascii_uppercase() || c == '_' => Tok::Var(word),
                _ => Tok::Ident(word),
            }
        } else if c.is_ascii_digit() {
            let scan_number = |mut j: usize| -> usize {
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                j
            };
            i = scan_number(i);
            // `N/D` written without spaces is a rational literal.
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i = scan_number(i + 1);
            }
            let word: String = chars[start..i].iter().collect();
            match rational::parse_decimal(&word) {
                Some(n) => Tok::Number(n),
                None => return Err(err(format!("invalid number `{word}`"))),
            }
        } else if c == '#' {
            i += 1;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word: String = chars[start + 1..i].iter().collect();
            match word.as_str() {
                "sum" | "times" | "count" | "min" | "max" | "minimize" | "maximize" | "pref" => Tok::Directive(word),
                _ => return Err(err(format!("unknown directive `#{word}`"))),
            }
        } else {
            let two = |a: char, b: char| c == a && peek(1) == Some(b);
            let (tok, width) = if two(':', '-') {
                (Tok::If, 2)
            } else if two('>', '>') {
                (Tok::Prefer, 2)
            } else if two('!', '=') {
                (Tok::Cmp(Comparison::Ne), 2)
            } else if two('<', '=') {
                (Tok::Cmp(Comparison::Le), 2)
            } else if two('>', '=') {
                (Tok::Cmp(Comparison::Ge), 2)
            } else {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    ':' => Tok::Colon,
                    '|' => Tok::Bar,
                    '=' => Tok::Cmp(Comparison::Eq),
                    '<' => Tok::Cmp(Comparison::Lt),
                    '>' => Tok::Cmp(Comparison::Gt),
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    other => return Err(err(format!("unexpected character `{other}`"))),
                };
                (t, 1)
            };
            i += width;
            tok
        };
        let len = i - start;
        tokens.push(Token { tok, line, column, offset: start, len });
        column += len;
    }
    tokens.push(Token { tok: Tok::Eof, line, column, offset: chars.len(), len: 0 });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    arities: HashMap<String, usize>,
    first_classical: Option<SourceSpan>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[idx].tok
    }

    fn token(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { message: message.into(), span: self.token().span() })
    }

    fn expect(&mut self, want: Tok, context: &str) -> PResult<Token> {
        if *self.peek() == want {
            Ok(self.advance())
        } else {
            self.error_here(format!("expected {want} {context}, found {}", self.peek()))
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut program = Program::default();
        while *self.peek() != Tok::Eof {
            let start = self.token().clone();
            if *self.peek() == Tok::Directive("pref".into()) {
                let mut rule = self.pref_rule()?;
                rule.span = self.span_from(&start);
                program.pref_rules.push(rule);
            } else {
                let mut rule = self.rule()?;
                rule.span = self.span_from(&start);
                program.gen_rules.push(rule);
            }
        }
        Ok(program)
    }

    fn span_from(&self, start: &Token) -> RuleSpan {
        let last = &self.tokens[self.pos.saturating_sub(1)];
        RuleSpan(Some(SourceSpan {
            line: start.line,
            column: start.column,
            length: (last.offset + last.len).saturating_sub(start.offset),
        }))
    }

    fn rule(&mut self) -> PResult<NdlpRule> {
        let mut head = Vec::new();
        if *self.peek() != Tok::If {
            loop {
                head.push(self.head_literal()?);
                if *self.peek() == Tok::Bar {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        let body = if *self.peek() == Tok::If {
            self.advance();
            self.body(&[Tok::Dot])?
        } else {
            Vec::new()
        };
        self.expect(Tok::Dot, "to end the rule")?;
        Ok(NdlpRule::new(head, body))
    }

    fn head_literal(&mut self) -> PResult<Literal> {
        let negated = if *self.peek() == Tok::Minus {
            let t = self.advance();
            self.note_classical(&t);
            true
        } else {
            false
        };
        match self.peek() {
            Tok::Ident(_) => Ok(Literal { negated, atom: self.atom()? }),
            other => {
                let msg = format!("expected a head atom, found {other}");
                self.error_here(msg)
            }
        }
    }

    fn note_classical(&mut self, t: &Token) {
        if self.first_classical.is_none() {
            self.first_classical = Some(t.span());
        }
    }

    fn atom(&mut self) -> PResult<Atom> {
        let t = self.advance();
        let name = match &t.tok {
            Tok::Ident(n) => n.clone(),
            other => return Err(ParseError { message: format!("expected a predicate, found {other}"), span: t.span() }),
        };
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.advance();
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Tok::Comma => {
                        self.advance();
                    }
                    Tok::RParen => {
                        self.advance();
                        break;
                    }
                    other => {
                        let msg = format!("expected `,` or `)` in the arguments of `{name}`, found {other}");
                        return self.error_here(msg);
                    }
                }
            }
        }
        match self.arities.get(&name) {
            Some(&a) if a != args.len() => {
                return Err(ParseError {
                    message: format!("predicate `{name}` used with arity {} but earlier with arity {a}", args.len()),
                    span: t.span(),
                })
            }
            Some(_) => {}
            None => {
                self.arities.insert(name.clone(), args.len());
            }
        }
        Ok(Atom::new(&name, args))
    }

    fn body(&mut self, terminators: &[Tok]) -> PResult<Vec<Conjunct>> {
        let mut body = Vec::new();
        if terminators.contains(self.peek()) {
            return Ok(body);
        }
        loop {
            body.push(self.conjunct()?);
            if *self.peek() == Tok::Comma {
                self.advance();
            } else {
                break;
            }
        }
        Ok(body)
    }

    fn conjunct(&mut self) -> PResult<Conjunct> {
        if *self.peek() == Tok::Not {
            self.advance();
            return match self.peek().clone() {
                Tok::Directive(d) if is_aggfun(&d) => Ok(Conjunct::Aggregate { naf: true, atom: self.aggregate_atom()? }),
                Tok::Directive(d) if d == "minimize" || d == "maximize" => {
                    self.error_here("`not` cannot be applied to an optimization aggregate")
                }
                Tok::Minus if matches!(self.peek_at(1), Tok::Ident(_)) => {
                    Ok(Conjunct::Literal { naf: true, literal: self.literal()? })
                }
                Tok::Ident(_) if !self.ident_starts_term() => {
                    Ok(Conjunct::Literal { naf: true, literal: self.literal()? })
                }
                _ => self.error_here("`not` must be followed by a literal or an aggregate atom"),
            };
        }
        match self.peek().clone() {
            Tok::Directive(d) if is_aggfun(&d) => Ok(Conjunct::Aggregate { naf: false, atom: self.aggregate_atom()? }),
            Tok::Directive(d) => self.error_here(format!("`#{d}` is not allowed here")),
            Tok::Minus if matches!(self.peek_at(1), Tok::Ident(_)) => Ok(Conjunct::pos(self.literal()?)),
            Tok::Ident(_) if !self.ident_starts_term() => Ok(Conjunct::pos(self.literal()?)),
            _ => self.builtin().map(Conjunct::Builtin),
        }
    }

    /// A lowercase identifier begins a term (not an atom) when it is
    /// followed by a comparison or arithmetic operator.
    fn ident_starts_term(&self) -> bool {
        matches!(self.peek_at(1), Tok::Cmp(_) | Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash)
    }

    fn literal(&mut self) -> PResult<Literal> {
        let negated = if *self.peek() == Tok::Minus {
            let t = self.advance();
            self.note_classical(&t);
            true
        } else {
            false
        };
        Ok(Literal { negated, atom: self.atom()? })
    }

    fn builtin(&mut self) -> PResult<BuiltinAtom> {
        let left = self.term()?;
        let cmp = self.comparison()?;
        let right = self.term()?;
        Ok(BuiltinAtom { left, cmp, right })
    }

    fn comparison(&mut self) -> PResult<Comparison> {
        match self.peek().clone() {
            Tok::Cmp(c) => {
                self.advance();
                Ok(c)
            }
            other => self.error_here(format!("expected a comparison operator, found {other}")),
        }
    }

    fn aggfun(&mut self) -> PResult<AggregateFunction> {
        let t = self.advance();
        let fun = match &t.tok {
            Tok::Directive(d) => match d.as_str() {
                "sum" => Some(AggregateFunction::Sum),
                "times" => Some(AggregateFunction::Times),
                "count" => Some(AggregateFunction::Count),
                "min" => Some(AggregateFunction::Min),
                "max" => Some(AggregateFunction::Max),
                _ => None,
            },
            _ => None,
        };
        fun.ok_or_else(|| ParseError { message: format!("expected an aggregate function, found {}", t.tok), span: t.span() })
    }

    fn symbolic_set(&mut self) -> PResult<SymbolicSet> {
        let open = self.expect(Tok::LBrace, "to open the set")?;
        let element = self.term()?;
        let condition = if *self.peek() == Tok::Colon {
            self.advance();
            self.body(&[Tok::RBrace])?
        } else {
            Vec::new()
        };
        if *self.peek() != Tok::RBrace {
            return Err(ParseError {
                message: format!("unbalanced brace: expected `}}` to close the set opened here, found {}", self.peek()),
                span: open.span(),
            });
        }
        self.advance();
        Ok(SymbolicSet { element, condition })
    }

    fn aggregate_atom(&mut self) -> PResult<AggregateAtom> {
        let fun = self.aggfun()?;
        let set = self.symbolic_set()?;
        let cmp = self.comparison()?;
        let guard = self.term()?;
        Ok(AggregateAtom { fun, set: SetTerm::Symbolic(set), cmp, guard })
    }

    fn pref_rule(&mut self) -> PResult<PreferenceRule> {
        self.advance();
        let mut head = vec![self.combination()?];
        while *self.peek() == Tok::Prefer {
            self.advance();
            head.push(self.combination()?);
        }
        let body = if *self.peek() == Tok::If {
            self.advance();
            self.body(&[Tok::Dot])?
        } else {
            Vec::new()
        };
        self.expect(Tok::Dot, "to end the preference rule")?;
        Ok(PreferenceRule::new(head, body))
    }

    fn combination(&mut self) -> PResult<BooleanCombination> {
        let mut disjuncts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.advance();
            disjuncts.push(self.conjunction()?);
        }
        Ok(if disjuncts.len() == 1 { disjuncts.pop().unwrap() } else { BooleanCombination::Or(disjuncts) })
    }

    fn conjunction(&mut self) -> PResult<BooleanCombination> {
        let mut factors = vec![self.cfact()?];
        while *self.peek() == Tok::Comma {
            self.advance();
            factors.push(self.cfact()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { BooleanCombination::And(factors) })
    }

    fn cfact(&mut self) -> PResult<BooleanCombination> {
        let naf = if *self.peek() == Tok::Not {
            self.advance();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Directive(d) if is_aggfun(&d) => Ok(BooleanCombination::Aggregate { naf, atom: self.aggregate_atom()? }),
            Tok::Directive(d) if d == "minimize" || d == "maximize" => {
                if naf {
                    return self.error_here("`not` cannot be applied to an optimization aggregate");
                }
                self.advance();
                let direction = if d == "minimize" { Direction::Minimize } else { Direction::Maximize };
                if *self.peek() == Tok::LBrace {
                    let set = self.symbolic_set()?;
                    Ok(BooleanCombination::Optimize(OptimizationAggregate {
                        direction,
                        fun: AggregateFunction::Sum,
                        set: SetTerm::Symbolic(set),
                        abbreviated: true,
                    }))
                } else {
                    self.expect(Tok::LParen, "after the optimization directive")?;
                    let fun = self.aggfun()?;
                    let set = self.symbolic_set()?;
                    self.expect(Tok::RParen, "to close the optimization aggregate")?;
                    Ok(BooleanCombination::Optimize(OptimizationAggregate {
                        direction,
                        fun,
                        set: SetTerm::Symbolic(set),
                        abbreviated: false,
                    }))
                }
            }
            Tok::LParen if !naf => {
                self.advance();
                let inner = self.combination()?;
                self.expect(Tok::RParen, "to close the parenthesised combination")?;
                Ok(inner)
            }
            Tok::Ident(_) | Tok::Minus => Ok(BooleanCombination::Literal { naf, literal: self.literal()? }),
            other => self.error_here(format!("expected a literal, aggregate atom or optimization aggregate, found {other}")),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut left = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => break,
            };
            self.advance();
            let right = self.product()?;
            left = Term::arith(op, left, right);
        }
        Ok(left)
    }

    fn product(&mut self) -> PResult<Term> {
        let mut left = self.primary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                _ => break,
            };
            self.advance();
            let right = self.primary()?;
            left = Term::arith(op, left, right);
        }
        Ok(left)
    }

    fn primary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Number(n) => {
                self.advance();
                Ok(Term::Const(Constant::Number(n)))
            }
            Tok::Minus => {
                self.advance();
                match self.peek().clone() {
                    Tok::Number(n) => {
                        self.advance();
                        Ok(Term::Const(Constant::Number(-n)))
                    }
                    other => self.error_here(format!("unary minus applies to numbers only, found {other}")),
                }
            }
            Tok::Var(v) => {
                self.advance();
                Ok(Term::var(&v))
            }
            Tok::Ident(s) => {
                self.advance();
                if *self.peek() == Tok::LParen {
                    return self.error_here(format!("function terms are not supported (`{s}(...)`)"));
                }
                Ok(Term::symbol(&s))
            }
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                self.expect(Tok::RParen, "to close the parenthesised term")?;
                Ok(t)
            }
            other => self.error_here(format!("expected a term, found {other}")),
        }
    }
}

fn is_aggfun(d: &str) -> bool {
    matches!(d, "sum" | "times" | "count" | "min" | "max")
}
