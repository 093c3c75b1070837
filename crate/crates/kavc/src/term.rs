//! Terms of Kleene algebra with variable complements: AST, parser, printer,
//! and the finite/bounded language of a term read over the doubled alphabet
//! V' = {x, x⁻ | x a variable}.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A variable name matching `[A-Za-z_][A-Za-z0-9_]*` (with `0` and `1` reserved).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    /// Wraps a name. Panics if the name is not a valid identifier.
    pub fn new(name: impl Into<String>) -> Variable {
        let name = name.into();
        assert!(is_identifier(&name), "invalid variable name: {name:?}");
        Variable(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Returns true if `s` is a valid variable identifier.
pub fn is_identifier(s: &str) -> bool {
    if s == "0" || s == "1" {
        return false;
    }
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The first variable of the form `{prefix}0`, `{prefix}1`, ... not in `avoid`.
pub fn fresh_variable(prefix: &str, avoid: &BTreeSet<Variable>) -> Variable {
    (0..)
        .map(|i| Variable::new(format!("{prefix}{i}")))
        .find(|v| !avoid.contains(v))
        .unwrap()
}

/// Polarity of a literal over the doubled alphabet: `x` or `x⁻`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

/// A letter of the doubled alphabet V': a variable or its complement.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Variable,
    pub polarity: Polarity,
}

impl Literal {
    pub fn positive(var: Variable) -> Literal {
        Literal { var, polarity: Polarity::Positive }
    }

    pub fn negative(var: Variable) -> Literal {
        Literal { var, polarity: Polarity::Negative }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }

    /// The literal as a single-node term.
    pub fn embed(&self) -> Term {
        match self.polarity {
            Polarity::Positive => Term::Var(self.var.clone()),
            Polarity::Negative => Term::CVar(self.var.clone()),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Positive => write!(f, "{}", self.var),
            Polarity::Negative => write!(f, "~{}", self.var),
        }
    }
}

/// A word over the doubled alphabet V'. Ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LitWord(Vec<Literal>);

impl LitWord {
    pub fn new(literals: Vec<Literal>) -> LitWord {
        LitWord(literals)
    }

    pub fn empty() -> LitWord {
        LitWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.0.iter().map(|l| l.var.clone()).collect()
    }

    /// The word as a term: the left-nested concatenation of its literals
    /// (the empty word becomes `1`).
    pub fn embed(&self) -> Term {
        let mut lits = self.0.iter();
        let first = match lits.next() {
            None => return Term::One,
            Some(l) => l.embed(),
        };
        lits.fold(first, |acc, l| Term::Concat(Box::new(acc), Box::new(l.embed())))
    }
}

impl Ord for LitWord {
    fn cmp(&self, other: &LitWord) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for LitWord {
    fn partial_cmp(&self, other: &LitWord) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A term: variables and complemented variables closed under `1`, `0`,
/// concatenation, union and star. Complement applies to variables only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Variable),
    CVar(Variable),
    One,
    Zero,
    Union(Box<Term>, Box<Term>),
    Concat(Box<Term>, Box<Term>),
    Star(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Variable::new(name))
    }

    pub fn cvar(name: &str) -> Term {
        Term::CVar(Variable::new(name))
    }

    pub fn union(a: Term, b: Term) -> Term {
        Term::Union(Box::new(a), Box::new(b))
    }

    pub fn concat(a: Term, b: Term) -> Term {
        Term::Concat(Box::new(a), Box::new(b))
    }

    pub fn star(a: Term) -> Term {
        Term::Star(Box::new(a))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::CVar(_) | Term::One | Term::Zero => 1,
            Term::Union(a, b) | Term::Concat(a, b) => 1 + a.size() + b.size(),
            Term::Star(a) => 1 + a.size(),
        }
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        fn walk(t: &Term, out: &mut BTreeSet<Variable>) {
            match t {
                Term::Var(v) | Term::CVar(v) => {
                    out.insert(v.clone());
                }
                Term::One | Term::Zero => {}
                Term::Union(a, b) | Term::Concat(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Term::Star(a) => walk(a, out),
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    pub fn is_star_free(&self) -> bool {
        match self {
            Term::Var(_) | Term::CVar(_) | Term::One | Term::Zero => true,
            Term::Union(a, b) | Term::Concat(a, b) => a.is_star_free() && b.is_star_free(),
            Term::Star(_) => false,
        }
    }

    /// True if the term uses neither concatenation nor star.
    pub fn is_composition_free(&self) -> bool {
        match self {
            Term::Var(_) | Term::CVar(_) | Term::One | Term::Zero => true,
            Term::Union(a, b) => a.is_composition_free() && b.is_composition_free(),
            Term::Concat(_, _) | Term::Star(_) => false,
        }
    }

    pub fn is_complement_free(&self) -> bool {
        match self {
            Term::CVar(_) => false,
            Term::Var(_) | Term::One | Term::Zero => true,
            Term::Union(a, b) | Term::Concat(a, b) => {
                a.is_complement_free() && b.is_complement_free()
            }
            Term::Star(a) => a.is_complement_free(),
        }
    }

    /// Recognizes the term as an embedded literal word: `1` is the empty
    /// word, otherwise a concatenation tree whose leaves are all literals.
    pub fn as_lit_word(&self) -> Option<LitWord> {
        fn collect(t: &Term, out: &mut Vec<Literal>) -> bool {
            match t {
                Term::Var(v) => {
                    out.push(Literal::positive(v.clone()));
                    true
                }
                Term::CVar(v) => {
                    out.push(Literal::negative(v.clone()));
                    true
                }
                Term::Concat(a, b) => collect(a, out) && collect(b, out),
                _ => false,
            }
        }
        if *self == Term::One {
            return Some(LitWord::empty());
        }
        let mut lits = Vec::new();
        collect(self, &mut lits).then(|| LitWord::new(lits))
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let level = match self {
            Term::Union(_, _) => 0,
            Term::Concat(_, _) => 1,
            Term::Star(_) => 2,
            Term::Var(_) | Term::CVar(_) | Term::One | Term::Zero => 3,
        };
        let parens = level < ctx;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Term::Var(v) => write!(f, "{v}")?,
            Term::CVar(v) => write!(f, "~{v}")?,
            Term::One => f.write_str("1")?,
            Term::Zero => f.write_str("0")?,
            Term::Union(a, b) => {
                a.fmt_prec(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 1)?;
            }
            Term::Concat(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" . ")?;
                b.fmt_prec(f, 2)?;
            }
            Term::Star(a) => {
                a.fmt_prec(f, 2)?;
                f.write_str("*")?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Canonical printing: `+`, `.`, postfix `*`, `~` on variables, minimal
/// parentheses. Reparsing the output yields a structurally equal term.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// `x ∪ x⁻` for a deterministic fresh variable `_t0`, `_t1`, ... avoiding `avoid`.
pub fn top_expansion(avoid: &BTreeSet<Variable>) -> Term {
    let v = fresh_variable("_t", avoid);
    Term::Union(Box::new(Term::Var(v.clone())), Box::new(Term::CVar(v)))
}

/// Whether two terms are compared with `<=` or `=`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Inequation,
    Equation,
}

/// A parsed query `lhs <= rhs` or `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub lhs: Term,
    pub rhs: Term,
    pub kind: QueryKind,
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            QueryKind::Inequation => "<=",
            QueryKind::Equation => "=",
        };
        write!(f, "{} {} {}", self.lhs, op, self.rhs)
    }
}

/// A syntax error with 1-based line and column of the offending input.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, column, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Plus,
    Dot,
    Star,
    Tilde,
    LParen,
    RParen,
    Ident(String),
    Zero,
    One,
    Le,
    Eq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Plus => "'+'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Star => "'*'".into(),
            Tok::Tilde => "'~'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Zero => "'0'".into(),
            Tok::One => "'1'".into(),
            Tok::Le => "'<='".into(),
            Tok::Eq => "'='".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '+' => {
                bump(&mut chars);
                toks.push(Spanned { tok: Tok::Plus, line: tline, column: tcol });
            }
            '.' => {
                bump(&mut chars);
                toks.push(Spanned { tok: Tok::Dot, line: tline, column: tcol });
            }
            '*' => {
                bump(&mut chars);
                toks.push(Spanned { tok: Tok::Star, line: tline, column: tcol });
            }
            '~' => {
                bump(&mut chars);
                toks.push(Spanned { tok: Tok::Tilde, line: tline, column: tcol });
            }
            '(' => {
                bump(&mut chars);
                toks.push(Spanned { tok: Tok::LParen, line: tline, column: tcol });
            }
            ')' => {
                bump(&mut chars);
                toks.push(Spanned { tok: Tok::RParen, line: tline, column: tcol });
            }
            '<' => {
                bump(&mut chars);
                match chars.peek() {
                    Some('=') => {
                        bump(&mut chars);
                        toks.push(Spanned { tok: Tok::Le, line: tline, column: tcol });
                    }
                    _ => return Err(ParseError::new(tline, tcol, "expected '=' after '<'")),
                }
            }
            '=' => {
                bump(&mut chars);
                toks.push(Spanned { tok: Tok::Eq, line: tline, column: tcol });
            }
            '0' => {
                bump(&mut chars);
                toks.push(Spanned { tok: Tok::Zero, line: tline, column: tcol });
            }
            '1' => {
                bump(&mut chars);
                toks.push(Spanned { tok: Tok::One, line: tline, column: tcol });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                toks.push(Spanned { tok: Tok::Ident(name), line: tline, column: tcol });
            }
            c => {
                return Err(ParseError::new(tline, tcol, format!("unexpected character {c:?}")))
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        let toks = tokenize(text)?;
        let lines = text.lines().count().max(1);
        let last_len = text.lines().last().map_or(0, |l| l.chars().count());
        Ok(Parser { toks, pos: 0, end: (lines, last_len + 1) })
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |s| (s.line, s.column))
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError::new(line, column, message)
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(s) if s.tok == *want => {
                self.pos += 1;
                Ok(())
            }
            Some(s) => Err(self
                .error_here(format!("expected {}, found {}", want.describe(), s.tok.describe()))),
            None => Err(self.error_here(format!("expected {}, found end of input", want.describe()))),
        }
    }

    fn parse_union(&mut self) -> Result<Term, ParseError> {
        let mut t = self.parse_concat()?;
        while matches!(self.peek(), Some(Spanned { tok: Tok::Plus, .. })) {
            self.pos += 1;
            let rhs = self.parse_concat()?;
            t = Term::Union(Box::new(t), Box::new(rhs));
        }
        Ok(t)
    }

    fn parse_concat(&mut self) -> Result<Term, ParseError> {
        let mut t = self.parse_star()?;
        while matches!(self.peek(), Some(Spanned { tok: Tok::Dot, .. })) {
            self.pos += 1;
            let rhs = self.parse_star()?;
            t = Term::Concat(Box::new(t), Box::new(rhs));
        }
        Ok(t)
    }

    fn parse_star(&mut self) -> Result<Term, ParseError> {
        let mut t = self.parse_atom()?;
        while matches!(self.peek(), Some(Spanned { tok: Tok::Star, .. })) {
            self.pos += 1;
            t = Term::Star(Box::new(t));
        }
        Ok(t)
    }

    fn parse_atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Spanned { tok: Tok::Zero, .. }) => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some(Spanned { tok: Tok::One, .. }) => {
                self.pos += 1;
                Ok(Term::One)
            }
            Some(Spanned { tok: Tok::Ident(name), .. }) => {
                let name = name.clone();
                self.pos += 1;
                Ok(Term::Var(Variable::new(name)))
            }
            Some(Spanned { tok: Tok::Tilde, .. }) => {
                self.pos += 1;
                match self.peek() {
                    Some(Spanned { tok: Tok::Ident(name), .. }) => {
                        let name = name.clone();
                        self.pos += 1;
                        Ok(Term::CVar(Variable::new(name)))
                    }
                    Some(s) => Err(self.error_here(format!(
                        "'~' must be followed by a variable, found {}",
                        s.tok.describe()
                    ))),
                    None => Err(self.error_here("'~' must be followed by a variable")),
                }
            }
            Some(Spanned { tok: Tok::LParen, .. }) => {
                self.pos += 1;
                let t = self.parse_union()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Some(s) => Err(self.error_here(format!("expected a term, found {}", s.tok.describe()))),
            None => Err(self.error_here("expected a term, found end of input")),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(s) => Err(self.error_here(format!("unexpected {}", s.tok.describe()))),
        }
    }
}

/// Parses a single term.
pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.parse_union()?;
    p.expect_end()?;
    Ok(t)
}

/// Parses `lhs <= rhs` or `lhs = rhs`.
pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let mut p = Parser::new(text)?;
    let lhs = p.parse_union()?;
    let kind = match p.peek() {
        Some(Spanned { tok: Tok::Le, .. }) => {
            p.pos += 1;
            QueryKind::Inequation
        }
        Some(Spanned { tok: Tok::Eq, .. }) => {
            p.pos += 1;
            QueryKind::Equation
        }
        Some(s) => {
            return Err(p.error_here(format!("expected '<=' or '=', found {}", s.tok.describe())))
        }
        None => return Err(p.error_here("expected '<=' or '=', found end of input")),
    };
    let rhs = p.parse_union()?;
    p.expect_end()?;
    Ok(Query { lhs, rhs, kind })
}

/// Raised when a finite doubled-alphabet language is requested for a starred term.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("term is not star-free")]
pub struct NotStarFree;

/// The language of a star-free term over the doubled alphabet, as a finite set.
pub fn lang_vprime_finite(t: &Term) -> Result<BTreeSet<LitWord>, NotStarFree> {
    match t {
        Term::Var(v) => Ok([LitWord::new(vec![Literal::positive(v.clone())])].into()),
        Term::CVar(v) => Ok([LitWord::new(vec![Literal::negative(v.clone())])].into()),
        Term::One => Ok([LitWord::empty()].into()),
        Term::Zero => Ok(BTreeSet::new()),
        Term::Union(a, b) => {
            let mut s = lang_vprime_finite(a)?;
            s.extend(lang_vprime_finite(b)?);
            Ok(s)
        }
        Term::Concat(a, b) => {
            let sa = lang_vprime_finite(a)?;
            let sb = lang_vprime_finite(b)?;
            let mut s = BTreeSet::new();
            for wa in &sa {
                for wb in &sb {
                    let mut lits = wa.literals().to_vec();
                    lits.extend_from_slice(wb.literals());
                    s.insert(LitWord::new(lits));
                }
            }
            Ok(s)
        }
        Term::Star(_) => Err(NotStarFree),
    }
}

fn nullable(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::CVar(_) | Term::Zero => false,
        Term::One | Term::Star(_) => true,
        Term::Union(a, b) => nullable(a) || nullable(b),
        Term::Concat(a, b) => nullable(a) && nullable(b),
    }
}

fn union_simpl(a: Term, b: Term) -> Term {
    if a == Term::Zero {
        return b;
    }
    if b == Term::Zero || a == b {
        return a;
    }
    Term::Union(Box::new(a), Box::new(b))
}

fn concat_simpl(a: Term, b: Term) -> Term {
    if a == Term::Zero || b == Term::Zero {
        return Term::Zero;
    }
    if a == Term::One {
        return b;
    }
    if b == Term::One {
        return a;
    }
    Term::Concat(Box::new(a), Box::new(b))
}

/// Brzozowski derivative of `t` by the doubled-alphabet letter `lit`,
/// lightly simplified so dead branches collapse to `0`.
fn derivative(t: &Term, lit: &Literal) -> Term {
    match t {
        Term::Var(v) => {
            if lit.polarity == Polarity::Positive && *v == lit.var {
                Term::One
            } else {
                Term::Zero
            }
        }
        Term::CVar(v) => {
            if lit.polarity == Polarity::Negative && *v == lit.var {
                Term::One
            } else {
                Term::Zero
            }
        }
        Term::One | Term::Zero => Term::Zero,
        Term::Union(a, b) => union_simpl(derivative(a, lit), derivative(b, lit)),
        Term::Concat(a, b) => {
            let head = concat_simpl(derivative(a, lit), (**b).clone());
            if nullable(a) {
                union_simpl(head, derivative(b, lit))
            } else {
                head
            }
        }
        Term::Star(a) => concat_simpl(derivative(a, lit), Term::Star(a.clone())),
    }
}

/// Lazily enumerates the doubled-alphabet language of `t` up to `max_len`,
/// in length-then-lexicographic order, without duplicates.
pub fn lang_vprime_enumerate(t: &Term, max_len: usize) -> LangEnumerator {
    let alphabet: Vec<Literal> = {
        let mut lits = BTreeSet::new();
        fn walk(t: &Term, out: &mut BTreeSet<Literal>) {
            match t {
                Term::Var(v) => {
                    out.insert(Literal::positive(v.clone()));
                }
                Term::CVar(v) => {
                    out.insert(Literal::negative(v.clone()));
                }
                Term::One | Term::Zero => {}
                Term::Union(a, b) | Term::Concat(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Term::Star(a) => walk(a, out),
            }
        }
        walk(t, &mut lits);
        lits.into_iter().collect()
    };
    LangEnumerator {
        alphabet,
        frontier: vec![(LitWord::empty(), t.clone())],
        pending: std::collections::VecDeque::new(),
        level: 0,
        max_len,
        started: false,
    }
}

/// Iterator state for [`lang_vprime_enumerate`]: a breadth-first walk over
/// derivative states, one level per word length.
pub struct LangEnumerator {
    alphabet: Vec<Literal>,
    frontier: Vec<(LitWord, Term)>,
    pending: std::collections::VecDeque<LitWord>,
    level: usize,
    max_len: usize,
    started: bool,
}

impl LangEnumerator {
    fn fill_level(&mut self) {
        if self.started {
            // Advance the frontier one letter; words inherit sortedness.
            let mut next = Vec::new();
            for (w, state) in &self.frontier {
                for lit in &self.alphabet {
                    let d = derivative(state, lit);
                    if d != Term::Zero {
                        let mut lits = w.literals().to_vec();
                        lits.push(lit.clone());
                        next.push((LitWord::new(lits), d));
                    }
                }
            }
            self.frontier = next;
            self.level += 1;
        }
        self.started = true;
        for (w, state) in &self.frontier {
            if nullable(state) {
                self.pending.push_back(w.clone());
            }
        }
    }
}

impl Iterator for LangEnumerator {
    type Item = LitWord;

    fn next(&mut self) -> Option<LitWord> {
        loop {
            if let Some(w) = self.pending.pop_front() {
                return Some(w);
            }
            if self.started && (self.level >= self.max_len || self.frontier.is_empty()) {
                return None;
            }
            self.fill_level();
        }
    }
}

/// A literal of a DNF clause: a propositional variable or its negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnfLiteral {
    pub var: Variable,
    pub positive: bool,
}

/// A propositional formula in disjunctive normal form.
///
/// Text format: one clause per line, literals separated by `&`, negation
/// written as a `!` prefix. Blank lines are ignored; an empty input is the
/// empty disjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dnf {
    clauses: Vec<Vec<DnfLiteral>>,
}

impl Dnf {
    pub fn new(clauses: Vec<Vec<DnfLiteral>>) -> Dnf {
        Dnf { clauses }
    }

    pub fn clauses(&self) -> &[Vec<DnfLiteral>] {
        &self.clauses
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.clauses.iter().flatten().map(|l| l.var.clone()).collect()
    }

    pub fn parse(text: &str) -> Result<Dnf, ParseError> {
        let mut clauses = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let mut clause = Vec::new();
            let mut column = 1usize;
            for piece in raw.split('&') {
                let lead = piece.chars().take_while(|c| c.is_whitespace()).count();
                let body = piece.trim();
                let at = column + lead;
                if body.is_empty() {
                    return Err(ParseError::new(line, at, "empty literal"));
                }
                let (positive, name) = match body.strip_prefix('!') {
                    Some(rest) => (false, rest.trim_start()),
                    None => (true, body),
                };
                if !is_identifier(name) {
                    return Err(ParseError::new(
                        line,
                        at,
                        format!("invalid propositional variable {name:?}"),
                    ));
                }
                clause.push(DnfLiteral { var: Variable::new(name), positive });
                column += piece.chars().count() + 1;
            }
            clauses.push(clause);
        }
        Ok(Dnf { clauses })
    }

    /// Evaluates the formula under a total assignment (missing variables read as false).
    pub fn evaluate(&self, assignment: &BTreeSet<Variable>) -> bool {
        self.clauses.iter().any(|clause| {
            clause.iter().all(|l| assignment.contains(&l.var) == l.positive)
        })
    }

    /// Truth-table validity over the formula's own variables.
    pub fn is_valid(&self) -> bool {
        let vars: Vec<Variable> = self.variables().into_iter().collect();
        assert!(vars.len() < 63, "too many propositional variables");
        (0..1u64 << vars.len()).all(|mask| {
            let assignment: BTreeSet<Variable> = vars
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect();
            self.evaluate(&assignment)
        })
    }
}

/// Translates a DNF formula to a term: positive literals become variables,
/// negative ones complemented variables; conjunction becomes concatenation
/// and disjunction union. The empty conjunction is `1`, the empty
/// disjunction `0`.
pub fn dnf_to_term(phi: &Dnf) -> Term {
    let mut clauses = phi.clauses.iter().map(|clause| {
        let mut lits = clause.iter().map(|l| {
            if l.positive {
                Term::Var(l.var.clone())
            } else {
                Term::CVar(l.var.clone())
            }
        });
        match lits.next() {
            None => Term::One,
            Some(first) => lits.fold(first, |acc, t| Term::Concat(Box::new(acc), Box::new(t))),
        }
    });
    match clauses.next() {
        None => Term::Zero,
        Some(first) => clauses.fold(first, |acc, t| Term::Union(Box::new(acc), Box::new(t))),
    }
}
