//! Valuations over finite letter alphabets and membership of letter-words in
//! the interpretation of a term, computed by dynamic programming over the
//! contiguous factors of a word.
//!
//! A valuation assigns each variable a language over letters `l0 .. l(n-1)`.
//! Complemented variables denote the complement of the assigned language
//! within all words over the alphabet. The factor tables computed here back
//! every decision procedure in the crate and re-verify every counterexample.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::term::{Term, Variable};

/// A letter `l{index}` of a finite alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub usize);

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}", self.0)
    }
}

/// A word over letters. Ordered lexicographically; displays as `I` when empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterWord(Vec<Letter>);

impl LetterWord {
    pub fn new(letters: Vec<Letter>) -> LetterWord {
        LetterWord(letters)
    }

    /// Builds a word from raw letter indices.
    pub fn from_indices(indices: &[usize]) -> LetterWord {
        LetterWord(indices.iter().map(|&i| Letter(i)).collect())
    }

    pub fn empty() -> LetterWord {
        LetterWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
}

impl fmt::Display for LetterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A complement-free regular expression over letters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterRegex {
    Zero,
    One,
    Letter(Letter),
    Union(Box<LetterRegex>, Box<LetterRegex>),
    Concat(Box<LetterRegex>, Box<LetterRegex>),
    Star(Box<LetterRegex>),
}

impl LetterRegex {
    pub fn letter(index: usize) -> LetterRegex {
        LetterRegex::Letter(Letter(index))
    }

    pub fn union(a: LetterRegex, b: LetterRegex) -> LetterRegex {
        LetterRegex::Union(Box::new(a), Box::new(b))
    }

    pub fn concat(a: LetterRegex, b: LetterRegex) -> LetterRegex {
        LetterRegex::Concat(Box::new(a), Box::new(b))
    }

    pub fn star(a: LetterRegex) -> LetterRegex {
        LetterRegex::Star(Box::new(a))
    }

    fn nullable(&self) -> bool {
        match self {
            LetterRegex::Zero | LetterRegex::Letter(_) => false,
            LetterRegex::One | LetterRegex::Star(_) => true,
            LetterRegex::Union(a, b) => a.nullable() || b.nullable(),
            LetterRegex::Concat(a, b) => a.nullable() && b.nullable(),
        }
    }

    /// Brzozowski derivative by one letter, simplified so the state stays small.
    fn deriv(&self, l: Letter) -> LetterRegex {
        fn union(a: LetterRegex, b: LetterRegex) -> LetterRegex {
            if a == LetterRegex::Zero {
                return b;
            }
            if b == LetterRegex::Zero || a == b {
                return a;
            }
            LetterRegex::Union(Box::new(a), Box::new(b))
        }
        fn concat(a: LetterRegex, b: LetterRegex) -> LetterRegex {
            if a == LetterRegex::Zero || b == LetterRegex::Zero {
                return LetterRegex::Zero;
            }
            if a == LetterRegex::One {
                return b;
            }
            if b == LetterRegex::One {
                return a;
            }
            LetterRegex::Concat(Box::new(a), Box::new(b))
        }
        match self {
            LetterRegex::Zero | LetterRegex::One => LetterRegex::Zero,
            LetterRegex::Letter(k) => {
                if *k == l {
                    LetterRegex::One
                } else {
                    LetterRegex::Zero
                }
            }
            LetterRegex::Union(a, b) => union(a.deriv(l), b.deriv(l)),
            LetterRegex::Concat(a, b) => {
                let head = concat(a.deriv(l), (**b).clone());
                if a.nullable() {
                    union(head, b.deriv(l))
                } else {
                    head
                }
            }
            LetterRegex::Star(a) => concat(a.deriv(l), LetterRegex::Star(a.clone())),
        }
    }

    fn max_letter(&self) -> Option<usize> {
        match self {
            LetterRegex::Zero | LetterRegex::One => None,
            LetterRegex::Letter(l) => Some(l.0),
            LetterRegex::Union(a, b) | LetterRegex::Concat(a, b) => {
                match (a.max_letter(), b.max_letter()) {
                    (x, None) => x,
                    (None, y) => y,
                    (Some(x), Some(y)) => Some(x.max(y)),
                }
            }
            LetterRegex::Star(a) => a.max_letter(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let level = match self {
            LetterRegex::Union(_, _) => 0,
            LetterRegex::Concat(_, _) => 1,
            LetterRegex::Star(_) => 2,
            LetterRegex::Zero | LetterRegex::One | LetterRegex::Letter(_) => 3,
        };
        let parens = level < ctx;
        if parens {
            f.write_str("(")?;
        }
        match self {
            LetterRegex::Zero => f.write_str("0")?,
            LetterRegex::One => f.write_str("1")?,
            LetterRegex::Letter(l) => write!(f, "{l}")?,
            LetterRegex::Union(a, b) => {
                a.fmt_prec(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 1)?;
            }
            LetterRegex::Concat(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" ")?;
                b.fmt_prec(f, 2)?;
            }
            LetterRegex::Star(a) => {
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

/// Concatenation displays as juxtaposition: `l0 + l0 (l0 + l1)* l0`.
impl fmt::Display for LetterRegex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A declarative regular language over letters: either an explicit finite set
/// of words or a complement-free regular expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LangSpec {
    Finite(BTreeSet<LetterWord>),
    Regex(LetterRegex),
}

impl LangSpec {
    /// A finite language from raw index words.
    pub fn finite(words: &[&[usize]]) -> LangSpec {
        LangSpec::Finite(words.iter().map(|w| LetterWord::from_indices(w)).collect())
    }

    /// The largest letter index mentioned, if any.
    pub fn max_letter(&self) -> Option<usize> {
        match self {
            LangSpec::Finite(words) => {
                words.iter().flat_map(|w| w.letters()).map(|l| l.0).max()
            }
            LangSpec::Regex(r) => r.max_letter(),
        }
    }
}

/// Finite sets display as `{ I, l0, l0 l1 }`; regexes as their expression.
impl fmt::Display for LangSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LangSpec::Finite(words) => {
                f.write_str("{")?;
                for (i, w) in words.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, " {w}")?;
                }
                f.write_str(" }")
            }
            LangSpec::Regex(r) => write!(f, "{r}"),
        }
    }
}

/// Decides membership of a letter-word in a language spec.
///
/// Total: letters outside the spec's letters simply fail to match. Regex
/// membership walks simplified derivatives letter by letter.
pub fn word_in_spec(w: &[Letter], s: &LangSpec) -> bool {
    match s {
        LangSpec::Finite(words) => words.contains(&LetterWord(w.to_vec())),
        LangSpec::Regex(r) => {
            let mut state = r.clone();
            for &l in w {
                state = state.deriv(l);
                if state == LetterRegex::Zero {
                    return false;
                }
            }
            state.nullable()
        }
    }
}

/// An evaluation failure: a word mentioned a letter outside the valuation's alphabet.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("letter l{letter} out of range for alphabet of size {alphabet_size}")]
    LetterOutOfRange { letter: usize, alphabet_size: usize },
}

/// A mapping from variables to languages over a shared alphabet of
/// `alphabet_size` letters. Variables absent from the mapping denote the
/// empty language (their complements denote every word).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    alphabet_size: usize,
    assignment: BTreeMap<Variable, LangSpec>,
}

impl Valuation {
    /// Builds a valuation, rejecting specs that mention out-of-range letters.
    pub fn new(
        alphabet_size: usize,
        assignment: BTreeMap<Variable, LangSpec>,
    ) -> Result<Valuation, EvalError> {
        for spec in assignment.values() {
            if let Some(letter) = spec.max_letter() {
                if letter >= alphabet_size {
                    return Err(EvalError::LetterOutOfRange { letter, alphabet_size });
                }
            }
        }
        Ok(Valuation { alphabet_size, assignment })
    }

    /// The valuation mapping every variable to the empty language.
    pub fn empty(alphabet_size: usize) -> Valuation {
        Valuation { alphabet_size, assignment: BTreeMap::new() }
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn assignment(&self) -> &BTreeMap<Variable, LangSpec> {
        &self.assignment
    }

    /// The spec assigned to `x`, if explicitly present.
    pub fn spec(&self, x: &Variable) -> Option<&LangSpec> {
        self.assignment.get(x)
    }

    /// Membership of a letter-word in the language assigned to `x`.
    pub fn var_contains(&self, x: &Variable, w: &[Letter]) -> bool {
        self.assignment.get(x).is_some_and(|s| word_in_spec(w, s))
    }

    fn check_word(&self, w: &[Letter]) -> Result<(), EvalError> {
        for l in w {
            if l.0 >= self.alphabet_size {
                return Err(EvalError::LetterOutOfRange {
                    letter: l.0,
                    alphabet_size: self.alphabet_size,
                });
            }
        }
        Ok(())
    }
}

/// A postorder index of a term's subterm DAG; the root is the last entry.
#[derive(Clone, Debug)]
pub(crate) struct TermIndex {
    nodes: Vec<Node>,
    subterms: Vec<Term>,
}

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Var(Variable),
    CVar(Variable),
    One,
    Zero,
    Union(usize, usize),
    Concat(usize, usize),
    Star(usize),
}

impl TermIndex {
    pub(crate) fn build(t: &Term) -> TermIndex {
        let mut idx = TermIndex { nodes: Vec::new(), subterms: Vec::new() };
        idx.push(t);
        idx
    }

    fn push(&mut self, t: &Term) -> usize {
        let node = match t {
            Term::Var(v) => Node::Var(v.clone()),
            Term::CVar(v) => Node::CVar(v.clone()),
            Term::One => Node::One,
            Term::Zero => Node::Zero,
            Term::Union(a, b) => {
                let ia = self.push(a);
                let ib = self.push(b);
                Node::Union(ia, ib)
            }
            Term::Concat(a, b) => {
                let ia = self.push(a);
                let ib = self.push(b);
                Node::Concat(ia, ib)
            }
            Term::Star(a) => {
                let ia = self.push(a);
                Node::Star(ia)
            }
        };
        self.nodes.push(node);
        self.subterms.push(t.clone());
        self.nodes.len() - 1
    }

    pub(crate) fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn subterm(&self, id: usize) -> &Term {
        &self.subterms[id]
    }
}

/// Number of factors (i, j), 0 <= i <= j <= n.
pub(crate) fn factor_count(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Dense index of the factor (i, j) within a row, grouping by i.
pub(crate) fn factor_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i <= j && j <= n);
    i * (2 * n + 3 - i) / 2 + (j - i)
}

/// Fills one membership row per subterm over the factor space of size `n`.
/// `leaf(x, i, j)` decides whether the factor word at (i, j) lies in the
/// language of variable `x`; complemented variables negate it.
pub(crate) fn fill_tables<F>(idx: &TermIndex, n: usize, leaf: &mut F) -> Vec<Vec<bool>>
where
    F: FnMut(&Variable, usize, usize) -> bool,
{
    let fc = factor_count(n);
    let mut rows: Vec<Vec<bool>> = Vec::with_capacity(idx.len());
    for node in &idx.nodes {
        let mut row = vec![false; fc];
        match node {
            Node::Var(x) => {
                for i in 0..=n {
                    for j in i..=n {
                        row[factor_index(i, j, n)] = leaf(x, i, j);
                    }
                }
            }
            Node::CVar(x) => {
                for i in 0..=n {
                    for j in i..=n {
                        row[factor_index(i, j, n)] = !leaf(x, i, j);
                    }
                }
            }
            Node::One => {
                for i in 0..=n {
                    row[factor_index(i, i, n)] = true;
                }
            }
            Node::Zero => {}
            Node::Union(a, b) => {
                let (ra, rb) = (&rows[*a], &rows[*b]);
                for k in 0..fc {
                    row[k] = ra[k] || rb[k];
                }
            }
            Node::Concat(a, b) => {
                let (ra, rb) = (&rows[*a], &rows[*b]);
                for i in 0..=n {
                    for j in i..=n {
                        let hit = (i..=j).any(|k| {
                            ra[factor_index(i, k, n)] && rb[factor_index(k, j, n)]
                        });
                        row[factor_index(i, j, n)] = hit;
                    }
                }
            }
            Node::Star(a) => {
                // Transitive closure of strictly-advancing steps; empty-word
                // entries of the body cannot advance a split and are ignored.
                let ra = &rows[*a];
                let mut reach = vec![vec![false; n + 1]; n + 1];
                for p in 0..=n {
                    for q in p + 1..=n {
                        reach[p][q] = ra[factor_index(p, q, n)];
                    }
                }
                for mid in 0..=n {
                    for p in 0..=n {
                        if reach[p][mid] {
                            for q in 0..=n {
                                if reach[mid][q] {
                                    reach[p][q] = true;
                                }
                            }
                        }
                    }
                }
                for i in 0..=n {
                    for j in i..=n {
                        row[factor_index(i, j, n)] = i == j || reach[i][j];
                    }
                }
            }
        }
        rows.push(row);
    }
    rows
}

/// Handle to a subterm row of a [`MembershipTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubtermId(usize);

/// Completed factor-membership tables for every subterm of a term.
#[derive(Clone, Debug)]
pub struct MembershipTable {
    n: usize,
    index: TermIndex,
    rows: Vec<Vec<bool>>,
}

impl MembershipTable {
    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    /// The whole term's row handle.
    pub fn root(&self) -> SubtermId {
        SubtermId(self.index.root())
    }

    /// Locates a structurally equal subterm, if the term contains one.
    pub fn find_subterm(&self, t: &Term) -> Option<SubtermId> {
        (0..self.index.len()).find(|&id| self.index.subterm(id) == t).map(SubtermId)
    }

    /// Whether the factor word at (i, j) belongs to the subterm's interpretation.
    pub fn get(&self, id: SubtermId, i: usize, j: usize) -> bool {
        assert!(i <= j && j <= self.n, "factor ({i}, {j}) out of range for n = {}", self.n);
        self.rows[id.0][factor_index(i, j, self.n)]
    }
}

/// Computes the factor-membership tables of `t` under `v`, over the canonical
/// word `l0 .. l(n-1)` where n is `v`'s alphabet size.
pub fn eval_factors(t: &Term, v: &Valuation) -> MembershipTable {
    let n = v.alphabet_size();
    let letters: Vec<Letter> = (0..n).map(Letter).collect();
    let index = TermIndex::build(t);
    let rows = fill_tables(&index, n, &mut |x, i, j| v.var_contains(x, &letters[i..j]));
    MembershipTable { n, index, rows }
}

/// Decides whether an arbitrary letter-word lies in the interpretation of `t`
/// under `v`, by re-indexing the word's positions as a factor space.
pub fn member(w: &LetterWord, t: &Term, v: &Valuation) -> Result<bool, EvalError> {
    v.check_word(w.letters())?;
    let m = w.len();
    let index = TermIndex::build(t);
    let rows = fill_tables(&index, m, &mut |x, i, j| v.var_contains(x, &w.letters()[i..j]));
    Ok(rows[index.root()][factor_index(0, m, m)])
}

/// The words-to-letters valuation: a fresh alphabet with one letter per part,
/// where each variable holds exactly the factors whose part-concatenations lie
/// in the variable's original language.
pub fn words_to_letters(v: &Valuation, parts: &[LetterWord]) -> Result<Valuation, EvalError> {
    for p in parts {
        v.check_word(p.letters())?;
    }
    let n = parts.len();
    let mut assignment = BTreeMap::new();
    for (x, spec) in v.assignment() {
        let mut words = BTreeSet::new();
        for i in 0..=n {
            for j in i..=n {
                let concat: Vec<Letter> =
                    parts[i..j].iter().flat_map(|p| p.letters().iter().copied()).collect();
                if word_in_spec(&concat, spec) {
                    words.insert(LetterWord::new((i..j).map(Letter).collect()));
                }
            }
        }
        assignment.insert(x.clone(), LangSpec::Finite(words));
    }
    Valuation::new(n, assignment)
}
