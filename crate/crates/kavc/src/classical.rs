//! Classical regular-language semantics: automata for terms read as regular
//! expressions over the doubled alphabet (each literal a distinct symbol) or
//! over a declared variable alphabet extended with one surrogate symbol for
//! every other variable, plus product-based inclusion and equivalence checks
//! returning shortest separating words, and the language oracle for
//! complement-free terms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::term::{Literal, Term, Variable};

/// Precondition violations of the automata constructions.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("term mentions undeclared variable {0}")]
    UndeclaredVariable(Variable),
    #[error("term contains a complemented variable")]
    NotComplementFree,
}

/// A symbol of the declared-alphabet reading: a declared variable or the
/// surrogate standing for every variable outside the query.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VSymbol {
    Var(Variable),
    Other,
}

impl fmt::Display for VSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VSymbol::Var(x) => write!(f, "{x}"),
            VSymbol::Other => f.write_str("\u{22a0}"),
        }
    }
}

/// A nondeterministic finite automaton with epsilon transitions, one initial
/// and one accepting state. Immutable after construction; every transition
/// references declared states and alphabet symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa<S> {
    initial: usize,
    accepting: usize,
    eps: Vec<BTreeSet<usize>>,
    delta: Vec<BTreeMap<S, BTreeSet<usize>>>,
    alphabet: BTreeSet<S>,
}

impl<S: Ord + Clone> Nfa<S> {
    pub fn state_count(&self) -> usize {
        self.eps.len()
    }

    pub fn alphabet(&self) -> &BTreeSet<S> {
        &self.alphabet
    }

    fn closure(&self, mut set: BTreeSet<usize>) -> BTreeSet<usize> {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &r in &self.eps[q] {
                if set.insert(r) {
                    stack.push(r);
                }
            }
        }
        set
    }

    fn step(&self, set: &BTreeSet<usize>, symbol: &S) -> BTreeSet<usize> {
        let mut next = BTreeSet::new();
        for &q in set {
            if let Some(targets) = self.delta[q].get(symbol) {
                next.extend(targets.iter().copied());
            }
        }
        self.closure(next)
    }

    fn start(&self) -> BTreeSet<usize> {
        self.closure([self.initial].into())
    }

    fn is_accepting(&self, set: &BTreeSet<usize>) -> bool {
        set.contains(&self.accepting)
    }

    /// Membership of a word; symbols outside the alphabet simply never match
    /// a transition.
    pub fn accepts(&self, word: &[S]) -> bool {
        let mut set = self.start();
        for symbol in word {
            set = self.step(&set, symbol);
            if set.is_empty() {
                return false;
            }
        }
        self.is_accepting(&set)
    }
}

/// Accumulates states and transitions during the inductive construction.
struct Builder<S> {
    eps: Vec<BTreeSet<usize>>,
    delta: Vec<BTreeMap<S, BTreeSet<usize>>>,
}

impl<S: Ord + Clone> Builder<S> {
    fn new() -> Builder<S> {
        Builder { eps: Vec::new(), delta: Vec::new() }
    }

    fn state(&mut self) -> usize {
        self.eps.push(BTreeSet::new());
        self.delta.push(BTreeMap::new());
        self.eps.len() - 1
    }

    fn eps_edge(&mut self, from: usize, to: usize) {
        self.eps[from].insert(to);
    }

    fn sym_edge(&mut self, from: usize, symbol: S, to: usize) {
        self.delta[from].entry(symbol).or_default().insert(to);
    }

    fn finish(self, initial: usize, accepting: usize, alphabet: BTreeSet<S>) -> Nfa<S> {
        debug_assert!(
            self.delta.iter().all(|row| row.keys().all(|s| alphabet.contains(s))),
            "transition over undeclared symbol"
        );
        Nfa { initial, accepting, eps: self.eps, delta: self.delta, alphabet }
    }
}

/// Thompson-style construction; literal leaves are delegated so the two
/// alphabet readings share the operator cases.
fn fragment<S: Ord + Clone>(
    builder: &mut Builder<S>,
    t: &Term,
    leaf: &mut impl FnMut(&mut Builder<S>, &Literal) -> (usize, usize),
) -> (usize, usize) {
    match t {
        Term::Var(x) => leaf(builder, &Literal::positive(x.clone())),
        Term::CVar(x) => leaf(builder, &Literal::negative(x.clone())),
        Term::One => {
            let s = builder.state();
            let f = builder.state();
            builder.eps_edge(s, f);
            (s, f)
        }
        Term::Zero => {
            let s = builder.state();
            let f = builder.state();
            (s, f)
        }
        Term::Union(a, b) => {
            let s = builder.state();
            let f = builder.state();
            let (sa, fa) = fragment(builder, a, leaf);
            let (sb, fb) = fragment(builder, b, leaf);
            builder.eps_edge(s, sa);
            builder.eps_edge(s, sb);
            builder.eps_edge(fa, f);
            builder.eps_edge(fb, f);
            (s, f)
        }
        Term::Concat(a, b) => {
            let (sa, fa) = fragment(builder, a, leaf);
            let (sb, fb) = fragment(builder, b, leaf);
            builder.eps_edge(fa, sb);
            (sa, fb)
        }
        Term::Star(a) => {
            let s = builder.state();
            let f = builder.state();
            let (sa, fa) = fragment(builder, a, leaf);
            builder.eps_edge(s, sa);
            builder.eps_edge(s, f);
            builder.eps_edge(fa, sa);
            builder.eps_edge(fa, f);
            (s, f)
        }
    }
}

/// Builds the automaton of `t` read as a regular expression over the doubled
/// alphabet: each literal (x or ~x) is its own symbol.
pub fn nfa_over_vprime(t: &Term) -> Nfa<Literal> {
    let alphabet: BTreeSet<Literal> = t
        .variables()
        .into_iter()
        .flat_map(|x| [Literal::positive(x.clone()), Literal::negative(x)])
        .collect();
    let mut builder = Builder::new();
    let mut leaf = |b: &mut Builder<Literal>, lit: &Literal| {
        let s = b.state();
        let f = b.state();
        b.sym_edge(s, lit.clone(), f);
        (s, f)
    };
    let (initial, accepting) = fragment(&mut builder, t, &mut leaf);
    builder.finish(initial, accepting, alphabet)
}

/// Builds the automaton of `t` over the alphabet of declared variables plus
/// the surrogate symbol: a leaf x recognizes the one-symbol word x, a leaf ~x
/// recognizes every word except it, via a four-state complete recognizer.
pub fn nfa_over_v(t: &Term, declared: &BTreeSet<Variable>) -> Result<Nfa<VSymbol>, ClassicalError> {
    if let Some(x) = t.variables().difference(declared).next() {
        return Err(ClassicalError::UndeclaredVariable(x.clone()));
    }
    let alphabet: BTreeSet<VSymbol> = declared
        .iter()
        .map(|x| VSymbol::Var(x.clone()))
        .chain([VSymbol::Other])
        .collect();
    let mut builder = Builder::new();
    let mut leaf = |b: &mut Builder<VSymbol>, lit: &Literal| {
        let own = VSymbol::Var(lit.var.clone());
        let s = b.state();
        if lit.is_positive() {
            let f = b.state();
            b.sym_edge(s, own, f);
            return (s, f);
        }
        // Accept everything except the one-symbol word for the variable:
        // q1 holds exactly after that word, q2 after any other nonempty word.
        let q1 = b.state();
        let q2 = b.state();
        let f = b.state();
        for symbol in &alphabet {
            if *symbol == own {
                b.sym_edge(s, own.clone(), q1);
            } else {
                b.sym_edge(s, symbol.clone(), q2);
            }
            b.sym_edge(q1, symbol.clone(), q2);
            b.sym_edge(q2, symbol.clone(), q2);
        }
        b.eps_edge(s, f);
        b.eps_edge(q2, f);
        (s, f)
    };
    let (initial, accepting) = fragment(&mut builder, t, &mut leaf);
    Ok(builder.finish(initial, accepting, alphabet))
}

/// Decides language inclusion by determinized product search; on failure the
/// witness is the shortest, lexicographically least word accepted by `a` and
/// rejected by `b`.
pub fn lang_incl<S: Ord + Clone>(a: &Nfa<S>, b: &Nfa<S>) -> (bool, Option<Vec<S>>) {
    let alphabet: BTreeSet<S> = a.alphabet.union(&b.alphabet).cloned().collect();
    let start = (a.start(), b.start());
    if a.is_accepting(&start.0) && !b.is_accepting(&start.1) {
        return (false, Some(Vec::new()));
    }
    let mut visited = BTreeSet::new();
    visited.insert(start.clone());
    let mut queue = VecDeque::new();
    queue.push_back((start, Vec::new()));
    while let Some(((sa, sb), word)) = queue.pop_front() {
        for symbol in &alphabet {
            let na = a.step(&sa, symbol);
            let nb = b.step(&sb, symbol);
            if na.is_empty() {
                continue;
            }
            let key = (na, nb);
            if !visited.insert(key.clone()) {
                continue;
            }
            let mut next_word = word.clone();
            next_word.push(symbol.clone());
            if a.is_accepting(&key.0) && !b.is_accepting(&key.1) {
                return (false, Some(next_word));
            }
            queue.push_back((key, next_word));
        }
    }
    (true, None)
}

/// Language equivalence via inclusion in both directions.
pub fn lang_equiv<S: Ord + Clone>(a: &Nfa<S>, b: &Nfa<S>) -> bool {
    lang_incl(a, b).0 && lang_incl(b, a).0
}

/// Decides LANG-validity of `t1 = t2` for complement-free terms, for which it
/// coincides with classical language equivalence of the two expressions.
pub fn ka_lang_decide(t1: &Term, t2: &Term) -> Result<bool, ClassicalError> {
    if !t1.is_complement_free() || !t2.is_complement_free() {
        return Err(ClassicalError::NotComplementFree);
    }
    Ok(lang_equiv(&nfa_over_vprime(t1), &nfa_over_vprime(t2)))
}
