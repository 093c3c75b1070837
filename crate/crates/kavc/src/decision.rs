//! Decision procedures for inclusions `t1 <= t2` between terms, valid iff the
//! inclusion holds under every language valuation over every alphabet.
//!
//! Each fragment gets a complete procedure: identity inclusions `1 <= t`,
//! composition-free left-hand sides, literal-word left-hand sides, and
//! star-free left-hand sides. Starred left-hand sides get a bounded refuter
//! that either finds a counterexample or honestly answers `Unknown`. Every
//! refutation carries a concrete valuation and witness word and is re-checked
//! by the evaluator before being returned.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::eval::{
    factor_index, fill_tables, member, LangSpec, Letter, LetterWord, TermIndex, Valuation,
};
use crate::term::{lang_vprime_enumerate, lang_vprime_finite, top_expansion, LitWord, Query,
    QueryKind, Term, Variable};

/// Longest literal word the factor-subset search supports: the per-variable
/// factor set must fit in a 64-bit mask, and 1 + n(n+1)/2 <= 64 caps n at 10.
pub const MAX_WITNESS_LEN: usize = 10;

/// Which procedure produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Procedure {
    Syntactic,
    Identity,
    CompositionFree,
    Word,
    StarFree,
    Bounded,
}

impl Procedure {
    pub fn name(self) -> &'static str {
        match self {
            Procedure::Syntactic => "syntactic",
            Procedure::Identity => "identity",
            Procedure::CompositionFree => "composition_free",
            Procedure::Word => "word",
            Procedure::StarFree => "star_free",
            Procedure::Bounded => "bounded",
        }
    }
}

/// A refuting valuation with its witness word; `lhs_word` records the literal
/// word of the left-hand side's language that produced the witness, when the
/// refutation went through one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub valuation: Valuation,
    pub witness: LetterWord,
    pub lhs_word: Option<LitWord>,
}

impl Counterexample {
    /// True iff the witness lies in the lhs interpretation but not the rhs,
    /// and in the lhs_word's interpretation when one is recorded.
    pub fn verifies(&self, lhs: &Term, rhs: &Term) -> bool {
        let in_lhs = member(&self.witness, lhs, &self.valuation);
        let in_rhs = member(&self.witness, rhs, &self.valuation);
        let in_word = match &self.lhs_word {
            None => Ok(true),
            Some(u) => member(&self.witness, &u.embed(), &self.valuation),
        };
        in_lhs == Ok(true) && in_rhs == Ok(false) && in_word == Ok(true)
    }

    /// Every refutation the crate produces passes through here; a failure is
    /// an internal bug, never a property of the input.
    fn into_verified(self, lhs: &Term, rhs: &Term) -> Counterexample {
        assert!(
            self.verifies(lhs, rhs),
            "internal error: counterexample failed verification for {lhs} <= {rhs}: {self:?}"
        );
        self
    }
}

/// Outcome of a decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Refuted(Counterexample),
    Unknown { bound: usize },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn status(&self) -> Status {
        match self {
            Verdict::Valid => Status::Valid,
            Verdict::Refuted(_) => Status::Refuted,
            Verdict::Unknown { .. } => Status::Unknown,
        }
    }
}

/// A verdict with the counterexample stripped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Valid,
    Refuted,
    Unknown,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Valid => "valid",
            Status::Refuted => "refuted",
            Status::Unknown => "unknown",
        }
    }
}

/// Precondition violations of the shape-restricted procedures.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum DecisionError {
    #[error("left-hand side is not composition-free")]
    NotCompositionFree,
    #[error("left-hand side is not star-free")]
    NotStarFree,
}

/// Decides `1 <= t` by enumerating all valuations over the empty alphabet:
/// each variable holds either the empty language or {I}.
pub fn decide_identity_inclusion(t: &Term) -> Verdict {
    let vars: Vec<Variable> = t.variables().into_iter().collect();
    assert!(vars.len() < 63, "too many variables for the identity enumeration");
    let var_pos: BTreeMap<&Variable, usize> =
        vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let idx = TermIndex::build(t);
    for mask in 0u64..1 << vars.len() {
        let rows = fill_tables(&idx, 0, &mut |x, _, _| mask >> var_pos[x] & 1 == 1);
        if !rows[idx.root()][factor_index(0, 0, 0)] {
            let assignment = vars
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let words: BTreeSet<LetterWord> = if mask >> i & 1 == 1 {
                        [LetterWord::empty()].into()
                    } else {
                        BTreeSet::new()
                    };
                    (v.clone(), LangSpec::Finite(words))
                })
                .collect();
            let cex = Counterexample {
                valuation: Valuation::new(0, assignment).unwrap(),
                witness: LetterWord::empty(),
                lhs_word: Some(LitWord::empty()),
            };
            return Verdict::Refuted(cex.into_verified(&Term::One, t));
        }
    }
    Verdict::Valid
}

/// Bit position of the factor (i, j) within a per-variable factor mask:
/// bit 0 is the empty word, spans follow in (i, j)-lexicographic order.
fn factor_bit(i: usize, j: usize, n: usize) -> usize {
    if i == j {
        0
    } else {
        1 + i * (2 * n - i + 1) / 2 + (j - i - 1)
    }
}

/// Variables of `t` partitioned by how they occur: under `Var`, under `CVar`.
fn polarities(t: &Term) -> (BTreeSet<Variable>, BTreeSet<Variable>) {
    fn walk(t: &Term, pos: &mut BTreeSet<Variable>, neg: &mut BTreeSet<Variable>) {
        match t {
            Term::Var(v) => {
                pos.insert(v.clone());
            }
            Term::CVar(v) => {
                neg.insert(v.clone());
            }
            Term::One | Term::Zero => {}
            Term::Union(a, b) | Term::Concat(a, b) => {
                walk(a, pos, neg);
                walk(b, pos, neg);
            }
            Term::Star(a) => walk(a, pos, neg),
        }
    }
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    walk(t, &mut pos, &mut neg);
    (pos, neg)
}

/// Decides `u <= t` for a literal word `u` by searching the valuations over
/// n = |u| letters that assign each variable a subset of the factor words.
///
/// The search space is shaped by two exact reductions:
/// * position pinning: a refuting valuation may be assumed to satisfy
///   `l_i in interp(u_i)` for every position (the words-to-letters valuation
///   of any refutation does), which forces one bit per position;
/// * polarity extremes: the witness stays in interp(u) whatever the free bits
///   do, so a variable occurring only under `Var` in `t` can be fixed to the
///   all-out extreme and one occurring only under `CVar` to all-in; only
///   variables occurring under both need enumeration.
///
/// Panics if |u| exceeds [`MAX_WITNESS_LEN`].
pub fn decide_word_inclusion(u: &LitWord, t: &Term) -> Verdict {
    if u.is_empty() {
        return decide_identity_inclusion(t);
    }
    let n = u.len();
    assert!(n <= MAX_WITNESS_LEN, "literal word of length {n} exceeds {MAX_WITNESS_LEN}");
    let vars: Vec<Variable> = {
        let mut s = u.variables();
        s.extend(t.variables());
        s.into_iter().collect()
    };
    let k = vars.len();
    let var_pos: BTreeMap<&Variable, usize> =
        vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let fbits = 1 + n * (n + 1) / 2;
    let full: u64 = if fbits == 64 { u64::MAX } else { (1 << fbits) - 1 };

    let mut pin_mask = vec![0u64; k];
    let mut pin_val = vec![0u64; k];
    for (i, lit) in u.literals().iter().enumerate() {
        let b = factor_bit(i, i + 1, n);
        let vi = var_pos[&lit.var];
        pin_mask[vi] |= 1 << b;
        if lit.is_positive() {
            pin_val[vi] |= 1 << b;
        }
    }

    let (pos, neg) = polarities(t);
    let mut masks = vec![0u64; k];
    let mut mixed: Vec<(usize, Vec<usize>)> = Vec::new();
    for (vi, v) in vars.iter().enumerate() {
        let free = full & !pin_mask[vi];
        masks[vi] = pin_val[vi];
        match (pos.contains(v), neg.contains(v)) {
            (true, true) => {
                let positions: Vec<usize> = (0..fbits).filter(|b| free >> b & 1 == 1).collect();
                mixed.push((vi, positions));
            }
            (false, true) => masks[vi] |= free,
            _ => {}
        }
    }

    let idx = TermIndex::build(t);
    let mut counters: Vec<u64> = vec![0; mixed.len()];
    loop {
        for (m, (vi, positions)) in mixed.iter().enumerate() {
            let mut mask = pin_val[*vi];
            for (b, p) in positions.iter().enumerate() {
                if counters[m] >> b & 1 == 1 {
                    mask |= 1 << p;
                }
            }
            masks[*vi] = mask;
        }
        let rows = fill_tables(&idx, n, &mut |x, i, j| {
            masks[var_pos[x]] >> factor_bit(i, j, n) & 1 == 1
        });
        if !rows[idx.root()][factor_index(0, n, n)] {
            let assignment = vars
                .iter()
                .enumerate()
                .map(|(vi, v)| {
                    let mut words = BTreeSet::new();
                    if masks[vi] & 1 == 1 {
                        words.insert(LetterWord::empty());
                    }
                    for i in 0..n {
                        for j in i + 1..=n {
                            if masks[vi] >> factor_bit(i, j, n) & 1 == 1 {
                                words.insert(LetterWord::new((i..j).map(Letter).collect()));
                            }
                        }
                    }
                    (v.clone(), LangSpec::Finite(words))
                })
                .collect();
            let cex = Counterexample {
                valuation: Valuation::new(n, assignment).unwrap(),
                witness: LetterWord::new((0..n).map(Letter).collect()),
                lhs_word: Some(u.clone()),
            };
            return Verdict::Refuted(cex.into_verified(&u.embed(), t));
        }
        // Odometer over the mixed variables, lowest variable least significant.
        let mut m = 0;
        loop {
            if m == mixed.len() {
                return Verdict::Valid;
            }
            counters[m] += 1;
            if counters[m] < 1 << mixed[m].1.len() {
                break;
            }
            counters[m] = 0;
            m += 1;
        }
    }
}

/// Decides `t1 <= t2` for composition-free `t1` by enumerating all valuations
/// over a one-letter alphabet with each variable a subset of {I, l0}; only
/// the witnesses I and l0 need checking.
pub fn decide_composition_free_inclusion(t1: &Term, t2: &Term) -> Result<Verdict, DecisionError> {
    if !t1.is_composition_free() {
        return Err(DecisionError::NotCompositionFree);
    }
    let vars: Vec<Variable> = {
        let mut s = t1.variables();
        s.extend(t2.variables());
        s.into_iter().collect()
    };
    let k = vars.len();
    assert!(k <= 31, "too many variables for the composition-free enumeration");
    let var_pos: BTreeMap<&Variable, usize> =
        vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let idx1 = TermIndex::build(t1);
    let idx2 = TermIndex::build(t2);
    // Per-variable bits: even bit = l0 in the language, odd bit = I in it.
    for mask in 0u64..1 << (2 * k) {
        let rows1 = fill_tables(&idx1, 1, &mut |x, i, j| {
            mask >> (2 * var_pos[x] + usize::from(i == j)) & 1 == 1
        });
        let rows2 = fill_tables(&idx2, 1, &mut |x, i, j| {
            mask >> (2 * var_pos[x] + usize::from(i == j)) & 1 == 1
        });
        for (i, j) in [(0, 0), (0, 1)] {
            let fi = factor_index(i, j, 1);
            if rows1[idx1.root()][fi] && !rows2[idx2.root()][fi] {
                let assignment = vars
                    .iter()
                    .enumerate()
                    .map(|(vi, v)| {
                        let mut words = BTreeSet::new();
                        if mask >> (2 * vi + 1) & 1 == 1 {
                            words.insert(LetterWord::empty());
                        }
                        if mask >> (2 * vi) & 1 == 1 {
                            words.insert(LetterWord::new(vec![Letter(0)]));
                        }
                        (v.clone(), LangSpec::Finite(words))
                    })
                    .collect();
                let cex = Counterexample {
                    valuation: Valuation::new(1, assignment).unwrap(),
                    witness: LetterWord::new((i..j).map(Letter).collect()),
                    lhs_word: None,
                };
                return Ok(Verdict::Refuted(cex.into_verified(t1, t2)));
            }
        }
    }
    Ok(Verdict::Valid)
}

/// Decides `top <= t` where `top` abbreviates `x + ~x` for a variable not
/// occurring in `t`; the expansion is composition-free, so the one-letter
/// enumeration applies.
pub fn decide_universality(t: &Term) -> Verdict {
    let top = top_expansion(&t.variables());
    decide_composition_free_inclusion(&top, t).expect("top expansion is composition-free")
}

/// Decides `t1 <= t2` for star-free `t1` by checking word inclusion for every
/// word of t1's doubled-alphabet language, in length-then-lex order.
pub fn decide_star_free_inclusion(t1: &Term, t2: &Term) -> Result<Verdict, DecisionError> {
    let words = lang_vprime_finite(t1).map_err(|_| DecisionError::NotStarFree)?;
    for u in words {
        if let Verdict::Refuted(cex) = decide_word_inclusion(&u, t2) {
            return Ok(Verdict::Refuted(cex.into_verified(t1, t2)));
        }
    }
    Ok(Verdict::Valid)
}

/// Searches for a refutation of `t1 <= t2` among t1's language words of
/// length at most `max_len`. Complete (returns Valid) only when `t1` is
/// star-free and the bound covers its whole language; otherwise a fruitless
/// search answers `Unknown`.
///
/// Panics if `max_len` exceeds [`MAX_WITNESS_LEN`].
pub fn refute_bounded(t1: &Term, t2: &Term, max_len: usize) -> Verdict {
    assert!(max_len <= MAX_WITNESS_LEN, "bound {max_len} exceeds {MAX_WITNESS_LEN}");
    for u in lang_vprime_enumerate(t1, max_len) {
        if let Verdict::Refuted(cex) = decide_word_inclusion(&u, t2) {
            return Verdict::Refuted(cex.into_verified(t1, t2));
        }
    }
    let exhaustive = t1.is_star_free()
        && lang_vprime_finite(t1).unwrap().iter().all(|w| w.len() <= max_len);
    if exhaustive {
        Verdict::Valid
    } else {
        Verdict::Unknown { bound: max_len }
    }
}

/// One direction of a query, with the procedure that decided it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionReport {
    pub lhs: Term,
    pub rhs: Term,
    pub procedure: Procedure,
    pub verdict: Verdict,
}

/// All directions of a decided query: one for an inequation, two for an
/// equation (left-in-right first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub directions: Vec<DirectionReport>,
}

impl Decision {
    /// Refuted if any direction is, else Unknown if any direction is, else Valid.
    pub fn overall(&self) -> Status {
        if self.directions.iter().any(|d| d.verdict.is_refuted()) {
            return Status::Refuted;
        }
        if self.directions.iter().any(|d| matches!(d.verdict, Verdict::Unknown { .. })) {
            return Status::Unknown;
        }
        Status::Valid
    }
}

/// Decides one inclusion, routing to the strongest complete procedure the
/// left-hand side's shape admits and falling back to the bounded refuter.
pub fn decide_inclusion(lhs: &Term, rhs: &Term, max_len: usize) -> (Procedure, Verdict) {
    if lhs == rhs {
        return (Procedure::Syntactic, Verdict::Valid);
    }
    if *lhs == Term::One {
        return (Procedure::Identity, decide_identity_inclusion(rhs));
    }
    if let Some(u) = lhs.as_lit_word() {
        if u.len() <= MAX_WITNESS_LEN {
            return (Procedure::Word, decide_word_inclusion(&u, rhs));
        }
    } else if lhs.is_composition_free() {
        let verdict = decide_composition_free_inclusion(lhs, rhs).unwrap();
        return (Procedure::CompositionFree, verdict);
    } else if lhs.is_star_free() {
        let fits = lang_vprime_finite(lhs).unwrap().iter().all(|w| w.len() <= MAX_WITNESS_LEN);
        if fits {
            return (Procedure::StarFree, decide_star_free_inclusion(lhs, rhs).unwrap());
        }
    }
    (Procedure::Bounded, refute_bounded(lhs, rhs, max_len.min(MAX_WITNESS_LEN)))
}

/// Decides a parsed query; equations are split into both inclusion directions.
pub fn decide(query: &Query, max_len: usize) -> Decision {
    let mut pairs = vec![(query.lhs.clone(), query.rhs.clone())];
    if query.kind == QueryKind::Equation {
        pairs.push((query.rhs.clone(), query.lhs.clone()));
    }
    let directions = pairs
        .into_iter()
        .map(|(lhs, rhs)| {
            let (procedure, verdict) = decide_inclusion(&lhs, &rhs, max_len);
            DirectionReport { lhs, rhs, procedure, verdict }
        })
        .collect();
    Decision { directions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{dnf_to_term, parse, parse_query, Dnf, Literal};

    fn lw(indices: &[usize]) -> LetterWord {
        LetterWord::from_indices(indices)
    }

    fn lit_word(src: &str) -> LitWord {
        parse(src).unwrap().as_lit_word().unwrap()
    }

    fn finite(words: &[&[usize]]) -> LangSpec {
        LangSpec::finite(words)
    }

    #[test]
    fn identity_inclusion_examples() {
        let phi = Dnf::parse("x & !y\ny\n!x").unwrap();
        assert!(phi.is_valid());
        assert_eq!(decide_identity_inclusion(&dnf_to_term(&phi)), Verdict::Valid);

        match decide_identity_inclusion(&parse("x").unwrap()) {
            Verdict::Refuted(cex) => {
                assert_eq!(cex.valuation.spec(&Variable::new("x")), Some(&finite(&[])));
                assert_eq!(cex.witness, lw(&[]));
                assert_eq!(cex.lhs_word, Some(LitWord::empty()));
            }
            v => panic!("expected refutation, got {v:?}"),
        }

        match decide_identity_inclusion(&parse("~x").unwrap()) {
            Verdict::Refuted(cex) => {
                assert_eq!(cex.valuation.spec(&Variable::new("x")), Some(&finite(&[&[]])));
                assert_eq!(cex.witness, lw(&[]));
            }
            v => panic!("expected refutation, got {v:?}"),
        }
    }

    #[test]
    fn word_inclusion_examples() {
        match decide_word_inclusion(&lit_word("~x"), &parse("~x . ~x").unwrap()) {
            Verdict::Refuted(cex) => {
                assert_eq!(cex.valuation.alphabet_size(), 1);
                assert_eq!(cex.valuation.spec(&Variable::new("x")), Some(&finite(&[&[]])));
                assert_eq!(cex.witness, lw(&[0]));
                assert_eq!(cex.lhs_word, Some(lit_word("~x")));
            }
            v => panic!("expected refutation, got {v:?}"),
        }

        assert_eq!(decide_word_inclusion(&lit_word("x"), &parse("x").unwrap()), Verdict::Valid);
        assert_eq!(
            decide_word_inclusion(&lit_word("x . y"), &parse("x . (y + ~y)").unwrap()),
            Verdict::Valid
        );
    }

    #[test]
    fn word_inclusion_empty_word_delegates_to_identity() {
        assert_eq!(decide_word_inclusion(&LitWord::empty(), &parse("1 + x").unwrap()),
            Verdict::Valid);
        assert!(decide_word_inclusion(&LitWord::empty(), &parse("x").unwrap()).is_refuted());
    }

    #[test]
    fn composition_free_examples() {
        let valid = decide_composition_free_inclusion(
            &parse("x").unwrap(),
            &parse("x . (y + ~y)").unwrap(),
        );
        assert_eq!(valid, Ok(Verdict::Valid));

        match decide_composition_free_inclusion(&parse("y").unwrap(), &parse("~x").unwrap()) {
            Ok(Verdict::Refuted(cex)) => {
                assert_eq!(cex.valuation.spec(&Variable::new("x")), Some(&finite(&[&[0]])));
                assert_eq!(cex.valuation.spec(&Variable::new("y")), Some(&finite(&[&[0]])));
                assert_eq!(cex.witness, lw(&[0]));
            }
            v => panic!("expected refutation, got {v:?}"),
        }

        assert_eq!(
            decide_composition_free_inclusion(
                &parse("x + ~x").unwrap(),
                &parse("y + ~y").unwrap()
            ),
            Ok(Verdict::Valid)
        );

        assert_eq!(
            decide_composition_free_inclusion(&parse("x . y").unwrap(), &parse("x").unwrap()),
            Err(DecisionError::NotCompositionFree)
        );
    }

    #[test]
    fn universality_examples() {
        match decide_universality(&parse("~x + ~y").unwrap()) {
            Verdict::Refuted(cex) => {
                assert!(cex.valuation.var_contains(&Variable::new("x"), lw(&[0]).letters()));
                assert!(cex.valuation.var_contains(&Variable::new("y"), lw(&[0]).letters()));
                assert_eq!(cex.witness, lw(&[0]));
            }
            v => panic!("expected refutation, got {v:?}"),
        }
        assert_eq!(decide_universality(&parse("x + ~x").unwrap()), Verdict::Valid);
        assert!(decide_universality(&parse("~x . ~y").unwrap()).is_refuted());
    }

    #[test]
    fn universality_avoids_capturing_the_top_variable() {
        // The expansion must not reuse a variable of t, even one named _t0.
        assert_eq!(decide_universality(&parse("_t0 + ~_t0").unwrap()), Verdict::Valid);
        assert!(decide_universality(&parse("_t0").unwrap()).is_refuted());
    }

    #[test]
    fn star_free_examples() {
        let refuted = decide_star_free_inclusion(
            &parse("x + ~x").unwrap(),
            &parse("~x . ~y").unwrap(),
        );
        match refuted {
            Ok(Verdict::Refuted(cex)) => assert!(cex.lhs_word.is_some()),
            v => panic!("expected refutation, got {v:?}"),
        }

        assert_eq!(
            decide_star_free_inclusion(&parse("x . y").unwrap(), &parse("x . y").unwrap()),
            Ok(Verdict::Valid)
        );
        assert_eq!(
            decide_star_free_inclusion(&parse("1 + x").unwrap(), &parse("x*").unwrap()),
            Ok(Verdict::Valid)
        );
        assert_eq!(
            decide_star_free_inclusion(&parse("x*").unwrap(), &parse("x").unwrap()),
            Err(DecisionError::NotStarFree)
        );
    }

    #[test]
    fn bounded_refuter_examples() {
        match refute_bounded(&parse("(~x)*").unwrap(), &parse("1 + ~x").unwrap(), 2) {
            Verdict::Refuted(cex) => {
                assert_eq!(cex.lhs_word, Some(lit_word("~x . ~x")));
            }
            v => panic!("expected refutation, got {v:?}"),
        }

        let same = refute_bounded(&parse("x*").unwrap(), &parse("x*").unwrap(), 4);
        assert_eq!(same, Verdict::Unknown { bound: 4 });

        match refute_bounded(&parse("x").unwrap(), &parse("y").unwrap(), 1) {
            Verdict::Refuted(cex) => {
                assert_eq!(cex.valuation.spec(&Variable::new("x")), Some(&finite(&[&[0]])));
                assert_eq!(cex.valuation.spec(&Variable::new("y")), Some(&finite(&[])));
                assert_eq!(cex.witness, lw(&[0]));
            }
            v => panic!("expected refutation, got {v:?}"),
        }
    }

    #[test]
    fn bounded_refuter_is_complete_on_covered_star_free_lhs() {
        assert_eq!(
            refute_bounded(&parse("x . y + 1").unwrap(), &parse("1 + x . (y + x)").unwrap(), 4),
            Verdict::Valid
        );
        // Bound shorter than some language word: cannot claim validity.
        assert_eq!(
            refute_bounded(&parse("x . x . x").unwrap(), &parse("x . x . x").unwrap(), 2),
            Verdict::Unknown { bound: 2 }
        );
    }

    #[test]
    fn dispatcher_examples() {
        let d = decide(&parse_query("~x = ~x . ~x").unwrap(), 8);
        assert_eq!(d.overall(), Status::Refuted);
        assert_eq!(d.directions.len(), 2);
        assert!(d.directions.iter().all(|r| r.procedure == Procedure::Word));
        assert!(d.directions.iter().all(|r| r.verdict.is_refuted()));

        let d = decide(&parse_query("x + ~x = y + ~y").unwrap(), 8);
        assert_eq!(d.overall(), Status::Valid);
        assert!(d.directions.iter().all(|r| r.procedure == Procedure::CompositionFree));

        let d = decide(&parse_query("x* = x*").unwrap(), 8);
        assert_eq!(d.overall(), Status::Valid);
        assert!(d.directions.iter().all(|r| r.procedure == Procedure::Syntactic));

        let d = decide(&parse_query("x* <= x + 1").unwrap(), 8);
        assert_eq!(d.directions[0].procedure, Procedure::Bounded);
        assert_eq!(d.overall(), Status::Refuted);

        let d = decide(&parse_query("1 <= x + ~x").unwrap(), 8);
        assert_eq!(d.directions[0].procedure, Procedure::Identity);
        assert_eq!(d.overall(), Status::Valid);
    }

    #[test]
    fn dispatcher_handles_oversized_star_free_lhs() {
        // Twelve literals: too long for the word search, so the bounded
        // refuter runs and must answer Unknown rather than panic.
        let long = "x . x . x . x . x . x . x . x . x . x . x . x";
        let d = decide(&parse_query(&format!("{long} <= {long}")).unwrap(), 8);
        assert_eq!(d.overall(), Status::Valid);
        let d = decide(&parse_query(&format!("{long} <= y")).unwrap(), 8);
        assert_eq!(d.directions[0].procedure, Procedure::Bounded);
        assert_eq!(d.overall(), Status::Unknown);
    }

    /// All terms of size <= max built from the given leaves.
    fn all_terms(leaves: &[Term], max: usize) -> Vec<Term> {
        let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max + 1];
        if max >= 1 {
            by_size[1] = leaves.to_vec();
        }
        for size in 2..=max {
            let mut out = Vec::new();
            for t in &by_size[size - 1] {
                out.push(Term::star(t.clone()));
            }
            for a_size in 1..size - 1 {
                let b_size = size - 1 - a_size;
                for a in &by_size[a_size] {
                    for b in &by_size[b_size] {
                        out.push(Term::union(a.clone(), b.clone()));
                        out.push(Term::concat(a.clone(), b.clone()));
                    }
                }
            }
            by_size[size] = out;
        }
        by_size.into_iter().flatten().collect()
    }

    /// All literal words over the given variables with length in 1..=max.
    fn all_words(vars: &[&str], max: usize) -> Vec<LitWord> {
        let lits: Vec<Literal> = vars
            .iter()
            .flat_map(|v| {
                [
                    Literal::positive(Variable::new(*v)),
                    Literal::negative(Variable::new(*v)),
                ]
            })
            .collect();
        let mut out = Vec::new();
        let mut level: Vec<Vec<Literal>> = vec![Vec::new()];
        for _ in 0..max {
            let mut next = Vec::new();
            for w in &level {
                for l in &lits {
                    let mut w2 = w.clone();
                    w2.push(l.clone());
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned().map(LitWord::new));
            level = next;
        }
        out
    }

    /// Unpruned oracle: does any factor-subset valuation put the witness in
    /// interp(u) but not interp(t)? Enumerates every assignment outright.
    fn unpruned_refutable(u: &LitWord, t: &Term) -> bool {
        let n = u.len();
        let vars: Vec<Variable> = {
            let mut s = u.variables();
            s.extend(t.variables());
            s.into_iter().collect()
        };
        let var_pos: BTreeMap<&Variable, usize> =
            vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let fbits = 1 + n * (n + 1) / 2;
        let idx_u = TermIndex::build(&u.embed());
        let idx_t = TermIndex::build(t);
        let total: u64 = 1 << (fbits * vars.len());
        (0..total).any(|counter| {
            let leaf = |x: &Variable, i: usize, j: usize| {
                counter >> (var_pos[x] * fbits + factor_bit(i, j, n)) & 1 == 1
            };
            let rows_u = fill_tables(&idx_u, n, &mut leaf.clone());
            let rows_t = fill_tables(&idx_t, n, &mut leaf.clone());
            let fi = factor_index(0, n, n);
            rows_u[idx_u.root()][fi] && !rows_t[idx_t.root()][fi]
        })
    }

    #[test]
    fn pruned_search_matches_unpruned_enumeration() {
        let leaves = [
            Term::var("x"),
            Term::cvar("x"),
            Term::var("y"),
            Term::cvar("y"),
            Term::One,
            Term::Zero,
        ];
        let terms = all_terms(&leaves, 3);
        let words = all_words(&["x", "y"], 2);
        let mut checked = 0;
        for u in &words {
            for t in &terms {
                let pruned = decide_word_inclusion(u, t).is_refuted();
                assert_eq!(
                    pruned,
                    unpruned_refutable(u, t),
                    "pruning changed the verdict for {} <= {t}",
                    u.embed()
                );
                checked += 1;
            }
        }
        assert_eq!(checked, words.len() * terms.len());
    }

    #[test]
    fn composition_free_and_star_free_deciders_agree() {
        let leaves = [
            Term::var("x"),
            Term::cvar("x"),
            Term::var("y"),
            Term::One,
            Term::Zero,
        ];
        let lhs_pool: Vec<Term> = all_terms(&leaves, 3)
            .into_iter()
            .filter(|t| t.is_composition_free())
            .collect();
        let rhs_pool = all_terms(&leaves, 3);
        assert!(!lhs_pool.is_empty());
        for t1 in &lhs_pool {
            for t2 in rhs_pool.iter().filter(|t| t.is_star_free()) {
                let a = decide_composition_free_inclusion(t1, t2).unwrap();
                let b = decide_star_free_inclusion(t1, t2).unwrap();
                assert_eq!(a.status(), b.status(), "{t1} <= {t2}");
            }
        }
    }

    #[test]
    fn reduction_chain_matches_truth_table_validity() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let names = ["p", "q", "r", "s"];
        for _ in 0..60 {
            let clause_count = rng.gen_range(1..=3);
            let clauses: Vec<Vec<crate::term::DnfLiteral>> = (0..clause_count)
                .map(|_| {
                    (0..rng.gen_range(1..=3))
                        .map(|_| crate::term::DnfLiteral {
                            var: Variable::new(names[rng.gen_range(0..names.len())]),
                            positive: rng.gen_bool(0.5),
                        })
                        .collect()
                })
                .collect();
            let phi = Dnf::new(clauses);
            let t = dnf_to_term(&phi);
            let valid = phi.is_valid();

            assert_eq!(decide_identity_inclusion(&t).is_valid(), valid, "{t}");

            let z = crate::term::fresh_variable("z", &t.variables());
            let zt = Term::concat(Term::Var(z.clone()), t.clone());
            let (proc_used, verdict) =
                decide_inclusion(&Term::Var(z.clone()), &zt, 8);
            assert_eq!(proc_used, Procedure::Word);
            assert_eq!(verdict.is_valid(), valid, "{z} <= {zt}");

            let top = top_expansion(&t.variables());
            let verdict = decide_universality(&Term::concat(top, t.clone()));
            assert_eq!(verdict.is_valid(), valid, "universality of top . {t}");
        }
    }
}
