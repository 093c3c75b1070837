//! Deciders for Kleene algebra terms with variable complements, interpreted
//! over language valuations.
//!
//! A term is built from variables `x`, complemented variables `~x`, the
//! constants `1` and `0`, concatenation, union and star. A valuation assigns
//! each variable a language over some alphabet; a complemented variable
//! denotes the complement of the assigned language within the set of
//! letters-as-words. An inequation `s <= t` is valid when the interpretation
//! of `s` is contained in that of `t` under every valuation over every
//! alphabet.
//!
//! The crate provides:
//!
//! * decision procedures for the identity-inclusion, composition-free,
//!   word-inclusion and star-free fragments, each returning either a proof of
//!   validity or a concrete refuting valuation together with a witness word
//!   ([`decision`]);
//! * a bounded refuter for queries outside those fragments;
//! * constructive separators for pairs of words over the doubled alphabet and
//!   the one-variable special cases ([`separation`]);
//! * a factor-based membership evaluator and the words-to-letters abstraction
//!   ([`eval`]);
//! * classical automata over the doubled alphabet for cross-checking
//!   ([`classical`]);
//! * a deterministic self-test suite ([`selftest`]);
//! * a scriptable command-line interface behind the `kavc` binary ([`cli`]).
//!
//! Every refutation produced by the crate is re-verified by the evaluator
//! before being returned.

pub mod classical;
pub mod cli;
pub mod decision;
pub mod eval;
pub mod selftest;
pub mod separation;
pub mod term;

pub use classical::{
    ka_lang_decide, lang_equiv, lang_incl, nfa_over_v, nfa_over_vprime, ClassicalError, Nfa,
    VSymbol,
};

pub use decision::{
    decide, decide_composition_free_inclusion, decide_identity_inclusion, decide_inclusion,
    decide_star_free_inclusion, decide_universality, decide_word_inclusion, refute_bounded,
    Counterexample, Decision, DecisionError, DirectionReport, Procedure, Status, Verdict,
    MAX_WITNESS_LEN,
};
pub use eval::{
    eval_factors, member, word_in_spec, words_to_letters, EvalError, LangSpec, Letter,
    LetterRegex, LetterWord, MembershipTable, SubtermId, Valuation,
};
pub use selftest::{run_all, CriterionReport};
pub use separation::{
    lang1_decide, lang2_separate, literal_counts, run_decomposition, separate_words, Direction,
    LiteralCounts, RunDecomposition, Separation, SeparationError, Separator,
};
pub use term::{
    dnf_to_term, fresh_variable, lang_vprime_enumerate, lang_vprime_finite, parse, parse_query,
    top_expansion, Dnf, DnfLiteral, LitWord, Literal, NotStarFree, ParseError, Polarity, Query,
    QueryKind, Term, Variable,
};
