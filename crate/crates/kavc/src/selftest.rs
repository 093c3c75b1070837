//! Self-test corpora behind `kavc selftest`: eight exhaustive or seeded
//! suites, each reporting pass/fail with a one-line summary.
//!
//! Seeds select randomized corpora only; every verdict along the way is
//! deterministic, so re-running a criterion with the same seed reproduces
//! its report byte for byte (criterion `c8-determinism` checks exactly
//! that by running the other seven twice).

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::{ka_lang_decide, lang_incl, nfa_over_v, nfa_over_vprime};
use crate::decision::{
    decide, decide_identity_inclusion, decide_inclusion, refute_bounded, Procedure, Status,
    Verdict,
};
use crate::eval::{eval_factors, member, words_to_letters, LangSpec, Letter, LetterWord, Valuation};
use crate::separation::{lang1_decide, lang2_separate, literal_counts, separate_words, Direction, Separation};
use crate::term::{
    dnf_to_term, fresh_variable, top_expansion, Dnf, DnfLiteral, LitWord, Literal, Query,
    QueryKind, Term, Variable,
};

/// Outcome of one self-test criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Wall-clock time; excluded from [`CriterionReport::line`] so that
    /// rendered reports stay byte-identical across runs.
    pub millis: u128,
}

impl CriterionReport {
    /// One line of the pass/fail table.
    pub fn line(&self) -> String {
        let status = if self.passed { "pass" } else { "fail" };
        format!("{}: {} ({})", self.id, status, self.detail)
    }
}

/// Runs all eight criteria and returns their reports in order.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    let first = run_criteria(seed);
    let start = Instant::now();
    let second = run_criteria(seed);
    let identical = first.len() == second.len()
        && first
            .iter()
            .zip(&second)
            .all(|(a, b)| a.id == b.id && a.passed == b.passed && a.detail == b.detail);
    let mut reports = first;
    reports.push(CriterionReport {
        id: "c8-determinism",
        passed: identical,
        detail: if identical {
            "criteria c1-c7 reproduced identical reports on a second run".to_string()
        } else {
            "a second run with the same seed produced a different report".to_string()
        },
        millis: start.elapsed().as_millis(),
    });
    reports
}

fn run_criteria(seed: u64) -> Vec<CriterionReport> {
    let criteria: Vec<(&'static str, Box<dyn Fn() -> (bool, String)>)> = vec![
        ("c1-divergence-corpus", Box::new(divergence_corpus)),
        ("c2-dnf-reductions", Box::new(move || dnf_reductions(seed))),
        ("c3-word-equations", Box::new(word_equations)),
        ("c4-one-variable-words", Box::new(one_variable_words)),
        ("c5-automata-cross-check", Box::new(move || automata_cross_check(seed))),
        ("c6-evaluator-cross-check", Box::new(evaluator_cross_check)),
        ("c7-words-to-letters", Box::new(move || words_to_letters_property(seed))),
    ];
    criteria
        .into_iter()
        .map(|(id, f)| {
            let start = Instant::now();
            let (passed, detail) = f();
            CriterionReport { id, passed, detail, millis: start.elapsed().as_millis() }
        })
        .collect()
}

fn mix(seed: u64, criterion: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(criterion)
}

/// The four displayed divergences between equational validity and plain
/// language equality: each must be refuted with a verified counterexample
/// while its two sides stay language-equal (or language-included) over V.
fn divergence_corpus() -> (bool, String) {
    let mut problems: Vec<String> = Vec::new();

    let declared: BTreeSet<Variable> =
        [Variable::new("x"), Variable::new("y")].into_iter().collect();
    let y = Term::var("y");
    let cx = Term::cvar("x");
    match decide_inclusion(&y, &cx, 8).1 {
        Verdict::Refuted(cex) if cex.verifies(&y, &cx) => {}
        _ => problems.push("y <= ~x was not refuted with a verified counterexample".to_string()),
    }
    let ay = nfa_over_v(&y, &declared).unwrap();
    let acx = nfa_over_v(&cx, &declared).unwrap();
    if !lang_incl(&ay, &acx).0 || lang_incl(&acx, &ay).0 {
        problems.push("automata do not place y strictly below ~x".to_string());
    }

    let top = top_expansion(&declared);
    let mut declared_top = declared.clone();
    declared_top.insert(Variable::new("_t0"));
    let equations = [
        (
            Term::cvar("x"),
            Term::concat(Term::cvar("x"), Term::cvar("x")),
            [Variable::new("x")].into_iter().collect::<BTreeSet<_>>(),
        ),
        (top.clone(), Term::concat(Term::cvar("x"), Term::cvar("y")), declared_top.clone()),
        (top, Term::union(Term::cvar("x"), Term::cvar("y")), declared_top),
    ];
    for (lhs, rhs, decl) in &equations {
        let query = Query { lhs: lhs.clone(), rhs: rhs.clone(), kind: QueryKind::Equation };
        let decision = decide(&query, 8);
        if decision.overall() != Status::Refuted {
            problems.push(format!("{query} was not refuted"));
        }
        for dir in &decision.directions {
            if let Verdict::Refuted(cex) = &dir.verdict {
                if !cex.verifies(&dir.lhs, &dir.rhs) {
                    problems.push(format!("a counterexample for {query} failed to verify"));
                }
            }
        }
        let a = nfa_over_v(lhs, decl).unwrap();
        let b = nfa_over_v(rhs, decl).unwrap();
        if !(lang_incl(&a, &b).0 && lang_incl(&b, &a).0) {
            problems.push(format!("automata deny the language equality behind {query}"));
        }
    }

    if problems.is_empty() {
        (
            true,
            "4 divergent pairs refuted with verified counterexamples; automata confirm the \
             printed language relations"
                .to_string(),
        )
    } else {
        (false, problems.join("; "))
    }
}

/// 200 DNF formulas: truth-table validity must match the identity,
/// fresh-variable, and universality reductions, each routed through its
/// expected complete procedure.
fn dnf_reductions(seed: u64) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 2));
    let names = ["p", "q", "r", "s"];
    let mut formulas = vec![
        Dnf::new(vec![
            vec![DnfLiteral { var: Variable::new("p"), positive: true }],
            vec![DnfLiteral { var: Variable::new("p"), positive: false }],
        ]),
        Dnf::new(vec![vec![DnfLiteral { var: Variable::new("p"), positive: true }]]),
    ];
    while formulas.len() < 200 {
        let nvars = rng.gen_range(1..=4);
        let clauses = (0..rng.gen_range(1..=4))
            .map(|_| {
                (0..rng.gen_range(1..=4))
                    .map(|_| DnfLiteral {
                        var: Variable::new(names[rng.gen_range(0..nvars)]),
                        positive: rng.gen(),
                    })
                    .collect()
            })
            .collect();
        formulas.push(Dnf::new(clauses));
    }

    let mut disagreements = 0usize;
    let mut tautologies = 0usize;
    for phi in &formulas {
        let expected = phi.is_valid();
        if expected {
            tautologies += 1;
        }
        let t = dnf_to_term(phi);

        let identity_ok = decide_identity_inclusion(&t).is_valid() == expected;

        let z = fresh_variable("_z", &t.variables());
        let (word_proc, word_verdict) =
            decide_inclusion(&Term::Var(z.clone()), &Term::concat(Term::Var(z), t.clone()), 8);
        let word_ok = word_proc == Procedure::Word && word_verdict.is_valid() == expected;

        let widened = Term::concat(top_expansion(&t.variables()), t.clone());
        let outer = top_expansion(&widened.variables());
        let (top_proc, top_verdict) = decide_inclusion(&outer, &widened, 8);
        let top_ok =
            top_proc == Procedure::CompositionFree && top_verdict.is_valid() == expected;

        if !(identity_ok && word_ok && top_ok) {
            disagreements += 1;
        }
    }

    if disagreements == 0 {
        (
            true,
            format!(
                "200 formulas ({tautologies} tautologies): identity, fresh-variable, and \
                 universality reductions all match truth-table validity"
            ),
        )
    } else {
        (false, format!("{disagreements} of 200 formulas disagreed with truth-table validity"))
    }
}

fn all_lit_words(alphabet: &[Literal], max_len: usize) -> Vec<LitWord> {
    let mut words = vec![LitWord::empty()];
    let mut layer: Vec<Vec<Literal>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &layer {
            for lit in alphabet {
                let mut extended = prefix.clone();
                extended.push(lit.clone());
                words.push(LitWord::new(extended.clone()));
                next.push(extended);
            }
        }
        layer = next;
    }
    words
}

/// All ordered pairs of literal words over two variables, length at most 3:
/// the equation must be Valid exactly for identical words, every refutation
/// witness must re-verify, and the direct separator construction must never
/// fall back to its conflict-repair search.
fn word_equations() -> (bool, String) {
    let x = Variable::new("x");
    let y = Variable::new("y");
    let alphabet = [
        Literal::positive(x.clone()),
        Literal::negative(x),
        Literal::positive(y.clone()),
        Literal::negative(y),
    ];
    let words = all_lit_words(&alphabet, 3);
    let total = words.len() * words.len();

    let mut wrong_verdicts = 0usize;
    let mut unverified = 0usize;
    let mut separated = 0usize;
    let mut conflicted = 0usize;
    for u in &words {
        for w in &words {
            let query = Query { lhs: u.embed(), rhs: w.embed(), kind: QueryKind::Equation };
            let decision = decide(&query, 8);
            if (decision.overall() == Status::Valid) != (u == w) {
                wrong_verdicts += 1;
            }
            for dir in &decision.directions {
                if let Verdict::Refuted(cex) = &dir.verdict {
                    if !cex.verifies(&dir.lhs, &dir.rhs) {
                        unverified += 1;
                    }
                }
            }
            if u != w {
                match separate_words(u, w) {
                    Separation::Separated(sep) => {
                        separated += 1;
                        if sep.used_search {
                            conflicted += 1;
                        }
                    }
                    Separation::Equal => wrong_verdicts += 1,
                }
            }
        }
    }

    let clean = wrong_verdicts == 0 && unverified == 0;
    if clean && conflicted == 0 {
        (
            true,
            format!(
                "{total} ordered pairs: verdicts match syntactic equality, witnesses verified, \
                 no table conflicts"
            ),
        )
    } else if clean {
        (
            false,
            format!(
                "{total} ordered pairs: verdicts match syntactic equality and all {separated} \
                 separations carry verified witnesses, but the literal-position table \
                 conflicted on {conflicted} pairs (each repaired by a verified fallback), so \
                 the no-conflict clause fails"
            ),
        )
    } else {
        (
            false,
            format!(
                "{wrong_verdicts} wrong verdicts and {unverified} unverified witnesses over \
                 {total} ordered pairs"
            ),
        )
    }
}

/// All ordered pairs of one-variable words of length at most 5: the
/// one-letter decision must match literal counting, and every distinct pair
/// must get a verified separator over a two-letter alphabet, making
/// two-letter equality coincide with syntactic equality.
fn one_variable_words() -> (bool, String) {
    let z = Variable::new("z");
    let alphabet = [Literal::positive(z.clone()), Literal::negative(z)];
    let words = all_lit_words(&alphabet, 5);
    let total = words.len() * words.len();

    let mut problems = 0usize;
    for u in &words {
        for w in &words {
            let counts_match = literal_counts(u).unwrap() == literal_counts(w).unwrap();
            match lang1_decide(u, w) {
                Ok(Verdict::Valid) => {
                    if !counts_match {
                        problems += 1;
                    }
                }
                Ok(Verdict::Refuted(cex)) => {
                    let carrier = cex.lhs_word.clone().unwrap();
                    let other = if &carrier == u { w } else { u };
                    if counts_match || !cex.verifies(&carrier.embed(), &other.embed()) {
                        problems += 1;
                    }
                }
                _ => problems += 1,
            }
            match lang2_separate(u, w) {
                Ok(Separation::Equal) => {
                    if u != w {
                        problems += 1;
                    }
                }
                Ok(Separation::Separated(sep)) => {
                    let (inside, outside) = match sep.direction {
                        Direction::LhsNotInRhs => (u, w),
                        Direction::RhsNotInLhs => (w, u),
                    };
                    let expected_alphabet = if counts_match { 2 } else { 1 };
                    let good = u != w
                        && sep.valuation.alphabet_size() == expected_alphabet
                        && member(&sep.witness, &inside.embed(), &sep.valuation) == Ok(true)
                        && member(&sep.witness, &outside.embed(), &sep.valuation) == Ok(false);
                    if !good {
                        problems += 1;
                    }
                }
                Err(_) => problems += 1,
            }
        }
    }

    if problems == 0 {
        (
            true,
            format!(
                "{total} ordered pairs: counting matches the one-letter decision and every \
                 distinct pair got a verified separator (two-letter whenever counts agree)"
            ),
        )
    } else {
        (false, format!("{problems} failures over {total} ordered pairs"))
    }
}

fn random_term(rng: &mut ChaCha8Rng, size: usize, leaves: &[Term]) -> Term {
    if size == 1 {
        return leaves[rng.gen_range(0..leaves.len())].clone();
    }
    if size == 2 || rng.gen_range(0..3) == 0 {
        return Term::star(random_term(rng, size - 1, leaves));
    }
    let left = rng.gen_range(1..=size - 2);
    let a = random_term(rng, left, leaves);
    let b = random_term(rng, size - 1 - left, leaves);
    if rng.gen() {
        Term::union(a, b)
    } else {
        Term::concat(a, b)
    }
}

/// 300 random complement-free pairs: automata language equivalence must
/// agree with every complete equational verdict, refutations must imply
/// non-inclusion, and bounded refutation must never refute an equal pair.
fn automata_cross_check(seed: u64) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 5));
    let leaves =
        [Term::var("x"), Term::var("y"), Term::var("z"), Term::One, Term::Zero];

    let mut disagreements = 0usize;
    let mut bad_bounded = 0usize;
    let mut equal_pairs = 0usize;
    let mut complete_directions = 0usize;
    for _ in 0..300 {
        let size1 = rng.gen_range(1..=8);
        let t1 = random_term(&mut rng, size1, &leaves);
        let size2 = rng.gen_range(1..=8);
        let t2 = random_term(&mut rng, size2, &leaves);

        let a1 = nfa_over_vprime(&t1);
        let a2 = nfa_over_vprime(&t2);
        let incl12 = lang_incl(&a1, &a2).0;
        let incl21 = lang_incl(&a2, &a1).0;
        let equiv = incl12 && incl21;
        if ka_lang_decide(&t1, &t2) != Ok(equiv) {
            disagreements += 1;
        }
        if equiv {
            equal_pairs += 1;
            if refute_bounded(&t1, &t2, 6).is_refuted()
                || refute_bounded(&t2, &t1, 6).is_refuted()
            {
                bad_bounded += 1;
            }
        }

        for (lhs, rhs, included) in [(&t1, &t2, incl12), (&t2, &t1, incl21)] {
            let (procedure, verdict) = decide_inclusion(lhs, rhs, 6);
            if procedure != Procedure::Bounded {
                complete_directions += 1;
                if verdict.is_valid() != included {
                    disagreements += 1;
                }
            } else if verdict.is_refuted() && included {
                disagreements += 1;
            }
        }
    }

    if disagreements == 0 && bad_bounded == 0 {
        (
            true,
            format!(
                "300 pairs ({equal_pairs} language-equal, {complete_directions} complete \
                 directions): automata and equational verdicts agree; bounded refutation \
                 respected language equality"
            ),
        )
    } else {
        (
            false,
            format!(
                "{disagreements} automata disagreements and {bad_bounded} bounded refutations \
                 of language-equal pairs over 300 pairs"
            ),
        )
    }
}

fn terms_by_size(leaves: &[Term], max: usize) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max + 1];
    by_size[1] = leaves.to_vec();
    for size in 2..=max {
        let mut out: Vec<Term> =
            by_size[size - 1].iter().map(|t| Term::star(t.clone())).collect();
        for left in 1..size - 1 {
            let right = size - 1 - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    out.push(Term::union(a.clone(), b.clone()));
                    out.push(Term::concat(a.clone(), b.clone()));
                }
            }
        }
        by_size[size] = out;
    }
    by_size.into_iter().flatten().collect()
}

fn naive_member(w: &[Letter], t: &Term, v: &Valuation) -> bool {
    match t {
        Term::Var(x) => v.var_contains(x, w),
        Term::CVar(x) => !v.var_contains(x, w),
        Term::One => w.is_empty(),
        Term::Zero => false,
        Term::Union(a, b) => naive_member(w, a, v) || naive_member(w, b, v),
        Term::Concat(a, b) => {
            (0..=w.len()).any(|k| naive_member(&w[..k], a, v) && naive_member(&w[k..], b, v))
        }
        Term::Star(a) => {
            w.is_empty()
                || (1..=w.len()).any(|k| naive_member(&w[..k], a, v) && naive_member(&w[k..], t, v))
        }
    }
}

fn factor_words(n: usize) -> Vec<LetterWord> {
    let mut words = vec![LetterWord::empty()];
    for i in 0..n {
        for j in i + 1..=n {
            words.push(LetterWord::new((i..j).map(Letter).collect()));
        }
    }
    words
}

/// Every term of size at most 6 over two variables, against every valuation
/// assigning factor subsets over alphabets of size at most 2: the factor
/// table must equal naive split enumeration on every factor.
fn evaluator_cross_check() -> (bool, String) {
    let leaves = [
        Term::var("x"),
        Term::var("y"),
        Term::cvar("x"),
        Term::cvar("y"),
        Term::One,
        Term::Zero,
    ];
    let terms = terms_by_size(&leaves, 6);
    let x = Variable::new("x");
    let y = Variable::new("y");

    let mut mismatches = 0usize;
    let mut checks = 0usize;
    let mut valuations = 0usize;
    for n in 0..=2usize {
        let factors = factor_words(n);
        let masks = 1u32 << factors.len();
        for mask_x in 0..masks {
            for mask_y in 0..masks {
                let assignment: BTreeMap<Variable, LangSpec> =
                    [(x.clone(), mask_x), (y.clone(), mask_y)]
                        .into_iter()
                        .map(|(var, mask)| {
                            let words: Vec<Vec<usize>> = factors
                                .iter()
                                .enumerate()
                                .filter(|(k, _)| mask & (1 << k) != 0)
                                .map(|(_, w)| w.letters().iter().map(|l| l.0).collect())
                                .collect();
                            let refs: Vec<&[usize]> =
                                words.iter().map(|w| w.as_slice()).collect();
                            (var, LangSpec::finite(&refs))
                        })
                        .collect();
                let v = Valuation::new(n, assignment).unwrap();
                valuations += 1;
                for t in &terms {
                    let table = eval_factors(t, &v);
                    let root = table.root();
                    for i in 0..=n {
                        for j in i..=n {
                            let word: Vec<Letter> = (i..j).map(Letter).collect();
                            checks += 1;
                            if table.get(root, i, j) != naive_member(&word, t, &v) {
                                mismatches += 1;
                            }
                        }
                    }
                }
            }
        }
    }

    if mismatches == 0 {
        (
            true,
            format!(
                "{} terms under {valuations} valuations ({checks} factor checks): the factor \
                 table always equals naive split enumeration",
                terms.len()
            ),
        )
    } else {
        (false, format!("{mismatches} mismatches across {checks} factor checks"))
    }
}

fn short_letter_words(alphabet_size: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &layer {
            for letter in 0..alphabet_size {
                let mut extended = prefix.clone();
                extended.push(letter);
                words.push(extended.clone());
                next.push(extended);
            }
        }
        layer = next;
    }
    words
}

/// 10^4 random instances of the words-to-letters abstraction: whenever a
/// factor lies in the abstracted interpretation of a term, the glued
/// concatenation of its parts must lie in the original interpretation.
fn words_to_letters_property(seed: u64) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 7));
    let vars = [Variable::new("x"), Variable::new("y"), Variable::new("z")];
    let leaves = [
        Term::var("x"),
        Term::var("y"),
        Term::var("z"),
        Term::cvar("x"),
        Term::cvar("y"),
        Term::cvar("z"),
        Term::One,
        Term::Zero,
    ];

    let mut violations = 0usize;
    let mut positives = 0usize;
    for _ in 0..10_000 {
        let base_alphabet = rng.gen_range(1..=2usize);
        let pool = short_letter_words(base_alphabet, 2);
        let assignment: BTreeMap<Variable, LangSpec> = vars
            .iter()
            .map(|var| {
                let chosen: Vec<Vec<usize>> =
                    pool.iter().filter(|_| rng.gen()).cloned().collect();
                let refs: Vec<&[usize]> = chosen.iter().map(|w| w.as_slice()).collect();
                (var.clone(), LangSpec::finite(&refs))
            })
            .collect();
        let v = Valuation::new(base_alphabet, assignment).unwrap();

        let n = rng.gen_range(0..=3usize);
        let parts: Vec<LetterWord> = (0..n)
            .map(|_| {
                let len = rng.gen_range(0..=2usize);
                LetterWord::new((0..len).map(|_| Letter(rng.gen_range(0..base_alphabet))).collect())
            })
            .collect();
        let abstracted = words_to_letters(&v, &parts).unwrap();

        let size = rng.gen_range(1..=6);
        let t = random_term(&mut rng, size, &leaves);
        let table = eval_factors(&t, &abstracted);
        let root = table.root();
        for i in 0..=n {
            for j in i..=n {
                if table.get(root, i, j) {
                    positives += 1;
                    let glued: Vec<Letter> = parts[i..j]
                        .iter()
                        .flat_map(|p| p.letters().iter().copied())
                        .collect();
                    if member(&LetterWord::new(glued), &t, &v) != Ok(true) {
                        violations += 1;
                    }
                }
            }
        }
    }

    if violations == 0 {
        (
            true,
            format!(
                "10000 instances ({positives} positive factors): every abstracted factor glued \
                 back to a member concatenation"
            ),
        )
    } else {
        (false, format!("{violations} violations across {positives} positive factors"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_lines_omit_timing() {
        let report = CriterionReport {
            id: "c0-sample",
            passed: true,
            detail: "everything in order".to_string(),
            millis: 1234,
        };
        assert_eq!(report.line(), "c0-sample: pass (everything in order)");
        let failed = CriterionReport { passed: false, ..report };
        assert_eq!(failed.line(), "c0-sample: fail (everything in order)");
    }

    #[test]
    fn divergence_corpus_reproduces_all_four_pairs() {
        let (passed, detail) = divergence_corpus();
        assert!(passed, "{detail}");
    }

    #[test]
    fn dnf_reductions_agree_with_truth_tables() {
        let (passed, detail) = dnf_reductions(0);
        assert!(passed, "{detail}");
    }

    #[test]
    fn seeded_criteria_reproduce_their_reports() {
        assert_eq!(dnf_reductions(3), dnf_reductions(3));
        assert_eq!(words_to_letters_property(3), words_to_letters_property(3));
    }

    #[test]
    fn words_to_letters_property_holds_on_a_small_seed() {
        let (passed, detail) = words_to_letters_property(0);
        assert!(passed, "{detail}");
    }
}
