use proptest::prelude::*;
use qregular::automata::{Dfa, Symbol};
use qregular::classify::ComplexityClass;
use qregular::corpus::{builtin_fixtures, fixture};
use qregular::exec::Strategy as Sched;
use qregular::query::{cost_curve, loglog_slope, CostModel, Decider, PredicateCharge};
use qregular::Config;

fn star_free() -> Vec<(String, Dfa)> {
    builtin_fixtures()
        .into_iter()
        .filter(|f| f.expected == ComplexityClass::SqrtN)
        .map(|f| (f.name.clone(), f.dfa().unwrap()))
        .collect()
}

fn decider(dfa: &Dfa, charge: PredicateCharge) -> Decider {
    Decider::with_config(dfa, &Config { charge, ..Config::default() }).unwrap()
}

#[test]
fn all_models_agree_with_the_automaton_on_short_words() {
    for (name, dfa) in star_free() {
        let bound = decider(&dfa, PredicateCharge::Bound);
        let observed = decider(&dfa, PredicateCharge::Observed);
        let max = match dfa.alphabet().len() {
            2 => 9,
            3 => 6,
            _ => 3,
        };
        for w in dfa.alphabet().all_words(max) {
            let truth = dfa.accepts(&w);
            let c = bound.decide(&w, CostModel::Classical).unwrap();
            let g = bound.decide(&w, CostModel::IdealGrover).unwrap();
            let o = observed.decide(&w, CostModel::IdealGrover).unwrap();
            assert_eq!((c.accepted, g.accepted, o.accepted), (truth, truth, truth), "{name} on {w:?}");
            assert!(o.ledger.modeled_cost <= g.ledger.modeled_cost, "{name} on {w:?}");
            assert!(c.ledger.classical_reads <= w.len() as u64);
        }
    }
}

#[test]
fn bound_dominates_every_run() {
    for (name, dfa) in star_free().into_iter().filter(|(_, d)| d.alphabet().len() <= 3) {
        let d = decider(&dfa, PredicateCharge::Observed);
        for n in [0usize, 1, 5, 12] {
            let words: Vec<Vec<Symbol>> =
                qregular::automata::words_of_length(dfa.alphabet().len(), n).take(200).collect();
            let worst = words.iter().map(|w| d.decide(w, CostModel::IdealGrover).unwrap().ledger.modeled_cost).max();
            let bound = decider(&dfa, PredicateCharge::Bound);
            let bound_worst =
                words.iter().map(|w| bound.decide(w, CostModel::IdealGrover).unwrap().ledger.modeled_cost).max();
            assert!(worst <= bound_worst, "{name} at n = {n}");
        }
    }
}

#[test]
fn linear_languages_are_scanned() {
    let parity = fixture("parity").unwrap().dfa().unwrap();
    let d = Decider::new(&parity).unwrap();
    for n in [0usize, 1, 64, 1000] {
        let x = vec![1; n];
        let run = d.decide(&x, CostModel::Classical).unwrap();
        assert_eq!(run.accepted, n % 2 == 0);
        assert_eq!(run.ledger.classical_reads, n as u64);
    }
}

#[test]
fn cost_curves_are_deterministic() {
    let dfa = fixture("infix").unwrap().dfa().unwrap();
    let d = Decider::new(&dfa).unwrap();
    let lengths = [64, 128, 256];
    let a = cost_curve(&d, &lengths, 4, 9, Sched::Parallel).unwrap();
    let b = cost_curve(&d, &lengths, 4, 9, Sched::Sequential).unwrap();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0].modeled <= w[1].modeled));
}

#[test]
fn slope_of_exact_powers() {
    let pts: Vec<(usize, u64)> = (8..=16).map(|e| (1usize << e, 1u64 << (e / 2 + 3))).collect();
    let s = loglog_slope(&pts).unwrap();
    assert!((s - 0.5).abs() < 0.05, "{s}");
    let linear: Vec<(usize, u64)> = (8..=16).map(|e| (1usize << e, 3u64 << e)).collect();
    assert!((loglog_slope(&linear).unwrap() - 1.0).abs() < 1e-9);
}

fn word_for(k: usize) -> impl Strategy<Value = Vec<Symbol>> {
    prop::collection::vec(0..k, 0..400)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_words_on_star_free_fixtures(idx in 0usize..9, seed_word in word_for(8)) {
        let all = star_free();
        let (name, dfa) = &all[idx % all.len()];
        let k = dfa.alphabet().len();
        let w: Vec<Symbol> = seed_word.into_iter().map(|a| a % k).collect();
        let d = decider(dfa, PredicateCharge::Bound);
        let c = d.decide(&w, CostModel::Classical).unwrap();
        let g = d.decide(&w, CostModel::IdealGrover).unwrap();
        prop_assert_eq!(c.accepted, dfa.accepts(&w), "{}", name);
        prop_assert_eq!(g.accepted, c.accepted, "{}", name);
    }
}
