use qregular::automata::words_of_length;
use qregular::classify::ComplexityClass;
use qregular::corpus::{builtin_fixtures, Fixture};
use qregular::sensitivity::{
    brute_block_sensitivity, brute_sensitivity, build_mask_automata, sensitivity_by_length, sensitivity_mask, zip_pair,
    SensitivityVerdict, DEFAULT_MASK_CAP,
};

fn with_alphabet(max: usize) -> Vec<Fixture> {
    builtin_fixtures().into_iter().filter(|f| f.dfa().unwrap().alphabet().len() <= max).collect()
}

#[test]
fn automaton_matches_brute_force() {
    for f in with_alphabet(3) {
        let dfa = f.dfa().unwrap();
        let n_max = if dfa.alphabet().len() == 2 { 10 } else { 7 };
        let mask = build_mask_automata(&dfa, DEFAULT_MASK_CAP).unwrap();
        let profile = sensitivity_by_length(&mask, n_max);
        for n in 0..=n_max {
            assert_eq!(profile.at(n), Some(brute_sensitivity(&dfa, n).unwrap()), "{} at n = {n}", f.name);
        }
    }
}

#[test]
fn sensitivity_is_at_most_block_sensitivity() {
    for f in with_alphabet(2) {
        let dfa = f.dfa().unwrap();
        for n in 0..=8 {
            let s = brute_sensitivity(&dfa, n).unwrap();
            let bs = brute_block_sensitivity(&dfa, n).unwrap();
            assert!(s <= bs, "{} at n = {n}: s = {s}, bs = {bs}", f.name);
        }
    }
}

#[test]
fn correct_pairs_are_exactly_the_true_masks() {
    for f in with_alphabet(3) {
        let dfa = f.dfa().unwrap();
        let k = dfa.alphabet().len();
        let mask = build_mask_automata(&dfa, DEFAULT_MASK_CAP).unwrap();
        let max = if k == 2 { 6 } else { 4 };
        for n in 0..=max {
            for x in words_of_length(k, n) {
                let truth = sensitivity_mask(&dfa, &x);
                for y in words_of_length(2, n) {
                    let pair = zip_pair(&x, &y);
                    let correct = y == truth;
                    assert_eq!(mask.s_prime.accepts(&pair), correct, "{} on {x:?} / {y:?}", f.name);
                    assert_eq!(mask.violation.accepts(&pair), !correct, "{} on {x:?} / {y:?}", f.name);
                }
                assert!(mask.determinized().accepts(&truth));
                assert!(mask.s_mask.accepts(&truth));
            }
        }
    }
}

#[test]
fn verdict_agrees_with_class() {
    for f in builtin_fixtures() {
        let dfa = f.dfa().unwrap();
        let mask = match build_mask_automata(&dfa, DEFAULT_MASK_CAP) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let verdict = sensitivity_by_length(&mask, 64).verdict;
        match f.expected {
            ComplexityClass::ZeroQuery => assert_eq!(verdict, SensitivityVerdict::Constant(0), "{}", f.name),
            ComplexityClass::Constant => {
                assert!(matches!(verdict, SensitivityVerdict::Constant(_)), "{}: {verdict}", f.name)
            }
            _ => assert!(matches!(verdict, SensitivityVerdict::LinearLower { .. }), "{}: {verdict}", f.name),
        }
    }
}

#[test]
fn profile_csv_has_one_row_per_length() {
    let dfa = builtin_fixtures().into_iter().find(|f| f.name == "or").unwrap().dfa().unwrap();
    let profile = sensitivity_by_length(&build_mask_automata(&dfa, DEFAULT_MASK_CAP).unwrap(), 16);
    let csv = profile.csv();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "n,sensitivity");
    assert_eq!(rows.len(), 18);
    assert_eq!(rows[17], "16,16");
}
