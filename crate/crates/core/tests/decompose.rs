use qregular::automata::{Alphabet, Dfa, Regex, RegexAst};
use qregular::corpus::{builtin_fixtures, random_aperiodic_dfas};
use qregular::decompose::{decompose, preimage_dfa, split, verify_decomposition, verify_sets};
use qregular::monoid::{syntactic_context, SyntacticContext};

fn aperiodic_contexts() -> Vec<(String, SyntacticContext)> {
    builtin_fixtures()
        .into_iter()
        .map(|f| (f.name.clone(), syntactic_context(&f.dfa().unwrap()).unwrap()))
        .filter(|(_, c)| c.is_aperiodic().holds())
        .collect()
}

#[test]
fn decomposition_identity_on_fixtures() {
    for (name, ctx) in aperiodic_contexts() {
        for m in (0..ctx.size()).filter(|&m| m != ctx.identity()) {
            assert!(verify_decomposition(&ctx, m).unwrap().is_equal(), "{name}: {}", ctx.name(m));
        }
    }
}

#[test]
fn decomposition_identity_on_random_monoids() {
    for dfa in random_aperiodic_dfas(2024, 50, 8) {
        let ctx = syntactic_context(&dfa).unwrap();
        assert!(ctx.size() <= 8);
        for m in (0..ctx.size()).filter(|&m| m != ctx.identity()) {
            assert!(verify_decomposition(&ctx, m).unwrap().is_equal());
        }
    }
}

#[test]
fn dropping_a_set_member_is_detected() {
    let ctx = aperiodic_contexts().into_iter().find(|(n, _)| n == "appendix-c").unwrap().1;
    let ab = ctx.element_by_name("ab").unwrap();
    let mut sets = decompose(&ctx, ab).unwrap();
    sets.g.pop();
    assert!(!verify_sets(&ctx, &sets).is_equal());
}

#[test]
fn ranks_descend_through_the_sets() {
    for (name, ctx) in aperiodic_contexts() {
        let rank = ctx.ideal_profile().rank;
        for m in (0..ctx.size()).filter(|&m| m != ctx.identity()) {
            let sets = decompose(&ctx, m).unwrap();
            let below = |r: usize| rank[r] < rank[m];
            assert!(sets.e.iter().all(|&(r, _)| below(r)), "{name}");
            assert!(sets.f.iter().all(|&(_, r)| below(r)), "{name}");
            assert!(sets.g.iter().all(|&(_, r, _)| below(r)), "{name}");
            for (p, q) in split(&ctx, m).parts {
                assert!(rank[p] <= rank[m] && rank[q] <= rank[m], "{name}");
            }
        }
    }
}

#[test]
fn splittings_cover_every_cut() {
    for (name, ctx) in aperiodic_contexts().into_iter().filter(|(_, c)| c.alphabet().len() <= 3) {
        let max = if ctx.alphabet().len() == 2 { 8 } else { 6 };
        let words: Vec<_> = ctx.alphabet().all_words(max).collect();
        for m in 0..ctx.size() {
            let parts = split(&ctx, m).parts;
            for x in words.iter().filter(|x| ctx.phi(x) == m) {
                for cut in 0..=x.len() {
                    let (u, v) = x.split_at(cut);
                    assert!(parts.contains(&(ctx.phi(u), ctx.phi(v))), "{name}");
                }
            }
        }
    }
}

#[test]
fn identity_preimage_is_star_of_neutral_letters() {
    for (name, ctx) in aperiodic_contexts() {
        let neutral: Vec<Regex> =
            (0..ctx.alphabet().len()).filter(|&a| ctx.letter(a) == ctx.identity()).map(Regex::Literal).collect();
        let star = Regex::Star(Box::new(if neutral.is_empty() { Regex::Empty } else { Regex::Union(neutral) }));
        let expected: Dfa = RegexAst::new(star, ctx.alphabet().clone()).unwrap().to_dfa();
        assert!(preimage_dfa(&ctx, ctx.identity()).equivalent(&expected).unwrap().is_equal(), "{name}");
    }
}

#[test]
fn appendix_c_sets() {
    let ctx = aperiodic_contexts().into_iter().find(|(n, _)| n == "appendix-c").unwrap().1;
    let sigma: &Alphabet = ctx.alphabet();
    let (a, b) = (sigma.index_of("a").unwrap(), sigma.index_of("b").unwrap());
    let one = ctx.identity();
    let sets = decompose(&ctx, ctx.element_by_name("ab").unwrap()).unwrap();
    assert_eq!(sets.e, vec![(one, a)]);
    assert_eq!(sets.f, vec![(b, one)]);
    assert_eq!(sets.g, vec![(a, one, a), (b, one, b)]);
    assert!(sets.c.is_empty());
}
