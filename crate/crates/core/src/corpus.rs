//! Fixture languages with expected classes, golden data, the length-2
//! word-break sweep and a seeded generator of small aperiodic languages.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{parse_dfa, parse_regex, Alphabet, Dfa, Regex, RegexAst, Symbol};
use crate::classify::{classify_with, ComplexityClass};
use crate::decompose::decompose;
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::flatten::flatten_capped;
use crate::monoid::{FiniteMonoid, SyntacticContext};
use crate::Config;

pub const APPENDIX_C_DFA: &str = include_str!("../data/appendix_c.dfa");
pub const APPENDIX_C_GOLDEN: &str = include_str!("../data/appendix_c.golden");

#[derive(Clone, Debug)]
pub enum Definition {
    Regex { alphabet: String, regex: String },
    Dfa(Dfa),
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub definition: Definition,
    pub expected: ComplexityClass,
    pub tags: Vec<&'static str>,
}

impl Fixture {
    fn regex(name: &str, alphabet: &str, regex: &str, expected: ComplexityClass, tags: &[&'static str]) -> Self {
        Fixture {
            name: name.into(),
            definition: Definition::Regex { alphabet: alphabet.into(), regex: regex.into() },
            expected,
            tags: tags.to_vec(),
        }
    }

    fn dfa_fixture(name: &str, dfa: Dfa, expected: ComplexityClass, tags: &[&'static str]) -> Self {
        Fixture { name: name.into(), definition: Definition::Dfa(dfa), expected, tags: tags.to_vec() }
    }

    pub fn dfa(&self) -> Result<Dfa> {
        match &self.definition {
            Definition::Regex { alphabet, regex } => Ok(parse_regex(regex, &Alphabet::parse(alphabet)?)?.to_dfa()),
            Definition::Dfa(d) => Ok(d.clone()),
        }
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(&tag)
    }

    /// One-line description of the definition.
    pub fn describe(&self) -> String {
        match &self.definition {
            Definition::Regex { alphabet, regex } => format!("regex `{regex}` over {{{alphabet}}}"),
            Definition::Dfa(d) => {
                format!("dfa with {} states over {{{}}}", d.num_states(), d.alphabet().symbols().join(" "))
            }
        }
    }
}

/// Brackets `[ ]` nested at most `k` deep, as a nested star expression.
pub fn paren_regex(k: usize) -> String {
    (0..k).fold(String::new(), |inner, _| if inner.is_empty() { "([ ])*".into() } else { format!("([ {inner} ])*") })
}

/// Depth counter for brackets nested at most `k` deep, with a dead state.
pub fn depth_counter_dfa(k: usize) -> Dfa {
    let dead = k + 1;
    Dfa::from_fn(
        Alphabet::parse("[ ]").unwrap(),
        k + 2,
        0,
        |q| q == 0,
        |q, a| match (q, a) {
            (q, _) if q == dead => dead,
            (q, 0) if q < k => q + 1,
            (q, 1) if q > 0 => q - 1,
            _ => dead,
        },
    )
    .unwrap()
}

/// Column triples `xyz` of base-`base` digits, least significant column
/// first; accepts iff the `x` row plus the `y` row equals the `z` row.
pub fn addition_dfa(base: usize) -> Result<Dfa> {
    if !(2..=10).contains(&base) {
        return Err(Error::Precondition(format!("addition base {base} outside 2..=10")));
    }
    let names = (0..base.pow(3)).map(|i| format!("{}{}{}", i / (base * base), i / base % base, i % base));
    let sigma = Alphabet::new(names)?;
    let dead = 2;
    Dfa::from_fn(
        sigma,
        3,
        0,
        |q| q == 0,
        |carry, a| {
            let (x, y, z) = (a / (base * base), a / base % base, a % base);
            let sum = x + y + carry;
            if carry == dead || sum % base != z {
                dead
            } else {
                sum / base
            }
        },
    )
}

/// Encodes `x + y = z` candidates as column words for [`addition_dfa`].
pub fn addition_word(base: usize, x: &[usize], y: &[usize], z: &[usize]) -> Vec<Symbol> {
    x.iter().zip(y).zip(z).map(|((&x, &y), &z)| (x * base + y) * base + z).collect()
}

/// Carry monoid `{1, S, R, P}` with `xS = S`, `xR = R`, `xP = x` and an
/// adjoined zero, numbered 0 to 4 in that order.
pub fn carry_monoid() -> FiniteMonoid {
    let (one, s, r, zero) = (0, 1, 2, 4);
    let mut mul = vec![0; 25];
    for x in 0..5 {
        for y in 0..5 {
            mul[x * 5 + y] = match (x, y) {
                (x, y) if x == zero || y == zero => zero,
                (x, y) if x == one => y,
                (x, y) if y == one => x,
                (_, y) if y == s || y == r => y,
                (x, _) => x,
            };
        }
    }
    FiniteMonoid::from_table(5, mul, one).expect("carry monoid is associative")
}

pub fn builtin_fixtures() -> Vec<Fixture> {
    use ComplexityClass::*;
    let appendix_c = parse_dfa(APPENDIX_C_DFA).expect("bundled DFA parses");
    let mut out = vec![
        Fixture::regex("or", "0 1", "~%0 1 ~%0", SqrtN, &["paper", "binary"]),
        Fixture::regex("parity", "0 1", "(0*10*1)*0*", Linear, &["paper", "binary"]),
        Fixture::regex("infix", "0 1 2", "~%0 2 0* 2 ~%0", SqrtN, &["paper"]),
        Fixture::regex("dynamic-and-or", "0 1 2", "2 ~%0 2 & ~(~%0 2 0* 2 ~%0)", SqrtN, &["paper"]),
    ];
    for k in 1..=4 {
        out.push(Fixture::dfa_fixture(&format!("paren-{k}"), depth_counter_dfa(k), SqrtN, &["paper", "binary"]));
    }
    out.extend([
        Fixture::regex("trivial", "a b", "a ~%0 b", Constant, &["paper", "binary"]),
        Fixture::regex("empty", "0 1", "%0", ZeroQuery, &["paper", "binary"]),
        Fixture::regex("epsilon", "0 1", "%e", ZeroQuery, &["paper", "binary"]),
        Fixture::regex("sigma-star", "0 1", "~%0", ZeroQuery, &["paper", "binary"]),
        Fixture::regex("sigma-plus", "0 1", "~%e", ZeroQuery, &["paper", "binary"]),
        Fixture::dfa_fixture("appendix-c", appendix_c, SqrtN, &["paper"]),
        Fixture::regex("word-break", "0 1", "(0|1 1|1 0 1)*", Linear, &["paper", "binary"]),
        Fixture::dfa_fixture("addition", addition_dfa(2).expect("base 2"), SqrtN, &["paper"]),
        Fixture::regex("mod3", "0 1", "(0*10*10*1)*0*", Linear, &["binary"]),
        Fixture::regex("even-length", "0 1", "((0|1)(0|1))*", ZeroQuery, &["binary"]),
        Fixture::regex("parity-even", "0 1", "(0*10*1)*0* & ((0|1)(0|1))*", Linear, &["binary"]),
    ]);
    out
}

pub fn fixture(name: &str) -> Option<Fixture> {
    builtin_fixtures().into_iter().find(|f| f.name == name)
}

#[derive(Debug)]
pub struct FixtureOutcome {
    pub name: String,
    pub expected: ComplexityClass,
    pub actual: Result<ComplexityClass>,
}

impl FixtureOutcome {
    pub fn passed(&self) -> bool {
        matches!(self.actual, Ok(c) if c == self.expected)
    }
}

/// Classifies every fixture, fanning out per the configured strategy.
pub fn run_fixtures(fixtures: &[Fixture], config: &Config) -> Vec<FixtureOutcome> {
    config.strategy.map_slice(fixtures, |f| FixtureOutcome {
        name: f.name.clone(),
        expected: f.expected,
        actual: f.dfa().and_then(|d| classify_with(&d, config)).map(|r| r.aggregate),
    })
}

/// Multiplication table, ideals and the decomposition of `ab`, as stored
/// in the golden file.
pub fn appendix_c_report() -> Result<String> {
    let ctx = crate::monoid::syntactic_context(&parse_dfa(APPENDIX_C_DFA)?)?;
    let ab = ctx.element_by_name("ab").ok_or_else(|| Error::Structural("no element ab".into()))?;
    let mut out = String::new();
    writeln!(out, "# multiplication").unwrap();
    out.push_str(&ctx.multiplication_table());
    writeln!(out, "# ideals").unwrap();
    out.push_str(&ctx.render_ideals(&ctx.ideal_profile()));
    writeln!(out, "# decomposition").unwrap();
    out.push_str(&decompose(&ctx, ab)?.render(&ctx));
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct WordBreakEntry {
    pub dictionary: Vec<String>,
    pub class: ComplexityClass,
    pub p: usize,
    /// Elements of flattened components with `m² ≠ m³`.
    pub violations: usize,
}

#[derive(Clone, Debug)]
pub struct WordBreakReport {
    pub entries: Vec<WordBreakEntry>,
}

impl WordBreakReport {
    pub fn violations(&self) -> usize {
        self.entries.iter().map(|e| e.violations).sum()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let d = if e.dictionary.is_empty() { "∅".to_string() } else { e.dictionary.join(",") };
            writeln!(out, "{{{d}}}\tp={}\t{}\tviolations={}", e.p, e.class, e.violations).unwrap();
        }
        writeln!(out, "total violations: {}", self.violations()).unwrap();
        out
    }
}

/// Every dictionary `D ⊆ Σ ∪ Σ²` over `sigma_size` symbols: flattens `D*`
/// and counts elements violating `m² = m³` in the component monoids.
pub fn word_break_sweep(sigma_size: usize, config: &Config) -> Result<WordBreakReport> {
    let sigma = Alphabet::new((0..sigma_size).map(|a| a.to_string()))?;
    let words: Vec<Vec<Symbol>> = (0..sigma_size)
        .map(|a| vec![a])
        .chain((0..sigma_size * sigma_size).map(|i| vec![i / sigma_size, i % sigma_size]))
        .collect();
    if words.len() > 20 {
        return Err(Error::Precondition("too many candidate dictionary words".into()));
    }
    let masks: Vec<usize> = (0..1usize << words.len()).collect();
    let entries = config.strategy.map_slice(&masks, |&mask| -> Result<WordBreakEntry> {
        let chosen: Vec<&Vec<Symbol>> =
            words.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| w).collect();
        let union = if chosen.is_empty() {
            Regex::Empty
        } else {
            Regex::Union(chosen.iter().map(|w| Regex::Concat(w.iter().map(|&a| Regex::Literal(a)).collect())).collect())
        };
        let dfa = RegexAst::new(Regex::Star(Box::new(union)), sigma.clone())?.to_dfa();
        let ctx = SyntacticContext::build(&dfa, config.monoid_cap, Strategy::Sequential)?;
        let family = flatten_capped(&ctx, config.block_cap)?;
        let mut violations = 0;
        for c in &family.components {
            let sub = SyntacticContext::build(&c.dfa, config.monoid_cap, Strategy::Sequential)?;
            violations += (0..sub.size())
                .filter(|&m| {
                    let sq = sub.mul(m, m);
                    sq != sub.mul(sq, m)
                })
                .count();
        }
        let class = classify_with(&dfa, &Config { strategy: Strategy::Sequential, ..*config })?.aggregate;
        Ok(WordBreakEntry {
            dictionary: chosen.iter().map(|w| sigma.render(w)).collect(),
            class,
            p: family.p,
            violations,
        })
    });
    Ok(WordBreakReport { entries: entries.into_iter().collect::<Result<_>>()? })
}

/// `count` random DFAs over `{a, b}` whose syntactic monoids are aperiodic,
/// non-degenerate and of size at most `max_size`.
pub fn random_aperiodic_dfas(seed: u64, count: usize, max_size: usize) -> Vec<Dfa> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = Alphabet::parse("a b").unwrap();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=4);
        let delta: Vec<usize> = (0..n * 2).map(|_| rng.gen_range(0..n)).collect();
        let accept: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let Ok(dfa) = Dfa::new(sigma.clone(), delta, 0, accept) else { continue };
        let Ok(ctx) = SyntacticContext::build(&dfa, max_size, Strategy::Sequential) else { continue };
        if ctx.size() >= 2 && ctx.is_aperiodic().holds() && !ctx.is_degenerate_image() {
            out.push(dfa);
        }
    }
    out
}
