//! Assignment of the query-complexity class and extraction of MOD_p
//! witnesses for non-aperiodic components.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use crate::automata::{Dfa, Symbol};
use crate::error::{Error, Result};
use crate::flatten::{check_flat, flatten_capped, FlatFamily};
use crate::monoid::{Aperiodicity, Elem, SyntacticContext};
use crate::Config;

/// Query-complexity class, ordered from cheapest to most expensive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplexityClass {
    /// Degenerate: decided from the length alone.
    ZeroQuery,
    /// Trivial: constant number of queries.
    Constant,
    /// Star-free: about √n queries.
    SqrtN,
    /// Everything else: Θ(n).
    Linear,
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexityClass::ZeroQuery => "ZeroQuery",
            ComplexityClass::Constant => "Constant",
            ComplexityClass::SqrtN => "SqrtN",
            ComplexityClass::Linear => "Linear",
        })
    }
}

impl std::str::FromStr for ComplexityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ZeroQuery" => Ok(ComplexityClass::ZeroQuery),
            "Constant" => Ok(ComplexityClass::Constant),
            "SqrtN" => Ok(ComplexityClass::SqrtN),
            "Linear" => Ok(ComplexityClass::Linear),
            _ => Err(Error::Precondition(format!("unknown class `{s}`"))),
        }
    }
}

/// Predicate values backing a component's class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub monoid_size: usize,
    pub degenerate: bool,
    pub band: bool,
    pub aperiodic: bool,
    /// Reported separately because it does not affect the class.
    pub epsilon_member: bool,
}

#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub remainder: Vec<Symbol>,
    pub class: ComplexityClass,
    pub evidence: Evidence,
    pub witness: Option<ModPWitness>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub p: usize,
    pub components: Vec<ComponentReport>,
    pub aggregate: ComplexityClass,
    family: FlatFamily,
}

/// A cyclic element together with words realizing `s^p`, `s` and `s^{n0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPWitness {
    pub element: Elem,
    pub p: usize,
    pub n0: usize,
    pub a0: Vec<Symbol>,
    pub a1: Vec<Symbol>,
    pub b: Vec<Symbol>,
}

fn evidence(ctx: &SyntacticContext) -> Evidence {
    Evidence {
        monoid_size: ctx.size(),
        degenerate: ctx.is_degenerate_image(),
        band: ctx.is_rectangular_band_image(),
        aperiodic: ctx.is_aperiodic().holds(),
        epsilon_member: ctx.is_accepting(ctx.identity()),
    }
}

fn class_of(e: &Evidence) -> ComplexityClass {
    if e.degenerate {
        ComplexityClass::ZeroQuery
    } else if e.band {
        ComplexityClass::Constant
    } else if e.aperiodic {
        ComplexityClass::SqrtN
    } else {
        ComplexityClass::Linear
    }
}

/// Smallest class of a flat component.
pub fn classify_component(ctx: &SyntacticContext) -> Result<ComplexityClass> {
    if !check_flat(ctx) {
        return Err(Error::Precondition("component is not flat".into()));
    }
    Ok(class_of(&evidence(ctx)))
}

/// Classifies with default caps.
pub fn classify(dfa: &Dfa) -> Result<ClassificationReport> {
    classify_with(dfa, &Config::default())
}

pub fn classify_with(dfa: &Dfa, config: &Config) -> Result<ClassificationReport> {
    let ctx = SyntacticContext::build(dfa, config.monoid_cap, config.strategy)?;
    let family = flatten_capped(&ctx, config.block_cap)?;
    let components = config.strategy.map_slice(&family.components, |c| -> Result<ComponentReport> {
        let sub = SyntacticContext::build(&c.dfa, config.monoid_cap, crate::exec::Strategy::Sequential)?;
        let evidence = evidence(&sub);
        let class = class_of(&evidence);
        let witness = if evidence.aperiodic { None } else { Some(mod_p_witness(&sub)?) };
        Ok(ComponentReport { remainder: c.remainder.clone(), class, evidence, witness })
    });
    let components = components.into_iter().collect::<Result<Vec<_>>>()?;
    let aggregate = components.iter().map(|c| c.class).max().expect("at least one component");
    Ok(ClassificationReport { p: family.p, components, aggregate, family })
}

/// Shortest nonempty word for every element of φ(Σ⁺).
fn shortest_nonempty(ctx: &SyntacticContext) -> HashMap<Elem, Vec<Symbol>> {
    let mut found: HashMap<Elem, Vec<Symbol>> = HashMap::new();
    let mut queue = VecDeque::new();
    for a in 0..ctx.alphabet().len() {
        let m = ctx.letter(a);
        if let std::collections::hash_map::Entry::Vacant(e) = found.entry(m) {
            e.insert(vec![a]);
            queue.push_back(m);
        }
    }
    while let Some(m) = queue.pop_front() {
        for a in 0..ctx.alphabet().len() {
            let t = ctx.step(m, a);
            if !found.contains_key(&t) {
                let mut w = found[&m].clone();
                w.push(a);
                found.insert(t, w);
                queue.push_back(t);
            }
        }
    }
    found
}

/// Witness built from the least non-aperiodic element.
pub fn mod_p_witness(ctx: &SyntacticContext) -> Result<ModPWitness> {
    let Aperiodicity::Violator { element, period, index } = ctx.is_aperiodic() else {
        return Err(Error::Precondition("monoid is aperiodic".into()));
    };
    let words = shortest_nonempty(ctx);
    let m = ctx.monoid();
    let word_for = |target: Elem| -> Result<Vec<Symbol>> {
        match words.get(&target) {
            Some(w) => Ok(w.clone()),
            None if target == ctx.identity() => Ok(Vec::new()),
            None => Err(Error::Structural(format!("no word maps to {}", ctx.name(target)))),
        }
    };
    Ok(ModPWitness {
        element,
        p: period,
        n0: index,
        a0: word_for(m.power(element, period))?,
        a1: word_for(element)?,
        b: word_for(m.power(element, index))?,
    })
}

/// Checks that `φ(a_{x1} ⋯ a_{xm} b)` depends exactly on the weight of `x`
/// modulo `p`, for every bit string of length at most `m_max`.
pub fn verify_witness(ctx: &SyntacticContext, w: &ModPWitness, m_max: usize) -> bool {
    if w.p < 2 {
        return false;
    }
    let (a0, a1, b) = (ctx.phi(&w.a0), ctx.phi(&w.a1), ctx.phi(&w.b));
    let mut by_residue: HashMap<usize, Elem> = HashMap::new();
    for len in 0..=m_max {
        for x in crate::automata::words_of_length(2, len) {
            let prefix = x.iter().fold(ctx.identity(), |acc, &bit| ctx.mul(acc, if bit == 1 { a1 } else { a0 }));
            let value = ctx.mul(prefix, b);
            let residue = x.iter().sum::<usize>() % w.p;
            if *by_residue.entry(residue).or_insert(value) != value {
                return false;
            }
        }
    }
    let mut values: Vec<Elem> = by_residue.values().copied().collect();
    values.sort_unstable();
    values.dedup();
    values.len() == by_residue.len()
}

impl ClassificationReport {
    pub fn family(&self) -> &FlatFamily {
        &self.family
    }

    fn remainder_name(&self, r: &[Symbol]) -> String {
        if r.is_empty() {
            "%e".into()
        } else {
            self.family.alphabet.render(r)
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("conductor: {}\n", self.p);
        let yn = |b: bool| if b { "yes" } else { "no" };
        for c in &self.components {
            let e = &c.evidence;
            writeln!(
                out,
                "component {}: {} (monoid size {}, degenerate {}, band {}, aperiodic {}, accepts empty {})",
                self.remainder_name(&c.remainder),
                c.class,
                e.monoid_size,
                yn(e.degenerate),
                yn(e.band),
                yn(e.aperiodic),
                yn(e.epsilon_member)
            )
            .unwrap();
            if let Some(w) = &c.witness {
                let sigma = &self.family.block_alphabet;
                writeln!(
                    out,
                    "  MOD_{} witness: n0 = {}, a0 = \"{}\", a1 = \"{}\", b = \"{}\"",
                    w.p,
                    w.n0,
                    sigma.render(&w.a0),
                    sigma.render(&w.a1),
                    sigma.render(&w.b)
                )
                .unwrap();
            }
        }
        writeln!(out, "aggregate: {}", self.aggregate).unwrap();
        out
    }

    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for c in &self.components {
            let e = &c.evidence;
            write!(
                out,
                "record=component remainder={} class={} monoid_size={} degenerate={} band={} aperiodic={} epsilon={}",
                self.remainder_name(&c.remainder),
                c.class,
                e.monoid_size,
                e.degenerate,
                e.band,
                e.aperiodic,
                e.epsilon_member
            )
            .unwrap();
            if let Some(w) = &c.witness {
                write!(out, " witness_p={} witness_n0={}", w.p, w.n0).unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "record=aggregate class={} conductor={}", self.aggregate, self.p).unwrap();
        out
    }
}
