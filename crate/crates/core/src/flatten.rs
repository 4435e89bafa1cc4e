//! Conductor computation and reduction to flat languages over block
//! alphabets.

use std::collections::HashMap;

use crate::automata::{write_dfa, Alphabet, Dfa, Symbol};
use crate::error::{cap_check, Limit, Result};
use crate::monoid::{Elem, ElemSet, SyntacticContext};

/// Default cap on the block alphabet size `|Σ|^p`.
pub const DEFAULT_BLOCK_CAP: usize = 4096;

/// The eventually periodic sequence `X_ℓ = φ(Σ^ℓ)`.
#[derive(Clone, Debug)]
pub struct LengthProfile {
    /// `X_0, …, X_{preperiod + period - 1}`
    pub sets: Vec<ElemSet>,
    pub preperiod: usize,
    pub period: usize,
}

impl LengthProfile {
    pub fn new(ctx: &SyntacticContext) -> Self {
        let n = ctx.size();
        let mut seen: HashMap<ElemSet, usize> = HashMap::new();
        let mut cur = ElemSet::from_iter(n, [ctx.identity()]);
        let mut sets = Vec::new();
        loop {
            if let Some(&i) = seen.get(&cur) {
                let period = sets.len() - i;
                return LengthProfile { sets, preperiod: i, period };
            }
            seen.insert(cur.clone(), sets.len());
            let next =
                ElemSet::from_iter(n, cur.iter().flat_map(|m| (0..ctx.alphabet().len()).map(move |a| ctx.step(m, a))));
            sets.push(std::mem::replace(&mut cur, next));
        }
    }

    /// `X_ℓ` for any length.
    pub fn at(&self, len: usize) -> &ElemSet {
        if len < self.sets.len() {
            &self.sets[len]
        } else {
            &self.sets[self.preperiod + (len - self.preperiod) % self.period]
        }
    }

    /// Whether some word of length `len` maps to `r`.
    pub fn has_length(&self, r: Elem, len: usize) -> bool {
        self.at(len).contains(r)
    }

    /// Lengths at which `X_ℓ` must agree for every `ℓ` to agree.
    pub fn horizon(&self) -> usize {
        self.preperiod + self.period
    }

    /// Whether `X_{nK}` is the same set for all `n ≥ 1`.
    pub fn is_stable_at(&self, k: usize) -> bool {
        let first = self.at(k);
        let reps = self.preperiod.div_ceil(k) + self.period;
        (2..=reps.max(1)).all(|n| self.at(n * k) == first)
    }
}

/// Least `K ≥ 1` with `φ(Σ^K) = φ(Σ^{nK})` for all `n ≥ 1`.
pub fn conductor(ctx: &SyntacticContext) -> usize {
    let profile = LengthProfile::new(ctx);
    (1..=profile.horizon() + 1)
        .find(|&k| profile.is_stable_at(k))
        .expect("a multiple of the period past the preperiod is stable")
}

/// Flatness: every element of `φ(Σ⁺)` occurs at every positive length, i.e.
/// `X_ℓ` is constant for `ℓ ≥ 1`.
pub fn check_flat(ctx: &SyntacticContext) -> bool {
    let profile = LengthProfile::new(ctx);
    let plus = ctx.plus_image();
    (1..=profile.horizon()).all(|len| profile.at(len) == &plus)
}

/// One flat language per remainder `r` with `|r| < p`.
#[derive(Clone, Debug)]
pub struct FlatFamily {
    pub p: usize,
    pub alphabet: Alphabet,
    pub block_alphabet: Alphabet,
    /// Indexed by remainder in length-then-lex order.
    pub components: Vec<FlatComponent>,
}

#[derive(Clone, Debug)]
pub struct FlatComponent {
    pub remainder: Vec<Symbol>,
    pub dfa: Dfa,
}

/// Flattens with the default block cap.
pub fn flatten(ctx: &SyntacticContext) -> Result<FlatFamily> {
    flatten_capped(ctx, DEFAULT_BLOCK_CAP)
}

pub fn flatten_capped(ctx: &SyntacticContext, block_cap: usize) -> Result<FlatFamily> {
    let p = conductor(ctx);
    let sigma = ctx.alphabet().clone();
    let k = sigma.len();
    let blocks = k.checked_pow(p as u32).unwrap_or(usize::MAX);
    cap_check(Limit::BlockAlphabet, block_cap, blocks)?;
    let block_alphabet = block_alphabet(&sigma, p)?;
    let dfa = ctx.dfa();
    let components = sigma
        .all_words(p - 1)
        .map(|remainder| {
            let accept: Vec<bool> =
                (0..dfa.num_states()).map(|q| dfa.is_accepting(dfa.run_from(q, &remainder))).collect();
            let flat = Dfa::from_fn(
                block_alphabet.clone(),
                dfa.num_states(),
                dfa.start(),
                |q| accept[q],
                |q, b| dfa.run_from(q, &decode_block(b, k, p)),
            )
            .expect("total by construction")
            .minimize();
            FlatComponent { remainder, dfa: flat }
        })
        .collect();
    Ok(FlatFamily { p, alphabet: sigma, block_alphabet, components })
}

/// All `p`-tuples in lexicographic order, named by joining with `.`.
pub fn block_alphabet(sigma: &Alphabet, p: usize) -> Result<Alphabet> {
    let names = crate::automata::words_of_length(sigma.len(), p)
        .map(|w| w.iter().map(|&a| sigma.name(a)).collect::<Vec<_>>().join("."));
    Alphabet::new(names)
}

fn decode_block(mut b: Symbol, k: usize, p: usize) -> Vec<Symbol> {
    let mut w = vec![0; p];
    for slot in w.iter_mut().rev() {
        *slot = b % k;
        b /= k;
    }
    w
}

impl FlatFamily {
    /// Index of the block symbol for a `p`-symbol chunk.
    pub fn block_of(&self, chunk: &[Symbol]) -> Symbol {
        chunk.iter().fold(0, |acc, &a| acc * self.alphabet.len() + a)
    }

    pub fn block_symbols(&self, b: Symbol) -> Vec<Symbol> {
        decode_block(b, self.alphabet.len(), self.p)
    }

    /// Component index for a remainder.
    pub fn component_index(&self, remainder: &[Symbol]) -> usize {
        let k = self.alphabet.len();
        let shorter: usize = (0..remainder.len()).map(|i| k.pow(i as u32)).sum();
        shorter + remainder.iter().fold(0, |acc, &a| acc * k + a)
    }

    /// Splits `x = x' r` with `|x'|` a multiple of `p`, returning the
    /// component index and `x'` as block symbols.
    pub fn reduce(&self, x: &[Symbol]) -> (usize, Vec<Symbol>) {
        let cut = x.len() - x.len() % self.p;
        let blocks = x[..cut].chunks(self.p).map(|c| self.block_of(c)).collect();
        (self.component_index(&x[cut..]), blocks)
    }

    pub fn accepts(&self, x: &[Symbol]) -> bool {
        let (i, blocks) = self.reduce(x);
        self.components[i].dfa.accepts(&blocks)
    }

    /// Manifest plus one DFA file per remainder.
    pub fn serialize(&self) -> (String, Vec<(String, String)>) {
        let mut manifest = format!("p: {}\n", self.p);
        let mut files = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            let name = format!("component_{i}.dfa");
            let r = if c.remainder.is_empty() { "%e".to_string() } else { self.alphabet.render(&c.remainder) };
            manifest.push_str(&format!("component: {r} {name}\n"));
            files.push((name, write_dfa(&c.dfa)));
        }
        (manifest, files)
    }
}
