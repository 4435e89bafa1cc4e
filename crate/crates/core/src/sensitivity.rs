//! Sensitivity masks as regular languages.
//!
//! For a word `x` the mask `y ∈ {0,1}^|x|` marks the positions where some
//! single-symbol change flips membership. Pairs `(x, y)` with a wrong mask
//! form a regular language recognized by an NFA that guesses one wrong
//! position; its complement is the language of correct pairs, and the
//! projection onto masks gives `S_L`. The sensitivity at length `n` is the
//! largest weight of a mask of length `n` in `S_L`.

use std::collections::HashMap;
use std::fmt;

use crate::automata::{words_of_length, Alphabet, Dfa, Nfa, Symbol};
use crate::error::{cap_check, Error, Limit, Result};

pub const DEFAULT_MASK_CAP: usize = 1_000_000;

/// Word budget for the brute-force oracles.
pub const BRUTE_BUDGET: usize = 1 << 22;

/// Alphabet of pairs `(a, bit)`, written `a:0` and `a:1`. Pair `(a, b)` has
/// index `2a + b`.
pub fn pair_alphabet(sigma: &Alphabet) -> Result<Alphabet> {
    Alphabet::new(sigma.symbols().iter().flat_map(|s| [format!("{s}:0"), format!("{s}:1")]))
}

/// Pairs a word with a mask over the pair alphabet.
pub fn zip_pair(x: &[Symbol], mask: &[Symbol]) -> Vec<Symbol> {
    x.iter().zip(mask).map(|(&a, &b)| 2 * a + b).collect()
}

#[derive(Clone, Debug)]
pub struct MaskAutomaton {
    /// Pairs with at least one wrong mask bit.
    pub violation: Nfa,
    /// Pairs whose mask is exactly the sensitivity mask of the word.
    pub s_prime: Dfa,
    /// Projection of `s_prime` onto the mask coordinate.
    pub s_mask: Nfa,
    determinized: Dfa,
}

impl MaskAutomaton {
    /// Minimal DFA of `S_L` over `{0, 1}`.
    pub fn determinized(&self) -> &Dfa {
        &self.determinized
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Track {
    /// Before the guessed position.
    Before(usize),
    /// Mask bit 0 at a sensitive position: the real run and one changed run.
    Missed(usize, usize),
    /// Mask bit 1 at an insensitive position: the runs for every symbol at
    /// the guessed position, the real one included.
    Spurious(Vec<usize>),
}

pub fn build_mask_automata(dfa: &Dfa, cap: usize) -> Result<MaskAutomaton> {
    let dfa = dfa.minimize();
    let sigma = dfa.alphabet().clone();
    let k = sigma.len();
    let q = dfa.num_states();
    let estimate = (q as u128).saturating_pow(k as u32 + 1).min(usize::MAX as u128) as usize;
    cap_check(Limit::MaskStates, cap, estimate)?;

    let pairs = pair_alphabet(&sigma)?;
    let mut nfa = Nfa::new(pairs);
    let mut index: HashMap<Track, usize> = HashMap::new();
    let mut queue = Vec::new();
    let accepting = |t: &Track| match t {
        Track::Before(_) => false,
        Track::Missed(a, b) => dfa.is_accepting(*a) != dfa.is_accepting(*b),
        Track::Spurious(runs) => runs.iter().all(|&r| dfa.is_accepting(r) == dfa.is_accepting(runs[0])),
    };
    let mut intern = |t: Track, nfa: &mut Nfa, queue: &mut Vec<(Track, usize)>| -> Result<usize> {
        if let Some(&i) = index.get(&t) {
            return Ok(i);
        }
        cap_check(Limit::MaskStates, cap, index.len() + 1)?;
        let i = nfa.add_state(accepting(&t));
        index.insert(t.clone(), i);
        queue.push((t, i));
        Ok(i)
    };
    let start = intern(Track::Before(dfa.start()), &mut nfa, &mut queue)?;
    nfa.add_start(start);
    while let Some((t, from)) = queue.pop() {
        for a in 0..k {
            for bit in 0..2 {
                let label = Some(2 * a + bit);
                let mut targets = Vec::new();
                match &t {
                    Track::Before(s) => {
                        targets.push(Track::Before(dfa.next(*s, a)));
                        if bit == 0 {
                            for b in (0..k).filter(|&b| b != a) {
                                targets.push(Track::Missed(dfa.next(*s, a), dfa.next(*s, b)));
                            }
                        } else {
                            targets.push(Track::Spurious((0..k).map(|b| dfa.next(*s, b)).collect()));
                        }
                    }
                    Track::Missed(r, f) => targets.push(Track::Missed(dfa.next(*r, a), dfa.next(*f, a))),
                    Track::Spurious(runs) => {
                        targets.push(Track::Spurious(runs.iter().map(|&r| dfa.next(r, a)).collect()))
                    }
                }
                for target in targets {
                    let to = intern(target, &mut nfa, &mut queue)?;
                    nfa.add_edge(from, label, to);
                }
            }
        }
    }

    let s_prime = nfa.determinize_capped(cap)?.complement().minimize();
    let mut s_mask = Nfa::new(Alphabet::binary());
    for p in 0..s_prime.num_states() {
        s_mask.add_state(s_prime.is_accepting(p));
    }
    s_mask.add_start(s_prime.start());
    for p in 0..s_prime.num_states() {
        for a in 0..k {
            for bit in 0..2 {
                s_mask.add_edge(p, Some(bit), s_prime.next(p, 2 * a + bit));
            }
        }
    }
    let determinized = s_mask.determinize_capped(cap)?.minimize();
    Ok(MaskAutomaton { violation: nfa, s_prime, s_mask, determinized })
}

/// Sensitivity mask of `x`, as bits.
pub fn sensitivity_mask(dfa: &Dfa, x: &[Symbol]) -> Vec<Symbol> {
    let k = dfa.alphabet().len();
    let mut prefix = vec![dfa.start()];
    for &a in x {
        prefix.push(dfa.next(*prefix.last().unwrap(), a));
    }
    let member = dfa.is_accepting(prefix[x.len()]);
    (0..x.len())
        .map(|i| {
            let flips = (0..k)
                .filter(|&b| b != x[i])
                .any(|b| dfa.is_accepting(dfa.run_from(dfa.next(prefix[i], b), &x[i + 1..])) != member);
            flips as Symbol
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SensitivityVerdict {
    /// `s(n) = bound` across the upper half of the range, wherever nonzero.
    Constant(usize),
    /// `s(n) ≥ n/p − c` across the upper half of the range.
    LinearLower {
        p: usize,
        c: usize,
    },
    Inconclusive,
}

impl fmt::Display for SensitivityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SensitivityVerdict::Constant(b) => write!(f, "Constant({b})"),
            SensitivityVerdict::LinearLower { p, c } => write!(f, "LinearLower({p}, {c})"),
            SensitivityVerdict::Inconclusive => f.write_str("Inconclusive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SensitivityProfile {
    /// `values[n]`: sensitivity at length `n`, `None` if no word has length `n`.
    pub values: Vec<Option<usize>>,
    pub verdict: SensitivityVerdict,
}

impl SensitivityProfile {
    pub fn at(&self, n: usize) -> Option<usize> {
        self.values.get(n).copied().flatten()
    }

    /// CSV with header `n,sensitivity`; lengths without words are left blank.
    pub fn csv(&self) -> String {
        let mut out = String::from("n,sensitivity\n");
        for (n, v) in self.values.iter().enumerate() {
            match v {
                Some(s) => out.push_str(&format!("{n},{s}\n")),
                None => out.push_str(&format!("{n},\n")),
            }
        }
        out
    }
}

/// Exact `s(n)` for `n ≤ n_max` by a max-weight walk over the mask DFA.
pub fn sensitivity_by_length(mask: &MaskAutomaton, n_max: usize) -> SensitivityProfile {
    let d = mask.determinized();
    let mut weight: Vec<Option<usize>> = vec![None; d.num_states()];
    weight[d.start()] = Some(0);
    let mut values = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        values.push(d.accepting_states().filter_map(|q| weight[q]).max());
        if n == n_max {
            break;
        }
        let mut next = vec![None; d.num_states()];
        for (q, w) in weight.iter().enumerate() {
            let Some(w) = *w else { continue };
            for bit in 0..2 {
                let t = d.next(q, bit);
                next[t] = next[t].max(Some(w + bit));
            }
        }
        weight = next;
    }
    let verdict = verdict(&values, d.num_states());
    SensitivityProfile { values, verdict }
}

/// Looks at the upper half of the range, skipping lengths where `s(n) = 0`
/// (membership fixed by the length). Constant if the remaining values agree;
/// otherwise the smallest `p ≤ p_max` with a constant `c` such that
/// `s(n) ≥ n/p − c` and the bound stays above `n/(2p)` throughout.
fn verdict(values: &[Option<usize>], p_max: usize) -> SensitivityVerdict {
    let n_max = values.len().saturating_sub(1);
    let top: Vec<(usize, usize)> =
        (n_max.div_ceil(2)..=n_max).filter_map(|n| values[n].map(|s| (n, s))).filter(|&(_, s)| s > 0).collect();
    let Some(&(lowest, first)) = top.first() else {
        return SensitivityVerdict::Constant(0);
    };
    if top.iter().all(|&(_, s)| s == first) {
        return SensitivityVerdict::Constant(first);
    }
    for p in 1..=p_max.max(1) {
        let c = top.iter().map(|&(n, s)| n.saturating_sub(p * s).div_ceil(p)).max().unwrap_or(0);
        if 2 * p * c < lowest {
            return SensitivityVerdict::LinearLower { p, c };
        }
    }
    SensitivityVerdict::Inconclusive
}

fn budget(k: usize, n: usize) -> Result<()> {
    let words = (k as u128).saturating_pow(n as u32).min(usize::MAX as u128) as usize;
    cap_check(Limit::EnumerationBudget, BRUTE_BUDGET, words)
}

/// Largest number of sensitive positions over all words of length `n`.
pub fn brute_sensitivity(dfa: &Dfa, n: usize) -> Result<usize> {
    let k = dfa.alphabet().len();
    budget(k, n)?;
    Ok(words_of_length(k, n).map(|x| sensitivity_mask(dfa, &x).iter().sum::<usize>()).max().unwrap_or(0))
}

/// Largest number of disjoint flipping blocks over all binary words of
/// length `n`.
pub fn brute_block_sensitivity(dfa: &Dfa, n: usize) -> Result<usize> {
    if dfa.alphabet().len() != 2 {
        return Err(Error::Precondition("block sensitivity is computed for binary alphabets only".into()));
    }
    cap_check(Limit::EnumerationBudget, BRUTE_BUDGET, 3usize.saturating_pow(n as u32).saturating_mul(1 << n.min(40)))?;
    let full = (1usize << n) - 1;
    let mut best = 0;
    let mut flips = vec![false; 1 << n];
    let mut packing = vec![0usize; 1 << n];
    for x in words_of_length(2, n) {
        let member = dfa.accepts(&x);
        for (mask, slot) in flips.iter_mut().enumerate() {
            let y: Vec<Symbol> = (0..n).map(|i| x[i] ^ (mask >> i & 1)).collect();
            *slot = dfa.accepts(&y) != member;
        }
        for set in 1..=full {
            let low = set & set.wrapping_neg();
            let mut value = packing[set ^ low];
            let rest = set ^ low;
            let mut sub = rest;
            loop {
                let block = sub | low;
                if flips[block] {
                    value = value.max(1 + packing[set ^ block]);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            packing[set] = value;
        }
        best = best.max(packing[full]);
    }
    Ok(best)
}
