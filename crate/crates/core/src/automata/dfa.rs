use std::collections::{HashMap, VecDeque};

use super::{Alphabet, Nfa, Symbol};
use crate::error::{cap_check, Error, Limit, Result};

/// A state of the product of two automata.
type Pair = (usize, usize);

/// Complete deterministic automaton. `delta[q * k + a]` is the successor of
/// `q` on symbol `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    delta: Vec<usize>,
    start: usize,
    accept: Vec<bool>,
}

/// Outcome of a language-equality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    /// A shortest (then lexicographically least) word accepted by exactly one side.
    Differ(Vec<Symbol>),
}

impl Equivalence {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equivalence::Equal)
    }
}

impl Dfa {
    /// Validating constructor.
    pub fn new(alphabet: Alphabet, delta: Vec<usize>, start: usize, accept: Vec<bool>) -> Result<Self> {
        let n = accept.len();
        if n == 0 {
            return Err(Error::Structural("automaton has no states".into()));
        }
        if delta.len() != n * alphabet.len() {
            return Err(Error::Structural("transition table is not total".into()));
        }
        if start >= n || delta.iter().any(|&t| t >= n) {
            return Err(Error::Structural("state index out of range".into()));
        }
        Ok(Dfa { alphabet, delta, start, accept })
    }

    pub(crate) fn from_parts(alphabet: Alphabet, delta: Vec<usize>, start: usize, accept: Vec<bool>) -> Self {
        debug_assert_eq!(delta.len(), accept.len() * alphabet.len());
        Dfa { alphabet, delta, start, accept }
    }

    /// Builds a DFA from a transition function.
    pub fn from_fn(
        alphabet: Alphabet,
        num_states: usize,
        start: usize,
        accepting: impl Fn(usize) -> bool,
        step: impl Fn(usize, Symbol) -> usize,
    ) -> Result<Self> {
        let k = alphabet.len();
        let delta = (0..num_states * k).map(|i| step(i / k, i % k)).collect();
        let accept = (0..num_states).map(accepting).collect();
        Dfa::new(alphabet, delta, start, accept)
    }

    /// Accepts every word.
    pub fn universal(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Dfa::from_parts(alphabet, vec![0; k], 0, vec![true])
    }

    /// Accepts nothing.
    pub fn empty(alphabet: Alphabet) -> Self {
        Dfa::universal(alphabet).complement()
    }

    /// Accepts only the empty word.
    pub fn epsilon(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Dfa::from_parts(alphabet, vec![1; 2 * k], 0, vec![true, false])
    }

    /// Accepts exactly the given word.
    pub fn word(alphabet: Alphabet, word: &[Symbol]) -> Self {
        let k = alphabet.len();
        let n = word.len() + 2;
        let sink = n - 1;
        let mut delta = vec![sink; n * k];
        for (i, &a) in word.iter().enumerate() {
            delta[i * k + a] = i + 1;
        }
        let mut accept = vec![false; n];
        accept[word.len()] = true;
        Dfa::from_parts(alphabet, delta, 0, accept)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accept.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    #[inline]
    pub fn next(&self, q: usize, a: Symbol) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accept[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.accept[q])
    }

    pub fn run_from(&self, q: usize, word: &[Symbol]) -> usize {
        word.iter().fold(q, |q, &a| self.next(q, a))
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.accept[self.run_from(self.start, word)]
    }

    /// Same transitions, different start and accept set.
    pub fn with_start_accept(&self, start: usize, accept: Vec<bool>) -> Dfa {
        assert_eq!(accept.len(), self.num_states());
        Dfa::from_parts(self.alphabet.clone(), self.delta.clone(), start, accept)
    }

    /// Same machine with the alphabet identifiers replaced.
    pub fn relabel(&self, alphabet: Alphabet) -> Result<Dfa> {
        if alphabet.len() != self.alphabet.len() {
            return Err(self.mismatch_against(&alphabet));
        }
        Ok(Dfa::from_parts(alphabet, self.delta.clone(), self.start, self.accept.clone()))
    }

    pub fn complement(&self) -> Dfa {
        let accept = self.accept.iter().map(|&b| !b).collect();
        Dfa::from_parts(self.alphabet.clone(), self.delta.clone(), self.start, accept)
    }

    fn mismatch_against(&self, other: &Alphabet) -> Error {
        Error::AlphabetMismatch { left: self.alphabet.to_string(), right: other.to_string() }
    }

    fn check_same_alphabet(&self, other: &Dfa) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(self.mismatch_against(&other.alphabet));
        }
        Ok(())
    }

    /// Reachable product with acceptance combined by `op`.
    pub fn product(&self, other: &Dfa, op: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        self.check_same_alphabet(other)?;
        let k = self.alphabet.len();
        let mut index = HashMap::new();
        let mut pairs = vec![(self.start, other.start)];
        index.insert((self.start, other.start), 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let t = (self.next(p, a), other.next(q, a));
                let j = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    pairs.len() - 1
                });
                delta.push(j);
            }
            i += 1;
        }
        let accept = pairs.iter().map(|&(p, q)| op(self.accept[p], other.accept[q])).collect();
        Ok(Dfa::from_parts(self.alphabet.clone(), delta, 0, accept))
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x && y)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x || y)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x && !y)
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            n.add_state(self.accept[q]);
        }
        for q in 0..self.num_states() {
            for a in 0..self.alphabet.len() {
                n.add_edge(q, Some(a), self.next(q, a));
            }
        }
        n.add_start(self.start);
        n
    }

    /// Machine for the reversed language.
    pub fn reverse(&self) -> Dfa {
        let mut n = Nfa::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            n.add_state(q == self.start);
        }
        for q in 0..self.num_states() {
            for a in 0..self.alphabet.len() {
                n.add_edge(self.next(q, a), Some(a), q);
            }
            if self.accept[q] {
                n.add_start(q);
            }
        }
        n.determinize().minimize()
    }

    pub fn concat(&self, other: &Dfa) -> Result<Dfa> {
        self.check_same_alphabet(other)?;
        let mut n = self.to_nfa();
        let off = n.absorb(&other.to_nfa());
        for q in 0..self.num_states() {
            if self.accept[q] {
                n.set_accepting(q, false);
                n.add_edge(q, None, other.start + off);
            }
        }
        Ok(n.determinize().minimize())
    }

    pub fn star(&self) -> Dfa {
        let mut n = self.to_nfa();
        let s = n.add_state(true);
        n.add_edge(s, None, self.start);
        for q in 0..self.num_states() {
            if self.accept[q] {
                n.add_edge(q, None, s);
            }
        }
        let mut m = Nfa::new(self.alphabet.clone());
        let off = m.absorb(&n);
        m.add_start(s + off);
        m.determinize().minimize()
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.start];
        seen[self.start] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..self.alphabet.len() {
                let t = self.next(q, a);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// States from which some accepting state is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..k {
                preds[self.next(q, a)].push(q);
            }
        }
        let mut live = self.accept.clone();
        let mut stack: Vec<usize> = self.accepting_states().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Minimal DFA, states numbered by breadth-first search from the start
    /// state in alphabet order.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let reach = self.reachable();
        let mut local = vec![usize::MAX; self.num_states()];
        for (i, &q) in reach.iter().enumerate() {
            local[q] = i;
        }
        let n = reach.len();
        let succ: Vec<usize> =
            reach.iter().flat_map(|&q| (0..k).map(move |a| (q, a))).map(|(q, a)| local[self.next(q, a)]).collect();
        let mut class: Vec<usize> = reach.iter().map(|&q| self.accept[q] as usize).collect();
        let mut count = {
            let mut seen = [false; 2];
            class.iter().for_each(|&c| seen[c] = true);
            seen.iter().filter(|&&b| b).count()
        };
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next_class = Vec::with_capacity(n);
            for q in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                sig.extend((0..k).map(|a| class[succ[q * k + a]]));
                let len = ids.len();
                next_class.push(*ids.entry(sig).or_insert(len));
            }
            let new_count = ids.len();
            class = next_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // canonical renumbering by BFS over the quotient
        let mut canon = vec![usize::MAX; count];
        let mut rep = vec![0usize; count];
        for q in 0..n {
            rep[class[q]] = q;
        }
        let mut order = vec![class[0]];
        canon[class[0]] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = rep[order[i]];
            for a in 0..k {
                let c = class[succ[q * k + a]];
                if canon[c] == usize::MAX {
                    canon[c] = order.len();
                    order.push(c);
                }
            }
            i += 1;
        }
        let mut delta = vec![0; count * k];
        let mut accept = vec![false; count];
        for (new, &c) in order.iter().enumerate() {
            let q = rep[c];
            accept[new] = self.accept[reach[q]];
            for a in 0..k {
                delta[new * k + a] = canon[class[succ[q * k + a]]];
            }
        }
        Dfa::from_parts(self.alphabet.clone(), delta, 0, accept)
    }

    /// Language equality with a shortlex-least counterexample.
    pub fn equivalent(&self, other: &Dfa) -> Result<Equivalence> {
        self.check_same_alphabet(other)?;
        let k = self.alphabet.len();
        let root = (self.start, other.start);
        let mut parent: HashMap<Pair, Option<(Pair, Symbol)>> = HashMap::new();
        parent.insert(root, None);
        let mut queue = VecDeque::from([root]);
        let differs = |(p, q): (usize, usize)| self.accept[p] != other.accept[q];
        let trace = |mut node: (usize, usize), parent: &HashMap<_, Option<((usize, usize), Symbol)>>| {
            let mut word = Vec::new();
            while let Some(&Some((prev, a))) = parent.get(&node) {
                word.push(a);
                node = prev;
            }
            word.reverse();
            word
        };
        if differs(root) {
            return Ok(Equivalence::Differ(Vec::new()));
        }
        while let Some(node) = queue.pop_front() {
            for a in 0..k {
                let t = (self.next(node.0, a), other.next(node.1, a));
                if parent.contains_key(&t) {
                    continue;
                }
                parent.insert(t, Some((node, a)));
                if differs(t) {
                    return Ok(Equivalence::Differ(trace(t, &parent)));
                }
                queue.push_back(t);
            }
        }
        Ok(Equivalence::Equal)
    }

    pub fn is_empty(&self) -> bool {
        !self.live_states()[self.start]
    }

    /// Shortlex-least accepted word.
    pub fn shortest_accepted(&self) -> Option<Vec<Symbol>> {
        match self.equivalent(&Dfa::empty(self.alphabet.clone())).expect("same alphabet") {
            Equivalence::Equal => None,
            Equivalence::Differ(w) => Some(w),
        }
    }

    /// All accepted words of length at most `max_len`, length-then-lex.
    /// Fails once more than `budget` candidate words would be examined.
    pub fn enumerate(&self, max_len: usize, budget: usize) -> Result<Vec<Vec<Symbol>>> {
        let k = self.alphabet.len();
        let live = self.live_states();
        let mut out = Vec::new();
        let mut frontier: Vec<(Vec<Symbol>, usize)> = vec![(Vec::new(), self.start)];
        let mut examined = 0usize;
        for len in 0..=max_len {
            frontier.retain(|(_, q)| live[*q]);
            for (w, q) in &frontier {
                if self.accept[*q] {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            examined = examined.saturating_add(frontier.len() * k);
            cap_check(Limit::EnumerationBudget, budget, examined)?;
            frontier = frontier
                .iter()
                .flat_map(|(w, q)| {
                    (0..k).map(move |a| {
                        let mut w2 = w.clone();
                        w2.push(a);
                        (w2, self.next(*q, a))
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Binary encoding: each symbol becomes its index written big-endian in
    /// `code_width(|Σ|)` bits; codes past the end decode to the last symbol.
    pub fn binarize(&self) -> Dfa {
        let k = self.alphabet.len();
        let width = code_width(k);
        // inner node (depth d, prefix value v) of the code tree
        let node = |d: usize, v: usize| (1usize << d) - 1 + v;
        let nodes = (1usize << width) - 1;
        let n = self.num_states() * nodes;
        let id = |q: usize, d: usize, v: usize| q * nodes + node(d, v);
        let mut delta = vec![0; n * 2];
        for q in 0..self.num_states() {
            for d in 0..width {
                for v in 0..(1usize << d) {
                    for bit in 0..2 {
                        let v2 = v * 2 + bit;
                        let target =
                            if d + 1 == width { id(self.next(q, v2.min(k - 1)), 0, 0) } else { id(q, d + 1, v2) };
                        delta[id(q, d, v) * 2 + bit] = target;
                    }
                }
            }
        }
        let accept = (0..n).map(|s| s % nodes == 0 && self.accept[s / nodes]).collect();
        Dfa::from_parts(Alphabet::binary(), delta, id(self.start, 0, 0), accept).minimize()
    }
}

/// Bits per symbol in the binary encoding of a `k`-letter alphabet.
pub fn code_width(k: usize) -> usize {
    let mut w = 1;
    while (1usize << w) < k {
        w += 1;
    }
    w
}

/// Encodes a word over a `k`-letter alphabet as bits.
pub fn encode_binary(k: usize, word: &[Symbol]) -> Vec<Symbol> {
    let w = code_width(k);
    word.iter().flat_map(|&a| (0..w).rev().map(move |i| (a >> i) & 1)).collect()
}

/// Inverse of [`encode_binary`]; `None` if the length is not a multiple of
/// the code width. Surplus codes decode to the last symbol.
pub fn decode_binary(k: usize, bits: &[Symbol]) -> Option<Vec<Symbol>> {
    let w = code_width(k);
    if !bits.len().is_multiple_of(w) {
        return None;
    }
    Some(bits.chunks(w).map(|c| c.iter().fold(0, |v, &b| v * 2 + b).min(k - 1)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains_one() -> Dfa {
        Dfa::from_fn(Alphabet::binary(), 3, 0, |q| q >= 1, |q, a| if q == 0 { a } else { q.max(1) }).unwrap()
    }

    #[test]
    fn minimize_merges_and_canonicalizes() {
        let d = contains_one();
        let m = d.minimize();
        assert_eq!(m.num_states(), 2);
        assert_eq!(m.minimize(), m);
        assert!(m.equivalent(&d).unwrap().is_equal());
    }

    #[test]
    fn equivalence_counterexample_is_shortest() {
        let sigma = Alphabet::binary();
        let all = Dfa::universal(sigma.clone());
        let plus = all.difference(&Dfa::epsilon(sigma.clone())).unwrap();
        assert_eq!(all.equivalent(&plus).unwrap(), Equivalence::Differ(vec![]));
        let w = contains_one().equivalent(&Dfa::empty(sigma)).unwrap();
        assert_eq!(w, Equivalence::Differ(vec![1]));
    }

    #[test]
    fn enumerate_respects_budget() {
        let d = contains_one();
        let words = d.enumerate(2, 100).unwrap();
        assert_eq!(words, vec![vec![1], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!(Dfa::universal(Alphabet::binary()).enumerate(20, 1000).is_err());
    }

    #[test]
    fn concat_star_reverse() {
        let sigma = Alphabet::parse("a b").unwrap();
        let a = Dfa::word(sigma.clone(), &[0]);
        let ab = a.concat(&Dfa::word(sigma.clone(), &[1])).unwrap();
        assert!(ab.accepts(&[0, 1]) && !ab.accepts(&[1, 0]));
        assert!(ab.reverse().accepts(&[1, 0]));
        let s = ab.star();
        assert!(s.accepts(&[]) && s.accepts(&[0, 1, 0, 1]) && !s.accepts(&[0, 1, 0]));
    }

    #[test]
    fn binary_codes() {
        assert_eq!(code_width(1), 1);
        assert_eq!(code_width(3), 2);
        assert_eq!(code_width(4), 2);
        assert_eq!(code_width(5), 3);
        assert_eq!(encode_binary(3, &[2, 0]), vec![1, 0, 0, 0]);
        assert_eq!(decode_binary(3, &[1, 1]), Some(vec![2]));
        assert_eq!(decode_binary(3, &[1]), None);
    }

    #[test]
    fn validating_constructor() {
        let sigma = Alphabet::binary();
        assert!(Dfa::new(sigma.clone(), vec![0], 0, vec![true]).is_err());
        assert!(Dfa::new(sigma.clone(), vec![0, 1], 0, vec![true]).is_err());
        assert!(Dfa::new(sigma, vec![0, 0], 0, vec![true]).is_ok());
    }
}
