use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Alphabet, Dfa, Symbol};
use crate::error::{cap_check, Limit, Result};

/// Nondeterministic automaton with epsilon moves.
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Alphabet,
    num_states: usize,
    /// `edges[q]` lists `(label, target)`; `None` is an epsilon move.
    edges: Vec<Vec<(Option<Symbol>, usize)>>,
    start: Vec<usize>,
    accept: Vec<bool>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet) -> Self {
        Nfa { alphabet, num_states: 0, edges: Vec::new(), start: Vec::new(), accept: Vec::new() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.edges.push(Vec::new());
        self.accept.push(accepting);
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn add_edge(&mut self, from: usize, label: Option<Symbol>, to: usize) {
        assert!(from < self.num_states && to < self.num_states, "edge endpoint out of range");
        if let Some(a) = label {
            assert!(a < self.alphabet.len(), "symbol out of range");
        }
        self.edges[from].push((label, to));
    }

    pub fn add_start(&mut self, q: usize) {
        assert!(q < self.num_states);
        if !self.start.contains(&q) {
            self.start.push(q);
        }
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accept[q] = accepting;
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accept[q]
    }

    pub fn edges(&self, q: usize) -> &[(Option<Symbol>, usize)] {
        &self.edges[q]
    }

    pub fn start_states(&self) -> &[usize] {
        &self.start
    }

    /// Copies `other` into `self`, returning the offset of its states.
    pub(crate) fn absorb(&mut self, other: &Nfa) -> usize {
        let offset = self.num_states;
        for q in 0..other.num_states {
            self.add_state(other.accept[q]);
        }
        for q in 0..other.num_states {
            for &(l, t) in &other.edges[q] {
                self.add_edge(q + offset, l, t + offset);
            }
        }
        offset
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &(l, t) in &self.edges[q] {
                if l.is_none() && set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let mut cur: BTreeSet<usize> = self.start.iter().copied().collect();
        self.closure(&mut cur);
        for &a in word {
            let mut next = BTreeSet::new();
            for &q in &cur {
                for &(l, t) in &self.edges[q] {
                    if l == Some(a) {
                        next.insert(t);
                    }
                }
            }
            self.closure(&mut next);
            cur = next;
        }
        cur.iter().any(|&q| self.accept[q])
    }

    /// Subset construction. The result is complete but not minimized.
    pub fn determinize(&self) -> Dfa {
        self.determinize_capped(usize::MAX).expect("uncapped")
    }

    /// Subset construction failing once more than `cap` subsets appear.
    pub fn determinize_capped(&self, cap: usize) -> Result<Dfa> {
        let k = self.alphabet.len();
        let mut start: BTreeSet<usize> = self.start.iter().copied().collect();
        self.closure(&mut start);
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let mut row = vec![0; k];
            for (a, slot) in row.iter_mut().enumerate() {
                let mut next = BTreeSet::new();
                for &q in &subsets[i] {
                    for &(l, t) in &self.edges[q] {
                        if l == Some(a) {
                            next.insert(t);
                        }
                    }
                }
                self.closure(&mut next);
                *slot = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        let j = subsets.len();
                        cap_check(Limit::MaskStates, cap, j + 1)?;
                        index.insert(next.clone(), j);
                        subsets.push(next);
                        queue.push_back(j);
                        j
                    }
                };
            }
            // rows are produced in index order because the queue is FIFO
            delta.extend(row);
        }
        let accept = subsets.iter().map(|s| s.iter().any(|&q| self.accept[q])).collect();
        Ok(Dfa::from_parts(self.alphabet.clone(), delta, 0, accept))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_closure_and_determinize() {
        // (a | b a)
        let sigma = Alphabet::parse("a b").unwrap();
        let mut n = Nfa::new(sigma);
        let s = n.add_state(false);
        let x = n.add_state(false);
        let f = n.add_state(true);
        n.add_start(s);
        n.add_edge(s, None, x);
        n.add_edge(x, Some(0), f);
        n.add_edge(s, Some(1), x);
        assert!(n.accepts(&[0]));
        assert!(n.accepts(&[1, 0]));
        assert!(!n.accepts(&[1]));
        let d = n.determinize();
        for w in d.alphabet().all_words(4) {
            assert_eq!(d.accepts(&w), n.accepts(&w));
        }
    }

    #[test]
    fn determinize_cap() {
        let sigma = Alphabet::parse("a").unwrap();
        let mut n = Nfa::new(sigma);
        let s = n.add_state(true);
        let t = n.add_state(false);
        n.add_start(s);
        n.add_edge(s, Some(0), t);
        assert!(n.determinize_capped(1).is_err());
        assert_eq!(n.determinize_capped(3).unwrap().num_states(), 3);
    }
}
