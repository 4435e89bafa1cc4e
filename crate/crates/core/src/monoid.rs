//! Finite monoids, the syntactic monoid of a regular language, ideals and
//! the three class predicates (degenerate, rectangular band, aperiodic).

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::automata::{Alphabet, Dfa, Symbol};
use crate::error::{cap_check, Error, Limit, Result};
use crate::exec::Strategy;

/// Index of a monoid element.
pub type Elem = usize;

/// Default cap on the number of monoid elements.
pub const DEFAULT_MONOID_CAP: usize = 10_000;

/// Fixed-capacity bitset over monoid elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElemSet {
    words: Vec<u64>,
    universe: usize,
}

impl ElemSet {
    pub fn new(universe: usize) -> Self {
        ElemSet { words: vec![0; universe.div_ceil(64)], universe }
    }

    pub fn from_iter(universe: usize, items: impl IntoIterator<Item = Elem>) -> Self {
        let mut s = ElemSet::new(universe);
        items.into_iter().for_each(|x| s.insert(x));
        s
    }

    pub fn insert(&mut self, x: Elem) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.universe).filter(|&x| self.contains(x))
    }
}

/// A finite monoid given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    mul: Vec<Elem>,
    identity: Elem,
}

impl FiniteMonoid {
    /// Checks closure, the identity law and associativity (exhaustively).
    pub fn from_table(size: usize, mul: Vec<Elem>, identity: Elem) -> Result<Self> {
        if size == 0 || mul.len() != size * size || identity >= size {
            return Err(Error::Structural("table shape does not match size".into()));
        }
        if mul.iter().any(|&x| x >= size) {
            return Err(Error::Structural("table is not closed".into()));
        }
        let m = FiniteMonoid { size, mul, identity };
        for x in 0..size {
            if m.mul(identity, x) != x || m.mul(x, identity) != x {
                return Err(Error::Structural(format!("identity law fails at {x}")));
            }
        }
        for x in 0..size {
            for y in 0..size {
                let xy = m.mul(x, y);
                for z in 0..size {
                    if m.mul(xy, z) != m.mul(x, m.mul(y, z)) {
                        return Err(Error::Structural(format!("not associative at ({x}, {y}, {z})")));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x * self.size + y]
    }

    pub fn product(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn power(&self, x: Elem, k: usize) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    /// Same elements with multiplication reversed.
    pub fn opposite(&self) -> FiniteMonoid {
        let n = self.size;
        let mul = (0..n * n).map(|i| self.mul(i % n, i / n)).collect();
        FiniteMonoid { size: n, mul, identity: self.identity }
    }

    /// Powers `x^0, x^1, …` cycle as `x^{index} = x^{index + period}` with
    /// both minimal.
    pub fn power_cycle(&self, x: Elem) -> (usize, usize) {
        let mut seen: HashMap<Elem, usize> = HashMap::new();
        let mut cur = self.identity;
        for i in 0.. {
            if let Some(&j) = seen.get(&cur) {
                return (j, i - j);
            }
            seen.insert(cur, i);
            cur = self.mul(cur, x);
        }
        unreachable!()
    }
}

/// Result of the aperiodicity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Aperiodicity {
    Aperiodic,
    /// Least non-aperiodic element with its cycle: `x^index = x^{index+period}`.
    Violator {
        element: Elem,
        period: usize,
        index: usize,
    },
}

impl Aperiodicity {
    pub fn holds(&self) -> bool {
        matches!(self, Aperiodicity::Aperiodic)
    }
}

/// Left, right and two-sided ideals of every element, with ranks.
#[derive(Clone, Debug)]
pub struct IdealProfile {
    pub two_sided: Vec<ElemSet>,
    pub left: Vec<ElemSet>,
    pub right: Vec<ElemSet>,
    pub rank: Vec<usize>,
}

/// Syntactic monoid of a language with its morphism and accepting set.
#[derive(Clone, Debug)]
pub struct SyntacticContext {
    monoid: FiniteMonoid,
    letter_image: Vec<Elem>,
    accept_set: ElemSet,
    representatives: Vec<Vec<Symbol>>,
    source_dfa: Dfa,
    /// `right[m * k + a] = m · φ(a)`
    right: Vec<Elem>,
}

/// Syntactic monoid with the default cap.
pub fn syntactic_context(dfa: &Dfa) -> Result<SyntacticContext> {
    SyntacticContext::build(dfa, DEFAULT_MONOID_CAP, Strategy::default())
}

impl SyntacticContext {
    /// Transition monoid of the minimal automaton. Elements are numbered in
    /// shortlex order of their representatives, identity first.
    pub fn build(dfa: &Dfa, cap: usize, strategy: Strategy) -> Result<Self> {
        let dfa = dfa.minimize();
        let k = dfa.alphabet().len();
        let n = dfa.num_states();
        let id: Vec<u32> = (0..n as u32).collect();
        let mut index: HashMap<Vec<u32>, Elem> = HashMap::from([(id.clone(), 0)]);
        let mut funcs = vec![id];
        let mut reps: Vec<Vec<Symbol>> = vec![Vec::new()];
        let mut parent: Vec<(Elem, Symbol)> = vec![(0, 0)];
        let mut right: Vec<Elem> = Vec::new();
        let mut i = 0;
        while i < funcs.len() {
            for a in 0..k {
                let f: Vec<u32> = funcs[i].iter().map(|&q| dfa.next(q as usize, a) as u32).collect();
                let j = match index.get(&f) {
                    Some(&j) => j,
                    None => {
                        let j = funcs.len();
                        cap_check(Limit::MonoidSize, cap, j + 1)?;
                        index.insert(f.clone(), j);
                        funcs.push(f);
                        let mut w = reps[i].clone();
                        w.push(a);
                        reps.push(w);
                        parent.push((i, a));
                        j
                    }
                };
                right.push(j);
            }
            i += 1;
        }
        let size = funcs.len();
        // x·y follows y's BFS parent chain: x·(y'a) = (x·y')·a
        let rows = strategy.map(size, |x| {
            let mut row = vec![0; size];
            row[0] = x;
            for y in 1..size {
                let (p, a) = parent[y];
                row[y] = right[row[p] * k + a];
            }
            row
        });
        let mul = rows.concat();
        let monoid = FiniteMonoid { size, mul, identity: 0 };
        let letter_image = (0..k).map(|a| right[a]).collect();
        let accept_set =
            ElemSet::from_iter(size, (0..size).filter(|&m| dfa.is_accepting(funcs[m][dfa.start()] as usize)));
        Ok(SyntacticContext { monoid, letter_image, accept_set, representatives: reps, source_dfa: dfa, right })
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn size(&self) -> usize {
        self.monoid.size
    }

    pub fn identity(&self) -> Elem {
        self.monoid.identity
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.monoid.mul(x, y)
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.source_dfa.alphabet()
    }

    /// The minimal DFA the monoid was computed from.
    pub fn dfa(&self) -> &Dfa {
        &self.source_dfa
    }

    pub fn letter(&self, a: Symbol) -> Elem {
        self.letter_image[a]
    }

    pub fn letter_images(&self) -> &[Elem] {
        &self.letter_image
    }

    /// `m · φ(a)`
    #[inline]
    pub fn step(&self, m: Elem, a: Symbol) -> Elem {
        self.right[m * self.letter_image.len() + a]
    }

    pub fn phi(&self, word: &[Symbol]) -> Elem {
        word.iter().fold(self.identity(), |m, &a| self.step(m, a))
    }

    pub fn accept_set(&self) -> &ElemSet {
        &self.accept_set
    }

    pub fn is_accepting(&self, m: Elem) -> bool {
        self.accept_set.contains(m)
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.is_accepting(self.phi(word))
    }

    /// Shortlex-least word mapping to `m`.
    pub fn representative(&self, m: Elem) -> &[Symbol] {
        &self.representatives[m]
    }

    /// Display name: `1` for the identity, otherwise the representative.
    pub fn name(&self, m: Elem) -> String {
        if m == self.identity() {
            "1".to_string()
        } else {
            self.alphabet().render(&self.representatives[m])
        }
    }

    /// Looks an element up by its display name.
    pub fn element_by_name(&self, name: &str) -> Option<Elem> {
        (0..self.size()).find(|&m| self.name(m) == name.trim())
    }

    /// φ(Σ⁺): elements reachable by at least one letter.
    pub fn plus_image(&self) -> ElemSet {
        let k = self.letter_image.len();
        let mut set = ElemSet::from_iter(self.size(), self.letter_image.iter().copied());
        let mut stack: Vec<Elem> = set.iter().collect();
        while let Some(m) = stack.pop() {
            for a in 0..k {
                let t = self.step(m, a);
                if !set.contains(t) {
                    set.insert(t);
                    stack.push(t);
                }
            }
        }
        set
    }

    pub fn ideal_profile(&self) -> IdealProfile {
        let n = self.size();
        let right: Vec<ElemSet> = (0..n).map(|m| ElemSet::from_iter(n, (0..n).map(|x| self.mul(m, x)))).collect();
        let left: Vec<ElemSet> = (0..n).map(|m| ElemSet::from_iter(n, (0..n).map(|x| self.mul(x, m)))).collect();
        let two_sided: Vec<ElemSet> = (0..n)
            .map(|m| {
                let mut s = ElemSet::new(n);
                left[m].iter().for_each(|u| s.union_with(&right[u]));
                s
            })
            .collect();
        let rank = two_sided.iter().map(|s| n - s.len()).collect();
        IdealProfile { two_sided, left, right, rank }
    }

    pub fn is_aperiodic(&self) -> Aperiodicity {
        for x in 0..self.size() {
            let (index, period) = self.monoid.power_cycle(x);
            if period > 1 {
                return Aperiodicity::Violator { element: x, period, index };
            }
        }
        Aperiodicity::Aperiodic
    }

    /// Every element of φ(Σ⁺) is idempotent and `rst = rt` on φ(Σ⁺).
    pub fn is_rectangular_band_image(&self) -> bool {
        let plus: Vec<Elem> = self.plus_image().iter().collect();
        if plus.iter().any(|&r| self.mul(r, r) != r) {
            return false;
        }
        // rst = rt for letters s extends to all of φ(Σ⁺) by induction on |s|
        plus.iter().all(|&r| {
            plus.iter().all(|&t| {
                let rt = self.mul(r, t);
                self.letter_image.iter().all(|&s| self.mul(self.mul(r, s), t) == rt)
            })
        })
    }

    pub fn is_degenerate_image(&self) -> bool {
        self.plus_image().len() == 1
    }

    /// Context `(u, v)` with exactly one of `u·rep(m1)·v`, `u·rep(m2)·v` in
    /// the language. Contexts are representatives, tried by total length.
    pub fn distinguish(&self, m1: Elem, m2: Elem) -> Result<(Vec<Symbol>, Vec<Symbol>)> {
        if m1 == m2 {
            return Err(Error::Precondition("distinguish needs two distinct elements".into()));
        }
        let n = self.size();
        let mut pairs: Vec<(Elem, Elem)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
        pairs.sort_by_key(|&(x, y)| (self.representatives[x].len() + self.representatives[y].len(), x, y));
        pairs
            .into_iter()
            .find(|&(x, y)| {
                let a = self.mul(self.mul(x, m1), y);
                let b = self.mul(self.mul(x, m2), y);
                self.is_accepting(a) != self.is_accepting(b)
            })
            .map(|(x, y)| (self.representatives[x].clone(), self.representatives[y].clone()))
            .ok_or_else(|| Error::Structural("elements are not separated by any context".into()))
    }

    /// Multiplication table with representative names, rows and columns in
    /// element order.
    pub fn multiplication_table(&self) -> String {
        let names: Vec<String> = (0..self.size()).map(|m| self.name(m)).collect();
        let w = names.iter().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        write!(out, "{:w$} |", "·").unwrap();
        names.iter().for_each(|s| write!(out, " {s:w$}").unwrap());
        out.push('\n');
        for x in 0..self.size() {
            write!(out, "{:w$} |", names[x]).unwrap();
            for y in 0..self.size() {
                write!(out, " {:w$}", names[self.mul(x, y)]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Renders a set of elements as `{a, b}` in element order.
    pub fn render_set(&self, set: &ElemSet) -> String {
        let names: Vec<String> = set.iter().map(|m| self.name(m)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// One line per element: `MmM`, `Mm`, `mM`, rank.
    pub fn render_ideals(&self, profile: &IdealProfile) -> String {
        let mut out = String::new();
        for m in 0..self.size() {
            writeln!(
                out,
                "{}: MmM = {}; Mm = {}; mM = {}; rank = {}",
                self.name(m),
                self.render_set(&profile.two_sided[m]),
                self.render_set(&profile.left[m]),
                self.render_set(&profile.right[m]),
                profile.rank[m]
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{parse_regex, Alphabet};

    fn ctx(alphabet: &str, regex: &str) -> SyntacticContext {
        let sigma = Alphabet::parse(alphabet).unwrap();
        syntactic_context(&parse_regex(regex, &sigma).unwrap().to_dfa()).unwrap()
    }

    #[test]
    fn universal_language_is_trivial_monoid() {
        let c = ctx("0 1", "~%0");
        assert_eq!(c.size(), 1);
        assert!(c.is_accepting(0));
        assert!(c.is_aperiodic().holds());
        assert!(c.is_degenerate_image());
    }

    #[test]
    fn parity_is_a_group() {
        let c = ctx("0 1", "(0*10*1)*0*");
        assert_eq!(c.size(), 2);
        let g = c.letter(1);
        assert_eq!(c.mul(g, g), c.identity());
        assert_eq!(c.is_aperiodic(), Aperiodicity::Violator { element: g, period: 2, index: 0 });
        assert_eq!(c.distinguish(g, 0).unwrap(), (vec![], vec![]));
        assert!(c.distinguish(g, g).is_err());
    }

    #[test]
    fn band_and_degenerate_predicates() {
        assert!(ctx("a b", "a ~%0 b").is_rectangular_band_image());
        assert!(!ctx("0 1", "~%0 1 ~%0").is_rectangular_band_image());
        assert!(ctx("0 1", "~%e").is_degenerate_image());
        assert!(ctx("0 1", "%e").is_degenerate_image());
        assert!(!ctx("0 1", "~%0 1 ~%0").is_degenerate_image());
    }

    #[test]
    fn from_table_rejects_non_associative() {
        // x·y = y except x·x = identity: fails associativity
        let bad = FiniteMonoid::from_table(3, vec![0, 1, 2, 1, 0, 2, 2, 2, 0], 0);
        assert!(bad.is_err());
        let z2 = FiniteMonoid::from_table(2, vec![0, 1, 1, 0], 0).unwrap();
        assert_eq!(z2.power_cycle(1), (0, 2));
        assert_eq!(z2.opposite(), z2);
    }

    #[test]
    fn cap_is_enforced() {
        let sigma = Alphabet::parse("0 1").unwrap();
        let d = parse_regex("(0*10*1)*0*", &sigma).unwrap().to_dfa();
        assert!(SyntacticContext::build(&d, 1, Strategy::Sequential).is_err());
    }

    #[test]
    fn elem_set_ops() {
        let mut a = ElemSet::from_iter(70, [1, 65]);
        let b = ElemSet::from_iter(70, [1, 2, 65]);
        assert!(a.is_subset(&b) && !b.is_subset(&a));
        a.union_with(&b);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 2, 65]);
        assert_eq!(a.len(), 3);
    }
}
