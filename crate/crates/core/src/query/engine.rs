//! The recursive star-free membership algorithm.
//!
//! `Main(x, m)` decides `φ(x) = m`. For `m ≠ 1` it combines a right-ideal
//! test (prefix checks over E), a left-ideal test (the same checks on the
//! reversed input in the opposite monoid), an infix search over G and a
//! search for letters of C. Running the backward orientation on `M^op`
//! keeps one implementation of the prefix check.

use std::collections::{HashMap, HashSet};
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::{Arc, Mutex};

use super::{grover_iterations, search_charge, CostModel, PredicateCharge, QueryLedger};
use crate::automata::Symbol;
use crate::decompose::decompose_with;
use crate::error::{Error, Result};
use crate::monoid::{Elem, ElemSet, SyntacticContext};

const FWD: usize = 0;
const BWD: usize = 1;

/// Precomputed decomposition data for every element, in both orientations.
#[derive(Clone, Debug)]
pub struct StarFreeEngine {
    ctx: SyntacticContext,
    rank: Vec<usize>,
    /// `e[o][m]`: pairs `(r, a)` for the prefix test in orientation `o`.
    e: [Vec<Vec<(Elem, Symbol)>>; 2],
    g: [Vec<Vec<(Symbol, Elem, Symbol)>>; 2],
    /// `h[o][r]`: elements `s` whose right ideal (in orientation `o`) holds `r`.
    h: [Vec<Vec<Elem>>; 2],
    hset: [Vec<ElemSet>; 2],
    splits: [Vec<Vec<(Elem, Elem)>>; 2],
    /// Marker index of the C-letters of each element.
    c_marker: Vec<Option<usize>>,
    /// `markers[i][a]`: whether letter `a` is marked. Marker 0 holds the
    /// letters with non-identity image.
    markers: Vec<Vec<bool>>,
    charge: PredicateCharge,
    /// Cost bounds shared by all runs.
    bound_cache: Arc<Mutex<HashMap<BoundKey, u64>>>,
}

impl StarFreeEngine {
    pub fn new(ctx: &SyntacticContext) -> Result<Self> {
        if !ctx.is_aperiodic().holds() {
            return Err(Error::Precondition("the algorithm needs an aperiodic monoid".into()));
        }
        let n = ctx.size();
        let k = ctx.alphabet().len();
        let ideals = ctx.ideal_profile();
        let id = ctx.identity();
        let mut e: [Vec<Vec<(Elem, Symbol)>>; 2] = [vec![Vec::new(); n], vec![Vec::new(); n]];
        let mut g: [Vec<Vec<(Symbol, Elem, Symbol)>>; 2] = [vec![Vec::new(); n], vec![Vec::new(); n]];
        let mut markers = vec![(0..k).map(|a| ctx.letter(a) != id).collect::<Vec<bool>>()];
        let mut c_marker = vec![None; n];
        for m in (0..n).filter(|&m| m != id) {
            let d = decompose_with(ctx, &ideals, m)?;
            e[FWD][m] = d.e.clone();
            e[BWD][m] = d.f.iter().map(|&(a, r)| (r, a)).collect();
            g[FWD][m] = d.g.clone();
            g[BWD][m] = d.g.iter().map(|&(a, r, b)| (b, r, a)).collect();
            if !d.c.is_empty() {
                let mask: Vec<bool> = (0..k).map(|a| d.c.contains(&a)).collect();
                let idx = markers.iter().position(|x| *x == mask).unwrap_or_else(|| {
                    markers.push(mask);
                    markers.len() - 1
                });
                c_marker[m] = Some(idx);
            }
        }
        let h: [Vec<Vec<Elem>>; 2] = [
            (0..n).map(|r| (0..n).filter(|&s| ideals.right[s].contains(r)).collect()).collect(),
            (0..n).map(|r| (0..n).filter(|&s| ideals.left[s].contains(r)).collect()).collect(),
        ];
        let hset = [0, 1].map(|o| h[o].iter().map(|v| ElemSet::from_iter(n, v.iter().copied())).collect());
        let mut splits: [Vec<Vec<(Elem, Elem)>>; 2] = [vec![Vec::new(); n], vec![Vec::new(); n]];
        for p in 0..n {
            for q in 0..n {
                splits[FWD][ctx.mul(p, q)].push((p, q));
                splits[BWD][ctx.mul(q, p)].push((p, q));
            }
        }
        let engine = StarFreeEngine {
            ctx: ctx.clone(),
            rank: ideals.rank.clone(),
            e,
            g,
            h,
            hset,
            splits,
            c_marker,
            markers,
            charge: PredicateCharge::default(),
            bound_cache: Arc::default(),
        };
        engine.validate(&ideals.right, &ideals.left)?;
        Ok(engine)
    }

    fn mul(&self, o: usize, x: Elem, y: Elem) -> Elem {
        if o == FWD {
            self.ctx.mul(x, y)
        } else {
            self.ctx.mul(y, x)
        }
    }

    /// Whether the prefix test for `(r, a)` is applicable in orientation
    /// `o`: the right ideal must strictly shrink when `a` is appended.
    fn descends(&self, o: usize, ideal: [&[ElemSet]; 2], r: Elem, a: Symbol) -> bool {
        let ra = self.mul(o, r, self.ctx.letter(a));
        let ideal = ideal[o];
        ideal[ra].is_subset(&ideal[r]) && ideal[ra] != ideal[r]
    }

    fn validate(&self, right: &[ElemSet], left: &[ElemSet]) -> Result<()> {
        let ideal = [right, left];
        for o in [FWD, BWD] {
            for m in 0..self.ctx.size() {
                for &(r, a) in &self.e[o][m] {
                    if !self.descends(o, ideal, r, a) || self.rank[r] >= self.rank[m] {
                        return Err(Error::Structural(format!(
                            "bad prefix pair ({}, {a}) for {}",
                            self.ctx.name(r),
                            self.ctx.name(m)
                        )));
                    }
                }
                for &(a, r, b) in &self.g[o][m] {
                    if self.rank[r] >= self.rank[m] {
                        return Err(Error::Structural("infix triple does not descend in rank".into()));
                    }
                    for &(p, q) in &self.splits[o][r] {
                        if !self.descends(o, ideal, q, b) || !self.descends(1 - o, ideal, p, a) {
                            return Err(Error::Structural("split pair violates the prefix-check precondition".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn context(&self) -> &SyntacticContext {
        &self.ctx
    }

    pub fn with_charge(mut self, charge: PredicateCharge) -> Self {
        self.charge = charge;
        self
    }

    pub fn charge(&self) -> PredicateCharge {
        self.charge
    }

    /// Input-independent bound on the `IdealGrover` cost of deciding an
    /// input of length `n`.
    pub fn cost_bound(&self, n: usize) -> Result<u64> {
        let mut bounds = Bounds::new(self);
        let cap = cap_exponent(n);
        let mut total = 0u64;
        for m in self.ctx.accept_set().iter() {
            total = total.saturating_add(bounds.main(FWD, m, cap)?);
        }
        Ok(total)
    }

    /// Membership of `x` in the language: OR of `Main(x, m)` over accepting `m`.
    pub fn decide(&self, x: &[Symbol], model: CostModel) -> Result<(bool, QueryLedger)> {
        let mut run = Run::new(self, x, model);
        let whole = View { o: FWD, lo: 0, hi: x.len() };
        let mut accepted = false;
        let mut cost = 0u64;
        for m in self.ctx.accept_set().iter() {
            let (hit, c) = run.main(whole, m)?;
            cost = cost.saturating_add(c);
            if hit {
                accepted = true;
                if model == CostModel::Classical {
                    break;
                }
            }
        }
        Ok((accepted, run.ledger(cost)))
    }

    /// `Main(x, m)`: whether `φ(x) = m`.
    pub fn main_check(&self, x: &[Symbol], m: Elem, model: CostModel) -> Result<(bool, QueryLedger)> {
        let mut run = Run::new(self, x, model);
        let (hit, cost) = run.main(View { o: FWD, lo: 0, hi: x.len() }, m)?;
        Ok((hit, run.ledger(cost)))
    }

    /// Whether `x ∈ φ⁻¹(r) a Σ*`. Requires `rM ⊋ rφ(a)M`.
    pub fn prefix_check(&self, x: &[Symbol], r: Elem, a: Symbol, model: CostModel) -> Result<(bool, QueryLedger)> {
        let ideals = self.ctx.ideal_profile();
        if !self.descends(FWD, [&ideals.right, &ideals.left], r, a) {
            return Err(Error::Structural(format!(
                "prefix check needs rM ⊋ rφ(a)M for r = {}, a = {}",
                self.ctx.name(r),
                self.ctx.alphabet().name(a)
            )));
        }
        let mut run = Run::new(self, x, model);
        let (hit, cost) = run.prefix(View { o: FWD, lo: 0, hi: x.len() }, r, a)?;
        Ok((hit, run.ledger(cost)))
    }

    /// Whether `x ∈ Σ* a φ⁻¹(r) b Σ*`, by doubling-window search over the
    /// factorizations of `r`.
    pub fn infix_search(
        &self,
        x: &[Symbol],
        a: Symbol,
        r: Elem,
        b: Symbol,
        model: CostModel,
    ) -> Result<(bool, QueryLedger)> {
        let ideals = self.ctx.ideal_profile();
        let ideal = [&ideals.right[..], &ideals.left[..]];
        for &(p, q) in &self.splits[FWD][r] {
            if !self.descends(FWD, ideal, q, b) || !self.descends(BWD, ideal, p, a) {
                return Err(Error::Structural("infix pattern fails the prefix-check precondition".into()));
            }
        }
        let mut run = Run::new(self, x, model);
        let (hit, cost) = run.infix(View { o: FWD, lo: 0, hi: x.len() }, a, r, b)?;
        Ok((hit, run.ledger(cost)))
    }
}

/// A window `[lo, hi)` of the input read forwards (`o = 0`) or backwards.
#[derive(Clone, Copy, Debug)]
struct View {
    o: usize,
    lo: usize,
    hi: usize,
}

impl View {
    fn len(self) -> usize {
        self.hi - self.lo
    }

    /// Absolute position of view index `i`.
    fn abs(self, i: usize) -> usize {
        assert!(i < self.len(), "read outside the window");
        if self.o == FWD {
            self.lo + i
        } else {
            self.hi - 1 - i
        }
    }

    /// View indices `[i, j)` as a view in the same orientation.
    fn sub(self, i: usize, j: usize) -> View {
        assert!(i <= j && j <= self.len(), "sub-window outside the window");
        if self.o == FWD {
            View { o: FWD, lo: self.lo + i, hi: self.lo + j }
        } else {
            View { o: BWD, lo: self.hi - j, hi: self.hi - i }
        }
    }

    fn reversed(self) -> View {
        View { o: 1 - self.o, ..self }
    }

    fn key(self, elem: Elem, extra: usize) -> u128 {
        self.o as u128 | (self.lo as u128) << 1 | (self.hi as u128) << 33 | (elem as u128) << 65 | (extra as u128) << 97
    }
}

#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u128(&mut self, v: u128) {
        let x = (v as u64) ^ ((v >> 64) as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let x = (x ^ (x >> 31)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        self.0 = x ^ (x >> 29);
    }
}

type Memo = HashMap<u128, (bool, u64), BuildHasherDefault<KeyHasher>>;

/// Positions read so far; `next` skips painted runs.
struct Painter {
    next: Vec<u32>,
    painted: u64,
}

impl Painter {
    fn new(n: usize) -> Self {
        Painter { next: (0..=n as u32).collect(), painted: 0 }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.next[i] as usize != i {
            let up = self.next[self.next[i] as usize];
            self.next[i] = up;
            i = up as usize;
        }
        i
    }

    fn paint(&mut self, lo: usize, hi: usize) {
        let mut i = self.find(lo);
        while i < hi {
            self.painted += 1;
            self.next[i] = i as u32 + 1;
            i = self.find(i + 1);
        }
    }
}

/// Per-input index of marked letters.
struct MarkIndex {
    count: Vec<u32>,
    /// First marked position `≥ i`, or `n`.
    next: Vec<u32>,
    /// One past the last marked position `< i`, or 0.
    prev: Vec<u32>,
}

impl MarkIndex {
    fn new(x: &[Symbol], marked: &[bool]) -> Self {
        let n = x.len();
        let mut count = vec![0u32; n + 1];
        let mut prev = vec![0u32; n + 1];
        for i in 0..n {
            count[i + 1] = count[i] + marked[x[i]] as u32;
            prev[i + 1] = if marked[x[i]] { i as u32 + 1 } else { prev[i] };
        }
        let mut next = vec![n as u32; n + 1];
        for i in (0..n).rev() {
            next[i] = if marked[x[i]] { i as u32 } else { next[i + 1] };
        }
        MarkIndex { count, next, prev }
    }
}

/// Least `j` with `2^j ≥ n`.
fn cap_exponent(n: usize) -> u32 {
    n.max(1).next_power_of_two().trailing_zeros()
}

/// Worst-case `IdealGrover` costs over all windows of length at most `2^j`,
/// by recursion on the decomposition. Same-cap recursion follows strictly
/// ascending ideals, so a revisit means the data is inconsistent.
type BoundKey = (u8, usize, usize, usize, usize, u32);

struct Bounds<'a> {
    eng: &'a StarFreeEngine,
    active: HashSet<BoundKey>,
}

impl<'a> Bounds<'a> {
    fn new(eng: &'a StarFreeEngine) -> Self {
        Bounds { eng, active: HashSet::new() }
    }

    fn cached(&mut self, key: BoundKey, f: impl FnOnce(&mut Self) -> Result<u64>) -> Result<u64> {
        if let Some(&v) = self.eng.bound_cache.lock().expect("bound cache poisoned").get(&key) {
            return Ok(v);
        }
        if !self.active.insert(key) {
            return Err(Error::Structural("cost bound recursion does not terminate".into()));
        }
        let v = f(self)?;
        self.active.remove(&key);
        self.eng.bound_cache.lock().expect("bound cache poisoned").insert(key, v);
        Ok(v)
    }

    fn main(&mut self, o: usize, m: Elem, j: u32) -> Result<u64> {
        let eng = self.eng;
        let len = 1u64 << j;
        if m == eng.ctx.identity() {
            return Ok(grover_iterations(len, 1));
        }
        self.cached((0, o, m, 0, 0, j), |b| {
            let mut total = 0u64;
            for &(r, a) in &eng.e[1 - o][m] {
                total = total.saturating_add(b.prefix(1 - o, r, a, j)?);
            }
            for &(r, a) in &eng.e[o][m] {
                total = total.saturating_add(b.prefix(o, r, a, j)?);
            }
            for &(a, r, c) in &eng.g[o][m] {
                total = total.saturating_add(b.infix(o, a, r, c, j)?);
            }
            if eng.c_marker[m].is_some() {
                total = total.saturating_add(grover_iterations(len, 1));
            }
            Ok(total)
        })
    }

    /// At most `j` probes of the binary search, one read, one final test.
    fn prefix(&mut self, o: usize, r: Elem, a: Symbol, j: u32) -> Result<u64> {
        let eng = self.eng;
        self.cached((1, o, r, a, 0, j), |b| {
            let mut probe = 0u64;
            for &s in &eng.h[o][r] {
                probe = probe.saturating_add(b.main(o, s, j)?);
            }
            Ok(probe.saturating_mul(j as u64).saturating_add(1).saturating_add(b.main(o, r, j)?))
        })
    }

    /// Every level as a failed search under its promise, plus the surcharge
    /// of the most expensive level succeeding with a single marked cut.
    fn infix(&mut self, o: usize, a: Symbol, r: Elem, c: Symbol, j: u32) -> Result<u64> {
        if j == 0 {
            return Ok(0);
        }
        self.cached((2, o, a, r, c, j), |b| {
            let cuts = (1u64 << j) - 1;
            let mut total = 0u64;
            let mut surcharge = 0u64;
            for k in 1..=j {
                let ell = 1u64 << (k - 1);
                let pred = b.cut(o, a, r, c, k)?;
                let promised = search_charge(cuts, 0, ell, pred);
                total = total.saturating_add(promised);
                surcharge = surcharge.max(search_charge(cuts, 1, 1, pred).saturating_sub(promised));
            }
            Ok(total.saturating_add(surcharge))
        })
    }

    /// One cut with both windows of length at most `2^k`.
    fn cut(&mut self, o: usize, a: Symbol, r: Elem, c: Symbol, k: u32) -> Result<u64> {
        let eng = self.eng;
        self.cached((3, o, a, r, c, k), |b| {
            let mut total = 0u64;
            for &(p, q) in &eng.splits[o][r] {
                total = total.saturating_add(b.prefix(1 - o, p, a, k)?);
                total = total.saturating_add(b.prefix(o, q, c, k)?);
            }
            Ok(total)
        })
    }
}

/// Uncharged bookkeeping: `φ` of any factor in constant time from a
/// disjoint sparse table, and per-boundary answers of prefix tests.
struct Oracle {
    n: usize,
    x: Vec<Elem>,
    table: Vec<Vec<u32>>,
    ids: HashMap<(usize, Elem, Symbol), usize>,
    keys: Vec<(usize, Elem, Symbol)>,
    /// For test `ids[(dir, r, a)]` and boundary `c`: the length of the
    /// factor read from `c` in direction `dir` that passes the prefix test
    /// for `(r, a)`, `NONE`, or `UNSET` before first use.
    reach: Vec<Vec<u32>>,
}

const UNSET: u32 = u32::MAX;
const NONE: u32 = u32::MAX - 1;

impl Oracle {
    fn new(eng: &StarFreeEngine, x: &[Symbol]) -> Self {
        let ctx = &eng.ctx;
        let n = x.len();
        let size = n.max(2).next_power_of_two();
        let images: Vec<Elem> = (0..size).map(|i| if i < n { ctx.letter(x[i]) } else { ctx.identity() }).collect();
        let mut table = vec![Vec::new()];
        let mut h = 1;
        while (1usize << h) <= size {
            let half = 1usize << (h - 1);
            let mut row = vec![0u32; size];
            for start in (0..size).step_by(2 * half) {
                let mid = start + half;
                let mut acc = ctx.identity();
                for i in (start..mid).rev() {
                    acc = ctx.mul(images[i], acc);
                    row[i] = acc as u32;
                }
                let mut acc = ctx.identity();
                for i in mid..start + 2 * half {
                    acc = ctx.mul(acc, images[i]);
                    row[i] = acc as u32;
                }
            }
            table.push(row);
            h += 1;
        }
        Oracle { n, x: images, table, ids: HashMap::new(), keys: Vec::new(), reach: Vec::new() }
    }

    /// `φ(x[lo..hi])`.
    fn product(&self, ctx: &SyntacticContext, lo: usize, hi: usize) -> Elem {
        match hi - lo {
            0 => ctx.identity(),
            1 => self.x[lo],
            _ => {
                let h = (usize::BITS - (lo ^ (hi - 1)).leading_zeros()) as usize;
                ctx.mul(self.table[h][lo] as Elem, self.table[h][hi - 1] as Elem)
            }
        }
    }

    fn test_id(&mut self, dir: usize, r: Elem, a: Symbol) -> usize {
        let next = self.keys.len();
        let id = *self.ids.entry((dir, r, a)).or_insert(next);
        if id == next {
            self.keys.push((dir, r, a));
            self.reach.push(vec![UNSET; self.n + 1]);
        }
        id
    }

    fn reach(&mut self, eng: &StarFreeEngine, raw: &[Symbol], id: usize, c: usize) -> u32 {
        let cached = self.reach[id][c];
        if cached != UNSET {
            return cached;
        }
        let (dir, r, a) = self.keys[id];
        let ctx = &eng.ctx;
        let ideal = &eng.hset[dir][r];
        let factor = |i: usize| if dir == FWD { (c, c + i) } else { (c - i, c) };
        let room = if dir == FWD { self.n - c } else { c };
        let out = if room == 0 {
            NONE
        } else {
            let (mut lo, mut hi) = (0, room - 1);
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                let (s, t) = factor(mid);
                if ideal.contains(self.product(ctx, s, t)) {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            let (s, t) = factor(lo);
            let letter = if dir == FWD { raw[c + lo] } else { raw[c - 1 - lo] };
            if letter == a && self.product(ctx, s, t) == r {
                lo as u32
            } else {
                NONE
            }
        };
        self.reach[id][c] = out;
        out
    }
}

struct Run<'a> {
    eng: &'a StarFreeEngine,
    x: &'a [Symbol],
    grover: bool,
    main_memo: Memo,
    prefix_memo: Memo,
    painter: Painter,
    marks: Vec<MarkIndex>,
    depth: usize,
    oracle: Option<Oracle>,
    bounds: Bounds<'a>,
}

impl<'a> Run<'a> {
    fn new(eng: &'a StarFreeEngine, x: &'a [Symbol], model: CostModel) -> Self {
        Run {
            eng,
            x,
            grover: model == CostModel::IdealGrover,
            main_memo: Memo::default(),
            prefix_memo: Memo::default(),
            painter: Painter::new(x.len()),
            marks: eng.markers.iter().map(|m| MarkIndex::new(x, m)).collect(),
            depth: 0,
            oracle: None,
            bounds: Bounds::new(eng),
        }
    }

    /// Under `Classical` the modeled cost is the number of distinct reads.
    fn ledger(&self, cost: u64) -> QueryLedger {
        let reads = self.painter.painted;
        QueryLedger { classical_reads: reads, modeled_cost: if self.grover { cost } else { reads } }
    }

    fn read(&mut self, v: View, i: usize) -> (Symbol, u64) {
        let p = v.abs(i);
        self.painter.paint(p, p + 1);
        (self.x[p], self.grover as u64)
    }

    /// Search for a marked letter in the window.
    fn leaf(&mut self, v: View, marker: usize) -> (bool, u64) {
        let (lo, hi) = (v.lo, v.hi);
        if lo == hi {
            return (false, 0);
        }
        let idx = &self.marks[marker];
        if self.grover {
            let t = (idx.count[hi] - idx.count[lo]) as u64;
            self.painter.paint(lo, hi);
            return (t > 0, search_charge(v.len() as u64, t, 1, 1));
        }
        // classical scan from the window's start in reading direction
        if v.o == FWD {
            let f = idx.next[lo] as usize;
            self.painter.paint(lo, if f < hi { f + 1 } else { hi });
            (f < hi, 0)
        } else {
            let p = idx.prev[hi] as usize;
            let found = p > lo;
            self.painter.paint(if found { p - 1 } else { lo }, hi);
            (found, 0)
        }
    }

    fn main(&mut self, v: View, m: Elem) -> Result<(bool, u64)> {
        let key = v.key(m, 0);
        if let Some(&hit) = self.main_memo.get(&key) {
            return Ok(hit);
        }
        self.depth += 1;
        if self.depth > self.eng.ctx.size() + 1 {
            return Err(Error::Structural("recursion deeper than the number of ranks".into()));
        }
        let out = if m == self.eng.ctx.identity() {
            let (found, c) = self.leaf(v, 0);
            (!found, c)
        } else {
            self.main_composite(v, m)?
        };
        self.depth -= 1;
        self.main_memo.insert(key, out);
        Ok(out)
    }

    fn main_composite(&mut self, v: View, m: Elem) -> Result<(bool, u64)> {
        let eng = self.eng;
        let o = v.o;
        let mut cost = 0u64;
        let left = self.any_prefix(v.reversed(), &eng.e[1 - o][m], &mut cost)?;
        if !self.grover && !left {
            return Ok((false, 0));
        }
        let right = self.any_prefix(v, &eng.e[o][m], &mut cost)?;
        if !self.grover && !right {
            return Ok((false, 0));
        }
        let mut ideal = false;
        for &(a, r, b) in &eng.g[o][m] {
            let (hit, c) = self.infix(v, a, r, b)?;
            cost = cost.saturating_add(c);
            ideal |= hit;
            if ideal && !self.grover {
                return Ok((false, 0));
            }
        }
        let forbidden = match eng.c_marker[m] {
            Some(mk) => {
                let (found, c) = self.leaf(v, mk);
                cost = cost.saturating_add(c);
                found
            }
            None => false,
        };
        Ok((left && right && !ideal && !forbidden, cost))
    }

    fn any_prefix(&mut self, v: View, pairs: &[(Elem, Symbol)], cost: &mut u64) -> Result<bool> {
        let mut any = false;
        for &(r, a) in pairs {
            let (hit, c) = self.prefix(v, r, a)?;
            *cost = cost.saturating_add(c);
            any |= hit;
            if any && !self.grover {
                break;
            }
        }
        Ok(any)
    }

    /// Whether the view is in `φ⁻¹(r) a Σ*`: find the longest prefix whose
    /// right ideal still holds `r`, then test it and the next letter.
    fn prefix(&mut self, v: View, r: Elem, a: Symbol) -> Result<(bool, u64)> {
        let n = v.len();
        if n == 0 {
            return Ok((false, 0));
        }
        let key = v.key(r, a + 1);
        if let Some(&hit) = self.prefix_memo.get(&key) {
            return Ok(hit);
        }
        let eng = self.eng;
        let mut cost = 0u64;
        let (mut lo, mut hi) = (0, n - 1);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            let probe = v.sub(0, mid);
            let mut in_k = false;
            for &s in &eng.h[v.o][r] {
                let (hit, c) = self.main(probe, s)?;
                cost = cost.saturating_add(c);
                in_k |= hit;
                if in_k && !self.grover {
                    break;
                }
            }
            if in_k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let (sym, c) = self.read(v, lo);
        cost = cost.saturating_add(c);
        let mut hit = sym == a;
        if hit || self.grover {
            let (is_r, c) = self.main(v.sub(0, lo), r)?;
            cost = cost.saturating_add(c);
            hit &= is_r;
        }
        let out = (hit, if self.grover { cost } else { 0 });
        self.prefix_memo.insert(key, out);
        Ok(out)
    }

    /// Doubling-window search for a factor `a u b` with `φ(u) = r`.
    fn infix(&mut self, v: View, a: Symbol, r: Elem, b: Symbol) -> Result<(bool, u64)> {
        let w = v.len();
        if w < 2 {
            return Ok((false, 0));
        }
        if !self.grover {
            let mut ell = 1usize;
            loop {
                for cut in 1..w {
                    if self.cut(v, cut, ell, a, r, b)?.0 {
                        return Ok((true, 0));
                    }
                }
                if 2 * ell >= w {
                    return Ok((false, 0));
                }
                ell *= 2;
            }
        }
        let observed = self.eng.charge == PredicateCharge::Observed;
        if !observed {
            self.painter.paint(v.lo, v.hi);
        }
        let cuts = (w - 1) as u64;
        let need = self.window_needs(v, a, r, b);
        // marked[k]: cuts marked once windows reach length 2^k
        let mut marked = vec![0u64; 34];
        for &k in &need {
            if k != u32::MAX {
                marked[k as usize] += 1;
            }
        }
        let mut total = 0u64;
        let (mut ell, mut k) = (1usize, 1u32);
        let mut t = marked[0];
        loop {
            t += marked[k as usize];
            let bound = self.bounds.cut(v.o, a, r, b, k)?;
            let pred = if observed {
                let mut worst = 0u64;
                for cut in 1..w {
                    let (hit, c) = self.cut(v, cut, ell, a, r, b)?;
                    if hit != (need[cut - 1] <= k) {
                        return Err(Error::Structural(format!("infix verdict at cut {cut} disagrees with the oracle")));
                    }
                    if c > bound {
                        return Err(Error::Structural(format!("cut cost {c} exceeds its bound {bound}")));
                    }
                    worst = worst.max(c);
                }
                worst
            } else {
                bound
            };
            // with no factor of length about ell present, the search
            // runs against a promise of ell marked cuts
            total = total.saturating_add(search_charge(cuts, t, ell as u64, pred));
            if t > 0 {
                return Ok((true, total));
            }
            if 2 * ell >= w {
                return Ok((false, total));
            }
            ell *= 2;
            k += 1;
        }
    }

    /// For every cut of the view, the least `k` such that the cut is
    /// marked once both windows may reach length `2^k`, or `u32::MAX`.
    fn window_needs(&mut self, v: View, a: Symbol, r: Elem, b: Symbol) -> Vec<u32> {
        let eng = self.eng;
        let x = self.x;
        let oracle = self.oracle.get_or_insert_with(|| Oracle::new(eng, x));
        let tests: Vec<(usize, usize)> = eng.splits[v.o][r]
            .iter()
            .map(|&(p, q)| (oracle.test_id(1 - v.o, p, a), oracle.test_id(v.o, q, b)))
            .collect();
        let w = v.len();
        (1..w)
            .map(|cut| {
                let c = if v.o == FWD { v.lo + cut } else { v.hi - cut };
                let mut best = u32::MAX;
                for &(left, right) in &tests {
                    let l = oracle.reach(eng, x, left, c);
                    if l >= cut as u32 {
                        continue;
                    }
                    let rr = oracle.reach(eng, x, right, c);
                    if rr >= (w - cut) as u32 {
                        continue;
                    }
                    // both factor lengths must fit: l < 2^k and rr < 2^k
                    let k = u32::BITS - l.max(rr).leading_zeros();
                    best = best.min(k);
                }
                best
            })
            .collect()
    }

    /// Predicate at one cut: some split `pq = r` with `a·(p-part)` ending
    /// the left window and `(q-part)·b` starting the right window.
    fn cut(&mut self, v: View, cut: usize, ell: usize, a: Symbol, r: Elem, b: Symbol) -> Result<(bool, u64)> {
        let eng = self.eng;
        let w = v.len();
        let left = v.sub(cut.saturating_sub(2 * ell), cut).reversed();
        let right = v.sub(cut, (cut + 2 * ell).min(w));
        let mut cost = 0u64;
        let mut any = false;
        for &(p, q) in &eng.splits[v.o][r] {
            let (s, c1) = self.prefix(left, p, a)?;
            cost = cost.saturating_add(c1);
            if !s && !self.grover {
                continue;
            }
            let (t, c2) = self.prefix(right, q, b)?;
            cost = cost.saturating_add(c2);
            any |= s && t;
            if any && !self.grover {
                break;
            }
        }
        Ok((any, cost))
    }
}
