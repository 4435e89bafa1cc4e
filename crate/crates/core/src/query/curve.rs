use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CostModel, Decider};
use crate::automata::{Dfa, Symbol};
use crate::error::{Error, Result};
use crate::exec::Strategy;

/// One row of a cost curve: per-length maxima over the samples of one
/// `IdealGrover` run each. `classical` counts distinct positions read by
/// that run, bookkeeping included.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveRow {
    pub n: usize,
    pub classical: u64,
    pub modeled: u64,
}

/// Kinds of sampled inputs, used in rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    Uniform,
    Member,
    /// A sparse member with one non-identity letter substituted.
    NearMember,
    /// A member built from letters acting as the identity except at a few
    /// random positions and where acceptance forces otherwise.
    SparseMember,
}

const KINDS: [SampleKind; 4] =
    [SampleKind::Uniform, SampleKind::Member, SampleKind::NearMember, SampleKind::SparseMember];

/// `live[r][q]`: some word of length `r` leads from `q` to acceptance.
fn completion_table(dfa: &Dfa, n: usize) -> Vec<Vec<bool>> {
    let mut table = vec![(0..dfa.num_states()).map(|q| dfa.is_accepting(q)).collect::<Vec<_>>()];
    for r in 1..=n {
        let prev = &table[r - 1];
        let row = (0..dfa.num_states()).map(|q| (0..dfa.alphabet().len()).any(|a| prev[dfa.next(q, a)])).collect();
        table.push(row);
    }
    table
}

fn identity_letters(dfa: &Dfa) -> Vec<bool> {
    (0..dfa.alphabet().len()).map(|a| (0..dfa.num_states()).all(|q| dfa.next(q, a) == q)).collect()
}

/// Expected number of free choices in a sparse member.
const SPARSE_FREE: f64 = 4.0;

fn sample(
    dfa: &Dfa,
    table: &[Vec<bool>],
    neutral: &[bool],
    n: usize,
    kind: SampleKind,
    rng: &mut ChaCha8Rng,
) -> Vec<Symbol> {
    let k = dfa.alphabet().len();
    let uniform = |rng: &mut ChaCha8Rng| (0..n).map(|_| rng.gen_range(0..k)).collect::<Vec<_>>();
    if kind == SampleKind::Uniform || !table[n][dfa.start()] {
        return uniform(rng);
    }
    let sparse = kind != SampleKind::Member;
    let free = (SPARSE_FREE / n.max(1) as f64).min(1.0);
    let mut q = dfa.start();
    let mut word = Vec::with_capacity(n);
    for i in 0..n {
        let rest = n - i - 1;
        let ok: Vec<Symbol> = (0..k).filter(|&a| table[rest][dfa.next(q, a)]).collect();
        let quiet: Vec<Symbol> = ok.iter().copied().filter(|&a| neutral[a]).collect();
        let a = if sparse && !quiet.is_empty() && !rng.gen_bool(free) {
            quiet[rng.gen_range(0..quiet.len())]
        } else {
            ok[rng.gen_range(0..ok.len())]
        };
        word.push(a);
        q = dfa.next(q, a);
    }
    if kind == SampleKind::NearMember && n > 0 && k > 1 {
        let loud: Vec<usize> = (0..n).filter(|&i| !neutral[word[i]]).collect();
        let i = if loud.is_empty() { rng.gen_range(0..n) } else { loud[rng.gen_range(0..loud.len())] };
        word[i] = (word[i] + rng.gen_range(1..k)) % k;
    }
    word
}

/// Worst-case reads and modeled cost per length over seeded samples.
/// Every verdict is checked against the automaton.
pub fn cost_curve(
    decider: &Decider,
    lengths: &[usize],
    samples: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<Vec<CurveRow>> {
    let dfa = decider.dfa();
    let neutral = identity_letters(dfa);
    let max_n = lengths.iter().copied().max().unwrap_or(0);
    let table = completion_table(dfa, max_n);
    let mut rows = Vec::new();
    for &n in lengths {
        let results = strategy.map(samples, |i| -> Result<(u64, u64)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32) ^ i as u64);
            let x = sample(dfa, &table, &neutral, n, KINDS[i % KINDS.len()], &mut rng);
            let run = decider.decide(&x, CostModel::IdealGrover)?;
            if run.accepted != dfa.accepts(&x) {
                return Err(Error::Structural(format!("verdict disagrees with the automaton at n = {n}")));
            }
            Ok((run.ledger.classical_reads, run.ledger.modeled_cost))
        });
        let mut row = CurveRow { n, classical: 0, modeled: 0 };
        for r in results {
            let (c, m) = r?;
            row.classical = row.classical.max(c);
            row.modeled = row.modeled.max(m);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Least-squares slope of `ln y` against `ln n`, skipping zero entries.
pub fn loglog_slope(points: &[(usize, u64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|&&(n, y)| n > 0 && y > 0).map(|&(n, y)| ((n as f64).ln(), (y as f64).ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

impl CurveRow {
    pub fn csv(rows: &[CurveRow]) -> String {
        let mut out = String::from("n,classical,modeled\n");
        for r in rows {
            out.push_str(&format!("{},{},{}\n", r.n, r.classical, r.modeled));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_laws() {
        let sq: Vec<(usize, u64)> = (4..12).map(|e| (1usize << e, 1u64 << (e / 2 * 2 / 2))).collect();
        let s = loglog_slope(&sq).unwrap();
        assert!((s - 0.5).abs() < 0.1, "{s}");
        let lin: Vec<(usize, u64)> = (4..12).map(|e| (1usize << e, 3u64 << e)).collect();
        assert!((loglog_slope(&lin).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(loglog_slope(&[(4, 1)]), None);
    }
}
