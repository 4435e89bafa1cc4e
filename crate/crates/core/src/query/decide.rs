use std::collections::HashMap;

use super::{CostModel, QueryLedger, StarFreeEngine};
use crate::automata::{Dfa, Symbol};
use crate::classify::{classify_with, ClassificationReport, ComplexityClass};
use crate::error::Result;
use crate::exec::Strategy;
use crate::monoid::SyntacticContext;
use crate::Config;

/// Per-component decision procedure, chosen by class.
#[derive(Clone, Debug)]
enum Component {
    /// Membership depends on the length only.
    Length {
        empty: bool,
        nonempty: bool,
    },
    /// Membership depends on the first and last block only.
    Endpoints {
        ctx: SyntacticContext,
    },
    StarFree {
        engine: Box<StarFreeEngine>,
    },
    Scan {
        ctx: SyntacticContext,
    },
}

/// Reading positions of a shallow query: the remainder, then the first
/// block, then the last block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Layout {
    rem: usize,
    /// Number of blocks read: 0, 1 or 2.
    ends: usize,
}

/// Optimal adaptive reading order for one layout, by minimax over partial
/// assignments. `policy` maps a partial assignment to the next position to
/// read, or to `None` once the verdict is settled.
#[derive(Clone, Debug)]
struct ReadPlan {
    layout: Layout,
    policy: HashMap<Vec<u8>, Option<usize>>,
}

/// Work limit for the minimax; larger layouts read every position.
const PLAN_BUDGET: u64 = 20_000_000;

impl ReadPlan {
    fn build(layout: Layout, k: usize, p: usize, verdict: &dyn Fn(&[Symbol]) -> bool) -> ReadPlan {
        let len = layout.rem + layout.ends * p;
        let mut policy = HashMap::new();
        let work = ((k + 1) as u64).saturating_pow(len as u32).saturating_mul((k as u64).saturating_pow(len as u32));
        if work <= PLAN_BUDGET {
            let mut memo = HashMap::new();
            Self::solve(&mut vec![k as u8; len], k, verdict, &mut memo);
            policy = memo.into_iter().map(|(state, (_, mv))| (state, mv)).collect();
        }
        ReadPlan { layout, policy }
    }

    /// Worst-case reads from `state` and the best next position.
    fn solve(
        state: &mut Vec<u8>,
        k: usize,
        verdict: &dyn Fn(&[Symbol]) -> bool,
        memo: &mut HashMap<Vec<u8>, (usize, Option<usize>)>,
    ) -> usize {
        if let Some(&(depth, _)) = memo.get(state) {
            return depth;
        }
        let mut best = (0, None);
        if !Self::settled(state, k, verdict) {
            best.0 = usize::MAX;
            let free: Vec<usize> = (0..state.len()).filter(|&i| state[i] as usize == k).collect();
            for pos in free {
                let mut worst = 0;
                for a in 0..k {
                    state[pos] = a as u8;
                    worst = worst.max(Self::solve(state, k, verdict, memo));
                }
                state[pos] = k as u8;
                if worst + 1 < best.0 {
                    best = (worst + 1, Some(pos));
                }
            }
        }
        memo.insert(state.clone(), best);
        best.0
    }

    /// Whether every completion of `state` gets the same verdict.
    fn settled(state: &[u8], k: usize, verdict: &dyn Fn(&[Symbol]) -> bool) -> bool {
        let free: Vec<usize> = (0..state.len()).filter(|&i| state[i] as usize == k).collect();
        let mut word: Vec<Symbol> = state.iter().map(|&a| if a as usize == k { 0 } else { a as usize }).collect();
        let first = verdict(&word);
        let total = k.pow(free.len() as u32);
        for code in 1..total {
            let mut c = code;
            for &i in &free {
                word[i] = c % k;
                c /= k;
            }
            if verdict(&word) != first {
                return false;
            }
        }
        true
    }

    /// Runs the plan on `x` split into `blocks` blocks of size `p`.
    /// Returns the verdict and the number of positions read.
    fn run(&self, x: &[Symbol], p: usize, k: usize, verdict: &dyn Fn(&[Symbol]) -> bool) -> (bool, u64) {
        let n = x.len();
        let rem = self.layout.rem;
        let last = n.saturating_sub(rem + p);
        let absolute = |i: usize| match i {
            i if i < rem => n - rem + i,
            i if i < rem + p => i - rem,
            i => last + i - rem - p,
        };
        let len = rem + self.layout.ends * p;
        if self.policy.is_empty() {
            let word: Vec<Symbol> = (0..len).map(|i| x[absolute(i)]).collect();
            return (verdict(&word), len as u64);
        }
        let mut state = vec![k as u8; len];
        let mut reads = 0;
        while let Some(pos) = self.policy[&state] {
            state[pos] = x[absolute(pos)] as u8;
            reads += 1;
        }
        let word: Vec<Symbol> = state.iter().map(|&a| if a as usize == k { 0 } else { a as usize }).collect();
        (verdict(&word), reads)
    }
}

/// Outcome of one membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision {
    pub accepted: bool,
    pub ledger: QueryLedger,
}

/// A classified language prepared for membership queries.
#[derive(Clone, Debug)]
pub struct Decider {
    report: ClassificationReport,
    components: Vec<Component>,
    /// Present when every component is decided from its endpoints.
    plans: Option<Vec<ReadPlan>>,
    dfa: Dfa,
}

impl Decider {
    pub fn new(dfa: &Dfa) -> Result<Self> {
        Decider::with_config(dfa, &Config::default())
    }

    pub fn with_config(dfa: &Dfa, config: &Config) -> Result<Self> {
        let report = classify_with(dfa, config)?;
        let family = report.family();
        let components = report
            .components
            .iter()
            .zip(&family.components)
            .map(|(rep, comp)| -> Result<Component> {
                let ctx = SyntacticContext::build(&comp.dfa, config.monoid_cap, Strategy::Sequential)?;
                Ok(match rep.class {
                    ComplexityClass::ZeroQuery => {
                        let plus = ctx.plus_image().iter().next();
                        Component::Length {
                            empty: ctx.is_accepting(ctx.identity()),
                            nonempty: plus.is_some_and(|z| ctx.is_accepting(z)),
                        }
                    }
                    ComplexityClass::Constant => Component::Endpoints { ctx },
                    ComplexityClass::SqrtN => {
                        Component::StarFree { engine: Box::new(StarFreeEngine::new(&ctx)?.with_charge(config.charge)) }
                    }
                    ComplexityClass::Linear => Component::Scan { ctx },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut decider = Decider { report, components, plans: None, dfa: dfa.minimize() };
        if decider.components.iter().all(|c| matches!(c, Component::Length { .. } | Component::Endpoints { .. })) {
            let p = decider.report.family().p;
            let k = decider.dfa.alphabet().len();
            let plans = (0..p)
                .flat_map(|rem| (0..3).map(move |ends| Layout { rem, ends }))
                .map(|layout| ReadPlan::build(layout, k, p, &|w| decider.shallow_verdict(layout, w)))
                .collect();
            decider.plans = Some(plans);
        }
        Ok(decider)
    }

    /// Verdict from the remainder and end blocks of a shallow query, laid
    /// out as in [`Layout`].
    fn shallow_verdict(&self, layout: Layout, w: &[Symbol]) -> bool {
        let family = self.report.family();
        let p = family.p;
        let index = family.component_index(&w[..layout.rem]);
        let blocks: Vec<Symbol> = w[layout.rem..].chunks(p).map(|c| family.block_of(c)).collect();
        match &self.components[index] {
            Component::Length { empty, nonempty } => {
                if layout.ends == 0 {
                    *empty
                } else {
                    *nonempty
                }
            }
            Component::Endpoints { ctx } => ctx.accepts(&blocks),
            _ => unreachable!("shallow plans cover length and endpoint components only"),
        }
    }

    pub fn report(&self) -> &ClassificationReport {
        &self.report
    }

    pub fn class(&self) -> ComplexityClass {
        self.report.aggregate
    }

    /// Minimal DFA of the language, for cross-checks and sampling.
    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    /// Decides `x ∈ L`. The final `|x| mod p` symbols are read classically
    /// to pick the component; one block read costs `p` symbol reads.
    pub fn decide(&self, x: &[Symbol], model: CostModel) -> Result<Decision> {
        let family = self.report.family();
        if let Some(plans) = &self.plans {
            let rem = x.len() % family.p;
            let ends = (x.len() / family.p).min(2);
            let plan = &plans[rem * 3 + ends];
            let k = self.dfa.alphabet().len();
            let (accepted, reads) = plan.run(x, family.p, k, &|w| self.shallow_verdict(plan.layout, w));
            return Ok(Decision { accepted, ledger: QueryLedger { classical_reads: reads, modeled_cost: reads } });
        }
        let p = family.p as u64;
        let (index, blocks) = family.reduce(x);
        let remainder = (x.len() % family.p) as u64;
        let (accepted, inner) = match &self.components[index] {
            Component::Length { empty, nonempty } => {
                (if blocks.is_empty() { *empty } else { *nonempty }, QueryLedger::default())
            }
            Component::Endpoints { ctx } => {
                let (accepted, reads) = match blocks.len() {
                    0 => (ctx.is_accepting(ctx.identity()), 0),
                    1 => (ctx.accepts(&blocks), 1),
                    n => (ctx.accepts(&[blocks[0], blocks[n - 1]]), 2),
                };
                (accepted, QueryLedger { classical_reads: reads, modeled_cost: reads })
            }
            Component::StarFree { engine } => engine.decide(&blocks, model)?,
            Component::Scan { ctx } => {
                let n = blocks.len() as u64;
                (ctx.accepts(&blocks), QueryLedger { classical_reads: n, modeled_cost: n })
            }
        };
        let ledger = QueryLedger {
            classical_reads: inner.classical_reads * p + remainder,
            modeled_cost: inner.modeled_cost.saturating_mul(p).saturating_add(remainder),
        };
        Ok(Decision { accepted, ledger })
    }
}
