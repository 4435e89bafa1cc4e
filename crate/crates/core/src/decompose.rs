//! Schützenberger decomposition of monoid-element preimages, with exact
//! verification by automaton equivalence.

use std::fmt::Write as _;

use crate::automata::{Dfa, Equivalence, Symbol};
use crate::error::{Error, Result};
use crate::monoid::{Elem, IdealProfile, SyntacticContext};

/// The sets E, F, G, C for one target element `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionSets {
    pub target: Elem,
    pub e: Vec<(Elem, Symbol)>,
    pub f: Vec<(Symbol, Elem)>,
    pub g: Vec<(Symbol, Elem, Symbol)>,
    pub c: Vec<Symbol>,
}

/// All factorizations `p · q = m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub target: Elem,
    pub parts: Vec<(Elem, Elem)>,
}

/// Automata for `UΣ*`, `Σ*V`, `Σ*CΣ*` and `Σ*WΣ*`.
#[derive(Clone, Debug)]
pub struct DecompositionDfas {
    pub u_sigma: Dfa,
    pub sigma_v: Dfa,
    pub sigma_c_sigma: Dfa,
    pub sigma_w_sigma: Dfa,
}

impl DecompositionDfas {
    /// `(UΣ* ∩ Σ*V) \ (Σ*CΣ* ∪ Σ*WΣ*)`
    pub fn combined(&self) -> Dfa {
        let pos = self.u_sigma.intersect(&self.sigma_v).expect("same alphabet");
        let neg = self.sigma_c_sigma.union(&self.sigma_w_sigma).expect("same alphabet");
        pos.difference(&neg).expect("same alphabet").minimize()
    }
}

/// Computes E, F, G and C from the ideal predicates.
pub fn decompose(ctx: &SyntacticContext, m: Elem) -> Result<DecompositionSets> {
    decompose_with(ctx, &ctx.ideal_profile(), m)
}

pub fn decompose_with(ctx: &SyntacticContext, ideals: &IdealProfile, m: Elem) -> Result<DecompositionSets> {
    if m == ctx.identity() {
        return Err(Error::Precondition("the identity is the base case, not decomposed".into()));
    }
    if !ctx.is_aperiodic().holds() {
        return Err(Error::Precondition("decomposition requires an aperiodic monoid".into()));
    }
    let n = ctx.size();
    let k = ctx.alphabet().len();
    let phi = |a: Symbol| ctx.letter(a);
    let mut e = Vec::new();
    let mut f = Vec::new();
    let mut g = Vec::new();
    for r in 0..n {
        for a in 0..k {
            let ra = ctx.mul(r, phi(a));
            if ideals.right[ra] == ideals.right[m] && ideals.right[r] != ideals.right[m] {
                e.push((r, a));
            }
        }
    }
    for a in 0..k {
        for r in 0..n {
            let ar = ctx.mul(phi(a), r);
            if ideals.left[ar] == ideals.left[m] && ideals.left[r] != ideals.left[m] {
                f.push((a, r));
            }
        }
    }
    for a in 0..k {
        for r in 0..n {
            let ar = ctx.mul(phi(a), r);
            for b in 0..k {
                let rb = ctx.mul(r, phi(b));
                let arb = ctx.mul(ar, phi(b));
                if ideals.two_sided[ar].contains(m)
                    && ideals.two_sided[rb].contains(m)
                    && !ideals.two_sided[arb].contains(m)
                {
                    g.push((a, r, b));
                }
            }
        }
    }
    let c = (0..k).filter(|&a| !ideals.two_sided[phi(a)].contains(m)).collect();
    let sets = DecompositionSets { target: m, e, f, g, c };
    let rm = ideals.rank[m];
    let descends = sets.e.iter().map(|x| x.0).chain(sets.f.iter().map(|x| x.1)).chain(sets.g.iter().map(|x| x.1));
    for r in descends {
        if ideals.rank[r] >= rm {
            return Err(Error::Structural(format!("rank does not descend at {}", ctx.name(r))));
        }
    }
    Ok(sets)
}

/// DFA for `φ⁻¹(r)` on the right-regular representation.
pub fn preimage_dfa(ctx: &SyntacticContext, r: Elem) -> Dfa {
    preimage_set_dfa(ctx, &[r])
}

/// DFA for the union of preimages of the listed elements.
pub fn preimage_set_dfa(ctx: &SyntacticContext, targets: &[Elem]) -> Dfa {
    Dfa::from_fn(ctx.alphabet().clone(), ctx.size(), ctx.identity(), |q| targets.contains(&q), |q, a| ctx.step(q, a))
        .expect("total by construction")
}

pub fn decomposition_dfas(ctx: &SyntacticContext, sets: &DecompositionSets) -> DecompositionDfas {
    let sigma = ctx.alphabet().clone();
    let all = Dfa::universal(sigma.clone());
    let letter = |a: Symbol| Dfa::word(sigma.clone(), &[a]);
    let cat = |x: &Dfa, y: &Dfa| x.concat(y).expect("same alphabet");
    let union_all = |parts: Vec<Dfa>| {
        parts.into_iter().fold(Dfa::empty(sigma.clone()), |acc, d| acc.union(&d).expect("same alphabet").minimize())
    };
    let u = union_all(sets.e.iter().map(|&(r, a)| cat(&preimage_dfa(ctx, r), &letter(a))).collect());
    let v = union_all(sets.f.iter().map(|&(a, r)| cat(&letter(a), &preimage_dfa(ctx, r))).collect());
    let w =
        union_all(sets.g.iter().map(|&(a, r, b)| cat(&cat(&letter(a), &preimage_dfa(ctx, r)), &letter(b))).collect());
    let c = union_all(sets.c.iter().map(|&a| letter(a)).collect());
    DecompositionDfas {
        u_sigma: cat(&u, &all),
        sigma_v: cat(&all, &v),
        sigma_c_sigma: cat(&cat(&all, &c), &all),
        sigma_w_sigma: cat(&cat(&all, &w), &all),
    }
}

/// Exact check of `φ⁻¹(m) = (UΣ* ∩ Σ*V) \ (Σ*CΣ* ∪ Σ*WΣ*)`.
pub fn verify_decomposition(ctx: &SyntacticContext, m: Elem) -> Result<Equivalence> {
    let sets = decompose(ctx, m)?;
    Ok(verify_sets(ctx, &sets))
}

/// Checks given (possibly altered) sets against the true preimage.
pub fn verify_sets(ctx: &SyntacticContext, sets: &DecompositionSets) -> Equivalence {
    let combined = decomposition_dfas(ctx, sets).combined();
    preimage_dfa(ctx, sets.target).equivalent(&combined).expect("same alphabet")
}

pub fn split(ctx: &SyntacticContext, m: Elem) -> Splitting {
    let n = ctx.size();
    let parts = (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).filter(|&(p, q)| ctx.mul(p, q) == m).collect();
    Splitting { target: m, parts }
}

impl DecompositionSets {
    /// Appendix-style listing of the four sets.
    pub fn render(&self, ctx: &SyntacticContext) -> String {
        let sym = |a: Symbol| ctx.alphabet().name(a).to_string();
        let el = |r: Elem| ctx.name(r);
        let set = |items: Vec<String>| {
            if items.is_empty() {
                "∅".to_string()
            } else {
                format!("{{{}}}", items.join(", "))
            }
        };
        let mut out = String::new();
        writeln!(out, "m = {}", el(self.target)).unwrap();
        writeln!(out, "E = {}", set(self.e.iter().map(|&(r, a)| format!("({},{})", el(r), sym(a))).collect())).unwrap();
        writeln!(out, "F = {}", set(self.f.iter().map(|&(a, r)| format!("({},{})", sym(a), el(r))).collect())).unwrap();
        let g = self.g.iter().map(|&(a, r, b)| format!("({},{},{})", sym(a), el(r), sym(b))).collect();
        writeln!(out, "G = {}", set(g)).unwrap();
        writeln!(out, "C = {}", set(self.c.iter().map(|&a| sym(a)).collect())).unwrap();
        out
    }
}
