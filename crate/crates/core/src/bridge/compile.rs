//! Quantum graphs that evaluate normal-form formulas by homomorphism counts.
//!
//! For `χ = (Γ_g ∧ ψ)` in the normal form and size parameters `(m, d)`,
//! [`quantum_from_formula`] builds a quantum graph `Q` with guard `g`, red
//! labels `Dom(g)` and blue labels the free blue indices of `χ`, such that
//! `hom(Q, L') ∈ {0, 1}` indicates `χ` on every labeled graph `L'` with
//! exactly `m` blue nodes, neighbourhoods of size at most `d`, sufficient
//! labels and real guards with respect to `g`.
//!
//! The construction follows the formula: atoms become small base graphs,
//! negation and counting quantifiers become indicator normalizations,
//! conjunction becomes glueing, and blue quantifiers that change the guard
//! are realized by a reclaim–switch–reclaim pipeline.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::guard::GuardFunction;
use crate::labeled::{GliCert, LabeledGraph};
use crate::logic::{check_syntax, formula_to_guard, free_vars, guarded_free, Formula, SyntaxMode};
use crate::model::IncidenceGraph;
use crate::quantum::{guard_graph_with_blue, normalize_indicator_with, QuantumGraph};

/// Size parameters of the target graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeParams {
    /// Exact number of blue nodes of every target graph (`m ≥ 1`).
    pub m: u64,
    /// Upper bound on every blue neighbourhood size.
    pub d: u64,
}

/// Builds the indicator quantum graph of `χ = (Γ_g ∧ ψ)` with default caps.
pub fn quantum_from_formula(chi: &Formula, k: usize, params: SizeParams) -> Result<QuantumGraph> {
    quantum_from_formula_with(chi, k, params, &Caps::default())
}

/// Builds the indicator quantum graph of `χ = (Γ_g ∧ ψ)`.
///
/// Every component carries a derivation certificate.
pub fn quantum_from_formula_with(chi: &Formula, k: usize, params: SizeParams, caps: &Caps) -> Result<QuantumGraph> {
    if params.m == 0 {
        return Err(Error::Precondition("the blue node count m must be at least 1".into()));
    }
    let verdict = check_syntax(chi, k, SyntaxMode::Ngck);
    if !verdict.valid {
        let msgs: Vec<String> = verdict.violations.iter().map(ToString::to_string).collect();
        return Err(Error::NotInFragment(msgs.join("; ")));
    }
    let Formula::And(guard, psi) = chi else { unreachable!("checked shape") };
    let g = formula_to_guard(guard).map_err(Error::NotInFragment)?;
    Compiler { params, caps }.compile(&g, psi)
}

struct Compiler<'a> {
    params: SizeParams,
    caps: &'a Caps,
}

fn certified(graph: IncidenceGraph, r: BTreeMap<usize, usize>, b: BTreeMap<usize, usize>, g: &GuardFunction) -> Result<QuantumGraph> {
    let l = LabeledGraph::new(graph, r, b, g.clone())?;
    Ok(QuantumGraph::single_certified(BigRational::one(), l.clone(), GliCert::Base(l)))
}

/// One red node labeled `reds`, adjacent to one blue node per distinct
/// value of `blues`, each carrying the labels mapped to it.
fn star(reds: &[usize], blues: &[usize], g: &GuardFunction) -> Result<QuantumGraph> {
    let distinct: BTreeSet<usize> = blues.iter().copied().collect();
    let pos: BTreeMap<usize, usize> = distinct.iter().enumerate().map(|(p, &j)| (j, p)).collect();
    let graph = IncidenceGraph::new(1, distinct.len(), (0..distinct.len()).map(|e| (e, 0)))?;
    let r = reds.iter().map(|&i| (i, 0)).collect();
    let b = pos.into_iter().collect();
    certified(graph, r, b, g)
}

impl Compiler<'_> {
    fn compile(&self, g: &GuardFunction, psi: &Formula) -> Result<QuantumGraph> {
        match psi {
            Formula::AtomE { blue, red } => {
                let gi = g.get(*red).expect("guard domain is {i}");
                star(&[*red], &[*blue, gi], g)
            }
            Formula::EqBlue(a, b) => {
                let graph = IncidenceGraph::new(0, 1, [])?;
                certified(graph, BTreeMap::new(), [(*a, 0), (*b, 0)].into(), g)
            }
            Formula::EqRed(a, b) => {
                let (ga, gb) = (g.get(*a).expect("guarded"), g.get(*b).expect("guarded"));
                star(&[*a, *b], &[ga, gb], g)
            }
            Formula::Top => Err(Error::NotInFragment("T is not a base case".into())),
            Formula::Not(inner) => {
                let q = self.compile(g, inner)?;
                normalize_indicator_with(&q, &[1].into(), &[0].into(), self.caps)
            }
            Formula::And(a, b) => {
                let qa = self.compile(&g.restrict(&free_vars(a).red), a)?;
                let qb = self.compile(&g.restrict(&free_vars(b).red), b)?;
                qa.glue_capped(&qb, self.caps)
            }
            Formula::ExistsRed { n, vars, guard: inner, body } => {
                let bound = self.bound(self.params.m.saturating_mul(self.params.d), vars.len())?;
                if *n > bound {
                    return self.unfulfillable(g, psi);
                }
                let q = self.compile(inner, body)?;
                let released = q.reclaim_red(&vars.iter().copied().collect())?;
                normalize_indicator_with(&released, &(0..*n).collect(), &(*n..=bound).collect(), self.caps)
            }
            Formula::ExistsBlue { n, vars, guard: inner, body } => {
                let bound = self.bound(self.params.m, vars.len())?;
                if *n > bound {
                    return self.unfulfillable(g, psi);
                }
                let q = self.compile(inner, body)?;
                let s: BTreeSet<usize> = vars.iter().copied().collect();
                let released = release_blue(&q, g, inner, &s)?;
                normalize_indicator_with(&released, &(0..*n).collect(), &(*n..=bound).collect(), self.caps)
            }
        }
    }

    /// `base^ℓ`, rejecting bounds whose indicator could never be materialized.
    fn bound(&self, base: u64, l: usize) -> Result<u64> {
        let e = u32::try_from(l).unwrap_or(u32::MAX);
        match base.checked_pow(e) {
            Some(b) if b < self.caps.quantum_terms as u64 => Ok(b),
            _ => Err(Error::CapExceeded(format!(
                "indicator degree {base}^{l} exceeds the quantum term cap {}",
                self.caps.quantum_terms
            ))),
        }
    }

    /// `0 · L` for a base graph with the required label domains.
    fn unfulfillable(&self, g: &GuardFunction, psi: &Formula) -> Result<QuantumGraph> {
        let domb = guarded_free(g, psi).blue;
        let l = guard_graph_with_blue(g, &domb)?;
        Ok(QuantumGraph::single_certified(BigRational::zero(), l.clone(), GliCert::Base(l)))
    }
}

/// Releases the quantified blue labels `s` from `q` (guard `inner`) so that
/// the result has guard `outer` and counts the satisfying tuples.
///
/// Without a guard change this is a plain blue reclaim. Otherwise the guard
/// moves along the transition `f = outer|Z` for
/// `Z = {i : outer(i) ≠ inner(i) or inner(i) ∈ s}`: first the labels of
/// `(s ∩ Img f) ∖ Img(inner)` are released, then `f` is applied (which
/// releases `Img(inner) ∩ Img f`), and finally `s ∖ Img(outer)` is released.
pub fn release_blue(
    q: &QuantumGraph,
    outer: &GuardFunction,
    inner: &GuardFunction,
    s: &BTreeSet<usize>,
) -> Result<QuantumGraph> {
    let z: BTreeSet<usize> = inner
        .iter()
        .filter(|&(i, j)| outer.get(i) != Some(j) || s.contains(&j))
        .map(|(i, _)| i)
        .collect();
    if z.is_empty() {
        return q.reclaim_blue(s);
    }
    let f = outer.restrict(&z);
    let (img_f, img_inner, img_outer) = (f.img(), inner.img(), outer.img());
    let d1: BTreeSet<usize> = s.iter().copied().filter(|j| img_f.contains(j) && !img_inner.contains(j)).collect();
    let d2: BTreeSet<usize> = s.iter().copied().filter(|j| !img_outer.contains(j)).collect();
    let q1 = q.reclaim_blue(&d1)?;
    let q2 = q1.switch(&f)?;
    q2.reclaim_blue(&d2)
}
