//! Formulas that count homomorphisms from a derivable labeled graph.
//!
//! For a certificate of `L` and a number `m`, [`formula_from_cert`] returns
//! `φ_L^m` such that for every labeled graph `L'` whose label domains contain
//! those of `L` and which has real guards with respect to `g_L`, the
//! interpretation of `L'` satisfies `φ_L^m` iff `hom(L, L') = m`.
//!
//! The construction needs the derivation, not only the graph: it follows the
//! certificate rule by rule. Reclaiming (and switching, which releases the
//! labels `Dom(b) ∩ Img(f) ∩ Img(g)`) becomes counting quantification over
//! the released variables, combined over all segmentations of `m`; glueing
//! becomes a disjunction over factorizations of `m`.

use std::collections::{BTreeSet, HashMap};

use super::segment::enumerate_segmentations;
use crate::error::Result;
use crate::guard::GuardFunction;
use crate::labeled::{apply_transition, eval_cert, glue, reclaim, GliCert, LabeledGraph};
use crate::logic::{and_all, exists_eq_blue, exists_eq_red, or, or_all, to_normal_form, Formula};
use crate::model::Color;

enum Step {
    Base,
    Reclaim(Color, usize, Vec<usize>),
    Switch(usize, Vec<usize>),
    Glue(usize, usize),
}

struct Node {
    step: Step,
    graph: LabeledGraph,
}

/// Builds `φ_L^m` for the graph `L` derived by `c`.
///
/// The certificate is validated first. Every produced formula `φ` satisfies
/// `(Γ_g ∧ φ)` in the normal form, with free variables exactly the labels of
/// `L`.
pub fn formula_from_cert(c: &GliCert, m: u64) -> Result<Formula> {
    eval_cert(c)?;
    let mut b = Builder { nodes: Vec::new(), memo: HashMap::new() };
    let root = b.flatten(c);
    Ok(b.phi(root, m))
}

struct Builder {
    nodes: Vec<Node>,
    memo: HashMap<(usize, u64), Formula>,
}

/// An always-true sentence in the normal form (the normal form of `⊤`).
pub fn true_sentence() -> Formula {
    to_normal_form(&Formula::Top, &GuardFunction::empty(), 1).expect("T is well formed")
}

impl Builder {
    fn flatten(&mut self, c: &GliCert) -> usize {
        let (step, graph) = match c {
            GliCert::Base(l) => (Step::Base, l.clone()),
            GliCert::ReclaimR(inner, xs) | GliCert::ReclaimB(inner, xs) => {
                let color = if matches!(c, GliCert::ReclaimR(..)) { Color::Red } else { Color::Blue };
                let t = self.flatten(inner);
                let graph = reclaim(&self.nodes[t].graph, color, xs).expect("validated certificate");
                (Step::Reclaim(color, t, xs.iter().copied().collect()), graph)
            }
            GliCert::Switch(inner, f) => {
                let t = self.flatten(inner);
                let l = &self.nodes[t].graph;
                let (img_f, img_g) = (f.img(), l.g.img());
                let released: Vec<usize> =
                    l.domb().into_iter().filter(|j| img_f.contains(j) && img_g.contains(j)).collect();
                let graph = apply_transition(l, f).expect("validated certificate");
                (Step::Switch(t, released), graph)
            }
            GliCert::Glue(a, b) => {
                let ta = self.flatten(a);
                let tb = self.flatten(b);
                let graph = glue(&self.nodes[ta].graph, &self.nodes[tb].graph).graph;
                (Step::Glue(ta, tb), graph)
            }
        };
        self.nodes.push(Node { step, graph });
        self.nodes.len() - 1
    }

    fn phi(&mut self, t: usize, m: u64) -> Formula {
        if let Some(f) = self.memo.get(&(t, m)) {
            return f.clone();
        }
        let out = match &self.nodes[t].step {
            Step::Base => base_formula(&self.nodes[t].graph, m),
            Step::Reclaim(color, inner, xs) => {
                let (color, inner, xs) = (*color, *inner, xs.clone());
                self.released(color, inner, &xs, m)
            }
            Step::Switch(inner, xs) => {
                let (inner, xs) = (*inner, xs.clone());
                self.released(Color::Blue, inner, &xs, m)
            }
            Step::Glue(a, b) => {
                let (a, b) = (*a, *b);
                if m == 0 {
                    or(self.phi(a, 0), self.phi(b, 0))
                } else {
                    let mut parts = Vec::new();
                    for m1 in (1..=m).filter(|d| m % d == 0) {
                        parts.push(Formula::and(self.phi(a, m1), self.phi(b, m / m1)));
                    }
                    or_all(parts).expect("m has the divisor 1")
                }
            }
        };
        self.memo.insert((t, m), out.clone());
        out
    }

    /// The formulas for a graph obtained from node `inner` by releasing the
    /// labels `xs` of the given colour (guard of the quantified body: the
    /// guard of `inner`).
    fn released(&mut self, color: Color, inner: usize, xs: &[usize], m: u64) -> Formula {
        if xs.is_empty() {
            return self.phi(inner, m);
        }
        let g = self.nodes[inner].graph.g.clone();
        let quant = |n: u64, body: Formula| -> Formula {
            match color {
                Color::Red => exists_eq_red(n, xs.to_vec(), g.clone(), body),
                Color::Blue => exists_eq_blue(n, xs.to_vec(), g.clone(), body),
            }
        };
        let zero = self.phi(inner, 0);
        if m == 0 {
            let body = Formula::not(zero);
            return match color {
                Color::Red => Formula::not(Formula::exists_red(1, xs.to_vec(), g.clone(), body)),
                Color::Blue => Formula::not(Formula::exists_blue(1, xs.to_vec(), g.clone(), body)),
            };
        }
        let mut disjuncts = Vec::new();
        for s in enumerate_segmentations(m) {
            let mut conj = vec![quant(s.size(), Formula::not(zero.clone()))];
            for (&c, &mj) in s.counts.iter().zip(&s.values) {
                let inner_phi = self.phi(inner, mj);
                conj.push(quant(c, inner_phi));
            }
            disjuncts.push(and_all(conj).expect("non-empty"));
        }
        or_all(disjuncts).expect("m ≥ 1 has a segmentation")
    }
}

/// Base graphs: the conjunction of all edges and label coincidences; blue
/// labels that occur in neither get a trivial `e_j = e_j` conjunct so that
/// every label is a free variable. An empty conjunction is the normal form
/// of `⊤`.
fn base_formula(l: &LabeledGraph, m: u64) -> Formula {
    let mut atoms = Vec::new();
    let mut mentioned = BTreeSet::new();
    for (&j, &e) in &l.b {
        for (&i, &v) in &l.r {
            if l.graph.has_edge(e, v) {
                atoms.push(Formula::atom(j, i));
                mentioned.insert(j);
            }
        }
    }
    for (&i, &v) in &l.r {
        for (&i2, &v2) in l.r.range(i + 1..) {
            if v == v2 {
                atoms.push(Formula::EqRed(i, i2));
            }
        }
    }
    for (&j, &e) in &l.b {
        for (&j2, &e2) in l.b.range(j + 1..) {
            if e == e2 {
                atoms.push(Formula::EqBlue(j, j2));
                mentioned.insert(j);
                mentioned.insert(j2);
            }
        }
    }
    for &j in l.b.keys() {
        if !mentioned.contains(&j) {
            atoms.push(Formula::EqBlue(j, j));
        }
    }
    let one = and_all(atoms).unwrap_or_else(true_sentence);
    match m {
        0 => Formula::not(one),
        1 => one,
        _ => Formula::and(Formula::not(one.clone()), one),
    }
}
