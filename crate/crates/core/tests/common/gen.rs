//! Seeded random generators for graphs, formulas, labeled graphs and
//! certificates.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gck_core::guard::GuardFunction;
use gck_core::labeled::{check_transition, eval_cert, GliCert, LabeledGraph};
use gck_core::logic::{free_vars, guarded_free, Formula};
use gck_core::model::IncidenceGraph;

/// The generator used by all suites.
pub type Rand = ChaCha8Rng;

/// A generator from a seed.
pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A graph with each possible edge present with probability `p`; red nodes
/// left without a neighbour are then attached to a random blue node, since
/// isolated red nodes are not allowed (requires `nb ≥ 1` whenever `nr ≥ 1`).
pub fn graph(rng: &mut Rand, nr: usize, nb: usize, p: f64) -> IncidenceGraph {
    let mut edges = Vec::new();
    for e in 0..nb {
        for v in 0..nr {
            if rng.gen_bool(p) {
                edges.push((e, v));
            }
        }
    }
    for v in 0..nr {
        if !edges.iter().any(|&(_, w)| w == v) {
            edges.push((rng.gen_range(0..nb), v));
        }
    }
    IncidenceGraph::new(nr, nb, edges).expect("valid edges")
}

/// Parameters of the formula generator.
#[derive(Debug, Clone, Copy)]
pub struct FormulaShape {
    /// Number of blue variables (`k`).
    pub k: usize,
    /// Largest red index.
    pub max_red: usize,
    /// Maximum quantifier depth.
    pub depth: usize,
    /// Maximum counting threshold.
    pub max_n: u64,
    /// Maximum number of variables bound by one quantifier.
    pub max_vars: usize,
}

/// A random well-formed formula of the guarded counting logic.
pub fn formula(rng: &mut Rand, shape: FormulaShape) -> Formula {
    formula_at(rng, shape, shape.depth, 3)
}

fn atom(rng: &mut Rand, s: FormulaShape) -> Formula {
    let red = |rng: &mut Rand| rng.gen_range(1..=s.max_red);
    let blue = |rng: &mut Rand| rng.gen_range(1..=s.k);
    match rng.gen_range(0..10) {
        0 => Formula::Top,
        1..=5 => Formula::atom(blue(rng), red(rng)),
        6 | 7 => Formula::EqBlue(blue(rng), blue(rng)),
        _ => Formula::EqRed(red(rng), red(rng)),
    }
}

fn formula_at(rng: &mut Rand, s: FormulaShape, depth: usize, height: usize) -> Formula {
    if height == 0 || (depth == 0 && rng.gen_bool(0.5)) {
        return atom(rng, s);
    }
    match rng.gen_range(0..10) {
        0 | 1 => Formula::not(formula_at(rng, s, depth, height - 1)),
        2..=4 => Formula::and(formula_at(rng, s, depth, height - 1), formula_at(rng, s, depth, height - 1)),
        _ if depth > 0 => quantifier(rng, s, depth),
        _ => atom(rng, s),
    }
}

fn quantifier(rng: &mut Rand, s: FormulaShape, depth: usize) -> Formula {
    let body = formula_at(rng, s, depth - 1, 3);
    let free_red = free_vars(&body).red;
    let guard = GuardFunction::from_pairs(free_red.iter().map(|&i| (i, rng.gen_range(1..=s.k))));
    let red = rng.gen_bool(0.6);
    let fv = guarded_free(&guard, &body);
    let pool: Vec<usize> = if red { fv.red.into_iter().collect() } else { fv.blue.into_iter().collect() };
    if pool.is_empty() {
        return Formula::not(body);
    }
    let count = rng.gen_range(1..=s.max_vars.min(pool.len()));
    let mut vars: Vec<usize> = pool.into_iter().choose_multiple(rng, count);
    vars.sort_unstable();
    let n = rng.gen_range(1..=s.max_n);
    if red {
        Formula::exists_red(n, vars, guard, body)
    } else {
        Formula::exists_blue(n, vars, guard, body)
    }
}

/// Every guard function with domain `dom` and values in `[1, k]`.
pub fn all_guards(dom: &BTreeSet<usize>, k: usize) -> Vec<GuardFunction> {
    let dom: Vec<usize> = dom.iter().copied().collect();
    let mut out = Vec::new();
    super::oracle::for_each_tuple(dom.len(), k, |t| {
        out.push(GuardFunction::from_pairs(dom.iter().zip(t).map(|(&i, &j)| (i, j + 1))));
        true
    });
    out
}

/// A random labeled graph with the given label domains and guard function
/// (`Dom(g)` = red labels), not necessarily with real guards.
pub fn labeled(
    rng: &mut Rand,
    nr: usize,
    nb: usize,
    domr: &BTreeSet<usize>,
    domb: &BTreeSet<usize>,
    g: &GuardFunction,
) -> LabeledGraph {
    let nr = nr.max(usize::from(!domr.is_empty()));
    let nb = nb.max(usize::from(!domb.is_empty()));
    let graph = graph(rng, nr, nb, 0.5);
    let r = domr.iter().map(|&i| (i, rng.gen_range(0..nr))).collect();
    let b = domb.iter().map(|&j| (j, rng.gen_range(0..nb))).collect();
    LabeledGraph::new(graph, r, b, g.clone()).expect("valid labels")
}

/// A random labeled graph with the given label domains that has real
/// guards with respect to `g` (requires `Img(g) ⊆ domb`, `Dom(g) = domr`).
pub fn labeled_real(
    rng: &mut Rand,
    nr: usize,
    nb: usize,
    domr: &BTreeSet<usize>,
    domb: &BTreeSet<usize>,
    g: &GuardFunction,
    p: f64,
) -> LabeledGraph {
    let nr = nr.max(usize::from(!domr.is_empty()));
    let nb = nb.max(usize::from(!domb.is_empty()));
    let mut edges: BTreeSet<(usize, usize)> = graph(rng, nr, nb, p).edges().into_iter().collect();
    let b: BTreeMap<usize, usize> = domb.iter().map(|&j| (j, rng.gen_range(0..nb))).collect();
    let mut r = BTreeMap::new();
    for &i in domr {
        let e = b[&g.get(i).expect("Dom(g) = domr")];
        let nbrs: Vec<usize> = edges.iter().filter(|&&(x, _)| x == e).map(|&(_, v)| v).collect();
        let v = match nbrs.choose(rng) {
            Some(&v) if rng.gen_bool(0.85) => v,
            _ => {
                let v = rng.gen_range(0..nr);
                edges.insert((e, v));
                v
            }
        };
        r.insert(i, v);
    }
    let graph = IncidenceGraph::new(nr, nb, edges).expect("valid edges");
    LabeledGraph::new(graph, r, b, g.clone()).expect("valid labels")
}

/// A random base graph: every node labeled, real guards, blue labels in `[1, k]`.
pub fn base(rng: &mut Rand, k: usize, max_red_label: usize) -> LabeledGraph {
    loop {
        let nb = rng.gen_range(1..=k);
        let nr = rng.gen_range(1..=3usize.min(max_red_label));
        let graph = graph(rng, nr, nb, 0.5);
        let blue_labels: Vec<usize> = (1..=k).choose_multiple(rng, nb);
        let b: BTreeMap<usize, usize> = blue_labels.iter().enumerate().map(|(e, &j)| (j, e)).collect();
        let mut red_labels: Vec<usize> = (1..=max_red_label).collect();
        red_labels.shuffle(rng);
        let mut r = BTreeMap::new();
        let mut g = GuardFunction::empty();
        for v in 0..nr {
            let i = red_labels[v];
            r.insert(i, v);
            let e = graph.red_nbr(v).iter().copied().choose(rng).expect("covered");
            let j = *b.iter().find(|(_, &x)| x == e).expect("all blue labeled").0;
            g.insert(i, j);
        }
        // occasionally a second label on an existing red node
        if nr < max_red_label && rng.gen_bool(0.2) {
            let i = red_labels[nr];
            let v = rng.gen_range(0..nr);
            r.insert(i, v);
            let e = graph.red_nbr(v).iter().copied().choose(rng).expect("covered");
            g.insert(i, *b.iter().find(|(_, &x)| x == e).expect("labeled").0);
        }
        if let Ok(l) = LabeledGraph::new(graph, r, b, g) {
            return l;
        }
    }
}

/// A random transition for `g` with values in `[1, k]`, if one exists.
pub fn transition(rng: &mut Rand, g: &GuardFunction, k: usize) -> Option<GuardFunction> {
    let dom: Vec<usize> = g.dom().into_iter().collect();
    if dom.is_empty() {
        return None;
    }
    let mut f = GuardFunction::empty();
    for &i in &dom {
        if rng.gen_bool(0.5) {
            f.insert(i, rng.gen_range(1..=k));
        }
    }
    if f.is_empty() {
        f.insert(*dom.choose(rng).expect("non-empty"), rng.gen_range(1..=k));
    }
    loop {
        let img = f.img();
        let missing: Vec<usize> = dom.iter().copied().filter(|&i| f.get(i).is_none() && img.contains(&g.get(i).unwrap())).collect();
        if missing.is_empty() {
            break;
        }
        for i in missing {
            f.insert(i, rng.gen_range(1..=k));
        }
    }
    check_transition(g, &f).ok().map(|_| f)
}

/// A random valid certificate with at most `ops` rule applications above
/// the base graphs.
pub fn cert(rng: &mut Rand, k: usize, max_red_label: usize, ops: usize) -> GliCert {
    let mut c = GliCert::Base(base(rng, k, max_red_label));
    for _ in 0..ops {
        let l = eval_cert(&c).expect("valid by construction");
        let next = match rng.gen_range(0..4) {
            0 if !l.domr().is_empty() => {
                let xs: Vec<usize> = l.domr().into_iter().filter(|_| rng.gen_bool(0.5)).collect();
                if xs.is_empty() { None } else { Some(GliCert::reclaim_r(c.clone(), xs)) }
            }
            1 => {
                let free: Vec<usize> = l.domb().difference(&l.g.img()).copied().collect();
                let xs: Vec<usize> = free.into_iter().filter(|_| rng.gen_bool(0.6)).collect();
                if xs.is_empty() { None } else { Some(GliCert::reclaim_b(c.clone(), xs)) }
            }
            2 => transition(rng, &l.g, k).map(|f| GliCert::switch(c.clone(), f)),
            _ => {
                let sub_ops = rng.gen_range(0..=1);
                let other = cert(rng, k, max_red_label, sub_ops);
                let lo = eval_cert(&other).expect("valid by construction");
                if l.g.compatible(&lo.g) && l.graph.n_red() + lo.graph.n_red() <= 5 {
                    Some(if rng.gen_bool(0.5) { GliCert::glue(c.clone(), other) } else { GliCert::glue(other, c.clone()) })
                } else {
                    None
                }
            }
        };
        if let Some(n) = next {
            if eval_cert(&n).is_ok() {
                c = n;
            }
        }
    }
    c
}
