//! Brute-force reference implementations used to check the library.
//!
//! Everything here is written directly from the definitions, without sharing
//! code with the library beyond the plain data types.

use std::collections::{BTreeMap, BTreeSet};

use gck_core::decomp::TreeDecomp;
use gck_core::guard::GuardFunction;
use gck_core::labeled::LabeledGraph;
use gck_core::logic::Formula;
use gck_core::model::IncidenceGraph;

/// Calls `f` on every tuple in `0..base` of the given length (odometer order).
/// Stops early when `f` returns false.
pub fn for_each_tuple(len: usize, base: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if len > 0 && base == 0 {
        return;
    }
    let mut t = vec![0usize; len];
    loop {
        if !f(&t) {
            return;
        }
        let mut p = 0;
        loop {
            if p == len {
                return;
            }
            t[p] += 1;
            if t[p] < base {
                break;
            }
            t[p] = 0;
            p += 1;
        }
    }
}

/// Counts homomorphisms by enumerating every pair of maps `(h_R, h_B)`.
pub fn naive_hom(p: &IncidenceGraph, h: &IncidenceGraph) -> u128 {
    let edges = p.edges();
    let mut count = 0u128;
    for_each_tuple(p.n_red(), h.n_red(), |hr| {
        for_each_tuple(p.n_blue(), h.n_blue(), |hb| {
            if edges.iter().all(|&(e, v)| h.has_edge(hb[e], hr[v])) {
                count += 1;
            }
            true
        });
        true
    });
    count
}

/// Counts label-preserving homomorphisms by full enumeration; 0 when a label
/// of `l` is missing in `t`.
pub fn naive_hom_labeled(l: &LabeledGraph, t: &LabeledGraph) -> u128 {
    if l.r.keys().any(|i| !t.r.contains_key(i)) || l.b.keys().any(|j| !t.b.contains_key(j)) {
        return 0;
    }
    let edges = l.graph.edges();
    let mut count = 0u128;
    for_each_tuple(l.graph.n_red(), t.graph.n_red(), |hr| {
        if l.r.iter().any(|(i, &v)| hr[v] != t.r[i]) {
            return true;
        }
        for_each_tuple(l.graph.n_blue(), t.graph.n_blue(), |hb| {
            if l.b.iter().all(|(j, &e)| hb[e] == t.b[j]) && edges.iter().all(|&(e, v)| t.graph.has_edge(hb[e], hr[v])) {
                count += 1;
            }
            true
        });
        true
    });
    count
}

/// Evaluates a formula directly from the semantics: quantifiers enumerate
/// all tuples of nodes and count those satisfying `Γ_guard ∧ body`.
pub fn naive_eval(
    g: &IncidenceGraph,
    red: &BTreeMap<usize, usize>,
    blue: &BTreeMap<usize, usize>,
    phi: &Formula,
) -> bool {
    match phi {
        Formula::Top => true,
        Formula::AtomE { blue: j, red: i } => g.has_edge(blue[j], red[i]),
        Formula::EqBlue(a, b) => blue[a] == blue[b],
        Formula::EqRed(a, b) => red[a] == red[b],
        Formula::Not(f) => !naive_eval(g, red, blue, f),
        Formula::And(a, b) => naive_eval(g, red, blue, a) && naive_eval(g, red, blue, b),
        Formula::ExistsRed { n, vars, guard, body } | Formula::ExistsBlue { n, vars, guard, body } => {
            let is_red = matches!(phi, Formula::ExistsRed { .. });
            let base = if is_red { g.n_red() } else { g.n_blue() };
            let mut count = 0u64;
            let (mut r, mut b) = (red.clone(), blue.clone());
            for_each_tuple(vars.len(), base, |t| {
                for (&x, &node) in vars.iter().zip(t) {
                    if is_red {
                        r.insert(x, node);
                    } else {
                        b.insert(x, node);
                    }
                }
                if guard_holds(g, &r, &b, guard) && naive_eval(g, &r, &b, body) {
                    count += 1;
                }
                count < *n
            });
            count >= *n
        }
    }
}

/// `Γ_g` under an assignment.
pub fn guard_holds(g: &IncidenceGraph, red: &BTreeMap<usize, usize>, blue: &BTreeMap<usize, usize>, f: &GuardFunction) -> bool {
    f.iter().all(|(i, j)| g.has_edge(blue[&j], red[&i]))
}

/// Whether the tree nodes in `set` induce a connected subgraph of the tree
/// (the empty set counts as connected): a subforest of a tree is connected
/// iff it has exactly one edge fewer than nodes.
fn induces_tree(d: &TreeDecomp, set: &BTreeSet<usize>) -> bool {
    if set.is_empty() {
        return true;
    }
    let inner = d.tree_edges().into_iter().filter(|(a, b)| set.contains(a) && set.contains(b)).count();
    inner + 1 == set.len()
}

/// The five decomposition conditions, checked from the definitions.
/// `entangled` adds precise coverage and blue connectedness.
pub fn decomp_ok(d: &TreeDecomp, i: &IncidenceGraph, entangled: bool) -> bool {
    let nodes = d.bag.len();
    let nbr = |e: usize| -> BTreeSet<usize> { (0..i.n_red()).filter(|&v| i.has_edge(e, v)).collect() };
    let union = |t: usize| -> BTreeSet<usize> { d.cover[t].iter().flat_map(|&e| nbr(e)).collect() };
    let complete = (0..i.n_blue()).all(|e| (0..nodes).any(|t| d.cover[t].contains(&e) && nbr(e).is_subset(&d.bag[t])));
    let red_conn = (0..i.n_red()).all(|v| induces_tree(d, &(0..nodes).filter(|&t| d.bag[t].contains(&v)).collect()));
    let covering = (0..nodes).all(|t| d.bag[t].is_subset(&union(t)));
    if !(complete && red_conn && covering) {
        return false;
    }
    if !entangled {
        return true;
    }
    let precise = (0..nodes).all(|t| d.bag[t] == union(t));
    let blue_conn =
        (0..i.n_blue()).all(|e| induces_tree(d, &(0..nodes).filter(|&t| d.cover[t].contains(&e)).collect()));
    precise && blue_conn
}

/// Maximum cover size.
pub fn decomp_width(d: &TreeDecomp) -> usize {
    d.cover.iter().map(BTreeSet::len).max().unwrap_or(0)
}

/// Checks that `(red, blue)` is a bijection from `a` onto `b` preserving
/// adjacency in both directions.
pub fn is_iso(a: &IncidenceGraph, b: &IncidenceGraph, red: &[usize], blue: &[usize]) -> bool {
    let bij = |m: &[usize], n: usize| m.len() == n && m.iter().collect::<BTreeSet<_>>().len() == n && m.iter().all(|&x| x < n);
    if a.n_red() != b.n_red() || a.n_blue() != b.n_blue() || !bij(red, a.n_red()) || !bij(blue, a.n_blue()) {
        return false;
    }
    (0..a.n_blue()).all(|e| (0..a.n_red()).all(|v| a.has_edge(e, v) == b.has_edge(blue[e], red[v])))
}

/// Whether two small graphs are isomorphic, by trying all bijections.
pub fn naive_isomorphic(a: &IncidenceGraph, b: &IncidenceGraph) -> bool {
    if a.n_red() != b.n_red() || a.n_blue() != b.n_blue() || a.num_edges() != b.num_edges() {
        return false;
    }
    let mut found = false;
    permutations(a.n_red(), |pr| {
        permutations(a.n_blue(), |pb| {
            found = is_iso(a, b, pr, pb);
            !found
        });
        !found
    });
    found
}

/// Calls `f` on every permutation of `0..n`; stops when `f` returns false.
pub fn permutations(n: usize, mut f: impl FnMut(&[usize]) -> bool) {
    fn rec(p: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if p.len() == n {
            return f(p);
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                p.push(x);
                let go = rec(p, used, n, f);
                p.pop();
                used[x] = false;
                if !go {
                    return false;
                }
            }
        }
        true
    }
    rec(&mut Vec::new(), &mut vec![false; n], n, &mut f);
}

/// Canonical form of a small graph: the lexicographically least adjacency
/// matrix over all row/column permutations.
pub fn canonical(g: &IncidenceGraph) -> (usize, usize, Vec<bool>) {
    let mut best: Option<Vec<bool>> = None;
    permutations(g.n_red(), |pr| {
        permutations(g.n_blue(), |pb| {
            let mut m = vec![false; g.n_red() * g.n_blue()];
            for e in 0..g.n_blue() {
                for v in 0..g.n_red() {
                    m[pb[e] * g.n_red() + pr[v]] = g.has_edge(e, v);
                }
            }
            if best.as_ref().is_none_or(|b| m < *b) {
                best = Some(m);
            }
            true
        });
        true
    });
    (g.n_red(), g.n_blue(), best.unwrap_or_default())
}

/// One representative per isomorphism class of all graphs with exactly
/// `nr` red and `nb` blue nodes (red nodes always have a neighbour).
pub fn iso_classes(nr: usize, nb: usize) -> Vec<IncidenceGraph> {
    let mut seen = BTreeSet::new();
    all_graphs(nr, nb).into_iter().filter(|g| seen.insert(canonical(g))).collect()
}

/// All graphs (not up to isomorphism) with exactly `nr` red and `nb` blue
/// nodes in which every red node has a neighbour.
pub fn all_graphs(nr: usize, nb: usize) -> Vec<IncidenceGraph> {
    let cells = nr * nb;
    (0u64..(1u64 << cells))
        .filter_map(|mask| {
            let edges: Vec<(usize, usize)> = (0..cells).filter(|c| mask >> c & 1 == 1).map(|c| (c / nr, c % nr)).collect();
            let covered = (0..nr).all(|v| edges.iter().any(|&(_, w)| w == v));
            covered.then(|| IncidenceGraph::new(nr, nb, edges).expect("valid edges"))
        })
        .collect()
}

/// Counts homomorphisms by enumerating red maps only: given `h_R`, every
/// blue node `e` of the pattern may go to any host blue node whose
/// neighbourhood contains `h_R(N(e))`, independently of the others.
pub fn hom_by_red_maps(p: &IncidenceGraph, h: &IncidenceGraph) -> u128 {
    let nbrs: Vec<Vec<usize>> = (0..p.n_blue()).map(|e| (0..p.n_red()).filter(|&v| p.has_edge(e, v)).collect()).collect();
    let mut total = 0u128;
    for_each_tuple(p.n_red(), h.n_red(), |hr| {
        let mut prod = 1u128;
        for n in &nbrs {
            let c = (0..h.n_blue()).filter(|&x| n.iter().all(|&v| h.has_edge(x, hr[v]))).count() as u128;
            prod *= c;
            if prod == 0 {
                break;
            }
        }
        total += prod;
        true
    });
    total
}
