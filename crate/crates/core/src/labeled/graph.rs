//! k-labeled incidence graphs and their operations: graphs defined by guard
//! functions, reclaiming and reseating labels, glueing, and transitions.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::guard::GuardFunction;
use crate::model::{Color, IncidenceGraph};

/// An incidence graph with partial red labels `r`, blue labels `b`, and a guard
/// function `g` with `Dom(g) = Dom(r)`.
///
/// Red labels `i` and blue labels `j` are positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    /// Underlying incidence graph.
    pub graph: IncidenceGraph,
    /// Red labels: index → red node.
    pub r: BTreeMap<usize, usize>,
    /// Blue labels: index → blue node.
    pub b: BTreeMap<usize, usize>,
    /// Guard function.
    pub g: GuardFunction,
}

/// Node maps from an input graph of a glue into the glued graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    /// Image of every red node.
    pub red: Vec<usize>,
    /// Image of every blue node.
    pub blue: Vec<usize>,
}

/// Result of [`glue`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueResult {
    /// The glued graph.
    pub graph: LabeledGraph,
    /// Projection of the first input.
    pub pi1: Projection,
    /// Projection of the second input.
    pub pi2: Projection,
    /// Red indices on which the two guard functions disagreed (first input won).
    pub guard_conflicts: Vec<usize>,
}

impl LabeledGraph {
    /// Builds a labeled graph, checking label targets and `Dom(g) = Dom(r)`.
    pub fn new(
        graph: IncidenceGraph,
        r: BTreeMap<usize, usize>,
        b: BTreeMap<usize, usize>,
        g: GuardFunction,
    ) -> Result<Self> {
        let l = LabeledGraph { graph, r, b, g };
        l.check()?;
        Ok(l)
    }

    /// Checks the invariants of a labeled graph.
    pub fn check(&self) -> Result<()> {
        if let Some((i, v)) = self.r.iter().find(|(&i, &v)| i == 0 || v >= self.graph.n_red()) {
            return Err(Error::InvalidStructure(format!("red label {i} -> {v} is invalid")));
        }
        if let Some((j, e)) = self.b.iter().find(|(&j, &e)| j == 0 || e >= self.graph.n_blue()) {
            return Err(Error::InvalidStructure(format!("blue label {j} -> {e} is invalid")));
        }
        if self.g.dom() != self.domr() {
            return Err(Error::InvalidStructure(format!(
                "guard domain {:?} differs from red label domain {:?}",
                self.g.dom(),
                self.domr()
            )));
        }
        if self.g.iter().any(|(_, j)| j == 0) {
            return Err(Error::InvalidStructure("guard values must be positive".into()));
        }
        Ok(())
    }

    /// A graph without labels.
    pub fn label_free(graph: IncidenceGraph) -> Self {
        LabeledGraph { graph, r: BTreeMap::new(), b: BTreeMap::new(), g: GuardFunction::empty() }
    }

    /// The empty label-free graph.
    pub fn empty() -> Self {
        LabeledGraph::label_free(IncidenceGraph::empty())
    }

    /// `Dom(r)`.
    pub fn domr(&self) -> BTreeSet<usize> {
        self.r.keys().copied().collect()
    }

    /// `Dom(b)`.
    pub fn domb(&self) -> BTreeSet<usize> {
        self.b.keys().copied().collect()
    }

    /// `Img(r)`.
    pub fn imgr(&self) -> BTreeSet<usize> {
        self.r.values().copied().collect()
    }

    /// `Img(b)`.
    pub fn imgb(&self) -> BTreeSet<usize> {
        self.b.values().copied().collect()
    }

    /// True iff no labels are present.
    pub fn is_label_free(&self) -> bool {
        self.r.is_empty() && self.b.is_empty()
    }

    /// True iff the graph has real guards with respect to its own guard function.
    pub fn has_own_real_guards(&self) -> bool {
        has_real_guards(self, &self.g)
    }
}

/// The graph `L_f` defined by a guard function: one red node per index of
/// `Dom(f)`, one blue node per index of `Img(f)`, and edges `(e_{f(i)}, v_i)`.
pub fn from_guard_fn(f: &GuardFunction) -> Result<LabeledGraph> {
    if f.is_empty() {
        return Err(Error::Precondition("guard function with empty domain".into()));
    }
    let reds: Vec<usize> = f.dom().into_iter().collect();
    let blues: Vec<usize> = f.img().into_iter().collect();
    let bpos = |j: usize| blues.iter().position(|&x| x == j).unwrap();
    let edges: Vec<(usize, usize)> = reds.iter().enumerate().map(|(v, &i)| (bpos(f.get(i).unwrap()), v)).collect();
    let graph = IncidenceGraph::new(reds.len(), blues.len(), edges)?;
    let r = reds.iter().enumerate().map(|(v, &i)| (i, v)).collect();
    let b = blues.iter().enumerate().map(|(e, &j)| (j, e)).collect();
    LabeledGraph::new(graph, r, b, f.clone())
}

/// Removes the labels `xs` of the given colour; for red labels the guard
/// function loses the same indices. The underlying graph is unchanged.
pub fn reclaim(l: &LabeledGraph, color: Color, xs: &BTreeSet<usize>) -> Result<LabeledGraph> {
    let mut out = l.clone();
    match color {
        Color::Red => {
            if let Some(i) = xs.iter().find(|i| !l.r.contains_key(i)) {
                return Err(Error::UnknownIndex(format!("red label {i}")));
            }
            out.r.retain(|i, _| !xs.contains(i));
            out.g = l.g.minus(xs);
        }
        Color::Blue => {
            if let Some(j) = xs.iter().find(|j| !l.b.contains_key(j)) {
                return Err(Error::UnknownIndex(format!("blue label {j}")));
            }
            out.b.retain(|j, _| !xs.contains(j));
        }
    }
    Ok(out)
}

/// Moves labels `xs` (ascending) to the given target nodes, positionally.
///
/// Labels not yet present are created; the guard function is left untouched,
/// so a red reseat onto fresh indices yields a graph that is meant only as a
/// homomorphism target.
pub fn reseat(l: &LabeledGraph, color: Color, xs: &[usize], targets: &[usize]) -> Result<LabeledGraph> {
    if xs.len() != targets.len() {
        return Err(Error::Precondition(format!(
            "{} labels but {} targets",
            xs.len(),
            targets.len()
        )));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("label list must be strictly ascending".into()));
    }
    let mut out = l.clone();
    let (map, n) = match color {
        Color::Red => (&mut out.r, l.graph.n_red()),
        Color::Blue => (&mut out.b, l.graph.n_blue()),
    };
    for (&x, &t) in xs.iter().zip(targets) {
        if t >= n {
            return Err(Error::SortMismatch(format!("{t} is not a {color:?} node")));
        }
        map.insert(x, t);
    }
    Ok(out)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut y = x;
        while self.0[y] != root {
            let next = self.0[y];
            self.0[y] = root;
            y = next;
        }
        root
    }

    /// Unites the classes, keeping the smaller representative.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Quotient of `0..n1+n2` by the given pairs; returns the dense class id of every element.
fn quotient(n1: usize, n2: usize, pairs: impl Iterator<Item = (usize, usize)>) -> (Vec<usize>, usize) {
    let mut uf = UnionFind((0..n1 + n2).collect());
    for (a, b) in pairs {
        uf.union(a, n1 + b);
    }
    let reps: Vec<usize> = (0..n1 + n2).map(|x| uf.find(x)).collect();
    let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in &reps {
        let len = dense.len();
        dense.entry(r).or_insert(len);
    }
    // representatives are visited in increasing order because every
    // representative is the minimum of its class
    (reps.iter().map(|r| dense[r]).collect(), dense.len())
}

/// Glues two labeled graphs: disjoint union, then nodes sharing a red label
/// (resp. blue label) are identified. Labels of `l1` take precedence, and the
/// guard function is `g1 ∪ g2` with `g1` winning on conflicts, which are
/// reported in the result.
pub fn glue(l1: &LabeledGraph, l2: &LabeledGraph) -> GlueResult {
    let (n1r, n2r) = (l1.graph.n_red(), l2.graph.n_red());
    let (n1b, n2b) = (l1.graph.n_blue(), l2.graph.n_blue());
    let red_pairs = l1.r.iter().filter_map(|(i, &v)| l2.r.get(i).map(|&w| (v, w)));
    let (red_cls, n_red) = quotient(n1r, n2r, red_pairs);
    let blue_pairs = l1.b.iter().filter_map(|(j, &e)| l2.b.get(j).map(|&f| (e, f)));
    let (blue_cls, n_blue) = quotient(n1b, n2b, blue_pairs);
    let pi1 = Projection { red: red_cls[..n1r].to_vec(), blue: blue_cls[..n1b].to_vec() };
    let pi2 = Projection { red: red_cls[n1r..].to_vec(), blue: blue_cls[n1b..].to_vec() };
    let mut edges = Vec::new();
    for (b, r) in l1.graph.edges() {
        edges.push((pi1.blue[b], pi1.red[r]));
    }
    for (b, r) in l2.graph.edges() {
        edges.push((pi2.blue[b], pi2.red[r]));
    }
    let graph = IncidenceGraph::new(n_red, n_blue, edges).expect("glue of valid graphs is valid");
    let mut r: BTreeMap<usize, usize> = l2.r.iter().map(|(&i, &v)| (i, pi2.red[v])).collect();
    r.extend(l1.r.iter().map(|(&i, &v)| (i, pi1.red[v])));
    let mut b: BTreeMap<usize, usize> = l2.b.iter().map(|(&j, &e)| (j, pi2.blue[e])).collect();
    b.extend(l1.b.iter().map(|(&j, &e)| (j, pi1.blue[e])));
    let g = l1.g.union_prec(&l2.g);
    GlueResult {
        graph: LabeledGraph { graph, r, b, g },
        pi1,
        pi2,
        guard_conflicts: l1.g.conflicts(&l2.g),
    }
}

/// Checks that `f` is a transition for `g`: `∅ ≠ Dom(f) ⊆ Dom(g)` and every
/// `i ∈ Dom(g)` with `g(i) ∈ Img(f)` lies in `Dom(f)`.
pub fn check_transition(g: &GuardFunction, f: &GuardFunction) -> Result<()> {
    if f.is_empty() {
        return Err(Error::NotATransition { index: 0, reason: "empty domain".into() });
    }
    if let Some(i) = f.dom().into_iter().find(|&i| g.get(i).is_none()) {
        return Err(Error::NotATransition { index: i, reason: "index outside Dom(g)".into() });
    }
    let img = f.img();
    if let Some((i, _)) = g.iter().find(|&(i, j)| img.contains(&j) && f.get(i).is_none()) {
        return Err(Error::NotATransition {
            index: i,
            reason: "guard colour reused by the transition but index not re-guarded".into(),
        });
    }
    Ok(())
}

/// The blue labels removed by a transition: `Img(g) ∩ Img(f) ∩ Dom(b)`.
pub fn transition_removed(l: &LabeledGraph, f: &GuardFunction) -> BTreeSet<usize> {
    let (img_g, img_f) = (l.g.img(), f.img());
    l.domb().into_iter().filter(|j| img_g.contains(j) && img_f.contains(j)).collect()
}

/// Applies a transition and also returns the glue projections.
pub fn apply_transition_full(l: &LabeledGraph, f: &GuardFunction) -> Result<GlueResult> {
    check_transition(&l.g, f)?;
    let lf = from_guard_fn(f)?;
    let reclaimed = reclaim(l, Color::Blue, &transition_removed(l, f))?;
    Ok(glue(&lf, &reclaimed))
}

/// Applies the transition `f`: `glue(L_f, reclaim_B(L, Img(g) ∩ Img(f) ∩ Dom(b)))`.
pub fn apply_transition(l: &LabeledGraph, f: &GuardFunction) -> Result<LabeledGraph> {
    Ok(apply_transition_full(l, f)?.graph)
}

/// True iff every `i ∈ Dom(f)` is a red label, `f(i)` is a blue label, and the
/// two labeled nodes are adjacent.
pub fn has_real_guards(l: &LabeledGraph, f: &GuardFunction) -> bool {
    f.iter().all(|(i, j)| match (l.r.get(&i), l.b.get(&j)) {
        (Some(&v), Some(&e)) => l.graph.has_edge(e, v),
        _ => false,
    })
}
