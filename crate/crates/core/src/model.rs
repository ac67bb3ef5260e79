//! Hypergraphs, incidence graphs, the bijection between them, and the
//! structural edit operations (edge pumping, vertex pumping, local merging)
//! together with a backtracking isomorphism test.
//!
//! Node ids are dense per colour class: red nodes are `0..n_red`, blue nodes
//! are `0..n_blue`. Neighbourhoods are kept in ordered sets so that iteration
//! order, and therefore every derived output, is deterministic.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// The two node classes of an incidence graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    /// Red nodes stand for hypergraph vertices.
    Red,
    /// Blue nodes stand for hyperedges.
    Blue,
}

/// A bipartite incidence graph with red nodes (vertices) and blue nodes (edges).
///
/// Every red node is adjacent to at least one blue node; blue nodes may be
/// isolated (they represent empty hyperedges). The graph with no nodes at all
/// is a valid value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncidenceGraph {
    n_red: usize,
    blue_nbrs: Vec<BTreeSet<usize>>,
    red_nbrs: Vec<BTreeSet<usize>>,
}

impl IncidenceGraph {
    /// Builds a graph from node counts and `(blue, red)` edge pairs.
    pub fn new(
        n_red: usize,
        n_blue: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut blue_nbrs = vec![BTreeSet::new(); n_blue];
        let mut red_nbrs = vec![BTreeSet::new(); n_red];
        for (b, r) in edges {
            if b >= n_blue {
                return Err(Error::UnknownId(format!("blue node {b}")));
            }
            if r >= n_red {
                return Err(Error::UnknownId(format!("red node {r}")));
            }
            blue_nbrs[b].insert(r);
            red_nbrs[r].insert(b);
        }
        if let Some(v) = red_nbrs.iter().position(|s| s.is_empty()) {
            return Err(Error::InvalidStructure(format!(
                "red node {v} is not adjacent to any blue node"
            )));
        }
        Ok(IncidenceGraph { n_red, blue_nbrs, red_nbrs })
    }

    /// Builds a graph from the neighbourhood of each blue node.
    pub fn from_neighbourhoods(n_red: usize, nbrs: &[BTreeSet<usize>]) -> Result<Self> {
        let edges = nbrs
            .iter()
            .enumerate()
            .flat_map(|(b, s)| s.iter().map(move |&r| (b, r)));
        IncidenceGraph::new(n_red, nbrs.len(), edges)
    }

    /// The graph without any nodes.
    pub fn empty() -> Self {
        IncidenceGraph { n_red: 0, blue_nbrs: Vec::new(), red_nbrs: Vec::new() }
    }

    /// Number of red nodes.
    pub fn n_red(&self) -> usize {
        self.n_red
    }

    /// Number of blue nodes.
    pub fn n_blue(&self) -> usize {
        self.blue_nbrs.len()
    }

    /// True iff the graph has no nodes.
    pub fn is_empty(&self) -> bool {
        self.n_red == 0 && self.blue_nbrs.is_empty()
    }

    /// Red neighbourhood `N(e)` of blue node `e`.
    pub fn nbr(&self, e: usize) -> &BTreeSet<usize> {
        &self.blue_nbrs[e]
    }

    /// Blue neighbourhood of red node `v`.
    pub fn red_nbr(&self, v: usize) -> &BTreeSet<usize> {
        &self.red_nbrs[v]
    }

    /// All blue neighbourhoods, indexed by blue id.
    pub fn neighbourhoods(&self) -> &[BTreeSet<usize>] {
        &self.blue_nbrs
    }

    /// True iff `(e, v)` is an edge.
    pub fn has_edge(&self, e: usize, v: usize) -> bool {
        e < self.n_blue() && self.blue_nbrs[e].contains(&v)
    }

    /// All edges as sorted `(blue, red)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.blue_nbrs
            .iter()
            .enumerate()
            .flat_map(|(b, s)| s.iter().map(move |&r| (b, r)))
            .collect()
    }

    /// Number of edges.
    pub fn num_edges(&self) -> usize {
        self.blue_nbrs.iter().map(BTreeSet::len).sum()
    }

    /// Largest blue neighbourhood size (0 for graphs without blue nodes).
    pub fn max_degree(&self) -> usize {
        self.blue_nbrs.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Union of the neighbourhoods of the given blue nodes.
    pub fn nbr_union<'a>(&self, blues: impl IntoIterator<Item = &'a usize>) -> BTreeSet<usize> {
        blues.into_iter().flat_map(|&e| self.blue_nbrs[e].iter().copied()).collect()
    }

    /// Disjoint union; the nodes of `other` are shifted behind those of `self`.
    pub fn disjoint_union(&self, other: &IncidenceGraph) -> IncidenceGraph {
        let mut nbrs = self.blue_nbrs.clone();
        nbrs.extend(
            other
                .blue_nbrs
                .iter()
                .map(|s| s.iter().map(|&r| r + self.n_red).collect::<BTreeSet<_>>()),
        );
        IncidenceGraph::from_neighbourhoods(self.n_red + other.n_red, &nbrs)
            .expect("disjoint union of valid graphs is valid")
    }

    /// `J + n·s`: appends `n` fresh blue nodes, each with neighbourhood exactly `s`.
    pub fn add_pumped_edges(&self, s: &BTreeSet<usize>, n: usize) -> Result<IncidenceGraph> {
        if let Some(&v) = s.iter().find(|&&v| v >= self.n_red) {
            return Err(Error::UnknownId(format!("red node {v}")));
        }
        let mut nbrs = self.blue_nbrs.clone();
        nbrs.extend(std::iter::repeat(s.clone()).take(n));
        IncidenceGraph::from_neighbourhoods(self.n_red, &nbrs)
    }

    /// Appends blue nodes with the given neighbourhoods.
    pub fn with_extra_blue(&self, extra: &[BTreeSet<usize>]) -> Result<IncidenceGraph> {
        let mut nbrs = self.blue_nbrs.clone();
        nbrs.extend(extra.iter().cloned());
        IncidenceGraph::from_neighbourhoods(self.n_red, &nbrs)
    }
}

/// A finite hypergraph with multiset edge semantics.
///
/// Vertices are `0..n_vertices`; edge `e` has incidence set `edges[e]`. Every
/// vertex lies in some edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n_vertices: usize,
    edges: Vec<BTreeSet<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, checking that every vertex is covered by an edge.
    pub fn new(n_vertices: usize, edges: Vec<BTreeSet<usize>>) -> Result<Self> {
        let mut covered = vec![false; n_vertices];
        for (e, s) in edges.iter().enumerate() {
            for &v in s {
                if v >= n_vertices {
                    return Err(Error::UnknownId(format!("vertex {v} in edge {e}")));
                }
                covered[v] = true;
            }
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(Error::InvalidStructure(format!("vertex {v} lies in no edge")));
        }
        Ok(Hypergraph { n_vertices, edges })
    }

    /// Number of vertices.
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of edges.
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Incidence set of edge `e`.
    pub fn edge(&self, e: usize) -> &BTreeSet<usize> {
        &self.edges[e]
    }

    /// All incidence sets.
    pub fn edges(&self) -> &[BTreeSet<usize>] {
        &self.edges
    }

    /// True iff no two edges carry the same incidence set.
    pub fn is_simple(&self) -> bool {
        let set: BTreeSet<&BTreeSet<usize>> = self.edges.iter().collect();
        set.len() == self.edges.len()
    }
}

/// The incidence graph of a hypergraph: red = vertices, blue = edges.
pub fn to_incidence(h: &Hypergraph) -> IncidenceGraph {
    IncidenceGraph::from_neighbourhoods(h.n_vertices, &h.edges)
        .expect("hypergraph invariants guarantee a valid incidence graph")
}

/// The hypergraph represented by an incidence graph.
pub fn from_incidence(i: &IncidenceGraph) -> Result<Hypergraph> {
    Hypergraph::new(i.n_red(), i.neighbourhoods().to_vec())
}

/// A structural edit on a hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperOp {
    /// Add a fresh vertex to edge `edge` only.
    Pump {
        /// The edge receiving the fresh vertex.
        edge: usize,
    },
    /// Identify vertices `u1` and `u2`, which must both lie in `edge`.
    LocalMerge {
        /// First vertex.
        u1: usize,
        /// Second vertex.
        u2: usize,
        /// Edge witnessing that the two vertices are co-incident.
        edge: usize,
    },
}

/// Result of [`modify_hypergraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modified {
    /// The edited hypergraph.
    pub hypergraph: Hypergraph,
    /// Image of every old vertex under the edit.
    pub vertex_map: Vec<usize>,
    /// The fresh vertex introduced by the edit.
    pub fresh: usize,
}

/// Applies a pumping or local-merging edit.
///
/// Pumping appends the fresh vertex with id `n_vertices`. Local merging keeps
/// the relative order of untouched vertices and appends the merged vertex last;
/// every edge is mapped through the projection.
pub fn modify_hypergraph(h: &Hypergraph, op: HyperOp) -> Result<Modified> {
    match op {
        HyperOp::Pump { edge } => {
            if edge >= h.n_edges() {
                return Err(Error::UnknownId(format!("edge {edge}")));
            }
            let fresh = h.n_vertices;
            let mut edges = h.edges.clone();
            edges[edge].insert(fresh);
            Ok(Modified {
                hypergraph: Hypergraph::new(h.n_vertices + 1, edges)?,
                vertex_map: (0..h.n_vertices).collect(),
                fresh,
            })
        }
        HyperOp::LocalMerge { u1, u2, edge } => {
            if edge >= h.n_edges() {
                return Err(Error::UnknownId(format!("edge {edge}")));
            }
            if u1 == u2 || !h.edges[edge].contains(&u1) || !h.edges[edge].contains(&u2) {
                return Err(Error::Precondition(format!(
                    "vertices {u1} and {u2} are not two distinct vertices of edge {edge}"
                )));
            }
            let mut vertex_map = vec![0; h.n_vertices];
            let mut next = 0;
            for (v, slot) in vertex_map.iter_mut().enumerate() {
                if v != u1 && v != u2 {
                    *slot = next;
                    next += 1;
                }
            }
            let fresh = next;
            vertex_map[u1] = fresh;
            vertex_map[u2] = fresh;
            let edges = h
                .edges
                .iter()
                .map(|s| s.iter().map(|&v| vertex_map[v]).collect())
                .collect();
            Ok(Modified { hypergraph: Hypergraph::new(fresh + 1, edges)?, vertex_map, fresh })
        }
    }
}

/// An isomorphism witness: images of red and of blue nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    /// `red[v]` is the image of red node `v`.
    pub red: Vec<usize>,
    /// `blue[e]` is the image of blue node `e`.
    pub blue: Vec<usize>,
}

/// Colour refinement run jointly on both graphs so that colours are comparable.
fn refine(a: &IncidenceGraph, b: &IncidenceGraph) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    // colours[g][0] = red colours, colours[g][1] = blue colours
    let graphs = [a, b];
    let mut red: Vec<Vec<usize>> = graphs.iter().map(|g| vec![0; g.n_red()]).collect();
    let mut blue: Vec<Vec<usize>> = graphs.iter().map(|g| vec![1; g.n_blue()]).collect();
    let mut n_colours = 2;
    loop {
        let mut dict: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut new_red = Vec::new();
        let mut new_blue = Vec::new();
        for (gi, g) in graphs.iter().enumerate() {
            let mut rs = Vec::with_capacity(g.n_red());
            for v in 0..g.n_red() {
                let mut sig: Vec<usize> = g.red_nbr(v).iter().map(|&e| blue[gi][e]).collect();
                sig.sort_unstable();
                let len = dict.len();
                rs.push(*dict.entry((red[gi][v], sig)).or_insert(len));
            }
            let mut bs = Vec::with_capacity(g.n_blue());
            for e in 0..g.n_blue() {
                let mut sig: Vec<usize> = g.nbr(e).iter().map(|&v| red[gi][v]).collect();
                sig.sort_unstable();
                let len = dict.len();
                bs.push(*dict.entry((blue[gi][e] + usize::MAX / 2, sig)).or_insert(len));
            }
            new_red.push(rs);
            new_blue.push(bs);
        }
        let count = dict.len();
        red = new_red;
        blue = new_blue;
        if count == n_colours {
            return (red, blue);
        }
        n_colours = count;
    }
}

fn histogram(cols: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &c in cols {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Decides isomorphism by backtracking over red images with colour-refinement
/// pruning; blue images are then matched by neighbourhood multisets.
///
/// Returns `Ok(None)` when the graphs are not isomorphic. Fails with
/// [`Error::CapExceeded`] when either colour class exceeds `cap` nodes.
pub fn isomorphic(a: &IncidenceGraph, b: &IncidenceGraph, cap: usize) -> Result<Option<Isomorphism>> {
    for g in [a, b] {
        if g.n_red() > cap || g.n_blue() > cap {
            return Err(Error::CapExceeded(format!(
                "isomorphism test limited to {cap} nodes per colour class"
            )));
        }
    }
    if a.n_red() != b.n_red() || a.n_blue() != b.n_blue() || a.num_edges() != b.num_edges() {
        return Ok(None);
    }
    let (red_cols, blue_cols) = refine(a, b);
    if histogram(&red_cols[0]) != histogram(&red_cols[1])
        || histogram(&blue_cols[0]) != histogram(&blue_cols[1])
    {
        return Ok(None);
    }
    let n = a.n_red();
    // co-occurrence counts: how many blue nodes contain both u and v
    let co = |g: &IncidenceGraph| {
        let mut m = vec![vec![0usize; g.n_red()]; g.n_red()];
        for s in g.neighbourhoods() {
            for &u in s {
                for &v in s {
                    m[u][v] += 1;
                }
            }
        }
        m
    };
    let (co_a, co_b) = (co(a), co(b));
    let target: BTreeMap<BTreeSet<usize>, Vec<usize>> = {
        let mut t: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
        for (e, s) in b.neighbourhoods().iter().enumerate() {
            t.entry(s.clone()).or_default().push(e);
        }
        t
    };
    struct Search<'x> {
        a: &'x IncidenceGraph,
        red_cols: &'x [Vec<usize>],
        blue_cols: &'x [Vec<usize>],
        co_a: Vec<Vec<usize>>,
        co_b: Vec<Vec<usize>>,
        target: BTreeMap<BTreeSet<usize>, Vec<usize>>,
        map: Vec<usize>,
        used: Vec<bool>,
    }
    impl Search<'_> {
        fn finish(&self) -> Option<Vec<usize>> {
            let mut pools = self.target.clone();
            let mut blue = vec![0; self.a.n_blue()];
            for (e, s) in self.a.neighbourhoods().iter().enumerate() {
                let img: BTreeSet<usize> = s.iter().map(|&v| self.map[v]).collect();
                let pool = pools.get_mut(&img)?;
                let pos = pool.iter().position(|&x| self.blue_cols[1][x] == self.blue_cols[0][e])?;
                blue[e] = pool.remove(pos);
            }
            Some(blue)
        }
        fn go(&mut self, v: usize) -> Option<Vec<usize>> {
            let n = self.map.len();
            if v == n {
                return self.finish();
            }
            for w in 0..n {
                if self.used[w] || self.red_cols[1][w] != self.red_cols[0][v] {
                    continue;
                }
                if self.co_a[v][v] != self.co_b[w][w] {
                    continue;
                }
                if (0..v).any(|u| self.co_a[u][v] != self.co_b[self.map[u]][w]) {
                    continue;
                }
                self.map[v] = w;
                self.used[w] = true;
                if let Some(res) = self.go(v + 1) {
                    return Some(res);
                }
                self.used[w] = false;
            }
            None
        }
    }
    let mut search = Search {
        a,
        red_cols: &red_cols,
        blue_cols: &blue_cols,
        co_a,
        co_b,
        target,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    Ok(search.go(0).map(|blue| Isomorphism { red: search.map.clone(), blue }))
}

/// Checks that `iso` is an isomorphism from `a` to `b`.
pub fn is_isomorphism(a: &IncidenceGraph, b: &IncidenceGraph, iso: &Isomorphism) -> bool {
    let bij = |m: &[usize], n: usize| {
        m.len() == n && m.iter().all(|&x| x < n) && m.iter().collect::<BTreeSet<_>>().len() == n
    };
    if !bij(&iso.red, b.n_red()) || !bij(&iso.blue, b.n_blue()) || a.n_red() != b.n_red() {
        return false;
    }
    (0..a.n_blue()).all(|e| {
        let img: BTreeSet<usize> = a.nbr(e).iter().map(|&v| iso.red[v]).collect();
        &img == b.nbr(iso.blue[e])
    })
}
