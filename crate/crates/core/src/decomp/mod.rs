//! Generalised and entangled hypertree decompositions of incidence graphs:
//! the data type, validation against the five decomposition conditions,
//! width, exact and greedy search, binary-monotone normalization, and the
//! pumping-based transformation of a generalised decomposition into an
//! entangled one.

mod normalize;
mod pump;
mod search;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

pub use normalize::{is_binary_monotone, normalize_binary_monotone};
pub use pump::{find_pump_count, ghd_to_ehd, transform_local_merge, transform_pump};
pub use search::{search_width, search_width_with, Engine};

use crate::error::{Error, Result};
use crate::model::IncidenceGraph;

/// Which family of decompositions is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecompMode {
    /// Generalised hypertree decomposition (conditions 1–3).
    Ghd,
    /// Entangled hypertree decomposition (conditions 1–5).
    Ehd,
}

/// A tree with a red bag and a blue cover at every tree node.
///
/// Tree nodes are `0..n_nodes()`. The optional root is used by the rooted
/// algorithms (normalization, certificate extraction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomp {
    /// Tree adjacency.
    pub adj: Vec<BTreeSet<usize>>,
    /// Bag (set of red nodes) of each tree node.
    pub bag: Vec<BTreeSet<usize>>,
    /// Cover (set of blue nodes) of each tree node.
    pub cover: Vec<BTreeSet<usize>>,
    /// Optional root.
    pub root: Option<usize>,
}

impl TreeDecomp {
    /// Builds a decomposition and checks that the tree is connected and acyclic.
    pub fn new(
        edges: &[(usize, usize)],
        bag: Vec<BTreeSet<usize>>,
        cover: Vec<BTreeSet<usize>>,
        root: Option<usize>,
    ) -> Result<Self> {
        let n = bag.len();
        if cover.len() != n {
            return Err(Error::InvalidStructure("bag and cover must be defined on the same nodes".into()));
        }
        let mut adj = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidStructure(format!("bad tree edge ({a}, {b})")));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let d = TreeDecomp { adj, bag, cover, root };
        d.check_tree()?;
        Ok(d)
    }

    /// A single tree node.
    pub fn single(bag: BTreeSet<usize>, cover: BTreeSet<usize>) -> Self {
        TreeDecomp { adj: vec![BTreeSet::new()], bag: vec![bag], cover: vec![cover], root: Some(0) }
    }

    /// Checks the tree invariants: at least one node, connected, acyclic.
    pub fn check_tree(&self) -> Result<()> {
        let n = self.bag.len();
        if n == 0 {
            return Err(Error::InvalidStructure("a decomposition needs at least one tree node".into()));
        }
        if self.adj.len() != n || self.cover.len() != n {
            return Err(Error::InvalidStructure("inconsistent node counts".into()));
        }
        let n_edges: usize = self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2;
        if n_edges != n - 1 || self.reachable(0, &|_| true).len() != n {
            return Err(Error::InvalidStructure("tree must be connected and acyclic".into()));
        }
        if let Some(r) = self.root {
            if r >= n {
                return Err(Error::InvalidStructure(format!("root {r} is not a tree node")));
            }
        }
        Ok(())
    }

    /// Number of tree nodes.
    pub fn n_nodes(&self) -> usize {
        self.bag.len()
    }

    /// Tree edges `(a, b)` with `a < b`, sorted.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, s) in self.adj.iter().enumerate() {
            for &b in s {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Adds a node and returns its id.
    pub fn add_node(&mut self, bag: BTreeSet<usize>, cover: BTreeSet<usize>) -> usize {
        self.adj.push(BTreeSet::new());
        self.bag.push(bag);
        self.cover.push(cover);
        self.bag.len() - 1
    }

    /// Adds a tree edge.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    /// Removes a tree edge.
    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a].remove(&b);
        self.adj[b].remove(&a);
    }

    /// Maximum cover size.
    pub fn width(&self) -> usize {
        width(self)
    }

    /// Nodes reachable from `start` through nodes satisfying `keep` (start included if kept).
    fn reachable(&self, start: usize, keep: &dyn Fn(usize) -> bool) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        if !keep(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(t) = queue.pop_front() {
            for &u in &self.adj[t] {
                if keep(u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Number of connected components of the subgraph induced by `nodes`.
    pub fn components(&self, nodes: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut rest = nodes.clone();
        let mut out = Vec::new();
        while let Some(&s) = rest.iter().next() {
            let comp = self.reachable(s, &|t| nodes.contains(&t));
            for t in &comp {
                rest.remove(t);
            }
            out.push(comp);
        }
        out
    }

    /// Parent array and top-down (BFS) order when rooted at `root`.
    pub fn rooted(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let n = self.n_nodes();
        let mut parent = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(t) = queue.pop_front() {
            order.push(t);
            for &u in &self.adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(t);
                    queue.push_back(u);
                }
            }
        }
        (parent, order)
    }

    /// Children of `t` when rooted at `root` (ascending id).
    pub fn children(&self, root: usize) -> Vec<Vec<usize>> {
        let (parent, _) = self.rooted(root);
        let mut ch = vec![Vec::new(); self.n_nodes()];
        for (t, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(t);
            }
        }
        ch
    }
}

/// Maximum `|cover(t)|` over all tree nodes.
pub fn width(d: &TreeDecomp) -> usize {
    d.cover.iter().map(BTreeSet::len).max().unwrap_or(0)
}

/// A failed decomposition condition together with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Condition 1: no tree node has `e` in its cover and `N(e)` in its bag.
    Completeness {
        /// The blue node.
        blue: usize,
    },
    /// Condition 2: the tree nodes whose bag contains `red` are disconnected.
    RedConnectedness {
        /// The red node.
        red: usize,
        /// Number of components.
        components: usize,
    },
    /// Condition 3: `red` is in `bag(node)` but not covered by `cover(node)`.
    BagCovering {
        /// The tree node.
        node: usize,
        /// The uncovered red node.
        red: usize,
    },
    /// Condition 4: the bag misses red nodes adjacent to its cover.
    PreciseCoverage {
        /// The tree node.
        node: usize,
        /// Red nodes adjacent to the cover but absent from the bag.
        missing: BTreeSet<usize>,
    },
    /// Condition 5: the tree nodes whose cover contains `blue` are disconnected.
    BlueConnectedness {
        /// The blue node.
        blue: usize,
        /// Number of components.
        components: usize,
    },
}

impl Violation {
    /// Number of the violated condition (1–5).
    pub fn condition(&self) -> u8 {
        match self {
            Violation::Completeness { .. } => 1,
            Violation::RedConnectedness { .. } => 2,
            Violation::BagCovering { .. } => 3,
            Violation::PreciseCoverage { .. } => 4,
            Violation::BlueConnectedness { .. } => 5,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Completeness { blue } => {
                write!(f, "condition 1 (completeness): blue node {blue} is not covered together with its neighbourhood")
            }
            Violation::RedConnectedness { red, components } => {
                write!(f, "condition 2 (red connectedness): red node {red} occurs in {components} disconnected parts")
            }
            Violation::BagCovering { node, red } => {
                write!(f, "condition 3 (covering of bags): red node {red} in bag of tree node {node} is not covered")
            }
            Violation::PreciseCoverage { node, missing } => {
                write!(f, "condition 4 (precise coverage): bag of tree node {node} misses {missing:?}")
            }
            Violation::BlueConnectedness { blue, components } => {
                write!(f, "condition 5 (blue connectedness): blue node {blue} occurs in {components} disconnected parts")
            }
        }
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// True iff no violations were found.
    pub valid: bool,
    /// All violations, ordered by condition.
    pub violations: Vec<Violation>,
}

/// Validates `d` as a decomposition of `i` in the given mode.
///
/// Fails only when `d` is structurally malformed or mentions ids that do not
/// exist in `i`; failing decomposition conditions are reported in the result.
pub fn validate(d: &TreeDecomp, i: &IncidenceGraph, mode: DecompMode) -> Result<ValidationReport> {
    d.check_tree()?;
    for t in 0..d.n_nodes() {
        if let Some(v) = d.bag[t].iter().find(|&&v| v >= i.n_red()) {
            return Err(Error::UnknownId(format!("red node {v} in bag of tree node {t}")));
        }
        if let Some(e) = d.cover[t].iter().find(|&&e| e >= i.n_blue()) {
            return Err(Error::UnknownId(format!("blue node {e} in cover of tree node {t}")));
        }
    }
    let mut violations = Vec::new();
    for e in 0..i.n_blue() {
        let ok = (0..d.n_nodes()).any(|t| d.cover[t].contains(&e) && i.nbr(e).is_subset(&d.bag[t]));
        if !ok {
            violations.push(Violation::Completeness { blue: e });
        }
    }
    for v in 0..i.n_red() {
        let nodes: BTreeSet<usize> = (0..d.n_nodes()).filter(|&t| d.bag[t].contains(&v)).collect();
        let c = d.components(&nodes).len();
        if c > 1 {
            violations.push(Violation::RedConnectedness { red: v, components: c });
        }
    }
    for t in 0..d.n_nodes() {
        let covered = i.nbr_union(&d.cover[t]);
        for &v in d.bag[t].difference(&covered) {
            violations.push(Violation::BagCovering { node: t, red: v });
        }
    }
    if mode == DecompMode::Ehd {
        for t in 0..d.n_nodes() {
            let covered = i.nbr_union(&d.cover[t]);
            let missing: BTreeSet<usize> = covered.difference(&d.bag[t]).copied().collect();
            if !missing.is_empty() {
                violations.push(Violation::PreciseCoverage { node: t, missing });
            }
        }
        for e in 0..i.n_blue() {
            let nodes: BTreeSet<usize> = (0..d.n_nodes()).filter(|&t| d.cover[t].contains(&e)).collect();
            let c = d.components(&nodes).len();
            if c > 1 {
                violations.push(Violation::BlueConnectedness { blue: e, components: c });
            }
        }
    }
    Ok(ValidationReport { valid: violations.is_empty(), violations })
}

/// Convenience: true iff `d` is a valid decomposition of `i` in `mode`.
pub fn is_valid(d: &TreeDecomp, i: &IncidenceGraph, mode: DecompMode) -> bool {
    validate(d, i, mode).map(|r| r.valid).unwrap_or(false)
}
