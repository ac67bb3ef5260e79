//! Width search.
//!
//! *Generalised decompositions.* A complete generalised decomposition of width
//! `≤ k` exists iff the primal graph of the red nodes has a tree decomposition
//! whose bags each have an edge cover of at most `k` blue nodes (completeness
//! is then restored with one leaf per blue node). Since subsets of a coverable
//! bag stay coverable, it suffices to search elimination orderings; the exact
//! engine runs the classic dynamic program over sets of eliminated vertices.
//!
//! *Entangled decompositions.* The bag of every node is fixed by its cover,
//! and an entangled decomposition is exactly a join tree of the sets
//! `cover(t) ∪ N(cover(t))` (over red and blue nodes together) whose covers
//! contain every blue node. Removing a node whose cover is contained in a
//! neighbour's cover keeps all conditions, so reduced decompositions have
//! pairwise incomparable covers and at most `|blue|` nodes, and each node
//! introduces (in top-down order) a blue node not seen before. The exact
//! engine grows such trees node by node, checking the running-intersection
//! property at every step, and memoizes failed families.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{is_valid, DecompMode, TreeDecomp};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::homcount::{bits, mask};
use crate::model::IncidenceGraph;

/// Search strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Complete search: returns a decomposition iff one of width `≤ k` exists.
    Exact,
    /// Heuristic: a returned decomposition is valid, but `None` proves nothing.
    Greedy,
}

/// Searches a decomposition of width `≤ k` with default caps.
pub fn search_width(i: &IncidenceGraph, k: usize, mode: DecompMode, engine: Engine) -> Result<Option<TreeDecomp>> {
    search_width_with(i, k, mode, engine, &Caps::default())
}

/// Searches a decomposition of width `≤ k`.
pub fn search_width_with(
    i: &IncidenceGraph,
    k: usize,
    mode: DecompMode,
    engine: Engine,
    caps: &Caps,
) -> Result<Option<TreeDecomp>> {
    if i.n_red() > 128 || i.n_blue() > 128 {
        return Err(Error::CapExceeded("width search is limited to 128 nodes per class".into()));
    }
    if engine == Engine::Exact && (i.n_blue() > caps.search_blue || i.n_red() > caps.search_red) {
        return Err(Error::CapExceeded(format!(
            "exact search accepts at most {} blue and {} red nodes",
            caps.search_blue, caps.search_red
        )));
    }
    if i.n_blue() == 0 {
        // only the empty graph has no blue nodes
        return Ok(Some(TreeDecomp::single(BTreeSet::new(), BTreeSet::new())));
    }
    if k == 0 {
        return Ok(None);
    }
    let out = match mode {
        DecompMode::Ghd => ghd_search(i, k, engine),
        DecompMode::Ehd => ehd_search(i, k, engine),
    };
    if let Some(d) = &out {
        debug_assert!(is_valid(d, i, mode));
        if !is_valid(d, i, mode) || d.width() > k {
            return Err(Error::Assertion("width search produced an invalid decomposition".into()));
        }
    }
    Ok(out)
}

/// All subsets of `0..n` of size `1..=k`, ordered by size then lexicographically.
fn small_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=k.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.clone());
            let mut p = size;
            while p > 0 && idx[p - 1] == n - size + p - 1 {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            idx[p - 1] += 1;
            for q in p..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    out
}

// ---------------------------------------------------------------- ghd

struct CoverOracle<'a> {
    subsets: Vec<(u128, u128)>, // (blue mask, red union mask)
    cache: HashMap<u128, Option<u128>>,
    _i: &'a IncidenceGraph,
}

impl<'a> CoverOracle<'a> {
    fn new(i: &'a IncidenceGraph, k: usize) -> Self {
        let subsets = small_subsets(i.n_blue(), k)
            .into_iter()
            .map(|s| {
                let bm = s.iter().fold(0u128, |m, &e| m | (1u128 << e));
                let rm = s.iter().fold(0u128, |m, &e| m | mask(i.nbr(e)));
                (bm, rm)
            })
            .collect();
        CoverOracle { subsets, cache: HashMap::new(), _i: i }
    }

    /// A smallest (then lexicographically least) set of at most `k` blue nodes covering `reds`.
    fn cover(&mut self, reds: u128) -> Option<u128> {
        if let Some(&c) = self.cache.get(&reds) {
            return c;
        }
        let c = self.subsets.iter().find(|(_, rm)| reds & !rm == 0).map(|(bm, _)| *bm);
        self.cache.insert(reds, c);
        c
    }
}

fn to_set(m: u128) -> BTreeSet<usize> {
    bits(m).collect()
}

fn primal(i: &IncidenceGraph) -> Vec<u128> {
    let mut adj = vec![0u128; i.n_red()];
    for s in i.neighbourhoods() {
        let m = mask(s);
        for &v in s {
            adj[v] |= m & !(1u128 << v);
        }
    }
    adj
}

/// Red nodes outside `elim ∪ {v}` reachable from `v` through `elim`.
fn elimination_bag(adj: &[u128], elim: u128, v: usize) -> u128 {
    let mut seen = 1u128 << v;
    let mut frontier = 1u128 << v;
    let mut out = 0u128;
    while frontier != 0 {
        let mut next = 0u128;
        for u in bits(frontier) {
            next |= adj[u];
        }
        next &= !seen;
        seen |= next;
        out |= next & !elim;
        frontier = next & elim;
    }
    out
}

fn ghd_search(i: &IncidenceGraph, k: usize, engine: Engine) -> Option<TreeDecomp> {
    let n = i.n_red();
    let adj = primal(i);
    let mut oracle = CoverOracle::new(i, k);
    let order: Vec<usize> = match engine {
        Engine::Exact => {
            // feasible[S]: the vertices of S can be eliminated first, in some order
            let full = (1usize << n) - 1;
            let mut choice = vec![usize::MAX; 1 << n];
            let mut feasible = vec![false; 1 << n];
            feasible[0] = true;
            for s in 1..=full {
                for v in 0..n {
                    if s & (1 << v) == 0 {
                        continue;
                    }
                    let prev = s & !(1 << v);
                    if !feasible[prev] {
                        continue;
                    }
                    let bag = elimination_bag(&adj, prev as u128, v) | (1u128 << v);
                    if oracle.cover(bag).is_some() {
                        feasible[s] = true;
                        choice[s] = v;
                        break;
                    }
                }
            }
            if !feasible[full] {
                return None;
            }
            let mut order = Vec::with_capacity(n);
            let mut s = full;
            while s != 0 {
                let v = choice[s];
                order.push(v);
                s &= !(1 << v);
            }
            order.reverse();
            order
        }
        Engine::Greedy => {
            // minimum fill-in-free degree heuristic
            let mut elim = 0u128;
            let mut order = Vec::with_capacity(n);
            for _ in 0..n {
                let v = (0..n)
                    .filter(|&v| elim & (1u128 << v) == 0)
                    .min_by_key(|&v| (elimination_bag(&adj, elim, v).count_ones(), v))?;
                let bag = elimination_bag(&adj, elim, v) | (1u128 << v);
                oracle.cover(bag)?;
                order.push(v);
                elim |= 1u128 << v;
            }
            order
        }
    };
    Some(build_from_order(i, &adj, &order, &mut oracle))
}

fn build_from_order(i: &IncidenceGraph, adj: &[u128], order: &[usize], oracle: &mut CoverOracle) -> TreeDecomp {
    let n = order.len();
    let mut pos = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut bags = Vec::with_capacity(n);
    let mut elim = 0u128;
    for &v in order {
        bags.push(elimination_bag(adj, elim, v) | (1u128 << v));
        elim |= 1u128 << v;
    }
    // elimination-tree parents; tree edges whose bags are nested are contracted
    let parent: Vec<Option<usize>> = order
        .iter()
        .enumerate()
        .map(|(p, &v)| bits(bags[p] & !(1u128 << v)).min_by_key(|&u| pos[u]).map(|u| pos[u]))
        .collect();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(group: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while group[r] != r {
            r = group[r];
        }
        group[x] = r;
        r
    }
    let mut gbag = bags.clone();
    for p in 0..n {
        let Some(q) = parent[p] else { continue };
        let (a, b) = (find(&mut group, p), find(&mut group, q));
        if gbag[a] & !gbag[b] == 0 {
            group[a] = b;
        } else if gbag[b] & !gbag[a] == 0 {
            group[b] = a;
            gbag[a] |= gbag[b];
        }
    }
    let mut node_of = vec![usize::MAX; n];
    let mut d = TreeDecomp { adj: Vec::new(), bag: Vec::new(), cover: Vec::new(), root: None };
    for p in 0..n {
        if find(&mut group, p) == p {
            let c = oracle.cover(gbag[p]).expect("bags along a feasible order are coverable");
            node_of[p] = d.add_node(to_set(gbag[p]), to_set(c));
        }
    }
    let mut roots = Vec::new();
    let mut has_parent = vec![false; n];
    for p in 0..n {
        if let Some(q) = parent[p] {
            let (a, b) = (find(&mut group, p), find(&mut group, q));
            if a != b {
                d.add_edge(node_of[a], node_of[b]);
                has_parent[a] = true;
            }
        }
    }
    for p in 0..n {
        if find(&mut group, p) == p && !has_parent[p] {
            roots.push(node_of[p]);
        }
    }
    for w in roots.windows(2) {
        d.add_edge(w[0], w[1]);
    }
    if d.n_nodes() == 0 {
        // no red nodes at all: a single node carrying every blue node would
        // exceed k, so chain one node per blue node instead
        for e in 0..i.n_blue() {
            let t = d.add_node(BTreeSet::new(), BTreeSet::from([e]));
            if t > 0 {
                d.add_edge(t - 1, t);
            }
        }
        return d;
    }
    // completeness leaves
    for e in 0..i.n_blue() {
        let ok = (0..d.n_nodes()).any(|t| d.cover[t].contains(&e) && i.nbr(e).is_subset(&d.bag[t]));
        if ok {
            continue;
        }
        let host = (0..d.n_nodes())
            .find(|&t| i.nbr(e).is_subset(&d.bag[t]))
            .expect("every neighbourhood is a clique of the primal graph");
        let t = d.add_node(i.nbr(e).clone(), BTreeSet::from([e]));
        d.add_edge(host, t);
    }
    d
}

// ---------------------------------------------------------------- ehd

struct EhdSearch {
    cands: Vec<(u128, u128)>, // (blue mask, red mask = N(blue))
    all_blue: u128,
    failed: HashSet<Vec<usize>>,
    chosen: Vec<usize>,
    parent: Vec<Option<usize>>,
    greedy: bool,
}

impl EhdSearch {
    fn go(&mut self, ub: u128, ur: u128) -> bool {
        if ub == self.all_blue {
            return true;
        }
        let mut key = self.chosen.clone();
        key.sort_unstable();
        if self.failed.contains(&key) {
            return false;
        }
        let mut options: Vec<(usize, Option<usize>)> = Vec::new();
        for (ci, &(cb, cr)) in self.cands.iter().enumerate() {
            if cb & !ub == 0 {
                continue; // introduces no new blue node
            }
            let comparable = self.chosen.iter().any(|&p| {
                let pb = self.cands[p].0;
                pb & !cb == 0 || cb & !pb == 0
            });
            if comparable {
                continue;
            }
            let (ib, ir) = (cb & ub, cr & ur);
            let parent = if self.chosen.is_empty() {
                None
            } else {
                match self.chosen.iter().position(|&p| {
                    let (pb, pr) = self.cands[p];
                    ib & !pb == 0 && ir & !pr == 0
                }) {
                    Some(pos) => Some(pos),
                    None => continue,
                }
            };
            options.push((ci, parent));
        }
        if self.greedy {
            // prefer candidates covering the most new blue nodes
            options.sort_by_key(|&(ci, _)| std::cmp::Reverse((self.cands[ci].0 & !ub).count_ones()));
            options.truncate(1);
        }
        for (ci, parent) in options {
            self.chosen.push(ci);
            self.parent.push(parent);
            let (cb, cr) = self.cands[ci];
            if self.go(ub | cb, ur | cr) {
                return true;
            }
            self.chosen.pop();
            self.parent.pop();
        }
        self.failed.insert(key);
        false
    }
}

fn ehd_search(i: &IncidenceGraph, k: usize, engine: Engine) -> Option<TreeDecomp> {
    let cands: Vec<(u128, u128)> = small_subsets(i.n_blue(), k)
        .into_iter()
        .map(|s| {
            let bm = s.iter().fold(0u128, |m, &e| m | (1u128 << e));
            let rm = s.iter().fold(0u128, |m, &e| m | mask(i.nbr(e)));
            (bm, rm)
        })
        .collect();
    let mut search = EhdSearch {
        cands,
        all_blue: crate::homcount::low_mask(i.n_blue()),
        failed: HashSet::new(),
        chosen: Vec::new(),
        parent: Vec::new(),
        greedy: engine == Engine::Greedy,
    };
    if !search.go(0, 0) {
        return None;
    }
    let mut d = TreeDecomp { adj: Vec::new(), bag: Vec::new(), cover: Vec::new(), root: None };
    for (pos, &ci) in search.chosen.iter().enumerate() {
        let (cb, cr) = search.cands[ci];
        let t = d.add_node(to_set(cr), to_set(cb));
        if let Some(p) = search.parent[pos] {
            d.add_edge(p, t);
        } else if pos > 0 {
            unreachable!("only the first node lacks a parent");
        }
    }
    d.root = Some(0);
    Some(d)
}
