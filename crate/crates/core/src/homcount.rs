//! Exact homomorphism counting for hypergraphs, incidence graphs and
//! k-labeled incidence graphs.
//!
//! An incidence homomorphism `h = (h_R, h_B)` from `J` to `I` maps red to red
//! and blue to blue such that every edge `(e, v)` of `J` lands on an edge of
//! `I`, i.e. `h_R(N(e)) ⊆ N(h_B(e))`.
//!
//! The engine first fixes all labeled nodes, then splits the remaining
//! (free) nodes into parts that are connected through free nodes only; the
//! count factorizes over these parts. Inside a part it backtracks over the
//! free red nodes with forward checking on bitsets of candidate blue images;
//! free blue nodes are never branched on: a class of `z` blue nodes with the
//! same neighbourhood contributes `x^z`, where `x` is the number of host blue
//! nodes whose neighbourhood contains the image of that neighbourhood.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::labeled::LabeledGraph;
use crate::model::{to_incidence, Hypergraph, IncidenceGraph};

/// An exact homomorphism count.
pub type HomCount = BigUint;

/// Counts incidence homomorphisms from `pattern` to `host` with default caps.
pub fn count_homs(pattern: &IncidenceGraph, host: &IncidenceGraph) -> Result<HomCount> {
    count_homs_with(pattern, host, &Caps::default())
}

/// Counts incidence homomorphisms from `pattern` to `host`.
pub fn count_homs_with(pattern: &IncidenceGraph, host: &IncidenceGraph, caps: &Caps) -> Result<HomCount> {
    let fr = vec![None; pattern.n_red()];
    let fb = vec![None; pattern.n_blue()];
    Engine::new(pattern, &fr, &fb, host, caps)?.count()
}

/// Counts label-respecting homomorphisms between k-labeled incidence graphs
/// with default caps.
///
/// Returns 0 when the label domains of `l` are not contained in those of
/// `target`; guard functions play no role in the count.
pub fn count_homs_labeled(l: &LabeledGraph, target: &LabeledGraph) -> Result<HomCount> {
    count_homs_labeled_with(l, target, &Caps::default())
}

/// Counts label-respecting homomorphisms between k-labeled incidence graphs.
pub fn count_homs_labeled_with(l: &LabeledGraph, target: &LabeledGraph, caps: &Caps) -> Result<HomCount> {
    let mut fr: Vec<Option<usize>> = vec![None; l.graph.n_red()];
    let mut fb: Vec<Option<usize>> = vec![None; l.graph.n_blue()];
    for (i, &v) in &l.r {
        let Some(&w) = target.r.get(i) else { return Ok(BigUint::zero()) };
        match fr[v] {
            Some(old) if old != w => return Ok(BigUint::zero()),
            _ => fr[v] = Some(w),
        }
    }
    for (j, &e) in &l.b {
        let Some(&w) = target.b.get(j) else { return Ok(BigUint::zero()) };
        match fb[e] {
            Some(old) if old != w => return Ok(BigUint::zero()),
            _ => fb[e] = Some(w),
        }
    }
    Engine::new(&l.graph, &fr, &fb, &target.graph, caps)?.count()
}

/// Homomorphism counts of every family member into `host`.
pub fn hom_vector(family: &[IncidenceGraph], host: &IncidenceGraph) -> Result<Vec<HomCount>> {
    family.iter().map(|f| count_homs(f, host)).collect()
}

/// Counts hypergraph homomorphisms (exact-image condition) with default caps.
pub fn count_homs_hypergraph(f: &Hypergraph, h: &Hypergraph) -> Result<HomCount> {
    count_homs_hypergraph_with(f, h, &Caps::default())
}

/// Counts pairs `(h_V, h_E)` with `f_H(h_E(e)) = h_V(f_F(e))` for every edge `e`.
pub fn count_homs_hypergraph_with(f: &Hypergraph, h: &Hypergraph, caps: &Caps) -> Result<HomCount> {
    if f.n_vertices() + f.n_edges() > caps.hypergraph_pattern {
        return Err(Error::CapExceeded(format!(
            "hypergraph pattern has {} vertices+edges, cap is {}",
            f.n_vertices() + f.n_edges(),
            caps.hypergraph_pattern
        )));
    }
    if h.n_vertices() > 128 || h.n_edges() > 128 || h.n_vertices() > caps.host_red || h.n_edges() > caps.host_blue {
        return Err(Error::CapExceeded("hypergraph host exceeds the host caps".into()));
    }
    let hi = to_incidence(h);
    let host_masks: Vec<u128> = (0..h.n_edges()).map(|e| mask(h.edge(e))).collect();
    let containing: Vec<u128> = (0..h.n_vertices()).map(|v| mask(hi.red_nbr(v))).collect();
    // group pattern edges by incidence set
    let mut classes: BTreeMap<&BTreeSet<usize>, u32> = BTreeMap::new();
    for s in f.edges() {
        *classes.entry(s).or_insert(0) += 1;
    }
    let classes: Vec<(Vec<usize>, u32)> =
        classes.into_iter().map(|(s, z)| (s.iter().copied().collect(), z)).collect();
    let n = f.n_vertices();
    let mut member: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, (s, _)) in classes.iter().enumerate() {
        for &v in s {
            member[v].push(c);
        }
    }
    let all_edges = low_mask(h.n_edges());
    let mut img = vec![0usize; n];
    let mut cand = vec![all_edges; classes.len()];
    let mut total = BigUint::zero();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        v: usize,
        n: usize,
        hn: usize,
        member: &[Vec<usize>],
        classes: &[(Vec<usize>, u32)],
        containing: &[u128],
        host_masks: &[u128],
        img: &mut Vec<usize>,
        cand: &mut Vec<u128>,
        total: &mut BigUint,
    ) {
        if v == n {
            let mut prod = BigUint::one();
            for (c, (s, z)) in classes.iter().enumerate() {
                let want: u128 = s.iter().fold(0, |m, &u| m | (1u128 << img[u]));
                let x = bits(cand[c]).filter(|&e| host_masks[e] == want).count();
                if x == 0 {
                    return;
                }
                prod *= BigUint::from(x).pow(*z);
            }
            *total += prod;
            return;
        }
        for w in 0..hn {
            let saved: Vec<u128> = member[v].iter().map(|&c| cand[c]).collect();
            let mut ok = true;
            for &c in &member[v] {
                cand[c] &= containing[w];
                if cand[c] == 0 {
                    ok = false;
                }
            }
            if ok {
                img[v] = w;
                rec(v + 1, n, hn, member, classes, containing, host_masks, img, cand, total);
            }
            for (&c, s) in member[v].iter().zip(saved) {
                cand[c] = s;
            }
        }
    }
    rec(0, n, h.n_vertices(), &member, &classes, &containing, &host_masks, &mut img, &mut cand, &mut total);
    Ok(total)
}

pub(crate) fn mask(s: &BTreeSet<usize>) -> u128 {
    s.iter().fold(0u128, |m, &x| m | (1u128 << x))
}

pub(crate) fn low_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

pub(crate) fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// One independent part of the free pattern nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Part {
    /// Initial domain (bitset of host red nodes) of each free red node, in search order.
    red_domains: Vec<u128>,
    /// Blue classes: (positions of free red neighbours in search order, multiplicity, initial candidates).
    classes: Vec<(Vec<usize>, u32, u128)>,
}

struct Engine {
    parts: Vec<Part>,
    zero: bool,
    host_nbr: Vec<u128>,
    containing: Vec<u128>,
}

impl Engine {
    fn new(
        j: &IncidenceGraph,
        fixed_red: &[Option<usize>],
        fixed_blue: &[Option<usize>],
        host: &IncidenceGraph,
        caps: &Caps,
    ) -> Result<Engine> {
        if host.n_red() > caps.host_red.min(128) || host.n_blue() > caps.host_blue.min(128) {
            return Err(Error::CapExceeded(format!(
                "host has {} red / {} blue nodes, caps are {} / {}",
                host.n_red(),
                host.n_blue(),
                caps.host_red.min(128),
                caps.host_blue.min(128)
            )));
        }
        let host_nbr: Vec<u128> = (0..host.n_blue()).map(|e| mask(host.nbr(e))).collect();
        let containing: Vec<u128> = (0..host.n_red()).map(|v| mask(host.red_nbr(v))).collect();
        let mut engine = Engine { parts: Vec::new(), zero: false, host_nbr, containing };
        // edges between fixed nodes must be preserved
        for (e, s) in j.neighbourhoods().iter().enumerate() {
            if let Some(he) = fixed_blue[e] {
                for &v in s {
                    if let Some(hv) = fixed_red[v] {
                        if !host.has_edge(he, hv) {
                            engine.zero = true;
                            return Ok(engine);
                        }
                    }
                }
            }
        }
        let all_red = low_mask(host.n_red());
        let all_blue = low_mask(host.n_blue());
        // connected parts of the free nodes (free red linked through free blue)
        let nr = j.n_red();
        let mut seen_red = vec![false; nr];
        let mut seen_blue = vec![false; j.n_blue()];
        let mut isolated_blue: BTreeMap<u128, u32> = BTreeMap::new();
        for e in 0..j.n_blue() {
            if fixed_blue[e].is_some() || seen_blue[e] {
                continue;
            }
            if j.nbr(e).iter().all(|&v| fixed_red[v].is_some()) {
                // free blue node whose neighbours are all fixed: its own part
                seen_blue[e] = true;
                let c = j.nbr(e).iter().fold(all_blue, |m, &v| m & engine.containing[fixed_red[v].unwrap()]);
                *isolated_blue.entry(c).or_insert(0) += 1;
            }
        }
        for (c, z) in isolated_blue {
            engine.parts.push(Part { red_domains: Vec::new(), classes: vec![(Vec::new(), z, c)] });
        }
        for start in 0..nr {
            if fixed_red[start].is_some() || seen_red[start] {
                continue;
            }
            // BFS over free nodes
            let mut order = Vec::new();
            let mut blues = Vec::new();
            let mut queue = std::collections::VecDeque::from([start]);
            seen_red[start] = true;
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &e in j.red_nbr(v) {
                    if fixed_blue[e].is_some() || seen_blue[e] {
                        continue;
                    }
                    seen_blue[e] = true;
                    blues.push(e);
                    for &u in j.nbr(e) {
                        if fixed_red[u].is_none() && !seen_red[u] {
                            seen_red[u] = true;
                            queue.push_back(u);
                        }
                    }
                }
            }
            let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(p, &v)| (v, p)).collect();
            let red_domains: Vec<u128> = order
                .iter()
                .map(|&v| {
                    j.red_nbr(v)
                        .iter()
                        .filter_map(|&e| fixed_blue[e])
                        .fold(all_red, |m, he| m & engine.host_nbr[he])
                })
                .collect();
            if red_domains.iter().any(|&d| d == 0) {
                engine.zero = true;
                return Ok(engine);
            }
            let mut classes: BTreeMap<(Vec<usize>, u128), u32> = BTreeMap::new();
            for &e in &blues {
                let mut free: Vec<usize> = Vec::new();
                let mut c = all_blue;
                for &v in j.nbr(e) {
                    match fixed_red[v] {
                        Some(hv) => c &= engine.containing[hv],
                        None => free.push(pos[&v]),
                    }
                }
                free.sort_unstable();
                *classes.entry((free, c)).or_insert(0) += 1;
            }
            let classes: Vec<(Vec<usize>, u32, u128)> =
                classes.into_iter().map(|((f, c), z)| (f, z, c)).collect();
            if classes.len() > caps.pattern_blue || order.len() > caps.pattern_red {
                return Err(Error::CapExceeded(format!(
                    "pattern part with {} free red nodes and {} blue classes exceeds caps {} / {}",
                    order.len(),
                    classes.len(),
                    caps.pattern_red,
                    caps.pattern_blue
                )));
            }
            engine.parts.push(Part { red_domains, classes });
        }
        Ok(engine)
    }

    fn count(&self) -> Result<BigUint> {
        if self.zero {
            return Ok(BigUint::zero());
        }
        let mut cache: HashMap<&Part, BigUint> = HashMap::new();
        let mut total = BigUint::one();
        for part in &self.parts {
            let c = match cache.get(part) {
                Some(c) => c.clone(),
                None => {
                    let c = self.count_part(part);
                    cache.insert(part, c.clone());
                    c
                }
            };
            if c.is_zero() {
                return Ok(c);
            }
            total *= c;
        }
        Ok(total)
    }

    fn count_part(&self, part: &Part) -> BigUint {
        let n = part.red_domains.len();
        let mut member: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (c, (reds, _, _)) in part.classes.iter().enumerate() {
            for &p in reds {
                member[p].push(c);
            }
        }
        let mut cand: Vec<u128> = part.classes.iter().map(|c| c.2).collect();
        if cand.iter().any(|&c| c == 0) {
            return BigUint::zero();
        }
        let mut acc = Acc::default();
        self.rec(0, part, &member, &mut cand, &mut acc);
        acc.finish()
    }

    fn rec(&self, p: usize, part: &Part, member: &[Vec<usize>], cand: &mut [u128], acc: &mut Acc) {
        if p == part.red_domains.len() {
            let mut small: Option<u128> = Some(1);
            let mut big: Option<BigUint> = None;
            for (c, (_, z, _)) in part.classes.iter().enumerate() {
                let x = cand[c].count_ones() as u128;
                for _ in 0..*z {
                    match small {
                        Some(s) => match s.checked_mul(x) {
                            Some(t) => small = Some(t),
                            None => {
                                big = Some(BigUint::from(s) * BigUint::from(x));
                                small = None;
                            }
                        },
                        None => {
                            let b = big.take().unwrap() * BigUint::from(x);
                            big = Some(b);
                        }
                    }
                }
            }
            match small {
                Some(s) => acc.add_small(s),
                None => acc.add_big(big.unwrap()),
            }
            return;
        }
        let mut allowed = part.red_domains[p];
        for &c in &member[p] {
            let reach = bits(cand[c]).fold(0u128, |m, e| m | self.host_nbr[e]);
            allowed &= reach;
        }
        for w in bits(allowed) {
            let mut saved = [0u128; 64];
            let many = member[p].len() > 64;
            let mut saved_vec = Vec::new();
            let mut ok = true;
            for (k, &c) in member[p].iter().enumerate() {
                if many {
                    saved_vec.push(cand[c]);
                } else {
                    saved[k] = cand[c];
                }
                cand[c] &= self.containing[w];
                if cand[c] == 0 {
                    ok = false;
                }
            }
            if ok {
                self.rec(p + 1, part, member, cand, acc);
            }
            for (k, &c) in member[p].iter().enumerate() {
                cand[c] = if many { saved_vec[k] } else { saved[k] };
            }
        }
    }
}

/// Accumulator that stays in machine integers until it would overflow.
#[derive(Default)]
struct Acc {
    small: u128,
    big: BigUint,
}

impl Acc {
    fn add_small(&mut self, x: u128) {
        match self.small.checked_add(x) {
            Some(s) => self.small = s,
            None => {
                self.big += BigUint::from(self.small) + BigUint::from(x);
                self.small = 0;
            }
        }
    }

    fn add_big(&mut self, x: BigUint) {
        self.big += x;
    }

    fn finish(self) -> BigUint {
        self.big + BigUint::from(self.small)
    }
}
