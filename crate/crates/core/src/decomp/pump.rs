//! Pumping: the distinguishing pump count, the generalised-to-entangled
//! transformation, and the decomposition updates for vertex pumping and
//! local merging of hypergraphs.

use std::collections::{BTreeMap, BTreeSet};

use super::{validate, DecompMode, TreeDecomp};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::homcount::count_homs_with;
use crate::model::IncidenceGraph;

/// Smallest `n ≥ m` (within the configured window) with
/// `hom(J + n·s, I) ≠ hom(J + n·s, I')`.
pub fn find_pump_count(
    j: &IncidenceGraph,
    e: usize,
    s: &BTreeSet<usize>,
    m: usize,
    i1: &IncidenceGraph,
    i2: &IncidenceGraph,
    caps: &Caps,
) -> Result<usize> {
    if e >= j.n_blue() {
        return Err(Error::UnknownId(format!("blue node {e}")));
    }
    if !s.is_subset(j.nbr(e)) {
        return Err(Error::Precondition(format!("{s:?} is not contained in N({e})")));
    }
    if count_homs_with(j, i1, caps)? == count_homs_with(j, i2, caps)? {
        return Err(Error::Precondition("J does not distinguish the two hosts".into()));
    }
    for n in m..=m + caps.pump_window {
        let jn = j.add_pumped_edges(s, n)?;
        if count_homs_with(&jn, i1, caps)? != count_homs_with(&jn, i2, caps)? {
            return Ok(n);
        }
    }
    Err(Error::SearchCapExceeded(format!(
        "no distinguishing pump count in {m}..={}",
        m + caps.pump_window
    )))
}

/// Turns a generalised decomposition `d` of a distinguisher `j` into an
/// entangled decomposition of a pumped distinguisher `j2` of no larger width.
///
/// Stage one restores precise coverage: for every `(t, e)` with `N(e) ⊄ bag(t)`
/// the set `s = N(e) ∩ bag(t)` is pumped, `e` is replaced in `cover(t)` by the
/// first copy, and surplus copies hang off as leaves. Stage two restores blue
/// connectedness: every extra connected part of the tree nodes covering `e`
/// receives its own copy of `e`, surplus copies again hang off as leaves.
pub fn ghd_to_ehd(
    j: &IncidenceGraph,
    d: &TreeDecomp,
    i1: &IncidenceGraph,
    i2: &IncidenceGraph,
    caps: &Caps,
) -> Result<(IncidenceGraph, TreeDecomp)> {
    let report = validate(d, j, DecompMode::Ghd)?;
    if !report.valid {
        return Err(Error::InvalidDecomposition(
            report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        ));
    }
    let mut jc = j.clone();
    let mut dc = d.clone();

    // stage 1: precise coverage
    let mut sets: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new(); // s -> witnessing e
    for t in 0..dc.n_nodes() {
        for &e in &dc.cover[t] {
            if !jc.nbr(e).is_subset(&dc.bag[t]) {
                let s: BTreeSet<usize> = jc.nbr(e).intersection(&dc.bag[t]).copied().collect();
                sets.entry(s).or_insert(e);
            }
        }
    }
    let mut first_copy: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    for (s, &e) in &sets {
        let n = find_pump_count(&jc, e, s, 1, i1, i2, caps)?;
        let start = jc.n_blue();
        jc = jc.add_pumped_edges(s, n)?;
        first_copy.insert(s.clone(), (start..start + n).collect());
    }
    for t in 0..dc.n_nodes() {
        let mut cover = BTreeSet::new();
        for &e in &dc.cover[t] {
            if j.nbr(e).is_subset(&dc.bag[t]) {
                cover.insert(e);
            } else {
                let s: BTreeSet<usize> = j.nbr(e).intersection(&dc.bag[t]).copied().collect();
                cover.insert(first_copy[&s][0]);
            }
        }
        dc.cover[t] = cover;
    }
    for (s, copies) in &first_copy {
        let host = (0..dc.n_nodes())
            .find(|&t| dc.cover[t].contains(&copies[0]))
            .expect("the first copy is placed in some cover");
        for &c in &copies[1..] {
            let leaf = dc.add_node(s.clone(), BTreeSet::from([c]));
            dc.add_edge(host, leaf);
        }
    }

    // stage 2: blue connectedness
    for e in 0..jc.n_blue() {
        let nodes: BTreeSet<usize> = (0..dc.n_nodes()).filter(|&t| dc.cover[t].contains(&e)).collect();
        let mut comps = dc.components(&nodes);
        if comps.len() < 2 {
            continue;
        }
        comps.sort_by_key(|c| *c.iter().next().unwrap());
        let m = comps.len() - 1;
        let s = jc.nbr(e).clone();
        let n = find_pump_count(&jc, e, &s, m, i1, i2, caps)?;
        let start = jc.n_blue();
        jc = jc.add_pumped_edges(&s, n)?;
        for (idx, comp) in comps.iter().enumerate().skip(1) {
            let copy = start + idx - 1;
            for &t in comp {
                dc.cover[t].remove(&e);
                dc.cover[t].insert(copy);
            }
        }
        let host = *comps[0].iter().next().unwrap();
        for copy in start + m..start + n {
            let leaf = dc.add_node(s.clone(), BTreeSet::from([copy]));
            dc.add_edge(host, leaf);
        }
    }
    Ok((jc, dc))
}

/// Updates a decomposition after a fresh red node `u` was added to the
/// neighbourhood of blue node `e` (vertex pumping). `i` is the graph *before*
/// the edit.
pub fn transform_pump(d: &TreeDecomp, i: &IncidenceGraph, e: usize, u: usize, mode: DecompMode) -> Result<TreeDecomp> {
    let mut out = d.clone();
    match mode {
        DecompMode::Ghd => {
            let t = (0..d.n_nodes())
                .find(|&t| d.cover[t].contains(&e) && i.nbr(e).is_subset(&d.bag[t]))
                .ok_or_else(|| Error::InvalidDecomposition(format!("no completeness witness for {e}")))?;
            out.bag[t].insert(u);
        }
        DecompMode::Ehd => {
            for t in 0..d.n_nodes() {
                if d.cover[t].contains(&e) {
                    out.bag[t].insert(u);
                }
            }
        }
    }
    Ok(out)
}

/// Updates a decomposition after local merging: every bag is mapped through
/// the vertex projection; covers are unchanged.
pub fn transform_local_merge(d: &TreeDecomp, vertex_map: &[usize]) -> TreeDecomp {
    let mut out = d.clone();
    for bag in &mut out.bag {
        *bag = bag.iter().map(|&v| vertex_map[v]).collect();
    }
    out
}
