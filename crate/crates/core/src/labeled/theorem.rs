//! The correspondence between derivation certificates and entangled
//! decompositions of width at most `k`, in both directions.
//!
//! [`cert_to_ehd`] follows the derivation: a base graph becomes a single node
//! covering all labeled blue nodes; reclaiming blue labels, switching and
//! glueing add a fresh node covering exactly the labeled blue nodes of the
//! new graph, attached to the previous designated node(s).
//!
//! [`ehd_to_cert`] normalizes the decomposition to a binary, monotone one,
//! plans a colouring of the blue nodes and a schedule of guards, turns each
//! tree node into a fully labeled base graph, and glues them bottom-up,
//! releasing labels and applying transitions where a red node changes guard
//! between a child and its parent.

use std::collections::{BTreeMap, BTreeSet};

use super::cert::{eval_cert, GliCert};
use super::graph::{apply_transition_full, check_transition, glue, reclaim, LabeledGraph};
use crate::decomp::{normalize_binary_monotone, validate, DecompMode, TreeDecomp};
use crate::error::{ensure, Error, Result};
use crate::guard::GuardFunction;
use crate::model::{is_isomorphism, Color, IncidenceGraph, Isomorphism};

/// Builds an entangled decomposition of the graph denoted by `c`, together
/// with a node `ω` whose cover is exactly the set of labeled blue nodes.
pub fn cert_to_ehd(c: &GliCert) -> Result<(TreeDecomp, usize)> {
    let (_, d, omega) = build(c)?;
    Ok((d, omega))
}

fn recompute_bags(d: &mut TreeDecomp, graph: &IncidenceGraph) {
    for t in 0..d.n_nodes() {
        d.bag[t] = graph.nbr_union(&d.cover[t]);
    }
}

fn build(c: &GliCert) -> Result<(LabeledGraph, TreeDecomp, usize)> {
    match c {
        GliCert::Base(_) => {
            let l = eval_cert(c)?;
            let d = TreeDecomp::single(l.graph.nbr_union(&l.imgb()), l.imgb());
            Ok((l, d, 0))
        }
        GliCert::ReclaimR(inner, xs) => {
            let (l, d, omega) = build(inner)?;
            if !xs.is_subset(&l.domr()) {
                return Err(Error::CertRule { rule: 2, message: format!("{xs:?} is not contained in Dom(r)") });
            }
            let l2 = reclaim(&l, Color::Red, xs)?;
            Ok((l2, d, omega))
        }
        GliCert::ReclaimB(inner, xs) => {
            let (l, mut d, omega) = build(inner)?;
            if !xs.is_subset(&l.domb()) || xs.intersection(&l.g.img()).next().is_some() {
                return Err(Error::CertRule { rule: 3, message: format!("{xs:?} cannot be reclaimed") });
            }
            let l2 = reclaim(&l, Color::Blue, xs)?;
            let cover = l2.imgb();
            let t = d.add_node(l2.graph.nbr_union(&cover), cover);
            d.add_edge(omega, t);
            Ok((l2, d, t))
        }
        GliCert::Switch(inner, f) => {
            let (l, mut d, omega) = build(inner)?;
            check_transition(&l.g, f).map_err(|e| Error::CertRule { rule: 4, message: e.to_string() })?;
            let res = apply_transition_full(&l, f)?;
            let l2 = res.graph;
            for cover in &mut d.cover {
                *cover = cover.iter().map(|&e| res.pi2.blue[e]).collect();
            }
            recompute_bags(&mut d, &l2.graph);
            let cover = l2.imgb();
            let t = d.add_node(l2.graph.nbr_union(&cover), cover);
            d.add_edge(omega, t);
            Ok((l2, d, t))
        }
        GliCert::Glue(a, b) => {
            let (la, da, wa) = build(a)?;
            let (lb, db, wb) = build(b)?;
            if !la.g.compatible(&lb.g) {
                return Err(Error::CertRule { rule: 5, message: "incompatible guards".into() });
            }
            let res = glue(&la, &lb);
            let l2 = res.graph;
            let mut d = TreeDecomp { adj: Vec::new(), bag: Vec::new(), cover: Vec::new(), root: None };
            for t in 0..da.n_nodes() {
                d.add_node(BTreeSet::new(), da.cover[t].iter().map(|&e| res.pi1.blue[e]).collect());
            }
            let off = da.n_nodes();
            for t in 0..db.n_nodes() {
                d.add_node(BTreeSet::new(), db.cover[t].iter().map(|&e| res.pi2.blue[e]).collect());
            }
            for (x, y) in da.tree_edges() {
                d.add_edge(x, y);
            }
            for (x, y) in db.tree_edges() {
                d.add_edge(off + x, off + y);
            }
            recompute_bags(&mut d, &l2.graph);
            let cover = l2.imgb();
            let t = d.add_node(l2.graph.nbr_union(&cover), cover);
            d.add_edge(t, wa);
            d.add_edge(t, off + wb);
            Ok((l2, d, t))
        }
    }
}

/// A colouring of the blue nodes and a guard schedule for a rooted
/// decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    /// Colour (in `[k]`) of every blue node.
    pub color: Vec<usize>,
    /// `(tree node, red node) ↦ blue node` for every red node of every bag.
    pub schedule: BTreeMap<(usize, usize), usize>,
}

impl Plan {
    /// Colours used at a tree node.
    pub fn colors_at(&self, d: &TreeDecomp, t: usize) -> BTreeSet<usize> {
        d.cover[t].iter().map(|&e| self.color[e]).collect()
    }

    /// The blue node of colour `j` in `cover(t)`, if any.
    pub fn node_of(&self, d: &TreeDecomp, t: usize, j: usize) -> Option<usize> {
        d.cover[t].iter().copied().find(|&e| self.color[e] == j)
    }
}

/// Plans a colouring and a schedule for a binary, monotone decomposition
/// rooted at `root`.
///
/// Colours are assigned top-down: nodes shared with the parent keep their
/// colour and new nodes take the least colours of the parent not yet used.
/// The schedule keeps the parent's guard whenever it is still in the cover
/// and otherwise picks the least adjacent cover node.
pub fn plan_traversal(d: &TreeDecomp, root: usize, i: &IncidenceGraph) -> Result<Plan> {
    let (parent, order) = d.rooted(root);
    let mut color = vec![0usize; i.n_blue()];
    let mut schedule = BTreeMap::new();
    for &t in &order {
        let palette: Vec<usize> = match parent[t] {
            None => (1..=d.cover[t].len()).collect(),
            Some(p) => d.cover[p].iter().map(|&e| color[e]).collect::<BTreeSet<_>>().into_iter().collect(),
        };
        let inherited: BTreeSet<usize> = match parent[t] {
            None => BTreeSet::new(),
            Some(p) => d.cover[t].intersection(&d.cover[p]).copied().collect(),
        };
        let used: BTreeSet<usize> = inherited.iter().map(|&e| color[e]).collect();
        let mut free = palette.into_iter().filter(|c| !used.contains(c));
        for &e in &d.cover[t] {
            if inherited.contains(&e) {
                continue;
            }
            if color[e] != 0 {
                return Err(Error::InvalidDecomposition(format!("blue node {e} reappears below a gap")));
            }
            color[e] = free
                .next()
                .ok_or_else(|| Error::InvalidDecomposition(format!("cover of node {t} grows below its parent")))?;
        }
        for &v in &d.bag[t] {
            let keep = parent[t]
                .and_then(|p| schedule.get(&(p, v)).copied())
                .filter(|e| d.cover[t].contains(e));
            let e = match keep {
                Some(e) => e,
                None => d.cover[t]
                    .iter()
                    .copied()
                    .find(|&e| i.has_edge(e, v))
                    .ok_or_else(|| Error::InvalidDecomposition(format!("red node {v} unguarded at node {t}")))?,
            };
            schedule.insert((t, v), e);
        }
    }
    Ok(Plan { color, schedule })
}

/// Checks the colouring and schedule constraints of a plan.
pub fn check_plan(d: &TreeDecomp, root: usize, i: &IncidenceGraph, plan: &Plan) -> Result<()> {
    let (parent, _) = d.rooted(root);
    for t in 0..d.n_nodes() {
        let cs = plan.colors_at(d, t);
        ensure(cs.len() == d.cover[t].len(), || format!("colouring not injective on cover of {t}"))?;
        if let Some(p) = parent[t] {
            ensure(cs.is_subset(&plan.colors_at(d, p)), || format!("colours of {t} not inherited"))?;
        }
        for &v in &d.bag[t] {
            let e = *plan.schedule.get(&(t, v)).ok_or_else(|| Error::Assertion(format!("no schedule at ({t}, {v})")))?;
            ensure(d.cover[t].contains(&e) && i.has_edge(e, v), || format!("bad schedule at ({t}, {v})"))?;
            if let Some(p) = parent[t] {
                if let Some(&ep) = plan.schedule.get(&(p, v)) {
                    ensure(!d.cover[t].contains(&ep) || ep == e, || format!("schedule not persistent at ({t}, {v})"))?;
                }
            }
        }
    }
    Ok(())
}

/// Everything produced while turning a decomposition into a certificate.
#[derive(Debug, Clone)]
pub struct CertTrace {
    /// The label-free certificate.
    pub cert: GliCert,
    /// The normalized decomposition used.
    pub decomp: TreeDecomp,
    /// Its root.
    pub root: usize,
    /// The colouring and schedule.
    pub plan: Plan,
    /// The base graph `L_t` of every tree node.
    pub base: Vec<LabeledGraph>,
    /// The graph `L'_t` built for the subtree of every tree node.
    pub subtree: Vec<LabeledGraph>,
    /// The graph `A_2` handed from every non-root node to its parent.
    pub handed_up: BTreeMap<usize, LabeledGraph>,
    /// Isomorphism from the input graph onto the evaluated certificate.
    pub iso: Isomorphism,
}

/// Builds a label-free certificate whose evaluation is isomorphic to `i`.
pub fn ehd_to_cert(i: &IncidenceGraph, d: &TreeDecomp) -> Result<GliCert> {
    Ok(ehd_to_cert_trace(i, d)?.cert)
}

/// Red label of red node `v`.
fn red_label(v: usize) -> usize {
    v + 1
}

/// A certificate under construction together with its value and the map
/// from nodes of the input graph to nodes of the value.
#[derive(Clone)]
struct Built {
    cert: GliCert,
    graph: LabeledGraph,
    red: BTreeMap<usize, usize>,
    blue: BTreeMap<usize, usize>,
}

impl Built {
    fn reclaim(self, color: Color, xs: BTreeSet<usize>) -> Result<Built> {
        if xs.is_empty() {
            return Ok(self);
        }
        let graph = reclaim(&self.graph, color, &xs)?;
        let cert = match color {
            Color::Red => GliCert::ReclaimR(Box::new(self.cert), xs),
            Color::Blue => GliCert::ReclaimB(Box::new(self.cert), xs),
        };
        Ok(Built { cert, graph, ..self })
    }

    fn switch(self, f: &GuardFunction) -> Result<Built> {
        let res = apply_transition_full(&self.graph, f)?;
        Ok(Built {
            cert: GliCert::switch(self.cert, f.clone()),
            graph: res.graph,
            red: self.red.iter().map(|(&v, &x)| (v, res.pi2.red[x])).collect(),
            blue: self.blue.iter().map(|(&e, &x)| (e, res.pi2.blue[x])).collect(),
        })
    }

    fn glue(self, other: Built) -> Result<Built> {
        ensure(self.graph.g.compatible(&other.graph.g), || "glued guards are incompatible".into())?;
        let res = glue(&self.graph, &other.graph);
        let mut red: BTreeMap<usize, usize> = other.red.iter().map(|(&v, &x)| (v, res.pi2.red[x])).collect();
        let mut blue: BTreeMap<usize, usize> = other.blue.iter().map(|(&e, &x)| (e, res.pi2.blue[x])).collect();
        for (&v, &x) in &self.red {
            let y = res.pi1.red[x];
            ensure(red.insert(v, y).is_none_or(|z| z == y), || format!("red node {v} glued inconsistently"))?;
        }
        for (&e, &x) in &self.blue {
            let y = res.pi1.blue[x];
            ensure(blue.insert(e, y).is_none_or(|z| z == y), || format!("blue node {e} glued inconsistently"))?;
        }
        Ok(Built { cert: GliCert::glue(self.cert, other.cert), graph: res.graph, red, blue })
    }
}

/// Like [`ehd_to_cert`], also returning every intermediate object.
pub fn ehd_to_cert_trace(i: &IncidenceGraph, d: &TreeDecomp) -> Result<CertTrace> {
    let report = validate(d, i, DecompMode::Ehd)?;
    if !report.valid {
        return Err(Error::InvalidDecomposition(
            report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        ));
    }
    let (nd, root) = normalize_binary_monotone(d, i)?;
    let plan = plan_traversal(&nd, root, i)?;
    check_plan(&nd, root, i, &plan)?;
    let (_, order) = nd.rooted(root);
    let children = nd.children(root);

    let base: Vec<Built> = (0..nd.n_nodes()).map(|t| base_graph(&nd, t, i, &plan)).collect::<Result<_>>()?;
    let mut subtree: Vec<Option<Built>> = vec![None; nd.n_nodes()];
    let mut handed_up = BTreeMap::new();
    for &tp in order.iter().rev() {
        let mut cur = base[tp].clone();
        for &t in &children[tp] {
            let child = subtree[t].clone().expect("children are built first");
            let a2 = hand_up(child, &base[t].graph, &base[tp].graph, &nd, t, tp, &plan)?;
            handed_up.insert(t, a2.graph.clone());
            cur = cur.glue(a2)?;
        }
        ensure(cur.graph.g == base[tp].graph.g, || format!("guard of subtree {tp} drifted"))?;
        subtree[tp] = Some(cur);
    }
    let top = subtree[root].clone().expect("root is built");
    let subtree_graphs: Vec<LabeledGraph> = subtree.iter().map(|b| b.as_ref().unwrap().graph.clone()).collect();
    let domr = top.graph.domr();
    let top = top.reclaim(Color::Red, domr)?;
    let domb = top.graph.domb();
    let top = top.reclaim(Color::Blue, domb)?;

    let value = eval_cert(&top.cert)?;
    ensure(value == top.graph, || "certificate evaluation differs from the tracked graph".into())?;
    let iso = Isomorphism {
        red: (0..i.n_red()).map(|v| top.red.get(&v).copied()).collect::<Option<Vec<_>>>().ok_or_else(|| {
            Error::Assertion("some red node was never placed".into())
        })?,
        blue: (0..i.n_blue()).map(|e| top.blue.get(&e).copied()).collect::<Option<Vec<_>>>().ok_or_else(|| {
            Error::Assertion("some blue node was never placed".into())
        })?,
    };
    ensure(is_isomorphism(i, &value.graph, &iso), || "tracked node map is not an isomorphism".into())?;
    Ok(CertTrace {
        cert: top.cert,
        decomp: nd,
        root,
        plan,
        base: base.into_iter().map(|b| b.graph).collect(),
        subtree: subtree_graphs,
        handed_up,
        iso,
    })
}

fn base_graph(d: &TreeDecomp, t: usize, i: &IncidenceGraph, plan: &Plan) -> Result<Built> {
    let reds: Vec<usize> = d.bag[t].iter().copied().collect();
    let blues: Vec<usize> = d.cover[t].iter().copied().collect();
    let rpos: BTreeMap<usize, usize> = reds.iter().enumerate().map(|(x, &v)| (v, x)).collect();
    let bpos: BTreeMap<usize, usize> = blues.iter().enumerate().map(|(x, &e)| (e, x)).collect();
    let mut edges = Vec::new();
    for (&e, &be) in &bpos {
        for v in i.nbr(e) {
            if let Some(&rv) = rpos.get(v) {
                edges.push((be, rv));
            }
        }
    }
    let graph = IncidenceGraph::new(reds.len(), blues.len(), edges)?;
    let r = reds.iter().map(|&v| (red_label(v), rpos[&v])).collect();
    let b = blues.iter().map(|&e| (plan.color[e], bpos[&e])).collect();
    let g = GuardFunction::from_pairs(reds.iter().map(|&v| (red_label(v), plan.color[plan.schedule[&(t, v)]])));
    let l = LabeledGraph::new(graph, r, b, g)?;
    let cert = GliCert::Base(l.clone());
    eval_cert(&cert)?;
    Ok(Built { cert, graph: l, red: rpos, blue: bpos })
}

/// Prepares the subtree graph of child `t` for glueing into its parent `tp`.
fn hand_up(
    child: Built,
    lt: &LabeledGraph,
    ltp: &LabeledGraph,
    d: &TreeDecomp,
    t: usize,
    tp: usize,
    plan: &Plan,
) -> Result<Built> {
    let dropped: BTreeSet<usize> = lt.domr().difference(&ltp.domr()).copied().collect();
    let a1 = child.reclaim(Color::Red, dropped)?;
    let changed_blue: BTreeSet<usize> = plan
        .colors_at(d, t)
        .into_iter()
        .filter(|&j| plan.node_of(d, t, j) != plan.node_of(d, tp, j))
        .collect();
    let changed_red: BTreeSet<usize> = lt
        .domr()
        .intersection(&ltp.domr())
        .copied()
        .filter(|&i| {
            let v = i - 1;
            plan.schedule[&(t, v)] != plan.schedule[&(tp, v)]
        })
        .collect();
    let a2 = if changed_red.is_empty() {
        let free: BTreeSet<usize> = a1.graph.domb().difference(&a1.graph.g.img()).copied().collect();
        ensure(changed_blue.is_subset(&free), || format!("released blue labels still guard at node {t}"))?;
        a1.reclaim(Color::Blue, changed_blue)?
    } else {
        let f = ltp.g.restrict(&changed_red);
        // a new guard colour absent from the child's cover needs no release
        let present: BTreeSet<usize> = f.img().intersection(&plan.colors_at(d, t)).copied().collect();
        ensure(present.is_subset(&changed_blue), || format!("new guards not among released labels at {t}"))?;
        check_transition(&a1.graph.g, &f).map_err(|e| Error::Assertion(e.to_string()))?;
        let xhat: BTreeSet<usize> =
            a1.graph.domb().into_iter().filter(|j| f.img().contains(j) && !a1.graph.g.img().contains(j)).collect();
        let rest: BTreeSet<usize> = changed_blue.difference(&f.img()).copied().collect();
        ensure(xhat.is_disjoint(&rest), || "overlapping released sets".into())?;
        let a1hat = a1.reclaim(Color::Blue, xhat)?;
        check_transition(&a1hat.graph.g, &f).map_err(|e| Error::Assertion(e.to_string()))?;
        let tilde = a1hat.switch(&f)?;
        let free: BTreeSet<usize> = tilde.graph.domb().difference(&tilde.graph.g.img()).copied().collect();
        ensure(rest.is_subset(&free), || format!("released blue labels still guard after switch at {t}"))?;
        tilde.reclaim(Color::Blue, rest)?
    };
    ensure(ltp.g.compatible(&a2.graph.g), || format!("guards of {t} and its parent are incompatible"))?;
    Ok(a2)
}
