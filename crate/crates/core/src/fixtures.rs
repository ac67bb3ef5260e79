//! Worked example instances shipped with the crate.
//!
//! The files live in the workspace `fixtures/` directory and are embedded at
//! compile time, so tests, benches and the CLI all see the same bytes.
//!
//! * a six-vertex hypergraph (two triangles plus two 3-edges) and a sentence
//!   that describes it up to isomorphism;
//! * a sentence stating that large edges are pairwise disjoint;
//! * a twelve-vertex incidence graph with a width-2 entangled decomposition
//!   and a colouring/schedule for it;
//! * two before/after pairs illustrating the repair steps that turn a
//!   generalised decomposition into an entangled one.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::decomp::TreeDecomp;
use crate::error::{Error, Result};
use crate::io::{decomp_from_json, hypergraph_from_json, incidence_from_json, parse_json, Names};
use crate::labeled::Plan;
use crate::logic::{parse_formula, Formula};
use crate::model::{Hypergraph, IncidenceGraph};

/// Hypergraph with two disjoint 3-edges, each also covered by a triangle of 2-edges.
pub const EXAMPLE_H: &str = include_str!("../../../fixtures/example_h.json");
/// Sentence describing [`EXAMPLE_H`] up to isomorphism.
pub const EXAMPLE_CHI: &str = include_str!("../../../fixtures/example_chi.txt");
/// Sentence: edges with at least three vertices are pairwise disjoint.
pub const EXAMPLE_PHI: &str = include_str!("../../../fixtures/example_phi.txt");
/// Twelve red and eleven blue nodes.
pub const WORKED_EHD_GRAPH: &str = include_str!("../../../fixtures/worked_ehd_graph.json");
/// A width-2 entangled decomposition of [`WORKED_EHD_GRAPH`].
pub const WORKED_EHD_DECOMP: &str = include_str!("../../../fixtures/worked_ehd_decomp.json");
/// Colouring and schedule for [`WORKED_EHD_DECOMP`].
pub const WORKED_EHD_PLAN: &str = include_str!("../../../fixtures/worked_ehd_plan.json");
/// Precise-coverage repair: graph before.
pub const COVERAGE_GRAPH_BEFORE: &str = include_str!("../../../fixtures/repair_coverage_graph_before.json");
/// Precise-coverage repair: decomposition before.
pub const COVERAGE_DECOMP_BEFORE: &str = include_str!("../../../fixtures/repair_coverage_decomp_before.json");
/// Precise-coverage repair: graph after.
pub const COVERAGE_GRAPH_AFTER: &str = include_str!("../../../fixtures/repair_coverage_graph_after.json");
/// Precise-coverage repair: decomposition after.
pub const COVERAGE_DECOMP_AFTER: &str = include_str!("../../../fixtures/repair_coverage_decomp_after.json");
/// Blue-connectedness repair: graph before.
pub const CONNECTED_GRAPH_BEFORE: &str = include_str!("../../../fixtures/repair_connected_graph_before.json");
/// Blue-connectedness repair: decomposition before.
pub const CONNECTED_DECOMP_BEFORE: &str = include_str!("../../../fixtures/repair_connected_decomp_before.json");
/// Blue-connectedness repair: graph after.
pub const CONNECTED_GRAPH_AFTER: &str = include_str!("../../../fixtures/repair_connected_graph_after.json");
/// Blue-connectedness repair: decomposition after.
pub const CONNECTED_DECOMP_AFTER: &str = include_str!("../../../fixtures/repair_connected_decomp_after.json");

/// Every fixture as `(file name, description, contents)`.
pub const CATALOG: &[(&str, &str, &str)] = &[
    ("example_h.json", "six-vertex hypergraph: two 3-edges, each with a triangle of 2-edges", EXAMPLE_H),
    ("example_chi.txt", "sentence describing example_h.json up to isomorphism", EXAMPLE_CHI),
    ("example_phi.txt", "sentence: edges with at least three vertices are pairwise disjoint", EXAMPLE_PHI),
    ("worked_ehd_graph.json", "incidence graph with twelve red and eleven blue nodes", WORKED_EHD_GRAPH),
    ("worked_ehd_decomp.json", "width-2 entangled decomposition of worked_ehd_graph.json", WORKED_EHD_DECOMP),
    ("worked_ehd_plan.json", "colouring and schedule for worked_ehd_decomp.json", WORKED_EHD_PLAN),
    ("repair_coverage_graph_before.json", "precise-coverage repair: graph before", COVERAGE_GRAPH_BEFORE),
    ("repair_coverage_decomp_before.json", "precise-coverage repair: decomposition before", COVERAGE_DECOMP_BEFORE),
    ("repair_coverage_graph_after.json", "precise-coverage repair: graph after", COVERAGE_GRAPH_AFTER),
    ("repair_coverage_decomp_after.json", "precise-coverage repair: decomposition after", COVERAGE_DECOMP_AFTER),
    ("repair_connected_graph_before.json", "blue-connectedness repair: graph before", CONNECTED_GRAPH_BEFORE),
    ("repair_connected_decomp_before.json", "blue-connectedness repair: decomposition before", CONNECTED_DECOMP_BEFORE),
    ("repair_connected_graph_after.json", "blue-connectedness repair: graph after", CONNECTED_GRAPH_AFTER),
    ("repair_connected_decomp_after.json", "blue-connectedness repair: decomposition after", CONNECTED_DECOMP_AFTER),
];

/// The example hypergraph.
pub fn example_h() -> Result<Hypergraph> {
    Ok(hypergraph_from_json(&parse_json(EXAMPLE_H)?)?.0)
}

/// The sentence describing [`example_h`].
pub fn example_chi() -> Result<Formula> {
    parse_formula(EXAMPLE_CHI.trim())
}

/// The disjointness sentence.
pub fn example_phi() -> Result<Formula> {
    parse_formula(EXAMPLE_PHI.trim())
}

/// A graph together with a decomposition of it.
#[derive(Debug, Clone)]
pub struct DecomposedGraph {
    /// The graph.
    pub graph: IncidenceGraph,
    /// External ids of its nodes.
    pub names: Names,
    /// The decomposition.
    pub decomp: TreeDecomp,
}

fn decomposed(graph: &str, decomp: &str) -> Result<DecomposedGraph> {
    let (graph, names) = incidence_from_json(&parse_json(graph)?)?;
    let decomp = decomp_from_json(&parse_json(decomp)?, &names)?;
    Ok(DecomposedGraph { graph, names, decomp })
}

/// The twelve-vertex graph and its width-2 decomposition (rooted).
pub fn worked_ehd() -> Result<DecomposedGraph> {
    decomposed(WORKED_EHD_GRAPH, WORKED_EHD_DECOMP)
}

/// The shipped colouring and schedule of [`worked_ehd`], with its root.
pub fn worked_ehd_plan(fx: &DecomposedGraph) -> Result<(Plan, usize)> {
    plan_from_json(&parse_json(WORKED_EHD_PLAN)?, fx)
}

/// Parses `{"root":t,"color":{blue:c},"schedule":{t:{red:blue}}}` against
/// the ids of a decomposed graph. Tree node ids are positions in the
/// decomposition's `nodes` list, so the decomposition JSON is re-read here.
fn plan_from_json(v: &Value, fx: &DecomposedGraph) -> Result<(Plan, usize)> {
    let nodes: Vec<String> = parse_json(WORKED_EHD_DECOMP)?["nodes"]
        .as_array()
        .ok_or_else(|| Error::InvalidStructure("nodes must be an array".into()))?
        .iter()
        .map(|x| x.as_str().unwrap_or_default().to_string())
        .collect();
    let pos = |list: &[String], id: &str, what: &str| -> Result<usize> {
        list.iter().position(|x| x == id).ok_or_else(|| Error::UnknownId(format!("{what} {id}")))
    };
    let str_of = |x: &Value| -> Result<String> {
        x.as_str().map(str::to_string).ok_or_else(|| Error::InvalidStructure("expected a string id".into()))
    };
    let root = pos(&nodes, &str_of(&v["root"])?, "tree node")?;
    let mut color = vec![0usize; fx.graph.n_blue()];
    let colors = v["color"].as_object().ok_or_else(|| Error::InvalidStructure("color must be an object".into()))?;
    for (e, c) in colors {
        let c = c.as_u64().ok_or_else(|| Error::InvalidStructure("colours must be integers".into()))?;
        color[pos(&fx.names.blue, e, "blue node")?] = c as usize;
    }
    let mut schedule = BTreeMap::new();
    let rows = v["schedule"].as_object().ok_or_else(|| Error::InvalidStructure("schedule must be an object".into()))?;
    for (t, row) in rows {
        let t = pos(&nodes, t, "tree node")?;
        let row = row.as_object().ok_or_else(|| Error::InvalidStructure("schedule rows must be objects".into()))?;
        for (r, e) in row {
            schedule.insert((t, pos(&fx.names.red, r, "red node")?), pos(&fx.names.blue, &str_of(e)?, "blue node")?);
        }
    }
    Ok((Plan { color, schedule }, root))
}

/// A before/after pair of decomposed graphs.
#[derive(Debug, Clone)]
pub struct Repair {
    /// Before the repair step: a generalised decomposition.
    pub before: DecomposedGraph,
    /// After the repair step: an entangled decomposition.
    pub after: DecomposedGraph,
}

/// Repair restoring precise coverage by adding restricted copies of edges.
pub fn repair_coverage() -> Result<Repair> {
    Ok(Repair {
        before: decomposed(COVERAGE_GRAPH_BEFORE, COVERAGE_DECOMP_BEFORE)?,
        after: decomposed(COVERAGE_GRAPH_AFTER, COVERAGE_DECOMP_AFTER)?,
    })
}

/// Repair restoring blue connectedness by giving each part its own copy.
pub fn repair_connected() -> Result<Repair> {
    Ok(Repair {
        before: decomposed(CONNECTED_GRAPH_BEFORE, CONNECTED_DECOMP_BEFORE)?,
        after: decomposed(CONNECTED_GRAPH_AFTER, CONNECTED_DECOMP_AFTER)?,
    })
}
