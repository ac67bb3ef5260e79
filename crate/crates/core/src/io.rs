//! JSON encodings of graphs, hypergraphs, decompositions, labeled graphs,
//! certificates and quantum graphs.
//!
//! Node ids may be JSON strings or non-negative integers; they are mapped to
//! dense positions in the order of the `red` / `blue` (or `vertices`) lists.
//! Output always uses the dense positions as integer ids, so an encoded value
//! parses back to an identical structure.
//!
//! | structure | schema |
//! |---|---|
//! | incidence graph | `{"red":[ids],"blue":[ids],"edges":[[blue,red],...]}` |
//! | hypergraph | `{"vertices":[ids],"edges":{edge-id:[vertex-ids]}}` |
//! | decomposition | `{"nodes":[ids],"edges":[[t,t']],"bag":{t:[red]},"cover":{t:[blue]},"root":t?}` |
//! | labeled graph | incidence graph plus `{"r":{i:red},"b":{j:blue},"g":{i:j}}` |
//! | certificate | `{"op":"base","graph":L}`, `{"op":"reclaimR"/"reclaimB","of":C,"labels":[..]}`, `{"op":"switch","of":C,"f":{i:j}}`, `{"op":"glue","left":C,"right":C}` |
//! | quantum graph | `{"terms":[{"coef":"p/q","component":L,"cert":C?}]}` |

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::decomp::TreeDecomp;
use crate::error::{Error, Result};
use crate::guard::GuardFunction;
use crate::labeled::{GliCert, LabeledGraph};
use crate::model::{Hypergraph, IncidenceGraph};
use crate::quantum::{QuantumGraph, Term};

/// The external ids of the nodes of a parsed graph, by dense position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Names {
    /// Red (or vertex) ids.
    pub red: Vec<String>,
    /// Blue (or edge) ids.
    pub blue: Vec<String>,
}

impl Names {
    /// The ids `0..n_red` and `0..n_blue`.
    pub fn dense(n_red: usize, n_blue: usize) -> Self {
        Names { red: (0..n_red).map(|x| x.to_string()).collect(), blue: (0..n_blue).map(|x| x.to_string()).collect() }
    }

    fn index(list: &[String]) -> HashMap<&str, usize> {
        list.iter().enumerate().map(|(p, s)| (s.as_str(), p)).collect()
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidStructure(msg.into())
}

/// Parses JSON text.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Io(format!("invalid JSON: {e}")))
}

/// Renders a value as pretty JSON text.
pub fn render_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always render")
}

fn id_of(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_u64() => Ok(n.to_string()),
        other => Err(invalid(format!("ids must be strings or non-negative integers, found {other}"))),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| invalid(format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| invalid(format!("{what} must be an array")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| invalid(format!("{what} must be an object")))
}

fn id_list(v: &Value, what: &str) -> Result<Vec<String>> {
    let ids: Vec<String> = array(v, what)?.iter().map(id_of).collect::<Result<_>>()?;
    let distinct: BTreeSet<&String> = ids.iter().collect();
    if distinct.len() != ids.len() {
        return Err(invalid(format!("duplicate id in {what}")));
    }
    Ok(ids)
}

fn lookup(index: &HashMap<&str, usize>, id: &Value, what: &str) -> Result<usize> {
    let s = id_of(id)?;
    index.get(s.as_str()).copied().ok_or_else(|| Error::UnknownId(format!("{what} {s}")))
}

fn positive(key: &str) -> Result<usize> {
    match key.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(invalid(format!("label index {key} must be a positive integer"))),
    }
}

fn positive_value(v: &Value) -> Result<usize> {
    positive(&id_of(v)?)
}

/// Parses an incidence graph, returning it with its external ids.
pub fn incidence_from_json(v: &Value) -> Result<(IncidenceGraph, Names)> {
    let red = id_list(field(v, "red")?, "red")?;
    let blue = id_list(field(v, "blue")?, "blue")?;
    let (ri, bi) = (Names::index(&red), Names::index(&blue));
    let mut edges = Vec::new();
    for pair in array(field(v, "edges")?, "edges")? {
        let p = array(pair, "an edge")?;
        if p.len() != 2 {
            return Err(invalid("an edge must be a [blue, red] pair"));
        }
        edges.push((lookup(&bi, &p[0], "blue node")?, lookup(&ri, &p[1], "red node")?));
    }
    let g = IncidenceGraph::new(red.len(), blue.len(), edges)?;
    Ok((g, Names { red, blue }))
}

/// Encodes an incidence graph with dense integer ids.
pub fn incidence_to_json(g: &IncidenceGraph) -> Value {
    json!({
        "red": (0..g.n_red()).collect::<Vec<_>>(),
        "blue": (0..g.n_blue()).collect::<Vec<_>>(),
        "edges": g.edges().into_iter().map(|(e, v)| json!([e, v])).collect::<Vec<_>>(),
    })
}

/// Parses a hypergraph. Edges may be an object (ordered numerically when
/// all keys are integers) or an array of vertex lists.
pub fn hypergraph_from_json(v: &Value) -> Result<(Hypergraph, Names)> {
    let vertices = id_list(field(v, "vertices")?, "vertices")?;
    let vi = Names::index(&vertices);
    let raw = field(v, "edges")?;
    let mut named: Vec<(String, &Value)> = match raw {
        Value::Array(list) => list.iter().enumerate().map(|(p, e)| (p.to_string(), e)).collect(),
        Value::Object(map) => map.iter().map(|(k, e)| (k.clone(), e)).collect(),
        _ => return Err(invalid("edges must be an object or an array")),
    };
    if named.iter().all(|(k, _)| k.parse::<u64>().is_ok()) {
        named.sort_by_key(|(k, _)| k.parse::<u64>().expect("checked"));
    }
    let mut edges = Vec::new();
    for (_, members) in &named {
        let set: BTreeSet<usize> =
            array(members, "an edge")?.iter().map(|x| lookup(&vi, x, "vertex")).collect::<Result<_>>()?;
        edges.push(set);
    }
    let h = Hypergraph::new(vertices.len(), edges)?;
    Ok((h, Names { red: vertices, blue: named.into_iter().map(|(k, _)| k).collect() }))
}

/// Encodes a hypergraph with dense integer ids.
pub fn hypergraph_to_json(h: &Hypergraph) -> Value {
    let edges: Map<String, Value> =
        h.edges().iter().enumerate().map(|(e, s)| (e.to_string(), json!(s.iter().collect::<Vec<_>>()))).collect();
    json!({ "vertices": (0..h.n_vertices()).collect::<Vec<_>>(), "edges": edges })
}

/// Parses a decomposition whose bags and covers refer to the ids in `names`.
pub fn decomp_from_json(v: &Value, names: &Names) -> Result<TreeDecomp> {
    let nodes = id_list(field(v, "nodes")?, "nodes")?;
    let ti = Names::index(&nodes);
    let (ri, bi) = (Names::index(&names.red), Names::index(&names.blue));
    let mut edges = Vec::new();
    for pair in array(field(v, "edges")?, "edges")? {
        let p = array(pair, "a tree edge")?;
        if p.len() != 2 {
            return Err(invalid("a tree edge must be a pair"));
        }
        edges.push((lookup(&ti, &p[0], "tree node")?, lookup(&ti, &p[1], "tree node")?));
    }
    let sets = |key: &str, index: &HashMap<&str, usize>, what: &str| -> Result<Vec<BTreeSet<usize>>> {
        let map = object(field(v, key)?, key)?;
        let mut out = vec![BTreeSet::new(); nodes.len()];
        for (t, members) in map {
            let p = *ti.get(t.as_str()).ok_or_else(|| Error::UnknownId(format!("tree node {t}")))?;
            out[p] = array(members, key)?.iter().map(|x| lookup(index, x, what)).collect::<Result<_>>()?;
        }
        Ok(out)
    };
    let bag = sets("bag", &ri, "red node")?;
    let cover = sets("cover", &bi, "blue node")?;
    let mut d = TreeDecomp::new(&edges, bag, cover, None)?;
    if let Some(r) = v.get("root").filter(|r| !r.is_null()) {
        d.root = Some(lookup(&ti, r, "tree node")?);
    }
    Ok(d)
}

/// Encodes a decomposition with dense integer ids.
pub fn decomp_to_json(d: &TreeDecomp) -> Value {
    let sets = |s: &[BTreeSet<usize>]| -> Map<String, Value> {
        s.iter().enumerate().map(|(t, x)| (t.to_string(), json!(x.iter().collect::<Vec<_>>()))).collect()
    };
    let mut out = json!({
        "nodes": (0..d.n_nodes()).collect::<Vec<_>>(),
        "edges": d.tree_edges().into_iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "bag": sets(&d.bag),
        "cover": sets(&d.cover),
    });
    if let Some(r) = d.root {
        out["root"] = json!(r);
    }
    out
}

/// Encodes a decomposition whose bags and covers use the external ids in
/// `names`; tree nodes keep dense integer ids. The result is readable by
/// [`decomp_from_json`] against the same graph file.
pub fn decomp_to_json_named(d: &TreeDecomp, names: &Names) -> Value {
    let mut out = decomp_to_json(d);
    let rename = |s: &[BTreeSet<usize>], ids: &[String]| -> Map<String, Value> {
        s.iter().enumerate().map(|(t, x)| (t.to_string(), json!(x.iter().map(|&i| &ids[i]).collect::<Vec<_>>()))).collect()
    };
    out["bag"] = Value::Object(rename(&d.bag, &names.red));
    out["cover"] = Value::Object(rename(&d.cover, &names.blue));
    out
}

/// Parses a guard function written as `{i: j}`.
pub fn guard_from_json(v: &Value) -> Result<GuardFunction> {
    let mut g = GuardFunction::empty();
    for (i, j) in object(v, "a guard function")? {
        g.insert(positive(i)?, positive_value(j)?);
    }
    Ok(g)
}

/// Encodes a guard function as `{i: j}`.
pub fn guard_to_json(g: &GuardFunction) -> Value {
    Value::Object(g.iter().map(|(i, j)| (i.to_string(), json!(j))).collect())
}

/// Parses a labeled graph.
pub fn labeled_from_json(v: &Value) -> Result<LabeledGraph> {
    let (graph, names) = incidence_from_json(v)?;
    let (ri, bi) = (Names::index(&names.red), Names::index(&names.blue));
    let labels = |key: &str, index: &HashMap<&str, usize>, what: &str| -> Result<BTreeMap<usize, usize>> {
        match v.get(key) {
            None | Some(Value::Null) => Ok(BTreeMap::new()),
            Some(m) => object(m, key)?.iter().map(|(i, x)| Ok((positive(i)?, lookup(index, x, what)?))).collect(),
        }
    };
    let r = labels("r", &ri, "red node")?;
    let b = labels("b", &bi, "blue node")?;
    let g = match v.get("g") {
        None | Some(Value::Null) => GuardFunction::empty(),
        Some(m) => guard_from_json(m)?,
    };
    LabeledGraph::new(graph, r, b, g)
}

/// Encodes a labeled graph with dense integer ids.
pub fn labeled_to_json(l: &LabeledGraph) -> Value {
    let mut out = incidence_to_json(&l.graph);
    let map = |m: &BTreeMap<usize, usize>| -> Value {
        Value::Object(m.iter().map(|(i, x)| (i.to_string(), json!(x))).collect())
    };
    out["r"] = map(&l.r);
    out["b"] = map(&l.b);
    out["g"] = guard_to_json(&l.g);
    out
}

fn label_set(v: &Value) -> Result<BTreeSet<usize>> {
    array(v, "labels")?.iter().map(positive_value).collect()
}

/// Parses a certificate.
pub fn cert_from_json(v: &Value) -> Result<GliCert> {
    let op = field(v, "op")?.as_str().ok_or_else(|| invalid("op must be a string"))?;
    let of = || -> Result<GliCert> { cert_from_json(field(v, "of")?) };
    Ok(match op {
        "base" => GliCert::Base(labeled_from_json(field(v, "graph")?)?),
        "reclaimR" => GliCert::ReclaimR(Box::new(of()?), label_set(field(v, "labels")?)?),
        "reclaimB" => GliCert::ReclaimB(Box::new(of()?), label_set(field(v, "labels")?)?),
        "switch" => GliCert::Switch(Box::new(of()?), guard_from_json(field(v, "f")?)?),
        "glue" => GliCert::glue(cert_from_json(field(v, "left")?)?, cert_from_json(field(v, "right")?)?),
        other => return Err(invalid(format!("unknown certificate op {other}"))),
    })
}

/// Encodes a certificate.
pub fn cert_to_json(c: &GliCert) -> Value {
    match c {
        GliCert::Base(l) => json!({"op": "base", "graph": labeled_to_json(l)}),
        GliCert::ReclaimR(inner, xs) => json!({"op": "reclaimR", "of": cert_to_json(inner), "labels": xs}),
        GliCert::ReclaimB(inner, xs) => json!({"op": "reclaimB", "of": cert_to_json(inner), "labels": xs}),
        GliCert::Switch(inner, f) => json!({"op": "switch", "of": cert_to_json(inner), "f": guard_to_json(f)}),
        GliCert::Glue(a, b) => json!({"op": "glue", "left": cert_to_json(a), "right": cert_to_json(b)}),
    }
}

/// Parses an exact rational written as `"p/q"`, `"p"`, or an integer.
pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => return Err(invalid(format!("coefficients must be \"p/q\" strings or integers, found {other}"))),
    };
    let r = BigRational::from_str(text.trim()).map_err(|_| invalid(format!("bad rational {text}")))?;
    Ok(r)
}

/// Parses a quantum graph.
pub fn quantum_from_json(v: &Value) -> Result<QuantumGraph> {
    let mut terms = Vec::new();
    for t in array(field(v, "terms")?, "terms")? {
        let coef = rational_from_json(field(t, "coef")?)?;
        let component = labeled_from_json(field(t, "component")?)?;
        let cert = match t.get("cert") {
            None | Some(Value::Null) => None,
            Some(c) => Some(cert_from_json(c)?),
        };
        terms.push(Term { coef, component, cert });
    }
    QuantumGraph::new(terms)
}

/// Encodes a quantum graph; certificates are included when present.
pub fn quantum_to_json(q: &QuantumGraph) -> Value {
    let terms: Vec<Value> = q
        .terms()
        .iter()
        .map(|t| {
            let mut o = json!({"coef": t.coef.to_string(), "component": labeled_to_json(&t.component)});
            if let Some(c) = &t.cert {
                o["cert"] = cert_to_json(c);
            }
            o
        })
        .collect();
    json!({ "terms": terms })
}
