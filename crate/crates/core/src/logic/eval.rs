//! Counting-quantifier evaluation of formulas over incidence graphs.

use std::collections::BTreeMap;

use super::ast::{free_vars, Formula};
use crate::error::{Error, Result};
use crate::guard::GuardFunction;
use crate::model::IncidenceGraph;

/// An incidence graph together with a partial assignment of variables.
#[derive(Debug, Clone)]
pub struct Interpretation<'a> {
    /// The structure.
    pub graph: &'a IncidenceGraph,
    /// Red variable index → red node id.
    pub red: BTreeMap<usize, usize>,
    /// Blue variable index → blue node id.
    pub blue: BTreeMap<usize, usize>,
}

impl<'a> Interpretation<'a> {
    /// An interpretation with the empty assignment.
    pub fn new(graph: &'a IncidenceGraph) -> Self {
        Interpretation { graph, red: BTreeMap::new(), blue: BTreeMap::new() }
    }

    /// An interpretation with the given assignment; ids are range-checked.
    pub fn with_assignment(
        graph: &'a IncidenceGraph,
        red: BTreeMap<usize, usize>,
        blue: BTreeMap<usize, usize>,
    ) -> Result<Self> {
        for (&i, &v) in &red {
            if v >= graph.n_red() {
                return Err(Error::SortMismatch(format!("v{i} is assigned {v}, which is not a red node")));
            }
        }
        for (&j, &e) in &blue {
            if e >= graph.n_blue() {
                return Err(Error::SortMismatch(format!("e{j} is assigned {e}, which is not a blue node")));
            }
        }
        Ok(Interpretation { graph, red, blue })
    }

    /// True iff the assignment satisfies `Γ_g` (unassigned variables fail).
    pub fn satisfies_guard(&self, g: &GuardFunction) -> bool {
        g.iter().all(|(i, j)| match (self.blue.get(&j), self.red.get(&i)) {
            (Some(&e), Some(&v)) => self.graph.has_edge(e, v),
            _ => false,
        })
    }
}

/// Evaluates `φ` under `m`. Every free variable of `φ` must be assigned.
pub fn eval(m: &Interpretation<'_>, phi: &Formula) -> Result<bool> {
    let fv = free_vars(phi);
    if let Some(i) = fv.red.iter().find(|i| !m.red.contains_key(i)) {
        return Err(Error::UnassignedFreeVariable(format!("v{i}")));
    }
    if let Some(j) = fv.blue.iter().find(|j| !m.blue.contains_key(j)) {
        return Err(Error::UnassignedFreeVariable(format!("e{j}")));
    }
    let mut ev = Evaluator {
        graph: m.graph,
        red: dense(&m.red),
        blue: dense(&m.blue),
    };
    ev.eval(phi)
}

/// Evaluates a sentence on a graph.
pub fn models(graph: &IncidenceGraph, sentence: &Formula) -> Result<bool> {
    eval(&Interpretation::new(graph), sentence)
}

/// Number of tuples witnessing the quantified formula `∃≥1 vars.(Γ_g ∧ body)`
/// (i.e. the exact count, without short-circuiting). `φ` must be a quantifier.
pub fn witness_count(m: &Interpretation<'_>, phi: &Formula) -> Result<u64> {
    let mut ev = Evaluator { graph: m.graph, red: dense(&m.red), blue: dense(&m.blue) };
    match phi {
        Formula::ExistsRed { vars, guard, body, .. } => ev.count(true, vars, guard, body, u64::MAX),
        Formula::ExistsBlue { vars, guard, body, .. } => ev.count(false, vars, guard, body, u64::MAX),
        _ => Err(Error::Precondition("witness_count needs a quantified formula".into())),
    }
}

fn dense(m: &BTreeMap<usize, usize>) -> Vec<Option<usize>> {
    let len = m.keys().next_back().map_or(0, |&k| k + 1);
    let mut v = vec![None; len];
    for (&k, &x) in m {
        v[k] = Some(x);
    }
    v
}

struct Evaluator<'a> {
    graph: &'a IncidenceGraph,
    red: Vec<Option<usize>>,
    blue: Vec<Option<usize>>,
}

fn get(v: &[Option<usize>], i: usize) -> Option<usize> {
    v.get(i).copied().flatten()
}

fn set(v: &mut Vec<Option<usize>>, i: usize, x: Option<usize>) {
    if v.len() <= i {
        v.resize(i + 1, None);
    }
    v[i] = x;
}

impl Evaluator<'_> {
    fn red_of(&self, i: usize) -> Result<usize> {
        get(&self.red, i).ok_or_else(|| Error::UnassignedFreeVariable(format!("v{i}")))
    }

    fn blue_of(&self, j: usize) -> Result<usize> {
        get(&self.blue, j).ok_or_else(|| Error::UnassignedFreeVariable(format!("e{j}")))
    }

    fn guard_holds(&self, g: &GuardFunction) -> Result<bool> {
        for (i, j) in g.iter() {
            if !self.graph.has_edge(self.blue_of(j)?, self.red_of(i)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn eval(&mut self, phi: &Formula) -> Result<bool> {
        Ok(match phi {
            Formula::Top => true,
            Formula::AtomE { blue, red } => self.graph.has_edge(self.blue_of(*blue)?, self.red_of(*red)?),
            Formula::EqBlue(a, b) => self.blue_of(*a)? == self.blue_of(*b)?,
            Formula::EqRed(a, b) => self.red_of(*a)? == self.red_of(*b)?,
            Formula::Not(f) => !self.eval(f)?,
            Formula::And(a, b) => self.eval(a)? && self.eval(b)?,
            Formula::ExistsRed { n, vars, guard, body } => self.count(true, vars, guard, body, *n)? >= *n,
            Formula::ExistsBlue { n, vars, guard, body } => self.count(false, vars, guard, body, *n)? >= *n,
        })
    }

    /// Counts satisfying tuples, stopping once `limit` is reached.
    fn count(&mut self, red: bool, vars: &[usize], guard: &GuardFunction, body: &Formula, limit: u64) -> Result<u64> {
        let saved: Vec<Option<usize>> =
            vars.iter().map(|&x| if red { get(&self.red, x) } else { get(&self.blue, x) }).collect();
        for &x in vars {
            if red {
                set(&mut self.red, x, None);
            } else {
                set(&mut self.blue, x, None);
            }
        }
        let mut count = 0u64;
        let res = self.enumerate(red, vars, 0, guard, body, limit, &mut count);
        for (&x, old) in vars.iter().zip(saved) {
            if red {
                set(&mut self.red, x, old);
            } else {
                set(&mut self.blue, x, old);
            }
        }
        res.map(|()| count)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &mut self,
        red: bool,
        vars: &[usize],
        pos: usize,
        guard: &GuardFunction,
        body: &Formula,
        limit: u64,
        count: &mut u64,
    ) -> Result<()> {
        if *count >= limit {
            return Ok(());
        }
        if pos == vars.len() {
            if self.guard_holds(guard)? && self.eval(body)? {
                *count += 1;
            }
            return Ok(());
        }
        let x = vars[pos];
        let candidates: Vec<usize> = if red {
            // a guarded red variable can only range over its guard's neighbourhood
            match guard.get(x).and_then(|j| get(&self.blue, j)) {
                Some(e) => self.graph.nbr(e).iter().copied().collect(),
                None => (0..self.graph.n_red()).collect(),
            }
        } else {
            (0..self.graph.n_blue()).collect()
        };
        for c in candidates {
            if red {
                set(&mut self.red, x, Some(c));
            } else {
                set(&mut self.blue, x, Some(c));
                // prune on guard atoms whose both ends are now assigned
                let ok = guard.iter().filter(|&(_, j)| j == x).all(|(i, _)| match get(&self.red, i) {
                    Some(v) => self.graph.has_edge(c, v),
                    None => true,
                });
                if !ok {
                    continue;
                }
            }
            self.enumerate(red, vars, pos + 1, guard, body, limit, count)?;
            if *count >= limit {
                break;
            }
        }
        if red {
            set(&mut self.red, x, None);
        } else {
            set(&mut self.blue, x, None);
        }
        Ok(())
    }
}
