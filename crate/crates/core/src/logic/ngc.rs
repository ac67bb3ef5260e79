//! Syntax checking for the guarded logic and its normal form.
//!
//! In `Gck` mode a formula is checked for well-formedness: blue indices lie
//! in `[k]`, quantified index lists ascend strictly, a quantifier's guard
//! covers exactly the free red variables of its body and every quantified
//! variable is free in the guarded body.
//!
//! In `Ngck` mode the input must have the shape `(Γ_g ∧ ψ)` and membership is
//! decided by the eight inductive rules; since `Dom` of each sub-guard is
//! forced to be the set of free red indices of its formula, the sub-guards
//! of a conjunction are the restrictions of `g`, which makes the check
//! deterministic.

use std::collections::BTreeSet;
use std::fmt;

use super::ast::{free_vars, guard_formula, guarded_free, Formula};
use super::parse::formula_to_guard;
use crate::guard::GuardFunction;

/// Which fragment to check against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntaxMode {
    /// Well-formedness of the guarded counting logic.
    Gck,
    /// Membership in the normal form.
    Ngck,
}

/// One failure found by [`check_syntax`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxViolation {
    /// Normal-form rule that failed (`None` for well-formedness failures).
    pub rule: Option<u8>,
    /// Path from the root to the offending subformula.
    pub path: String,
    /// Explanation.
    pub message: String,
}

impl fmt::Display for SyntaxViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            Some(r) => write!(f, "rule {r} at {}: {}", self.path, self.message),
            None => write!(f, "at {}: {}", self.path, self.message),
        }
    }
}

/// Outcome of a syntax check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxVerdict {
    /// True iff no violation was found.
    pub valid: bool,
    /// Failures, in discovery order.
    pub violations: Vec<SyntaxViolation>,
}

impl SyntaxVerdict {
    fn from(violations: Vec<SyntaxViolation>) -> Self {
        SyntaxVerdict { valid: violations.is_empty(), violations }
    }
}

/// A guarded formula `(Γ_guard ∧ body)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guarded {
    /// The guard function.
    pub guard: GuardFunction,
    /// The guarded formula.
    pub body: Formula,
}

impl Guarded {
    /// Pairs a guard with a body.
    pub fn new(guard: GuardFunction, body: Formula) -> Self {
        Guarded { guard, body }
    }

    /// `(Γ_guard ∧ body)` as a plain formula.
    pub fn to_formula(&self) -> Formula {
        Formula::and(guard_formula(&self.guard), self.body.clone())
    }
}

/// Checks `φ` against the chosen fragment.
///
/// In `Ngck` mode `φ` must be a conjunction whose left conjunct is a guard
/// formula (`T` or a conjunction of `E` atoms); a guard that assigns two
/// blue variables to one red variable is reported as a rule 5 failure, since
/// it can only arise from conjoining incompatible guards.
pub fn check_syntax(phi: &Formula, k: usize, mode: SyntaxMode) -> SyntaxVerdict {
    let mut out = Vec::new();
    match mode {
        SyntaxMode::Gck => check_gck(phi, k, "root", &mut out),
        SyntaxMode::Ngck => match phi {
            Formula::And(g, psi) => match guard_of(g) {
                Ok(guard) => check_ngck(&guard, psi, k, "root", &mut out),
                Err((rule, message)) => out.push(SyntaxViolation { rule, path: "root".into(), message }),
            },
            _ => out.push(SyntaxViolation {
                rule: None,
                path: "root".into(),
                message: "expected a guarded formula (G & F)".into(),
            }),
        },
    }
    SyntaxVerdict::from(out)
}

/// Checks that `(Γ_g ∧ ψ)` belongs to the normal form.
pub fn check_guarded(chi: &Guarded, k: usize) -> SyntaxVerdict {
    let mut out = Vec::new();
    check_ngck(&chi.guard, &chi.body, k, "root", &mut out);
    SyntaxVerdict::from(out)
}

/// Checks the conjunction of two normal-form formulas: the guards must be
/// compatible (rule 5) and the combined formula must pass [`check_guarded`].
pub fn check_and(a: &Guarded, b: &Guarded, k: usize) -> SyntaxVerdict {
    if !a.guard.compatible(&b.guard) {
        let clash: Vec<String> = a.guard.conflicts(&b.guard).iter().map(|i| format!("v{i}")).collect();
        return SyntaxVerdict::from(vec![SyntaxViolation {
            rule: Some(5),
            path: "root".into(),
            message: format!("incompatible guards on {}", clash.join(", ")),
        }]);
    }
    let g = a.guard.union_prec(&b.guard);
    check_guarded(&Guarded::new(g, Formula::and(a.body.clone(), b.body.clone())), k)
}

fn guard_of(f: &Formula) -> Result<GuardFunction, (Option<u8>, String)> {
    formula_to_guard(f).map_err(|m| {
        let rule = if m.contains("twice") { Some(5) } else { None };
        (rule, m)
    })
}

fn blue_range(phi: &Formula, k: usize) -> Option<usize> {
    match phi {
        Formula::AtomE { blue, .. } if *blue == 0 || *blue > k => Some(*blue),
        Formula::EqBlue(a, b) => [*a, *b].into_iter().find(|&j| j == 0 || j > k),
        _ => None,
    }
}

fn check_gck(phi: &Formula, k: usize, path: &str, out: &mut Vec<SyntaxViolation>) {
    let push = |out: &mut Vec<SyntaxViolation>, message: String| {
        out.push(SyntaxViolation { rule: None, path: path.to_string(), message })
    };
    if let Some(j) = blue_range(phi, k) {
        push(out, format!("blue index e{j} outside [1, {k}]"));
    }
    match phi {
        Formula::Top | Formula::AtomE { .. } | Formula::EqBlue(..) | Formula::EqRed(..) => {}
        Formula::Not(f) => check_gck(f, k, &format!("{path}/not"), out),
        Formula::And(a, b) => {
            check_gck(a, k, &format!("{path}/and.1"), out);
            check_gck(b, k, &format!("{path}/and.2"), out);
        }
        Formula::ExistsRed { n, vars, guard, body } | Formula::ExistsBlue { n, vars, guard, body } => {
            let red = matches!(phi, Formula::ExistsRed { .. });
            if *n == 0 {
                push(out, "counting threshold must be at least 1".into());
            }
            if vars.is_empty() || vars.windows(2).any(|w| w[0] >= w[1]) || vars.contains(&0) {
                push(out, "quantified indices must be non-empty and strictly ascending".into());
            }
            if let Some((_, j)) = guard.iter().find(|&(i, j)| i == 0 || j == 0 || j > k) {
                push(out, format!("guard value e{j} outside [1, {k}]"));
            }
            let body_red = free_vars(body).red;
            if guard.dom() != body_red {
                push(out, format!("guard domain {:?} differs from free red indices {:?}", guard.dom(), body_red));
            }
            let fv = guarded_free(guard, body);
            let pool = if red { &fv.red } else { &fv.blue };
            if let Some(x) = vars.iter().find(|x| !pool.contains(x)) {
                let s = if red { 'v' } else { 'e' };
                push(out, format!("quantified {s}{x} is not free in the guarded body"));
            }
            if !red {
                if let Some(j) = vars.iter().find(|&&j| j > k) {
                    push(out, format!("quantified e{j} outside [1, {k}]"));
                }
            }
            check_gck(body, k, &format!("{path}/exists"), out);
        }
    }
}

fn check_ngck(g: &GuardFunction, psi: &Formula, k: usize, path: &str, out: &mut Vec<SyntaxViolation>) {
    let push = |out: &mut Vec<SyntaxViolation>, rule: u8, message: String| {
        out.push(SyntaxViolation { rule: Some(rule), path: path.to_string(), message })
    };
    if let Some((_, j)) = g.iter().find(|&(i, j)| i == 0 || j == 0 || j > k) {
        out.push(SyntaxViolation {
            rule: None,
            path: path.to_string(),
            message: format!("guard value e{j} outside [1, {k}]"),
        });
    }
    if let Some(j) = blue_range(psi, k) {
        out.push(SyntaxViolation {
            rule: None,
            path: path.to_string(),
            message: format!("blue index e{j} outside [1, {k}]"),
        });
    }
    match psi {
        Formula::Top => push(out, 1, "T is not a base case of the normal form".into()),
        Formula::AtomE { red, .. } => {
            if g.dom() != BTreeSet::from([*red]) {
                push(out, 1, format!("guard domain must be {{{red}}}, found {:?}", g.dom()));
            }
        }
        Formula::EqBlue(..) => {
            if !g.is_empty() {
                push(out, 2, format!("guard domain must be empty, found {:?}", g.dom()));
            }
        }
        Formula::EqRed(a, b) => {
            if g.dom() != BTreeSet::from([*a, *b]) {
                push(out, 3, format!("guard domain must be {{{a}, {b}}}, found {:?}", g.dom()));
            }
        }
        Formula::Not(f) => check_ngck(g, f, k, &format!("{path}/not"), out),
        Formula::And(a, b) => {
            let ra = free_vars(a).red;
            let rb = free_vars(b).red;
            let union: BTreeSet<usize> = ra.union(&rb).copied().collect();
            if g.dom() != union {
                push(out, 5, format!("guard domain {:?} differs from free red indices {:?}", g.dom(), union));
            }
            check_ngck(&g.restrict(&ra), a, k, &format!("{path}/and.1"), out);
            check_ngck(&g.restrict(&rb), b, k, &format!("{path}/and.2"), out);
        }
        Formula::ExistsRed { n, vars, guard: inner, body } => {
            if *n == 0 || vars.is_empty() || vars.windows(2).any(|w| w[0] >= w[1]) {
                push(out, 6, "threshold and index list must be non-empty, ascending".into());
            }
            let s: BTreeSet<usize> = vars.iter().copied().collect();
            if !s.is_subset(&inner.dom()) {
                push(out, 6, format!("quantified {s:?} not contained in guard domain {:?}", inner.dom()));
            }
            if *g != inner.minus(&s) {
                push(out, 6, format!("outer guard {g} must equal {} minus the quantified indices", inner));
            }
            check_ngck(inner, body, k, &format!("{path}/exists"), out);
        }
        Formula::ExistsBlue { n, vars, guard: inner, body } => {
            if *n == 0 || vars.is_empty() || vars.windows(2).any(|w| w[0] >= w[1]) {
                push(out, 7, "threshold and index list must be non-empty, ascending".into());
            }
            let s: BTreeSet<usize> = vars.iter().copied().collect();
            let fb = guarded_free(inner, body).blue;
            if !s.is_subset(&fb) {
                push(out, 7, format!("quantified {s:?} not free in the guarded body"));
            }
            if g.dom() != inner.dom() {
                push(out, 7, format!("guard domains differ: {:?} vs {:?}", g.dom(), inner.dom()));
            } else {
                let img = inner.img();
                for (i, j) in g.iter() {
                    let old = inner.get(i).expect("same domain");
                    if !(j == old || s.contains(&j) || !img.contains(&j)) {
                        push(out, 8, format!("guard of v{i} changes from e{old} to e{j}, which is still in use"));
                    }
                }
            }
            check_ngck(inner, body, k, &format!("{path}/exists"), out);
        }
    }
}
