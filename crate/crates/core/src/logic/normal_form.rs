//! Compilation of well-formed formulas into the normal form.
//!
//! Given `φ` and a guard function `f` whose domain is the set of free red
//! indices of `φ`, [`to_normal_form`] returns `φ_f` such that `(Γ_f ∧ φ_f)`
//! passes the normal-form check, has the same free variables as `(Γ_f ∧ φ)`
//! and is equivalent to it.

use super::ast::{free_vars, guard_formula, Formula};
use super::ngc::{check_syntax, SyntaxMode};
use crate::error::{Error, Result};
use crate::guard::GuardFunction;

/// Computes `φ_f`.
///
/// Quantifiers rebuild their guarded body as `(Γ_g' ∧ (Γ_g ∧ χ_g'))`; when
/// `g` is empty (only possible under a blue quantifier) the redundant `Γ_g = ⊤`
/// conjunct is dropped, because `⊤` on its own is not a normal-form base case.
pub fn to_normal_form(phi: &Formula, f: &GuardFunction, k: usize) -> Result<Formula> {
    let verdict = check_syntax(phi, k, SyntaxMode::Gck);
    if !verdict.valid {
        let msgs: Vec<String> = verdict.violations.iter().map(ToString::to_string).collect();
        return Err(Error::NotInFragment(msgs.join("; ")));
    }
    if f.dom() != free_vars(phi).red {
        return Err(Error::Precondition(format!(
            "guard domain {:?} must equal the free red indices {:?}",
            f.dom(),
            free_vars(phi).red
        )));
    }
    if let Some((_, j)) = f.iter().find(|&(_, j)| j == 0 || j > k) {
        return Err(Error::Precondition(format!("guard value e{j} outside [1, {k}]")));
    }
    Ok(nf(phi, f))
}

fn nf(phi: &Formula, f: &GuardFunction) -> Formula {
    match phi {
        Formula::Top => Formula::not(Formula::exists_blue(
            1,
            vec![1],
            GuardFunction::empty(),
            Formula::not(Formula::EqBlue(1, 1)),
        )),
        Formula::AtomE { .. } | Formula::EqBlue(..) | Formula::EqRed(..) => phi.clone(),
        Formula::Not(chi) => Formula::not(nf(chi, f)),
        Formula::And(chi, xi) => {
            let fc = f.restrict(&free_vars(chi).red);
            let fx = f.restrict(&free_vars(xi).red);
            Formula::and(nf(chi, &fc), nf(xi, &fx))
        }
        Formula::ExistsRed { n, vars, guard: g, body: chi } => {
            let g2 = f.union_prec(g);
            Formula::exists_red(*n, vars.clone(), g2.clone(), rebuilt_body(g, nf(chi, &g2)))
        }
        Formula::ExistsBlue { n, vars, guard: g, body: chi } => {
            let img = g.img();
            let g2 = GuardFunction::from_pairs(g.iter().map(|(i, gi)| {
                let fi = f.get(i).expect("Dom(f) = Dom(g) under a blue quantifier");
                if vars.contains(&fi) || !img.contains(&fi) {
                    (i, gi)
                } else {
                    (i, fi)
                }
            }));
            Formula::exists_blue(*n, vars.clone(), g2.clone(), rebuilt_body(g, nf(chi, &g2)))
        }
    }
}

fn rebuilt_body(g: &GuardFunction, chi: Formula) -> Formula {
    if g.is_empty() {
        chi
    } else {
        Formula::and(guard_formula(g), chi)
    }
}
