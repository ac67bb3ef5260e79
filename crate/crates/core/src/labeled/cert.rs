//! Derivation certificates for guarded labeled incidence graphs and their
//! checked evaluation.

use std::collections::BTreeSet;

use super::graph::{apply_transition, check_transition, glue, has_real_guards, reclaim, LabeledGraph};
use crate::error::{Error, Result};
use crate::guard::GuardFunction;
use crate::model::Color;

/// A derivation of a labeled graph by the five construction rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GliCert {
    /// Rule 1: a fully labeled graph with real guards.
    Base(LabeledGraph),
    /// Rule 2: remove red labels.
    ReclaimR(Box<GliCert>, BTreeSet<usize>),
    /// Rule 3: remove blue labels that are not used as guards.
    ReclaimB(Box<GliCert>, BTreeSet<usize>),
    /// Rule 4: apply a transition.
    Switch(Box<GliCert>, GuardFunction),
    /// Rule 5: glue two derivations with compatible guards.
    Glue(Box<GliCert>, Box<GliCert>),
}

impl GliCert {
    /// Rule 2 constructor.
    pub fn reclaim_r(c: GliCert, xs: impl IntoIterator<Item = usize>) -> GliCert {
        GliCert::ReclaimR(Box::new(c), xs.into_iter().collect())
    }

    /// Rule 3 constructor.
    pub fn reclaim_b(c: GliCert, xs: impl IntoIterator<Item = usize>) -> GliCert {
        GliCert::ReclaimB(Box::new(c), xs.into_iter().collect())
    }

    /// Rule 4 constructor.
    pub fn switch(c: GliCert, f: GuardFunction) -> GliCert {
        GliCert::Switch(Box::new(c), f)
    }

    /// Rule 5 constructor.
    pub fn glue(a: GliCert, b: GliCert) -> GliCert {
        GliCert::Glue(Box::new(a), Box::new(b))
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        match self {
            GliCert::Base(_) => 1,
            GliCert::ReclaimR(c, _) | GliCert::ReclaimB(c, _) | GliCert::Switch(c, _) => 1 + c.size(),
            GliCert::Glue(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Largest blue label used anywhere in the certificate.
    pub fn max_blue_label(&self) -> usize {
        match self {
            GliCert::Base(l) => l.b.keys().copied().chain(l.g.iter().map(|(_, j)| j)).max().unwrap_or(0),
            GliCert::ReclaimR(c, _) | GliCert::ReclaimB(c, _) => c.max_blue_label(),
            GliCert::Switch(c, f) => c.max_blue_label().max(f.max_blue()),
            GliCert::Glue(a, b) => a.max_blue_label().max(b.max_blue_label()),
        }
    }
}

fn rule(rule: u8, message: impl Into<String>) -> Error {
    Error::CertRule { rule, message: message.into() }
}

/// Checks the side conditions of the base rule.
pub fn check_base(l: &LabeledGraph) -> Result<()> {
    l.check().map_err(|e| rule(1, e.to_string()))?;
    if l.imgr().len() != l.graph.n_red() {
        return Err(rule(1, "not every red node carries a label"));
    }
    if l.imgb().len() != l.graph.n_blue() {
        return Err(rule(1, "not every blue node carries a label"));
    }
    if !has_real_guards(l, &l.g) {
        return Err(rule(1, "guards are not real"));
    }
    Ok(())
}

/// Evaluates a certificate, validating every rule's side conditions.
pub fn eval_cert(c: &GliCert) -> Result<LabeledGraph> {
    match c {
        GliCert::Base(l) => {
            check_base(l)?;
            Ok(l.clone())
        }
        GliCert::ReclaimR(inner, xs) => {
            let l = eval_cert(inner)?;
            if !xs.is_subset(&l.domr()) {
                return Err(rule(2, format!("{xs:?} is not contained in Dom(r) = {:?}", l.domr())));
            }
            reclaim(&l, Color::Red, xs)
        }
        GliCert::ReclaimB(inner, xs) => {
            let l = eval_cert(inner)?;
            if !xs.is_subset(&l.domb()) {
                return Err(rule(3, format!("{xs:?} is not contained in Dom(b) = {:?}", l.domb())));
            }
            if let Some(j) = xs.intersection(&l.g.img()).next() {
                return Err(rule(3, format!("blue label {j} is still used as a guard")));
            }
            reclaim(&l, Color::Blue, xs)
        }
        GliCert::Switch(inner, f) => {
            let l = eval_cert(inner)?;
            check_transition(&l.g, f).map_err(|e| rule(4, e.to_string()))?;
            apply_transition(&l, f)
        }
        GliCert::Glue(a, b) => {
            let la = eval_cert(a)?;
            let lb = eval_cert(b)?;
            if !la.g.compatible(&lb.g) {
                return Err(rule(5, format!("guards disagree on red labels {:?}", la.g.conflicts(&lb.g))));
            }
            Ok(glue(&la, &lb).graph)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeled::graph::from_guard_fn;

    fn gf(pairs: &[(usize, usize)]) -> GuardFunction {
        GuardFunction::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn base_of_guard_graph() {
        let l = from_guard_fn(&gf(&[(1, 1)])).unwrap();
        assert_eq!(eval_cert(&GliCert::Base(l.clone())).unwrap(), l);
    }

    #[test]
    fn rule_violations_carry_numbers() {
        let l = from_guard_fn(&gf(&[(1, 1)])).unwrap();
        let base = GliCert::Base(l.clone());
        let mut unlabeled = l.clone();
        unlabeled.b.clear();
        assert!(matches!(eval_cert(&GliCert::Base(unlabeled)), Err(Error::CertRule { rule: 1, .. })));
        assert!(matches!(eval_cert(&GliCert::reclaim_r(base.clone(), [2])), Err(Error::CertRule { rule: 2, .. })));
        assert!(matches!(eval_cert(&GliCert::reclaim_b(base.clone(), [1])), Err(Error::CertRule { rule: 3, .. })));
        assert!(matches!(
            eval_cert(&GliCert::switch(base.clone(), gf(&[(2, 1)]))),
            Err(Error::CertRule { rule: 4, .. })
        ));
        let other = GliCert::Base(from_guard_fn(&gf(&[(1, 2)])).unwrap());
        assert!(matches!(eval_cert(&GliCert::glue(base, other)), Err(Error::CertRule { rule: 5, .. })));
    }

    #[test]
    fn reclaims_to_label_free() {
        let base = GliCert::Base(from_guard_fn(&gf(&[(1, 1), (2, 1)])).unwrap());
        let c = GliCert::reclaim_b(GliCert::reclaim_r(base, [1, 2]), [1]);
        let l = eval_cert(&c).unwrap();
        assert!(l.is_label_free());
        assert_eq!(l.graph.num_edges(), 2);
    }
}
