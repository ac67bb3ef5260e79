//! k-labeled quantum incidence graphs: finite non-empty linear combinations of
//! compatible labeled graphs with exact rational coefficients.
//!
//! Every operation on labeled graphs lifts componentwise; glueing two quantum
//! graphs multiplies out all pairs of terms. Components may carry a
//! derivation certificate, which the lifted operations extend so that the
//! certificate of every produced component stays valid whenever the rule's
//! side conditions hold.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::guard::GuardFunction;
use crate::homcount::count_homs_labeled_with;
use crate::labeled::{apply_transition, check_transition, eval_cert, from_guard_fn, glue, reclaim, GliCert, LabeledGraph};
use crate::model::{Color, IncidenceGraph};

/// One term `α · L` of a quantum graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    /// The coefficient `α`.
    pub coef: BigRational,
    /// The component `L`.
    pub component: LabeledGraph,
    /// A derivation of `component`, when known.
    pub cert: Option<GliCert>,
}

impl Term {
    /// A term without a certificate.
    pub fn new(coef: BigRational, component: LabeledGraph) -> Self {
        Term { coef, component, cert: None }
    }

    /// A term with a certificate.
    pub fn certified(coef: BigRational, component: LabeledGraph, cert: GliCert) -> Self {
        Term { coef, component, cert: Some(cert) }
    }
}

/// A k-labeled quantum incidence graph.
///
/// All components share `Dom(r)`, `Dom(b)` and the guard function. Terms are
/// kept as produced; isomorphic components are never merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumGraph {
    terms: Vec<Term>,
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuantumGraph {
    /// Builds a quantum graph, checking non-emptiness and compatibility.
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Incompatible("a quantum graph needs a term".into()))?;
        let (domr, domb, g) = (first.component.domr(), first.component.domb(), first.component.g.clone());
        for (idx, t) in terms.iter().enumerate() {
            t.component.check()?;
            if t.component.domr() != domr || t.component.domb() != domb || t.component.g != g {
                return Err(Error::Incompatible(format!("term {idx} differs in label domains or guards")));
            }
        }
        Ok(QuantumGraph { terms })
    }

    /// `α · L`.
    pub fn single(coef: BigRational, component: LabeledGraph) -> Self {
        QuantumGraph { terms: vec![Term::new(coef, component)] }
    }

    /// `α · L` with the certificate of `L`.
    pub fn single_certified(coef: BigRational, component: LabeledGraph, cert: GliCert) -> Self {
        QuantumGraph { terms: vec![Term::certified(coef, component, cert)] }
    }

    /// The terms.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `Dom(r)` shared by all components.
    pub fn domr(&self) -> BTreeSet<usize> {
        self.terms[0].component.domr()
    }

    /// `Dom(b)` shared by all components.
    pub fn domb(&self) -> BTreeSet<usize> {
        self.terms[0].component.domb()
    }

    /// The shared guard function `g_Q`.
    pub fn guard(&self) -> &GuardFunction {
        &self.terms[0].component.g
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Always false: quantum graphs are non-empty.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff every component carries a certificate.
    pub fn is_certified(&self) -> bool {
        self.terms.iter().all(|t| t.cert.is_some())
    }

    /// Validates every certificate and checks that it evaluates to its
    /// component. Returns the number of certified terms.
    pub fn check_certs(&self) -> Result<usize> {
        let mut n = 0;
        for (idx, t) in self.terms.iter().enumerate() {
            if let Some(c) = &t.cert {
                if eval_cert(c)? != t.component {
                    return Err(Error::Assertion(format!("certificate of term {idx} evaluates elsewhere")));
                }
                n += 1;
            }
        }
        Ok(n)
    }

    /// Lifted red reclaim.
    pub fn reclaim_red(&self, xs: &BTreeSet<usize>) -> Result<Self> {
        if !xs.is_subset(&self.domr()) {
            return Err(Error::Precondition(format!("{xs:?} is not contained in Dom(r) = {:?}", self.domr())));
        }
        self.map_terms(|t| {
            let component = reclaim(&t.component, Color::Red, xs)?;
            let cert = t.cert.clone().map(|c| GliCert::reclaim_r(c, xs.iter().copied()));
            Ok(Term { coef: t.coef.clone(), component, cert })
        })
    }

    /// Lifted blue reclaim. Certificates are kept only when no reclaimed label
    /// is a guard value, as the derivation rule requires.
    pub fn reclaim_blue(&self, xs: &BTreeSet<usize>) -> Result<Self> {
        if !xs.is_subset(&self.domb()) {
            return Err(Error::Precondition(format!("{xs:?} is not contained in Dom(b) = {:?}", self.domb())));
        }
        let certifiable = xs.is_disjoint(&self.guard().img());
        self.map_terms(|t| {
            let component = reclaim(&t.component, Color::Blue, xs)?;
            let cert = t.cert.clone().filter(|_| certifiable).map(|c| GliCert::reclaim_b(c, xs.iter().copied()));
            Ok(Term { coef: t.coef.clone(), component, cert })
        })
    }

    /// Lifted transition; coefficients are kept.
    pub fn switch(&self, f: &GuardFunction) -> Result<Self> {
        check_transition(self.guard(), f)?;
        self.map_terms(|t| {
            let component = apply_transition(&t.component, f)?;
            let cert = t.cert.clone().map(|c| GliCert::switch(c, f.clone()));
            Ok(Term { coef: t.coef.clone(), component, cert })
        })
    }

    /// Lifted glue: all pairs of terms, coefficients multiplied.
    pub fn glue(&self, other: &QuantumGraph) -> Result<Self> {
        self.glue_capped(other, &Caps::default())
    }

    /// Lifted glue with an explicit term cap.
    pub fn glue_capped(&self, other: &QuantumGraph, caps: &Caps) -> Result<Self> {
        if !self.guard().compatible(other.guard()) {
            return Err(Error::Incompatible(format!(
                "guards disagree on red labels {:?}",
                self.guard().conflicts(other.guard())
            )));
        }
        let n = self.len().saturating_mul(other.len());
        if n > caps.quantum_terms {
            return Err(Error::CapExceeded(format!("glue would produce {n} terms (cap {})", caps.quantum_terms)));
        }
        let mut terms = Vec::with_capacity(n);
        for a in &self.terms {
            for b in &other.terms {
                let component = glue(&a.component, &b.component).graph;
                let cert = match (&a.cert, &b.cert) {
                    (Some(x), Some(y)) => Some(GliCert::glue(x.clone(), y.clone())),
                    _ => None,
                };
                terms.push(Term { coef: &a.coef * &b.coef, component, cert });
            }
        }
        Ok(QuantumGraph { terms })
    }

    /// The unit `Q⁰` of glueing for this quantum graph: the graph of the guard
    /// function, extended by one isolated blue node for every blue label that
    /// is not a guard value, so that it is compatible with `Q`. For an empty
    /// guard function without blue labels it is the empty graph.
    pub fn unit(&self) -> Result<Self> {
        let component = guard_graph_with_blue(self.guard(), &self.domb())?;
        let cert = GliCert::Base(component.clone());
        Ok(QuantumGraph::single_certified(BigRational::one(), component, cert))
    }

    /// The `i`-fold glue power; `Q⁰` is [`QuantumGraph::unit`].
    pub fn power(&self, i: usize, caps: &Caps) -> Result<Self> {
        if i == 0 {
            return self.unit();
        }
        let mut acc = self.clone();
        for _ in 1..i {
            acc = acc.glue_capped(self, caps)?;
        }
        Ok(acc)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigRational) -> Self {
        let terms = self.terms.iter().map(|t| Term { coef: &t.coef * c, ..t.clone() }).collect();
        QuantumGraph { terms }
    }

    /// Concatenates the terms of two compatible quantum graphs.
    pub fn sum(&self, other: &QuantumGraph) -> Result<Self> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        QuantumGraph::new(terms)
    }

    fn map_terms(&self, f: impl Fn(&Term) -> Result<Term>) -> Result<Self> {
        let terms = self.terms.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(QuantumGraph { terms })
    }
}

impl fmt::Display for QuantumGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, t) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(
                f,
                "{}·L[{}r,{}b,{}e]",
                t.coef,
                t.component.graph.n_red(),
                t.component.graph.n_blue(),
                t.component.graph.num_edges()
            )?;
        }
        Ok(())
    }
}

/// The graph of `g` extended by one isolated blue node for every label of
/// `domb ∖ Img(g)`; the empty graph when both are empty. It is a valid base
/// graph whenever `Img(g) ⊆ domb`.
pub fn guard_graph_with_blue(g: &GuardFunction, domb: &BTreeSet<usize>) -> Result<LabeledGraph> {
    let base = if g.is_empty() { LabeledGraph::empty() } else { from_guard_fn(g)? };
    let extra: Vec<usize> = domb.difference(&g.img()).copied().collect();
    let n_blue = base.graph.n_blue();
    let graph: IncidenceGraph = base.graph.with_extra_blue(&vec![BTreeSet::new(); extra.len()])?;
    let mut b = base.b;
    b.extend(extra.iter().enumerate().map(|(k, &j)| (j, n_blue + k)));
    LabeledGraph::new(graph, base.r, b, base.g)
}

/// `hom(Q, L') = Σ αᵢ · hom(Lᵢ, L')` with default caps.
pub fn qhom(q: &QuantumGraph, target: &LabeledGraph) -> Result<BigRational> {
    qhom_with(q, target, &Caps::default())
}

/// `hom(Q, L') = Σ αᵢ · hom(Lᵢ, L')`.
pub fn qhom_with(q: &QuantumGraph, target: &LabeledGraph, caps: &Caps) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for t in &q.terms {
        if t.coef.is_zero() {
            continue;
        }
        let h = count_homs_labeled_with(&t.component, target, caps)?;
        total += &t.coef * to_rational(h);
    }
    Ok(total)
}

/// Converts a homomorphism count into a rational.
pub fn to_rational(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Coefficients `a₀, a₁, …` of the least-degree polynomial that vanishes on
/// `xs` and equals 1 on `ys`.
pub fn indicator_polynomial(xs: &BTreeSet<u64>, ys: &BTreeSet<u64>) -> Result<Vec<BigRational>> {
    if let Some(x) = xs.intersection(ys).next() {
        return Err(Error::OverlappingSets(format!("{x} lies in both sets")));
    }
    if xs.is_empty() && ys.is_empty() {
        return Err(Error::Precondition("both interpolation sets are empty".into()));
    }
    let points: Vec<u64> = xs.union(ys).copied().collect();
    let mut coeffs = vec![BigRational::zero(); points.len()];
    for &y in ys {
        // the Lagrange basis polynomial of y
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for &z in points.iter().filter(|&&z| z != y) {
            let z_r = BigRational::from_integer(BigInt::from(z));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &z_r;
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(y)) - z_r;
        }
        for (d, c) in basis.into_iter().enumerate() {
            coeffs[d] += c / &denom;
        }
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// Evaluates a polynomial given by its coefficients.
pub fn eval_polynomial(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// `Q[X, Y] = Σ aᵢ Qⁱ` for the indicator polynomial of `(X, Y)`, with default caps.
pub fn normalize_indicator(q: &QuantumGraph, xs: &BTreeSet<u64>, ys: &BTreeSet<u64>) -> Result<QuantumGraph> {
    normalize_indicator_with(q, xs, ys, &Caps::default())
}

/// `Q[X, Y] = Σ aᵢ Qⁱ` for the indicator polynomial of `(X, Y)`.
///
/// Powers with a zero coefficient are skipped; if the polynomial is zero the
/// result is `0 · Q⁰`.
pub fn normalize_indicator_with(
    q: &QuantumGraph,
    xs: &BTreeSet<u64>,
    ys: &BTreeSet<u64>,
    caps: &Caps,
) -> Result<QuantumGraph> {
    let coeffs = indicator_polynomial(xs, ys)?;
    let mut terms: Vec<Term> = Vec::new();
    let mut power: Option<QuantumGraph> = None;
    for (i, a) in coeffs.iter().enumerate() {
        let next = match (i, &power) {
            (0, _) => q.unit()?,
            (1, _) => q.clone(),
            (_, Some(p)) => p.glue_capped(q, caps)?,
            (_, None) => unreachable!("powers are built in order"),
        };
        if !a.is_zero() {
            if terms.len() + next.len() > caps.quantum_terms {
                return Err(Error::CapExceeded(format!("indicator exceeds {} terms", caps.quantum_terms)));
            }
            terms.extend(next.scale(a).terms);
        }
        if i >= 1 {
            power = Some(next);
        }
    }
    if terms.is_empty() {
        terms = q.unit()?.scale(&BigRational::zero()).terms;
    }
    Ok(QuantumGraph { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcount::count_homs_labeled;
    use crate::labeled::from_guard_fn;

    fn gf(pairs: &[(usize, usize)]) -> GuardFunction {
        GuardFunction::from_pairs(pairs.iter().copied())
    }

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    fn q_ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Guard graph for v1 -> e1 plus a second red node on e1 (unlabeled).
    fn two_on_one() -> LabeledGraph {
        let graph = IncidenceGraph::new(2, 1, [(0, 0), (0, 1)]).unwrap();
        LabeledGraph::new(graph, [(1, 0)].into(), [(1, 0)].into(), gf(&[(1, 1)])).unwrap()
    }

    /// A host with real guard v1 -> e1 where e1 has `n` red neighbours.
    fn host(n: usize) -> LabeledGraph {
        let graph = IncidenceGraph::new(n, 1, (0..n).map(|v| (0, v))).unwrap();
        LabeledGraph::new(graph, [(1, 0)].into(), [(1, 0)].into(), gf(&[(1, 1)])).unwrap()
    }

    #[test]
    fn qhom_is_linear() {
        let l = two_on_one();
        let t = host(3);
        let h = to_rational(count_homs_labeled(&l, &t).unwrap());
        assert_eq!(qhom(&QuantumGraph::single(rat(1), l.clone()), &t).unwrap(), h);
        assert_eq!(qhom(&QuantumGraph::single(rat(0), l.clone()), &t).unwrap(), rat(0));
        let half = QuantumGraph::new(vec![Term::new(q_ratio(1, 2), l.clone()), Term::new(q_ratio(1, 2), l)]).unwrap();
        assert_eq!(qhom(&half, &t).unwrap(), h);
    }

    #[test]
    fn incompatible_terms_rejected() {
        let a = from_guard_fn(&gf(&[(1, 1)])).unwrap();
        let b = from_guard_fn(&gf(&[(1, 2)])).unwrap();
        assert!(matches!(
            QuantumGraph::new(vec![Term::new(rat(1), a), Term::new(rat(1), b)]),
            Err(Error::Incompatible(_))
        ));
        assert!(matches!(QuantumGraph::new(vec![]), Err(Error::Incompatible(_))));
    }

    #[test]
    fn glue_multiplies_coefficients() {
        let l = two_on_one();
        let q = QuantumGraph::single(rat(2), l.clone()).glue(&QuantumGraph::single(rat(3), l.clone())).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q.terms()[0].coef, rat(6));
        assert_eq!(q.terms()[0].component, glue(&l, &l).graph);
        let t = host(3);
        let h = qhom(&QuantumGraph::single(rat(1), l), &t).unwrap();
        assert_eq!(qhom(&q, &t).unwrap(), rat(6) * &h * &h);
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(indicator_polynomial(&set(&[1]), &set(&[0])).unwrap(), vec![rat(1), rat(-1)]);
        assert_eq!(indicator_polynomial(&set(&[]), &set(&[0])).unwrap(), vec![rat(1)]);
        assert_eq!(indicator_polynomial(&set(&[2]), &set(&[])).unwrap(), vec![rat(0)]);
        let p = indicator_polynomial(&set(&[0]), &set(&[1, 2])).unwrap();
        for (x, want) in [(0, 0), (1, 1), (2, 1)] {
            assert_eq!(eval_polynomial(&p, &rat(x)), rat(want));
        }
        assert!(matches!(indicator_polynomial(&set(&[1]), &set(&[1])), Err(Error::OverlappingSets(_))));
    }

    #[test]
    fn indicator_flips_values() {
        // hom(two_on_one, host(n)) = n, so restrict to n ∈ {0, 1}
        let q = QuantumGraph::single(rat(1), two_on_one());
        let flipped = normalize_indicator(&q, &set(&[1]), &set(&[0])).unwrap();
        assert_eq!(flipped.len(), 2);
        assert_eq!(flipped.terms()[0].coef, rat(1));
        assert_eq!(flipped.terms()[1].coef, rat(-1));
        assert_eq!(flipped.terms()[0].component, from_guard_fn(&gf(&[(1, 1)])).unwrap());
        assert_eq!(qhom(&flipped, &host(1)).unwrap(), rat(0));
        let x0_y12 = normalize_indicator(&q, &set(&[0]), &set(&[1, 2])).unwrap();
        for (n, want) in [(1, 1), (2, 1)] {
            assert_eq!(qhom(&x0_y12, &host(n)).unwrap(), rat(want));
        }
        let constant = normalize_indicator(&q, &set(&[]), &set(&[0])).unwrap();
        assert_eq!(constant, q.unit().unwrap());
    }

    #[test]
    fn unit_is_compatible_and_certified() {
        let mut l = two_on_one();
        l.graph = l.graph.with_extra_blue(&[BTreeSet::new()]).unwrap();
        l.b.insert(2, 1);
        let q = QuantumGraph::single(rat(1), l);
        let u = q.unit().unwrap();
        assert_eq!(u.domb(), q.domb());
        assert_eq!(u.domr(), q.domr());
        assert_eq!(u.check_certs().unwrap(), 1);
        let empty = QuantumGraph::single(rat(1), LabeledGraph::empty()).unit().unwrap();
        assert_eq!(empty.terms()[0].component, LabeledGraph::empty());
    }

    #[test]
    fn lifted_ops_extend_certificates() {
        let l = from_guard_fn(&gf(&[(1, 1), (2, 1)])).unwrap();
        let q = QuantumGraph::single_certified(rat(1), l.clone(), GliCert::Base(l));
        let r = q.reclaim_red(&[2].into()).unwrap();
        assert_eq!(r.check_certs().unwrap(), 1);
        let s = r.switch(&gf(&[(1, 2)])).unwrap();
        assert_eq!(s.check_certs().unwrap(), 1);
        let b = s.reclaim_blue(&[1].into()).unwrap();
        assert_eq!(b.check_certs().unwrap(), 1);
        let g = b.glue(&b).unwrap();
        assert_eq!(g.check_certs().unwrap(), 1);
        assert!(q.reclaim_blue(&[1].into()).unwrap().terms()[0].cert.is_none());
        assert!(matches!(q.reclaim_red(&[3].into()), Err(Error::Precondition(_))));
    }
}
