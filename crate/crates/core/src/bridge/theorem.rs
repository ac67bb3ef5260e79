//! Desk-scale realization of the equivalence between counting-logic
//! indistinguishability and homomorphism indistinguishability over graphs of
//! entangled hypertree width at most `k`.
//!
//! [`distinguish_by_ehw`] searches small pattern graphs in a fixed order;
//! [`crosscheck_main_theorem`] turns a found pattern into a distinguishing
//! sentence (via its certificate) and a supplied distinguishing sentence into
//! a distinguishing pattern (via its indicator quantum graph), recording every
//! check as an assertion.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::compile::{quantum_from_formula_with, SizeParams};
use super::formula::formula_from_cert;
use crate::config::Caps;
use crate::decomp::{search_width_with, validate, DecompMode, Engine, TreeDecomp};
use crate::error::Result;
use crate::guard::GuardFunction;
use crate::homcount::{count_homs_labeled_with, count_homs_with};
use crate::labeled::{cert_to_ehd, ehd_to_cert, eval_cert, LabeledGraph};
use crate::logic::{
    check_syntax, exists_eq_blue, models, render_formula, to_normal_form, Formula, SyntaxMode,
};
use crate::model::{isomorphic, IncidenceGraph};
use crate::quantum::qhom_with;

/// Size bounds for the pattern search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest number of blue nodes of a pattern.
    pub max_blue: usize,
    /// Largest number of red nodes of a pattern.
    pub max_red: usize,
}

/// A pattern with different homomorphism counts into the two graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinguisher {
    /// The pattern `J`.
    pub pattern: IncidenceGraph,
    /// An entangled decomposition of `J` of width at most `k`.
    pub decomp: TreeDecomp,
    /// `hom(J, I)`.
    pub hom_a: BigUint,
    /// `hom(J, I')`.
    pub hom_b: BigUint,
}

/// All incidence graphs with the given node counts in which every red node
/// has a neighbour, ordered by edge count and then lexicographically by the
/// sorted edge list `(blue, red)`.
pub fn patterns_of_size(n_blue: usize, n_red: usize) -> Vec<IncidenceGraph> {
    let slots: Vec<(usize, usize)> = (0..n_blue).flat_map(|e| (0..n_red).map(move |v| (e, v))).collect();
    let mut out = Vec::new();
    for size in 0..=slots.len() {
        for combo in combinations(slots.len(), size) {
            let edges: Vec<(usize, usize)> = combo.iter().map(|&s| slots[s]).collect();
            let covered: BTreeSet<usize> = edges.iter().map(|&(_, v)| v).collect();
            if covered.len() == n_red {
                out.push(IncidenceGraph::new(n_red, n_blue, edges).expect("every red node is covered"));
            }
        }
    }
    out
}

/// All `size`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < size - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// Returns the first pattern `J` in the order (blue count, red count, edge
/// count, edge list) with `|blue(J)| ≤ max_blue`, `|red(J)| ≤ max_red`,
/// entangled width at most `k` and `hom(J, I) ≠ hom(J, I')`.
pub fn distinguish_by_ehw(
    a: &IncidenceGraph,
    b: &IncidenceGraph,
    k: usize,
    bounds: SearchBounds,
    caps: &Caps,
) -> Result<Option<Distinguisher>> {
    for n_blue in 0..=bounds.max_blue {
        for n_red in 0..=bounds.max_red {
            for j in patterns_of_size(n_blue, n_red) {
                let hom_a = count_homs_with(&j, a, caps)?;
                let hom_b = count_homs_with(&j, b, caps)?;
                if hom_a == hom_b {
                    continue;
                }
                if let Some(decomp) = search_width_with(&j, k, DecompMode::Ehd, Engine::Exact, caps)? {
                    return Ok(Some(Distinguisher { pattern: j, decomp, hom_a, hom_b }));
                }
            }
        }
    }
    Ok(None)
}

/// One checked statement of a cross-check report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    /// Short identifier.
    pub name: String,
    /// Outcome.
    pub passed: bool,
    /// Human-readable detail.
    pub detail: String,
}

/// Which directions of the equivalence were realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Neither: no pattern found and no sentence available.
    None,
    /// A pattern was turned into a distinguishing sentence.
    PatternToSentence,
    /// A sentence was turned into a distinguishing pattern.
    SentenceToPattern,
    /// Both.
    Both,
}

impl Direction {
    /// Stable lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            Direction::None => "none",
            Direction::PatternToSentence => "pattern-to-sentence",
            Direction::SentenceToPattern => "sentence-to-pattern",
            Direction::Both => "both",
        }
    }
}

/// Result of [`crosscheck_main_theorem`].
#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    /// Realized directions.
    pub direction: Direction,
    /// The distinguishing pattern, if one was found.
    pub witness: Option<Distinguisher>,
    /// The sentence built from the pattern's certificate.
    pub pattern_sentence: Option<Formula>,
    /// The normal-form sentence used for the other direction.
    pub sentence: Option<Formula>,
    /// The distinguishing quantum component, if one was found.
    pub component: Option<LabeledGraph>,
    /// Every check performed, in order.
    pub assertions: Vec<Assertion>,
}

impl CrosscheckReport {
    /// True iff every assertion passed.
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.assertions.push(Assertion { name: name.into(), passed, detail: detail.into() });
        passed
    }
}

/// Cross-checks both directions on the pair `(I, I')`.
///
/// If a pattern `J` within `bounds` distinguishes the graphs, its
/// decomposition is turned into a certificate and the sentence
/// `(⊤ ∧ φ_J^m)` with `m = hom(J, I)` is checked to hold in `I` and fail in
/// `I'`.
///
/// For the other direction a distinguishing sentence is needed: either the
/// supplied one or, when the graphs differ in their number of blue nodes,
/// the sentence "there are exactly `|blue(I)|` blue nodes". When the blue
/// counts agree, the sentence is compiled to the normal form and to its
/// indicator quantum graph for `m = |blue|` and `d` the largest neighbourhood;
/// some component with a non-zero coefficient must then have different
/// homomorphism counts, and its certificate must yield a valid entangled
/// decomposition of width at most `k`.
pub fn crosscheck_main_theorem(
    a: &IncidenceGraph,
    b: &IncidenceGraph,
    k: usize,
    bounds: SearchBounds,
    sentence: Option<&Formula>,
    caps: &Caps,
) -> Result<CrosscheckReport> {
    let mut report = CrosscheckReport {
        direction: Direction::None,
        witness: None,
        pattern_sentence: None,
        sentence: None,
        component: None,
        assertions: Vec::new(),
    };
    let forward = pattern_to_sentence(a, b, k, bounds, caps, &mut report)?;
    let backward = sentence_to_pattern(a, b, k, sentence, caps, &mut report)?;
    report.direction = match (forward, backward) {
        (true, true) => Direction::Both,
        (true, false) => Direction::PatternToSentence,
        (false, true) => Direction::SentenceToPattern,
        (false, false) => Direction::None,
    };
    Ok(report)
}

fn pattern_to_sentence(
    a: &IncidenceGraph,
    b: &IncidenceGraph,
    k: usize,
    bounds: SearchBounds,
    caps: &Caps,
    report: &mut CrosscheckReport,
) -> Result<bool> {
    let Some(w) = distinguish_by_ehw(a, b, k, bounds, caps)? else {
        report.check("pattern-search", true, "no distinguishing pattern within bounds");
        return Ok(false);
    };
    report.check(
        "pattern-search",
        true,
        format!("pattern with {} blue, {} red nodes: {} vs {}", w.pattern.n_blue(), w.pattern.n_red(), w.hom_a, w.hom_b),
    );
    let v = validate(&w.decomp, &w.pattern, DecompMode::Ehd)?;
    let width = w.decomp.width();
    let mut ok = report.check("pattern-ehd", v.valid && width <= k, format!("width {width}"));
    let cert = ehd_to_cert(&w.pattern, &w.decomp)?;
    let value = eval_cert(&cert)?;
    let iso = value.is_label_free() && isomorphic(&value.graph, &w.pattern, caps.iso_nodes.max(16))?.is_some();
    ok &= report.check("certificate-isomorphic", iso, "certificate denotes the pattern");
    let m: u64 = u64::try_from(&w.hom_a).unwrap_or(u64::MAX);
    let phi = formula_from_cert(&cert, m)?;
    let chi = Formula::and(Formula::Top, phi);
    let kk = k.max(cert.max_blue_label()).max(1);
    ok &= report.check("pattern-sentence-normal", check_syntax(&chi, kk, SyntaxMode::Ngck).valid, "normal form");
    let in_a = models(a, &chi)?;
    let in_b = models(b, &chi)?;
    ok &= report.check("pattern-sentence-holds", in_a, format!("first graph satisfies the sentence for m = {m}"));
    ok &= report.check("pattern-sentence-fails", !in_b, "second graph does not");
    report.pattern_sentence = Some(chi);
    report.witness = Some(w);
    Ok(ok)
}

fn sentence_to_pattern(
    a: &IncidenceGraph,
    b: &IncidenceGraph,
    k: usize,
    sentence: Option<&Formula>,
    caps: &Caps,
    report: &mut CrosscheckReport,
) -> Result<bool> {
    if a.n_blue() != b.n_blue() {
        let m = a.n_blue() as u64;
        let counting = exists_eq_blue(m, vec![1], GuardFunction::empty(), Formula::EqBlue(1, 1));
        let ok_a = models(a, &counting)?;
        let ok_b = models(b, &counting)?;
        let single = IncidenceGraph::new(0, 1, [])?;
        let (ha, hb) = (count_homs_with(&single, a, caps)?, count_homs_with(&single, b, caps)?);
        let mut ok = report.check(
            "counting-sentence",
            ok_a && !ok_b,
            format!("exactly {m} blue nodes: {ok_a} vs {ok_b}"),
        );
        ok &= report.check("single-blue-pattern", ha != hb, format!("{ha} vs {hb}"));
        report.sentence = Some(counting);
        report.component = Some(LabeledGraph::label_free(single));
        return Ok(ok);
    }
    let Some(phi) = sentence else {
        report.check("sentence", true, "no distinguishing sentence supplied");
        return Ok(false);
    };
    let nf = to_normal_form(phi, &GuardFunction::empty(), k)?;
    let (in_a, in_b) = (models(a, phi)?, models(b, phi)?);
    if !report.check("sentence-distinguishes", in_a != in_b, format!("{in_a} vs {in_b}")) {
        return Ok(false);
    }
    // orient the sentence so that it holds in the first graph
    let body = if in_a { nf } else { Formula::not(nf) };
    let chi = Formula::and(Formula::Top, body);
    let mut ok = report.check("sentence-normal", check_syntax(&chi, k, SyntaxMode::Ngck).valid, render_formula(&chi));
    let same = models(a, &chi)? && !models(b, &chi)?;
    ok &= report.check("normal-form-equivalent", same, "normal form holds in the first graph only");
    let d = a.max_degree().max(b.max_degree()) as u64;
    let params = SizeParams { m: a.n_blue() as u64, d };
    let q = quantum_from_formula_with(&chi, k, params, caps)?;
    let (la, lb) = (LabeledGraph::label_free(a.clone()), LabeledGraph::label_free(b.clone()));
    let (qa, qb) = (qhom_with(&q, &la, caps)?, qhom_with(&q, &lb, caps)?);
    ok &= report.check(
        "quantum-indicator",
        qa == BigRational::one() && qb == BigRational::zero(),
        format!("{} terms; hom values {qa} and {qb}", q.len()),
    );
    let mut found = None;
    for t in q.terms() {
        if t.coef.is_zero() {
            continue;
        }
        let ha = count_homs_labeled_with(&t.component, &la, caps)?;
        let hb = count_homs_labeled_with(&t.component, &lb, caps)?;
        if ha != hb {
            found = Some((t.clone(), ha, hb));
            break;
        }
    }
    let Some((term, ha, hb)) = found else {
        report.check("distinguishing-component", false, "no component separates the graphs");
        return Ok(false);
    };
    ok &= report.check(
        "distinguishing-component",
        true,
        format!("coefficient {}, counts {ha} vs {hb}", term.coef),
    );
    let cert = term.cert.as_ref().expect("compiled components are certified");
    let (d, _) = cert_to_ehd(cert)?;
    let v = validate(&d, &term.component.graph, DecompMode::Ehd)?;
    ok &= report.check(
        "component-ehd",
        v.valid && d.width() <= k,
        format!("valid {}, width {}", v.valid, d.width()),
    );
    report.sentence = Some(chi);
    report.component = Some(term.component);
    Ok(ok)
}
