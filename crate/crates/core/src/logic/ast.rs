//! Formulas of the guarded two-sorted counting logic, free variables, guard
//! formulas and the shorthand constructors (`∨`, `→`, `∀`, `∃=n`, ...).

use std::collections::BTreeSet;

use crate::guard::GuardFunction;

/// A formula. Red variables are `v_i`, blue variables are `e_j` (indices ≥ 1).
///
/// Quantifiers store their guard function separately; the quantified formula
/// is `(Γ_guard ∧ body)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// Truth.
    Top,
    /// `E(e_blue, v_red)`: the blue variable is adjacent to the red variable.
    AtomE {
        /// Blue variable index.
        blue: usize,
        /// Red variable index.
        red: usize,
    },
    /// `e_j = e_j'`.
    EqBlue(usize, usize),
    /// `v_i = v_i'`.
    EqRed(usize, usize),
    /// Negation.
    Not(Box<Formula>),
    /// Conjunction.
    And(Box<Formula>, Box<Formula>),
    /// `∃≥n (v_{i1},…,v_{iℓ}).(Γ_guard ∧ body)`.
    ExistsRed {
        /// Threshold.
        n: u64,
        /// Strictly ascending quantified red indices.
        vars: Vec<usize>,
        /// Guard function of the quantified formula.
        guard: GuardFunction,
        /// Body.
        body: Box<Formula>,
    },
    /// `∃≥n (e_{j1},…,e_{jℓ}).(Γ_guard ∧ body)`.
    ExistsBlue {
        /// Threshold.
        n: u64,
        /// Strictly ascending quantified blue indices.
        vars: Vec<usize>,
        /// Guard function of the quantified formula.
        guard: GuardFunction,
        /// Body.
        body: Box<Formula>,
    },
}

/// Free red and blue variable indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreeVars {
    /// Free red indices.
    pub red: BTreeSet<usize>,
    /// Free blue indices.
    pub blue: BTreeSet<usize>,
}

impl Formula {
    /// Boxed negation.
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Boxed conjunction.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// `E(e_j, v_i)`.
    pub fn atom(blue: usize, red: usize) -> Formula {
        Formula::AtomE { blue, red }
    }

    /// `∃≥n` over red variables.
    pub fn exists_red(n: u64, vars: Vec<usize>, guard: GuardFunction, body: Formula) -> Formula {
        Formula::ExistsRed { n, vars, guard, body: Box::new(body) }
    }

    /// `∃≥n` over blue variables.
    pub fn exists_blue(n: u64, vars: Vec<usize>, guard: GuardFunction, body: Formula) -> Formula {
        Formula::ExistsBlue { n, vars, guard, body: Box::new(body) }
    }

    /// Quantifier depth.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::AtomE { .. } | Formula::EqBlue(..) | Formula::EqRed(..) => 0,
            Formula::Not(f) => f.depth(),
            Formula::And(a, b) => a.depth().max(b.depth()),
            Formula::ExistsRed { body, .. } | Formula::ExistsBlue { body, .. } => 1 + body.depth(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::AtomE { .. } | Formula::EqBlue(..) | Formula::EqRed(..) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
            Formula::ExistsRed { guard, body, .. } | Formula::ExistsBlue { guard, body, .. } => {
                1 + guard.len() + body.size()
            }
        }
    }
}

/// `Γ_g`: right-associated conjunction of `E(e_{g(i)}, v_i)` in ascending `i`;
/// `⊤` for the empty guard function.
pub fn guard_formula(g: &GuardFunction) -> Formula {
    let atoms: Vec<Formula> = g.iter().map(|(i, j)| Formula::atom(j, i)).collect();
    let mut it = atoms.into_iter().rev();
    match it.next() {
        None => Formula::Top,
        Some(last) => it.fold(last, |acc, a| Formula::and(a, acc)),
    }
}

/// Free variables per the usual clauses; quantifiers remove their variables
/// from the free variables of `(Γ_guard ∧ body)`.
pub fn free_vars(phi: &Formula) -> FreeVars {
    let mut out = FreeVars::default();
    collect_free(phi, &mut out);
    out
}

fn collect_free(phi: &Formula, out: &mut FreeVars) {
    match phi {
        Formula::Top => {}
        Formula::AtomE { blue, red } => {
            out.blue.insert(*blue);
            out.red.insert(*red);
        }
        Formula::EqBlue(a, b) => {
            out.blue.insert(*a);
            out.blue.insert(*b);
        }
        Formula::EqRed(a, b) => {
            out.red.insert(*a);
            out.red.insert(*b);
        }
        Formula::Not(f) => collect_free(f, out),
        Formula::And(a, b) => {
            collect_free(a, out);
            collect_free(b, out);
        }
        Formula::ExistsRed { vars, guard, body, .. } => {
            let mut inner = guarded_free(guard, body);
            for v in vars {
                inner.red.remove(v);
            }
            out.red.extend(inner.red);
            out.blue.extend(inner.blue);
        }
        Formula::ExistsBlue { vars, guard, body, .. } => {
            let mut inner = guarded_free(guard, body);
            for v in vars {
                inner.blue.remove(v);
            }
            out.red.extend(inner.red);
            out.blue.extend(inner.blue);
        }
    }
}

/// Free variables of `(Γ_g ∧ body)`.
pub fn guarded_free(g: &GuardFunction, body: &Formula) -> FreeVars {
    let mut fv = free_vars(body);
    fv.red.extend(g.dom());
    fv.blue.extend(g.img());
    fv
}

/// Disjunction `¬(¬a ∧ ¬b)`.
pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
}

/// Implication `¬a ∨ b`.
pub fn implies(a: Formula, b: Formula) -> Formula {
    or(Formula::not(a), b)
}

/// Left-folded conjunction `((a ∧ b) ∧ c) …`; `None` for an empty list.
pub fn and_all(items: Vec<Formula>) -> Option<Formula> {
    items.into_iter().reduce(Formula::and)
}

/// Left-folded disjunction; `None` for an empty list.
pub fn or_all(items: Vec<Formula>) -> Option<Formula> {
    items.into_iter().reduce(or)
}

/// `∃=n` over red variables: `∃≥n … ∧ ¬∃≥n+1 …` (and `¬∃≥1 …` for `n = 0`).
pub fn exists_eq_red(n: u64, vars: Vec<usize>, guard: GuardFunction, body: Formula) -> Formula {
    if n == 0 {
        return Formula::not(Formula::exists_red(1, vars, guard, body));
    }
    Formula::and(
        Formula::exists_red(n, vars.clone(), guard.clone(), body.clone()),
        Formula::not(Formula::exists_red(n + 1, vars, guard, body)),
    )
}

/// `∃=n` over blue variables.
pub fn exists_eq_blue(n: u64, vars: Vec<usize>, guard: GuardFunction, body: Formula) -> Formula {
    if n == 0 {
        return Formula::not(Formula::exists_blue(1, vars, guard, body));
    }
    Formula::and(
        Formula::exists_blue(n, vars.clone(), guard.clone(), body.clone()),
        Formula::not(Formula::exists_blue(n + 1, vars, guard, body)),
    )
}

/// `∀ v̄.(Γ_g → ψ)` as `¬∃≥1 v̄.(Γ_g ∧ ¬ψ)`.
pub fn forall_red(vars: Vec<usize>, guard: GuardFunction, body: Formula) -> Formula {
    Formula::not(Formula::exists_red(1, vars, guard, Formula::not(body)))
}

/// `∀ ē.(Γ_g → ψ)` as `¬∃≥1 ē.(Γ_g ∧ ¬ψ)`.
pub fn forall_blue(vars: Vec<usize>, guard: GuardFunction, body: Formula) -> Formula {
    Formula::not(Formula::exists_blue(1, vars, guard, Formula::not(body)))
}
