//! The guarded two-sorted counting logic: syntax, parsing, evaluation,
//! normal-form checking and normal-form compilation.

pub mod ast;
pub mod eval;
pub mod ngc;
pub mod normal_form;
pub mod parse;

pub use ast::{
    and_all, exists_eq_blue, exists_eq_red, forall_blue, forall_red, free_vars, guard_formula, guarded_free,
    implies, or, or_all, Formula, FreeVars,
};
pub use eval::{eval, models, witness_count, Interpretation};
pub use ngc::{check_and, check_guarded, check_syntax, Guarded, SyntaxMode, SyntaxVerdict, SyntaxViolation};
pub use normal_form::to_normal_form;
pub use parse::{formula_to_guard, parse_formula, render_formula};
