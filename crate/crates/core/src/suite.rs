//! Every checker on one category, run as independent tasks.

use rayon::prelude::*;

use crate::calculus::{check_calculus, check_operator_algebra};
use crate::cardy::{branes_up_to, check_brane, check_closed};
use crate::category::CategoryData;
use crate::double::{build_double, check_double};
use crate::modular::check_modular_relations;
use crate::report::{timed, CheckReport};
use crate::sl2z::check_sl2z;
use crate::validate::validate_category;

type Task<'a> = Box<dyn Fn() -> CheckReport + Send + Sync + 'a>;

/// Axioms, calculus, operators, modular relations, SL(2,Z), the double, the closed algebra
/// and one Cardy triple per simple brane.
pub fn run_all(cat: &CategoryData, tol: f64) -> Vec<CheckReport> {
    let d = build_double(cat);
    let mut tasks: Vec<Task> = vec![
        Box::new(|| validate_category(cat, tol)),
        Box::new(|| check_calculus(cat, tol)),
        Box::new(|| check_operator_algebra(cat, tol)),
        Box::new(|| check_modular_relations(cat, tol)),
        Box::new(|| check_sl2z(cat, tol)),
        Box::new(|| check_double(cat, tol)),
        Box::new(|| check_closed(&d, tol)),
    ];
    for b in branes_up_to(cat, 1) {
        let d = &d;
        tasks.push(Box::new(move || check_brane(d, &b, tol)));
    }
    tasks.par_iter().map(timed).collect()
}
