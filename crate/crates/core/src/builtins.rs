//! Built-in categories shipped as JSON data files.

use crate::category::{parse_category, CategoryData};
use crate::error::{Error, Result};

pub const NAMES: [&str; 4] = ["trivial", "fibonacci", "ising", "z3"];

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "trivial" => include_str!("../data/trivial.json"),
        "fibonacci" => include_str!("../data/fibonacci.json"),
        "ising" => include_str!("../data/ising.json"),
        "z3" => include_str!("../data/z3.json"),
        _ => return None,
    })
}

pub fn builtin(name: &str) -> Result<CategoryData> {
    let src = source(name).ok_or_else(|| {
        Error::Usage(format!(
            "unknown built-in '{name}' (expected one of {})",
            NAMES.join(", ")
        ))
    })?;
    parse_category(src)
}

pub fn trivial() -> CategoryData {
    builtin("trivial").expect("built-in data parses")
}

pub fn fibonacci() -> CategoryData {
    builtin("fibonacci").expect("built-in data parses")
}

pub fn ising() -> CategoryData {
    builtin("ising").expect("built-in data parses")
}

pub fn z3() -> CategoryData {
    builtin("z3").expect("built-in data parses")
}

pub fn all() -> Vec<CategoryData> {
    NAMES
        .iter()
        .map(|n| builtin(n).expect("built-in data parses"))
        .collect()
}
