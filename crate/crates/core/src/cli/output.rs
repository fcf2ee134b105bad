use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, PolyQ, Rational};
use crate::riccati::{RiccatiProblem, RiccatiSolution};

pub const SCHEMA: &str = "#schema=1";

pub fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// `u` followed by one column per series; floats use 17 significant digits.
pub fn sample_csv(names: &[String], rows: impl Iterator<Item = (f64, Vec<f64>)>) -> String {
    let mut out = format!("{SCHEMA}\nu,{}\n", names.join(","));
    for (u, vals) in rows {
        out += &format!("{u:.16e}");
        for v in vals {
            out += &format!(",{v:.16e}");
        }
        out.push('\n');
    }
    out
}

/// Coefficients from the constant term up, space separated, as `p/q`.
pub fn coeff_field(poly: &PolyQ) -> String {
    if poly.is_zero() {
        return "0/1".into();
    }
    poly.coeffs().iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct RiccatiFile<'a> {
    problem: &'a RiccatiProblem,
    solution: &'a RiccatiSolution,
}

pub fn riccati_json(problem: &RiccatiProblem, solution: &RiccatiSolution) -> Result<String> {
    to_json(&RiccatiFile { problem, solution })
}
