//! Browser bindings for the congruence explorer.
//!
//! Build with `wasm-pack build crates/web --target web --out-dir www/pkg`
//! and serve `crates/web/www/`. Every export returns a JSON string so the
//! page needs no extra glue.

use dualcong::modring::{parse_rational, BinomialTables, Modulus};
use dualcong::sequences::SequenceSpec;
use dualcong::verify::{self, product_table};
use dualcong::{Error, ExactRational, Params, Statement};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn error_json(err: impl std::fmt::Display) -> String {
    json!({ "error": err.to_string() }).to_string()
}

fn rational(text: &str) -> Result<ExactRational, Error> {
    parse_rational(text)
}

/// `name=value;name=value` into named parameters.
fn parse_params(text: &str) -> Result<Params, Error> {
    let mut params = Params::new();
    for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| Error::Parse {
            what: "parameter",
            text: part.to_string(),
        })?;
        params = params.with(name.trim(), rational(value)?);
    }
    Ok(params)
}

fn eval_inner(kind: &str, n: usize, x: &str, y: &str, a: &str, modulus: &str) -> Result<Value, Error> {
    let modulus: Modulus = modulus.parse()?;
    let spec = match kind {
        "D" => SequenceSpec::D { x: rational(x)?, y: rational(y)? },
        "S" => SequenceSpec::S { x: rational(x)?, y: rational(y)? },
        "J2" => SequenceSpec::J2,
        "catalan-inner" => SequenceSpec::CatalanInner { a: rational(a)? },
        other => return Err(Error::UnknownTheorem(other.to_string())),
    };
    let tables = BinomialTables::build(modulus);
    let p = modulus.p() as usize;
    let values = (0..p)
        .map(|k| spec.evaluate(k, &tables).map(|r| r.value()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "modulus": modulus.to_string(),
        "value": values.get(n).copied(),
        "values": values,
    }))
}

/// Sequence term `n` plus the whole row `0..p` in `Z/p^e`.
#[wasm_bindgen]
pub fn eval_sequence(kind: &str, n: usize, x: &str, y: &str, a: &str, modulus: &str) -> String {
    match eval_inner(kind, n, x, y, a, modulus) {
        Ok(v) => v.to_string(),
        Err(e) => error_json(e),
    }
}

/// One verification record for statement `id` at prime `p`.
#[wasm_bindgen]
pub fn check_statement(id: &str, p: u32, params: &str) -> String {
    let result = id
        .parse::<Statement>()
        .and_then(|st| Ok((st, parse_params(params)?)))
        .and_then(|(st, params)| verify::check(st, p.into(), &params));
    match result {
        Ok(record) => record.to_json().to_string(),
        Err(e) => error_json(e),
    }
}

/// Left and right sides of the `D` (`eq1.3`) or `S` (`eq1.4`) product sum
/// over every residue pair `x1, x2` in `0..p`.
#[wasm_bindgen]
pub fn product_grid(id: &str, p: u32, y1: &str, y2: &str) -> String {
    let result = id.parse::<Statement>().and_then(|st| {
        let table = product_table(st, p.into(), &rational(y1)?, &rational(y2)?)?;
        Ok(json!({ "p": table.p, "lhs": table.lhs, "rhs": table.rhs }))
    });
    match result {
        Ok(v) => v.to_string(),
        Err(e) => error_json(e),
    }
}
