//! Residue-ring evaluation of `D_n(x,y)`, `S_n(x,y)`, `J~2(n)` and the
//! binomially weighted Catalan sums, plus the exact dual transform.
//!
//! Every sum runs over `k = 0..=n` with `n < p`, so all binomial
//! coefficients with rational upper argument have a unit denominator.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modring::{
    embed, format_rational, integer, is_padic_unit, rational, BinomialTables, ExactRational,
    Residue,
};

/// What to evaluate, with its rational parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSpec {
    D { x: ExactRational, y: ExactRational },
    S { x: ExactRational, y: ExactRational },
    DualTransform(Vec<ExactRational>),
    J2,
    CatalanInner { a: ExactRational },
}

impl SequenceSpec {
    /// Value of the `n`th term in the ring of `tables`.
    pub fn evaluate(&self, n: usize, tables: &BinomialTables) -> Result<Residue> {
        match self {
            SequenceSpec::D { x, y } => d_eval(n, x, y, tables),
            SequenceSpec::S { x, y } => s_eval(n, x, y, tables),
            SequenceSpec::DualTransform(a) => embed(&dual_transform(a, n)?, tables.modulus()),
            SequenceSpec::J2 => j2_eval(n, tables),
            SequenceSpec::CatalanInner { a } => catalan_inner(n, a, tables),
        }
    }
}

fn check_n(n: usize, tables: &BinomialTables) -> Result<()> {
    let p = tables.modulus().p();
    if n as u64 >= p {
        return Err(Error::KTooLarge { k: n as u64, p });
    }
    Ok(())
}

/// `t_k = C(x,k) y^k` for `k < len`.
fn d_terms(x: &ExactRational, y: &ExactRational, len: usize, tables: &BinomialTables) -> Result<Vec<Residue>> {
    let modulus = tables.modulus();
    let xr = embed(x, modulus)?;
    let yr = embed(y, modulus)?;
    let row = tables.choose_row(xr, len)?;
    let mut power = modulus.one();
    Ok(row
        .into_iter()
        .map(|c| {
            let t = c * power;
            power = power * yr;
            t
        })
        .collect())
}

/// `t_k = C(x,k) C(-1-x,k) y^k` for `k < len`.
fn s_terms(x: &ExactRational, y: &ExactRational, len: usize, tables: &BinomialTables) -> Result<Vec<Residue>> {
    let modulus = tables.modulus();
    let xr = embed(x, modulus)?;
    let yr = embed(y, modulus)?;
    let left = tables.choose_row(xr, len)?;
    let right = tables.choose_row(-modulus.one() - xr, len)?;
    let mut power = modulus.one();
    Ok(left
        .into_iter()
        .zip(right)
        .map(|(l, r)| {
            let t = l * r * power;
            power = power * yr;
            t
        })
        .collect())
}

/// `t_k = C_k / a^k` for `k < len`.
fn catalan_terms(a: &ExactRational, len: usize, tables: &BinomialTables) -> Result<Vec<Residue>> {
    let modulus = tables.modulus();
    if !is_padic_unit(a, modulus.p()) {
        return Err(Error::ZeroParameter(format!("a = {}", format_rational(a))));
    }
    let inv_a = embed(a, modulus)?.inv()?;
    let mut power = modulus.one();
    Ok((0..len)
        .map(|k| {
            let t = tables.catalan(k) * power;
            power = power * inv_a;
            t
        })
        .collect())
}

fn weighted_row_sum(n: usize, terms: &[Residue], tables: &BinomialTables) -> Residue {
    (0..=n).fold(tables.modulus().zero(), |acc, k| acc + tables.choose(n, k) * terms[k])
}

/// `D_n(x,y) = sum_k C(n,k) C(x,k) y^k`.
pub fn d_eval(n: usize, x: &ExactRational, y: &ExactRational, tables: &BinomialTables) -> Result<Residue> {
    check_n(n, tables)?;
    let terms = d_terms(x, y, n + 1, tables)?;
    Ok(weighted_row_sum(n, &terms, tables))
}

/// `D_n(x,y)` summed only up to `k = min(n, x)` when `x` is a natural number.
///
/// `C(x,k)` vanishes for natural `x < k`, so this must agree with [`d_eval`].
pub fn d_eval_truncated(n: usize, x: &ExactRational, y: &ExactRational, tables: &BinomialTables) -> Result<Residue> {
    check_n(n, tables)?;
    let cap = if x.is_integer() && *x >= ExactRational::zero() && *x < integer(n as i64) {
        usize::try_from(x.to_integer()).expect("x < n fits")
    } else {
        n
    };
    let terms = d_terms(x, y, cap + 1, tables)?;
    Ok((0..=cap).fold(tables.modulus().zero(), |acc, k| acc + tables.choose(n, k) * terms[k]))
}

/// Ljunggren form `sum_k C(n,k) C(x+k,k) y^k (1-y)^(n-k)`.
pub fn d_eval_ljunggren(n: usize, x: &ExactRational, y: &ExactRational, tables: &BinomialTables) -> Result<Residue> {
    check_n(n, tables)?;
    let modulus = tables.modulus();
    let xr = embed(x, modulus)?;
    let yr = embed(y, modulus)?;
    let one_minus_y = modulus.one() - yr;
    let mut acc = modulus.zero();
    for k in 0..=n {
        let shifted = tables.choose_residue(xr + modulus.from_u64(k as u64), k)?;
        acc = acc + tables.choose(n, k) * shifted * yr.pow(k as u64) * one_minus_y.pow((n - k) as u64);
    }
    Ok(acc)
}

/// `S_n(x,y) = sum_k C(n,k) C(x,k) C(-1-x,k) y^k`.
pub fn s_eval(n: usize, x: &ExactRational, y: &ExactRational, tables: &BinomialTables) -> Result<Residue> {
    check_n(n, tables)?;
    let terms = s_terms(x, y, n + 1, tables)?;
    Ok(weighted_row_sum(n, &terms, tables))
}

/// `J~2(n) = S_n(-1/2, -1)`.
pub fn j2_eval(n: usize, tables: &BinomialTables) -> Result<Residue> {
    s_eval(n, &rational(-1, 2), &integer(-1), tables)
}

/// `sum_k C(n,k) C_k / a^k`.
pub fn catalan_inner(n: usize, a: &ExactRational, tables: &BinomialTables) -> Result<Residue> {
    check_n(n, tables)?;
    let terms = catalan_terms(a, n + 1, tables)?;
    Ok(weighted_row_sum(n, &terms, tables))
}

/// Binomial transform `out[n] = sum_k C(n,k) terms[k]` for every `n < terms.len()`,
/// updating one Pascal row in place per step.
pub fn binomial_transform(terms: &[Residue], tables: &BinomialTables) -> Vec<Residue> {
    let modulus = tables.modulus();
    let mut row = vec![modulus.zero(); terms.len()];
    let mut out = Vec::with_capacity(terms.len());
    for n in 0..terms.len() {
        row[n] = modulus.one();
        for k in (1..n).rev() {
            row[k] = row[k] + row[k - 1];
        }
        out.push(row[..=n].iter().zip(terms).fold(modulus.zero(), |acc, (c, t)| acc + *c * *t));
    }
    out
}

/// `D_0(x,y), ..., D_{p-1}(x,y)`.
pub fn d_column(x: &ExactRational, y: &ExactRational, tables: &BinomialTables) -> Result<Vec<Residue>> {
    let len = tables.modulus().p() as usize;
    Ok(binomial_transform(&d_terms(x, y, len, tables)?, tables))
}

/// `S_0(x,y), ..., S_{p-1}(x,y)`.
pub fn s_column(x: &ExactRational, y: &ExactRational, tables: &BinomialTables) -> Result<Vec<Residue>> {
    let len = tables.modulus().p() as usize;
    Ok(binomial_transform(&s_terms(x, y, len, tables)?, tables))
}

/// Inner Catalan sums for `n = 0..p`.
pub fn catalan_column(a: &ExactRational, tables: &BinomialTables) -> Result<Vec<Residue>> {
    let len = tables.modulus().p() as usize;
    Ok(binomial_transform(&catalan_terms(a, len, tables)?, tables))
}

/// `sum_n left[n] * right[n]`.
pub fn dot(left: &[Residue], right: &[Residue]) -> Residue {
    let modulus = left.first().expect("nonempty column").modulus();
    left.iter().zip(right).fold(modulus.zero(), |acc, (l, r)| acc + *l * *r)
}

fn choose_u(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact dual `a*_n = sum_k C(n,k) (-1)^k a_k`.
pub fn dual_transform(a: &[ExactRational], n: usize) -> Result<ExactRational> {
    if n >= a.len() {
        return Err(Error::IndexOutOfRange { index: n, len: a.len() });
    }
    let mut acc = ExactRational::zero();
    for (k, ak) in a.iter().enumerate().take(n + 1) {
        let term = ExactRational::from_integer(choose_u(n, k)) * ak;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}
