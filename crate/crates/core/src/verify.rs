//! Checkable predicates for each congruence, and the prime sweep driver.
//!
//! Each check computes the left side with the residue-ring fast path, the
//! right side from its closed form, and compares the two residues exactly.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::modring::{
    embed, format_fraction, format_rational, integer, is_padic_unit, least_residue, legendre, odd_primes, rational,
    BinomialTables, ExactRational, Modulus, Residue,
};
use crate::sequences::{catalan_column, d_column, dot, s_column};
use crate::statement::{Params, Statement};

/// How a record came about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Instance inside the statement's hypothesis; a mismatch is a counterexample.
    Checked,
    /// Computed outside the stated hypothesis or against a derived expansion;
    /// never counted as a failure.
    Informational(String),
    /// Preconditions not met; nothing was computed.
    Skipped(String),
}

/// One checked instance of a statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationRecord {
    pub statement: Statement,
    /// Prime, or `0` for the prime-free telescoping identity.
    pub p: u64,
    /// Exponent of the residue ring; `0` means exact integer comparison.
    pub e: u32,
    pub params: Params,
    pub lhs: Option<BigInt>,
    pub rhs: Option<BigInt>,
    pub pass: bool,
    pub outcome: Outcome,
}

impl VerificationRecord {
    fn from_residues(statement: Statement, params: Params, lhs: Residue, rhs: Residue, outcome: Outcome) -> Self {
        let modulus = lhs.modulus();
        VerificationRecord {
            statement,
            p: modulus.p(),
            e: modulus.e(),
            params,
            lhs: Some(BigInt::from(lhs.value())),
            rhs: Some(BigInt::from(rhs.value())),
            pass: lhs == rhs,
            outcome,
        }
    }

    fn skipped(statement: Statement, p: u64, params: Params, reason: String) -> Self {
        VerificationRecord {
            statement,
            p,
            e: statement.exponent(),
            params,
            lhs: None,
            rhs: None,
            pass: false,
            outcome: Outcome::Skipped(reason),
        }
    }

    /// A checked instance whose sides differ.
    pub fn is_counterexample(&self) -> bool {
        self.outcome == Outcome::Checked && !self.pass
    }

    pub fn skip_reason(&self) -> Option<String> {
        match &self.outcome {
            Outcome::Checked => None,
            Outcome::Informational(why) => Some(format!("informational: {why}")),
            Outcome::Skipped(why) => Some(why.clone()),
        }
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self
            .params
            .iter()
            .map(|(n, v)| (n.to_string(), Value::String(format_fraction(v))))
            .collect();
        let number = |v: &Option<BigInt>| match v {
            Some(v) => Value::Number(v.to_string().parse().expect("integer literal")),
            None => Value::Null,
        };
        json!({
            "statement": self.statement.id(),
            "p": self.p,
            "e": self.e,
            "params": params,
            "lhs": number(&self.lhs),
            "rhs": number(&self.rhs),
            "pass": self.pass,
            "skip_reason": self.skip_reason(),
        })
    }

    pub const CSV_HEADER: [&'static str; 8] = ["statement", "p", "e", "params", "lhs", "rhs", "pass", "skip_reason"];

    pub fn csv_row(&self) -> [String; 8] {
        let opt = |v: &Option<BigInt>| v.as_ref().map(ToString::to_string).unwrap_or_default();
        [
            self.statement.id().to_string(),
            self.p.to_string(),
            self.e.to_string(),
            self.params.to_compact(),
            opt(&self.lhs),
            opt(&self.rhs),
            self.pass.to_string(),
            self.skip_reason().unwrap_or_default(),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum ColumnKind {
    D,
    S,
    Catalan,
}

type ColumnKey = (ColumnKind, ExactRational, ExactRational);

/// Tables for one modulus plus memoized inner-sum columns.
///
/// Confined to a single worker; sweeps build one per (statement, prime).
pub struct PrimeContext {
    tables: BinomialTables,
    columns: HashMap<ColumnKey, Rc<Vec<Residue>>>,
}

impl PrimeContext {
    pub fn new(modulus: Modulus) -> Self {
        PrimeContext {
            tables: BinomialTables::build(modulus),
            columns: HashMap::new(),
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.tables.modulus()
    }

    pub fn tables(&self) -> &BinomialTables {
        &self.tables
    }

    fn column(&mut self, kind: ColumnKind, x: &ExactRational, y: &ExactRational) -> Result<Rc<Vec<Residue>>> {
        let key = (kind, x.clone(), y.clone());
        if let Some(col) = self.columns.get(&key) {
            return Ok(Rc::clone(col));
        }
        let col = Rc::new(match kind {
            ColumnKind::D => d_column(x, y, &self.tables)?,
            ColumnKind::S => s_column(x, y, &self.tables)?,
            ColumnKind::Catalan => catalan_column(x, &self.tables)?,
        });
        self.columns.insert(key, Rc::clone(&col));
        Ok(col)
    }

    fn embed(&self, q: &ExactRational) -> Result<Residue> {
        embed(q, self.modulus())
    }

    fn symbol(&self, q: &ExactRational) -> Result<Residue> {
        Ok(self.modulus().from_i64(legendre(q, self.modulus().p())? as i64))
    }
}

struct Evaluation {
    lhs: Residue,
    rhs: Residue,
    note: Option<String>,
}

impl Evaluation {
    fn new(lhs: Residue, rhs: Residue) -> Self {
        Evaluation { lhs, rhs, note: None }
    }
}

fn require_unit(name: &str, q: &ExactRational, p: u64) -> Result<()> {
    if is_padic_unit(q, p) {
        Ok(())
    } else if q.is_zero() || crate::modring::is_padic(q, p) {
        Err(Error::ZeroParameter(format!("{name} = {}", format_rational(q))))
    } else {
        Err(Error::NotPAdic {
            value: format_rational(q),
            p,
        })
    }
}

/// Hypotheses on `p` alone.
fn gate(statement: Statement, p: u64) -> Result<()> {
    let min = statement.min_prime();
    if p < min {
        return Err(Error::PrimeTooSmall { p, min });
    }
    if statement == Statement::HalvesThirds && p % 3 != 1 {
        return Err(Error::WrongResidueClass {
            p,
            residue: 1,
            modulus: 3,
        });
    }
    Ok(())
}

/// Right side of the `D` product sum. For `r1 + r2 > p - 1` no closed form
/// is stated; the value then comes from the expansion over `i + j = p - 1`.
fn d_product_rhs(ctx: &PrimeContext, r1: u64, r2: u64, y1: Residue, y2: Residue) -> (Residue, Option<String>) {
    let md = ctx.modulus();
    let top = md.p() - 1;
    let r = r1 + r2;
    if r < top {
        return (md.zero(), None);
    }
    if r == top {
        return (y1.pow(r1) * (-y2).pow(r2), None);
    }
    let t = ctx.tables();
    let y2_minus_one = y2 - md.one();
    let mut acc = md.zero();
    for i in (top - r2)..=r1.min(top) {
        let j = top - i;
        acc = acc
            + t.choose(r1 as usize, i as usize)
                * t.choose(r2 as usize, j as usize)
                * y1.pow(i)
                * y2.pow(j)
                * y2_minus_one.pow(r2 - j);
    }
    if r2 % 2 == 1 {
        acc = -acc;
    }
    (acc, Some("r1 + r2 > p - 1; rhs from the expansion over i + j = p - 1".into()))
}

fn evaluate(statement: Statement, ctx: &mut PrimeContext, params: &Params) -> Result<Evaluation> {
    let md = ctx.modulus();
    let p = md.p();
    let half = (p - 1) / 2;
    match statement {
        Statement::DComplement => {
            let (x, y) = (params.get("x")?, params.get("y")?);
            require_unit("y", y, p)?;
            let complement = -integer(1) - x;
            let lhs = dot(&ctx.column(ColumnKind::D, x, y)?, &ctx.column(ColumnKind::D, &complement, y)?);
            let sign = if least_residue(x, p)? % 2 == 0 { 1 } else { -1 };
            Ok(Evaluation::new(lhs, md.from_i64(sign)))
        }
        Statement::SSquare => {
            let (x, y) = (params.get("x")?, params.get("y")?);
            require_unit("y", y, p)?;
            let col = ctx.column(ColumnKind::S, x, y)?;
            let rhs = if least_residue(x, p)? == half {
                ctx.symbol(&integer(-1))?
            } else {
                md.zero()
            };
            Ok(Evaluation::new(dot(&col, &col), rhs))
        }
        Statement::DProduct => {
            let (x1, y1, x2, y2) = (params.get("x1")?, params.get("y1")?, params.get("x2")?, params.get("y2")?);
            let lhs = dot(&ctx.column(ColumnKind::D, x1, y1)?, &ctx.column(ColumnKind::D, x2, y2)?);
            let (r1, r2) = (least_residue(x1, p)?, least_residue(x2, p)?);
            let (rhs, note) = d_product_rhs(ctx, r1, r2, ctx.embed(y1)?, ctx.embed(y2)?);
            Ok(Evaluation { lhs, rhs, note })
        }
        Statement::SProduct => {
            let (x1, y1, x2, y2) = (params.get("x1")?, params.get("y1")?, params.get("x2")?, params.get("y2")?);
            let lhs = dot(&ctx.column(ColumnKind::S, x1, y1)?, &ctx.column(ColumnKind::S, x2, y2)?);
            let (r1, r2) = (least_residue(x1, p)?, least_residue(x2, p)?);
            let rhs = if r1 == half && r2 == half {
                ctx.symbol(&(-(y1 * y2)))?
            } else {
                md.zero()
            };
            Ok(Evaluation::new(lhs, rhs))
        }
        Statement::CentralPair | Statement::CentralPairTwoMinusSix => {
            let (a, b) = (params.get("a")?, params.get("b")?);
            require_unit("a", a, p)?;
            require_unit("b", b, p)?;
            let half_neg = rational(-1, 2);
            let ya = integer(-4) / a;
            let yb = integer(-4) / b;
            let lhs = dot(&ctx.column(ColumnKind::D, &half_neg, &ya)?, &ctx.column(ColumnKind::D, &half_neg, &yb)?);
            let rhs = if statement == Statement::CentralPairTwoMinusSix {
                ctx.symbol(&integer(3))?
            } else {
                ctx.symbol(&(-(a * b)))?
            };
            Ok(Evaluation::new(lhs, rhs))
        }
        Statement::CatalanSquare | Statement::CatalanSquareTwo | Statement::CatalanSquareMinusSix => {
            let a = params.get("a")?;
            require_unit("a", a, p)?;
            let col = ctx.column(ColumnKind::Catalan, a, &integer(0))?;
            let lhs = dot(&col, &col);
            let minus_one = ctx.symbol(&integer(-1))?;
            let rhs = match statement {
                Statement::CatalanSquareTwo => {
                    md.from_u64(4) * minus_one - md.from_u64(6) * ctx.symbol(&integer(3))? + md.from_u64(3)
                }
                Statement::CatalanSquareMinusSix => {
                    md.from_u64(4) * minus_one + md.from_u64(2) * ctx.symbol(&integer(3))? - md.from_u64(5)
                }
                _ => {
                    let delta = a * (a + integer(4));
                    md.from_u64(4) * minus_one - ctx.embed(&(&delta / a))? * ctx.symbol(&delta)?
                        + ctx.embed(&(a + integer(1)))?
                }
            };
            Ok(Evaluation::new(lhs, rhs))
        }
        Statement::HalvesThirds => {
            let (a, b) = (params.get("a")?, params.get("b")?);
            let lhs = dot(
                &ctx.column(ColumnKind::D, &rational(-1, 2), a)?,
                &ctx.column(ColumnKind::D, &rational(-1, 3), b)?,
            );
            Ok(Evaluation::new(lhs, md.zero()))
        }
        Statement::ThirdsQuarters => {
            let (a, b) = (params.get("a")?, params.get("b")?);
            require_unit("a", a, p)?;
            require_unit("b", b, p)?;
            // C(-1/3,k)C(-2/3,k) 27^k = C(2k,k)C(3k,k), C(-1/4,k)C(-3/4,k) 64^k = C(2k,k)C(4k,2k)
            let lhs = dot(
                &ctx.column(ColumnKind::S, &rational(-1, 3), &(integer(27) / a))?,
                &ctx.column(ColumnKind::S, &rational(-1, 4), &(integer(64) / b))?,
            );
            Ok(Evaluation::new(lhs, md.zero()))
        }
        Statement::CatalanSum => {
            let m = params.get("m")?;
            require_unit("m", m, p)?;
            let inv_m = ctx.embed(m)?.inv()?;
            let t = ctx.tables();
            let mut lhs = md.zero();
            let mut power = md.one();
            for k in 0..p as usize {
                lhs = lhs + t.catalan(k) * power;
                power = power * inv_m;
            }
            let two = integer(2);
            let rhs = ctx.embed(&((integer(4) - m) / &two))? * ctx.symbol(&(m * (m - integer(4))))?
                + ctx.embed(&(m / &two - integer(1)))?;
            Ok(Evaluation::new(lhs, rhs))
        }
        Statement::J2SquareCube => {
            let col = ctx.column(ColumnKind::S, &rational(-1, 2), &integer(-1))?;
            let rhs = md.from_i64(legendre(&integer(-1), p)? as i64);
            Ok(Evaluation::new(dot(&col, &col), rhs))
        }
        Statement::Telescope => Err(Error::UnknownTheorem(format!(
            "{} has no prime; use check_lemma_telescope",
            statement.id()
        ))),
    }
}

fn record(statement: Statement, params: Params, ev: Evaluation, informational: Option<String>) -> VerificationRecord {
    let outcome = match (informational, ev.note) {
        (Some(why), _) | (None, Some(why)) => Outcome::Informational(why),
        (None, None) => Outcome::Checked,
    };
    VerificationRecord::from_residues(statement, params, ev.lhs, ev.rhs, outcome)
}

/// Checks one instance of a prime statement; every precondition violation is an error.
pub fn check(statement: Statement, p: u64, params: &Params) -> Result<VerificationRecord> {
    let modulus = Modulus::new(p, statement.exponent().max(1))?;
    gate(statement, p)?;
    let mut ctx = PrimeContext::new(modulus);
    let ev = evaluate(statement, &mut ctx, params)?;
    Ok(record(statement, params.clone(), ev, None))
}

pub fn check_thm_d(p: u64, x1: &ExactRational, y1: &ExactRational, x2: &ExactRational, y2: &ExactRational) -> Result<VerificationRecord> {
    let params = Params::new()
        .with("x1", x1.clone())
        .with("y1", y1.clone())
        .with("x2", x2.clone())
        .with("y2", y2.clone());
    check(Statement::DProduct, p, &params)
}

pub fn check_thm_s(p: u64, x1: &ExactRational, y1: &ExactRational, x2: &ExactRational, y2: &ExactRational) -> Result<VerificationRecord> {
    let params = Params::new()
        .with("x1", x1.clone())
        .with("y1", y1.clone())
        .with("x2", x2.clone())
        .with("y2", y2.clone());
    check(Statement::SProduct, p, &params)
}

pub fn check_d_complement(p: u64, x: &ExactRational, y: &ExactRational) -> Result<VerificationRecord> {
    check(Statement::DComplement, p, &Params::new().with("x", x.clone()).with("y", y.clone()))
}

pub fn check_s_square(p: u64, x: &ExactRational, y: &ExactRational) -> Result<VerificationRecord> {
    check(Statement::SSquare, p, &Params::new().with("x", x.clone()).with("y", y.clone()))
}

pub fn check_thm_catalan(p: u64, a: &ExactRational) -> Result<VerificationRecord> {
    check(Statement::CatalanSquare, p, &Params::new().with("a", a.clone()))
}

pub fn check_catalan_two(p: u64) -> Result<VerificationRecord> {
    check(Statement::CatalanSquareTwo, p, &Params::new().with("a", integer(2)))
}

pub fn check_catalan_minus_six(p: u64) -> Result<VerificationRecord> {
    check(Statement::CatalanSquareMinusSix, p, &Params::new().with("a", integer(-6)))
}

pub fn check_cor_ab(p: u64, a: &ExactRational, b: &ExactRational) -> Result<VerificationRecord> {
    check(Statement::CentralPair, p, &Params::new().with("a", a.clone()).with("b", b.clone()))
}

pub fn check_central_two_minus_six(p: u64) -> Result<VerificationRecord> {
    let params = Params::new().with("a", integer(2)).with("b", integer(-6));
    check(Statement::CentralPairTwoMinusSix, p, &params)
}

pub fn check_cor_halves_thirds(p: u64, a: &ExactRational, b: &ExactRational) -> Result<VerificationRecord> {
    check(Statement::HalvesThirds, p, &Params::new().with("a", a.clone()).with("b", b.clone()))
}

pub fn check_cor_34(p: u64, a: &ExactRational, b: &ExactRational) -> Result<VerificationRecord> {
    check(Statement::ThirdsQuarters, p, &Params::new().with("a", a.clone()).with("b", b.clone()))
}

pub fn check_lemma_catalan(p: u64, m: &ExactRational) -> Result<VerificationRecord> {
    check(Statement::CatalanSum, p, &Params::new().with("m", m.clone()))
}

pub fn check_kw_mod_p3(p: u64) -> Result<VerificationRecord> {
    check(Statement::J2SquareCube, p, &Params::new())
}

/// Binomial `C(n,k)` for any integer `n` as a falling factorial over `k!`.
fn choose_signed(n: i64, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i as i64);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Verifies, for every `1 <= n <= n_max` and `0 <= i, j <= n-1`,
/// `sum_{k<n} C(k,i)C(k+j,j) = (-1)^j n/(i+j+1) C(n-1,i) C(-n-1,j)` and the
/// difference certificate `G(k) = (k-i)/(i+j+1) C(k,i) C(k+j,j)` with
/// `G(k+1) - G(k) = C(k,i)C(k+j,j)`, in exact integer arithmetic.
pub fn check_lemma_telescope(n_max: usize) -> Vec<VerificationRecord> {
    let width = 2 * n_max + 1;
    let mut pascal: Vec<Vec<BigInt>> = Vec::with_capacity(width);
    for n in 0..width {
        let mut row = vec![BigInt::one(); n + 1];
        for k in 1..n {
            row[k] = &pascal[n - 1][k - 1] + &pascal[n - 1][k];
        }
        pascal.push(row);
    }
    let choose = |n: usize, k: usize| -> BigInt {
        if k > n {
            BigInt::zero()
        } else {
            pascal[n][k].clone()
        }
    };

    let mut records = Vec::new();
    for n in 1..=n_max {
        for i in 0..n {
            for j in 0..n {
                let denom = BigInt::from(i + j + 1);
                let term = |k: usize| choose(k, i) * choose(k + j, j);
                let cert = |k: usize| {
                    BigRational::new(BigInt::from(k as i64 - i as i64), denom.clone())
                        * BigRational::from_integer(term(k))
                };
                let mut lhs = BigInt::zero();
                let mut certificate_ok = true;
                for k in 0..n {
                    let t = term(k);
                    certificate_ok &= cert(k + 1) - cert(k) == BigRational::from_integer(t.clone());
                    lhs += t;
                }
                let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let closed = BigRational::new(sign * BigInt::from(n) * choose(n - 1, i), denom.clone())
                    * BigRational::from_integer(choose_signed(-(n as i64) - 1, j));
                let middle = BigRational::new(BigInt::from(n - i) * choose(n, i) * choose(n + j, j), denom.clone());
                // Telescoping: the certificate differences sum to G(n) - G(0).
                let telescoped = cert(n) - cert(0);
                let rhs = closed.is_integer().then(|| closed.to_integer());
                let pass = certificate_ok
                    && rhs.as_ref() == Some(&lhs)
                    && middle == closed
                    && telescoped == closed;
                let params = Params::new()
                    .with("n", integer(n as i64))
                    .with("i", integer(i as i64))
                    .with("j", integer(j as i64));
                records.push(VerificationRecord {
                    statement: Statement::Telescope,
                    p: 0,
                    e: 0,
                    params,
                    lhs: Some(lhs),
                    rhs,
                    pass,
                    outcome: Outcome::Checked,
                });
            }
        }
    }
    records
}

/// Residue coverage for the `x` parameters of the `D`/`S` statements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XGrid {
    /// All of `0..p` for `p <= full_up_to`, a fixed sample of residues above.
    Residues { full_up_to: u64 },
    Explicit(Vec<ExactRational>),
}

/// What a sweep covers.
#[derive(Clone, Debug)]
pub struct SweepPlan {
    pub statements: Vec<Statement>,
    pub p_min: u64,
    pub p_max: u64,
    pub x_grid: XGrid,
    /// Adds `-1/2, -1/3, -2/3, -1/4, -3/4, -1/6` to the `x` grid.
    pub include_rational_specials: bool,
    pub y_grid: Option<Vec<ExactRational>>,
    pub a_grid: Option<Vec<ExactRational>>,
    pub b_grid: Option<Vec<ExactRational>>,
    pub m_grid: Option<Vec<ExactRational>>,
    pub telescope_max_n: usize,
    pub jobs: usize,
}

pub const DEFAULT_P_MAX: u64 = 500;

impl SweepPlan {
    pub fn new(statements: Vec<Statement>, p_min: u64, p_max: u64) -> Self {
        SweepPlan {
            statements,
            p_min,
            p_max,
            x_grid: XGrid::Residues { full_up_to: 47 },
            include_rational_specials: true,
            y_grid: None,
            a_grid: None,
            b_grid: None,
            m_grid: None,
            telescope_max_n: 60,
            jobs: 1,
        }
    }

    pub fn primes(&self) -> Vec<u64> {
        if self.p_max < self.p_min {
            return Vec::new();
        }
        odd_primes(self.p_min, self.p_max)
    }

    fn xs(&self, p: u64) -> Vec<ExactRational> {
        let mut xs: Vec<ExactRational> = match &self.x_grid {
            XGrid::Explicit(list) => list.clone(),
            XGrid::Residues { full_up_to } => residue_sample(p, *full_up_to).into_iter().map(|r| integer(r as i64)).collect(),
        };
        if self.include_rational_specials {
            xs.extend(rational_specials());
        }
        dedup(xs)
    }
}

pub fn rational_specials() -> Vec<ExactRational> {
    [(-1, 2), (-1, 3), (-2, 3), (-1, 4), (-3, 4), (-1, 6)]
        .into_iter()
        .map(|(n, d)| rational(n, d))
        .collect()
}

/// Residues of `p` used for the `x` grid: everything for small `p`, otherwise
/// the ends, the middle and a spread of interior points.
pub fn residue_sample(p: u64, full_up_to: u64) -> Vec<u64> {
    if p <= full_up_to {
        return (0..p).collect();
    }
    let h = (p - 1) / 2;
    let mut rs = vec![0, 1, 2, 3, h - 1, h, h + 1, p - 4, p - 3, p - 2, p - 1];
    rs.extend((1..7).map(|k| p * k / 7));
    rs.extend([(p - 1) / 3, (p - 1) / 4, (p - 1) / 6, 2 * (p - 1) / 3]);
    rs.sort_unstable();
    rs.dedup();
    rs
}

fn dedup(mut v: Vec<ExactRational>) -> Vec<ExactRational> {
    let mut seen = std::collections::HashSet::new();
    v.retain(|q| seen.insert(q.clone()));
    v
}

fn ints(range: std::ops::RangeInclusive<i64>) -> Vec<ExactRational> {
    range.filter(|&v| v != 0).map(integer).collect()
}

fn default_y_grid() -> Vec<ExactRational> {
    vec![integer(0), integer(1), integer(2), integer(-1), rational(-4, 3)]
}

/// Parameter instances of `statement` at prime `p`.
fn instances(plan: &SweepPlan, statement: Statement, p: u64) -> Vec<Params> {
    let ys = plan.y_grid.clone().unwrap_or_else(default_y_grid);
    let pick = |grid: &Option<Vec<ExactRational>>, default: Vec<ExactRational>| grid.clone().unwrap_or(default);
    let pairs = |a: Vec<ExactRational>, b: Vec<ExactRational>| -> Vec<Params> {
        let mut out = Vec::new();
        for x in &a {
            for y in &b {
                out.push(Params::new().with("a", x.clone()).with("b", y.clone()));
            }
        }
        out
    };
    match statement {
        Statement::DComplement | Statement::SSquare => {
            let xs = plan.xs(p);
            let mut out = Vec::new();
            for x in &xs {
                for y in &ys {
                    out.push(Params::new().with("x", x.clone()).with("y", y.clone()));
                }
            }
            out
        }
        Statement::DProduct | Statement::SProduct => {
            let xs = plan.xs(p);
            let mut out = Vec::with_capacity(xs.len().pow(2) * ys.len().pow(2));
            for x1 in &xs {
                for y1 in &ys {
                    for x2 in &xs {
                        for y2 in &ys {
                            out.push(
                                Params::new()
                                    .with("x1", x1.clone())
                                    .with("y1", y1.clone())
                                    .with("x2", x2.clone())
                                    .with("y2", y2.clone()),
                            );
                        }
                    }
                }
            }
            out
        }
        Statement::CentralPairTwoMinusSix => vec![Params::new().with("a", integer(2)).with("b", integer(-6))],
        Statement::CatalanSquareTwo => vec![Params::new().with("a", integer(2))],
        Statement::CatalanSquareMinusSix => vec![Params::new().with("a", integer(-6))],
        Statement::J2SquareCube => vec![Params::new()],
        Statement::CatalanSquare => pick(&plan.a_grid, ints(-10..=10)).into_iter().map(|a| Params::new().with("a", a)).collect(),
        Statement::CatalanSum => pick(&plan.m_grid, ints(-10..=10)).into_iter().map(|m| Params::new().with("m", m)).collect(),
        Statement::CentralPair => pairs(pick(&plan.a_grid, ints(-6..=6)), pick(&plan.b_grid, ints(-6..=6))),
        Statement::HalvesThirds => {
            let grid = vec![integer(0), integer(1), integer(-1), integer(2), integer(-2), rational(-1, 2)];
            pairs(pick(&plan.a_grid, grid.clone()), pick(&plan.b_grid, grid))
        }
        Statement::ThirdsQuarters => {
            let grid: Vec<_> = [1, -1, 2, -2, 5, -5].into_iter().map(integer).collect();
            pairs(pick(&plan.a_grid, grid.clone()), pick(&plan.b_grid, grid))
        }
        Statement::Telescope => Vec::new(),
    }
}

fn run_unit(plan: &SweepPlan, statement: Statement, p: u64) -> Vec<VerificationRecord> {
    let params_list = instances(plan, statement, p);
    let informational = match gate(statement, p) {
        Ok(()) => None,
        Err(err @ Error::PrimeTooSmall { .. }) => Some(format!("{err}")),
        Err(err) => {
            return params_list
                .into_iter()
                .map(|params| VerificationRecord::skipped(statement, p, params, err.to_string()))
                .collect();
        }
    };
    let modulus = Modulus::new(p, statement.exponent().max(1)).expect("sweep primes are odd primes");
    let mut ctx = PrimeContext::new(modulus);
    params_list
        .into_iter()
        .map(|params| match evaluate(statement, &mut ctx, &params) {
            Ok(ev) => record(statement, params, ev, informational.clone()),
            Err(err) => VerificationRecord::skipped(statement, p, params, err.to_string()),
        })
        .collect()
}

/// Pass/fail/skip counts over a record list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub informational: usize,
    pub informational_mismatches: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(records: &[VerificationRecord]) -> Self {
        let mut s = Summary {
            total: records.len(),
            ..Summary::default()
        };
        for r in records {
            match r.outcome {
                Outcome::Checked => {
                    s.checked += 1;
                    if r.pass {
                        s.passed += 1;
                    } else {
                        s.failed += 1;
                    }
                }
                Outcome::Informational(_) => {
                    s.informational += 1;
                    if !r.pass {
                        s.informational_mismatches += 1;
                    }
                }
                Outcome::Skipped(_) => s.skipped += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
}

/// Runs every (statement, prime, parameters) instance of the plan.
///
/// Units of work are (statement, prime) pairs spread over `plan.jobs`
/// threads; the result is sorted by statement, prime, then parameters.
pub fn run_sweep(plan: &SweepPlan) -> SweepReport {
    let primes = plan.primes();
    let mut units = Vec::new();
    for &st in &plan.statements {
        if st != Statement::Telescope {
            units.extend(primes.iter().map(|&p| (st, p)));
        }
    }
    // Largest primes first so the long units start early.
    units.sort_by_key(|&(st, p)| std::cmp::Reverse((p, st)));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.jobs.max(1))
        .build()
        .expect("thread pool");
    let mut records: Vec<VerificationRecord> = pool.install(|| {
        let mut out: Vec<VerificationRecord> = units
            .par_iter()
            .flat_map_iter(|&(st, p)| run_unit(plan, st, p))
            .collect();
        if plan.statements.contains(&Statement::Telescope) {
            out.extend(check_lemma_telescope(plan.telescope_max_n));
        }
        out
    });
    records.sort_by(|a, b| {
        (a.statement, a.p)
            .cmp(&(b.statement, b.p))
            .then_with(|| a.params.cmp(&b.params))
    });
    let summary = Summary::of(&records);
    SweepReport { records, summary }
}

/// Left and right sides of the `D` or `S` product sum for every
/// `x1, x2` in `0..p`, row-major in `x1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTable {
    pub p: u64,
    pub lhs: Vec<u64>,
    pub rhs: Vec<u64>,
}

pub fn product_table(statement: Statement, p: u64, y1: &ExactRational, y2: &ExactRational) -> Result<ProductTable> {
    if !matches!(statement, Statement::DProduct | Statement::SProduct) {
        return Err(Error::UnknownTheorem(statement.id().to_string()));
    }
    let mut ctx = PrimeContext::new(Modulus::prime(p)?);
    let mut lhs = Vec::with_capacity((p * p) as usize);
    let mut rhs = Vec::with_capacity((p * p) as usize);
    for x1 in 0..p as i64 {
        for x2 in 0..p as i64 {
            let params = Params::new()
                .with("x1", integer(x1))
                .with("y1", y1.clone())
                .with("x2", integer(x2))
                .with("y2", y2.clone());
            let ev = evaluate(statement, &mut ctx, &params)?;
            lhs.push(ev.lhs.value());
            rhs.push(ev.rhs.value());
        }
    }
    Ok(ProductTable { p, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn q(n: i64, d: i64) -> ExactRational {
        rational(n, d)
    }

    fn lhs_rhs(r: &VerificationRecord) -> (i64, i64) {
        let conv = |v: &Option<BigInt>| v.as_ref().unwrap().to_string().parse::<i64>().unwrap();
        (conv(&r.lhs), conv(&r.rhs))
    }

    #[test]
    fn d_product_examples() {
        let r = check_thm_d(5, &integer(1), &integer(1), &integer(3), &integer(1)).unwrap();
        assert_eq!(lhs_rhs(&r), (4, 4));
        assert!(r.pass && r.outcome == Outcome::Checked);
        let r = check_thm_d(5, &integer(1), &integer(1), &integer(1), &integer(1)).unwrap();
        assert_eq!(lhs_rhs(&r), (0, 0));
        assert!(matches!(
            check_thm_d(4, &integer(1), &integer(1), &integer(1), &integer(1)),
            Err(Error::NotOddPrime(4))
        ));
        assert!(matches!(
            check_thm_d(5, &q(1, 5), &integer(1), &integer(1), &integer(1)),
            Err(Error::NotPAdic { .. })
        ));
    }

    #[test]
    fn d_product_beyond_dichotomy_is_informational() {
        let r = check_thm_d(7, &integer(5), &integer(2), &integer(4), &q(-4, 3)).unwrap();
        assert!(matches!(r.outcome, Outcome::Informational(_)));
        assert!(r.pass);
    }

    #[test]
    fn s_product_examples() {
        let r = check_thm_s(5, &integer(2), &integer(1), &integer(2), &integer(1)).unwrap();
        assert_eq!(lhs_rhs(&r), (1, 1));
        let r = check_thm_s(5, &integer(1), &integer(1), &integer(2), &integer(1)).unwrap();
        assert_eq!(lhs_rhs(&r).1, 0);
        assert!(r.pass);
    }

    #[test]
    fn one_parameter_specializations() {
        for p in [3u64, 5, 7, 11, 13] {
            for x in [integer(0), integer(2), q(-1, 2), q(-1, 6)] {
                if !crate::modring::is_padic(&x, p) {
                    continue;
                }
                for y in [integer(1), integer(-1), q(-4, 3)] {
                    if !crate::modring::is_padic(&y, p) {
                        continue;
                    }
                    assert!(check_d_complement(p, &x, &y).unwrap().pass, "eq1.1 p={p} x={x} y={y}");
                    assert!(check_s_square(p, &x, &y).unwrap().pass, "eq1.2 p={p} x={x} y={y}");
                }
            }
        }
        assert!(matches!(
            check_d_complement(5, &integer(1), &integer(0)),
            Err(Error::ZeroParameter(_))
        ));
    }

    #[test]
    fn catalan_square_examples() {
        let r = check_thm_catalan(5, &integer(1)).unwrap();
        assert_eq!(lhs_rhs(&r), (1, 1));
        for p in [5u64, 7, 11, 13, 17] {
            assert!(check_catalan_two(p).unwrap().pass);
            assert!(check_catalan_minus_six(p).unwrap().pass);
        }
        assert!(matches!(check_catalan_two(3), Err(Error::PrimeTooSmall { p: 3, min: 5 })));
        assert!(matches!(check_thm_catalan(5, &integer(0)), Err(Error::ZeroParameter(_))));
        assert!(matches!(check_thm_catalan(5, &integer(10)), Err(Error::ZeroParameter(_))));
    }

    #[test]
    fn central_pair_examples() {
        let r = check_cor_ab(5, &integer(1), &integer(1)).unwrap();
        assert_eq!(lhs_rhs(&r).1, 1);
        assert!(r.pass);
        let r = check_cor_ab(5, &integer(1), &integer(2)).unwrap();
        assert_eq!(lhs_rhs(&r), (4, 4));
        for p in [5u64, 7, 11, 13] {
            assert!(check_central_two_minus_six(p).unwrap().pass);
        }
    }

    #[test]
    fn halves_thirds_examples() {
        assert!(check_cor_halves_thirds(7, &integer(1), &integer(1)).unwrap().pass);
        let r = check_cor_halves_thirds(13, &integer(2), &integer(3)).unwrap();
        assert_eq!(lhs_rhs(&r).1, 0);
        assert!(r.pass);
        assert!(matches!(
            check_cor_halves_thirds(5, &integer(1), &integer(1)),
            Err(Error::WrongResidueClass { p: 5, .. })
        ));
    }

    #[test]
    fn thirds_quarters_examples() {
        assert!(check_cor_34(5, &integer(1), &integer(1)).unwrap().pass);
        assert!(check_cor_34(7, &integer(2), &integer(3)).unwrap().pass);
        assert!(matches!(
            check_cor_34(3, &integer(1), &integer(1)),
            Err(Error::PrimeTooSmall { .. })
        ));
        for p in odd_primes(7, 199) {
            assert_ne!(least_residue(&q(-1, 3), p).unwrap(), (p - 1) / 2);
        }
    }

    #[test]
    fn catalan_sum_examples() {
        let r = check_lemma_catalan(5, &integer(1)).unwrap();
        assert_eq!(lhs_rhs(&r), (3, 3));
        let r = check_lemma_catalan(7, &integer(4)).unwrap();
        assert_eq!(lhs_rhs(&r).1, 1);
        let r = check_lemma_catalan(7, &integer(2)).unwrap();
        assert_eq!(lhs_rhs(&r), (6, 6));
    }

    #[test]
    fn kw_examples() {
        let r = check_kw_mod_p3(5).unwrap();
        assert_eq!((r.e, lhs_rhs(&r)), (3, (1, 1)));
        assert_eq!(lhs_rhs(&check_kw_mod_p3(7).unwrap()), (342, 342));
        assert_eq!(lhs_rhs(&check_kw_mod_p3(11).unwrap()), (1330, 1330));
        assert!(matches!(check_kw_mod_p3(3), Err(Error::PrimeTooSmall { .. })));
    }

    #[test]
    fn telescope_examples() {
        let recs = check_lemma_telescope(3);
        assert_eq!(recs.len(), 1 + 4 + 9);
        assert!(recs.iter().all(|r| r.pass));
        let find = |n: i64, i: i64, j: i64| {
            recs.iter()
                .find(|r| {
                    r.params.get("n").unwrap() == &integer(n)
                        && r.params.get("i").unwrap() == &integer(i)
                        && r.params.get("j").unwrap() == &integer(j)
                })
                .unwrap()
        };
        assert_eq!(lhs_rhs(find(2, 0, 0)), (2, 2));
        assert_eq!(lhs_rhs(find(3, 1, 1)), (8, 8));
        assert_eq!(lhs_rhs(find(3, 2, 0)), (1, 1));
        assert!(check_lemma_telescope(0).is_empty());
    }

    #[test]
    fn sweep_small_plan() {
        let mut plan = SweepPlan::new(vec![Statement::DProduct], 3, 5);
        plan.x_grid = XGrid::Explicit(vec![integer(0), integer(1)]);
        plan.include_rational_specials = false;
        plan.y_grid = Some(vec![integer(0), integer(1)]);
        let report = run_sweep(&plan);
        assert_eq!(report.records.len(), 32);
        assert_eq!(report.summary.passed, 32);
    }

    #[test]
    fn sweep_edge_plans() {
        let plan = SweepPlan::new(vec![Statement::DProduct, Statement::CatalanSquare], 20, 10);
        let report = run_sweep(&plan);
        assert!(report.records.is_empty());
        assert_eq!(report.summary, Summary::default());

        let plan = SweepPlan::new(vec![Statement::HalvesThirds], 5, 5);
        let report = run_sweep(&plan);
        assert_eq!(report.summary.checked, 0);
        assert_eq!(report.summary.skipped, report.records.len());
        assert!(report.records.iter().all(|r| r.skip_reason().unwrap().contains("congruent")));
    }

    #[test]
    fn sweep_marks_small_primes_informational() {
        let plan = SweepPlan::new(vec![Statement::CatalanSquareTwo, Statement::J2SquareCube], 3, 7);
        let report = run_sweep(&plan);
        for r in &report.records {
            if r.p == 3 {
                assert!(matches!(r.outcome, Outcome::Informational(_)));
            } else {
                assert_eq!(r.outcome, Outcome::Checked);
                assert!(r.pass);
            }
        }
    }

    #[test]
    fn sweep_order_independent_of_jobs() {
        let mut plan = SweepPlan::new(vec![Statement::SProduct, Statement::CatalanSum, Statement::CentralPair], 3, 23);
        plan.x_grid = XGrid::Residues { full_up_to: 11 };
        let one = run_sweep(&plan);
        plan.jobs = 4;
        let four = run_sweep(&plan);
        assert_eq!(one.records, four.records);
        assert_eq!(one.summary.failed, 0);
    }

    #[test]
    fn record_json_shape() {
        let r = check_thm_catalan(5, &integer(1)).unwrap();
        let v = r.to_json();
        assert_eq!(v["statement"], "eq1.6");
        assert_eq!(v["p"], 5);
        assert_eq!(v["params"]["a"], "1/1");
        assert_eq!(v["lhs"], 1);
        assert_eq!(v["pass"], true);
        assert!(v["skip_reason"].is_null());
        let row = r.csv_row();
        assert_eq!(row[3], "a=1/1");
    }

    #[test]
    fn product_table_antidiagonal() {
        let t = product_table(Statement::DProduct, 7, &integer(2), &integer(3)).unwrap();
        assert_eq!(t.lhs.len(), 49);
        for x1 in 0..7usize {
            for x2 in 0..7usize {
                let idx = x1 * 7 + x2;
                if x1 + x2 <= 6 {
                    assert_eq!(t.lhs[idx], t.rhs[idx]);
                }
                if x1 + x2 < 6 {
                    assert_eq!(t.lhs[idx], 0);
                }
            }
        }
        assert!(product_table(Statement::CatalanSum, 7, &integer(1), &integer(1)).is_err());
    }

    #[test]
    fn signed_binomial() {
        assert_eq!(choose_signed(-4, 1), BigInt::from(-4));
        assert_eq!(choose_signed(-3, 2), BigInt::from(6));
        assert!(choose_signed(-1, 3).is_negative());
    }
}
