//! Exact-rational ground truth.
//!
//! Everything here is evaluated with big integers and rationals straight
//! from the defining sums, and reduced modulo `p^e` only at the very end with
//! its own modular inverse. Nothing is shared with the residue-ring fast
//! path, so agreement between the two is meaningful.
//!
//! Where a statement has a second written form (central binomials instead of
//! `D_n(-1/2, -4/a)`, `C(2k,k)C(3k,k)` instead of `S_n(-1/3, 27/a)`), the
//! oracle uses that second form.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modring::{format_rational, ExactRational, Modulus, Residue};
use crate::statement::{Params, Statement};
use crate::verify::VerificationRecord;

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `C(x,k)` for rational `x`.
pub fn exact_binom(x: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (x - big(i as i64)) / big(i as i64 + 1);
    }
    acc
}

/// `C(n,k)` for natural `n`.
pub fn int_binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C_k = C(2k,k)/(k+1)`.
pub fn exact_catalan(k: u64) -> BigInt {
    int_binom(2 * k, k) / BigInt::from(k + 1)
}

fn pow(q: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}

/// `D_n(x,y)` from its defining sum.
pub fn exact_d(n: usize, x: &ExactRational, y: &ExactRational) -> ExactRational {
    (0..=n)
        .map(|k| BigRational::from_integer(int_binom(n as u64, k as u64)) * exact_binom(x, k) * pow(y, k))
        .fold(BigRational::zero(), |acc, t| acc + t)
}

/// `sum_k C(n,k) C(x+k,k) y^k (1-y)^(n-k)`.
pub fn exact_d_ljunggren(n: usize, x: &ExactRational, y: &ExactRational) -> ExactRational {
    let one_minus_y = big(1) - y;
    (0..=n)
        .map(|k| {
            BigRational::from_integer(int_binom(n as u64, k as u64))
                * exact_binom(&(x + big(k as i64)), k)
                * pow(y, k)
                * pow(&one_minus_y, n - k)
        })
        .fold(BigRational::zero(), |acc, t| acc + t)
}

/// `S_n(x,y)` from its defining sum.
pub fn exact_s(n: usize, x: &ExactRational, y: &ExactRational) -> ExactRational {
    let conj = big(-1) - x;
    (0..=n)
        .map(|k| {
            BigRational::from_integer(int_binom(n as u64, k as u64))
                * exact_binom(x, k)
                * exact_binom(&conj, k)
                * pow(y, k)
        })
        .fold(BigRational::zero(), |acc, t| acc + t)
}

/// `sum_k C(n,k) C_k / a^k`.
pub fn exact_catalan_inner(n: usize, a: &ExactRational) -> Result<ExactRational> {
    if a.is_zero() {
        return Err(Error::ZeroParameter("a = 0".into()));
    }
    let inv = a.recip();
    Ok((0..=n)
        .map(|k| {
            BigRational::from_integer(int_binom(n as u64, k as u64) * exact_catalan(k as u64)) * pow(&inv, k)
        })
        .fold(BigRational::zero(), |acc, t| acc + t))
}

/// `J~2(n) = sum_k C(n,k) (-1)^k C(-1/2,k)^2`.
pub fn exact_j2(n: usize) -> ExactRational {
    let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    (0..=n)
        .map(|k| {
            let c = exact_binom(&half, k);
            let t = BigRational::from_integer(int_binom(n as u64, k as u64)) * &c * &c;
            if k % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .fold(BigRational::zero(), |acc, t| acc + t)
}

/// Modular inverse of `a` modulo `m` by the extended Euclidean algorithm.
fn big_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    r0.is_one().then(|| t0.mod_floor(m))
}

/// Image of an exact rational in `Z/p^e`; fails when `p` divides the denominator.
pub fn reduce(q: &ExactRational, modulus: Modulus) -> Result<Residue> {
    let p = BigInt::from(modulus.p());
    if (q.denom() % &p).is_zero() {
        return Err(Error::NotPAdic {
            value: format_rational(q),
            p: modulus.p(),
        });
    }
    let m = BigInt::from(modulus.value());
    let inv = big_inverse(q.denom(), &m).expect("denominator prime to p is a unit");
    Ok(modulus.from_bigint(&(q.numer() * inv).mod_floor(&m)))
}

/// Binomial transforms `sum_{k<=n} C(n,k) t_k` for `n < len`, held over a
/// common denominator.
#[derive(Clone, Debug)]
pub struct ExactColumn {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl ExactColumn {
    pub fn from_terms(terms: &[BigRational]) -> Self {
        let denominator = terms.iter().fold(BigInt::one(), |l, t| l.lcm(t.denom()));
        let scaled: Vec<BigInt> = terms.iter().map(|t| t.numer() * (&denominator / t.denom())).collect();
        let mut row: Vec<BigInt> = Vec::with_capacity(terms.len());
        let mut numerators = Vec::with_capacity(terms.len());
        for n in 0..terms.len() {
            row.push(BigInt::one());
            for k in (1..n).rev() {
                let prev = row[k - 1].clone();
                row[k] += prev;
            }
            numerators.push(row.iter().zip(&scaled).map(|(c, t)| c * t).sum());
        }
        ExactColumn {
            numerators,
            denominator,
        }
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn value(&self, n: usize) -> BigRational {
        BigRational::new(self.numerators[n].clone(), self.denominator.clone())
    }

    /// `sum_n self[n] * other[n]`.
    pub fn dot(&self, other: &ExactColumn) -> BigRational {
        let num: BigInt = self.numerators.iter().zip(&other.numerators).map(|(a, b)| a * b).sum();
        BigRational::new(num, &self.denominator * &other.denominator)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Terms {
    /// `C(x,k) y^k`
    D(BigRational, BigRational),
    /// `C(x,k) C(-1-x,k) y^k`
    S(BigRational, BigRational),
    /// `C(2k,k) / a^k`
    Central(BigRational),
    /// `C_k / a^k`
    Catalan(BigRational),
    /// `C(2k,k) C(3k,k) / a^k`
    Cubic(BigRational),
    /// `C(2k,k) C(4k,2k) / a^k`
    Quartic(BigRational),
    /// `(-1)^k C(-1/2,k)^2`
    J2,
}

impl Terms {
    fn generate(&self, len: usize) -> Vec<BigRational> {
        let int = |v: BigInt| BigRational::from_integer(v);
        (0..len)
            .map(|k| {
                let ku = k as u64;
                match self {
                    Terms::D(x, y) => exact_binom(x, k) * pow(y, k),
                    Terms::S(x, y) => exact_binom(x, k) * exact_binom(&(big(-1) - x), k) * pow(y, k),
                    Terms::Central(a) => int(int_binom(2 * ku, ku)) / pow(a, k),
                    Terms::Catalan(a) => int(exact_catalan(ku)) / pow(a, k),
                    Terms::Cubic(a) => int(int_binom(2 * ku, ku) * int_binom(3 * ku, ku)) / pow(a, k),
                    Terms::Quartic(a) => int(int_binom(2 * ku, ku) * int_binom(4 * ku, 2 * ku)) / pow(a, k),
                    Terms::J2 => {
                        let c = exact_binom(&BigRational::new(BigInt::from(-1), BigInt::from(2)), k);
                        let t = &c * &c;
                        if k % 2 == 0 {
                            t
                        } else {
                            -t
                        }
                    }
                }
            })
            .collect()
    }
}

/// Memoizes exact columns across many left-hand sides at the same primes.
#[derive(Default)]
pub struct OracleSession {
    columns: HashMap<(Terms, usize), Rc<ExactColumn>>,
}

fn padic(q: &ExactRational, p: u64) -> Result<()> {
    if (q.denom() % BigInt::from(p)).is_zero() {
        return Err(Error::NotPAdic {
            value: format_rational(q),
            p,
        });
    }
    Ok(())
}

fn unit(name: &str, q: &ExactRational, p: u64) -> Result<()> {
    padic(q, p)?;
    if q.is_zero() || (q.numer().abs() % BigInt::from(p)).is_zero() {
        return Err(Error::ZeroParameter(format!("{name} = {}", format_rational(q))));
    }
    Ok(())
}

impl OracleSession {
    pub fn new() -> Self {
        OracleSession::default()
    }

    fn column(&mut self, terms: Terms, len: usize) -> Rc<ExactColumn> {
        Rc::clone(
            self.columns
                .entry((terms.clone(), len))
                .or_insert_with(|| Rc::new(ExactColumn::from_terms(&terms.generate(len)))),
        )
    }

    fn pair(&mut self, a: Terms, b: Terms, len: usize) -> BigRational {
        let left = self.column(a, len);
        let right = self.column(b, len);
        left.dot(&right)
    }

    /// Exact value of the full outer sum of `statement` at `p`.
    pub fn lhs(&mut self, statement: Statement, p: u64, params: &Params) -> Result<ExactRational> {
        let len = p as usize;
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let get = |name: &str| -> Result<BigRational> {
            let v = params.get(name)?.clone();
            padic(&v, p)?;
            Ok(v)
        };
        Ok(match statement {
            Statement::DComplement => {
                let (x, y) = (get("x")?, get("y")?);
                let complement = big(-1) - &x;
                self.pair(Terms::D(x, y.clone()), Terms::D(complement, y), len)
            }
            Statement::SSquare => {
                let (x, y) = (get("x")?, get("y")?);
                self.pair(Terms::S(x.clone(), y.clone()), Terms::S(x, y), len)
            }
            Statement::DProduct => self.pair(
                Terms::D(get("x1")?, get("y1")?),
                Terms::D(get("x2")?, get("y2")?),
                len,
            ),
            Statement::SProduct => self.pair(
                Terms::S(get("x1")?, get("y1")?),
                Terms::S(get("x2")?, get("y2")?),
                len,
            ),
            Statement::CentralPair | Statement::CentralPairTwoMinusSix => {
                let (a, b) = (get("a")?, get("b")?);
                unit("a", &a, p)?;
                unit("b", &b, p)?;
                self.pair(Terms::Central(a), Terms::Central(b), len)
            }
            Statement::CatalanSquare | Statement::CatalanSquareTwo | Statement::CatalanSquareMinusSix => {
                let a = get("a")?;
                unit("a", &a, p)?;
                self.pair(Terms::Catalan(a.clone()), Terms::Catalan(a), len)
            }
            Statement::HalvesThirds => self.pair(Terms::D(q(-1, 2), get("a")?), Terms::D(q(-1, 3), get("b")?), len),
            Statement::ThirdsQuarters => {
                let (a, b) = (get("a")?, get("b")?);
                unit("a", &a, p)?;
                unit("b", &b, p)?;
                self.pair(Terms::Cubic(a), Terms::Quartic(b), len)
            }
            Statement::CatalanSum => {
                let m = get("m")?;
                unit("m", &m, p)?;
                Terms::Catalan(m)
                    .generate(len)
                    .into_iter()
                    .fold(BigRational::zero(), |acc, t| acc + t)
            }
            Statement::J2SquareCube => self.pair(Terms::J2, Terms::J2, len),
            Statement::Telescope => return Err(Error::UnknownTheorem(statement.id().to_string())),
        })
    }
}

/// Exact left-hand side of one statement instance.
pub fn exact_theorem_lhs(statement: Statement, p: u64, params: &Params) -> Result<ExactRational> {
    if !crate::modring::is_prime(p) || p == 2 {
        return Err(Error::NotOddPrime(p));
    }
    OracleSession::new().lhs(statement, p, params)
}

/// A record whose left side disagrees with the oracle.
#[derive(Clone, Debug)]
pub struct OracleMismatch {
    pub record: VerificationRecord,
    pub oracle: Option<BigInt>,
    pub error: Option<String>,
}

/// Result of cross-checking a record list against the oracle.
#[derive(Clone, Debug, Default)]
pub struct CrossCheck {
    pub compared: usize,
    pub mismatches: Vec<OracleMismatch>,
}

/// Recomputes the left side of every computed record with `p <= p_max`
/// exactly and compares its reduction with the record.
pub fn cross_check(records: &[VerificationRecord], p_max: u64) -> CrossCheck {
    let mut groups: HashMap<(Statement, u64), Vec<&VerificationRecord>> = HashMap::new();
    for r in records {
        if r.p > 0 && r.p <= p_max && r.lhs.is_some() {
            groups.entry((r.statement, r.p)).or_default().push(r);
        }
    }
    let mut groups: Vec<_> = groups.into_iter().collect();
    groups.sort_by_key(|(k, _)| *k);
    let results: Vec<(usize, Vec<OracleMismatch>)> = groups
        .par_iter()
        .map(|((statement, p), recs)| {
            let mut session = OracleSession::new();
            let mut mismatches = Vec::new();
            for r in recs {
                let outcome = Modulus::new(*p, r.e)
                    .and_then(|md| reduce(&session.lhs(*statement, *p, &r.params)?, md));
                match outcome {
                    Ok(res) => {
                        let expect = BigInt::from(res.value());
                        if r.lhs.as_ref() != Some(&expect) {
                            mismatches.push(OracleMismatch {
                                record: (*r).clone(),
                                oracle: Some(expect),
                                error: None,
                            });
                        }
                    }
                    Err(err) => mismatches.push(OracleMismatch {
                        record: (*r).clone(),
                        oracle: None,
                        error: Some(err.to_string()),
                    }),
                }
            }
            (recs.len(), mismatches)
        })
        .collect();
    let mut out = CrossCheck::default();
    for (n, m) in results {
        out.compared += n;
        out.mismatches.extend(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::{integer, rational};

    #[test]
    fn exact_d_examples() {
        assert_eq!(exact_d(1, &rational(-1, 2), &integer(2)), integer(0));
        assert_eq!(exact_d(2, &rational(-1, 2), &integer(1)), rational(3, 8));
        assert_eq!(exact_d(0, &rational(5, 7), &rational(-3, 11)), integer(1));
    }

    #[test]
    fn exact_twins() {
        assert_eq!(exact_s(1, &integer(2), &integer(1)), integer(-5));
        assert_eq!(exact_catalan_inner(3, &integer(1)).unwrap(), integer(15));
        assert_eq!(exact_catalan_inner(4, &integer(1)).unwrap(), integer(51));
        assert!(exact_catalan_inner(3, &integer(0)).is_err());
        assert_eq!(exact_j2(0), integer(1));
        assert_eq!(exact_j2(1), rational(3, 4));
        assert_eq!(exact_j2(2), rational(41, 64));
        let cats: Vec<_> = (0..6).map(exact_catalan).collect();
        assert_eq!(cats, [1, 1, 2, 5, 14, 42].map(BigInt::from));
    }

    #[test]
    fn theorem_lhs_examples() {
        let p = Params::new()
            .with("x1", integer(1))
            .with("y1", integer(1))
            .with("x2", integer(3))
            .with("y2", integer(1));
        assert_eq!(exact_theorem_lhs(Statement::DProduct, 5, &p).unwrap(), integer(294));
        let p = Params::new()
            .with("x1", integer(2))
            .with("y1", integer(1))
            .with("x2", integer(2))
            .with("y2", integer(1));
        assert_eq!(exact_theorem_lhs(Statement::SProduct, 5, &p).unwrap(), integer(221));
        let p = Params::new().with("a", integer(1));
        assert_eq!(exact_theorem_lhs(Statement::CatalanSquare, 5, &p).unwrap(), integer(2856));
        let p = Params::new().with("m", integer(1));
        assert_eq!(exact_theorem_lhs(Statement::CatalanSum, 5, &p).unwrap(), integer(23));
        assert!(matches!(
            exact_theorem_lhs(Statement::Telescope, 5, &Params::new()),
            Err(Error::UnknownTheorem(_))
        ));
        let p = Params::new().with("a", rational(1, 5));
        assert!(matches!(
            exact_theorem_lhs(Statement::CatalanSquare, 5, &p),
            Err(Error::NotPAdic { .. })
        ));
    }

    #[test]
    fn reduce_examples() {
        let m5 = Modulus::prime(5).unwrap();
        assert_eq!(reduce(&integer(294), m5).unwrap().value(), 4);
        assert_eq!(reduce(&integer(23), m5).unwrap().value(), 3);
        assert_eq!(reduce(&integer(0), Modulus::new(7, 3).unwrap()).unwrap().value(), 0);
        assert_eq!(reduce(&rational(-1, 2), m5).unwrap().value(), 2);
        assert!(reduce(&rational(1, 10), m5).is_err());
    }

    #[test]
    fn column_matches_pointwise() {
        let x = rational(-1, 6);
        let y = rational(-4, 3);
        let col = ExactColumn::from_terms(&Terms::D(x.clone(), y.clone()).generate(9));
        assert_eq!(col.len(), 9);
        for n in 0..9 {
            assert_eq!(col.value(n), exact_d(n, &x, &y));
        }
        let j = ExactColumn::from_terms(&Terms::J2.generate(5));
        for n in 0..5 {
            assert_eq!(j.value(n), exact_j2(n));
        }
    }
}
