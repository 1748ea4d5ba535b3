//! Arithmetic in `Z/p^e` for an odd prime `p` and `1 <= e <= 3`.
//!
//! Rational parameters with denominator prime to `p` are the p-adic integers
//! of interest here; [`embed`] maps them into the residue ring. Binomial
//! coefficients with a rational upper argument are only formed for lower
//! index `k < p`, where `k!` is a unit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

/// Largest supported exponent of a prime-power modulus.
pub const MAX_EXPONENT: u32 = 3;

/// Builds `num/den` in lowest terms. Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses an optional sign, an integer, or `num/den` with `den > 0`.
pub fn parse_rational(text: &str) -> Result<ExactRational> {
    let err = || Error::Parse {
        what: "rational",
        text: text.to_string(),
    };
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| err())?;
    let den = den.trim();
    if den.starts_with(['+', '-']) {
        return Err(err());
    }
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// `num/den` string form, denominator omitted when it is 1 (`-4/3`, `7`).
pub fn format_rational(q: &ExactRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Always `num/den` (`-4/3`, `7/1`); the form used in serialized records.
pub fn format_fraction(q: &ExactRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Odd primes in `lo..=hi`, ascending.
pub fn odd_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&n| is_prime(n)).collect()
}

/// A prime-power modulus `p^e` with `p` an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    e: u32,
    m: u64,
}

impl Modulus {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if !(1..=MAX_EXPONENT).contains(&e) {
            return Err(Error::ExponentOutOfRange(e));
        }
        // Products are formed in u128, so m itself only has to fit in u64.
        let m = p.checked_pow(e).ok_or(Error::ExponentOutOfRange(e))?;
        Ok(Modulus { p, e, m })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Modulus::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// `p^e`.
    pub fn value(&self) -> u64 {
        self.m
    }

    pub fn zero(self) -> Residue {
        Residue { value: 0, modulus: self }
    }

    pub fn one(self) -> Residue {
        Residue {
            value: 1 % self.m,
            modulus: self,
        }
    }

    pub fn from_u64(self, v: u64) -> Residue {
        Residue {
            value: v % self.m,
            modulus: self,
        }
    }

    pub fn from_i64(self, v: i64) -> Residue {
        Residue {
            value: (v as i128).rem_euclid(self.m as i128) as u64,
            modulus: self,
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Residue {
        let r = v.mod_floor(&BigInt::from(self.m));
        Residue {
            value: r.to_u64().expect("reduced value fits in u64"),
            modulus: self,
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.e)
        }
    }
}

impl FromStr for Modulus {
    type Err = Error;

    /// Accepts `p` or `p^e`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "modulus",
            text: s.to_string(),
        };
        let (p, e) = match s.trim().split_once('^') {
            Some((p, e)) => (p, e.trim().parse::<u32>().map_err(|_| err())?),
            None => (s.trim(), 1),
        };
        let p = p.trim().parse::<u64>().map_err(|_| err())?;
        Modulus::new(p, e)
    }
}

/// Canonical representative in `[0, p^e)` together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// True when the residue is a unit, i.e. `p` does not divide it.
    pub fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.modulus.p)
    }

    fn check(&self, other: &Residue) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.m,
                right: other.modulus.m,
            });
        }
        Ok(())
    }

    pub fn try_add(self, other: Residue) -> Result<Residue> {
        self.check(&other)?;
        Ok(self + other)
    }

    pub fn try_sub(self, other: Residue) -> Result<Residue> {
        self.check(&other)?;
        Ok(self - other)
    }

    pub fn try_mul(self, other: Residue) -> Result<Residue> {
        self.check(&other)?;
        Ok(self * other)
    }

    /// `self^exp` with `0^0 = 1`.
    pub fn pow(self, exp: u64) -> Residue {
        Residue {
            value: pow_mod(self.value, exp, self.modulus.m),
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse via extended Euclid on `p^e`.
    pub fn inv(self) -> Result<Residue> {
        let m = self.modulus.m as i128;
        let (mut r0, mut r1) = (m, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return Err(Error::NotInvertible {
                value: self.value,
                modulus: self.modulus.m,
            });
        }
        Ok(Residue {
            value: t0.rem_euclid(m) as u64,
            modulus: self.modulus,
        })
    }

    /// Value mapped to `(-m/2, m/2]`, handy for reading off `-1`.
    pub fn signed(&self) -> i128 {
        let m = self.modulus.m as i128;
        let v = self.value as i128;
        if v > m / 2 {
            v - m
        } else {
            v
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

// The operator impls panic on mismatched moduli; the `try_*` methods report it.
impl Add for Residue {
    type Output = Residue;

    fn add(self, rhs: Residue) -> Residue {
        assert_eq!(self.modulus, rhs.modulus, "modulus mismatch");
        let m = self.modulus.m;
        let s = self.value as u128 + rhs.value as u128;
        Residue {
            value: (s % m as u128) as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;

    fn sub(self, rhs: Residue) -> Residue {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Residue {
        let value = if self.value == 0 {
            0
        } else {
            self.modulus.m - self.value
        };
        Residue {
            value,
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;

    fn mul(self, rhs: Residue) -> Residue {
        assert_eq!(self.modulus, rhs.modulus, "modulus mismatch");
        Residue {
            value: mul_mod(self.value, rhs.value, self.modulus.m),
            modulus: self.modulus,
        }
    }
}

fn not_padic(q: &ExactRational, p: u64) -> Error {
    Error::NotPAdic {
        value: format_rational(q),
        p,
    }
}

/// Image of a p-adic integer rational in `Z/p^e`.
pub fn embed(q: &ExactRational, modulus: Modulus) -> Result<Residue> {
    let den = modulus.from_bigint(q.denom());
    if !den.is_unit() {
        return Err(not_padic(q, modulus.p));
    }
    Ok(modulus.from_bigint(q.numer()) * den.inv()?)
}

/// `<x>_p`: the unique `r` in `[0, p)` with `x ≡ r (mod p)`.
pub fn least_residue(x: &ExactRational, p: u64) -> Result<u64> {
    Ok(embed(x, Modulus::prime(p)?)?.value)
}

/// Legendre symbol `(a/p)` by Euler's criterion; `0` when `p | a`.
pub fn legendre(a: &ExactRational, p: u64) -> Result<i8> {
    let modulus = Modulus::prime(p)?;
    let r = embed(a, modulus)?;
    if r.is_zero() {
        return Ok(0);
    }
    Ok(if r.pow((p - 1) / 2).value == 1 { 1 } else { -1 })
}

/// Factorials, inverse factorials, central binomials and Catalan numbers
/// modulo `p^e` for arguments `0..p`.
#[derive(Clone, Debug)]
pub struct BinomialTables {
    modulus: Modulus,
    fact: Vec<Residue>,
    inv_fact: Vec<Residue>,
    central: Vec<Residue>,
    catalan: Vec<Residue>,
}

impl BinomialTables {
    pub fn build(modulus: Modulus) -> Self {
        let p = modulus.p as usize;
        let mut fact = Vec::with_capacity(p);
        let mut acc = modulus.one();
        fact.push(acc);
        for i in 1..p {
            acc = acc * modulus.from_u64(i as u64);
            fact.push(acc);
        }
        let inv_fact = fact
            .iter()
            .map(|f| f.inv().expect("i! is a unit for i < p"))
            .collect();

        // Pascal rows 0..=2p-2 by additions only. C(2k,k) is divisible by p
        // for (p-1)/2 < k < p and C_k = C(2k,k)/(k+1) cannot be divided at
        // k = p-1, so neither table may be derived by division.
        let width = 2 * p - 1;
        let mut row = vec![modulus.zero(); width];
        row[0] = modulus.one();
        let mut central = Vec::with_capacity(p);
        let mut catalan = Vec::with_capacity(p);
        for n in 0..width {
            if n > 0 {
                for j in (1..=n).rev() {
                    row[j] = row[j] + row[j - 1];
                }
            }
            if n % 2 == 0 {
                let k = n / 2;
                central.push(row[k]);
                catalan.push(if k == 0 { row[0] } else { row[k] - row[k - 1] });
            }
        }
        BinomialTables {
            modulus,
            fact,
            inv_fact,
            central,
            catalan,
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn fact(&self, i: usize) -> Residue {
        self.fact[i]
    }

    pub fn inv_fact(&self, i: usize) -> Residue {
        self.inv_fact[i]
    }

    /// `C(2k,k) mod p^e`, `k < p`.
    pub fn central(&self, k: usize) -> Residue {
        self.central[k]
    }

    /// `C_k mod p^e`, `k < p`.
    pub fn catalan(&self, k: usize) -> Residue {
        self.catalan[k]
    }

    /// `C(n,k)` for `n < p`.
    pub fn choose(&self, n: usize, k: usize) -> Residue {
        if k > n {
            return self.modulus.zero();
        }
        self.fact[n] * self.inv_fact[k] * self.inv_fact[n - k]
    }

    /// `C(x,k)` for an already embedded upper argument.
    pub fn choose_residue(&self, x: Residue, k: usize) -> Result<Residue> {
        let p = self.modulus.p;
        if k as u64 >= p {
            return Err(Error::KTooLarge { k: k as u64, p });
        }
        let mut acc = self.modulus.one();
        for i in 0..k {
            acc = acc * (x - self.modulus.from_u64(i as u64));
        }
        Ok(acc * self.inv_fact[k])
    }

    /// Row `C(x,0), ..., C(x,len-1)` for an embedded `x`, `len <= p`.
    pub fn choose_row(&self, x: Residue, len: usize) -> Result<Vec<Residue>> {
        let p = self.modulus.p;
        if len as u64 > p {
            return Err(Error::KTooLarge {
                k: len as u64 - 1,
                p,
            });
        }
        let mut out = Vec::with_capacity(len);
        let mut falling = self.modulus.one();
        for k in 0..len {
            if k > 0 {
                falling = falling * (x - self.modulus.from_u64(k as u64 - 1));
            }
            out.push(falling * self.inv_fact[k]);
        }
        Ok(out)
    }
}

/// `C(x,k) mod p^e` for rational `x`, as a falling factorial over `k!`.
pub fn binom(x: &ExactRational, k: u64, tables: &BinomialTables) -> Result<Residue> {
    let modulus = tables.modulus();
    if k >= modulus.p {
        return Err(Error::KTooLarge { k, p: modulus.p });
    }
    let xr = embed(x, modulus)?;
    tables.choose_residue(xr, k as usize)
}

/// True when `q` is nonzero and both its numerator and denominator are prime to `p`.
pub fn is_padic_unit(q: &ExactRational, p: u64) -> bool {
    let p = BigInt::from(p);
    !q.is_zero() && !(q.numer().abs() % &p).is_zero() && !(q.denom() % &p).is_zero()
}

/// True when `p` does not divide the denominator of `q`.
pub fn is_padic(q: &ExactRational, p: u64) -> bool {
    !(q.denom() % BigInt::from(p)).is_zero()
}
