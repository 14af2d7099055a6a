//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! A [`Cyc`] stores `m` rational coordinates in the power basis `1, ζ_m, …, ζ_m^{m-1}`,
//! always reduced modulo the cyclotomic polynomial `Φ_m`. After reduction every
//! coordinate of index `≥ φ(m)` is zero, so two values of the same conductor are
//! equal iff their coordinate vectors are equal.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of integer polynomials; `den` must be monic and divide `num`.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &y) in den.iter().enumerate() {
                rem[i + j] -= c * y;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

fn x_pow_minus_one(k: usize) -> Vec<i64> {
    let mut v = vec![0i64; k + 1];
    v[0] = -1;
    v[k] = 1;
    v
}

/// Coefficients of `Φ_m`, lowest degree first, via the Möbius product
/// `Φ_m = Π_{d | m} (x^d - 1)^{μ(m/d)}`.
pub fn cyclotomic_polynomial(m: usize) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return Arc::clone(p);
    }
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        match mobius(m / d) {
            1 => num = poly_mul(&num, &x_pow_minus_one(d)),
            -1 => den = poly_mul(&den, &x_pow_minus_one(d)),
            _ => {}
        }
    }
    let phi = Arc::new(poly_div_exact(&num, &den));
    cache.lock().unwrap().insert(m, Arc::clone(&phi));
    phi
}

pub fn euler_phi(m: usize) -> usize {
    cyclotomic_polynomial(m).len() - 1
}

/// An element of `Q(ζ_m)` in canonical reduced form.
#[derive(Clone)]
pub struct Cyc {
    m: usize,
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
    Conj,
}

impl Cyc {
    /// Reduces a raw coordinate vector (coefficient `i` multiplies `ζ_m^i`, `m = raw.len()`).
    pub fn reduce(raw: Vec<Rational>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyVector);
        }
        let m = raw.len();
        Ok(Self::reduce_unchecked(m, raw))
    }

    fn reduce_unchecked(m: usize, mut v: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        for i in (deg..m).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut v[i], Rational::zero());
            // x^i = x^{i-deg} * x^deg and x^deg = -(phi[0] + ... + phi[deg-1] x^{deg-1})
            for (j, &pj) in phi[..deg].iter().enumerate() {
                if pj != 0 {
                    v[i - deg + j] -= &c * BigInt::from(pj);
                }
            }
        }
        Cyc { m, coeffs: v }
    }

    pub fn zero(m: usize) -> Self {
        assert!(m >= 1);
        Cyc {
            m,
            coeffs: vec![Rational::zero(); m],
        }
    }

    pub fn from_rational(m: usize, q: Rational) -> Self {
        let mut c = Self::zero(m);
        c.coeffs[0] = q;
        c
    }

    pub fn from_int(m: usize, n: i64) -> Self {
        Self::from_rational(m, int(n))
    }

    pub fn one(m: usize) -> Self {
        Self::from_int(m, 1)
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn root_of_unity(m: usize, k: i64) -> Self {
        let mut v = vec![Rational::zero(); m];
        v[k.rem_euclid(m as i64) as usize] = Rational::one();
        Self::reduce_unchecked(m, v)
    }

    pub fn conductor(&self) -> usize {
        self.m
    }

    /// Canonical coordinates; entries at index `≥ φ(m)` are zero.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Result<Rational> {
        if self.is_rational() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational)
        }
    }

    /// Re-expresses the value in `Q(ζ_n)`; `n` must be a multiple of the conductor.
    pub fn with_conductor(&self, n: usize) -> Self {
        if n == self.m {
            return self.clone();
        }
        assert!(n.is_multiple_of(self.m), "conductor {n} is not a multiple of {}", self.m);
        let step = n / self.m;
        let mut v = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[i * step] = c.clone();
            }
        }
        Self::reduce_unchecked(n, v)
    }

    fn lift_pair(a: &Cyc, b: &Cyc) -> (Cyc, Cyc) {
        if a.m == b.m {
            (a.clone(), b.clone())
        } else {
            let l = a.m.lcm(&b.m);
            (a.with_conductor(l), b.with_conductor(l))
        }
    }

    /// Complex conjugation, `ζ_m ↦ ζ_m^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.m;
        let mut v = vec![Rational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[(m - i) % m] = c.clone();
            }
        }
        Self::reduce_unchecked(m, v)
    }

    /// The Galois automorphism `ζ_m ↦ ζ_m^k`, `gcd(k, m) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        let m = self.m;
        let mut v = vec![Rational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let j = ((i as i64) * k).rem_euclid(m as i64) as usize;
                v[j] += c;
            }
        }
        Self::reduce_unchecked(m, v)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyc {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn apply(a: &Cyc, b: &Cyc, op: CycOp) -> Cyc {
        match op {
            CycOp::Add => a + b,
            CycOp::Sub => a - b,
            CycOp::Mul => a * b,
            CycOp::Conj => a.conj(),
        }
    }

    /// Multiplicative inverse, computed by solving `a·x = 1` over `Q` in the power basis.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        if self.is_rational() {
            return Ok(Self::from_rational(self.m, self.coeffs[0].recip()));
        }
        let m = self.m;
        let deg = euler_phi(m);
        // column j = a * ζ^j in canonical coordinates
        let mut mat = vec![vec![Rational::zero(); deg + 1]; deg];
        for j in 0..deg {
            let col = self * &Self::root_of_unity(m, j as i64);
            for (i, row) in mat.iter_mut().enumerate() {
                row[j] = col.coeffs[i].clone();
            }
        }
        mat[0][deg] = Rational::one();
        let sol = solve_rational_augmented(mat).ok_or(Error::NotInvertible)?;
        let mut v = vec![Rational::zero(); m];
        v[..deg].clone_from_slice(&sol);
        Ok(Cyc { m, coeffs: v })
    }

    /// Lexicographic comparison of canonical coordinates at a common conductor.
    pub fn cmp_canonical(&self, other: &Cyc) -> std::cmp::Ordering {
        let (a, b) = Self::lift_pair(self, other);
        a.coeffs.cmp(&b.coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.m);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// Gauss–Jordan on an `n × (n+1)` augmented system over `Q`. Returns `None` if singular.
pub(crate) fn solve_rational_augmented(mut mat: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = mat.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot);
        let inv = mat[col][col].recip();
        for x in mat[col].iter_mut() {
            *x *= &inv;
        }
        let prow = mat[col].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(prow.iter()) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(mat.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = Self::lift_pair(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for Cyc {}

impl<'a> Add<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn add(self, rhs: &'a Cyc) -> Cyc {
        if self.m == rhs.m {
            Cyc {
                m: self.m,
                coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
            }
        } else {
            let (a, b) = Cyc::lift_pair(self, rhs);
            &a + &b
        }
    }
}

impl<'a> Sub<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &'a Cyc) -> Cyc {
        if self.m == rhs.m {
            Cyc {
                m: self.m,
                coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
            }
        } else {
            let (a, b) = Cyc::lift_pair(self, rhs);
            &a - &b
        }
    }
}

impl<'a> Mul<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &'a Cyc) -> Cyc {
        if self.m != rhs.m {
            let (a, b) = Cyc::lift_pair(self, rhs);
            return &a * &b;
        }
        let m = self.m;
        let mut v = vec![Rational::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[(i + j) % m] += a * b;
                }
            }
        }
        Cyc::reduce_unchecked(m, v)
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $f(self, rhs: Cyc) -> Cyc {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{}", format_rational(&abs))?,
                (_, true) => write!(f, "z{}^{}", self.m, i)?,
                (_, false) => write!(f, "{}*z{}^{}", format_rational(&abs), self.m, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
