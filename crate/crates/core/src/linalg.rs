//! Linear algebra kernels: systems over `Z/n`, nullspaces over `F_p`, and square
//! matrices over [`Cyc`].

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::scalars::{Cyc, Rational};

/// Extended gcd on nonnegative integers: returns `(g, s, t)` with `s·a + t·b = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a.abs(), b.abs()).0
}

/// Diagonal form `P·A·Q = D` over `Z/n`, with `P` applied to an optional right-hand side.
struct SmithForm {
    diag: Vec<i64>,
    q: Vec<Vec<i64>>,
    rhs: Vec<i64>,
}

fn smith_mod(mut a: Vec<Vec<i64>>, cols: usize, mut rhs: Vec<i64>, n: i64) -> SmithForm {
    let rows = a.len();
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(n);
        }
    }
    for x in rhs.iter_mut() {
        *x = x.rem_euclid(n);
    }
    let mut q: Vec<Vec<i64>> = (0..cols)
        .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut diag = Vec::new();
    let steps = rows.min(cols);

    let row_op = |a: &mut Vec<Vec<i64>>, rhs: &mut Vec<i64>, k: usize, i: usize| {
        let x = a[k][k];
        let y = a[i][k];
        if x != 0 && y % x == 0 {
            let f = y / x;
            for c in 0..cols {
                a[i][c] = (a[i][c] - f * a[k][c]).rem_euclid(n);
            }
            rhs[i] = (rhs[i] - f * rhs[k]).rem_euclid(n);
        } else {
            let (g, s, t) = ext_gcd(x, y);
            let (u, v) = (-(y / g), x / g);
            for c in 0..cols {
                let (pk, pi) = (a[k][c], a[i][c]);
                a[k][c] = (s * pk + t * pi).rem_euclid(n);
                a[i][c] = (u * pk + v * pi).rem_euclid(n);
            }
            let (pk, pi) = (rhs[k], rhs[i]);
            rhs[k] = (s * pk + t * pi).rem_euclid(n);
            rhs[i] = (u * pk + v * pi).rem_euclid(n);
        }
    };
    let col_op = |a: &mut Vec<Vec<i64>>, q: &mut Vec<Vec<i64>>, k: usize, j: usize| {
        let x = a[k][k];
        let y = a[k][j];
        if x != 0 && y % x == 0 {
            let f = y / x;
            for r in a.iter_mut() {
                r[j] = (r[j] - f * r[k]).rem_euclid(n);
            }
            for r in q.iter_mut() {
                r[j] = (r[j] - f * r[k]).rem_euclid(n);
            }
        } else {
            let (g, s, t) = ext_gcd(x, y);
            let (u, v) = (-(y / g), x / g);
            for r in a.iter_mut().chain(q.iter_mut()) {
                let (pk, pj) = (r[k], r[j]);
                r[k] = (s * pk + t * pj).rem_euclid(n);
                r[j] = (u * pk + v * pj).rem_euclid(n);
            }
        }
    };

    for k in 0..steps {
        // smallest nonzero entry as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = a[i][j];
                if v != 0 && best.is_none_or(|(bi, bj)| v < a[bi][bj]) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(k, pi);
        rhs.swap(k, pi);
        if pj != k {
            for r in a.iter_mut().chain(q.iter_mut()) {
                r.swap(k, pj);
            }
        }
        loop {
            for i in k + 1..rows {
                if a[i][k] != 0 {
                    row_op(&mut a, &mut rhs, k, i);
                }
            }
            for j in k + 1..cols {
                if a[k][j] != 0 {
                    col_op(&mut a, &mut q, k, j);
                }
            }
            if (k + 1..rows).all(|i| a[i][k] == 0) {
                break;
            }
        }
        diag.push(a[k][k]);
    }
    SmithForm { diag, q, rhs }
}

/// Solves `A·x ≡ b (mod n)`; returns one solution or `None` when the system is inconsistent.
pub fn solve_mod(a: &[Vec<i64>], cols: usize, b: &[i64], n: i64) -> Option<Vec<i64>> {
    assert!(n >= 1);
    if n == 1 {
        return Some(vec![0; cols]);
    }
    let snf = smith_mod(a.to_vec(), cols, b.to_vec(), n);
    let mut y = vec![0i64; cols];
    for (i, &c) in snf.rhs.iter().enumerate() {
        let d = snf.diag.get(i).copied().unwrap_or(0);
        if d == 0 {
            if c != 0 {
                return None;
            }
            continue;
        }
        let g = gcd(d, n);
        if c % g != 0 {
            return None;
        }
        let m = n / g;
        let (_, inv, _) = ext_gcd((d / g).rem_euclid(m), m);
        y[i] = ((c / g) * inv).rem_euclid(m);
    }
    Some(apply_q(&snf.q, &y, n))
}

/// Generators of the solution module of `A·x ≡ 0 (mod n)`.
pub fn kernel_mod(a: &[Vec<i64>], cols: usize, n: i64) -> Vec<Vec<i64>> {
    if n == 1 {
        return Vec::new();
    }
    let snf = smith_mod(a.to_vec(), cols, vec![0; a.len()], n);
    let mut gens = Vec::new();
    for i in 0..cols {
        let d = snf.diag.get(i).copied().unwrap_or(0);
        let scale = if d == 0 { 1 } else { n / gcd(d, n) };
        if scale % n == 0 {
            continue;
        }
        let mut y = vec![0i64; cols];
        y[i] = scale;
        gens.push(apply_q(&snf.q, &y, n));
    }
    gens
}

fn apply_q(q: &[Vec<i64>], y: &[i64], n: i64) -> Vec<i64> {
    q.iter()
        .map(|row| {
            row.iter()
                .zip(y)
                .fold(0i64, |acc, (a, b)| (acc + a * b).rem_euclid(n))
        })
        .collect()
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of exact multiplicative order `order` in `F_p^*`; `order` must divide `p - 1`.
pub fn root_of_unity_mod(order: u64, p: u64) -> u64 {
    assert!((p - 1).is_multiple_of(order));
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut f = 2;
    while f * f <= m {
        if m.is_multiple_of(f) {
            factors.push(f);
            while m.is_multiple_of(f) {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    let generator = (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .unwrap_or(1);
    pow_mod(generator, (p - 1) / order, p)
}

/// Basis of the nullspace of a `rows × cols` matrix over `F_p`.
pub fn nullspace_mod_p(mat: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = mat.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[i][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Dense square matrix over a cyclotomic field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycMatrix {
    rows: Vec<Vec<Cyc>>,
}

impl CycMatrix {
    pub fn new(rows: Vec<Vec<Cyc>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix is not square".into()));
        }
        Ok(CycMatrix { rows })
    }

    pub fn from_rationals(m: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(|q| Cyc::from_rational(m, q)).collect())
                .collect(),
        )
    }

    pub fn zero(n: usize, m: usize) -> Self {
        CycMatrix {
            rows: vec![vec![Cyc::zero(m); n]; n],
        }
    }

    pub fn identity(n: usize, m: usize) -> Self {
        let mut z = Self::zero(n, m);
        for i in 0..n {
            z.rows[i][i] = Cyc::one(m);
        }
        z
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyc {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Cyc>] {
        &self.rows
    }

    pub fn scale(&self, c: &Cyc) -> Self {
        CycMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| c * x).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        CycMatrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn trace(&self) -> Cyc {
        let m = self.rows.first().map_or(1, |r| r[0].conductor());
        (0..self.dim()).fold(Cyc::zero(m), |acc, i| &acc + &self.rows[i][i])
    }

    /// Gauss–Jordan inverse over the cyclotomic field.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim();
        let m = self.rows.first().map_or(1, |r| r[0].conductor());
        let mut a = self.rows.clone();
        let mut inv = Self::identity(n, m).rows;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::NotInvertible)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let s = a[col][col].inv()?;
            for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
                *x = &*x * &s;
            }
            let (prow, pinv) = (a[col].clone(), inv[col].clone());
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for (x, y) in a[r].iter_mut().zip(&prow) {
                    *x = &*x - &(&f * y);
                }
                for (x, y) in inv[r].iter_mut().zip(&pinv) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        Ok(CycMatrix { rows: inv })
    }

    /// Row-reduced basis of the column space.
    pub fn column_space(&self) -> Vec<Vec<Cyc>> {
        let n = self.dim();
        let mut cols: Vec<Vec<Cyc>> = (0..n)
            .map(|j| (0..n).map(|i| self.rows[i][j].clone()).collect())
            .collect();
        let mut basis: Vec<Vec<Cyc>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for v in cols.iter_mut() {
            for (b, &p) in basis.iter().zip(&pivots) {
                if !v[p].is_zero() {
                    let f = v[p].clone();
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = &*x - &(&f * y);
                    }
                }
            }
            if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                let s = v[p].inv().expect("nonzero");
                let nv: Vec<Cyc> = v.iter().map(|x| x * &s).collect();
                for (b, _) in basis.iter_mut().zip(&pivots) {
                    if !b[p].is_zero() {
                        let f = b[p].clone();
                        for (x, y) in b.iter_mut().zip(&nv) {
                            *x = &*x - &(&f * y);
                        }
                    }
                }
                basis.push(nv);
                pivots.push(p);
            }
        }
        basis
    }
}

impl Mul for &CycMatrix {
    type Output = CycMatrix;
    fn mul(self, rhs: &CycMatrix) -> CycMatrix {
        let n = self.dim();
        let m = self.rows.first().map_or(1, |r| r[0].conductor());
        let mut out = CycMatrix::zero(n, m);
        for i in 0..n {
            for k in 0..n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.rows[k][j];
                    if !b.is_zero() {
                        out.rows[i][j] = &out.rows[i][j] + &(a * b);
                    }
                }
            }
        }
        out
    }
}
