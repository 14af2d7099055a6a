//! Burnside–Dixon character tables.
//!
//! The class-sum structure constants give commuting matrices over `F_p` whose
//! joint eigenvectors are the central characters. Each one determines the
//! character mod `p`, and eigenvalue multiplicities of `ρ(g)` recover the exact
//! values in `Q(ζ_e)` through a discrete Fourier transform over `⟨g⟩`.

use std::cmp::Ordering;
use std::sync::Arc;

use super::{Character, CharacterTable, Classes};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::{inv_mod, is_prime, nullspace_mod_p, pow_mod, root_of_unity_mod};
use crate::scalars::{int, Cyc};

/// Smallest prime `p ≡ 1 (mod exponent)` with `p > 2·√|G|`.
pub fn dixon_prime(order: usize, exponent: usize) -> u64 {
    let e = exponent as u64;
    let mut p = e + 1;
    loop {
        if is_prime(p) && p * p > 4 * order as u64 {
            return p;
        }
        p += e;
    }
}

pub fn character_table(group: Arc<FiniteGroup>) -> Result<CharacterTable> {
    let p = dixon_prime(group.order(), group.exponent());
    character_table_with_prime(group, p)
}

/// Dixon's method at a caller-chosen prime. `p` must be `≡ 1 mod exp(G)` and exceed `2·√|G|`.
pub fn character_table_with_prime(group: Arc<FiniteGroup>, p: u64) -> Result<CharacterTable> {
    let n = group.order() as u64;
    let exponent = group.exponent();
    if !is_prime(p) || !(p - 1).is_multiple_of(exponent as u64) || p * p <= 4 * n {
        return Err(Error::InvalidParameter(format!("prime {p} unsuitable for Dixon's method")));
    }
    let classes = Arc::new(Classes::new(group));
    let k = classes.len();
    let structure = class_matrices(&classes, p);

    // joint eigenspaces of all class matrices
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect()];
    for mat in structure.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
            } else {
                next.extend(split_space(mat, &space, p));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) || spaces.len() != k {
        return Err(Error::InvalidCharacter("class matrices failed to separate characters".into()));
    }

    let z = root_of_unity_mod(exponent as u64, p);
    let mut rows = Vec::with_capacity(k);
    for space in spaces {
        let w = &space[0];
        let lead = inv_mod(w[0], p);
        let omega: Vec<u64> = w.iter().map(|x| x * lead % p).collect();
        rows.push(lift_character(&classes, &omega, p, z)?);
    }
    rows.sort_by(|a, b| row_order(&classes, a, b));
    let table = CharacterTable::from_rows(Arc::clone(&classes), rows);
    table.verify()?;
    Ok(table)
}

fn row_order(classes: &Arc<Classes>, a: &Character, b: &Character) -> Ordering {
    let triv = Character::trivial(Arc::clone(classes));
    (a != &triv)
        .cmp(&(b != &triv))
        .then(a.dim().cmp(&b.dim()))
        .then_with(|| b.cmp_values(a))
}

/// `mats[j][i][l] = #{x ∈ C_j : x⁻¹ z_l ∈ C_i}`, the structure constants of class sums, mod `p`.
fn class_matrices(classes: &Classes, p: u64) -> Vec<Vec<Vec<u64>>> {
    let g = classes.group();
    let k = classes.len();
    (0..k)
        .map(|j| {
            let mut m = vec![vec![0u64; k]; k];
            for l in 0..k {
                let zl = classes.representative(l);
                for &x in classes.members(j) {
                    let y = g.mul(g.inv(x), zl);
                    m[classes.class_of(y)][l] += 1;
                }
            }
            for row in m.iter_mut() {
                for x in row.iter_mut() {
                    *x %= p;
                }
            }
            m
        })
        .collect()
}

/// Splits an invariant subspace (given by basis vectors) into eigenspaces of `mat`.
fn split_space(mat: &[Vec<u64>], basis: &[Vec<u64>], p: u64) -> Vec<Vec<Vec<u64>>> {
    let k = mat.len();
    let s = basis.len();
    // image[i][c] = (mat · basis_c)_i
    let image: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            (0..s)
                .map(|c| (0..k).fold(0u64, |acc, l| (acc + mat[i][l] * basis[c][l]) % p))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut found = 0;
    for lambda in 0..p {
        // (mat - λ)·B·c = 0
        let m: Vec<Vec<u64>> = (0..k)
            .map(|i| {
                (0..s)
                    .map(|c| (image[i][c] + p - lambda * basis[c][i] % p) % p)
                    .collect()
            })
            .collect();
        let ns = nullspace_mod_p(&m, s, p);
        if ns.is_empty() {
            continue;
        }
        found += ns.len();
        let vecs = ns
            .iter()
            .map(|c| {
                (0..k)
                    .map(|i| (0..s).fold(0u64, |acc, j| (acc + c[j] * basis[j][i]) % p))
                    .collect()
            })
            .collect();
        out.push(vecs);
        if found == s {
            break;
        }
    }
    out
}

fn lift_character(classes: &Arc<Classes>, omega: &[u64], p: u64, z: u64) -> Result<Character> {
    let k = classes.len();
    let order = classes.group().order() as u64;
    let e = classes.exponent();
    // Σ_j ω_j ω_{j*} / |C_j| = |G| / χ(1)²
    let s = (0..k).fold(0u64, |acc, j| {
        let term = omega[j] * omega[classes.inverse_class(j)] % p * inv_mod(classes.size(j) as u64 % p, p) % p;
        (acc + term) % p
    });
    if s == 0 {
        return Err(Error::InvalidCharacter("degenerate central character".into()));
    }
    let deg_sq = order % p * inv_mod(s, p) % p;
    let degree = (1..=order)
        .take_while(|d| d * d <= order)
        .find(|d| d * d % p == deg_sq)
        .ok_or_else(|| Error::InvalidCharacter("no integral degree".into()))?;
    let theta: Vec<u64> = (0..k)
        .map(|j| omega[j] * (degree % p) % p * inv_mod(classes.size(j) as u64 % p, p) % p)
        .collect();

    let inv_e = inv_mod(e as u64 % p, p);
    let mut values = Vec::with_capacity(k);
    for c in 0..k {
        let mut raw = vec![int(0); e];
        let mut total = 0u64;
        for (t, slot) in raw.iter_mut().enumerate() {
            // multiplicity of eigenvalue ζ^t of ρ(g)
            let mut acc = 0u64;
            for l in 0..e {
                let exp = ((e - (t * l) % e) % e) as u64;
                acc = (acc + theta[classes.power_class(c, l as i64)] * pow_mod(z, exp, p)) % p;
            }
            let mult = acc * inv_e % p;
            if mult > degree {
                return Err(Error::InvalidCharacter("eigenvalue multiplicity exceeds degree".into()));
            }
            total += mult;
            *slot = int(mult as i64);
        }
        if total != degree {
            return Err(Error::InvalidCharacter("eigenvalue multiplicities do not sum to degree".into()));
        }
        values.push(Cyc::reduce(raw)?);
    }
    Character::new(Arc::clone(classes), values)
}
