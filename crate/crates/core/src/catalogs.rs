//! Ready-made collections: projective spaces, quadrics, Grassmannians, del Pezzo
//! surfaces of degree at least 5, and a point.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{CentralExt, Perm};
use crate::kmodel::{ExcCollection, ExcObject, HomChars, KClass, LatticeMap, PicLattice};
use crate::reps::{weight_of, Character, Classes, Weight};
use crate::scalars::Cyc;

/// Stable catalog identifiers.
pub const CATALOG_IDS: [&str; 7] = [
    "projective",
    "quadric",
    "grassmannian",
    "delpezzo:EOOO",
    "delpezzo:kn3",
    "delpezzo:kn4",
    "point",
];

fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Beilinson's collection `O, O(1), …, O(n-1)` on `P^{n-1}` for a group acting through
/// `ext`, with `v_char` the weight-1 character of the underlying vector space.
///
/// `O(k)` carries weight tag `-k` and `Hom^0(O(i), O(j)) = Sym^{j-i}(V^*)`.
pub fn projective(n: usize, ext: Arc<CentralExt>, v_char: &Character) -> Result<ExcCollection> {
    if n == 0 {
        return Err(Error::InvalidParameter("projective space needs n ≥ 1".into()));
    }
    if v_char.dim() != Some(n as u64) {
        return Err(Error::InvalidParameter(format!("V must have dimension {n}")));
    }
    let d = ext.d();
    if d > 1 && weight_of(&ext, v_char)? != 1 {
        return Err(Error::InconsistentWeights("V must have weight 1".into()));
    }
    let v = v_char.clone().with_weight(Some(Weight::new(1, d)));
    let dual = v.dual();
    let objects = (0..n)
        .map(|k| {
            let label = if k == 0 { "O".to_string() } else { format!("O({k})") };
            ExcObject::new(k, label, k).with_weight(-(k as i64))
        })
        .collect();
    let classes = Arc::clone(v.classes());
    let mut chars = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let tag = Some(Weight::new(i as i64 - j as i64, d));
            for r in 0..n {
                let chi = if r == 0 && i <= j {
                    dual.sym_power(j - i)
                } else {
                    Character::zero(Arc::clone(&classes)).with_weight(tag)
                };
                chars.insert((i, j, r), chi);
            }
        }
    }
    ExcCollection::new(objects)?.with_homchars(HomChars { ext, chars })
}

/// Permutation character of `Ḡ` acting on `k^n` through `perms` of the base group.
pub fn permutation_character(ext: &CentralExt, perms: &[Perm]) -> Result<Character> {
    if perms.len() != ext.base().order() {
        return Err(Error::DimensionMismatch("one permutation per base element required".into()));
    }
    let classes = Arc::new(Classes::new(Arc::clone(ext.bar())));
    let m = classes.exponent();
    let values: Vec<Cyc> = (0..ext.bar().order())
        .map(|x| Cyc::from_int(m, perms[ext.proj(x)].fixed_points() as i64))
        .collect();
    Character::from_element_values(classes, &values)
}

/// `dim H^0(Q, O(k))` for a quadric `Q ⊂ P^{n-1}`.
pub fn quadric_h0(n: usize, k: i64) -> u64 {
    let n = n as i64;
    binomial(n - 1 + k, k) - binomial(n - 3 + k, k - 2)
}

/// Kapranov's collection `(E_±, O(-n+3), …, O(-1), O)` on a quadric in `P^{n-1}`.
pub fn quadric(n: usize) -> Result<ExcCollection> {
    if n < 3 {
        return Err(Error::InvalidParameter("quadric needs n ≥ 3".into()));
    }
    let mut objects = Vec::new();
    if n % 2 == 1 {
        objects.push(ExcObject::new(0, "E", 0));
    } else {
        objects.push(ExcObject::new(0, "E+", 0));
        objects.push(ExcObject::new(1, "E-", 0));
    }
    let first_line = objects.len();
    let twists: Vec<i64> = (-(n as i64) + 3..=0).collect();
    for (b, &k) in twists.iter().enumerate() {
        let label = if k == 0 { "O".to_string() } else { format!("O({k})") };
        objects.push(ExcObject::new(objects.len(), label, b + 1).with_weight(-k));
    }
    let mut dims = BTreeMap::new();
    for (a, &ka) in twists.iter().enumerate() {
        for (b, &kb) in twists.iter().enumerate() {
            for r in 0..=n - 2 {
                let d = if r == 0 && kb >= ka { quadric_h0(n, kb - ka) } else { 0 };
                dims.insert((first_line + a, first_line + b, r), d);
            }
        }
    }
    Ok(ExcCollection::new(objects)?.with_hom_dims(dims))
}

/// Partitions with at most `rows_max` parts, each at most `cols_max`, summing to `cells`,
/// in decreasing lexicographic order.
pub fn young_diagrams(rows_max: usize, cols_max: usize, cells: usize) -> Vec<Vec<usize>> {
    fn go(rows: usize, cap: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        if rows == 0 {
            return;
        }
        for part in (1..=cap.min(left)).rev() {
            prefix.push(part);
            go(rows - 1, part, left - part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(rows_max, cols_max, cells, &mut Vec::new(), &mut out);
    out
}

fn partition_label(lambda: &[usize]) -> String {
    if lambda.is_empty() {
        return "O".into();
    }
    let parts: Vec<String> = lambda.iter().map(usize::to_string).collect();
    format!("Σ^({})S", parts.join(","))
}

/// Kapranov's collection on `Gr(k, n)`: blocks by cell count from `k(n-k)` down to 0.
pub fn grassmannian(k: usize, n: usize) -> Result<ExcCollection> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!("Gr({k}, {n}) needs 1 ≤ k ≤ n-1")));
    }
    let mut objects = Vec::new();
    let top = k * (n - k);
    for (b, cells) in (0..=top).rev().enumerate() {
        for lambda in young_diagrams(k, n - k, cells) {
            objects.push(ExcObject::new(objects.len(), partition_label(&lambda), b).with_weight(cells as i64));
        }
    }
    ExcCollection::new(objects)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DelPezzoCollection {
    Eooo,
    Kn3,
    Kn4,
}

impl DelPezzoCollection {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "EOOO" => Some(Self::Eooo),
            "kn3" => Some(Self::Kn3),
            "kn4" => Some(Self::Kn4),
            _ => None,
        }
    }
}

/// Collections on `P²` blown up in `r` general points.
pub fn delpezzo(r: usize, which: DelPezzoCollection) -> Result<ExcCollection> {
    let lat = PicLattice::del_pezzo(r);
    let line = |d: Vec<i64>| KClass::line_bundle(&lat, &d);
    let l = lat.line();
    let k = lat.canonical();
    let zero = lat.zero();
    let mut objects = Vec::new();
    let mut push = |label: String, block: usize, class: KClass| {
        let id = objects.len();
        objects.push(ExcObject::new(id, label, block).with_kclass(class));
    };
    match which {
        DelPezzoCollection::Eooo => {
            if !(1..=4).contains(&r) {
                return Err(Error::InvalidParameter(format!("EOOO needs 1 ≤ r ≤ 4, got {r}")));
            }
            for i in 1..=r {
                push(format!("O_E{i}(-1)"), 0, KClass::exceptional_torsion(&lat, i));
            }
            push("O".into(), 1, line(zero.clone()));
            push("O(L)".into(), 2, line(l.clone()));
            push("O(2L)".into(), 3, line(lat.combine(&[(2, &l)])));
        }
        DelPezzoCollection::Kn3 => {
            if r != 3 {
                return Err(Error::InvalidParameter("kn3 needs r = 3".into()));
            }
            let e: Vec<Vec<i64>> = (1..=3).map(|i| lat.exceptional(i)).collect();
            push("O".into(), 0, line(zero.clone()));
            push("O(L)".into(), 1, line(l.clone()));
            push(
                "O(2L-E1-E2-E3)".into(),
                1,
                line(lat.combine(&[(2, &l), (-1, &e[0]), (-1, &e[1]), (-1, &e[2])])),
            );
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                push(
                    format!("O(2L-E{}-E{})", a + 1, b + 1),
                    2,
                    line(lat.combine(&[(2, &l), (-1, &e[a]), (-1, &e[b])])),
                );
            }
        }
        DelPezzoCollection::Kn4 => {
            if r != 4 {
                return Err(Error::InvalidParameter("kn4 needs r = 4".into()));
            }
            let minus_k_minus_l = lat.combine(&[(-1, &k), (-1, &l)]);
            let f = line(minus_k_minus_l.clone()).add(&line(l.clone()));
            push("O".into(), 0, line(zero.clone()));
            push("F".into(), 1, f);
            push("O(L)".into(), 2, line(l.clone()));
            for i in 1..=4 {
                let d = lat.combine(&[(1, &lat.exceptional(i)), (1, &minus_k_minus_l)]);
                push(format!("O(E{i}-K-L)"), 2, line(d));
            }
        }
    }
    Ok(ExcCollection::new(objects)?.with_lattice(lat))
}

/// All `C` with `C² = C·K = -1`: the `E_i`, then `L - E_i - E_j`.
pub fn minus_one_curves(r: usize) -> Result<Vec<Vec<i64>>> {
    if !(1..=4).contains(&r) {
        return Err(Error::InvalidParameter(format!("(-1)-curves tabulated for 1 ≤ r ≤ 4, got {r}")));
    }
    let lat = PicLattice::del_pezzo(r);
    let mut out: Vec<Vec<i64>> = (1..=r).map(|i| lat.exceptional(i)).collect();
    for i in 1..=r {
        for j in i + 1..=r {
            out.push(lat.combine(&[(1, &lat.line()), (-1, &lat.exceptional(i)), (-1, &lat.exceptional(j))]));
        }
    }
    Ok(out)
}

/// Involutions of `Pic` coming from automorphisms of the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PicInvolution {
    /// Exchanges the blown-up points `x_i`, `x_j` (numbered from 1).
    Swap(usize, usize),
    /// Quadratic transformation centred at `x_a, x_b, x_c`: `L ↦ 2L - E_a - E_b - E_c`,
    /// `E_a ↦ L - E_b - E_c` and cyclically; other `E_i` fixed.
    Quadratic(usize, usize, usize),
}

pub fn pic_automorphism(r: usize, spec: PicInvolution) -> Result<LatticeMap> {
    let lat = PicLattice::del_pezzo(r);
    let in_range = |i: usize| (1..=r).contains(&i);
    let mut images: Vec<Vec<i64>> = LatticeMap::identity(&lat).images().to_vec();
    match spec {
        PicInvolution::Swap(i, j) => {
            if !in_range(i) || !in_range(j) || i == j {
                return Err(Error::InvalidParameter(format!("cannot swap points {i}, {j} for r = {r}")));
            }
            images.swap(i, j);
        }
        PicInvolution::Quadratic(a, b, c) => {
            let distinct = a != b && b != c && a != c;
            if !in_range(a) || !in_range(b) || !in_range(c) || !distinct {
                return Err(Error::InvalidParameter(format!(
                    "quadratic transform needs three distinct centres among 1..={r}"
                )));
            }
            let l = lat.line();
            let e = |i: usize| lat.exceptional(i);
            images[0] = lat.combine(&[(2, &l), (-1, &e(a)), (-1, &e(b)), (-1, &e(c))]);
            images[a] = lat.combine(&[(1, &l), (-1, &e(b)), (-1, &e(c))]);
            images[b] = lat.combine(&[(1, &l), (-1, &e(a)), (-1, &e(c))]);
            images[c] = lat.combine(&[(1, &l), (-1, &e(a)), (-1, &e(b))]);
        }
    }
    let f = LatticeMap::new(images)?;
    if !f.is_isometry(&lat) || !f.fixes_canonical(&lat) {
        return Err(Error::InvalidParameter("map is not an isometry fixing K".into()));
    }
    Ok(f)
}

/// Permutation of objects induced by a lattice map on K-classes.
pub fn object_permutation(coll: &ExcCollection, f: &LatticeMap) -> Result<Perm> {
    let classes = coll.kclasses()?;
    let images = classes
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let target = k.transform(f);
            classes
                .iter()
                .position(|c| *c == target)
                .ok_or_else(|| Error::ActionInconsistent(format!("image of object {i} is not in the collection")))
        })
        .collect::<Result<Vec<_>>>()?;
    Perm::from_images(images)
}

/// One object on a point, with a weight tag.
pub fn point(weight: i64) -> Result<ExcCollection> {
    ExcCollection::new(vec![ExcObject::new(0, "pt", 0).with_weight(weight)])
}
