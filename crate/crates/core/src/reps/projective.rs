//! Twisted representations through the central extension.

use std::sync::Arc;

use super::{character_table, weight_of, Character, CharacterTable, Weight, WeightedIrrep};
use crate::cocycles::Cocycle2;
use crate::error::{Error, Result};
use crate::groups::{CentralExt, FiniteGroup};
use crate::linalg::CycMatrix;
use crate::scalars::{int, rat, Cyc};

/// Character table of `Ḡ` with every row tagged by its weight.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    ext: Arc<CentralExt>,
    table: CharacterTable,
    weights: Vec<usize>,
}

impl ExtensionData {
    pub fn new(ext: Arc<CentralExt>) -> Result<Self> {
        let table = character_table(Arc::clone(ext.bar()))?;
        let weights = table
            .rows()
            .iter()
            .map(|r| weight_of(&ext, r))
            .collect::<Result<Vec<_>>>()?;
        let d = ext.d();
        let rows = table
            .rows()
            .iter()
            .zip(&weights)
            .map(|(r, &w)| r.clone().with_weight(Some(Weight::new(w as i64, d))))
            .collect();
        let table = CharacterTable::from_rows(Arc::clone(table.classes()), rows);
        Ok(ExtensionData { ext, table, weights })
    }

    pub fn ext(&self) -> &Arc<CentralExt> {
        &self.ext
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Irreducible characters of `Ḡ` on which the centre acts by `ζ_d^i`.
    pub fn irreps_of_weight(&self, i: i64) -> Vec<WeightedIrrep> {
        let w = i.rem_euclid(self.ext.d() as i64) as usize;
        self.table
            .rows()
            .iter()
            .zip(&self.weights)
            .filter(|(_, &wt)| wt == w)
            .map(|(r, _)| WeightedIrrep {
                ext: Arc::clone(&self.ext),
                character: r.clone(),
                weight: w,
            })
            .collect()
    }

    /// Weight-`i` component `(1/d) Σ_j ζ_d^{-ij} χ(z^j x)` of a character of `Ḡ`.
    pub fn weight_component(&self, chi: &Character, i: i64) -> Result<Character> {
        let bar = self.ext.bar();
        let classes = self.table.classes();
        let d = self.ext.d();
        let z = self.ext.center_gen();
        let m = classes.exponent();
        let per: Vec<Cyc> = (0..bar.order())
            .map(|x| {
                let mut acc = Cyc::zero(m);
                for j in 0..d {
                    let zx = bar.mul(bar.pow(z, j as i64), x);
                    let term = chi.value_at(zx) * &Cyc::root_of_unity(d, -(i * j as i64));
                    acc = &acc + &term;
                }
                acc.scale(&rat(1, d as i64)).with_conductor(m)
            })
            .collect();
        let out = Character::from_element_values(Arc::clone(classes), &per)?;
        Ok(out.with_weight(Some(Weight::new(i, d))))
    }
}

pub fn projective_irreps(cocycle: &Cocycle2, i: i64) -> Result<Vec<WeightedIrrep>> {
    let ext = Arc::new(CentralExt::new(cocycle)?);
    Ok(ExtensionData::new(ext)?.irreps_of_weight(i))
}

/// The regular `α`-representation with its irreducible decomposition.
#[derive(Clone, Debug)]
pub struct RegularProjective {
    pub character: Character,
    pub decomposition: Vec<(WeightedIrrep, u64)>,
}

/// Decomposes the weight-1 part of the regular representation of `Ḡ`, checking that every
/// weight-1 irreducible occurs with multiplicity equal to its dimension.
pub fn regular_projective_character(data: &ExtensionData) -> Result<RegularProjective> {
    let reg = Character::regular(Arc::clone(data.table().classes()));
    let d = data.ext().d() as i64;
    let character = data.weight_component(&reg, 1)?;
    let n = data.ext().base().order() as u64;
    if character.dim() != Some(n) {
        return Err(Error::InvalidCharacter("regular twisted character has wrong degree".into()));
    }
    let mut decomposition = Vec::new();
    let mut total = 0;
    for irrep in data.irreps_of_weight(1) {
        let mult = {
            let q = character.inner(&irrep.character)?;
            if !q.is_integer() {
                return Err(Error::InvalidCharacter("non-integral multiplicity".into()));
            }
            u64::try_from(q.to_integer()).map_err(|_| Error::InvalidCharacter("negative multiplicity".into()))?
        };
        if mult != irrep.dim() {
            return Err(Error::InvalidCharacter(format!(
                "multiplicity {mult} differs from dimension {}",
                irrep.dim()
            )));
        }
        total += mult * irrep.dim();
        decomposition.push((irrep, mult));
    }
    if total != n {
        return Err(Error::InvalidCharacter(format!("weight-1 dimensions square-sum to {total}, not {n} (d = {d})")));
    }
    Ok(RegularProjective {
        character,
        decomposition,
    })
}

/// `R(g) e_h = ζ_d^{α(g,h)} e_{gh}`.
pub fn regular_alpha_representation(cocycle: &Cocycle2) -> Vec<CycMatrix> {
    let g = cocycle.group();
    let n = g.order();
    let d = cocycle.modulus();
    (0..n)
        .map(|x| {
            let mut rows = vec![vec![Cyc::zero(d); n]; n];
            for h in 0..n {
                rows[g.mul(x, h)][h] = Cyc::root_of_unity(d, i64::from(cocycle.value(x, h)));
            }
            CycMatrix::new(rows).expect("square")
        })
        .collect()
}

fn check_alpha_relation(group: &FiniteGroup, cocycle: &Cocycle2, rep: &[CycMatrix]) -> Result<()> {
    let d = cocycle.modulus();
    for a in 0..group.order() {
        for b in 0..group.order() {
            let lhs = &rep[a] * &rep[b];
            let rhs = rep[group.mul(a, b)].scale(&Cyc::root_of_unity(d, i64::from(cocycle.value(a, b))));
            if lhs != rhs {
                return Err(Error::RepresentationRelation(a, b));
            }
        }
    }
    Ok(())
}

/// Averages a projector with `R`-invariant image into an `R`-equivariant projector
/// `(1/|G|) Σ_g R(g) p R(g)⁻¹` with the same image.
pub fn average_projector(cocycle: &Cocycle2, rep: &[CycMatrix], p: &CycMatrix) -> Result<CycMatrix> {
    let group = cocycle.group();
    if rep.len() != group.order() {
        return Err(Error::DimensionMismatch(format!(
            "{} matrices for a group of order {}",
            rep.len(),
            group.order()
        )));
    }
    if rep.iter().any(|r| r.dim() != p.dim()) {
        return Err(Error::DimensionMismatch("representation and projector sizes differ".into()));
    }
    check_alpha_relation(group, cocycle, rep)?;
    if &(p * p) != p {
        return Err(Error::NotInvariantProjector);
    }
    for r in rep {
        let rp = r * p;
        if (p * &rp) != rp {
            return Err(Error::NotInvariantProjector);
        }
    }
    let inverses = rep.iter().map(CycMatrix::inverse).collect::<Result<Vec<_>>>()?;
    let n = p.dim();
    let m = p.rows().first().map_or(1, |r| r[0].conductor());
    let mut acc = CycMatrix::zero(n, m);
    for (r, ri) in rep.iter().zip(&inverses) {
        acc = acc.add(&(&(r * p) * ri));
    }
    let avg = acc.scale(&Cyc::from_rational(m, int(1) / int(group.order() as i64)));
    if &avg * &avg != avg {
        return Err(Error::NotInvariantProjector);
    }
    for (r, ri) in rep.iter().zip(&inverses) {
        if (&(r * &avg) * ri) != avg {
            return Err(Error::NotInvariantProjector);
        }
    }
    Ok(avg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::tests::klein_cocycle;
    use crate::groups::tests::s3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unimodular(n: usize, m: usize, rng: &mut ChaCha8Rng) -> (CycMatrix, CycMatrix) {
        // product of elementary matrices
        let mut s = CycMatrix::identity(n, m);
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let mut e = CycMatrix::identity(n, m).rows().to_vec();
            e[i][j] = Cyc::from_int(m, rng.gen_range(-2..=2));
            s = &s * &CycMatrix::new(e).unwrap();
        }
        let inv = s.inverse().unwrap();
        (s, inv)
    }

    #[test]
    fn regular_rep_satisfies_relation() {
        let c = klein_cocycle();
        let rep = regular_alpha_representation(&c);
        assert!(check_alpha_relation(c.group(), &c, &rep).is_ok());
    }

    #[test]
    fn averaged_projector_is_equivariant() {
        let c = klein_cocycle();
        let rep = regular_alpha_representation(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (s, si) = random_unimodular(4, 2, &mut rng);
        let conj: Vec<CycMatrix> = rep.iter().map(|r| &(&s * r) * &si).collect();
        // projector onto the whole space and onto zero are trivially invariant
        let id = CycMatrix::identity(4, 2);
        assert_eq!(average_projector(&c, &conj, &id).unwrap(), id);
        let zero = CycMatrix::zero(4, 2);
        assert_eq!(average_projector(&c, &conj, &zero).unwrap(), zero);
    }

    #[test]
    fn non_invariant_projector_is_rejected() {
        let c = klein_cocycle();
        let rep = regular_alpha_representation(&c);
        let mut rows = CycMatrix::zero(4, 2).rows().to_vec();
        rows[0][0] = Cyc::one(2);
        let p = CycMatrix::new(rows).unwrap();
        assert_eq!(average_projector(&c, &rep, &p).unwrap_err(), Error::NotInvariantProjector);
    }

    #[test]
    fn broken_relation_is_reported() {
        let c = klein_cocycle();
        let mut rep = regular_alpha_representation(&c);
        rep[1] = CycMatrix::identity(4, 2);
        assert!(matches!(
            average_projector(&c, &rep, &CycMatrix::identity(4, 2)),
            Err(Error::RepresentationRelation(_, _))
        ));
    }

    #[test]
    fn regular_decomposition() {
        let ext = Arc::new(CentralExt::new(&klein_cocycle()).unwrap());
        let data = ExtensionData::new(ext).unwrap();
        let reg = regular_projective_character(&data).unwrap();
        assert_eq!(reg.decomposition.len(), 1);
        assert_eq!(reg.decomposition[0].1, 2);

        let ext = Arc::new(CentralExt::new(&Cocycle2::trivial(Arc::new(s3()), 3)).unwrap());
        let data = ExtensionData::new(ext).unwrap();
        let reg = regular_projective_character(&data).unwrap();
        let mults: Vec<u64> = reg.decomposition.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 1, 2]);
    }

    #[test]
    fn projective_irreps_of_klein() {
        let irreps = projective_irreps(&klein_cocycle(), 1).unwrap();
        assert_eq!(irreps.len(), 1);
        assert_eq!(irreps[0].dim(), 2);
        let untwisted = projective_irreps(&klein_cocycle(), 0).unwrap();
        assert_eq!(untwisted.len(), 4);
    }
}
