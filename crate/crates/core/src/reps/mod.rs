//! Characters of finite groups and of central extensions.
//!
//! Twisted (projective) representations are never materialised as modules: an
//! `α^i`-representation of `G` is a weight-`i` representation of the extension
//! `Ḡ` built from `α`, so everything reduces to ordinary characters of `Ḡ`.

mod dixon;
mod projective;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

pub use dixon::{character_table, character_table_with_prime, dixon_prime};
pub use projective::{
    average_projector, projective_irreps, regular_alpha_representation, regular_projective_character,
    ExtensionData, RegularProjective,
};

use crate::error::{Error, Result};
use crate::groups::{CentralExt, FiniteGroup};
use crate::scalars::{int, Cyc, Rational};

/// Conjugacy-class data needed to evaluate and combine class functions.
#[derive(Clone, PartialEq, Eq)]
pub struct Classes {
    group: Arc<FiniteGroup>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    exponent: usize,
    /// `power_map[c][k]` is the class of `x^k` for `x` in class `c`, `0 ≤ k < exponent`.
    power_map: Vec<Vec<usize>>,
}

impl fmt::Debug for Classes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Classes(order {}, {} classes)", self.group.order(), self.classes.len())
    }
}

impl Classes {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        let classes = group.conjugacy_classes();
        let mut class_of = vec![0; group.order()];
        for (c, members) in classes.iter().enumerate() {
            for &x in members {
                class_of[x] = c;
            }
        }
        let exponent = group.exponent();
        let power_map = classes
            .iter()
            .map(|members| {
                let x = members[0];
                (0..exponent).map(|k| class_of[group.pow(x, k as i64)]).collect()
            })
            .collect();
        Classes {
            group,
            classes,
            class_of,
            exponent,
            power_map,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn members(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    pub fn size(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn power_class(&self, c: usize, k: i64) -> usize {
        self.power_map[c][k.rem_euclid(self.exponent as i64) as usize]
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.power_class(c, -1)
    }
}

/// A weight tag `i mod d`: the central `μ_d` acts by `ζ_d^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub value: i64,
    pub modulus: usize,
}

impl Weight {
    pub fn new(value: i64, modulus: usize) -> Self {
        Weight {
            value: value.rem_euclid(modulus as i64),
            modulus,
        }
    }

    fn combine(a: Option<Weight>, b: Option<Weight>, sign_a: i64, sign_b: i64) -> Result<Option<Weight>> {
        match (a, b) {
            (Some(x), Some(y)) if x.modulus != y.modulus => Err(Error::InconsistentWeights(format!(
                "weights mod {} and mod {}",
                x.modulus, y.modulus
            ))),
            (Some(x), Some(y)) => Ok(Some(Weight::new(sign_a * x.value + sign_b * y.value, x.modulus))),
            _ => Ok(None),
        }
    }
}

/// A class function with values in a cyclotomic field.
#[derive(Clone, PartialEq, Eq)]
pub struct Character {
    classes: Arc<Classes>,
    values: Vec<Cyc>,
    weight: Option<Weight>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character{:?}", self.values)?;
        if let Some(w) = self.weight {
            write!(f, " weight {} mod {}", w.value, w.modulus)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharOp {
    Tensor,
    Dual,
    Hom,
}

impl Character {
    pub fn new(classes: Arc<Classes>, values: Vec<Cyc>) -> Result<Self> {
        if values.len() != classes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} classes",
                values.len(),
                classes.len()
            )));
        }
        Ok(Character {
            classes,
            values,
            weight: None,
        })
    }

    /// Builds a class function from one value per group element, checking constancy on classes.
    pub fn from_element_values(classes: Arc<Classes>, per_element: &[Cyc]) -> Result<Self> {
        if per_element.len() != classes.group().order() {
            return Err(Error::DimensionMismatch("one value per element required".into()));
        }
        let mut values = Vec::with_capacity(classes.len());
        for c in 0..classes.len() {
            let v = &per_element[classes.representative(c)];
            if classes.members(c).iter().any(|&x| &per_element[x] != v) {
                return Err(Error::InvalidCharacter(format!("values not constant on class {c}")));
            }
            values.push(v.clone());
        }
        Self::new(classes, values)
    }

    pub fn trivial(classes: Arc<Classes>) -> Self {
        let m = classes.exponent();
        let values = vec![Cyc::one(m); classes.len()];
        Character {
            classes,
            values,
            weight: None,
        }
    }

    pub fn zero(classes: Arc<Classes>) -> Self {
        let m = classes.exponent();
        let values = vec![Cyc::zero(m); classes.len()];
        Character {
            classes,
            values,
            weight: None,
        }
    }

    /// The character of the regular representation.
    pub fn regular(classes: Arc<Classes>) -> Self {
        let m = classes.exponent();
        let n = classes.group().order() as i64;
        let values = (0..classes.len())
            .map(|c| if c == 0 { Cyc::from_int(m, n) } else { Cyc::zero(m) })
            .collect();
        Character {
            classes,
            values,
            weight: None,
        }
    }

    pub fn with_weight(mut self, weight: Option<Weight>) -> Self {
        self.weight = weight;
        self
    }

    pub fn weight(&self) -> Option<Weight> {
        self.weight
    }

    pub fn classes(&self) -> &Arc<Classes> {
        &self.classes
    }

    pub fn values(&self) -> &[Cyc] {
        &self.values
    }

    pub fn value_at(&self, g: usize) -> &Cyc {
        &self.values[self.classes.class_of(g)]
    }

    /// The value at the identity.
    pub fn degree(&self) -> &Cyc {
        &self.values[0]
    }

    /// The degree as a positive integer, if it is one.
    pub fn dim(&self) -> Option<u64> {
        let q = self.values[0].as_rational().ok()?;
        if q.is_integer() && q.is_positive() {
            q.to_integer().to_u64()
        } else {
            None
        }
    }

    fn same_group(&self, other: &Character) -> Result<()> {
        if Arc::ptr_eq(&self.classes, &other.classes) || self.classes == other.classes {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Cyc::is_zero)
    }

    pub fn dual(&self) -> Character {
        Character {
            classes: Arc::clone(&self.classes),
            values: self.values.iter().map(Cyc::conj).collect(),
            weight: self.weight.map(|w| Weight::new(-w.value, w.modulus)),
        }
    }

    pub fn tensor(&self, other: &Character) -> Result<Character> {
        self.same_group(other)?;
        Ok(Character {
            classes: Arc::clone(&self.classes),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
            weight: Weight::combine(self.weight, other.weight, 1, 1)?,
        })
    }

    /// Character of `Hom(self, other) = self^* ⊗ other`.
    pub fn hom(&self, other: &Character) -> Result<Character> {
        self.dual().tensor(other)
    }

    pub fn combine(&self, other: &Character, op: CharOp) -> Result<Character> {
        match op {
            CharOp::Tensor => self.tensor(other),
            CharOp::Dual => Ok(self.dual()),
            CharOp::Hom => self.hom(other),
        }
    }

    pub fn add(&self, other: &Character) -> Result<Character> {
        self.same_group(other)?;
        if self.weight != other.weight && self.weight.is_some() && other.weight.is_some() {
            return Err(Error::InconsistentWeights("sum of characters with different weights".into()));
        }
        Ok(Character {
            classes: Arc::clone(&self.classes),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            weight: self.weight.or(other.weight),
        })
    }

    pub fn scale(&self, k: i64) -> Character {
        let q = int(k);
        Character {
            classes: Arc::clone(&self.classes),
            values: self.values.iter().map(|v| v.scale(&q)).collect(),
            weight: self.weight,
        }
    }

    /// `⟨a, b⟩ = (1/|G|) Σ_g a(g) conj(b(g))`, which is rational for characters.
    pub fn inner(&self, other: &Character) -> Result<Rational> {
        self.same_group(other)?;
        let m = self.classes.exponent();
        let mut acc = Cyc::zero(m);
        for c in 0..self.classes.len() {
            let term = &self.values[c] * &other.values[c].conj();
            acc = &acc + &term.scale(&int(self.classes.size(c) as i64));
        }
        let q = acc.as_rational()?;
        Ok(q / int(self.classes.group().order() as i64))
    }

    /// Character of `Sym^k` via the Newton recurrence `k·h_k = Σ_{i=1}^k p_i h_{k-i}`.
    pub fn sym_power(&self, k: usize) -> Character {
        let m = self.classes.exponent();
        let ncls = self.classes.len();
        let power_sum = |i: usize| -> Vec<Cyc> {
            (0..ncls)
                .map(|c| self.values[self.classes.power_class(c, i as i64)].clone())
                .collect()
        };
        let mut h: Vec<Vec<Cyc>> = vec![vec![Cyc::one(m); ncls]];
        for n in 1..=k {
            let mut acc = vec![Cyc::zero(m); ncls];
            for i in 1..=n {
                let p = power_sum(i);
                for c in 0..ncls {
                    acc[c] = &acc[c] + &(&p[c] * &h[n - i][c]);
                }
            }
            let inv = Rational::one() / int(n as i64);
            h.push(acc.into_iter().map(|x| x.scale(&inv)).collect());
        }
        Character {
            classes: Arc::clone(&self.classes),
            values: h.pop().unwrap(),
            weight: self.weight.map(|w| Weight::new(w.value * k as i64, w.modulus)),
        }
    }

    /// Canonical lexicographic comparison of the value vectors.
    pub fn cmp_values(&self, other: &Character) -> Ordering {
        for (a, b) in self.values.iter().zip(&other.values) {
            match a.cmp_canonical(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

/// `⟨χ, 1⟩` as an exact nonnegative integer.
pub fn invariant_dim(chi: &Character) -> Result<u64> {
    let triv = Character::trivial(Arc::clone(chi.classes()));
    let q = chi.inner(&triv)?;
    if !q.is_integer() || q.is_negative() {
        return Err(Error::InvalidCharacter(format!(
            "invariant dimension {} is not a nonnegative integer",
            crate::scalars::format_rational(&q)
        )));
    }
    Ok(q.to_integer().to_u64().unwrap_or(0))
}

pub fn char_combine(a: &Character, b: &Character, op: CharOp) -> Result<Character> {
    a.combine(b, op)
}

/// Irreducible characters, trivial character first, then by degree.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    classes: Arc<Classes>,
    rows: Vec<Character>,
}

impl CharacterTable {
    pub(crate) fn from_rows(classes: Arc<Classes>, rows: Vec<Character>) -> Self {
        CharacterTable { classes, rows }
    }

    pub fn classes(&self) -> &Arc<Classes> {
        &self.classes
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.classes.group()
    }

    pub fn rows(&self) -> &[Character] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dims(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.dim().unwrap_or(0)).collect()
    }

    /// Exact row orthogonality and `Σ χ(1)² = |G|`.
    pub fn verify(&self) -> Result<()> {
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in self.rows.iter().enumerate().skip(i) {
                let ip = a.inner(b)?;
                let expected = if i == j { Rational::one() } else { Rational::zero() };
                if ip != expected {
                    return Err(Error::InvalidCharacter(format!("rows {i} and {j} are not orthonormal")));
                }
            }
        }
        let total: u64 = self.dims().iter().map(|d| d * d).sum();
        if total != self.classes.group().order() as u64 {
            return Err(Error::InvalidCharacter("sum of squared degrees differs from |G|".into()));
        }
        Ok(())
    }

    /// Multiplicities of the irreducibles in a character.
    pub fn decompose(&self, chi: &Character) -> Result<Vec<u64>> {
        self.rows
            .iter()
            .map(|r| {
                let q = chi.inner(r)?;
                if q.is_integer() && !q.is_negative() {
                    Ok(q.to_integer().to_u64().unwrap_or(0))
                } else {
                    Err(Error::InvalidCharacter("non-integral multiplicity".into()))
                }
            })
            .collect()
    }
}

/// A character of `Ḡ` tagged with the weight by which the central `μ_d` acts.
#[derive(Clone, Debug)]
pub struct WeightedIrrep {
    pub ext: Arc<CentralExt>,
    pub character: Character,
    pub weight: usize,
}

impl WeightedIrrep {
    pub fn dim(&self) -> u64 {
        self.character.dim().unwrap_or(0)
    }
}

/// The unique `i` with `χ(z) = ζ_d^i χ(1)` for the central generator `z`.
pub fn weight_of(ext: &CentralExt, chi: &Character) -> Result<usize> {
    if chi.classes().group() != ext.bar() && **chi.classes().group() != **ext.bar() {
        return Err(Error::GroupMismatch);
    }
    let at_center = chi.value_at(ext.center_gen());
    let deg = chi.degree();
    (0..ext.d())
        .find(|&i| &(deg * &Cyc::root_of_unity(ext.d(), i as i64)) == at_center)
        .ok_or(Error::NoPureWeight)
}
