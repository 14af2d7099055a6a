//! Block-structured exceptional collections, their numerical K-classes on
//! rational surfaces, mutations, and finite group actions on them.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{CentralExt, FiniteGroup, Perm, Subgroup};
use crate::reps::Character;

/// `Pic` of `P²` blown up in `r` points: basis `L, E_1, …, E_r`, form `diag(1, -1, …, -1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PicLattice {
    r: usize,
}

impl PicLattice {
    pub fn del_pezzo(r: usize) -> Self {
        PicLattice { r }
    }

    pub fn points(&self) -> usize {
        self.r
    }

    pub fn rank(&self) -> usize {
        self.r + 1
    }

    pub fn labels(&self) -> Vec<String> {
        std::iter::once("L".to_string())
            .chain((1..=self.r).map(|i| format!("E{i}")))
            .collect()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn line(&self) -> Vec<i64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    /// `E_i`, numbered from 1.
    pub fn exceptional(&self, i: usize) -> Vec<i64> {
        assert!(i >= 1 && i <= self.r, "E_{i} out of range");
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    /// `K = -3L + ΣE_i`.
    pub fn canonical(&self) -> Vec<i64> {
        let mut v = vec![1; self.rank()];
        v[0] = -3;
        v
    }

    pub fn dot(&self, a: &[i64], b: &[i64]) -> i64 {
        a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
    }

    /// Integer combination `Σ c_k v_k`.
    pub fn combine(&self, terms: &[(i64, &[i64])]) -> Vec<i64> {
        let mut out = self.zero();
        for (c, v) in terms {
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o += c * x;
            }
        }
        out
    }

    pub fn format_vector(&self, v: &[i64]) -> String {
        let mut s = String::new();
        for (c, name) in v.iter().zip(self.labels()) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                s.push_str(&format!("{sign}{name}"));
            } else {
                s.push_str(&format!("{sign}{mag}{name}"));
            }
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }
}

/// Numerical Chern character `(rank, c1, ch2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KClass {
    pub rank: i64,
    pub c1: Vec<i64>,
    pub ch2: Rational64,
}

impl KClass {
    pub fn new(rank: i64, c1: Vec<i64>, ch2: Rational64) -> Self {
        KClass { rank, c1, ch2 }
    }

    /// `O(D) ↦ (1, D, D²/2)`.
    pub fn line_bundle(lat: &PicLattice, d: &[i64]) -> Self {
        KClass {
            rank: 1,
            c1: d.to_vec(),
            ch2: Rational64::new(lat.dot(d, d), 2),
        }
    }

    /// `O_{E_i}(-1) ↦ (0, E_i, -1/2)`.
    pub fn exceptional_torsion(lat: &PicLattice, i: usize) -> Self {
        KClass {
            rank: 0,
            c1: lat.exceptional(i),
            ch2: Rational64::new(-1, 2),
        }
    }

    pub fn zero(lat: &PicLattice) -> Self {
        KClass {
            rank: 0,
            c1: lat.zero(),
            ch2: Rational64::zero(),
        }
    }

    pub fn add(&self, other: &KClass) -> KClass {
        self.add_scaled(other, 1)
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, other: &KClass, k: i64) -> KClass {
        KClass {
            rank: self.rank + k * other.rank,
            c1: self.c1.iter().zip(&other.c1).map(|(a, b)| a + k * b).collect(),
            ch2: self.ch2 + other.ch2 * k,
        }
    }

    pub fn neg(&self) -> KClass {
        KClass::zero_like(self).add_scaled(self, -1)
    }

    fn zero_like(k: &KClass) -> KClass {
        KClass {
            rank: 0,
            c1: vec![0; k.c1.len()],
            ch2: Rational64::zero(),
        }
    }

    /// Applies a lattice isometry to `c1`.
    pub fn transform(&self, f: &LatticeMap) -> KClass {
        KClass {
            rank: self.rank,
            c1: f.apply(&self.c1),
            ch2: self.ch2,
        }
    }

    /// Representative of `±self` with the first nonzero coordinate positive.
    pub fn sign_normalized(&self) -> KClass {
        let lead = std::iter::once(self.rank)
            .chain(self.c1.iter().copied())
            .find(|&x| x != 0)
            .map(|x| x.signum())
            .unwrap_or_else(|| if self.ch2 < Rational64::zero() { -1 } else { 1 });
        if lead < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn display(&self, lat: &PicLattice) -> String {
        format!("({}, {}, {})", self.rank, lat.format_vector(&self.c1), self.ch2)
    }
}

/// `χ(A,B) = r_A ch2_B + r_B ch2_A - c1_A·c1_B - (K/2)·(r_A c1_B - r_B c1_A) + r_A r_B`.
pub fn euler_pair(lat: &PicLattice, a: &KClass, b: &KClass) -> Result<i64> {
    if a.c1.len() != lat.rank() || b.c1.len() != lat.rank() {
        return Err(Error::DimensionMismatch("K-class and lattice ranks differ".into()));
    }
    let k = lat.canonical();
    let mixed: Vec<i64> = a.c1.iter().zip(&b.c1).map(|(x, y)| a.rank * y - b.rank * x).collect();
    let value = b.ch2 * a.rank + a.ch2 * b.rank - Rational64::from_integer(lat.dot(&a.c1, &b.c1))
        - Rational64::new(lat.dot(&k, &mixed), 2)
        + Rational64::from_integer(a.rank * b.rank);
    if !value.is_integer() {
        return Err(Error::NonIntegralEuler(format!("χ = {value}")));
    }
    Ok(value.to_integer())
}

/// An integral linear map of `Pic`, stored as the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    images: Vec<Vec<i64>>,
}

impl LatticeMap {
    pub fn new(images: Vec<Vec<i64>>) -> Result<Self> {
        let n = images.len();
        if images.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch("lattice map must be square".into()));
        }
        Ok(LatticeMap { images })
    }

    pub fn identity(lat: &PicLattice) -> Self {
        let n = lat.rank();
        LatticeMap {
            images: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
        }
    }

    pub fn images(&self) -> &[Vec<i64>] {
        &self.images
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let n = self.images.len();
        let mut out = vec![0; n];
        for (c, img) in v.iter().zip(&self.images) {
            for (o, x) in out.iter_mut().zip(img) {
                *o += c * x;
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        LatticeMap {
            images: other.images.iter().map(|v| self.apply(v)).collect(),
        }
    }

    pub fn is_isometry(&self, lat: &PicLattice) -> bool {
        let n = lat.rank();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let form = if i != j { 0 } else if i == 0 { 1 } else { -1 };
                lat.dot(&self.images[i], &self.images[j]) == form
            })
        })
    }

    pub fn fixes_canonical(&self, lat: &PicLattice) -> bool {
        self.apply(&lat.canonical()) == lat.canonical()
    }
}

/// One member of an exceptional collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcObject {
    pub id: usize,
    pub label: String,
    pub block: usize,
    /// The object is `(L, α)^w`-equivariant for this tag `w`.
    pub weight: Option<i64>,
    pub kclass: Option<KClass>,
    pub stab: Option<Subgroup>,
}

impl ExcObject {
    pub fn new(id: usize, label: impl Into<String>, block: usize) -> Self {
        ExcObject {
            id,
            label: label.into(),
            block,
            weight: None,
            kclass: None,
            stab: None,
        }
    }

    pub fn with_weight(mut self, w: i64) -> Self {
        self.weight = Some(w);
        self
    }

    pub fn with_kclass(mut self, k: KClass) -> Self {
        self.kclass = Some(k);
        self
    }
}

/// Graded Hom characters `Hom^r(E_i, E_j)` as characters of one central extension.
#[derive(Clone, Debug)]
pub struct HomChars {
    pub ext: Arc<CentralExt>,
    pub chars: BTreeMap<(usize, usize, usize), Character>,
}

/// An ordered collection split into contiguous blocks.
#[derive(Clone, Debug)]
pub struct ExcCollection {
    objects: Vec<ExcObject>,
    blocks: Vec<Vec<usize>>,
    lattice: Option<PicLattice>,
    homchars: Option<HomChars>,
    hom_dims: BTreeMap<(usize, usize, usize), u64>,
}

impl ExcCollection {
    /// Objects are given in order with their block index; blocks must be contiguous and
    /// numbered `0, 1, …` in order.
    pub fn new(objects: Vec<ExcObject>) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, o) in objects.iter().enumerate() {
            if o.id != i {
                return Err(Error::InvalidParameter(format!("object {i} has id {}", o.id)));
            }
            if o.block == blocks.len() {
                blocks.push(vec![i]);
            } else if o.block + 1 == blocks.len() {
                blocks[o.block].push(i);
            } else {
                return Err(Error::InvalidParameter(format!(
                    "object {i} breaks block contiguity (block {})",
                    o.block
                )));
            }
        }
        Ok(ExcCollection {
            objects,
            blocks,
            lattice: None,
            homchars: None,
            hom_dims: BTreeMap::new(),
        })
    }

    /// Convenience constructor from labels grouped by block.
    pub fn from_blocks(blocks: &[Vec<&str>]) -> Result<Self> {
        let mut objects = Vec::new();
        for (b, labels) in blocks.iter().enumerate() {
            for l in labels {
                objects.push(ExcObject::new(objects.len(), *l, b));
            }
        }
        Self::new(objects)
    }

    pub fn with_lattice(mut self, lat: PicLattice) -> Self {
        self.lattice = Some(lat);
        self
    }

    /// Attaches Hom characters; distinct objects of one block must have zero characters.
    pub fn with_homchars(mut self, homchars: HomChars) -> Result<Self> {
        for (&(i, j, r), chi) in &homchars.chars {
            if i >= self.len() || j >= self.len() {
                return Err(Error::InvalidParameter(format!("hom character ({i},{j},{r}) out of range")));
            }
            if i != j && self.objects[i].block == self.objects[j].block && !chi.is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "objects {i} and {j} share a block but Hom^{r} is nonzero"
                )));
            }
        }
        self.homchars = Some(homchars);
        Ok(self)
    }

    pub fn with_hom_dims(mut self, dims: BTreeMap<(usize, usize, usize), u64>) -> Self {
        self.hom_dims = dims;
        self
    }

    pub fn objects(&self) -> &[ExcObject] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &ExcObject {
        &self.objects[i]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn lattice(&self) -> Option<&PicLattice> {
        self.lattice.as_ref()
    }

    pub fn homchars(&self) -> Option<&HomChars> {
        self.homchars.as_ref()
    }

    pub fn hom_dims(&self) -> &BTreeMap<(usize, usize, usize), u64> {
        &self.hom_dims
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.objects.iter().map(|o| o.label.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.label == label)
    }

    pub fn kclasses(&self) -> Result<Vec<KClass>> {
        self.objects
            .iter()
            .map(|o| o.kclass.clone().ok_or(Error::MissingKClass(o.id)))
            .collect()
    }
}

fn lattice_of(coll: &ExcCollection) -> Result<&PicLattice> {
    coll.lattice()
        .ok_or_else(|| Error::InvalidParameter("collection has no Picard lattice".into()))
}

pub fn gram_of(lat: &PicLattice, classes: &[KClass]) -> Result<Vec<Vec<i64>>> {
    classes
        .iter()
        .map(|a| classes.iter().map(|b| euler_pair(lat, a, b)).collect())
        .collect()
}

/// `M[i][j] = χ(obj_i, obj_j)`.
pub fn gram(coll: &ExcCollection) -> Result<Vec<Vec<i64>>> {
    let lat = lattice_of(coll)?;
    gram_of(lat, &coll.kclasses()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Diagonal,
    Lower,
    Block,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub i: usize,
    pub j: usize,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalReport {
    pub gram: Vec<Vec<i64>>,
    pub violations: Vec<Violation>,
}

impl ExceptionalReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Unit diagonal, zero strictly-lower part, zero within-block off-diagonal entries.
pub fn check_gram(gram: &[Vec<i64>], block_of: &[usize]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, row) in gram.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            let kind = if i == j {
                (value != 1).then_some(ViolationKind::Diagonal)
            } else if i > j {
                (value != 0).then_some(ViolationKind::Lower)
            } else if block_of[i] == block_of[j] {
                (value != 0).then_some(ViolationKind::Block)
            } else {
                None
            };
            if let Some(kind) = kind {
                out.push(Violation { kind, i, j, value });
            }
        }
    }
    out
}

pub fn verify_exceptional_numeric(coll: &ExcCollection) -> Result<ExceptionalReport> {
    let gram = gram(coll)?;
    let block_of: Vec<usize> = coll.objects().iter().map(|o| o.block).collect();
    let violations = check_gram(&gram, &block_of);
    Ok(ExceptionalReport { gram, violations })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Mutates the adjacent pair at `(position, position + 1)`.
///
/// Left: `(A, B) ↦ (B - χ(A,B)·A, A)`. Right: `(A, B) ↦ (B, A - χ(A,B)·B)`.
pub fn mutate(lat: &PicLattice, classes: &[KClass], position: usize, side: Side) -> Result<Vec<KClass>> {
    if position + 1 >= classes.len() {
        return Err(Error::PositionOutOfRange {
            position,
            len: classes.len(),
        });
    }
    let out = mutate_unchecked(lat, classes, position, side)?;
    let singletons: Vec<usize> = (0..classes.len()).collect();
    let was_exceptional = check_gram(&gram_of(lat, classes)?, &singletons).is_empty();
    if was_exceptional && !check_gram(&gram_of(lat, &out)?, &singletons).is_empty() {
        return Err(Error::MutationBrokeExceptionality);
    }
    Ok(out)
}

fn mutate_unchecked(lat: &PicLattice, classes: &[KClass], position: usize, side: Side) -> Result<Vec<KClass>> {
    let a = &classes[position];
    let b = &classes[position + 1];
    let chi = euler_pair(lat, a, b)?;
    let (x, y) = match side {
        Side::Left => (b.add_scaled(a, -chi), a.clone()),
        Side::Right => (b.clone(), a.add_scaled(b, -chi)),
    };
    let mut out = classes.to_vec();
    out[position] = x;
    out[position + 1] = y;
    Ok(out)
}

/// A mutation word found by [`mutation_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationWord {
    pub steps: Vec<(usize, Side)>,
    pub result: Vec<KClass>,
}

/// Breadth-first search over mutation words of length `≤ max_len` from `start` to a list
/// matching `target` up to sign and up to reordering inside each target block.
pub fn mutation_search(
    lat: &PicLattice,
    start: &[KClass],
    target: &[KClass],
    target_blocks: &[Vec<usize>],
    max_len: usize,
) -> Result<Option<MutationWord>> {
    if start.len() != target.len() {
        return Err(Error::DimensionMismatch("collections have different lengths".into()));
    }
    let key = |classes: &[KClass]| -> Vec<Vec<KClass>> {
        target_blocks
            .iter()
            .map(|b| {
                let mut v: Vec<KClass> = b.iter().map(|&i| classes[i].sign_normalized()).collect();
                v.sort();
                v
            })
            .collect()
    };
    let goal = key(target);
    let mut seen: HashSet<Vec<KClass>> = HashSet::from([start.to_vec()]);
    let mut queue = VecDeque::from([(start.to_vec(), Vec::new())]);
    while let Some((classes, word)) = queue.pop_front() {
        if key(&classes) == goal {
            return Ok(Some(MutationWord {
                steps: word,
                result: classes,
            }));
        }
        if word.len() == max_len {
            continue;
        }
        for pos in 0..classes.len() - 1 {
            for side in [Side::Left, Side::Right] {
                let next = mutate_unchecked(lat, &classes, pos, side)?;
                if seen.insert(next.clone()) {
                    let mut w = word.clone();
                    w.push((pos, side));
                    queue.push_back((next, w));
                }
            }
        }
    }
    Ok(None)
}

/// A permutation action of a finite group on the objects of a collection, optionally
/// together with compatible isometries of the Picard lattice.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    perms: Vec<Perm>,
    lattice_maps: Option<Vec<LatticeMap>>,
}

impl GroupAction {
    /// Extends generator images to every element along the Cayley graph, then checks the
    /// homomorphism property on all pairs.
    pub fn from_generator_images(group: Arc<FiniteGroup>, images: Vec<Perm>) -> Result<Self> {
        let gens = group.generators().to_vec();
        if gens.len() != images.len() {
            return Err(Error::ActionInconsistent(format!(
                "{} generator images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        let degree = images.first().map_or(0, Perm::degree);
        if images.iter().any(|p| p.degree() != degree) {
            return Err(Error::ActionInconsistent("generator images have different degrees".into()));
        }
        let perms = extend_along_generators(&group, &gens, &images, Perm::identity(degree), |a, b| a.compose(b))?;
        let action = GroupAction {
            group,
            perms,
            lattice_maps: None,
        };
        if !action.is_homomorphism() {
            return Err(Error::ActionInconsistent("generator images do not define a homomorphism".into()));
        }
        Ok(action)
    }

    /// Takes one permutation per group element; the caller's data is checked, not trusted.
    pub fn from_element_perms(group: Arc<FiniteGroup>, perms: Vec<Perm>) -> Result<Self> {
        if perms.len() != group.order() {
            return Err(Error::ActionInconsistent("one permutation per element required".into()));
        }
        Ok(GroupAction {
            group,
            perms,
            lattice_maps: None,
        })
    }

    pub fn trivial(group: Arc<FiniteGroup>, degree: usize) -> Self {
        let perms = vec![Perm::identity(degree); group.order()];
        GroupAction {
            group,
            perms,
            lattice_maps: None,
        }
    }

    /// Attaches lattice isometries given on generators.
    pub fn with_lattice_maps(mut self, lat: &PicLattice, gen_maps: Vec<LatticeMap>) -> Result<Self> {
        let gens = self.group.generators().to_vec();
        if gens.len() != gen_maps.len() {
            return Err(Error::ActionInconsistent("one lattice map per generator required".into()));
        }
        let maps = extend_along_generators(&self.group, &gens, &gen_maps, LatticeMap::identity(lat), |a, b| {
            a.compose(b)
        })?;
        for (a, fa) in maps.iter().enumerate() {
            for (b, fb) in maps.iter().enumerate() {
                if maps[self.group.mul(a, b)] != fa.compose(fb) {
                    return Err(Error::ActionInconsistent("lattice maps do not define a homomorphism".into()));
                }
            }
        }
        self.lattice_maps = Some(maps);
        Ok(self)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn perm(&self, g: usize) -> &Perm {
        &self.perms[g]
    }

    pub fn degree(&self) -> usize {
        self.perms.first().map_or(0, Perm::degree)
    }

    pub fn apply(&self, g: usize, object: usize) -> usize {
        self.perms[g].apply(object)
    }

    pub fn lattice_maps(&self) -> Option<&[LatticeMap]> {
        self.lattice_maps.as_deref()
    }

    pub fn is_homomorphism(&self) -> bool {
        let g = &self.group;
        (0..g.order()).all(|a| {
            (0..g.order()).all(|b| self.perms[g.mul(a, b)] == self.perms[a].compose(&self.perms[b]))
        })
    }

    pub fn orbit(&self, object: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.apply(g, object)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    pub fn stabilizer(&self, object: usize) -> Subgroup {
        let elems = (0..self.group.order()).filter(|&g| self.apply(g, object) == object).collect();
        Subgroup::new(Arc::clone(&self.group), elems).expect("stabilizers are subgroups")
    }
}

fn extend_along_generators<T: Clone + PartialEq>(
    group: &FiniteGroup,
    gens: &[usize],
    images: &[T],
    identity: T,
    compose: impl Fn(&T, &T) -> T,
) -> Result<Vec<T>> {
    let mut out: Vec<Option<T>> = vec![None; group.order()];
    out[group.identity()] = Some(identity);
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        let px = out[x].clone().expect("visited");
        for (&s, img) in gens.iter().zip(images) {
            let y = group.mul(s, x);
            let py = compose(img, &px);
            match &out[y] {
                None => {
                    out[y] = Some(py);
                    queue.push_back(y);
                }
                Some(existing) if *existing != py => {
                    return Err(Error::ActionInconsistent(format!("element {y} receives two different images")));
                }
                Some(_) => {}
            }
        }
    }
    out.into_iter()
        .map(|x| x.ok_or_else(|| Error::ActionInconsistent("generators do not generate the group".into())))
        .collect()
}

/// One orbit inside a block, with the stabilizer of its first member.
#[derive(Clone, Debug)]
pub struct OrbitInfo {
    pub block: usize,
    pub members: Vec<usize>,
    pub representative: usize,
    pub stabilizer: Subgroup,
}

#[derive(Clone, Debug)]
pub struct ActReport {
    pub homomorphism: bool,
    pub block_invariant: bool,
    pub orbits: Vec<OrbitInfo>,
    pub transitive: Vec<bool>,
    pub orbit_stabilizer: bool,
    pub kclass_preserved: Option<bool>,
    pub issues: Vec<String>,
}

impl ActReport {
    pub fn passed(&self) -> bool {
        self.homomorphism && self.block_invariant && self.orbit_stabilizer && self.kclass_preserved != Some(false)
    }

    pub fn all_transitive(&self) -> bool {
        self.transitive.iter().all(|&t| t)
    }
}

/// Checks an action against a collection. Problems are report content, not errors.
///
/// With lattice maps the K-class of `g·E` must equal `f_g(K(E))`; without them the
/// Euler pairing must be preserved by the permutation.
pub fn act(coll: &ExcCollection, action: &GroupAction) -> ActReport {
    let mut issues = Vec::new();
    let n = coll.len();
    if action.degree() != n {
        issues.push(format!("action has degree {} but the collection has {n} objects", action.degree()));
        return ActReport {
            homomorphism: false,
            block_invariant: false,
            orbits: Vec::new(),
            transitive: Vec::new(),
            orbit_stabilizer: false,
            kclass_preserved: None,
            issues,
        };
    }
    let group = action.group();
    let homomorphism = action.is_homomorphism();
    if !homomorphism {
        issues.push("permutations do not form a homomorphism".into());
    }
    let mut block_invariant = true;
    for g in 0..group.order() {
        for i in 0..n {
            if coll.object(action.apply(g, i)).block != coll.object(i).block {
                block_invariant = false;
                issues.push(format!("element {g} moves object {i} out of its block"));
            }
        }
    }
    let mut orbits = Vec::new();
    let mut transitive = Vec::new();
    let mut orbit_stabilizer = true;
    for (b, members) in coll.blocks().iter().enumerate() {
        let mut covered = vec![false; n];
        let mut count = 0;
        for &i in members {
            if covered[i] {
                continue;
            }
            let orbit = action.orbit(i);
            for &j in &orbit {
                covered[j] = true;
            }
            let stabilizer = action.stabilizer(i);
            if orbit.len() * stabilizer.order() != group.order() {
                orbit_stabilizer = false;
                issues.push(format!("orbit–stabilizer fails for object {i}"));
            }
            count += 1;
            orbits.push(OrbitInfo {
                block: b,
                members: orbit,
                representative: i,
                stabilizer,
            });
        }
        transitive.push(count == 1);
    }
    let kclass_preserved = kclass_check(coll, action, &mut issues);
    ActReport {
        homomorphism,
        block_invariant,
        orbits,
        transitive,
        orbit_stabilizer,
        kclass_preserved,
        issues,
    }
}

fn kclass_check(coll: &ExcCollection, action: &GroupAction, issues: &mut Vec<String>) -> Option<bool> {
    let classes = coll.kclasses().ok()?;
    let lat = coll.lattice()?;
    let group = action.group();
    let mut ok = true;
    match action.lattice_maps() {
        Some(maps) => {
            for g in 0..group.order() {
                for (i, k) in classes.iter().enumerate() {
                    if classes[action.apply(g, i)] != k.transform(&maps[g]) {
                        ok = false;
                        issues.push(format!("element {g}: K-class of object {i} is not carried along"));
                    }
                }
            }
        }
        None => {
            let gram = gram_of(lat, &classes).ok()?;
            for g in 0..group.order() {
                for i in 0..classes.len() {
                    for j in 0..classes.len() {
                        if gram[action.apply(g, i)][action.apply(g, j)] != gram[i][j] {
                            ok = false;
                            issues.push(format!("element {g} changes χ({i},{j})"));
                        }
                    }
                }
            }
        }
    }
    Some(ok)
}

impl fmt::Display for ExceptionalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.gram {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        if self.passed() {
            write!(f, "exceptional: pass")
        } else {
            write!(f, "exceptional: fail ({} violations)", self.violations.len())
        }
    }
}

/// `1 + D·(D - K)/2` for `D = D2 - D1`, the line-bundle shortcut for `χ(O(D1), O(D2))`.
pub fn line_bundle_euler(lat: &PicLattice, d1: &[i64], d2: &[i64]) -> i64 {
    let d: Vec<i64> = d2.iter().zip(d1).map(|(a, b)| a - b).collect();
    let k = lat.canonical();
    let dk: Vec<i64> = d.iter().zip(&k).map(|(a, b)| a - b).collect();
    let num = lat.dot(&d, &dk);
    1 + num / 2
}

impl KClass {
    pub fn is_line_bundle(&self, lat: &PicLattice) -> bool {
        self.rank == 1 && self.ch2 == Rational64::new(lat.dot(&self.c1, &self.c1), 2)
    }
}

/// Unit matrix check without block data.
pub fn is_unipotent_upper(gram: &[Vec<i64>]) -> bool {
    gram.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, &x)| match i.cmp(&j) {
            std::cmp::Ordering::Equal => x.is_one(),
            std::cmp::Ordering::Greater => x == 0,
            std::cmp::Ordering::Less => true,
        })
    })
}
