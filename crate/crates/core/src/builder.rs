//! Turns a group-invariant block collection into an equivariant one.
//!
//! Each orbit of a block contributes `Ind_H^G(E ⊗ V)` for its representative `E` with
//! stabilizer `H`, where `V` runs over the irreducible representations of the twisted
//! stabilizer whose weight cancels the weight tag of `E`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::cocycles::Cocycle2;
use crate::error::{Error, Result};
use crate::groups::{CentralExt, FiniteGroup, Subgroup};
use crate::kmodel::{act, ActReport, ExcCollection, GroupAction};
use crate::reps::{invariant_dim, ExtensionData, WeightedIrrep};

/// The twisting data attached to a source block.
#[derive(Clone, Debug)]
pub enum BlockTwist {
    /// Untwisted: ordinary representations of the stabilizer.
    Trivial,
    /// A cocycle on the stabilizer of the representative, in the subgroup's local numbering.
    Cocycle(Cocycle2),
    /// A cocycle on the whole group, restricted to each stabilizer.
    Global(Cocycle2),
    /// A central extension of the whole group; restricted when the stabilizer is proper.
    Extension(Arc<CentralExt>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Every block is fixed objectwise and untwisted.
    Equivariant,
    /// Every object is invariant but some block is twisted.
    InvariantTwisted,
    /// Some block is a nontrivial orbit.
    OrbitInduced,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Equivariant => "equivariant",
            Provenance::InvariantTwisted => "invariant-twisted",
            Provenance::OrbitInduced => "orbit-induced",
        })
    }
}

#[derive(Clone, Debug)]
pub struct EqObject {
    /// Output block index.
    pub block: usize,
    pub source_block: usize,
    pub representative: usize,
    pub orbit: Vec<usize>,
    pub stabilizer: Subgroup,
    pub irrep: WeightedIrrep,
    /// Position of the irrep among the admissible irreps of this block.
    pub irrep_index: usize,
    pub label: String,
}

impl EqObject {
    pub fn is_induced(&self) -> bool {
        !self.stabilizer.is_whole()
    }
}

/// `Known(n)` or `Unknown` when the data at hand does not determine the dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomDim {
    Known(u64),
    Unknown,
}

impl fmt::Display for HomDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomDim::Known(n) => write!(f, "{n}"),
            HomDim::Unknown => f.write_str("?"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GridEntry {
    pub from: usize,
    pub to: usize,
    pub degree: usize,
    pub dim: HomDim,
}

/// Equivariant Hom grid over all ordered pairs and degrees with the pattern check.
#[derive(Clone, Debug)]
pub struct GridReport {
    pub degrees: usize,
    pub entries: Vec<GridEntry>,
    pub violations: Vec<GridEntry>,
    pub unknown: usize,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn get(&self, from: usize, to: usize, degree: usize) -> Option<HomDim> {
        self.entries
            .iter()
            .find(|e| e.from == from && e.to == to && e.degree == degree)
            .map(|e| e.dim)
    }
}

#[derive(Clone, Debug)]
pub struct EqCollection {
    blocks: Vec<Vec<EqObject>>,
    provenance: Provenance,
    act_report: ActReport,
    grid: Option<GridReport>,
}

impl EqCollection {
    pub fn blocks(&self) -> &[Vec<EqObject>] {
        &self.blocks
    }

    pub fn objects(&self) -> impl Iterator<Item = &EqObject> {
        self.blocks.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn act_report(&self) -> &ActReport {
        &self.act_report
    }

    pub fn grid(&self) -> Option<&GridReport> {
        self.grid.as_ref()
    }
}

#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    /// One twist per source block; missing entries are `Trivial`.
    pub twists: Vec<BlockTwist>,
    /// Overrides the orbit representative: any listed object becomes the representative
    /// of its orbit.
    pub representatives: Vec<usize>,
}

impl BuildOptions {
    pub fn uniform(twist: BlockTwist, blocks: usize) -> Self {
        BuildOptions {
            twists: vec![twist; blocks],
            representatives: Vec::new(),
        }
    }
}

#[derive(Default)]
struct TableCache {
    by_ext: Vec<(Arc<CentralExt>, Arc<ExtensionData>)>,
}

impl TableCache {
    fn get(&mut self, ext: &Arc<CentralExt>) -> Result<Arc<ExtensionData>> {
        if let Some((_, d)) = self.by_ext.iter().find(|(e, _)| Arc::ptr_eq(e, ext) || **e == **ext) {
            return Ok(Arc::clone(d));
        }
        let data = Arc::new(ExtensionData::new(Arc::clone(ext))?);
        self.by_ext.push((Arc::clone(ext), Arc::clone(&data)));
        Ok(data)
    }
}

fn stabilizer_extension(twist: &BlockTwist, group: &Arc<FiniteGroup>, stab: &Subgroup) -> Result<Arc<CentralExt>> {
    let local = || Arc::new(stab.as_group());
    match twist {
        BlockTwist::Trivial => {
            let h = if stab.is_whole() { Arc::clone(group) } else { local() };
            Ok(Arc::new(CentralExt::new(&Cocycle2::trivial(h, 1))?))
        }
        BlockTwist::Cocycle(c) => {
            if c.group().order() != stab.order() {
                return Err(Error::InvalidParameter(format!(
                    "cocycle is on a group of order {} but the stabilizer has order {}",
                    c.group().order(),
                    stab.order()
                )));
            }
            let h = if stab.is_whole() { Arc::clone(group) } else { local() };
            let c = Cocycle2::new(h, c.modulus(), c.rows())?;
            Ok(Arc::new(CentralExt::new(&c)?))
        }
        BlockTwist::Global(c) => {
            if stab.is_whole() {
                Ok(Arc::new(CentralExt::new(c)?))
            } else {
                Ok(Arc::new(CentralExt::new(&c.restrict(stab)?)?))
            }
        }
        BlockTwist::Extension(ext) => {
            if stab.is_whole() {
                Ok(Arc::clone(ext))
            } else {
                Ok(Arc::new(CentralExt::new(&ext.cocycle().restrict(stab)?)?))
            }
        }
    }
}

fn is_untwisted(ext: &CentralExt) -> bool {
    ext.cocycle().is_zero()
}

/// Builds the equivariant collection for an action that preserves every block.
pub fn build(coll: &ExcCollection, action: &GroupAction, options: &BuildOptions) -> Result<EqCollection> {
    let report = act(coll, action);
    if !report.homomorphism || !report.block_invariant {
        return Err(Error::ActionInconsistent(report.issues.join("; ")));
    }
    if report.kclass_preserved == Some(false) {
        return Err(Error::ActionInconsistent(report.issues.join("; ")));
    }
    let group = action.group();
    let mut cache = TableCache::default();
    let mut blocks = Vec::new();
    let mut all_invariant = true;
    let mut all_untwisted = true;
    for orbit in &report.orbits {
        let twist = options.twists.get(orbit.block).unwrap_or(&BlockTwist::Trivial);
        if matches!(twist, BlockTwist::Cocycle(_)) && report.orbits.iter().filter(|o| o.block == orbit.block).count() > 1 {
            return Err(Error::InvalidParameter(format!(
                "block {} splits into several orbits; a stabilizer cocycle is ambiguous",
                orbit.block
            )));
        }
        let rep = options
            .representatives
            .iter()
            .copied()
            .find(|r| orbit.members.contains(r))
            .unwrap_or(orbit.representative);
        let stabilizer = action.stabilizer(rep);
        let ext = stabilizer_extension(twist, group, &stabilizer)?;
        let data = cache.get(&ext)?;
        let w = match coll.object(rep).weight {
            Some(w) => w,
            None if is_untwisted(&ext) => 0,
            None => return Err(Error::WeightTagMissing(rep)),
        };
        all_invariant &= stabilizer.is_whole();
        all_untwisted &= is_untwisted(&ext);
        let label = &coll.object(rep).label;
        let block_index = blocks.len();
        let objects: Vec<EqObject> = data
            .irreps_of_weight(-w)
            .into_iter()
            .enumerate()
            .map(|(j, irrep)| {
                let body = format!("{label} ⊗ V{j}");
                let label = if stabilizer.is_whole() {
                    body
                } else {
                    format!("Ind_H^G({body}), |H| = {}", stabilizer.order())
                };
                EqObject {
                    block: block_index,
                    source_block: orbit.block,
                    representative: rep,
                    orbit: orbit.members.clone(),
                    stabilizer: stabilizer.clone(),
                    irrep,
                    irrep_index: j,
                    label,
                }
            })
            .collect();
        blocks.push(objects);
    }
    let provenance = match (all_invariant, all_untwisted) {
        (true, true) => Provenance::Equivariant,
        (true, false) => Provenance::InvariantTwisted,
        _ => Provenance::OrbitInduced,
    };
    let mut eq = EqCollection {
        blocks,
        provenance,
        act_report: report,
        grid: None,
    };
    let degrees = coll
        .homchars()
        .map(|h| h.chars.keys().map(|k| k.2 + 1).max().unwrap_or(1))
        .or_else(|| coll.hom_dims().keys().map(|k| k.2 + 1).max())
        .unwrap_or(1);
    eq.grid = Some(hom_grid(coll, &eq, degrees)?);
    Ok(eq)
}

/// Equivariant `dim Hom^r(a, b)`, or `Unknown` when the inputs do not determine it.
pub fn hom_dim(coll: &ExcCollection, a: &EqObject, b: &EqObject, r: usize) -> Result<HomDim> {
    // later source block to earlier one: zero by semiorthogonality
    if a.source_block > b.source_block {
        return Ok(HomDim::Known(0));
    }
    if !a.is_induced() && !b.is_induced() {
        if let Some(hc) = coll.homchars() {
            let same_ext = |x: &WeightedIrrep| Arc::ptr_eq(&x.ext, &hc.ext) || *x.ext == *hc.ext;
            if same_ext(&a.irrep) && same_ext(&b.irrep) {
                if let Some(chi) = hc.chars.get(&(a.representative, b.representative, r)) {
                    let total = a.irrep.character.hom(&b.irrep.character)?.tensor(chi)?;
                    if let Some(w) = total.weight() {
                        if w.value != 0 {
                            return Err(Error::InconsistentWeights(format!(
                                "Hom character between objects {} and {} has weight {} mod {}",
                                a.representative, b.representative, w.value, w.modulus
                            )));
                        }
                    }
                    return Ok(HomDim::Known(invariant_dim(&total)?));
                }
                if a.representative > b.representative {
                    return Ok(HomDim::Known(0));
                }
            }
        }
        if a.stabilizer.parent().order() == 1 {
            if let Some(&d) = coll.hom_dims().get(&(a.representative, b.representative, r)) {
                return Ok(HomDim::Known(d));
            }
        }
    }
    if a.source_block == b.source_block {
        // one orbit: Hom_H(E ⊗ V, E ⊗ U) with distinct translates orthogonal
        if a.representative == b.representative {
            let same = a.irrep_index == b.irrep_index && r == 0;
            return Ok(HomDim::Known(u64::from(same)));
        }
        return Ok(HomDim::Known(0));
    }
    Ok(HomDim::Unknown)
}

/// All ordered pairs in degrees `0..degrees`, checked against `δ_pq δ_r0` within blocks
/// and zero from later blocks to earlier ones.
pub fn hom_grid(coll: &ExcCollection, eq: &EqCollection, degrees: usize) -> Result<GridReport> {
    let objects: Vec<&EqObject> = eq.objects().collect();
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    let mut unknown = 0;
    for (i, a) in objects.iter().enumerate() {
        for (j, b) in objects.iter().enumerate() {
            for r in 0..degrees {
                let dim = hom_dim(coll, a, b, r)?;
                let expected = if a.block == b.block {
                    Some(u64::from(i == j && r == 0))
                } else if a.block > b.block {
                    Some(0)
                } else {
                    None
                };
                let entry = GridEntry {
                    from: i,
                    to: j,
                    degree: r,
                    dim,
                };
                match (dim, expected) {
                    (HomDim::Unknown, _) => unknown += 1,
                    (HomDim::Known(d), Some(e)) if d != e => violations.push(entry.clone()),
                    _ => {}
                }
                entries.push(entry);
            }
        }
    }
    Ok(GridReport {
        degrees,
        entries,
        violations,
        unknown,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub per_block: Vec<usize>,
    pub total: usize,
    pub induced: Vec<bool>,
    pub provenance: Provenance,
}

pub fn rank_report(eq: &EqCollection) -> RankReport {
    let per_block: Vec<usize> = eq.blocks().iter().map(Vec::len).collect();
    RankReport {
        total: per_block.iter().sum(),
        induced: eq
            .blocks()
            .iter()
            .map(|b| b.first().is_some_and(EqObject::is_induced))
            .collect(),
        per_block,
        provenance: eq.provenance(),
    }
}

/// Dimension multiset of each output block, for comparing runs.
pub fn dimension_profile(eq: &EqCollection) -> Vec<Vec<u64>> {
    eq.blocks()
        .iter()
        .map(|b| b.iter().map(|o| o.irrep.dim()).collect())
        .collect()
}

/// Known grid dimensions keyed by (block, irrep index) pairs, independent of which
/// orbit member served as representative.
pub fn grid_by_position(eq: &EqCollection) -> HashMap<((usize, usize), (usize, usize), usize), HomDim> {
    let objects: Vec<&EqObject> = eq.objects().collect();
    let mut out = HashMap::new();
    if let Some(grid) = eq.grid() {
        for e in &grid.entries {
            let a = objects[e.from];
            let b = objects[e.to];
            out.insert(((a.block, a.irrep_index), (b.block, b.irrep_index), e.degree), e.dim);
        }
    }
    out
}
