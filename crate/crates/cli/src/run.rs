use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use eqexc_core::builder::{build, rank_report, BuildOptions, HomDim};
use eqexc_core::catalogs::{self, DelPezzoCollection, PicInvolution};
use eqexc_core::kmodel::{act, gram, verify_exceptional_numeric, LatticeMap};
use eqexc_core::reps::ExtensionData;
use eqexc_core::{BlockTwist, CentralExt, Character, Cocycle2, Error, ExcCollection, FiniteGroup, GroupAction, Perm};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::Value;

use crate::spec::{CharacterSpec, CocycleSpec, RunSpec, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
    NotApplicable,
}

impl Verdict {
    fn from_check(requested: bool, applicable: bool, ok: bool) -> Self {
        match (requested, applicable, ok) {
            (false, _, _) => Verdict::Skipped,
            (true, false, _) => Verdict::NotApplicable,
            (true, true, true) => Verdict::Pass,
            (true, true, false) => Verdict::Fail,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
            Verdict::NotApplicable => "not applicable",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub spec: RunSpec,
    pub group: GroupInfo,
    pub extension: ExtensionInfo,
    pub collection: CollectionInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterInfo>,
    pub gram: Option<Vec<Vec<i64>>>,
    pub action: ActionInfo,
    pub equivariant: Option<EquivariantInfo>,
    pub grid: Option<GridInfo>,
    pub verdicts: Verdicts,
    pub passed: bool,
    /// Wall-clock only; excluded from golden comparisons.
    pub timing: Timing,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupInfo {
    pub order: usize,
    pub exponent: usize,
    pub generators: Vec<String>,
    /// Element numbering used by cocycle tables, for permutation groups.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionInfo {
    pub d: usize,
    pub order: usize,
    pub class_order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CollectionInfo {
    pub objects: Vec<ObjectInfo>,
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectInfo {
    pub index: usize,
    pub label: String,
    pub block: usize,
    pub weight: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kclass: Option<KClassInfo>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KClassInfo {
    pub rank: i64,
    pub c1: String,
    pub ch2: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterInfo {
    pub dim: u64,
    /// Values on the conjugacy classes of the extension, by class representative.
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionInfo {
    pub homomorphism: bool,
    pub block_invariant: bool,
    pub orbit_stabilizer: bool,
    pub kclass_preserved: Option<bool>,
    pub orbits: Vec<OrbitOut>,
    pub issues: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitOut {
    pub block: usize,
    pub members: Vec<String>,
    pub representative: String,
    pub stabilizer_order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivariantInfo {
    pub provenance: String,
    pub per_block: Vec<usize>,
    pub total: usize,
    pub objects: Vec<EqObjectOut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EqObjectOut {
    pub index: usize,
    pub block: usize,
    pub source_block: usize,
    pub label: String,
    pub representative: String,
    pub stabilizer_order: usize,
    pub irrep_dim: u64,
    pub weight: usize,
    pub induced: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridInfo {
    pub degrees: usize,
    /// `dims[r][i][j] = dim Hom^r(i, j)`, or `"?"` where not determined.
    pub dims: Vec<Vec<Vec<Value>>>,
    /// `[i, j, r]` triples breaking the block pattern.
    pub violations: Vec<[usize; 3]>,
    pub unknown: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    pub exceptional: Verdict,
    pub action: Verdict,
    pub grid: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub total_ms: f64,
}

fn ratio_string(q: &Rational64) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

struct Group {
    group: Arc<FiniteGroup>,
    elements: Option<Vec<Perm>>,
}

fn resolve_group(spec: &RunSpec) -> Result<Group> {
    let g = &spec.group;
    if let Some(table) = &g.table {
        if !g.generators.is_empty() || g.degree.is_some() {
            bail!("group: give either a table or permutation generators, not both");
        }
        let group = FiniteGroup::from_table(table.clone()).context("group table")?;
        return Ok(Group {
            group: Arc::new(group),
            elements: None,
        });
    }
    if g.generators.is_empty() {
        return Ok(Group {
            group: Arc::new(FiniteGroup::trivial()),
            elements: None,
        });
    }
    let degree = g.degree.ok_or_else(|| anyhow!("group: permutation generators need a degree"))?;
    let gens = g
        .generators
        .iter()
        .map(|s| Perm::parse_cycles(s, degree))
        .collect::<std::result::Result<Vec<_>, _>>()
        .context("group generators")?;
    let (group, elements) = FiniteGroup::from_generators(degree, &gens).context("group generators")?;
    Ok(Group {
        group: Arc::new(group),
        elements: Some(elements),
    })
}

fn resolve_cocycle(spec: &RunSpec, group: &Arc<FiniteGroup>) -> Result<Cocycle2> {
    let d = spec.extension.d;
    if d == 0 {
        bail!("extension: d must be positive");
    }
    match &spec.extension.cocycle {
        CocycleSpec::Named(name) if name == "trivial" => Ok(Cocycle2::trivial(Arc::clone(group), d)),
        CocycleSpec::Named(name) => bail!("extension: unknown cocycle {name:?} (use \"trivial\" or a table)"),
        CocycleSpec::Table(rows) => Ok(Cocycle2::new(Arc::clone(group), d, rows.clone())?),
    }
}

/// Per-element permutations from per-generator images, through the core action code.
fn extend_to_elements(group: &Arc<FiniteGroup>, images: Vec<Perm>, degree: usize) -> Result<Vec<Perm>> {
    if group.generators().is_empty() {
        return Ok(vec![Perm::identity(degree); group.order()]);
    }
    let action = GroupAction::from_generator_images(Arc::clone(group), images)?;
    Ok((0..group.order()).map(|g| action.perm(g).clone()).collect())
}

fn projective_character(spec: &RunSpec, n: usize, ext: &Arc<CentralExt>) -> Result<Character> {
    let group = ext.base();
    match &spec.action.character {
        None if group.order() == 1 => {
            Ok(catalogs::permutation_character(ext, &[Perm::identity(n)])?)
        }
        None => bail!("action: the projective catalog needs a character for a nontrivial group"),
        Some(CharacterSpec::Permutation(images)) => {
            if images.len() != group.generators().len() {
                bail!(
                    "action.character: {} permutations for {} generators",
                    images.len(),
                    group.generators().len()
                );
            }
            let perms = images
                .iter()
                .map(|s| Perm::parse_cycles(s, n))
                .collect::<std::result::Result<Vec<_>, _>>()
                .context("action.character")?;
            let all = extend_to_elements(group, perms, n).context("action.character")?;
            Ok(catalogs::permutation_character(ext, &all)?)
        }
        Some(CharacterSpec::Irreps(indices)) => {
            let irreps = ExtensionData::new(Arc::clone(ext))?.irreps_of_weight(1);
            let mut acc: Option<Character> = None;
            for &i in indices {
                let chi = irreps
                    .get(i)
                    .ok_or_else(|| anyhow!("action.character: there are only {} weight-1 irreps", irreps.len()))?
                    .character
                    .clone();
                acc = Some(match acc {
                    None => chi,
                    Some(a) => a.add(&chi)?,
                });
            }
            acc.ok_or_else(|| anyhow!("action.character: empty irrep list"))
        }
    }
}

fn resolve_catalog(spec: &RunSpec, ext: &Arc<CentralExt>) -> Result<(ExcCollection, Option<Character>)> {
    let c = &spec.catalog;
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| anyhow!("catalog {}: missing parameter {name}", c.id));
    let coll = match c.id.as_str() {
        "projective" => {
            let n = need(c.n, "n")?;
            let v = projective_character(spec, n, ext)?;
            return Ok((catalogs::projective(n, Arc::clone(ext), &v)?, Some(v)));
        }
        "quadric" => catalogs::quadric(need(c.n, "n")?)?,
        "grassmannian" => catalogs::grassmannian(need(c.k, "k")?, need(c.n, "n")?)?,
        "point" => catalogs::point(c.weight.unwrap_or(0))?,
        id => match id.strip_prefix("delpezzo:").and_then(DelPezzoCollection::parse) {
            Some(which) => {
                let r = match (which, c.r) {
                    (_, Some(r)) => r,
                    (DelPezzoCollection::Kn3, None) => 3,
                    (DelPezzoCollection::Kn4, None) => 4,
                    (DelPezzoCollection::Eooo, None) => bail!("catalog {id}: missing parameter r"),
                };
                catalogs::delpezzo(r, which)?
            }
            None => bail!(
                "unknown catalog {id:?}; known: {}",
                catalogs::CATALOG_IDS.join(", ")
            ),
        },
    };
    Ok((coll, None))
}

fn parse_pic(s: &str, r: usize, lat: &eqexc_core::PicLattice) -> Result<LatticeMap> {
    let words: Vec<&str> = s.split_whitespace().collect();
    let nums = |xs: &[&str]| -> Result<Vec<usize>> {
        xs.iter()
            .map(|x| x.parse::<usize>().with_context(|| format!("action.pic {s:?}")))
            .collect()
    };
    let spec = match words.as_slice() {
        ["identity"] => return Ok(LatticeMap::identity(lat)),
        ["swap", rest @ ..] if rest.len() == 2 => {
            let v = nums(rest)?;
            PicInvolution::Swap(v[0], v[1])
        }
        ["cremona", rest @ ..] if rest.len() == 3 => {
            let v = nums(rest)?;
            PicInvolution::Quadratic(v[0], v[1], v[2])
        }
        _ => bail!("action.pic: {s:?} is not \"identity\", \"swap i j\" or \"cremona a b c\""),
    };
    Ok(catalogs::pic_automorphism(r, spec)?)
}

fn resolve_action(spec: &RunSpec, coll: &ExcCollection, group: &Arc<FiniteGroup>) -> Result<GroupAction> {
    let n = coll.len();
    let ngens = group.generators().len();
    let a = &spec.action;
    let images = if a.images.is_empty() {
        vec![Perm::identity(n); ngens]
    } else {
        if a.images.len() != ngens {
            bail!("action: {} generator images for {ngens} generators", a.images.len());
        }
        a.images
            .iter()
            .enumerate()
            .map(|(gi, cycles)| {
                let mut img: Vec<usize> = (0..n).collect();
                let mut seen = vec![false; n];
                for cycle in cycles {
                    let idx = cycle
                        .iter()
                        .map(|l| coll.index_of(l).ok_or_else(|| anyhow!("action: unknown object label {l:?}")))
                        .collect::<Result<Vec<_>>>()?;
                    for (i, &x) in idx.iter().enumerate() {
                        if std::mem::replace(&mut seen[x], true) {
                            bail!("action: label {:?} repeated in image of generator {gi}", cycle[i]);
                        }
                        img[x] = idx[(i + 1) % idx.len()];
                    }
                }
                Ok(Perm::from_images(img)?)
            })
            .collect::<Result<Vec<_>>>()?
    };
    let mut action = if ngens == 0 {
        GroupAction::trivial(Arc::clone(group), n)
    } else {
        match GroupAction::from_generator_images(Arc::clone(group), images.clone()) {
            Ok(a) => a,
            // a non-homomorphism is reported by the action check rather than rejected
            Err(Error::ActionInconsistent(_)) => {
                let all = (0..group.order())
                    .map(|g| word_image(group, &images, g, n))
                    .collect::<Result<Vec<_>>>()?;
                GroupAction::from_element_perms(Arc::clone(group), all)?
            }
            Err(e) => return Err(e.into()),
        }
    };
    if let Some(pic) = &a.pic {
        let lat = coll
            .lattice()
            .ok_or_else(|| anyhow!("action.pic given but catalog {} has no Picard lattice", spec.catalog.id))?;
        if pic.len() != ngens {
            bail!("action.pic: {} maps for {ngens} generators", pic.len());
        }
        let maps = pic
            .iter()
            .map(|s| parse_pic(s, lat.points(), lat))
            .collect::<Result<Vec<_>>>()?;
        if ngens > 0 {
            action = action.with_lattice_maps(lat, maps)?;
        }
    }
    Ok(action)
}

/// Image of element `g` along a shortest generator word, for actions that may fail to be
/// homomorphisms.
fn word_image(group: &Arc<FiniteGroup>, images: &[Perm], g: usize, n: usize) -> Result<Perm> {
    let gens = group.generators();
    let mut word: Vec<Option<Perm>> = vec![None; group.order()];
    word[group.identity()] = Some(Perm::identity(n));
    let mut frontier = vec![group.identity()];
    while let Some(x) = frontier.pop() {
        for (s, p) in gens.iter().zip(images) {
            let y = group.mul(*s, x);
            if word[y].is_none() {
                word[y] = Some(p.compose(word[x].as_ref().unwrap()));
                frontier.insert(0, y);
            }
        }
    }
    word[g].clone().ok_or_else(|| anyhow!("group generators do not generate element {g}"))
}

/// Runs a spec. Input problems are errors; failed checks are recorded in the report.
pub fn run(spec: &RunSpec, force_verify: bool) -> Result<RunReport> {
    let start = Instant::now();
    let verify = if force_verify { crate::spec::VerifySpec::all() } else { spec.verify };
    let Group { group, elements } = resolve_group(spec)?;
    let cocycle = resolve_cocycle(spec, &group)?;
    let ext = Arc::new(CentralExt::new(&cocycle)?);
    let (coll, v_char) = resolve_catalog(spec, &ext)?;
    let action = resolve_action(spec, &coll, &group)?;

    let labels = coll.labels();
    let lattice = coll.lattice().cloned();
    let objects = coll
        .objects()
        .iter()
        .map(|o| ObjectInfo {
            index: o.id,
            label: o.label.clone(),
            block: o.block,
            weight: o.weight,
            kclass: match (&o.kclass, &lattice) {
                (Some(k), Some(lat)) => Some(KClassInfo {
                    rank: k.rank,
                    c1: lat.format_vector(&k.c1),
                    ch2: ratio_string(&k.ch2),
                }),
                _ => None,
            },
        })
        .collect();

    let gram_matrix = if lattice.is_some() { Some(gram(&coll)?) } else { None };
    let exceptional_ok = match lattice {
        Some(_) if verify.exceptional => verify_exceptional_numeric(&coll)?.passed(),
        _ => true,
    };

    let act_report = act(&coll, &action);
    let action_info = ActionInfo {
        homomorphism: act_report.homomorphism,
        block_invariant: act_report.block_invariant,
        orbit_stabilizer: act_report.orbit_stabilizer,
        kclass_preserved: act_report.kclass_preserved,
        orbits: act_report
            .orbits
            .iter()
            .map(|o| OrbitOut {
                block: o.block,
                members: o.members.iter().map(|&m| labels[m].clone()).collect(),
                representative: labels[o.representative].clone(),
                stabilizer_order: o.stabilizer.order(),
            })
            .collect(),
        issues: act_report.issues.clone(),
    };

    let (equivariant, grid) = if act_report.passed() {
        let representatives = spec
            .action
            .representatives
            .iter()
            .map(|l| coll.index_of(l).ok_or_else(|| anyhow!("action.representatives: unknown label {l:?}")))
            .collect::<Result<Vec<_>>>()?;
        let options = BuildOptions {
            representatives,
            ..BuildOptions::uniform(BlockTwist::Extension(Arc::clone(&ext)), coll.blocks().len())
        };
        let eq = build(&coll, &action, &options)?;
        let rank = rank_report(&eq);
        let eq_objects = eq
            .objects()
            .enumerate()
            .map(|(i, o)| EqObjectOut {
                index: i,
                block: o.block,
                source_block: o.source_block,
                label: o.label.clone(),
                representative: labels[o.representative].clone(),
                stabilizer_order: o.stabilizer.order(),
                irrep_dim: o.irrep.dim(),
                weight: o.irrep.weight,
                induced: o.is_induced(),
            })
            .collect();
        let grid = eq.grid().map(|g| {
            let n = eq.len();
            let mut dims = vec![vec![vec![Value::Null; n]; n]; g.degrees];
            for e in &g.entries {
                dims[e.degree][e.from][e.to] = match e.dim {
                    HomDim::Known(d) => Value::from(d),
                    HomDim::Unknown => Value::from("?"),
                };
            }
            GridInfo {
                degrees: g.degrees,
                dims,
                violations: g.violations.iter().map(|v| [v.from, v.to, v.degree]).collect(),
                unknown: g.unknown,
            }
        });
        let info = EquivariantInfo {
            provenance: rank.provenance.to_string(),
            per_block: rank.per_block,
            total: rank.total,
            objects: eq_objects,
        };
        (Some(info), grid)
    } else {
        (None, None)
    };

    let verdicts = Verdicts {
        exceptional: Verdict::from_check(verify.exceptional, lattice.is_some(), exceptional_ok),
        // building needs a consistent action, so a broken one fails even when unrequested
        action: if act_report.passed() {
            Verdict::from_check(verify.action, true, true)
        } else {
            Verdict::Fail
        },
        grid: Verdict::from_check(
            verify.grid,
            grid.is_some(),
            grid.as_ref().is_some_and(|g| g.violations.is_empty()),
        ),
    };
    let passed = [verdicts.exceptional, verdicts.action, verdicts.grid]
        .iter()
        .all(|v| *v != Verdict::Fail);

    let character = v_char.map(|v| {
        let classes = v.classes();
        CharacterInfo {
            dim: v.dim().unwrap_or(0),
            values: (0..classes.len()).map(|c| v.values()[c].to_string()).collect(),
        }
    });

    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        spec: spec.clone(),
        group: GroupInfo {
            order: group.order(),
            exponent: group.exponent(),
            generators: match &elements {
                Some(el) => group.generators().iter().map(|&g| el[g].to_string()).collect(),
                None => group.generators().iter().map(|g| g.to_string()).collect(),
            },
            elements: elements.map(|el| el.iter().map(ToString::to_string).collect()),
        },
        extension: ExtensionInfo {
            d: ext.d(),
            order: ext.bar().order(),
            class_order: cocycle.class_order(),
        },
        collection: CollectionInfo {
            objects,
            blocks: coll.blocks().to_vec(),
        },
        character,
        gram: gram_matrix,
        action: action_info,
        equivariant,
        grid,
        verdicts,
        passed,
        timing: Timing {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
