//! The run specification read from `--spec` files.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub schema_version: u32,
    pub catalog: CatalogSpec,
    #[serde(default, skip_serializing_if = "GroupSpec::is_trivial")]
    pub group: GroupSpec,
    #[serde(default)]
    pub extension: ExtensionSpec,
    #[serde(default, skip_serializing_if = "ActionSpec::is_empty")]
    pub action: ActionSpec,
    #[serde(default)]
    pub verify: VerifySpec,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
}

/// Either permutation generators of a given degree or an explicit multiplication table.
/// Both absent means the trivial group.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
}

impl GroupSpec {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty() && self.table.is_none() && self.degree.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub d: usize,
    pub cocycle: CocycleSpec,
}

impl Default for ExtensionSpec {
    fn default() -> Self {
        ExtensionSpec {
            d: 1,
            cocycle: CocycleSpec::Named("trivial".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CocycleSpec {
    /// Only `"trivial"` is accepted.
    Named(String),
    /// `table[g][h] = α(g, h)` in the group's element numbering.
    Table(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    /// Per generator, the image as cycles of object labels. Empty means every generator
    /// acts trivially.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub images: Vec<Vec<Vec<String>>>,
    /// Per generator, `"identity"`, `"swap i j"` or `"cremona a b c"` on the Picard lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pic: Option<Vec<String>>,
    /// The weight-1 character of `V` for the projective catalog.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterSpec>,
    /// Labels of orbit representatives to use instead of the first orbit member.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub representatives: Vec<String>,
}

impl ActionSpec {
    pub fn is_empty(&self) -> bool {
        *self == ActionSpec::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterSpec {
    /// Per generator, a permutation of the coordinates `0..n` in cycle notation.
    Permutation(Vec<String>),
    /// Indices into the weight-1 irreducible characters of the extension, summed.
    Irreps(Vec<usize>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    #[serde(default)]
    pub exceptional: bool,
    #[serde(default)]
    pub action: bool,
    #[serde(default)]
    pub grid: bool,
}

impl VerifySpec {
    pub fn all() -> Self {
        VerifySpec {
            exceptional: true,
            action: true,
            grid: true,
        }
    }
}

impl RunSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: RunSpec = serde_json::from_str(text).context("malformed spec")?;
        if spec.schema_version != SCHEMA_VERSION {
            bail!(
                "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
                spec.schema_version
            );
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Default spec for `--catalog id[:key=value,...]`: trivial group, trivial extension.
    ///
    /// `delpezzo:EOOO:r=2`, `projective:n=3`, `grassmannian:k=2,n=4`, `delpezzo:kn3`.
    pub fn from_catalog_arg(arg: &str) -> Result<Self> {
        let (id, params) = if let Some(rest) = arg.strip_prefix("delpezzo:") {
            match rest.split_once(':') {
                Some((which, p)) => (format!("delpezzo:{which}"), p),
                None => (format!("delpezzo:{rest}"), ""),
            }
        } else {
            match arg.split_once(':') {
                Some((id, p)) => (id.to_string(), p),
                None => (arg.to_string(), ""),
            }
        };
        let mut catalog = CatalogSpec {
            id,
            ..CatalogSpec::default()
        };
        for kv in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| anyhow!("catalog parameter {kv:?} is not key=value"))?;
            let num = || value.trim().parse::<i64>().with_context(|| format!("parameter {key} = {value:?}"));
            let unsigned = || -> Result<usize> {
                usize::try_from(num()?).map_err(|_| anyhow!("parameter {key} must be nonnegative"))
            };
            match key.trim() {
                "n" => catalog.n = Some(unsigned()?),
                "k" => catalog.k = Some(unsigned()?),
                "r" => catalog.r = Some(unsigned()?),
                "weight" => catalog.weight = Some(num()?),
                other => bail!("unknown catalog parameter {other:?}"),
            }
        }
        Ok(RunSpec {
            schema_version: SCHEMA_VERSION,
            catalog,
            group: GroupSpec::default(),
            extension: ExtensionSpec::default(),
            action: ActionSpec::default(),
            verify: VerifySpec::default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shortcuts() {
        let s = RunSpec::from_catalog_arg("delpezzo:EOOO:r=2").unwrap();
        assert_eq!(s.catalog.id, "delpezzo:EOOO");
        assert_eq!(s.catalog.r, Some(2));
        let s = RunSpec::from_catalog_arg("grassmannian:k=2,n=4").unwrap();
        assert_eq!((s.catalog.k, s.catalog.n), (Some(2), Some(4)));
        assert_eq!(RunSpec::from_catalog_arg("delpezzo:kn3").unwrap().catalog.r, None);
        assert!(RunSpec::from_catalog_arg("projective:m=3").is_err());
        assert!(RunSpec::from_catalog_arg("projective:n=-1").is_err());
    }

    #[test]
    fn cocycle_forms_parse() {
        let t = r#"{"schema_version":1,"catalog":{"id":"point"},"extension":{"d":2,"cocycle":[[0,0],[0,1]]}}"#;
        let s = RunSpec::parse(t).unwrap();
        assert_eq!(s.extension.cocycle, CocycleSpec::Table(vec![vec![0, 0], vec![0, 1]]));
        let t = r#"{"schema_version":1,"catalog":{"id":"point"},"extension":{"d":3,"cocycle":"trivial"}}"#;
        assert_eq!(RunSpec::parse(t).unwrap().extension.d, 3);
    }

    #[test]
    fn rejects_unknown_fields_and_versions() {
        assert!(RunSpec::parse(r#"{"schema_version":1,"catalog":{"id":"point"},"colour":1}"#).is_err());
        assert!(RunSpec::parse(r#"{"schema_version":9,"catalog":{"id":"point"}}"#).is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = RunSpec::parse("{\n  \"schema_version\": 1,\n  \"catalog\": 5\n}").unwrap_err();
        assert!(format!("{err:#}").contains("line 3"), "{err:#}");
    }
}
