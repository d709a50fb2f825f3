//! Experiment configuration: a versioned TOML document.
//!
//! ```toml
//! schema_version = 1
//! seed = 7
//! out = "reports"
//!
//! [structure]
//! size = 3
//! [[structure.relations]]
//! name = "R"
//! arity = 2
//! tuples = [[0, 0], [0, 1], [1, 1]]
//!
//! [[array.labels]]
//! name = "w"
//! domain = "omega"
//! oracle = "factorial-tower"
//! [[array.labels]]
//! name = "a"
//! domain = { finite = 3 }
//! oracle = { principal = 1 }
//!
//! [suite.transfer]
//! depth = 2
//! nodes = 7
//! ```
//!
//! `[array.definable]` with `theta` and `n` replaces the label list by the
//! lexicographically ordered definable array.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use ulab_core::filters::{build_definable_array, ArraySpec, Domain, Mutation, UltrafilterOracle};
use ulab_core::superstructure::{build_v, MAX_BASE, MAX_LEVEL};
use ulab_core::ultrapower::Structure;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest level whose power set the superstructure suite will build.
const MAX_POWERED: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{path}: {field}: {reason}")]
pub struct ConfigError {
    pub path: String,
    pub field: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    /// Root of every pseudorandom stream; required by the fuzzing suites.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Report directory, relative to the working directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub array: Option<ArrayConfig>,
    #[serde(default)]
    pub suite: SuiteConfig,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureConfig {
    pub size: usize,
    /// Element names; defaults to `0..size`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default)]
    pub relations: Vec<RelationConfig>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationConfig {
    pub name: String,
    pub arity: usize,
    /// Tuples of element indices.
    #[serde(default)]
    pub tuples: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayConfig {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<LabelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub definable: Option<DefinableConfig>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelConfig {
    pub name: String,
    pub domain: DomainConfig,
    pub oracle: OracleConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainConfig {
    Finite(u64),
    Omega,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleConfig {
    Principal(u64),
    FactorialTower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefinableConfig {
    pub theta: usize,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationConfig {
    #[default]
    None,
    /// Negates every Fubini verdict. Only useful to show the checker is
    /// not vacuous.
    BrokenComplement,
}

impl From<MutationConfig> for Mutation {
    fn from(m: MutationConfig) -> Mutation {
        match m {
            MutationConfig::None => Mutation::None,
            MutationConfig::BrokenComplement => Mutation::BrokenComplement,
        }
    }
}

/// Suites run by `all` are exactly the ones with a section here.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transfer: Option<TransferSuite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fubini: Option<FubiniSuite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collapse: Option<CollapseSuite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub properness: Option<PropernessSuite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub germ: Option<GermSuite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superstructure: Option<SuperstructureSuite>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransferSuite {
    pub depth: usize,
    pub nodes: usize,
    /// Seeded random structures checked in addition to `[structure]`.
    pub random_structures: usize,
    pub max_size: usize,
    pub max_relations: usize,
    pub max_arity: usize,
    /// Sweep every all-principal array with up to `max_labels` labels over
    /// domains of size up to `max_domain`, instead of using `[array]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub principal_sweep: Option<PrincipalSweep>,
    /// Sub-signature for the sentences; all relations when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<String>>,
    pub mutation: MutationConfig,
}

impl Default for TransferSuite {
    fn default() -> Self {
        TransferSuite {
            depth: 2,
            nodes: 7,
            random_structures: 0,
            max_size: 3,
            max_relations: 2,
            max_arity: 2,
            principal_sweep: None,
            relations: None,
            mutation: MutationConfig::None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrincipalSweep {
    pub max_labels: usize,
    pub max_domain: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FubiniSuite {
    pub count: usize,
    pub max_labels: usize,
    pub max_clauses: usize,
}

impl Default for FubiniSuite {
    fn default() -> Self {
        FubiniSuite {
            count: 1000,
            max_labels: 3,
            max_clauses: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CollapseSuite {
    pub count: usize,
    pub max_labels: usize,
    pub max_domain: u64,
    pub max_size: usize,
    pub max_relations: usize,
    pub max_arity: usize,
}

impl Default for CollapseSuite {
    fn default() -> Self {
        CollapseSuite {
            count: 50,
            max_labels: 2,
            max_domain: 3,
            max_size: 3,
            max_relations: 2,
            max_arity: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropernessSuite {
    pub samples: u64,
    /// The free ω-label to project on; the first one when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Overrides the top-level `[array]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub array: Option<ArrayConfig>,
}

impl Default for PropernessSuite {
    fn default() -> Self {
        PropernessSuite {
            samples: 100,
            label: None,
            array: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GermSuite {
    pub count: usize,
    pub max_degree: usize,
    pub max_coeff: i64,
}

impl Default for GermSuite {
    fn default() -> Self {
        GermSuite {
            count: 500,
            max_degree: 4,
            max_coeff: 9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuperstructureSuite {
    pub atoms: usize,
    pub level: usize,
    pub depth: usize,
    pub nodes: usize,
    /// Expected `|V_0|, |V_1|, ...`; checked when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_sizes: Option<Vec<usize>>,
    pub mutation: SuperstructureMutation,
    /// Overrides the top-level `[array]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub array: Option<ArrayConfig>,
}

impl Default for SuperstructureSuite {
    fn default() -> Self {
        SuperstructureSuite {
            atoms: 2,
            level: 1,
            depth: 2,
            nodes: 5,
            expected_sizes: None,
            mutation: SuperstructureMutation::None,
            array: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuperstructureMutation {
    #[default]
    None,
    /// Transposes membership in the ultrapowered level.
    TransposedMembership,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            path: path.display().to_string(),
            field: "<file>".into(),
            reason: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses and validates; `origin` names the source in errors.
    pub fn parse(text: &str, origin: &str) -> Result<ExperimentConfig, ConfigError> {
        let de = toml::Deserializer::new(text);
        let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            ConfigError {
                path: origin.to_string(),
                field: if field == "." { "<document>".into() } else { field },
                reason: e.into_inner().message().trim().to_string(),
            }
        })?;
        config.validate(origin)?;
        Ok(config)
    }

    pub fn render(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    fn validate(&self, origin: &str) -> Result<(), ConfigError> {
        let err = |field: String, reason: String| ConfigError {
            path: origin.to_string(),
            field,
            reason,
        };
        if self.schema_version != SCHEMA_VERSION {
            return Err(err(
                "schema_version".into(),
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        if let Some(s) = &self.structure {
            s.build().map_err(|(f, r)| err(format!("structure.{f}"), r))?;
        }
        if let Some(a) = &self.array {
            a.build().map_err(|(f, r)| err(format!("array.{f}"), r))?;
        }
        if let Some(a) = self.suite.properness.as_ref().and_then(|p| p.array.as_ref()) {
            a.build().map_err(|(f, r)| err(format!("suite.properness.array.{f}"), r))?;
        }
        if let Some(a) = self.suite.superstructure.as_ref().and_then(|p| p.array.as_ref()) {
            a.build().map_err(|(f, r)| err(format!("suite.superstructure.array.{f}"), r))?;
        }
        if let Some(t) = &self.suite.transfer {
            if let (Some(names), Some(s)) = (&t.relations, &self.structure) {
                for (i, n) in names.iter().enumerate() {
                    if !s.relations.iter().any(|r| &r.name == n) {
                        return Err(err(
                            format!("suite.transfer.relations[{i}]"),
                            format!("unknown relation `{n}`; [structure] defines {}", s.relation_names()),
                        ));
                    }
                }
            }
            if t.depth > 3 || t.nodes > 9 {
                return Err(err("suite.transfer".into(), "enumeration bounds are limited to depth ≤ 3 and nodes ≤ 9".into()));
            }
            if let Some(p) = t.principal_sweep {
                if p.max_labels == 0 || p.max_labels > 3 || p.max_domain == 0 || p.max_domain > 4 {
                    return Err(err(
                        "suite.transfer.principal_sweep".into(),
                        "max_labels must be in 1..=3 and max_domain in 1..=4".into(),
                    ));
                }
            }
            if t.random_structures > 0 && (t.max_size == 0 || t.max_relations == 0 || t.max_arity == 0) {
                return Err(err("suite.transfer".into(), "random structure bounds must be positive".into()));
            }
        }
        if let Some(c) = &self.suite.collapse {
            if c.max_labels == 0 || c.max_labels > 3 || c.max_domain == 0 || c.max_domain > 4 {
                return Err(err(
                    "suite.collapse".into(),
                    "max_labels must be in 1..=3 and max_domain in 1..=4".into(),
                ));
            }
        }
        if let Some(g) = &self.suite.germ {
            if g.max_coeff <= 0 || g.max_coeff > 1_000_000 || g.max_degree > 12 {
                return Err(err("suite.germ".into(), "max_coeff must be in 1..=1000000 and max_degree ≤ 12".into()));
            }
        }
        if let Some(s) = &self.suite.superstructure {
            if s.atoms == 0 || s.atoms > MAX_BASE {
                return Err(err("suite.superstructure.atoms".into(), format!("must be in 1..={MAX_BASE}")));
            }
            if s.level == 0 || s.level > MAX_LEVEL {
                return Err(err("suite.superstructure.level".into(), format!("must be in 1..={MAX_LEVEL}")));
            }
            // the level below must stay small enough for its power set
            let base = Structure::numbered(s.atoms, []).expect("no relations");
            let below = build_v(&base, s.level - 1).map_or(usize::MAX, |v| v.len());
            if below > MAX_POWERED {
                return Err(err(
                    "suite.superstructure".into(),
                    format!("V_{} over {} atoms has {below} elements; at most {MAX_POWERED} can be powered", s.level - 1, s.atoms),
                ));
            }
        }
        Ok(())
    }

    /// The seed, or a configuration error naming the suite that needs it.
    pub fn require_seed(&self, suite: &str, origin: &str) -> Result<u64, ConfigError> {
        self.seed.ok_or_else(|| ConfigError {
            path: origin.to_string(),
            field: "seed".into(),
            reason: format!("required because `{suite}` draws random cases"),
        })
    }
}

impl StructureConfig {
    fn relation_names(&self) -> String {
        let names: Vec<String> = self.relations.iter().map(|r| format!("`{}`", r.name)).collect();
        if names.is_empty() {
            "no relations".into()
        } else {
            names.join(", ")
        }
    }

    /// The structure, or `(field, reason)`.
    pub fn build(&self) -> Result<Structure, (String, String)> {
        if self.size == 0 {
            return Err(("size".into(), "must be at least 1".into()));
        }
        let names: Vec<String> = match &self.names {
            Some(n) if n.len() != self.size => {
                return Err(("names".into(), format!("{} names for size {}", n.len(), self.size)))
            }
            Some(n) => n.clone(),
            None => (0..self.size).map(|i| i.to_string()).collect(),
        };
        for (i, r) in self.relations.iter().enumerate() {
            if r.arity == 0 {
                return Err((format!("relations[{i}].arity"), "must be at least 1".into()));
            }
            if self.relations[..i].iter().any(|q| q.name == r.name) {
                return Err((format!("relations[{i}].name"), format!("duplicate relation `{}`", r.name)));
            }
            for (j, t) in r.tuples.iter().enumerate() {
                if t.len() != r.arity {
                    return Err((
                        format!("relations[{i}].tuples[{j}]"),
                        format!("has {} entries, arity is {}", t.len(), r.arity),
                    ));
                }
                if let Some(&e) = t.iter().find(|&&e| e >= self.size) {
                    return Err((format!("relations[{i}].tuples[{j}]"), format!("element {e} outside 0..{}", self.size)));
                }
            }
        }
        let relations = self.relations.iter().map(|r| (r.name.clone(), r.arity, r.tuples.clone()));
        Structure::new(names, relations).map_err(|e| ("<structure>".into(), e.to_string()))
    }
}

impl ArrayConfig {
    pub fn build(&self) -> Result<Arc<ArraySpec>, (String, String)> {
        match (&self.definable, self.labels.is_empty()) {
            (Some(_), false) => Err(("<array>".into(), "give either `labels` or `definable`, not both".into())),
            (None, true) => Err(("labels".into(), "an array needs at least one label".into())),
            (Some(d), true) => {
                if d.theta == 0 || d.n == 0 || d.theta * d.n > 8 {
                    return Err(("definable".into(), "theta and n must be positive with theta * n ≤ 8".into()));
                }
                build_definable_array(d.theta, d.n)
                    .map(Arc::new)
                    .map_err(|e| ("definable".into(), e.to_string()))
            }
            (None, false) => {
                let mut oracles = Vec::new();
                for (i, l) in self.labels.iter().enumerate() {
                    let domain = match l.domain {
                        DomainConfig::Finite(0) => {
                            return Err((format!("labels[{i}].domain"), "a finite domain needs at least one point".into()))
                        }
                        DomainConfig::Finite(n) => Domain::Finite(n),
                        DomainConfig::Omega => Domain::Omega,
                    };
                    let oracle = match l.oracle {
                        OracleConfig::Principal(p) => UltrafilterOracle::principal(domain, p)
                            .map_err(|e| (format!("labels[{i}].oracle"), e.to_string()))?,
                        OracleConfig::FactorialTower if domain == Domain::Omega => UltrafilterOracle::factorial_tower(),
                        OracleConfig::FactorialTower => {
                            return Err((format!("labels[{i}].oracle"), "factorial-tower needs domain \"omega\"".into()))
                        }
                    };
                    oracles.push((l.name.clone(), oracle));
                }
                ArraySpec::from_oracles(oracles)
                    .map(Arc::new)
                    .map_err(|e| ("labels".into(), e.to_string()))
            }
        }
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
