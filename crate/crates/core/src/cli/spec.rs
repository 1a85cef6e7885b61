//! Declarative spec documents: group, pattern, action and task blocks.

use std::path::Path;
use std::str::FromStr;

use num_rational::{BigRational, Rational64};
use serde::{Deserialize, Serialize};

use crate::arith::parse_rational;
use crate::error::{Error, Result};
use crate::groups::{diagonal_resequence, CoordinateRule, EmbeddingPattern, FgAbelianGroup, GroupElement};
use crate::gset::{GroupModel, Presentation, SubgroupModel};
use crate::ktheory::MapSchedule;
use crate::uhf::{FactorRule, FactorSequence, DEFAULT_STAGE_CAP};

pub const SPEC_SCHEMA: &str = "uhfbench-spec/1";

pub const DEFAULT_HORIZON: usize = 64;
pub const DEFAULT_EPSILON: &str = "1/100";
pub const DEFAULT_WORD_LEN: usize = 4;
pub const DEFAULT_BRATTELI_STAGES: usize = 4;
pub const DEFAULT_PROFILE_LEVELS: usize = 8;

/// Built-in example specs, addressed as `builtin:NAME`.
pub const BUILTINS: &[(&str, &str)] = &[
    ("free-abelian", include_str!("../../examples/free-abelian.json")),
    ("klein-bottle", include_str!("../../examples/klein-bottle.json")),
    ("finite-rokhlin", include_str!("../../examples/finite-rokhlin.json")),
    ("prufer-negative", include_str!("../../examples/prufer-negative.json")),
    ("trivial-action", include_str!("../../examples/trivial-action.json")),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub name: String,
    pub group: GroupBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<PatternBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionBlock>,
    #[serde(default)]
    pub tasks: TaskBlock,
}

fn default_schema() -> String {
    SPEC_SCHEMA.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupBlock {
    /// `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z_(p_1) ⊕ ...`, torsion as a divisibility chain.
    Abelian {
        #[serde(default)]
        rank: usize,
        #[serde(default)]
        torsion: Vec<u64>,
        #[serde(default)]
        local_primes: Vec<u64>,
    },
    /// `⟨a, b | b a b⁻¹ = a⁻¹⟩`.
    KleinBottle,
    Presentation {
        generators: Vec<String>,
        #[serde(default)]
        relations: Vec<String>,
    },
    /// `Z(p^∞)`, analysed only for the absence of injective patterns.
    Prufer {
        prime: u64,
        #[serde(default = "default_max_modulus")]
        max_modulus: u64,
    },
}

fn default_max_modulus() -> u64 {
    200
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternBlock {
    pub sequence: FactorRule,
    /// One rule per generator; defaults to `quotient-mod` for every
    /// finitely generated summand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<CoordinateRule>>,
    /// Number of diagonal resequencing passes.
    #[serde(default)]
    pub resequence: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ActionBlock {
    /// Explicit actions, one per level, given by generator images in cycle
    /// notation.
    Permutations { levels: Vec<PermutationLevel> },
    /// `G ×_H X_l` for translation actions `X_l` of `H`.
    Induced {
        subgroup: SubgroupSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        representatives: Option<Vec<Vec<i64>>>,
        levels: Vec<TranslationLevel>,
    },
    /// Shorthand for the Klein-bottle family on `(Z/p^l)^2`.
    KleinInduced { prime: u64, levels: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermutationLevel {
    pub degree: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslationLevel {
    pub moduli: Vec<u64>,
    /// One shift vector per generator of `H`.
    pub shifts: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "subgroup", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SubgroupSpec {
    KleinTranslations,
    DiagonalSublattice { multiples: Vec<i64> },
}

impl SubgroupSpec {
    pub fn model(&self) -> Result<SubgroupModel> {
        match self {
            SubgroupSpec::KleinTranslations => Ok(SubgroupModel::KleinTranslations),
            SubgroupSpec::DiagonalSublattice { multiples } => SubgroupModel::diagonal_sublattice(multiples.clone()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    #[serde(default)]
    pub free: Vec<i64>,
    #[serde(default)]
    pub tors: Vec<i64>,
    /// Rationals such as `"1/2"`, one per local summand.
    #[serde(default)]
    pub local: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskBlock {
    /// Elements for `analyze`, `tower` and `witness`; defaults to the generators.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<ElementSpec>,
    /// Extra words profiled by `induce`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bratteli_stages: Option<usize>,
    /// Levels searched when choosing a free level per word in `induce`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_level_horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kgroups: Option<KTask>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerTask {
    /// Stage `L` of the test elements (matrix units `e_{0j}`, `e_{j0}`).
    #[serde(default)]
    pub base_stage: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessTask {
    #[serde(default = "one")]
    pub base_stage: usize,
    /// Witness level; defaults to the first level above `base_stage` where
    /// the element acts nontrivially.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(default = "two")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

impl Default for WitnessTask {
    fn default() -> Self {
        WitnessTask {
            base_stage: 1,
            level: None,
            samples: 2,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KTask {
    /// Rokhlin hypothesis; derived from `trivial_intersection` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rokhlin: Option<bool>,
    #[serde(default)]
    pub infinite_rank: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<MapSchedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_bound: Option<u64>,
}

/// Command-line overrides of task parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub horizon: Option<usize>,
    pub epsilon: Option<String>,
    pub stage_cap: Option<usize>,
    pub word_len: Option<usize>,
}

/// Effective parameters after defaults and overrides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub horizon: usize,
    pub epsilon: String,
    pub stage_cap: usize,
    pub word_len: usize,
    pub box_bound: i64,
    pub power_bound: i64,
    pub profile_levels: usize,
    pub bratteli_stages: usize,
    pub free_level_horizon: usize,
}

impl Parameters {
    pub fn resolve(tasks: &TaskBlock, overrides: &Overrides) -> Result<Self> {
        let epsilon = overrides
            .epsilon
            .clone()
            .or_else(|| tasks.epsilon.clone())
            .unwrap_or_else(|| DEFAULT_EPSILON.to_string());
        let eps = parse_rational(&epsilon).map_err(|e| schema("tasks.epsilon", e))?;
        if eps <= BigRational::from_integer(0.into()) {
            return Err(schema("tasks.epsilon", "epsilon must be positive"));
        }
        let horizon = overrides.horizon.or(tasks.horizon).unwrap_or(DEFAULT_HORIZON);
        if horizon == 0 {
            return Err(schema("tasks.horizon", "horizon must be positive"));
        }
        Ok(Parameters {
            horizon,
            epsilon: crate::arith::format_rational(&eps),
            stage_cap: overrides.stage_cap.or(tasks.stage_cap).unwrap_or(DEFAULT_STAGE_CAP),
            word_len: overrides.word_len.or(tasks.word_len).unwrap_or(DEFAULT_WORD_LEN),
            box_bound: tasks.box_bound.unwrap_or(crate::groups::DEFAULT_BOX_BOUND),
            power_bound: tasks.power_bound.unwrap_or(crate::rokhlin::DEFAULT_POWER_BOUND),
            profile_levels: tasks.profile_levels.unwrap_or(DEFAULT_PROFILE_LEVELS),
            bratteli_stages: tasks.bratteli_stages.unwrap_or(DEFAULT_BRATTELI_STAGES),
            free_level_horizon: tasks.free_level_horizon.unwrap_or(3),
        })
    }

    pub fn epsilon(&self) -> BigRational {
        parse_rational(&self.epsilon).expect("validated in resolve")
    }
}

pub(crate) fn schema(path: &str, message: impl ToString) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.to_string(),
    }
}

/// Parses and validates a spec, naming the offending path on failure.
pub fn parse_spec(text: &str) -> Result<SpecDocument> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: SpecDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(&path, e.into_inner())
    })?;
    if doc.schema != SPEC_SCHEMA {
        return Err(schema(
            "schema",
            format!("expected `{SPEC_SCHEMA}`, found `{}`", doc.schema),
        ));
    }
    doc.validate()?;
    Ok(doc)
}

/// Reads `builtin:NAME` or a file path.
pub fn load_spec(source: &str) -> Result<SpecDocument> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return parse_spec(builtin(name)?);
    }
    let text = std::fs::read_to_string(Path::new(source)).map_err(|e| Error::Io(format!("{source}: {e}")))?;
    parse_spec(&text)
}

pub fn builtin(name: &str) -> Result<&'static str> {
    BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            let names: Vec<&str> = BUILTINS.iter().map(|(n, _)| *n).collect();
            Error::InvalidInput(format!("unknown built-in `{name}`; available: {}", names.join(", ")))
        })
}

impl SpecDocument {
    fn validate(&self) -> Result<()> {
        self.abelian_group()?;
        if let Some(Err(e)) = self.pattern.as_ref().map(|_| self.embedding()) {
            return Err(e);
        }
        if self.pattern.is_some() && !matches!(self.group, GroupBlock::Abelian { .. }) {
            return Err(schema("pattern", "patterns need an abelian group block"));
        }
        if let Some(action) = &self.action {
            self.validate_action(action)?;
        }
        for (i, e) in self.tasks.elements.iter().enumerate() {
            self.element(e)
                .map_err(|err| schema(&format!("tasks.elements[{i}]"), err))?;
        }
        let presentation = self.presentation()?;
        for (i, w) in self.tasks.words.iter().enumerate() {
            let p = presentation
                .as_ref()
                .ok_or_else(|| schema("tasks.words", "words need a presented group"))?;
            p.parse_word(w)
                .map_err(|err| schema(&format!("tasks.words[{i}]"), err))?;
        }
        Ok(())
    }

    fn validate_action(&self, action: &ActionBlock) -> Result<()> {
        match action {
            ActionBlock::Permutations { levels } => {
                if self.presentation()?.is_none() {
                    return Err(schema("action", "explicit actions need a presented group"));
                }
                if levels.is_empty() {
                    return Err(schema("action.levels", "at least one level is needed"));
                }
            }
            ActionBlock::Induced { subgroup, levels, .. } => {
                let model = subgroup.model().map_err(|e| schema("action.subgroup", e))?;
                if Some(model.ambient()) != self.group_model()? {
                    return Err(schema("action.subgroup", "subgroup does not live in the spec's group"));
                }
                if levels.is_empty() {
                    return Err(schema("action.levels", "at least one level is needed"));
                }
            }
            ActionBlock::KleinInduced { prime, levels } => {
                if self.group != GroupBlock::KleinBottle {
                    return Err(schema("action", "klein-induced needs the klein-bottle group"));
                }
                if *prime < 2 || levels.is_empty() || levels.contains(&0) {
                    return Err(schema("action", "need a base of at least 2 and levels starting at 1"));
                }
            }
        }
        Ok(())
    }

    /// The finitely generated abelian part, when the group is abelian.
    pub fn abelian_group(&self) -> Result<Option<FgAbelianGroup>> {
        match &self.group {
            GroupBlock::Abelian { rank, torsion, .. } => FgAbelianGroup::new(*rank, torsion.clone())
                .map(Some)
                .map_err(|e| schema("group.torsion", e)),
            _ => Ok(None),
        }
    }

    /// An exact model of the group, when one is available.
    pub fn group_model(&self) -> Result<Option<GroupModel>> {
        Ok(match &self.group {
            GroupBlock::KleinBottle => Some(GroupModel::KleinBottle),
            GroupBlock::Abelian { local_primes, .. } if local_primes.is_empty() => {
                let group = self.abelian_group()?.expect("abelian block");
                let names = generator_names(group.rank(), group.torsion().len());
                Some(GroupModel::abelian(group, names)?)
            }
            _ => None,
        })
    }

    pub fn presentation(&self) -> Result<Option<Presentation>> {
        if let GroupBlock::Presentation { generators, relations } = &self.group {
            let rels: Vec<&str> = relations.iter().map(String::as_str).collect();
            return Presentation::new(generators.clone(), &rels)
                .map(Some)
                .map_err(|e| schema("group.relations", e));
        }
        Ok(self.group_model()?.map(|m| m.presentation()))
    }

    /// The embedding pattern, with its resequencing passes applied.
    pub fn embedding(&self) -> Result<EmbeddingPattern> {
        let block = self
            .pattern
            .as_ref()
            .ok_or_else(|| schema("pattern", "this command needs a pattern block"))?;
        let GroupBlock::Abelian { local_primes, .. } = &self.group else {
            return Err(schema("pattern", "patterns need an abelian group block"));
        };
        let group = self.abelian_group()?.expect("abelian block");
        let seq = FactorSequence::new(block.sequence.clone()).map_err(|e| schema("pattern.sequence", e))?;
        let rules = match &block.rules {
            Some(r) => r.clone(),
            None => {
                if !local_primes.is_empty() {
                    return Err(schema("pattern.rules", "local summands need explicit rules"));
                }
                vec![CoordinateRule::QuotientMod { scale: 1 }; group.ngens()]
            }
        };
        let mut pattern =
            EmbeddingPattern::new(group, local_primes.clone(), rules, seq).map_err(|e| schema("pattern.rules", e))?;
        for _ in 0..block.resequence {
            pattern = diagonal_resequence(&pattern);
        }
        Ok(pattern)
    }

    pub fn element(&self, spec: &ElementSpec) -> Result<GroupElement> {
        let pattern = self.embedding()?;
        let local = spec
            .local
            .iter()
            .map(|s| Rational64::from_str(s).map_err(|e| Error::InvalidElement(format!("`{s}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        pattern.element(spec.free.clone(), spec.tors.clone(), local)
    }

    /// The listed elements, or the generators when none are listed.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if self.tasks.elements.is_empty() {
            return Ok(self.embedding()?.generators());
        }
        self.tasks.elements.iter().map(|e| self.element(e)).collect()
    }
}

/// `x` or `x1, ..., xr` for free generators, then `t` or `t1, ...` for torsion.
fn generator_names(rank: usize, torsion: usize) -> Vec<String> {
    let block = |prefix: &str, n: usize| -> Vec<String> {
        if n == 1 {
            vec![prefix.to_string()]
        } else {
            (1..=n).map(|i| format!("{prefix}{i}")).collect()
        }
    };
    let mut names = block("x", rank);
    names.extend(block("t", torsion));
    names
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse() {
        for (name, _) in BUILTINS {
            load_spec(&format!("builtin:{name}")).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(load_spec("builtin:nope").is_err());
    }

    #[test]
    fn schema_errors_name_the_path() {
        let err = parse_spec(r#"{"name": "x"}"#).unwrap_err();
        assert!(matches!(err, Error::Schema { ref message, .. } if message.contains("group")));
        let err = parse_spec(
            r#"{"name": "x", "group": {"kind": "abelian", "rank": 1},
                "pattern": {"sequence": {"rule": "factorial"}, "rules": [{"kind": "nope"}]}}"#,
        )
        .unwrap_err();
        match err {
            Error::Schema { path, .. } => assert!(path.starts_with("pattern.rules"), "{path}"),
            e => panic!("{e}"),
        }
        let err = parse_spec(r#"{"name": "x", "group": {"kind": "abelian", "rank": 1, "extra": 2}}"#).unwrap_err();
        assert!(matches!(err, Error::Schema { .. }));
    }

    #[test]
    fn echo_round_trips() {
        for (name, _) in BUILTINS {
            let doc = load_spec(&format!("builtin:{name}")).unwrap();
            let text = serde_json::to_string(&doc).unwrap();
            assert_eq!(parse_spec(&text).unwrap(), doc);
        }
    }
}
