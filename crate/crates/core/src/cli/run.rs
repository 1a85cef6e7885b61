//! Command execution: turns a validated spec into a report document.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::format_rational;
use crate::cli::spec::{schema, ActionBlock, GroupBlock, Overrides, Parameters, SpecDocument, SubgroupSpec};
use crate::error::{Error, Result};
use crate::groups::{prufer_obstruction, trivial_intersection, EmbeddingPattern, IntersectionVerdict};
use crate::gset::{
    induce, induced_fixed_points, klein_base_action, regrouped_levels, select_free_levels, translation_action,
    GroupModel, PermutationAction, SubgroupModel, SubgroupTransversal, Word,
};
use crate::ktheory::{
    crossed_product_diagram, diagram_from_actions, direct_limit_invariants, k_invariants, k_invariants_infinite_rank,
    DiagramVerdict, DirectLimitSystem, KGroup, DEFAULT_PRIME_BOUND,
};
use crate::rokhlin::{
    outerness_witness, rokhlin_classify, tower_synthesize, tower_verify, vanishing_trace_profile, ActionFamily,
    KleinFamily, RokhlinVerdict,
};
use crate::uhf::{embed_stage, RatMatrix, StageElement};

pub const REPORT_SCHEMA: &str = "uhfbench-report/1";
pub const TOOL: &str = "uhfbench";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Analyze,
    Induce,
    Tower,
    Witness,
    Bratteli,
    Kgroups,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Induce => "induce",
            Command::Tower => "tower",
            Command::Witness => "witness",
            Command::Bratteli => "bratteli",
            Command::Kgroups => "kgroups",
            Command::Report => "report",
        }
    }

    pub const ALL: [Command; 7] = [
        Command::Analyze,
        Command::Induce,
        Command::Tower,
        Command::Witness,
        Command::Bratteli,
        Command::Kgroups,
        Command::Report,
    ];
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaskResult {
    pub task: String,
    pub subject: String,
    pub status: Status,
    pub evidence: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub schema: String,
    pub command: Command,
    /// The input spec, re-serialised; it parses back to the same document.
    pub spec: SpecDocument,
    pub parameters: Parameters,
    pub results: Vec<TaskResult>,
    pub summary: Summary,
    pub exit_code: i32,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub overrides: Overrides,
    /// Record wall-clock time per task; off by default so reports stay
    /// byte-identical across runs.
    pub timing: bool,
}

/// Exit code for errors raised before or outside task evaluation.
pub fn error_exit_code(_err: &Error) -> i32 {
    EXIT_USAGE
}

pub fn run(command: Command, spec: &SpecDocument, options: &RunOptions) -> Result<ReportDocument> {
    let params = Parameters::resolve(&spec.tasks, &options.overrides)?;
    let mut runner = Runner {
        spec,
        params: params.clone(),
        timing: options.timing,
        results: Vec::new(),
    };
    match command {
        Command::Analyze => runner.analyze(true)?,
        Command::Induce => runner.induce(true)?,
        Command::Tower => runner.tower(true)?,
        Command::Witness => runner.witness(true)?,
        Command::Bratteli => runner.bratteli(true)?,
        Command::Kgroups => runner.kgroups(true)?,
        Command::Report => {
            runner.analyze(false)?;
            runner.induce(false)?;
            runner.tower(false)?;
            runner.witness(false)?;
            runner.bratteli(false)?;
            runner.kgroups(false)?;
        }
    }
    let mut summary = Summary::default();
    for r in &runner.results {
        match r.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Unknown => summary.unknown += 1,
            Status::Skipped => summary.skipped += 1,
        }
    }
    let exit_code = if summary.fail > 0 {
        EXIT_FAIL
    } else if summary.unknown > 0 {
        EXIT_UNKNOWN
    } else {
        EXIT_PASS
    };
    Ok(ReportDocument {
        tool: TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema: REPORT_SCHEMA.into(),
        command,
        spec: spec.clone(),
        parameters: params,
        results: runner.results,
        summary,
        exit_code,
    })
}

struct Runner<'a> {
    spec: &'a SpecDocument,
    params: Parameters,
    timing: bool,
    results: Vec<TaskResult>,
}

type Outcome = (Status, Value);

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("evidence serialises")
}

/// Certified failures and exhausted budgets become task verdicts; anything
/// else is a usage error.
fn absorb(err: Error) -> Result<Outcome> {
    let status = match &err {
        Error::CertificateFailure(_)
        | Error::RelationViolation { .. }
        | Error::Inconsistency(_)
        | Error::InconsistentCocycle(_) => Status::Fail,
        Error::StageCap { .. } | Error::OutOfRange(_) => Status::Unknown,
        _ => return Err(err),
    };
    Ok((status, json!({ "error": err.to_string() })))
}

impl<'a> Runner<'a> {
    fn record(&mut self, task: &str, subject: String, f: impl FnOnce(&Self) -> Result<Outcome>) -> Result<()> {
        let start = Instant::now();
        let (status, evidence) = f(self).or_else(absorb)?;
        let elapsed_ms = self.timing.then(|| (start.elapsed().as_secs_f64() * 1e6).round() / 1e3);
        self.results.push(TaskResult {
            task: task.into(),
            subject,
            status,
            evidence,
            elapsed_ms,
        });
        Ok(())
    }

    fn skip(&mut self, task: &str, subject: String, reason: &str) {
        self.results.push(TaskResult {
            task: task.into(),
            subject,
            status: Status::Skipped,
            evidence: json!({ "reason": reason }),
            elapsed_ms: None,
        });
    }

    fn pattern(&self, required: bool, path: &str) -> Result<Option<EmbeddingPattern>> {
        match self.spec.pattern {
            Some(_) => self.spec.embedding().map(Some),
            None if required => Err(schema(path, "this command needs a pattern block")),
            None => Ok(None),
        }
    }

    fn analyze(&mut self, required: bool) -> Result<()> {
        if let GroupBlock::Prufer { prime, max_modulus } = self.spec.group {
            let moduli: Vec<u64> = (2..=max_modulus).collect();
            return self.record("prufer-obstruction", format!("Z({prime}^inf)"), |_| {
                let report = prufer_obstruction(prime, &moduli)?;
                // No injective pattern exists: a certified negative.
                let status = if report.no_injective_pattern {
                    Status::Fail
                } else {
                    Status::Unknown
                };
                Ok((status, to_value(&report)))
            });
        }
        let Some(pattern) = self.pattern(required, "pattern")? else {
            return Ok(());
        };
        let (horizon, box_bound) = (self.params.horizon, self.params.box_bound);
        self.record("trivial-intersection", pattern.describe_group(), |_| {
            let v = trivial_intersection(&pattern, horizon, box_bound)?;
            let status = match v {
                IntersectionVerdict::ProvenTrivial { .. } => Status::Pass,
                IntersectionVerdict::Counterexample { .. } => Status::Fail,
                IntersectionVerdict::UnknownUpTo { .. } => Status::Unknown,
            };
            Ok((status, json!({ "label": v.label(), "verdict": v })))
        })?;
        for g in self.spec.elements()? {
            if g.is_zero() {
                return Err(schema("tasks.elements", "the identity has nothing to classify"));
            }
            let (power_bound, levels) = (self.params.power_bound, self.params.profile_levels);
            self.record("rokhlin-classify", g.to_string(), |_| {
                let v = rokhlin_classify(&pattern, &g, horizon, power_bound)?;
                let profile = vanishing_trace_profile(&pattern, &g, levels)?;
                let status = match v {
                    RokhlinVerdict::FiniteOrderRokhlin { .. } | RokhlinVerdict::InfiniteOrderUniformlyOuter { .. } => {
                        Status::Pass
                    }
                    RokhlinVerdict::Fails { .. } => Status::Fail,
                    RokhlinVerdict::Unknown { .. } => Status::Unknown,
                };
                Ok((
                    status,
                    json!({ "label": v.label(), "verdict": v, "profile_label": profile.verdict.label(), "profile": profile }),
                ))
            })?;
        }
        Ok(())
    }

    fn induce(&mut self, required: bool) -> Result<()> {
        let Some(action) = &self.spec.action else {
            if required {
                return Err(schema("action", "this command needs an action block"));
            }
            return Ok(());
        };
        match action.clone() {
            ActionBlock::KleinInduced { prime, levels } => {
                let t = SubgroupTransversal::standard(SubgroupModel::KleinTranslations)?;
                let family = KleinFamily::new(prime)?;
                for &l in &levels {
                    self.record("induce", format!("klein-bottle p={prime} l={l}"), |r| {
                        let base = klein_base_action(prime, l)?;
                        r.induced_level(&t, &base, Some((&family, l as usize)))
                    })?;
                }
                let words = self.nontrivial_words(&GroupModel::KleinBottle)?;
                let horizon = self.params.free_level_horizon;
                self.record("free-levels", format!("klein-bottle p={prime}"), |_| {
                    let sel = select_free_levels(&t, |l| klein_base_action(prime, l as u32), &words, horizon)?;
                    regrouping(sel)
                })
            }
            ActionBlock::Induced {
                subgroup,
                representatives,
                levels,
            } => {
                let model = subgroup.model()?;
                let t = match representatives {
                    Some(reps) => SubgroupTransversal::new(model.clone(), reps)?,
                    None => SubgroupTransversal::standard(model.clone())?,
                };
                let sub = model.sub_model();
                let subject = match &subgroup {
                    SubgroupSpec::KleinTranslations => "klein-translations".to_string(),
                    SubgroupSpec::DiagonalSublattice { multiples } => format!("sublattice {multiples:?}"),
                };
                let mut bases = Vec::with_capacity(levels.len());
                for (i, lv) in levels.iter().enumerate() {
                    let base = translation_action(&sub, &lv.moduli, &lv.shifts)
                        .map_err(|e| schema(&format!("action.levels[{i}]"), e))?;
                    bases.push(base);
                }
                for (i, base) in bases.iter().enumerate() {
                    self.record("induce", format!("{subject} level {}", i + 1), |r| {
                        r.induced_level(&t, base, None)
                    })?;
                }
                let words = self.nontrivial_words(&model.ambient())?;
                let horizon = self.params.free_level_horizon.min(bases.len());
                self.record("free-levels", subject, |_| {
                    let sel = select_free_levels(&t, |l| Ok(bases[l - 1].clone()), &words, horizon)?;
                    regrouping(sel)
                })
            }
            ActionBlock::Permutations { levels } => {
                let pres = self.spec.presentation()?.expect("validated");
                let model = self.spec.group_model()?;
                for (i, lv) in levels.iter().enumerate() {
                    let pres = pres.clone();
                    let model = model.clone();
                    self.record("induce", format!("level {}", i + 1), |r| {
                        let cycles: Vec<&str> = lv.generators.iter().map(String::as_str).collect();
                        let action = PermutationAction::from_cycles(pres.clone(), lv.degree, &cycles)?;
                        let words = r.words(&pres, model.as_ref())?;
                        let table: Vec<Value> = words
                            .iter()
                            .map(|w| json!({ "word": pres.render(w), "fixed_points": action.fixed_points(w) }))
                            .collect();
                        let nonfree: Vec<String> = words
                            .iter()
                            .filter(|w| action.fixed_points(w) > 0)
                            .map(|w| pres.render(w))
                            .collect();
                        Ok((
                            Status::Pass,
                            json!({
                                "degree": action.degree(),
                                "relations_hold": true,
                                "action": action.summary(),
                                "fixed_points": table,
                                "nonfree_words": nonfree,
                            }),
                        ))
                    })?;
                }
                Ok(())
            }
        }
    }

    /// Reduced words up to the word-length bound plus the listed extras,
    /// minus those trivial in `model` (when a model is known).
    fn words(&self, pres: &crate::gset::Presentation, model: Option<&GroupModel>) -> Result<Vec<Word>> {
        let mut words = pres.words_up_to(self.params.word_len);
        for w in &self.spec.tasks.words {
            let w = pres.parse_word(w)?;
            if !words.contains(&w) {
                words.push(w);
            }
        }
        let mut out = Vec::with_capacity(words.len());
        for w in words {
            let trivial = match model {
                Some(m) => m.is_identity(&m.evaluate(&w)?),
                None => w.is_empty(),
            };
            if !trivial {
                out.push(w);
            }
        }
        Ok(out)
    }

    fn nontrivial_words(&self, model: &GroupModel) -> Result<Vec<Word>> {
        self.words(&model.presentation(), Some(model))
    }

    /// Builds `G ×_H X`, re-checks the relations, and tabulates fixed points
    /// against the conjugate-sum formula (and the closed form when given).
    fn induced_level(
        &self,
        t: &SubgroupTransversal,
        base: &PermutationAction,
        closed_form: Option<(&KleinFamily, usize)>,
    ) -> Result<Outcome> {
        let y = induce(t, base)?;
        let model = t.subgroup().ambient();
        let pres = model.presentation();
        let relations: Vec<Value> = pres
            .relations()
            .iter()
            .map(|rel| json!({ "relation": rel.text, "holds": y.evaluate(&rel.word).is_identity() }))
            .collect();
        let mut table = Vec::new();
        let mut nonfree = Vec::new();
        for w in self.nontrivial_words(&model)? {
            let fix = y.fixed_points(&w);
            let formula = induced_fixed_points(t, base, &w)?;
            if formula != fix {
                return Err(Error::Inconsistency(format!(
                    "`{}` fixes {fix} points but the conjugate sum gives {formula}",
                    pres.render(&w)
                )));
            }
            let g = model.evaluate(&w)?;
            if let Some((family, level)) = closed_form {
                let closed = family.fixed_points(&g, level)?;
                if closed != BigInt::from(fix) {
                    return Err(Error::Inconsistency(format!(
                        "`{}` fixes {fix} points but the closed form gives {closed}",
                        pres.render(&w)
                    )));
                }
            }
            if fix > 0 {
                nonfree.push(pres.render(&w));
            }
            table.push(json!({ "word": pres.render(&w), "element": model.format(&g), "fixed_points": fix }));
        }
        Ok((
            Status::Pass,
            json!({
                "degree": y.degree(),
                "base_degree": base.degree(),
                "index": t.index(),
                "representatives": t.labels(),
                "relations": relations,
                "words_checked": table.len(),
                "all_nontrivial_words_free": nonfree.is_empty(),
                "nonfree_words": nonfree,
                "fixed_points": table,
            }),
        ))
    }

    fn tower(&mut self, required: bool) -> Result<()> {
        let Some(pattern) = self.pattern(required, "pattern")? else {
            return Ok(());
        };
        let base_stage = self.spec.tasks.tower.clone().unwrap_or_default().base_stage;
        let cap = self.params.stage_cap;
        for g in self.spec.elements()? {
            if pattern.element_order(&g).is_none() {
                self.skip(
                    "tower",
                    g.to_string(),
                    "infinite order: towers are built for finite-order elements",
                );
                continue;
            }
            let (horizon, eps) = (self.params.horizon, self.params.epsilon());
            self.record("tower", g.to_string(), |_| {
                let f = matrix_units(&pattern, base_stage, cap)?;
                let tower = tower_synthesize(&pattern, &g, &f, horizon, cap)?;
                let report = tower_verify(&tower, &g, &pattern, &f, &eps)?;
                let status = if report.passes { Status::Pass } else { Status::Fail };
                Ok((
                    status,
                    json!({
                        "test_elements": f.len(),
                        "base_stage": base_stage,
                        "projections": tower.projections,
                        "report": report,
                    }),
                ))
            })?;
        }
        Ok(())
    }

    fn witness(&mut self, required: bool) -> Result<()> {
        let Some(pattern) = self.pattern(required, "pattern")? else {
            return Ok(());
        };
        let task = self.spec.tasks.witness.clone().unwrap_or_default();
        let cap = self.params.stage_cap;
        let eps = self.params.epsilon();
        let mut rng = ChaCha8Rng::seed_from_u64(task.seed);
        for g in self.spec.elements()? {
            if g.is_zero() {
                return Err(schema("tasks.elements", "the identity has no outerness witness"));
            }
            let level = match task.level {
                Some(l) => Some(l),
                None => {
                    let top = pattern
                        .known_levels()
                        .map_or(self.params.horizon, |k| k.min(self.params.horizon));
                    let mut found = None;
                    for l in task.base_stage + 1..=top {
                        if !pattern.coordinate(&g, l)?.is_zero() {
                            found = Some(l);
                            break;
                        }
                    }
                    found
                }
            };
            let Some(level) = level else {
                self.record("witness", g.to_string(), |_| {
                    Ok((
                        Status::Unknown,
                        json!({ "reason": format!("no level above {} acts nontrivially within the horizon", task.base_stage) }),
                    ))
                })?;
                continue;
            };
            for sample in 0..task.samples {
                let (a, dist) = perturbed_element(&mut rng, &pattern, &eps, task.base_stage, level, cap)?;
                self.record("witness", format!("{g} sample {sample}"), |_| {
                    let stage = pattern.sequence().stage(task.base_stage, cap)?;
                    let p = StageElement::identity(&stage);
                    let w = outerness_witness(&a, &p, &g, &pattern, &eps, level, cap)?;
                    let status = if w.certified && w.sums_to_p {
                        Status::Pass
                    } else {
                        Status::Fail
                    };
                    Ok((
                        status,
                        json!({
                            "base_stage": task.base_stage,
                            "perturbation_entry_sum": format_rational(&dist),
                            "witness": w,
                        }),
                    ))
                })?;
            }
        }
        Ok(())
    }

    fn bratteli(&mut self, required: bool) -> Result<()> {
        let finite_abelian = match &self.spec.group {
            GroupBlock::Abelian {
                rank: 0, local_primes, ..
            } => local_primes.is_empty(),
            _ => false,
        };
        let explicit = matches!(self.spec.action, Some(ActionBlock::Permutations { .. }));
        if !finite_abelian || (self.spec.pattern.is_none() && !explicit) {
            if required {
                return Err(schema(
                    "group",
                    "bratteli needs a finite abelian group with a pattern or explicit actions",
                ));
            }
            return Ok(());
        }
        let (stages, horizon) = (self.params.bratteli_stages, self.params.horizon);
        if let Some(pattern) = self.pattern(false, "pattern")? {
            return self.record("bratteli", pattern.describe_group(), |_| {
                let report = crossed_product_diagram(&pattern, stages, horizon)?;
                let status = match report.verdict {
                    DiagramVerdict::Uhf { .. } => Status::Pass,
                    DiagramVerdict::NotUhf { .. } => Status::Fail,
                    DiagramVerdict::Undetermined { .. } => Status::Unknown,
                };
                Ok((
                    status,
                    json!({
                        "label": report.verdict.label(),
                        "verdict": report.verdict,
                        "constant_telescope_from": report.constant_telescope_from,
                        "diagram": report.diagram,
                        "adjacency": report.diagram.to_text(),
                    }),
                ))
            });
        }
        let Some(ActionBlock::Permutations { levels }) = self.spec.action.clone() else {
            unreachable!("checked above")
        };
        let group = self.spec.abelian_group()?.expect("abelian block");
        let pres = self.spec.presentation()?.expect("abelian groups are presented");
        self.record("bratteli", group.to_string(), |_| {
            let actions = levels
                .iter()
                .map(|lv| {
                    let cycles: Vec<&str> = lv.generators.iter().map(String::as_str).collect();
                    PermutationAction::from_cycles(pres.clone(), lv.degree, &cycles)
                })
                .collect::<Result<Vec<_>>>()?;
            let diagram = diagram_from_actions(group.torsion(), &actions)?;
            let reason = format!("{} explicit levels fix no long-run behaviour", actions.len());
            let verdict = DiagramVerdict::Undetermined { reason };
            Ok((
                Status::Unknown,
                json!({
                    "label": verdict.label(),
                    "verdict": verdict,
                    "constant_telescope_from": diagram.constant_telescope_from(),
                    "adjacency": diagram.to_text(),
                    "diagram": diagram,
                }),
            ))
        })
    }

    fn kgroups(&mut self, required: bool) -> Result<()> {
        let task = self.spec.tasks.kgroups.clone().unwrap_or_default();
        let group = match &self.spec.group {
            GroupBlock::Abelian { local_primes, .. } if local_primes.is_empty() || task.infinite_rank => {
                self.spec.abelian_group()?
            }
            _ => None,
        };
        let Some(group) = group else {
            if required {
                return Err(schema("group", "kgroups needs a finitely generated abelian group"));
            }
            return Ok(());
        };
        let (rokhlin, source) = match task.rokhlin {
            Some(flag) => (flag, "asserted in the spec".to_string()),
            None => match self.pattern(false, "pattern")? {
                Some(pattern) => {
                    let v = trivial_intersection(&pattern, self.params.horizon, self.params.box_bound)?;
                    (
                        matches!(v, IntersectionVerdict::ProvenTrivial { .. }),
                        format!("trivial intersection: {}", v.label()),
                    )
                }
                None => (false, "no pattern to certify it".to_string()),
            },
        };
        let subject = if task.infinite_rank {
            "Z^inf".to_string()
        } else {
            group.to_string()
        };
        self.record("kgroups", subject, |_| {
            let inv = if task.infinite_rank {
                k_invariants_infinite_rank(rokhlin)
            } else {
                k_invariants(&group, rokhlin)
            };
            let status = if inv.k0 == KGroup::Undetermined {
                Status::Unknown
            } else {
                Status::Pass
            };
            Ok((
                status,
                json!({
                    "k0": inv.k0.describe(),
                    "k1": inv.k1.describe(),
                    "rokhlin_source": source,
                    "invariants": inv,
                }),
            ))
        })?;
        if let Some(schedule) = task.limit {
            let system = DirectLimitSystem::new(schedule).map_err(|e| schema("tasks.kgroups.limit", e))?;
            let horizon = task.limit_horizon.unwrap_or(10);
            let bound = task.prime_bound.unwrap_or(DEFAULT_PRIME_BOUND);
            self.record("direct-limit", "K_0 model".into(), |_| {
                let inv = direct_limit_invariants(&system, horizon, bound)?;
                let divisible: Vec<u64> = inv
                    .divisibility
                    .iter()
                    .filter(|d| inv.divisible_by(d.prime))
                    .map(|d| d.prime)
                    .collect();
                let status = if inv.exact { Status::Pass } else { Status::Unknown };
                Ok((
                    status,
                    json!({ "rank": inv.rank, "divisible_by": divisible, "invariants": inv }),
                ))
            })?;
        }
        Ok(())
    }
}

/// Interleaves the distinct chosen levels so that each recurs infinitely
/// often; a prefix covering every level twice is reported.
fn regrouping(sel: Vec<crate::gset::LevelSelection>) -> Result<Outcome> {
    let missing: Vec<&str> = sel
        .iter()
        .filter(|s| s.level.is_none())
        .map(|s| s.word.as_str())
        .collect();
    if !missing.is_empty() {
        return Ok((Status::Unknown, json!({ "selections": sel, "missing": missing })));
    }
    let mut distinct: Vec<crate::gset::LevelSelection> = Vec::new();
    for s in &sel {
        if !distinct.iter().any(|d| d.level == s.level) {
            distinct.push(s.clone());
        }
    }
    distinct.sort_by_key(|d| d.level);
    let k = distinct.len();
    let regrouped = regrouped_levels(&distinct, k * (k + 1))?;
    let levels_used: Vec<usize> = distinct.iter().filter_map(|d| d.level).collect();
    Ok((
        Status::Pass,
        json!({ "levels_used": levels_used, "regrouped_levels": regrouped, "selections": sel }),
    ))
}

/// Matrix units `e_{0j}`, `e_{j0}` at `stage`; they generate the full
/// matrix algebra there.
fn matrix_units(pattern: &EmbeddingPattern, stage: usize, cap: usize) -> Result<Vec<StageElement>> {
    if stage == 0 {
        return Ok(Vec::new());
    }
    let s = pattern.sequence().stage(stage, cap)?;
    let mut out = Vec::with_capacity(2 * (s.dim() - 1));
    for j in 1..s.dim() {
        out.push(StageElement::matrix_unit(&s, 0, j)?);
        out.push(StageElement::matrix_unit(&s, j, 0)?);
    }
    Ok(out)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> (Vec<BigRational>, BigRational) {
    let data: Vec<BigRational> = (0..n * n)
        .map(|_| BigRational::new(rng.gen_range(-8i64..=8).into(), 8.into()))
        .collect();
    let sum = data.iter().fold(BigRational::zero(), |acc, x| acc + x.abs());
    (data, sum)
}

/// `a = b + δ` with `b` at `base_stage`, `Σ|b_ij| ≤ 1 − ε`, and `δ` at the
/// witness level with `Σ|δ_ij| ≤ ε`; entry sums bound operator norms, so
/// `‖a‖ ≤ 1` and `‖a − b‖ ≤ ε`. Returns `a` and `Σ|δ_ij|`.
pub fn perturbed_element(
    rng: &mut ChaCha8Rng,
    pattern: &EmbeddingPattern,
    eps: &BigRational,
    base_stage: usize,
    level: usize,
    cap: usize,
) -> Result<(StageElement, BigRational)> {
    let sb = pattern.sequence().stage(base_stage, cap)?;
    let sw = pattern.sequence().stage(level, cap)?;
    let one = BigRational::one();
    let (b, bs) = random_matrix(rng, sb.dim());
    let bscale = if bs.is_zero() { one.clone() } else { (&one - eps) / &bs };
    let b = StageElement::new(
        sb.clone(),
        RatMatrix::from_rows(sb.dim(), b.iter().map(|x| x * &bscale).collect()),
    )?;
    let (d, ds) = random_matrix(rng, sw.dim());
    let dscale = if ds.is_zero() { one } else { eps / &ds };
    let delta = StageElement::new(
        sw.clone(),
        RatMatrix::from_rows(sw.dim(), d.iter().map(|x| x * &dscale).collect()),
    )?;
    let a = embed_stage(&b, &sw)?.add(&delta)?;
    Ok((a, ds * dscale))
}
