//! End-to-end runs: seed, symmetric power, integral form, closure
//! certificate, bends and re-certification, with every step written to a
//! run directory as a JSON artifact.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bendcore::{
    apply_bend, bend_matrix_identity_blocks, bend_matrix_irreducible, bend_matrix_unit_blocks, charpoly_factors,
    det_one_splits, BendCertificate, BendCertificateJson,
};
use crate::density::{certify_closure, closure_strictly_increased, ClosureCertificate, ClosureCertificateJson, ClosureClass};
use crate::error::{Error, Result};
use crate::exactmat::{matrix_entries_from_json, matrix_entries_to_json};
use crate::modsearch::{search_eta, EtaCertificate, EtaCertificateJson, SearchMode};
use crate::nfield::{fundamental_unit_search, NfElement, NumberField};
use crate::polyring::Poly;
use crate::repkit::{descend_to_rationals, genus2_seed, integralize, tau_n_rep, SurfaceRep, SurfaceRepJson};
use crate::{NfMatrix, NfPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldChoice {
    #[serde(rename = "q")]
    Rationals,
    #[serde(rename = "q-sqrt2")]
    QSqrt2,
}

impl FieldChoice {
    pub fn field(self) -> Arc<NumberField> {
        match self {
            FieldChoice::Rationals => NumberField::rationals(),
            FieldChoice::QSqrt2 => NumberField::q_sqrt2(),
        }
    }
}

impl FromStr for FieldChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(FieldChoice::Rationals),
            "q-sqrt2" => Ok(FieldChoice::QSqrt2),
            other => Err(Error::Parse(format!("unknown field {other:?}; expected q or q-sqrt2"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub field: FieldChoice,
    pub n: usize,
    pub genus: usize,
    /// External seed representation (JSON); its content is copied into the
    /// seed artifact, so runs stay verifiable without the original file.
    pub seed_rep: Option<PathBuf>,
    pub word_bound: usize,
    pub unit_height: u32,
    pub irreducible_height: u32,
    pub max_bend_power: u64,
    pub max_stages: usize,
    pub eta_word_bound: usize,
    pub prime_cap: u64,
    pub denominator_bound: String,
}

impl PipelineConfig {
    pub fn new(field: FieldChoice, n: usize) -> Self {
        PipelineConfig {
            field,
            n,
            genus: 2,
            seed_rep: None,
            word_bound: 2,
            unit_height: 3,
            irreducible_height: 2,
            max_bend_power: 3,
            max_stages: 2,
            eta_word_bound: 5,
            prime_cap: 60,
            denominator_bound: "1000000000000".into(),
        }
    }

    fn denominator_bound(&self) -> Result<BigInt> {
        self.denominator_bound.parse().map_err(|_| Error::Parse(format!("bad denominator bound {}", self.denominator_bound)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Dense,
    NeedCover { eta: EtaCertificateJson },
    Inconclusive { reason: String },
    Failed { error: String },
}

impl RunStatus {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunStatus::Dense => 0,
            RunStatus::NeedCover { .. } => 2,
            RunStatus::Inconclusive { .. } => 3,
            RunStatus::Failed { .. } => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Artifact {
    Seed { rep: SurfaceRepJson, builtin: bool },
    Tau { n: usize, rep: SurfaceRepJson },
    Descend { conjugator: Vec<Vec<Vec<String>>>, rep: SurfaceRepJson },
    Integralize { conjugator: Vec<Vec<Vec<String>>>, rep: SurfaceRepJson },
    Certify { rep_hash: String, certificate: ClosureCertificateJson },
    Bend { stage: usize, power: u64, certificate: BendCertificateJson, rep: SurfaceRepJson },
    Eta { certificate: EtaCertificateJson },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub index: usize,
    pub name: String,
    pub artifact: String,
    pub input_hash: String,
    pub output_hash: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineRun {
    pub config: PipelineConfig,
    pub steps: Vec<StepRecord>,
    pub status: RunStatus,
    pub closure_classes: Vec<ClosureClass>,
}

impl PipelineRun {
    pub fn artifacts_dir(dir: &Path) -> PathBuf {
        dir.join("artifacts")
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Collects step artifacts in memory and, with a directory, on disk.
struct Recorder {
    dir: Option<PathBuf>,
    steps: Vec<StepRecord>,
}

impl Recorder {
    fn new(dir: Option<&Path>, config: &PipelineConfig) -> Result<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(PipelineRun::artifacts_dir(d))?;
            write_atomic(&d.join("config.json"), &serde_json::to_vec_pretty(config)?)?;
        }
        Ok(Recorder { dir: dir.map(Path::to_path_buf), steps: Vec::new() })
    }

    fn record(&mut self, name: &str, input_hash: String, artifact: Artifact) -> Result<()> {
        let index = self.steps.len();
        let file = format!("{index:02}-{name}.json");
        let bytes = serde_json::to_vec_pretty(&artifact)?;
        if let Some(d) = &self.dir {
            write_atomic(&PipelineRun::artifacts_dir(d).join(&file), &bytes)?;
        }
        self.steps.push(StepRecord { index, name: name.into(), artifact: file, input_hash, output_hash: sha256_hex(&bytes) });
        Ok(())
    }

    fn finish(self, config: &PipelineConfig, status: RunStatus, classes: Vec<ClosureClass>) -> Result<PipelineRun> {
        let run = PipelineRun { config: config.clone(), steps: self.steps, status, closure_classes: classes };
        if let Some(d) = &self.dir {
            write_atomic(&d.join("run.json"), &serde_json::to_vec_pretty(&run)?)?;
        }
        Ok(run)
    }
}

/// Mutable state of a run between steps.
struct RunState {
    rec: Recorder,
    rep: Option<SurfaceRep>,
    certificates: Vec<ClosureCertificate>,
}

impl RunState {
    fn rep(&self) -> &SurfaceRep {
        self.rep.as_ref().expect("representation recorded")
    }

    fn input_hash(&self) -> String {
        self.rep.as_ref().map(SurfaceRep::content_hash).unwrap_or_default()
    }

    fn certify(&mut self, word_bound: usize) -> Result<ClosureCertificate> {
        let cert = certify_closure(self.rep(), word_bound)?;
        let hash = self.input_hash();
        self.rec.record("certify", hash.clone(), Artifact::Certify { rep_hash: hash, certificate: cert.to_json() })?;
        self.certificates.push(cert.clone());
        Ok(cert)
    }

    fn last_class(&self) -> Option<ClosureClass> {
        self.certificates.last().map(|c| c.class)
    }

    fn classes(&self) -> Vec<ClosureClass> {
        self.certificates.iter().map(|c| c.class).collect()
    }
}

fn load_seed(path: &Path) -> Result<SurfaceRep> {
    let text = fs::read_to_string(path)?;
    SurfaceRep::from_json(&serde_json::from_str(&text)?)
}

/// Seed, symmetric power and integral form shared by both pipelines.
fn prepare(state: &mut RunState, config: &PipelineConfig) -> Result<()> {
    let (seed, builtin) = match &config.seed_rep {
        Some(path) => (load_seed(path)?, false),
        None => (genus2_seed()?, true),
    };
    if seed.genus != config.genus {
        return Err(Error::SizeMismatch(format!("seed has genus {}, config asks for {}", seed.genus, config.genus)));
    }
    state.rec.record("seed", String::new(), Artifact::Seed { rep: seed.to_json(), builtin })?;
    state.rep = Some(seed);
    if state.rep().n != config.n {
        if state.rep().n != 2 {
            return Err(Error::SizeMismatch(format!("seed has dimension {}, config asks for {}", state.rep().n, config.n)));
        }
        let rep = tau_n_rep(state.rep(), config.n)?;
        state.rec.record("tau", state.input_hash(), Artifact::Tau { n: config.n, rep: rep.to_json() })?;
        state.rep = Some(rep);
    }
    let bound = config.denominator_bound()?;
    if config.field == FieldChoice::Rationals && !state.rep().field.is_rationals() {
        let (p, rep) = descend_to_rationals(state.rep())?;
        let conjugator = matrix_entries_to_json(&state.rep().field, &p);
        state.rec.record("descend", state.input_hash(), Artifact::Descend { conjugator, rep: rep.to_json() })?;
        state.rep = Some(rep);
    }
    if !state.rep().is_integral() {
        let (p, rep) = integralize(state.rep(), &bound)?;
        let conjugator = matrix_entries_to_json(&rep.field, &p);
        state.rec.record("integralize", state.input_hash(), Artifact::Integralize { conjugator, rep: rep.to_json() })?;
        state.rep = Some(rep);
    }
    Ok(())
}

/// Apply the first candidate (or power of it) whose bent representation has
/// strictly larger closure; records the bend and its certificate.
fn try_bends(state: &mut RunState, config: &PipelineConfig, stage: usize, candidates: &[BendCertificate]) -> Result<bool> {
    let before = state.certificates.last().cloned().expect("certified before bending");
    let a1 = state.rep().generators[0].clone();
    for cand in candidates {
        for m in 1..=config.max_bend_power {
            let cert = if m == 1 { cand.clone() } else { cand.power(m, &a1) };
            if !cert.is_valid() {
                continue;
            }
            let bent = apply_bend(state.rep(), &cert)?;
            let after = match certify_closure(&bent, config.word_bound) {
                Ok(c) => c,
                Err(Error::Inconclusive(_)) => continue,
                Err(e) => return Err(e),
            };
            if !closure_strictly_increased(&before, &after)? {
                continue;
            }
            let artifact = Artifact::Bend { stage, power: m, certificate: cert.to_json(), rep: bent.to_json() };
            state.rec.record("bend", state.input_hash(), artifact)?;
            state.rep = Some(bent);
            state.certify(config.word_bound)?;
            return Ok(true);
        }
    }
    Ok(false)
}

fn unit_block_candidates(k: &Arc<NumberField>, a1: &NfMatrix, config: &PipelineConfig) -> Result<Vec<BendCertificate>> {
    let factors = charpoly_factors(k, a1)?;
    let u = fundamental_unit_search(k, config.unit_height)?;
    let mut out = Vec::new();
    for (f1, f2) in det_one_splits(&factors) {
        match bend_matrix_unit_blocks(a1, &u, (&f1, &f2)) {
            Ok(c) if c.is_valid() => out.push(c),
            Ok(_) | Err(Error::ReciprocalSpectrum) | Err(Error::NotFoundWithinBound(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if out.is_empty() {
        match bend_matrix_irreducible(a1, config.irreducible_height) {
            Ok(c) if c.is_valid() => out.push(c),
            Ok(_) | Err(Error::NotFoundWithinBound(_)) | Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn linear_factor() -> NfPoly {
    Poly::new(vec![-NfElement::one(), NfElement::one()])
}

fn identity_block_candidates(a1: &NfMatrix) -> Result<Vec<BendCertificate>> {
    let k = NumberField::rationals();
    let mut factors = charpoly_factors(&k, a1)?;
    let lin = linear_factor();
    let Some(i) = factors.iter().position(|f| *f == lin) else {
        return Err(Error::Precondition("characteristic polynomial of a1 has no factor t - 1".into()));
    };
    factors.remove(i);
    let r = factors.len();
    let mut out = Vec::new();
    if !(2..=20).contains(&r) {
        return Ok(out);
    }
    for mask in 1u32..(1 << r) - 1 {
        let pick = |inside: bool| {
            (0..r).filter(|j| (mask >> j & 1 == 1) == inside).fold(Poly::one(), |acc: NfPoly, j| &acc * &factors[j])
        };
        let (f1, f2) = (pick(true), pick(false));
        match bend_matrix_identity_blocks(a1, (&f1, &f2), true) {
            Ok(c) if c.is_valid() => out.push(c),
            Ok(_) | Err(Error::NotFoundWithinBound(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn run_or_fail<F>(config: &PipelineConfig, dir: Option<&Path>, body: F) -> Result<PipelineRun>
where
    F: FnOnce(&mut RunState) -> Result<RunStatus>,
{
    let mut state = RunState { rec: Recorder::new(dir, config)?, rep: None, certificates: Vec::new() };
    let status = match body(&mut state) {
        Ok(s) => s,
        Err(Error::Io(e)) => return Err(Error::Io(e)),
        Err(Error::Inconclusive(reason)) => RunStatus::Inconclusive { reason },
        Err(e) => RunStatus::Failed { error: e.to_string() },
    };
    let classes = state.classes();
    state.rec.finish(config, status, classes)
}

/// Run over a real quadratic field: unit-block bends (or the irreducible
/// construction) along `a1` until the closure is all of `SL(n)`.
pub fn run_numberfield_pipeline(config: &PipelineConfig, dir: Option<&Path>) -> Result<PipelineRun> {
    run_or_fail(config, dir, |state| {
        if config.field == FieldChoice::Rationals {
            return Err(Error::Precondition("the number-field pipeline needs a field other than Q".into()));
        }
        if config.n == 7 {
            return Err(Error::G2Unsupported);
        }
        if config.n < 2 {
            return Err(Error::Precondition("n must be at least 2".into()));
        }
        prepare(state, config)?;
        if state.certify(config.word_bound)?.class == ClosureClass::FullSL {
            return Ok(RunStatus::Dense);
        }
        let k = state.rep().field.clone();
        for stage in 1..=config.max_stages {
            let a1 = state.rep().generators[0].clone();
            let candidates = unit_block_candidates(&k, &a1, config)?;
            if candidates.is_empty() {
                return Err(Error::NotFoundWithinBound("no valid bend matrix along a1".into()));
            }
            if !try_bends(state, config, stage, &candidates)? {
                return Ok(RunStatus::Inconclusive { reason: format!("no bend at stage {stage} enlarged the closure") });
            }
            if state.last_class() == Some(ClosureClass::FullSL) {
                return Ok(RunStatus::Dense);
            }
        }
        Ok(RunStatus::Inconclusive { reason: format!("closure is {:?} after {} stages", state.last_class(), config.max_stages) })
    })
}

/// Run over ℚ for odd `n`: an identity-block bend leaves the principal
/// SL(2), then either the irreducible construction or a search modulo primes
/// for a word with `(t − 1)·irreducible` characteristic polynomial.
pub fn run_rational_pipeline(config: &PipelineConfig, dir: Option<&Path>) -> Result<PipelineRun> {
    run_or_fail(config, dir, |state| {
        if config.field != FieldChoice::Rationals {
            return Err(Error::Precondition("the rational pipeline works over Q".into()));
        }
        if config.n == 7 {
            return Err(Error::G2Unsupported);
        }
        if config.n % 2 == 0 && config.seed_rep.is_none() {
            return Err(Error::NoKnownSeed(format!("no integral seed over Q in even dimension {}", config.n)));
        }
        prepare(state, config)?;
        if state.certify(config.word_bound)?.class == ClosureClass::FullSL {
            return Ok(RunStatus::Dense);
        }
        let a1 = state.rep().generators[0].clone();
        if state.last_class() == Some(ClosureClass::PrincipalSL2) {
            let candidates = identity_block_candidates(&a1)?;
            if candidates.is_empty() {
                return Err(Error::NotFoundWithinBound(
                    "characteristic polynomial of a1 admits no identity-block bend (needs (t-1)·f1·f2)".into(),
                ));
            }
            if !try_bends(state, config, 1, &candidates)? {
                return Ok(RunStatus::Inconclusive { reason: "identity-block bend did not enlarge the closure".into() });
            }
        }
        if state.last_class() == Some(ClosureClass::FullSL) {
            return Ok(RunStatus::Dense);
        }
        let k = NumberField::rationals();
        let factors = charpoly_factors(&k, &a1)?;
        let lin = linear_factor();
        let one_split = factors.len() == 2 && factors.contains(&lin) && factors.iter().any(|f| *f != lin);
        if one_split {
            if let Ok(c) = bend_matrix_irreducible(&a1, config.irreducible_height) {
                if c.is_valid() && try_bends(state, config, 2, &[c])? && state.last_class() == Some(ClosureClass::FullSL) {
                    return Ok(RunStatus::Dense);
                }
            }
        }
        let eta = search_eta(state.rep(), SearchMode::OneSplit, config.eta_word_bound, config.prime_cap)?;
        let json = eta.to_json(&k);
        state.rec.record("eta", state.input_hash(), Artifact::Eta { certificate: json.clone() })?;
        if eta.integer_shape_holds() != Some(true) {
            return Err(Error::Precondition("eta charpoly is not (t-1) times an irreducible over Z".into()));
        }
        Ok(RunStatus::NeedCover { eta: json })
    })
}

/// The certified starting representation of a run (seed, symmetric power,
/// descent and integral form) without writing artifacts.
pub fn prepared_rep(config: &PipelineConfig) -> Result<SurfaceRep> {
    let mut state = RunState { rec: Recorder::new(None, config)?, rep: None, certificates: Vec::new() };
    prepare(&mut state, config)?;
    Ok(state.rep.take().expect("prepared"))
}

/// Bend matrices along `a1` in the order the pipelines try them: identity
/// blocks over ℚ, unit blocks (then the irreducible construction) otherwise.
pub fn bend_candidates(rep: &SurfaceRep, config: &PipelineConfig) -> Result<Vec<BendCertificate>> {
    let a1 = &rep.generators[0];
    if rep.field.is_rationals() {
        identity_block_candidates(a1)
    } else {
        unit_block_candidates(&rep.field, a1, config)
    }
}

pub fn run_pipeline(config: &PipelineConfig, dir: Option<&Path>) -> Result<PipelineRun> {
    match config.field {
        FieldChoice::Rationals => run_rational_pipeline(config, dir),
        FieldChoice::QSqrt2 => run_numberfield_pipeline(config, dir),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub step: Option<usize>,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, step: Option<usize>, check: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { step, check: check.into(), passed, detail: detail.into() });
    }

    fn push_result(&mut self, step: Option<usize>, check: &str, r: Result<bool>) {
        match r {
            Ok(b) => self.push(step, check, b, ""),
            Err(e) => self.push(step, check, false, e.to_string()),
        }
    }
}

/// `next = P·prev·P⁻¹`, compared over the field of `prev` (which contains
/// the field of `next` after a descent).
fn conjugation_matches(prev: &SurfaceRep, p: &NfMatrix, next: &SurfaceRep) -> Result<bool> {
    let k = &prev.field;
    let pinv = p.inverse()?;
    Ok(prev.generators.iter().zip(&next.generators).all(|(g, h)| {
        let h = h.map(|e| e.clone().in_field(k));
        &(p * g) * &pinv == h
    }))
}

/// Re-check every artifact of a run directory without trusting anything
/// except the builtin seed data.
pub fn verify_run(dir: &Path) -> VerifyReport {
    let mut report = VerifyReport::default();
    let run: PipelineRun = match fs::read(dir.join("run.json")).map_err(Error::from).and_then(|b| Ok(serde_json::from_slice(&b)?)) {
        Ok(r) => r,
        Err(e) => {
            report.push(None, "run log", false, e.to_string());
            return report;
        }
    };
    report.push(None, "run log", true, "");
    let mut current: Option<SurfaceRep> = None;
    let mut classes: Vec<(ClosureClass, bool)> = Vec::new();
    let mut after_bend = false;
    let mut last_cert: Option<ClosureCertificate> = None;
    for step in &run.steps {
        let s = Some(step.index);
        let path = PipelineRun::artifacts_dir(dir).join(&step.artifact);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(_) => {
                report.push(s, "artifact present", false, format!("missing artifact {} for step {}", step.artifact, step.name));
                current = None;
                continue;
            }
        };
        report.push(s, "content hash", sha256_hex(&bytes) == step.output_hash, step.artifact.clone());
        if let Some(c) = &current {
            report.push(s, "input hash", c.content_hash() == step.input_hash, "");
        }
        let artifact: Artifact = match serde_json::from_slice(&bytes) {
            Ok(a) => a,
            Err(e) => {
                report.push(s, "artifact parse", false, e.to_string());
                current = None;
                continue;
            }
        };
        let parse_rep = |j: &SurfaceRepJson, report: &mut VerifyReport| match SurfaceRep::from_json(j) {
            Ok(r) => {
                report.push(s, "relator and determinant", true, "");
                Some(r)
            }
            Err(e) => {
                report.push(s, "relator and determinant", false, e.to_string());
                None
            }
        };
        match artifact {
            Artifact::Seed { rep, builtin } => {
                current = parse_rep(&rep, &mut report);
                if builtin {
                    let same = genus2_seed().map(|g| current.as_ref().is_some_and(|c| c.generators == g.generators));
                    report.push_result(s, "builtin seed", same);
                }
            }
            Artifact::Tau { n, rep } => {
                let next = parse_rep(&rep, &mut report);
                if let (Some(prev), Some(next)) = (&current, &next) {
                    report.push_result(s, "symmetric power", tau_n_rep(prev, n).map(|t| t.generators == next.generators));
                }
                current = next;
            }
            Artifact::Descend { conjugator, rep } | Artifact::Integralize { conjugator, rep } => {
                let next = parse_rep(&rep, &mut report);
                if let (Some(prev), Some(next)) = (&current, &next) {
                    let check = matrix_entries_from_json(&prev.field, &conjugator).and_then(|p| conjugation_matches(prev, &p, next));
                    report.push_result(s, "conjugation", check);
                    if step.name == "integralize" {
                        report.push(s, "integrality", next.is_integral(), "");
                    }
                }
                current = next;
            }
            Artifact::Certify { rep_hash, certificate } => {
                let Some(rep) = &current else {
                    report.push(s, "closure certificate", false, "no verified representation before this step");
                    continue;
                };
                report.push(s, "certified representation", rep.content_hash() == rep_hash, "");
                let cert = ClosureCertificate::from_json(&certificate);
                report.push_result(s, "closure certificate", cert.as_ref().map_err(Clone::clone).and_then(|c| c.verify(rep)));
                if let Ok(c) = cert {
                    if after_bend {
                        if let Some(prev) = &last_cert {
                            report.push_result(s, "closure strictly increased", closure_strictly_increased(prev, &c));
                        }
                    }
                    classes.push((c.class, after_bend));
                    last_cert = Some(c);
                }
                after_bend = false;
            }
            Artifact::Bend { certificate, rep, .. } => {
                let next = parse_rep(&rep, &mut report);
                if let (Some(prev), Some(next)) = (&current, &next) {
                    match BendCertificate::from_json(&certificate) {
                        Ok(c) => {
                            report.push(s, "centralization", c.reverify(prev) && c.checks.centralizes, "");
                            report.push(s, "bend certificate", c.is_valid(), "");
                            report.push_result(s, "bent images", apply_bend(prev, &c).map(|b| b.generators == next.generators));
                        }
                        Err(e) => report.push(s, "bend certificate", false, e.to_string()),
                    }
                }
                current = next;
                after_bend = true;
            }
            Artifact::Eta { certificate } => {
                let Some(rep) = &current else {
                    report.push(s, "eta certificate", false, "no verified representation before this step");
                    continue;
                };
                let check = eta_from_json(rep, &certificate).and_then(|e| e.verify(rep));
                report.push_result(s, "eta certificate", check);
            }
        }
    }
    let recorded: Vec<ClosureClass> = classes.iter().map(|c| c.0).collect();
    report.push(None, "closure sequence", recorded == run.closure_classes, format!("{recorded:?}"));
    if run.status == RunStatus::Dense {
        report.push(None, "dense status", recorded.last() == Some(&ClosureClass::FullSL), "final certificate must be FullSL");
    }
    report
}

fn eta_from_json(rep: &SurfaceRep, j: &EtaCertificateJson) -> Result<EtaCertificate> {
    let m = rep.eval(&j.word)?;
    let modp = crate::modsearch::reduce_poly_mod_p(&m.charpoly(), rep.field.degree(), j.prime, j.residue)?;
    if crate::polyring::fp_poly_json(&modp) != j.modp_charpoly {
        return Err(Error::Precondition("recorded mod-p characteristic polynomial does not match".into()));
    }
    Ok(EtaCertificate {
        word: j.word.clone(),
        mode: j.mode,
        prime: j.prime,
        residue: j.residue,
        modp_charpoly: modp,
        integral_charpoly: m.charpoly(),
        skipped_primes: j.skipped_primes.clone(),
    })
}

/// Load the final representation and closure certificate of a run.
pub fn load_final(dir: &Path) -> Result<(SurfaceRep, Option<ClosureCertificate>)> {
    let run: PipelineRun = serde_json::from_slice(&fs::read(dir.join("run.json"))?)?;
    let mut rep = None;
    let mut cert = None;
    for step in &run.steps {
        let artifact: Artifact = serde_json::from_slice(&fs::read(PipelineRun::artifacts_dir(dir).join(&step.artifact))?)?;
        match artifact {
            Artifact::Seed { rep: r, .. }
            | Artifact::Tau { rep: r, .. }
            | Artifact::Descend { rep: r, .. }
            | Artifact::Integralize { rep: r, .. }
            | Artifact::Bend { rep: r, .. } => rep = Some(SurfaceRep::from_json(&r)?),
            Artifact::Certify { certificate, .. } => cert = Some(ClosureCertificate::from_json(&certificate)?),
            Artifact::Eta { .. } => {}
        }
    }
    let rep = rep.ok_or_else(|| Error::Parse("run has no representation".into()))?;
    Ok((rep, cert))
}

