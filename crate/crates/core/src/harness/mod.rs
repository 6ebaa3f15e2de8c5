//! Exhaustive verification suites, report types, run configuration and the
//! enumeration cache.

mod analyze;
mod cache;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{SystemKey, TypeLabel};

pub use analyze::{cmd_analyze, cmd_table, AnalyzeRecord, TableEntry};
pub use cache::{GroupCache, CACHE_ENV};
pub use suites::replay;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    BpEquiv,
    Bp2,
    Ratgrass,
    Peterson,
    Onesided,
    Leafbp,
    Factor,
    Fibres,
    Assoc,
    Paradescent,
    AlmostmaxLemmas,
    BilleyCrites,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::BpEquiv,
        Suite::Bp2,
        Suite::Ratgrass,
        Suite::Peterson,
        Suite::Onesided,
        Suite::Leafbp,
        Suite::Factor,
        Suite::Fibres,
        Suite::Assoc,
        Suite::Paradescent,
        Suite::AlmostmaxLemmas,
        Suite::BilleyCrites,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::BpEquiv => "bp-equiv",
            Suite::Bp2 => "bp2",
            Suite::Ratgrass => "ratgrass",
            Suite::Peterson => "peterson",
            Suite::Onesided => "onesided",
            Suite::Leafbp => "leafbp",
            Suite::Factor => "factor",
            Suite::Fibres => "fibres",
            Suite::Assoc => "assoc",
            Suite::Paradescent => "paradescent",
            Suite::AlmostmaxLemmas => "almostmax-lemmas",
            Suite::BilleyCrites => "billey-crites",
        }
    }

    /// What the suite checks, one line.
    pub fn description(self) -> &'static str {
        match self {
            Suite::BpEquiv => "the equivalent BP criteria agree on every (w, J, K)",
            Suite::Bp2 => "rationally smooth w in W^J with |S(w)\\J| >= 2 has a Grassmannian BP decomposition",
            Suite::Ratgrass => "non-maximal rationally smooth Grassmannian elements are exactly the table rows",
            Suite::Peterson => "in simply-laced types rational smoothness equals smoothness; type A agrees with 3412/4231 avoidance",
            Suite::Onesided => "rationally smooth w is maximal or has a right BP decomposition with (almost-)maximal outer factor",
            Suite::Leafbp => "rationally smooth w or its inverse has a leaf BP decomposition with (almost-)maximal outer factor",
            Suite::Factor => "under BP, P_w^J is palindromic iff both factors are; P_w^J is bottom-heavy",
            Suite::Fibres => "BP iff the fibre dimension function is constant",
            Suite::Assoc => "BP decompositions are associative over I ⊆ J ⊆ K",
            Suite::Paradescent => "generators adjacent to S(v) outside it are not descents on the far side",
            Suite::AlmostmaxLemmas => "descent sets and coset representatives of almost-maximal elements",
            Suite::BilleyCrites => "affine A: smooth towers iff 3412/4231 avoidance; twisted spirals are almost-maximal",
        }
    }

    pub fn default_systems(self) -> &'static [&'static str] {
        const EXHAUSTIVE: &[&str] = &[
            "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4",
        ];
        match self {
            Suite::BpEquiv => &["A1", "A2", "A3", "B3", "C3", "G2", "B4", "D4", "F4"],
            Suite::Peterson => &["A3", "A4", "D4"],
            Suite::Factor | Suite::Assoc | Suite::Paradescent => &["A3", "B3", "C3"],
            Suite::Fibres => &["A3", "B3"],
            Suite::AlmostmaxLemmas => &["B2", "B3", "B4", "C3", "C4", "F4"],
            Suite::BilleyCrites => &["affA2", "affA3"],
            _ => EXHAUSTIVE,
        }
    }

    fn accepts(self, key: SystemKey) -> std::result::Result<(), &'static str> {
        let affine = key.label.is_affine();
        match self {
            Suite::BilleyCrites if !affine => Err("needs an affine system"),
            Suite::BilleyCrites => Ok(()),
            _ if affine => Err("needs a finite system"),
            Suite::Peterson if !key.label.is_simply_laced() => Err("needs a simply-laced system"),
            Suite::AlmostmaxLemmas
                if !matches!(key.label, TypeLabel::B | TypeLabel::C | TypeLabel::F) =>
            {
                Err("needs a system of type B, C or F")
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::Config(format!("unknown suite {s:?}; known: {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(Error::Config(format!("unknown output format {s:?}"))),
        }
    }
}

/// Largest finite group the suites enumerate (E6).
pub const MAX_SWEEP_ORDER: usize = 51_840;

/// Run configuration, loadable from TOML. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Systems to sweep; empty means each suite's default set.
    pub systems: Vec<String>,
    /// Suites enabled when no suite is named explicitly.
    pub suites: Vec<String>,
    /// Length cap on scanned elements. Affine systems default to 10 for
    /// Ã2 and 8 otherwise.
    pub max_length: Option<usize>,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
    /// Random triples per system when a sweep is sampled.
    pub samples: usize,
    pub seed: u64,
    /// Groups up to this order are swept exhaustively by `bp-equiv`; larger
    /// ones are sampled.
    pub exhaustive_max_order: usize,
    /// Adds E6 to the default system sets.
    pub include_e6: bool,
    /// Stop a suite at its first failing system.
    pub fail_fast: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            systems: Vec::new(),
            suites: Vec::new(),
            max_length: None,
            jobs: 0,
            cache_dir: None,
            format: OutputFormat::Json,
            samples: 10_000,
            seed: 0x5eed,
            exhaustive_max_order: 100,
            include_e6: false,
            fail_fast: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        for s in &self.systems {
            let key: SystemKey = s.parse()?;
            self.check_size(key)?;
        }
        for s in &self.suites {
            s.parse::<Suite>()?;
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        Ok(())
    }

    fn check_size(&self, key: SystemKey) -> Result<()> {
        match (key.label, key.rank) {
            (TypeLabel::E, 6) if !self.include_e6 => Err(Error::Config(
                "E6 sweeps are opt-in (include_e6 = true)".into(),
            )),
            (TypeLabel::E, 7 | 8) => Err(Error::Config(format!(
                "{key} exceeds the sweep cap of {MAX_SWEEP_ORDER} elements"
            ))),
            _ => Ok(()),
        }
    }

    /// The systems a suite runs on under this configuration.
    pub fn systems_for(&self, suite: Suite) -> Result<Vec<SystemKey>> {
        let names: Vec<String> = if self.systems.is_empty() {
            let mut v: Vec<String> = suite.default_systems().iter().map(|s| s.to_string()).collect();
            if self.include_e6 && suite.default_systems().contains(&"F4") {
                v.push("E6".into());
            }
            v
        } else {
            self.systems.clone()
        };
        names
            .iter()
            .map(|s| {
                let key: SystemKey = s.parse()?;
                self.check_size(key)?;
                suite
                    .accepts(key)
                    .map_err(|why| Error::Config(format!("suite {suite} {why}, got {key}")))?;
                Ok(key)
            })
            .collect()
    }

    pub fn enabled_suites(&self) -> Result<Vec<Suite>> {
        if self.suites.is_empty() {
            return Ok(Suite::ALL.to_vec());
        }
        self.suites.iter().map(|s| s.parse()).collect()
    }

    /// Effective length cap for a system.
    pub fn length_cap(&self, key: SystemKey) -> Option<usize> {
        match (self.max_length, key.label) {
            (Some(l), _) => Some(l),
            (None, TypeLabel::AffineA) => Some(if key.rank == 2 { 10 } else { 8 }),
            (None, _) => None,
        }
    }

    fn cache(&self) -> GroupCache {
        GroupCache::new(self.cache_dir.clone().or_else(GroupCache::dir_from_env))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub elements: u64,
    pub cases: u64,
    pub bp_found: u64,
    pub rationally_smooth: u64,
    pub smooth: u64,
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.elements += o.elements;
        self.cases += o.cases;
        self.bp_found += o.bp_found;
        self.rationally_smooth += o.rationally_smooth;
        self.smooth += o.smooth;
    }
}

/// A failing case with everything needed to recompute it: generator sets
/// and words are in label notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub suite: String,
    pub system: String,
    pub w: String,
    #[serde(rename = "I")]
    pub i: String,
    #[serde(rename = "J")]
    pub j: String,
    #[serde(rename = "K")]
    pub k: String,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSummary {
    pub system: String,
    pub length_cap: Option<usize>,
    /// Every element (or every triple) was visited.
    pub exhaustive: bool,
    /// The length cap did not cut the group short.
    pub complete: bool,
    pub counts: Counts,
    /// Suite-specific tallies, e.g. per-generator table counts.
    pub tallies: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub max_length: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub exhaustive_max_order: usize,
}

/// The deterministic part of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportPayload {
    pub suite: String,
    pub systems: Vec<String>,
    pub parameters: Parameters,
    pub counts: Counts,
    pub per_system: Vec<SystemSummary>,
    pub failures: Vec<Failure>,
    pub complete: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub wall_time_secs: f64,
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub header: ReportHeader,
    pub payload: ReportPayload,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.payload.passed
    }

    /// Canonical JSON of the payload alone.
    pub fn payload_json(&self) -> String {
        serde_json::to_string_pretty(&self.payload).expect("payload serializes")
    }

    pub fn to_text(&self) -> String {
        let p = &self.payload;
        let mut out = format!(
            "{}: {} ({} cases, {} failures, {:.2}s)\n",
            p.suite,
            if p.passed { "PASS" } else { "FAIL" },
            p.counts.cases,
            p.failures.len(),
            self.header.wall_time_secs
        );
        for s in &p.per_system {
            out.push_str(&format!(
                "  {:<6} elements={} cases={} bp={} rs={} smooth={}{}{}\n",
                s.system,
                s.counts.elements,
                s.counts.cases,
                s.counts.bp_found,
                s.counts.rationally_smooth,
                s.counts.smooth,
                if s.exhaustive { "" } else { " sampled" },
                if s.complete { "" } else { " INCOMPLETE" },
            ));
            for (k, v) in &s.tallies {
                out.push_str(&format!("         {k} = {v}\n"));
            }
        }
        for f in &p.failures {
            out.push_str(&format!(
                "  failure {} w={} I={{{}}} J={{{}}} K={{{}}} {}: {}\n",
                f.system, f.w, f.i, f.j, f.k, f.check, f.detail
            ));
        }
        out
    }

    /// One CSV row per system.
    pub fn csv_rows(&self) -> Vec<ReportRow> {
        self.payload
            .per_system
            .iter()
            .map(|s| ReportRow {
                suite: self.payload.suite.clone(),
                system: s.system.clone(),
                exhaustive: s.exhaustive,
                complete: s.complete,
                elements: s.counts.elements,
                cases: s.counts.cases,
                bp_found: s.counts.bp_found,
                rationally_smooth: s.counts.rationally_smooth,
                smooth: s.counts.smooth,
                failures: self
                    .payload
                    .failures
                    .iter()
                    .filter(|f| f.system == s.system)
                    .count(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub suite: String,
    pub system: String,
    pub exhaustive: bool,
    pub complete: bool,
    pub elements: u64,
    pub cases: u64,
    pub bp_found: u64,
    pub rationally_smooth: u64,
    pub smooth: u64,
    pub failures: usize,
}

/// Runs one suite over the configured systems.
pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let systems = cfg.systems_for(suite)?;
    let cache = cfg.cache();
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let jobs = pool.current_num_threads();
    let mut per_system = Vec::new();
    let mut failures = Vec::new();
    for key in &systems {
        let outcome = pool.install(|| suites::run(suite, *key, cfg, &cache))?;
        let failed = !outcome.failures.is_empty();
        per_system.push(outcome.summary);
        failures.extend(outcome.failures);
        if failed && cfg.fail_fast {
            break;
        }
    }
    let mut counts = Counts::default();
    for s in &per_system {
        counts += s.counts;
    }
    let complete = per_system.len() == systems.len() && per_system.iter().all(|s| s.complete);
    let payload = ReportPayload {
        suite: suite.name().to_string(),
        systems: systems.iter().map(|k| k.to_string()).collect(),
        parameters: Parameters {
            max_length: cfg.max_length,
            samples: cfg.samples,
            seed: cfg.seed,
            exhaustive_max_order: cfg.exhaustive_max_order,
        },
        counts,
        per_system,
        passed: failures.is_empty(),
        failures,
        complete,
    };
    Ok(VerificationReport {
        header: ReportHeader {
            wall_time_secs: start.elapsed().as_secs_f64(),
            jobs,
        },
        payload,
    })
}
