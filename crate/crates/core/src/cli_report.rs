//! Run configuration, subcommands and machine-readable reports.
//!
//! Exit codes: 0 pass, 1 fail, 2 inconclusive (an ambiguous certificate),
//! 3 solver error, 64 invalid usage.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology_decomp::{self, Check, DecompositionReport, Spectrum, SolverStats, Verdict, VerifyConfig};
use crate::discrete_forms::FormGeometry;
use crate::field_io;
use crate::hodge_solver::{self, SelfDualResiduals, SolverConfig};
use crate::pointwise_algebra::{self as pa, FiberOps, IdentityCheck};
use crate::transverse_geometry::{make_flat_structure, make_perturbed_structure, KContactModel, StructureField};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StructureSpec {
    Flat,
    Perturbed { seed: u64, amplitude: f64, mode_cutoff: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Pointwise,
    Compute,
    Lemma21,
    DumpStructure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub structure: StructureSpec,
    pub grid: usize,
    pub tol_zero: f64,
    pub tol_solve: f64,
    pub complex: bool,
    pub threads: Option<usize>,
    pub deterministic: bool,
    /// Random self-dual samples for `lemma21`.
    pub count: usize,
    pub json: Option<PathBuf>,
    pub spectra: Option<PathBuf>,
    /// Output file for `dump-structure`.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            subcommand: Subcommand::Compute,
            structure: StructureSpec::Flat,
            grid: 8,
            tol_zero: 1e-8,
            tol_solve: 1e-10,
            complex: false,
            threads: None,
            deterministic: false,
            count: 20,
            json: None,
            spectra: None,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn solver(&self) -> SolverConfig {
        SolverConfig { tol_zero: self.tol_zero, tol_solve: self.tol_solve, ..SolverConfig::default() }
    }

    pub fn verify(&self) -> VerifyConfig {
        let residual_tol = match self.structure {
            StructureSpec::Flat => 1e-10,
            StructureSpec::Perturbed { .. } => 1e-7,
        };
        VerifyConfig { solver: self.solver(), residual_tol, ..VerifyConfig::default() }
    }

    /// Residual bound for refined self-dual decompositions on the configured structure.
    pub fn selfdual_tol(&self) -> f64 {
        match self.structure {
            StructureSpec::Flat => 1e-8,
            StructureSpec::Perturbed { .. } => 1e-7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        crate::transverse_geometry::check_grid(self.grid)?;
        if !(self.tol_zero > 0.0 && self.tol_solve > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if let StructureSpec::Perturbed { amplitude, mode_cutoff, .. } = self.structure {
            if amplitude < 0.0 || !amplitude.is_finite() {
                return Err(Error::InvalidParameter(format!("amplitude {amplitude}")));
            }
            if 2 * mode_cutoff >= self.grid {
                return Err(Error::InvalidParameter(format!("mode cutoff {mode_cutoff} too large for grid {}", self.grid)));
            }
        }
        Ok(())
    }
}

pub fn build_structure(cfg: &RunConfig) -> Result<StructureField> {
    match cfg.structure {
        StructureSpec::Flat => make_flat_structure(cfg.grid),
        StructureSpec::Perturbed { seed, amplitude, mode_cutoff } => {
            make_perturbed_structure(cfg.grid, seed, amplitude, mode_cutoff)
        }
    }
}

/// Exit code for an error escaping a subcommand.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NoConvergence { .. } => EXIT_SOLVER,
        Error::AmbiguousNullspace { .. } => EXIT_INCONCLUSIVE,
        Error::InvalidGrid(_) | Error::InvalidParameter(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

pub fn exit_code_for_verdict(v: Verdict) -> i32 {
    match v {
        Verdict::Pass | Verdict::Observation => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Timing metadata, omitted in deterministic mode.
#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub unix_time: u64,
    pub elapsed_seconds: f64,
}

fn meta(cfg: &RunConfig, start: Instant) -> Option<RunMeta> {
    (!cfg.deterministic).then(|| RunMeta {
        unix_time: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

// ---- pointwise --------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct PointwiseReport {
    pub schema_version: u32,
    pub identities: Vec<IdentityCheck>,
    pub all_pass: bool,
    pub failed: Vec<String>,
}

pub fn cmd_pointwise(json: Option<&Path>) -> Result<(i32, PointwiseReport)> {
    cmd_pointwise_with(&FiberOps::default(), json)
}

/// Same as [`cmd_pointwise`] with the fiber operators supplied by the caller.
pub fn cmd_pointwise_with(ops: &FiberOps, json: Option<&Path>) -> Result<(i32, PointwiseReport)> {
    let identities = pa::all_identities_with(ops);
    let failed: Vec<String> = identities.iter().filter(|c| !c.pass).map(|c| c.identity.clone()).collect();
    let report = PointwiseReport { schema_version: SCHEMA_VERSION, all_pass: failed.is_empty(), failed, identities };
    if let Some(p) = json {
        write_json(p, &report)?;
    }
    Ok((if report.all_pass { EXIT_PASS } else { EXIT_FAIL }, report))
}

// ---- compute ----------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct Certificates {
    pub betti_basic: Vec<f64>,
    pub h_phi_plus: Option<f64>,
    pub h_phi_minus: Option<f64>,
    pub z_phi_minus: Option<f64>,
    pub h11: Option<f64>,
    pub h20: Option<f64>,
    pub h02: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComputeReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub model: KContactModel,
    pub betti_basic: Vec<usize>,
    pub h_phi_plus: Option<usize>,
    pub h_phi_minus: Option<usize>,
    pub h11: Option<usize>,
    pub h20: Option<usize>,
    pub h02: Option<usize>,
    pub nijenhuis_max: f64,
    pub integrable: bool,
    /// Gap ratios backing each dimension above.
    pub certificates: Certificates,
    pub pureness_angle_deg: Option<f64>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub solver_stats: SolverStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<RunMeta>,
}

impl ComputeReport {
    fn from_decomposition(cfg: &RunConfig, model: KContactModel, d: &DecompositionReport, meta: Option<RunMeta>) -> Self {
        let v = |x: &Option<cohomology_decomp::CertifiedDim>| x.as_ref().map(|c| c.value);
        let r = |x: &Option<cohomology_decomp::CertifiedDim>| x.as_ref().map(|c| c.gap_ratio);
        Self {
            schema_version: SCHEMA_VERSION,
            config: cfg.clone(),
            model,
            betti_basic: d.betti_basic.iter().map(|c| c.value).collect(),
            h_phi_plus: v(&d.h_phi_plus),
            h_phi_minus: v(&d.h_phi_minus),
            h11: v(&d.h11),
            h20: v(&d.h20),
            h02: v(&d.h02),
            nijenhuis_max: d.nijenhuis_max,
            integrable: d.integrable,
            certificates: Certificates {
                betti_basic: d.betti_basic.iter().map(|c| c.gap_ratio).collect(),
                h_phi_plus: r(&d.h_phi_plus),
                h_phi_minus: r(&d.h_phi_minus),
                z_phi_minus: r(&d.z_phi_minus),
                h11: r(&d.h11),
                h20: r(&d.h20),
                h02: r(&d.h02),
            },
            pureness_angle_deg: d.pureness_angle_deg,
            checks: d.checks.clone(),
            verdict: d.overall(),
            solver_stats: d.solver_stats.clone(),
            error: None,
            meta,
        }
    }
}

/// Write `operator,index,eigenvalue` rows.
pub fn write_spectra_csv(path: &Path, spectra: &[Spectrum]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "operator,index,eigenvalue")?;
    for s in spectra {
        for (i, v) in s.values.iter().enumerate() {
            writeln!(w, "{},{},{:e}", s.label, i, v)?;
        }
    }
    Ok(())
}

/// Builds the structure, runs every certified computation and writes the
/// configured outputs. Solver failures become exit code 3 with the error in
/// the report.
pub fn cmd_compute(cfg: &RunConfig) -> Result<(i32, ComputeReport)> {
    cfg.validate()?;
    let start = Instant::now();
    let s = build_structure(cfg)?;
    let model = KContactModel::new(cfg.grid);
    let result = cohomology_decomp::decompose(&s, cfg.complex, &cfg.verify());
    let (code, report) = match result {
        Ok(d) => {
            if let Some(p) = &cfg.spectra {
                write_spectra_csv(p, &d.spectra)?;
            }
            let report = ComputeReport::from_decomposition(cfg, model, &d, meta(cfg, start));
            (exit_code_for_verdict(report.verdict), report)
        }
        Err(e) => {
            let code = exit_code_for(&e);
            let verdict = if code == EXIT_INCONCLUSIVE { Verdict::Inconclusive } else { Verdict::Fail };
            let empty = DecompositionReport {
                betti_basic: Vec::new(),
                h_phi_plus: None,
                h_phi_minus: None,
                z_phi_minus: None,
                h11: None,
                h20: None,
                h02: None,
                nijenhuis_max: crate::transverse_geometry::max_nijenhuis(&s),
                integrable: false,
                pureness_angle_deg: None,
                checks: Vec::new(),
                solver_stats: SolverStats::default(),
                spectra: Vec::new(),
            };
            let mut report = ComputeReport::from_decomposition(cfg, model, &empty, meta(cfg, start));
            report.verdict = verdict;
            report.error = Some(e.to_string());
            (code, report)
        }
    };
    if let Some(p) = &cfg.json {
        write_json(p, &report)?;
    }
    Ok((code, report))
}

// ---- lemma21 ----------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct SelfDualSamplesReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub tolerance: f64,
    pub rows: Vec<SelfDualResiduals>,
    pub max_residual: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<RunMeta>,
}

/// Random band-limited self-dual inputs (Fourier modes ≤ N/4) through the
/// refined decomposition.
pub fn cmd_selfdual_samples(cfg: &RunConfig) -> Result<(i32, SelfDualSamplesReport)> {
    cfg.validate()?;
    let start = Instant::now();
    let s = build_structure(cfg)?;
    let geo = FormGeometry::new(&s);
    let solver = cfg.solver();
    let tol = cfg.selfdual_tol();
    let mut rows = Vec::with_capacity(cfg.count);
    if cfg.count > 0 {
        let basis = hodge_solver::harmonic_basis(&geo, 2, &solver)?;
        let mut rng = ChaCha8Rng::seed_from_u64(solver.seed ^ 0x21);
        for _ in 0..cfg.count {
            let a = hodge_solver::random_self_dual(&geo, (cfg.grid / 4).max(1), &mut rng);
            rows.push(hodge_solver::refined_selfdual_decompose(&geo, &basis, &a, &solver)?);
        }
    }
    let max_residual = rows.iter().map(|r| r.max()).fold(0.0, f64::max);
    let verdict = if max_residual <= tol { Verdict::Pass } else { Verdict::Fail };
    let report = SelfDualSamplesReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        tolerance: tol,
        rows,
        max_residual,
        verdict,
        meta: meta(cfg, start),
    };
    if let Some(p) = &cfg.json {
        write_json(p, &report)?;
    }
    Ok((exit_code_for_verdict(verdict), report))
}

// ---- dump-structure ---------------------------------------------------------

pub fn cmd_dump_structure(cfg: &RunConfig) -> Result<i32> {
    cfg.validate()?;
    let s = build_structure(cfg)?;
    let path = cfg
        .output
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("dump-structure needs an output path".into()))?;
    let mut w = BufWriter::new(File::create(path)?);
    field_io::write_structure(&s, &mut w)?;
    w.flush()?;
    Ok(EXIT_PASS)
}

/// Run the configured subcommand in a thread pool of the configured size.
pub fn run(cfg: &RunConfig) -> i32 {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    pool.install(|| {
        let out = match cfg.subcommand {
            Subcommand::Pointwise => cmd_pointwise(cfg.json.as_deref()).map(|(code, r)| {
                for c in &r.identities {
                    println!("{} {}", if c.pass { "pass" } else { "FAIL" }, c.identity);
                }
                code
            }),
            Subcommand::Compute => cmd_compute(cfg).map(|(code, r)| {
                print_compute(&r);
                code
            }),
            Subcommand::Lemma21 => cmd_selfdual_samples(cfg).map(|(code, r)| {
                println!("samples {}  max residual {:.3e}  tolerance {:.0e}  {:?}", r.rows.len(), r.max_residual, r.tolerance, r.verdict);
                code
            }),
            Subcommand::DumpStructure => cmd_dump_structure(cfg),
        };
        out.unwrap_or_else(|e| {
            eprintln!("error: {e}");
            exit_code_for(&e)
        })
    })
}

fn print_compute(r: &ComputeReport) {
    let show = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    println!("betti_basic   {:?}", r.betti_basic);
    println!("h_phi_plus    {}", show(r.h_phi_plus));
    println!("h_phi_minus   {}", show(r.h_phi_minus));
    if r.config.complex {
        println!("h11 h20 h02   {} {} {}", show(r.h11), show(r.h20), show(r.h02));
    }
    println!("nijenhuis_max {:.3e}", r.nijenhuis_max);
    for c in &r.checks {
        println!("{:<14} {}", format!("{:?}", c.verdict).to_lowercase(), c.name);
    }
    if let Some(e) = &r.error {
        println!("error: {e}");
    }
    println!("verdict       {:?}", r.verdict);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn pointwise_passes_and_serializes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        let (code, report) = cmd_pointwise(Some(&path)).unwrap();
        assert_eq!(code, EXIT_PASS);
        assert!(report.identities.len() >= 10);
        let text = std::fs::read_to_string(&path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let found = v["identities"].as_array().unwrap().iter().any(|c| {
            c["identity"] == "Λ_Φ^+ = ℝω ⊕ Λ_g^-" && c["pass"] == true
        });
        assert!(found);
    }

    #[test]
    fn tampered_star_fails_naming_omega() {
        let mut ops = FiberOps::default();
        // swap the sign of e1 ↦ e2 so that *ω ≠ ω
        ops.star[(1, 0)] = q(-1);
        let (code, report) = cmd_pointwise_with(&ops, None).unwrap();
        assert_eq!(code, EXIT_FAIL);
        assert!(report.failed.iter().any(|n| n == "*̄ω = ω"));
    }

    #[test]
    fn bad_grid_is_usage_error() {
        let cfg = RunConfig { grid: 5, ..RunConfig::default() };
        let err = cmd_compute(&cfg).unwrap_err();
        assert_eq!(exit_code_for(&err), EXIT_USAGE);
    }

    #[test]
    fn selfdual_samples_with_zero_count() {
        let cfg = RunConfig { grid: 4, count: 0, subcommand: Subcommand::Lemma21, ..RunConfig::default() };
        let (code, r) = cmd_selfdual_samples(&cfg).unwrap();
        assert_eq!(code, EXIT_PASS);
        assert!(r.rows.is_empty());
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = RunConfig {
            structure: StructureSpec::Perturbed { seed: 1, amplitude: 0.3, mode_cutoff: 1 },
            complex: true,
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
    }
}
