//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs the full fleet (20 perturbed structures at N = 8, plus N = 12
//! dimension counts), so it takes a while on a single core.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use kcontact_hodge::cli_report::{cmd_selfdual_samples, RunConfig, StructureSpec, Subcommand};
use kcontact_hodge::cohomology_decomp::{decompose, CertifiedDim, DecompositionReport, Verdict, VerifyConfig};
use kcontact_hodge::discrete_forms::{random_band_limited, FormGeometry};
use kcontact_hodge::hodge_solver::{harmonic_dimension, SolverConfig};
use kcontact_hodge::pointwise_algebra::{all_identities_with, phi_matrix, star_matrix, FiberOps};
use kcontact_hodge::transverse_geometry::{make_flat_structure, make_perturbed_structure, StructureField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEEDS: std::ops::RangeInclusive<u64> = 1..=20;
const AMPLITUDE: f64 = 0.3;
const GAP: f64 = 100.0;

/// Everything computed once per structure.
struct Run {
    label: String,
    report: DecompositionReport,
    elapsed: Duration,
    selfdual_max: f64,
    dual_path: f64,
    dd: f64,
    adjoint: f64,
    dims_n12: Result<Vec<usize>, String>,
}

fn dim(d: &Option<CertifiedDim>) -> usize {
    d.as_ref().map_or(usize::MAX, |d| d.value)
}

fn betti(r: &DecompositionReport) -> Vec<usize> {
    r.betti_basic.iter().map(|d| d.value).collect()
}

fn structure_n(s: &StructureSpec, n: usize) -> StructureField {
    match *s {
        StructureSpec::Flat => make_flat_structure(n).unwrap(),
        StructureSpec::Perturbed { seed, amplitude, mode_cutoff } => {
            make_perturbed_structure(n, seed, amplitude, mode_cutoff).unwrap()
        }
    }
}

/// Frame path (adapted coframe + exact fiber matrices) against the metric
/// star and J-pullback, at 100 random nodes.
fn dual_path(geo: &FormGeometry, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_band_limited(2, geo.grid(), 2, &mut rng);
    let star_f = geo.apply_frame_operator(&a, &star_matrix().to_f64_6x6()).unwrap();
    let phi_f = geo.apply_frame_operator(&a, &phi_matrix().to_f64_6x6()).unwrap();
    let star_c = geo.star_coord(&a);
    let phi_c = geo.phi_pullback(&a).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = rng.gen_range(0..geo.nodes());
        for (x, y) in [(&star_f, &star_c), (&phi_f, &phi_c)] {
            let d = x.at(p).iter().zip(y.at(p)).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
            worst = worst.max(d);
        }
    }
    worst
}

/// Relative `d∘d` and `⟨da, b⟩ − ⟨a, δb⟩` residuals over degrees 0..3.
fn calculus_residuals(geo: &FormGeometry, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut dd, mut adj) = (0.0f64, 0.0f64);
    for p in 0..4 {
        let a = random_band_limited(p, geo.grid(), 2, &mut rng);
        let b = random_band_limited(p + 1, geo.grid(), 2, &mut rng);
        let da = geo.d(&a).unwrap();
        if p < 3 {
            dd = dd.max(geo.d(&da).unwrap().max_abs() / da.max_abs());
        }
        let lhs = geo.l2_inner(&da, &b).unwrap();
        let rhs = geo.l2_inner(&a, &geo.codifferential(&b).unwrap()).unwrap();
        adj = adj.max((lhs - rhs).norm() / (geo.l2_norm(&da) * geo.l2_norm(&b)));
    }
    (dd, adj)
}

fn run_structure(label: String, spec: StructureSpec, residual_tol: f64) -> Run {
    let s = structure_n(&spec, 8);
    let cfg = VerifyConfig { residual_tol, ..VerifyConfig::default() };
    let start = Instant::now();
    let report = decompose(&s, true, &cfg).unwrap_or_else(|e| panic!("{label}: {e}"));
    let elapsed = start.elapsed();

    let rc = RunConfig { subcommand: Subcommand::Lemma21, structure: spec.clone(), grid: 8, count: 20, ..RunConfig::default() };
    let (_, sd) = cmd_selfdual_samples(&rc).unwrap_or_else(|e| panic!("{label}: {e}"));

    let geo = FormGeometry::new(&s);
    let dual = dual_path(&geo, 99);
    let (dd, adjoint) = calculus_residuals(&geo, 77);
    drop(geo);

    let geo12 = FormGeometry::new(&structure_n(&spec, 12));
    let solver = SolverConfig::default();
    let dims_n12 = (0..3)
        .map(|p| harmonic_dimension(&geo12, p, &solver).map(|c| c.dimension))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string());
    let run = Run { label, report, elapsed, selfdual_max: sd.max_residual, dual_path: dual, dd, adjoint, dims_n12 };
    eprintln!(
        "  [{}] decompose {:.1}s  b {:?}  h± {} {}  N=12 {:?}",
        run.label,
        run.elapsed.as_secs_f64(),
        betti(&run.report),
        dim(&run.report.h_phi_plus),
        dim(&run.report.h_phi_minus),
        run.dims_n12
    );
    run
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion1() -> Outcome {
    let checks = all_identities_with(&FiberOps::default());
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.identity.as_str()).collect();
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_kcontact")).arg("pointwise").output().expect("run kcontact");
    let secs = start.elapsed().as_secs_f64();
    let ok = failed.is_empty() && status.status.code() == Some(0) && secs < 1.0;
    outcome(ok, format!("{} identities, failed {:?}, `pointwise` exit {:?} in {secs:.3}s", checks.len(), failed, status.status.code()))
}

fn criterion2(flat: &Run) -> Outcome {
    let r = &flat.report;
    let dims = (betti(r), dim(&r.h_phi_plus), dim(&r.h_phi_minus), dim(&r.h11), dim(&r.h20), dim(&r.h02));
    // constant-form oracle on T⁴: b_p = C(4,p); Φ-invariant = (1,1) classes; h^{p,q} = C(2,p)C(2,q)
    let want = (vec![1, 4, 6], 4, 2, 4, 1, 1);
    let mut gaps: Vec<f64> = r.betti_basic.iter().map(|d| d.gap_ratio).collect();
    for d in [&r.h_phi_plus, &r.h_phi_minus, &r.z_phi_minus, &r.h11, &r.h20, &r.h02].into_iter().flatten() {
        gaps.push(d.gap_ratio);
    }
    gaps.extend(r.solver_stats.eigensolves.iter().map(|e| e.gap_ratio));
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let secs = flat.elapsed.as_secs_f64();
    let ok = dims == want && min_gap >= GAP && secs < 120.0;
    outcome(ok, format!("dims {dims:?}, smallest gap ratio {min_gap:.2e}, {secs:.1}s single-threaded"))
}

fn criterion3(fleet: &[Run]) -> Outcome {
    let mut bad = Vec::new();
    let mut slowest = 0.0f64;
    let mut smallest_angle = f64::INFINITY;
    for run in fleet {
        let r = &run.report;
        let b2 = betti(r).get(2).copied().unwrap_or(usize::MAX);
        let full = dim(&r.h_phi_plus).saturating_add(dim(&r.h_phi_minus));
        let angle = r.pureness_angle_deg.unwrap_or(f64::NAN);
        let two_ways = r.check("h_phi_minus_two_ways").map(|c| c.verdict) == Some(Verdict::Pass);
        slowest = slowest.max(run.elapsed.as_secs_f64());
        smallest_angle = smallest_angle.min(angle);
        if b2 != 6 || full != 6 || !(angle >= 10.0) || !two_ways || run.elapsed.as_secs() >= 300 {
            bad.push(format!("{} (b2 {b2}, h+ + h- {full}, angle {angle:.1}, two-ways {two_ways})", run.label));
        }
    }
    let minus: Vec<usize> = fleet.iter().map(|r| dim(&r.report.h_phi_minus)).collect();
    outcome(
        bad.is_empty(),
        format!("{} structures, h_Φ^- {minus:?}, smallest angle {smallest_angle:.1}°, slowest {slowest:.0}s, failing {bad:?}", fleet.len()),
    )
}

fn criterion4(flat: &Run, fleet: &[Run]) -> Outcome {
    let name = "anti_invariant_selfdual_coclosed_omega_orthogonal";
    let residual = |r: &Run| r.report.check(name).and_then(|c| c.residual).unwrap_or(0.0);
    let verdict_ok = |r: &Run| r.report.check(name).map(|c| c.verdict) == Some(Verdict::Pass);
    let flat_res = residual(flat);
    let fleet_res = fleet.iter().map(residual).fold(0.0, f64::max);
    let vectors: usize = fleet.iter().map(|r| dim(&r.report.z_phi_minus)).sum();
    let ok = flat_res <= 1e-10 && verdict_ok(flat) && fleet_res <= 1e-7 && fleet.iter().all(verdict_ok);
    outcome(ok, format!("flat max residual {flat_res:.1e} (≤ 1e-10), fleet max {fleet_res:.1e} (≤ 1e-7) over {vectors} fleet basis vectors"))
}

fn criterion5(flat: &Run, fleet: &[Run]) -> Outcome {
    let fleet_max = fleet.iter().map(|r| r.selfdual_max).fold(0.0, f64::max);
    let ok = flat.selfdual_max <= 1e-8 && fleet_max <= 1e-7;
    outcome(ok, format!("20 inputs per structure: flat max {:.1e} (≤ 1e-8), fleet max {fleet_max:.1e} (≤ 1e-7)", flat.selfdual_max))
}

fn criterion6(flat: &Run, fleet: &[Run]) -> Outcome {
    let r = &flat.report;
    let pass = |r: &DecompositionReport, n: &str| r.check(n).map(|c| c.verdict) == Some(Verdict::Pass);
    let flat_ok = dim(&r.h11) + dim(&r.h20) + dim(&r.h02) == 6
        && dim(&r.h11) == dim(&r.h_phi_plus)
        && pass(r, "complex_fullness")
        && pass(r, "h11_equals_h_phi_plus")
        && pass(r, "h20_plus_h02_equals_h_phi_minus");
    let asym: Vec<&str> = fleet
        .iter()
        .filter(|x| dim(&x.report.h20) != dim(&x.report.h02) || !pass(&x.report, "conjugation_symmetry"))
        .map(|x| x.label.as_str())
        .collect();
    outcome(
        flat_ok && asym.is_empty() && pass(r, "conjugation_symmetry"),
        format!("flat (h11, h20, h02) = ({}, {}, {}), h_Φ^+ = {}; asymmetric fleet structures {asym:?}", dim(&r.h11), dim(&r.h20), dim(&r.h02), dim(&r.h_phi_plus)),
    )
}

fn criterion7(all: &[&Run]) -> Outcome {
    let worst = all.iter().map(|r| r.dual_path).fold(0.0, f64::max);
    outcome(worst <= 1e-10, format!("max frame/coordinate discrepancy {worst:.1e} over {} structures × 100 nodes", all.len()))
}

fn criterion8(all: &[&Run]) -> Outcome {
    let dd = all.iter().map(|r| r.dd).fold(0.0, f64::max);
    let adj = all.iter().map(|r| r.adjoint).fold(0.0, f64::max);
    let mismatched: Vec<String> = all
        .iter()
        .filter(|r| r.dims_n12.as_ref().map_or(true, |d| *d != betti(&r.report)))
        .map(|r| format!("{}: N=8 {:?} vs N=12 {:?}", r.label, betti(&r.report), r.dims_n12))
        .collect();
    outcome(
        dd <= 1e-10 && adj <= 1e-10 && mismatched.is_empty(),
        format!("d∘d {dd:.1e}, adjointness {adj:.1e}, N=8 vs N=12 mismatches {mismatched:?}"),
    )
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(o) => o,
        Err(e) => {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        }
    }
}

fn main() {
    let total = Instant::now();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "exact fiberwise identities", guarded(criterion1)));

    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("thread pool");
    let flat = catch_unwind(AssertUnwindSafe(|| single.install(|| run_structure("flat".into(), StructureSpec::Flat, 1e-10))));
    let fleet: Vec<Option<Run>> = SEEDS
        .map(|seed| {
            let spec = StructureSpec::Perturbed { seed, amplitude: AMPLITUDE, mode_cutoff: 1 };
            catch_unwind(AssertUnwindSafe(|| run_structure(format!("seed {seed}"), spec, 1e-7))).ok()
        })
        .collect();
    let failed_runs: Vec<u64> = SEEDS.zip(&fleet).filter(|(_, r)| r.is_none()).map(|(s, _)| s).collect();
    let fleet: Vec<Run> = fleet.into_iter().flatten().collect();

    match &flat {
        Ok(flat) => {
            let mut all: Vec<&Run> = vec![flat];
            all.extend(fleet.iter());
            let fleet_guard = |o: Outcome| {
                if failed_runs.is_empty() {
                    o
                } else {
                    outcome(false, format!("structures {failed_runs:?} errored; {}", o.detail))
                }
            };
            results.push((2, "flat model dimensions and gaps", guarded(|| criterion2(flat))));
            results.push((3, "Φ-decomposition fleet", fleet_guard(guarded(|| criterion3(&fleet)))));
            results.push((4, "closed anti-invariant forms", fleet_guard(guarded(|| criterion4(flat, &fleet)))));
            results.push((5, "refined self-dual decomposition", fleet_guard(guarded(|| criterion5(flat, &fleet)))));
            results.push((6, "complex suite", fleet_guard(guarded(|| criterion6(flat, &fleet)))));
            results.push((7, "dual-path consistency", fleet_guard(guarded(|| criterion7(&all)))));
            results.push((8, "discretization sanity", fleet_guard(guarded(|| criterion8(&all)))));
        }
        Err(_) => {
            for (k, name) in [(2, "flat model dimensions and gaps"), (4, "closed anti-invariant forms"), (5, "refined self-dual decomposition"), (6, "complex suite"), (7, "dual-path consistency"), (8, "discretization sanity")] {
                results.push((k, name, outcome(false, "flat run errored")));
            }
            results.push((3, "Φ-decomposition fleet", guarded(|| criterion3(&fleet))));
            results.sort_by_key(|r| r.0);
        }
    }

    println!();
    for (k, name, o) in &results {
        println!("criterion {k} {:<4} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!("acceptance: {} passed, {failed} failed in {:.0}s", results.len() - failed, total.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
