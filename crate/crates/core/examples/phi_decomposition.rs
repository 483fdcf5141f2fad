//! Φ-invariant / anti-invariant decomposition of basic H² with all checks,
//! on the flat model and one perturbed structure.

use kcontact_hodge::cohomology_decomp::{decompose, VerifyConfig};
use kcontact_hodge::transverse_geometry::{make_flat_structure, make_perturbed_structure};

fn main() -> kcontact_hodge::Result<()> {
    let perturbed = VerifyConfig { residual_tol: 1e-7, ..VerifyConfig::default() };
    let flat = VerifyConfig { residual_tol: 1e-10, ..VerifyConfig::default() };
    for (name, s, cfg) in [
        ("flat", make_flat_structure(6)?, flat),
        ("perturbed seed 4", make_perturbed_structure(6, 4, 0.3, 1)?, perturbed),
    ] {
        let r = decompose(&s, true, &cfg)?;
        let dim = |d: &Option<kcontact_hodge::cohomology_decomp::CertifiedDim>| d.as_ref().map_or(-1, |d| d.value as i64);
        println!("{name}: b = {:?}", r.betti_basic.iter().map(|d| d.value).collect::<Vec<_>>());
        println!("  h_Φ^+ {}  h_Φ^- {}  h11 {} h20 {} h02 {}", dim(&r.h_phi_plus), dim(&r.h_phi_minus), dim(&r.h11), dim(&r.h20), dim(&r.h02));
        println!("  N_J max {:.2e}  smallest angle {:?}", r.nijenhuis_max, r.pureness_angle_deg);
        for c in &r.checks {
            println!("  {:<13} {}", format!("{:?}", c.verdict), c.name);
        }
    }
    Ok(())
}
