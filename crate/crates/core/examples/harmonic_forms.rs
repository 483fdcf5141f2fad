//! Harmonic forms on the flat torus with gap certificates, and a Hodge
//! decomposition of a random 2-form.

use kcontact_hodge::discrete_forms::{random_band_limited, FormGeometry};
use kcontact_hodge::hodge_solver::{harmonic_basis, hodge_decompose, SolverConfig};
use kcontact_hodge::transverse_geometry::make_flat_structure;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kcontact_hodge::Result<()> {
    let geo = FormGeometry::new(&make_flat_structure(6)?);
    let cfg = SolverConfig::default();
    let mut bases = Vec::new();
    for p in 0..=2 {
        let h = harmonic_basis(&geo, p, &cfg)?;
        println!(
            "b{p} = {}  gap ratio {:.2e}  first nonzero eigenvalue {:.4}",
            h.dim(),
            h.certificate.ratio,
            h.spectrum[h.dim()]
        );
        bases.push(h);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = random_band_limited(2, geo.grid(), 1, &mut rng);
    let dec = hodge_decompose(&geo, &bases[2], &a, &cfg)?;
    println!(
        "|a| = {:.4}  |harmonic| = {:.4}  |exact| = {:.4}  |coexact| = {:.4}",
        geo.l2_norm(&a),
        geo.l2_norm(&dec.harmonic),
        geo.l2_norm(&dec.exact),
        geo.l2_norm(&dec.coexact)
    );
    println!("orthogonality {:.1e}  cg iterations {}", dec.orthogonality_residual(&geo)?, dec.stats.iterations);
    Ok(())
}
