//! Spectral exterior calculus on a perturbed structure: d∘d, adjointness of
//! the codifferential, and the two paths to the transverse star and Φ.

use kcontact_hodge::discrete_forms::{random_band_limited, FormGeometry};
use kcontact_hodge::pointwise_algebra::{phi_matrix, star_matrix};
use kcontact_hodge::transverse_geometry::make_perturbed_structure;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kcontact_hodge::Result<()> {
    let s = make_perturbed_structure(6, 3, 0.3, 1)?;
    let geo = FormGeometry::new(&s);
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    for p in 0..=2 {
        let a = random_band_limited(p, geo.grid(), 1, &mut rng);
        let b = random_band_limited(p + 1, geo.grid(), 1, &mut rng);
        let dd = geo.d(&geo.d(&a)?)?.max_abs();
        let lhs = geo.l2_inner(&geo.d(&a)?, &b)?;
        let rhs = geo.l2_inner(&a, &geo.codifferential(&b)?)?;
        println!("p={p}  |d d a| = {dd:.1e}   |<da,b> - <a,δb>| = {:.1e}", (lhs - rhs).norm());
    }

    let a = random_band_limited(2, geo.grid(), 1, &mut rng);
    let star = geo.apply_frame_operator(&a, &star_matrix().to_f64_6x6())?;
    let phi = geo.apply_frame_operator(&a, &phi_matrix().to_f64_6x6())?;
    println!("frame vs metric star: {:.1e}", star.sub(&geo.star_coord(&a)).max_abs());
    println!("frame vs J-pullback Φ: {:.1e}", phi.sub(&geo.phi_pullback(&a)?).max_abs());
    Ok(())
}
