//! Build the flat and a perturbed compatible structure and inspect them.

use kcontact_hodge::transverse_geometry::{make_flat_structure, make_perturbed_structure, max_nijenhuis};

fn main() -> kcontact_hodge::Result<()> {
    let flat = make_flat_structure(8)?;
    println!("flat: nodes {}  N_J max {:.2e}", flat.nodes(), max_nijenhuis(&flat));

    for amplitude in [0.05, 0.1, 0.3] {
        let s = make_perturbed_structure(8, 1, amplitude, 1)?;
        let r = s.residuals();
        println!(
            "amplitude {amplitude:<5} N_J max {:.3e}  min eig g {:.3}  J²+1 {:.1e}  ω-compat {:.1e}",
            max_nijenhuis(&s),
            r.min_g_eigenvalue,
            r.j_squared,
            r.omega_invariance,
        );
    }

    let s = make_perturbed_structure(8, 1, 0.3, 1)?;
    println!("J at node 0:{:.4}", s.j(0));
    println!("adapted coframe at node 0 (rows θ1, Φθ1, θ2, Φθ2):{:.4}", s.coframe(0));
    Ok(())
}
