//! Fiberwise identities of the transverse 2-form algebra in exact arithmetic.

use kcontact_hodge::pointwise_algebra::{all_identities_with, intersection, subspace_dim, FiberOps, Projector};

fn main() {
    for which in [Projector::PhiInvariant, Projector::PhiAntiInvariant, Projector::SelfDual, Projector::AntiSelfDual] {
        println!("dim {:<4} = {}", which.label(), subspace_dim(which));
    }
    let cap = intersection(Projector::PhiInvariant, Projector::SelfDual);
    println!("Λ_Φ^+ ∩ Λ_g^+ spanned by {:?}", cap.iter().map(|f| f.to_f64()).collect::<Vec<_>>());

    let checks = all_identities_with(&FiberOps::default());
    for c in &checks {
        println!("{:5} {}  ({})", if c.pass { "ok" } else { "FAIL" }, c.identity, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("{} identities, {} failed", checks.len(), failed);
}
