use kcontact_hodge::discrete_forms::{random_band_limited, FormField, FormGeometry, C64};
use kcontact_hodge::field_io::{read_form, write_form};
use kcontact_hodge::linalg::GapCertificate;
use kcontact_hodge::pointwise_algebra::{phi_act2, project, star2, FrameForm2, Projector};
use kcontact_hodge::transverse_geometry::make_perturbed_structure;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn geometry(seed: u64, amplitude: f64) -> FormGeometry {
    FormGeometry::new(&make_perturbed_structure(4, seed, amplitude, 1).unwrap())
}

fn random_form(geo: &FormGeometry, degree: usize, seed: u64) -> FormField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let re = random_band_limited(degree, geo.grid(), 1, &mut rng);
    let im = random_band_limited(degree, geo.grid(), 1, &mut rng);
    re.add(&im.scale(C64::new(0.0, 1.0)))
}

fn rational_form() -> impl Strategy<Value = FrameForm2> {
    prop::array::uniform6((-20i64..20, 1i64..9)).prop_map(|c| {
        let v: Vec<Rational64> = c.iter().map(|&(n, d)| Rational64::new(n, d)).collect();
        FrameForm2::from_slice(&v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fiber_projectors_split_exactly(a in rational_form()) {
        for (p, q) in [(Projector::SelfDual, Projector::AntiSelfDual), (Projector::PhiInvariant, Projector::PhiAntiInvariant)] {
            let (ap, aq) = (project(&a, p), project(&a, q));
            let sum: Vec<Rational64> = ap.to_vec().iter().zip(aq.to_vec()).map(|(x, y)| x + y).collect();
            prop_assert_eq!(sum, a.to_vec());
            prop_assert_eq!(project(&ap, p), ap);
        }
        prop_assert_eq!(star2(&star2(&a)), a);
        prop_assert_eq!(phi_act2(&phi_act2(&a)), a);
        prop_assert_eq!(star2(&phi_act2(&a)), phi_act2(&star2(&a)));
        // Φ-anti-invariant forms are self-dual
        let anti = project(&a, Projector::PhiAntiInvariant);
        prop_assert_eq!(star2(&anti), anti);
    }

    #[test]
    fn d_squared_vanishes(seed in 0u64..1000, degree in 0usize..3) {
        let geo = geometry(seed % 7 + 1, 0.3);
        let a = random_form(&geo, degree, seed);
        let dd = geo.d(&geo.d(&a).unwrap()).unwrap();
        prop_assert!(dd.max_abs() <= 1e-12 * a.max_abs().max(1.0));
    }

    #[test]
    fn codifferential_is_l2_adjoint(seed in 0u64..1000, degree in 0usize..4) {
        let geo = geometry(seed % 5 + 1, 0.3);
        let a = random_form(&geo, degree, seed);
        let b = random_form(&geo, degree + 1, seed + 1);
        let lhs = geo.l2_inner(&geo.d(&a).unwrap(), &b).unwrap();
        let rhs = geo.l2_inner(&a, &geo.codifferential(&b).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * geo.l2_norm(&a).max(1.0) * geo.l2_norm(&b).max(1.0));
    }

    #[test]
    fn star_and_phi_are_commuting_isometric_involutions(seed in 0u64..1000) {
        let geo = geometry(seed % 5 + 1, 0.3);
        let a = random_form(&geo, 2, seed);
        let sa = geo.star_coord(&a);
        let pa = geo.phi_pullback(&a).unwrap();
        prop_assert!(geo.star_coord(&sa).sub(&a).max_abs() < 1e-11);
        prop_assert!(geo.phi_pullback(&pa).unwrap().sub(&a).max_abs() < 1e-11);
        prop_assert!(geo.phi_pullback(&sa).unwrap().sub(&geo.star_coord(&pa)).max_abs() < 1e-11);
        let n = geo.l2_norm(&a);
        prop_assert!((geo.l2_norm(&sa) - n).abs() < 1e-11 * n);
        prop_assert!((geo.l2_norm(&pa) - n).abs() < 1e-11 * n);
    }

    #[test]
    fn bidegree_parts_reassemble_and_conjugate(seed in 0u64..1000) {
        let geo = geometry(seed % 5 + 1, 0.3);
        let a = random_form(&geo, 2, seed);
        let parts: Vec<FormField> = [(2, 0), (1, 1), (0, 2)].iter().map(|&b| geo.bidegree_project_field(&a, b).unwrap()).collect();
        prop_assert!(parts[0].add(&parts[1]).add(&parts[2]).sub(&a).max_abs() < 1e-11);
        let conj20 = geo.bidegree_project_field(&a.conj(), (0, 2)).unwrap();
        prop_assert!(conj20.sub(&parts[0].conj()).max_abs() < 1e-11);
    }

    #[test]
    fn phi_invariant_part_is_bidegree_11(seed in 0u64..1000) {
        let geo = geometry(seed % 5 + 1, 0.3);
        let a = random_form(&geo, 2, seed);
        let plus = geo.project_field(&a, Projector::PhiInvariant).unwrap();
        prop_assert!(geo.bidegree_project_field(&plus, (1, 1)).unwrap().sub(&plus).max_abs() < 1e-11);
    }

    #[test]
    fn form_files_round_trip(seed in 0u64..1000, degree in 0usize..5) {
        let geo = geometry(1, 0.0);
        let a = random_form(&geo, degree, seed);
        let mut buf = Vec::new();
        write_form(&a, &mut buf).unwrap();
        prop_assert_eq!(read_form(&mut buf.as_slice()).unwrap(), a);
    }

    #[test]
    fn gap_dimension_is_stable_under_threshold_rescaling(k in 0usize..6, small in -16.0f64..-12.0, big in -1.0f64..1.0) {
        let mut vals: Vec<f64> = (0..k).map(|i| 10f64.powf(small) * (i + 1) as f64).collect();
        vals.extend((0..3).map(|i| 10f64.powf(big) * (i + 1) as f64));
        let base = GapCertificate::from_sorted(&vals, 1e-8, f64::EPSILON);
        prop_assert!(base.certified());
        for tol in [1e-9, 1e-7] {
            prop_assert_eq!(GapCertificate::from_sorted(&vals, tol, f64::EPSILON).dimension, base.dimension);
        }
        prop_assert_eq!(base.dimension, k);
    }
}
