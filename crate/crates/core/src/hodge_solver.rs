//! Basic Laplacian, certified harmonic bases and the Hodge decomposition.
//!
//! The Laplacian `Δ = dδ + δd` is built from the discrete adjoint `δ`, so
//! `M·Δ = dᴴ M d + (M d) M⁻¹ (M d)ᴴ` is Hermitian positive semidefinite in
//! the coefficient inner product. Eigensolves work with the pencil
//! `(M·Δ, M)`; linear solves with `M·Δ` deflated against the harmonic basis.

use rand::Rng;
use serde::Serialize;

use crate::discrete_forms::{random_band_limited, FormField, FormGeometry, C64};
use crate::exterior::rank;
use crate::linalg::{self, CVec, CgStats, GapCertificate, LobpcgConfig};
use crate::pointwise_algebra::Projector;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SolverConfig {
    /// Eigenvalues below this count as zero modes.
    pub tol_zero: f64,
    /// Relative residual for linear solves.
    pub tol_solve: f64,
    pub max_iter_eig: usize,
    pub max_iter_cg: usize,
    /// Block columns beyond the expected kernel dimension.
    pub extra_block: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol_zero: 1e-8, tol_solve: 1e-10, max_iter_eig: 600, max_iter_cg: 3000, extra_block: 4, seed: 0x5eed }
    }
}

impl SolverConfig {
    pub fn eig_tol(&self) -> f64 {
        (0.1 * self.tol_zero).min(1e-11)
    }
}

/// `Δa = dδa + δda`.
pub fn laplacian_apply(geo: &FormGeometry, a: &FormField) -> Result<FormField> {
    let p = a.degree();
    let mut out = FormField::zeros(p, a.n());
    if p >= 1 {
        out = out.add(&geo.d(&geo.codifferential(a)?)?);
    }
    if p <= 3 {
        out = out.add(&geo.codifferential(&geo.d(a)?)?);
    }
    Ok(out)
}

/// `M·Δa`, Hermitian in coefficient space.
pub fn mass_laplacian(geo: &FormGeometry, a: &FormField) -> FormField {
    let p = a.degree();
    let mut out = FormField::zeros(p, a.n());
    if p <= 3 {
        let mda = geo.mass(&geo.d(a).expect("degree ≤ 3"));
        out = out.add(&geo.d_adjoint_euclidean(&mda).expect("degree ≥ 1"));
    }
    if p >= 1 {
        let t = geo.mass_inv(&geo.d_adjoint_euclidean(&geo.mass(a)).expect("degree ≥ 1"));
        out = out.add(&geo.mass(&geo.d(&t).expect("degree ≤ 3")));
    }
    out
}

/// Relative residual required of the first eigenpair above the kernel. A
/// relative residual ρ places an eigenvalue within ρ·θ of the Ritz value θ,
/// which is all the gap certificate needs.
pub const GAP_RESIDUAL_TOL: f64 = 0.05;

/// Componentwise Fourier preconditioner `(|k|² + 1)⁻¹`, divided by the mean
/// node weight so that it approximates `(M·Δ + M)⁻¹` on the flat torus.
pub fn fourier_preconditioner(geo: &FormGeometry, x: &FormField) -> FormField {
    let grid = geo.grid();
    let nodes = grid.nodes();
    let w = (0..nodes).map(|p| geo.weight(p)).sum::<f64>() / nodes as f64;
    let symbol: Vec<f64> = (0..nodes).map(|p| 1.0 / ((grid.wavenumber_sq(p) + 1.0) * w)).collect();
    let mut data = Vec::with_capacity(x.data().len());
    for c in 0..x.components() {
        let mut h = x.component(c).to_vec();
        grid.fft(&mut h);
        for (v, s) in h.iter_mut().zip(&symbol) {
            *v *= *s;
        }
        grid.ifft(&mut h);
        data.extend(h);
    }
    FormField::from_data(x.degree(), x.n(), data)
}

fn wrap(degree: usize, n: usize, x: &[C64]) -> FormField {
    FormField::from_data(degree, n, x.to_vec())
}

/// Orthonormal basis of harmonic p-forms with its gap certificate.
#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    pub degree: usize,
    /// `⟨h_i, h_j⟩ = δ_ij` in the L² product.
    pub vectors: Vec<FormField>,
    /// All computed Ritz values (ascending); the first `dim()` are zero modes.
    pub spectrum: Vec<f64>,
    pub certificate: GapCertificate,
    pub restricted: Option<Projector>,
    pub tol_zero: f64,
    pub iterations: usize,
}

impl HarmonicBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn require_certified(&self) -> Result<()> {
        self.certificate.require(&format!("harmonic {}-forms", self.degree))
    }

    /// Coefficients `⟨h_i, a⟩` and the orthogonal projection `Σ h_i⟨h_i, a⟩`.
    pub fn project(&self, geo: &FormGeometry, a: &FormField) -> Result<(Vec<C64>, FormField)> {
        let mut out = FormField::zeros(a.degree(), a.n());
        let mut coeffs = Vec::with_capacity(self.dim());
        for h in &self.vectors {
            let c = geo.l2_inner(h, a)?;
            out.axpy(c, h);
            coeffs.push(c);
        }
        Ok((coeffs, out))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenStats {
    pub degree: usize,
    pub restricted: Option<&'static str>,
    pub block: usize,
    pub iterations: usize,
    pub dimension: usize,
    pub gap_ratio: f64,
}

impl From<&HarmonicBasis> for EigenStats {
    fn from(h: &HarmonicBasis) -> Self {
        Self {
            degree: h.degree,
            restricted: h.restricted.map(|p| p.label()),
            block: h.spectrum.len(),
            iterations: h.iterations,
            dimension: h.dim(),
            gap_ratio: h.certificate.ratio,
        }
    }
}

/// Harmonic p-forms as the kernel of `Δ`.
///
/// Fails with `AmbiguousNullspace` when the gap certificate is below 100.
pub fn harmonic_basis(geo: &FormGeometry, p: usize, cfg: &SolverConfig) -> Result<HarmonicBasis> {
    let basis = harmonic_basis_uncertified(geo, p, None, cfg)?;
    basis.require_certified()?;
    Ok(basis)
}

/// Harmonic self-dual (`g+`) or anti-self-dual (`g−`) 2-forms, computed by an
/// eigensolve restricted to the corresponding pointwise subbundle.
pub fn harmonic_basis_restricted(geo: &FormGeometry, which: Projector, cfg: &SolverConfig) -> Result<HarmonicBasis> {
    if !matches!(which, Projector::SelfDual | Projector::AntiSelfDual) {
        return Err(Error::InvalidParameter(format!("restricted eigensolve needs g+ or g−, got {}", which.label())));
    }
    let basis = harmonic_basis_uncertified(geo, 2, Some(which), cfg)?;
    basis.require_certified()?;
    Ok(basis)
}

/// Same as [`harmonic_basis`] but returns ambiguous results instead of failing.
pub fn harmonic_basis_uncertified(
    geo: &FormGeometry,
    p: usize,
    restrict: Option<Projector>,
    cfg: &SolverConfig,
) -> Result<HarmonicBasis> {
    harmonic_solve(geo, p, restrict, cfg, cfg.eig_tol())
}

/// Certified dimension of the harmonic p-forms without accurate vectors.
///
/// Ritz values bound eigenvalues from above, so kernel pairs only need to
/// converge until their Ritz values sit well below `tol_zero`; the first
/// pair above the kernel is still resolved to [`GAP_RESIDUAL_TOL`].
pub fn harmonic_dimension(geo: &FormGeometry, p: usize, cfg: &SolverConfig) -> Result<GapCertificate> {
    let basis = harmonic_solve(geo, p, None, cfg, 0.01 * cfg.tol_zero.sqrt())?;
    basis.require_certified()?;
    Ok(basis.certificate)
}

fn harmonic_solve(
    geo: &FormGeometry,
    p: usize,
    restrict: Option<Projector>,
    cfg: &SolverConfig,
    kernel_tol: f64,
) -> Result<HarmonicBasis> {
    if p > 4 {
        return Err(Error::DegreeMismatch { expected: "≤ 4".into(), found: p });
    }
    let n = geo.n();
    let dim = rank(p) * geo.nodes();
    let a = |x: &[C64]| -> CVec { mass_laplacian(geo, &wrap(p, n, x)).into_data() };
    let b = |x: &[C64]| -> CVec { geo.mass(&wrap(p, n, x)).into_data() };
    let t = |x: &[C64]| -> CVec { fourier_preconditioner(geo, &wrap(p, n, x)).into_data() };
    let proj = move |x: &mut [C64]| {
        if let Some(which) = restrict {
            let y = geo.project_field(&wrap(2, n, x), which).expect("2-form");
            x.copy_from_slice(y.data());
        }
    };
    // flat-torus dimensions as the starting guess; grown if the block fills up
    let mut expected = match restrict {
        Some(_) => 3,
        None => rank(p),
    };
    loop {
        let lcfg = LobpcgConfig {
            block: expected + cfg.extra_block,
            tol: kernel_tol,
            tol_rest: GAP_RESIDUAL_TOL,
            kernel_threshold: cfg.tol_zero,
            max_iter: cfg.max_iter_eig,
            seed: cfg.seed ^ (p as u64) << 8,
        };
        let sol = linalg::lobpcg(dim, &a, &b, &t, restrict.map(|_| &proj as linalg::Proj), &lcfg)?;
        let converged = &sol.values[..lcfg.required(&sol.values)];
        let cert = GapCertificate::from_sorted(converged, cfg.tol_zero, f64::EPSILON);
        if cert.dimension >= converged.len() && expected < dim {
            expected += cfg.extra_block.max(1);
            continue;
        }
        let vectors = sol.vectors[..cert.dimension].iter().map(|v| wrap(p, n, v)).collect();
        return Ok(HarmonicBasis {
            degree: p,
            vectors,
            spectrum: sol.values,
            certificate: cert,
            restricted: restrict,
            tol_zero: cfg.tol_zero,
            iterations: sol.iterations,
        });
    }
}

/// Euclidean projector onto the complement of `span(vs)`.
pub(crate) fn deflator(vs: &[FormField]) -> impl Fn(&mut [C64]) + Sync {
    let mut q: Vec<CVec> = vs.iter().map(|v| v.data().to_vec()).collect();
    let id = |x: &[C64]| x.to_vec();
    linalg::b_orthonormalize(&mut q, &id);
    move |x: &mut [C64]| {
        for _ in 0..2 {
            for u in &q {
                let c = linalg::dot(u, x);
                linalg::axpy(x, -c, u);
            }
        }
    }
}

/// `a = harmonic + exact + coexact` with `exact = dθ`, `coexact = δΨ`.
#[derive(Clone, Debug)]
pub struct HodgeDecomposition {
    pub harmonic: FormField,
    pub exact: FormField,
    pub coexact: FormField,
    /// `θ = δu` where `Δu = a − a_h` (absent for 0-forms).
    pub theta: Option<FormField>,
    /// `Ψ = du` (absent for 4-forms).
    pub psi: Option<FormField>,
    pub stats: CgStats,
    /// `‖coexact − δΨ‖ / ‖a‖`, a posterior check of the Green solve.
    pub posterior: f64,
}

impl HodgeDecomposition {
    /// Largest pairwise |⟨·,·⟩| between the three parts, relative to `‖a‖²`.
    pub fn orthogonality_residual(&self, geo: &FormGeometry) -> Result<f64> {
        let total = self.harmonic.add(&self.exact).add(&self.coexact);
        let scale = geo.l2_norm(&total).powi(2).max(f64::MIN_POSITIVE);
        let pairs = [(&self.harmonic, &self.exact), (&self.harmonic, &self.coexact), (&self.exact, &self.coexact)];
        let mut worst: f64 = 0.0;
        for (x, y) in pairs {
            worst = worst.max(geo.l2_inner(x, y)?.norm() / scale);
        }
        Ok(worst)
    }
}

/// Green operator `G` on the orthogonal complement of the harmonic space:
/// returns `u ⟂ H` with `Δu = f` for `f ⟂ H`.
pub fn green_solve(geo: &FormGeometry, basis: &HarmonicBasis, f: &FormField, cfg: &SolverConfig) -> Result<(FormField, CgStats)> {
    let p = f.degree();
    let n = f.n();
    let a = |x: &[C64]| -> CVec { mass_laplacian(geo, &wrap(p, n, x)).into_data() };
    let t = |x: &[C64]| -> CVec { fourier_preconditioner(geo, &wrap(p, n, x)).into_data() };
    let defl = deflator(&basis.vectors);
    let rhs = geo.mass(f).into_data();
    let (u, stats) = linalg::pcg(&a, &rhs, &t, Some(&defl), cfg.tol_solve, cfg.max_iter_cg)?;
    Ok((wrap(p, n, &u), stats))
}

pub fn hodge_decompose(geo: &FormGeometry, basis: &HarmonicBasis, a: &FormField, cfg: &SolverConfig) -> Result<HodgeDecomposition> {
    basis.require_certified()?;
    if basis.degree != a.degree() {
        return Err(Error::DegreeMismatch { expected: basis.degree.to_string(), found: a.degree() });
    }
    let p = a.degree();
    let (_, harmonic) = basis.project(geo, a)?;
    let f = a.sub(&harmonic);
    let (u, stats) = green_solve(geo, basis, &f, cfg)?;
    let theta = if p >= 1 { Some(geo.codifferential(&u)?) } else { None };
    let psi = if p <= 3 { Some(geo.d(&u)?) } else { None };
    let exact = match &theta {
        Some(th) => geo.d(th)?,
        None => FormField::zeros(p, a.n()),
    };
    let coexact = f.sub(&exact);
    let direct = match &psi {
        Some(ps) => geo.codifferential(ps)?,
        None => FormField::zeros(p, a.n()),
    };
    let posterior = geo.l2_norm(&coexact.sub(&direct)) / geo.l2_norm(a).max(f64::MIN_POSITIVE);
    Ok(HodgeDecomposition { harmonic, exact, coexact, theta, psi, stats, posterior })
}

/// Residuals of the refined decomposition of a self-dual 2-form, each
/// relative to `‖a‖`.
#[derive(Clone, Debug, Serialize)]
pub struct SelfDualResiduals {
    /// `‖(dθ)⁺ − (δΨ)⁺‖`
    pub plus_parts_agree: f64,
    /// `‖(dθ)⁻ + (δΨ)⁻‖`
    pub minus_parts_cancel: f64,
    /// `‖a − 2(dθ)⁺ − a_h‖`
    pub harmonic_recovered: f64,
    /// `‖d(a + 2(dθ)⁻)‖`
    pub corrected_closed: f64,
    pub self_duality: f64,
    pub cg_iterations: usize,
}

impl SelfDualResiduals {
    pub fn max(&self) -> f64 {
        [self.plus_parts_agree, self.minus_parts_cancel, self.harmonic_recovered, self.corrected_closed]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub const SELF_DUAL_TOL: f64 = 1e-10;

pub fn refined_selfdual_decompose(
    geo: &FormGeometry,
    basis: &HarmonicBasis,
    a: &FormField,
    cfg: &SolverConfig,
) -> Result<SelfDualResiduals> {
    if a.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: "2".into(), found: a.degree() });
    }
    let norm = geo.l2_norm(a);
    if norm == 0.0 {
        return Err(Error::InvalidParameter("zero input".into()));
    }
    let self_duality = geo.l2_norm(&a.sub(&geo.star_coord(a))) / norm;
    if self_duality > SELF_DUAL_TOL {
        return Err(Error::NotSelfDual(self_duality));
    }
    let dec = hodge_decompose(geo, basis, a, cfg)?;
    let plus = |x: &FormField| geo.project_field(x, Projector::SelfDual);
    let minus = |x: &FormField| geo.project_field(x, Projector::AntiSelfDual);
    let (dt_p, dt_m) = (plus(&dec.exact)?, minus(&dec.exact)?);
    let (dp_p, dp_m) = (plus(&dec.coexact)?, minus(&dec.coexact)?);
    let r1 = geo.l2_norm(&dt_p.sub(&dp_p)) / norm;
    let r2 = geo.l2_norm(&dt_m.add(&dp_m)) / norm;
    let r3 = geo.l2_norm(&a.sub(&dt_p.scale_real(2.0)).sub(&dec.harmonic)) / norm;
    let closed = a.add(&dt_m.scale_real(2.0));
    let r4 = geo.l2_norm(&geo.d(&closed)?) / norm;
    Ok(SelfDualResiduals {
        plus_parts_agree: r1,
        minus_parts_cancel: r2,
        harmonic_recovered: r3,
        corrected_closed: r4,
        self_duality,
        cg_iterations: dec.stats.iterations,
    })
}

/// Real self-dual 2-form `P⁺a` for a random band-limited `a`.
pub fn random_self_dual(geo: &FormGeometry, max_mode: usize, rng: &mut impl Rng) -> FormField {
    let a = random_band_limited(2, geo.grid(), max_mode, rng);
    geo.project_field(&a, Projector::SelfDual).expect("2-form")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transverse_geometry::{make_flat_structure, make_perturbed_structure};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn flat(n: usize) -> FormGeometry {
        FormGeometry::new(&make_flat_structure(n).unwrap())
    }

    #[test]
    fn flat_laplacian_symbol() {
        let geo = flat(8);
        // e^{i x1} dx2∧dy2
        let a = FormField::from_fn(2, geo.grid(), |x, c| if c == 5 { C64::from_polar(1.0, x[0]) } else { C64::new(0.0, 0.0) });
        let la = laplacian_apply(&geo, &a).unwrap();
        assert!(la.sub(&a).max_abs() < 1e-12);
        assert!(laplacian_apply(&geo, &FormField::omega0(8)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn laplacian_is_self_adjoint_perturbed() {
        let s = make_perturbed_structure(6, 2, 0.3, 1).unwrap();
        let geo = FormGeometry::new(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in 0..=4 {
            let a = random_band_limited(p, geo.grid(), 2, &mut rng);
            let b = random_band_limited(p, geo.grid(), 2, &mut rng);
            let lhs = geo.l2_inner(&laplacian_apply(&geo, &a).unwrap(), &b).unwrap();
            let rhs = geo.l2_inner(&a, &laplacian_apply(&geo, &b).unwrap()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm(), "degree {p}");
            assert!(geo.l2_inner(&a, &laplacian_apply(&geo, &a).unwrap()).unwrap().re >= 0.0);
        }
    }

    #[test]
    fn flat_harmonic_dimensions() {
        let geo = flat(4);
        let cfg = SolverConfig::default();
        for (p, want) in [(0, 1), (1, 4), (2, 6)] {
            let h = harmonic_basis(&geo, p, &cfg).unwrap();
            assert_eq!(h.dim(), want, "degree {p}");
            // next eigenvalue is |k|² = 1; the Ritz value bounds it from above
            let next = h.spectrum[want];
            assert!(next > 1.0 - 1e-9 && next < 1.0 + GAP_RESIDUAL_TOL, "degree {p}: {next}");
        }
    }

    #[test]
    fn hodge_parts_are_orthogonal() {
        let geo = flat(4);
        let cfg = SolverConfig::default();
        let h = harmonic_basis(&geo, 2, &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_band_limited(2, geo.grid(), 1, &mut rng);
        let dec = hodge_decompose(&geo, &h, &a, &cfg).unwrap();
        assert!(dec.orthogonality_residual(&geo).unwrap() < 1e-8);
        assert!(dec.posterior < 1e-8);
        let back = dec.harmonic.add(&dec.exact).add(&dec.coexact);
        assert!(back.sub(&a).max_abs() < 1e-12);
    }

    #[test]
    fn omega_refined_residuals_vanish() {
        let geo = flat(4);
        let cfg = SolverConfig::default();
        let h = harmonic_basis(&geo, 2, &cfg).unwrap();
        let r = refined_selfdual_decompose(&geo, &h, &FormField::omega0(4), &cfg).unwrap();
        assert!(r.max() < 1e-9, "{r:?}");
        let anti = FormField::constant_real(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        assert!(matches!(refined_selfdual_decompose(&geo, &h, &anti, &cfg), Err(Error::NotSelfDual(_))));
    }
}
