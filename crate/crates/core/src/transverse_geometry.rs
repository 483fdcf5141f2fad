//! Model transverse geometries on the periodic 4-dimensional base.
//!
//! A regular K-contact 5-manifold fibers by Reeb circles over a symplectic
//! 4-manifold. Here the base is the torus `T⁴ = (ℝ/2πℤ)⁴` with coordinates
//! `(x1, y1, x2, y2)` and symplectic form `ω0 = dx1∧dy1 + dx2∧dy2`; the
//! contact form is a connection with `½dη = π*ω0` and fiber length 1. On the
//! contact distribution, `Φ` is the lift of an ω0-compatible almost complex
//! structure `J` and the transverse metric is `g = ω0(·, J·)`.

use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spectral::Grid;
use crate::{Error, Result};

/// Invariant residual tolerated when building a structure.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Minimum `g`-norm of the second frame candidate before falling back to `∂y2`.
pub const FRAME_FALLBACK_NORM: f64 = 1e-8;

/// Matrix of `ω0`: `ω0(X, Y) = Xᵀ Ω Y`.
pub fn omega0() -> Matrix4<f64> {
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, -1.0, 0.0,
    );
    m
}

/// Standard complex structure: `J0 ∂x_i = ∂y_i`, `J0 ∂y_i = −∂x_i`.
pub fn j0() -> Matrix4<f64> {
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0, -1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, 1.0, 0.0,
    );
    m
}

/// Descriptor of the regular K-contact model over the grid base.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct KContactModel {
    pub grid: usize,
    /// Length of the Reeb circle; fixed to 1 so `∫_M α∧η = ∫_base α`.
    pub fiber_length: f64,
    pub description: String,
}

impl KContactModel {
    pub fn new(grid: usize) -> Self {
        Self {
            grid,
            fiber_length: 1.0,
            description: "regular K-contact circle bundle over the flat symplectic 4-torus; \
                          ξ = fiber direction, ½dη = ω0, basic forms = base forms"
                .into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Flat,
    Perturbed { seed: u64, amplitude: f64, mode_cutoff: usize },
}

/// Discretized transverse geometry: `J`, `g` and the adapted frame at every node.
#[derive(Clone, Debug)]
pub struct StructureField {
    grid: Grid,
    provenance: Provenance,
    j: Vec<Matrix4<f64>>,
    g: Vec<Matrix4<f64>>,
    /// Columns `(e1, Φe1, e2, Φe2)` in coordinate components.
    frame: Vec<Matrix4<f64>>,
    /// Rows `(θ1, Φθ1, θ2, Φθ2)` in coordinate components; inverse of `frame`.
    coframe: Vec<Matrix4<f64>>,
}

impl StructureField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn j(&self, node: usize) -> &Matrix4<f64> {
        &self.j[node]
    }

    pub fn g(&self, node: usize) -> &Matrix4<f64> {
        &self.g[node]
    }

    pub fn frame(&self, node: usize) -> &Matrix4<f64> {
        &self.frame[node]
    }

    pub fn coframe(&self, node: usize) -> &Matrix4<f64> {
        &self.coframe[node]
    }

    pub fn nodes(&self) -> usize {
        self.j.len()
    }

    /// Rebuild a structure from stored per-node `J` (e.g. a dumped file).
    pub fn from_parts(n: usize, provenance: Provenance, j: Vec<Matrix4<f64>>) -> Result<Self> {
        check_grid(n)?;
        let grid = Grid::new(n);
        if j.len() != grid.nodes() {
            return Err(Error::Format(format!("expected {} nodes, got {}", grid.nodes(), j.len())));
        }
        let s = assemble(grid, provenance, j);
        let s = adapted_coframe(s)?;
        s.residuals().check()?;
        Ok(s)
    }

    pub fn residuals(&self) -> StructureResiduals {
        let om = omega0();
        let id = Matrix4::identity();
        let mut r = StructureResiduals::default();
        for p in 0..self.nodes() {
            let (j, g) = (&self.j[p], &self.g[p]);
            r.j_squared = r.j_squared.max((j * j + id).amax());
            r.omega_invariance = r.omega_invariance.max((j.transpose() * om * j - om).amax());
            r.g_symmetry = r.g_symmetry.max((g - g.transpose()).amax());
            r.det_g = r.det_g.max((g.determinant() - 1.0).abs());
            let min_eig = g.symmetric_eigenvalues().min();
            r.min_g_eigenvalue = if p == 0 { min_eig } else { r.min_g_eigenvalue.min(min_eig) };
            let f = &self.frame[p];
            r.frame_orthonormality = r.frame_orthonormality.max((f.transpose() * g * f - id).amax());
            let c = &self.coframe[p];
            // row 2 = row 1 ∘ (−J), row 4 = row 3 ∘ (−J)
            let mut adapted = 0.0f64;
            for (a, b) in [(0usize, 1usize), (2, 3)] {
                let lhs = -(c.row(a) * j);
                adapted = adapted.max((lhs - c.row(b)).amax());
            }
            r.coframe_adapted = r.coframe_adapted.max(adapted);
        }
        r
    }
}

/// Worst-case invariant residuals over all nodes.
#[derive(Clone, Debug, Default, Serialize)]
pub struct StructureResiduals {
    pub j_squared: f64,
    pub omega_invariance: f64,
    pub g_symmetry: f64,
    pub det_g: f64,
    pub min_g_eigenvalue: f64,
    pub frame_orthonormality: f64,
    pub coframe_adapted: f64,
}

impl StructureResiduals {
    pub fn max_residual(&self) -> f64 {
        [
            self.j_squared,
            self.omega_invariance,
            self.g_symmetry,
            self.det_g,
            self.frame_orthonormality,
            self.coframe_adapted,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn check(&self) -> Result<()> {
        let items = [
            ("J² + I", self.j_squared),
            ("ω0(J·,J·) − ω0", self.omega_invariance),
            ("g − gᵀ", self.g_symmetry),
            ("det g − 1", self.det_g),
            ("frame orthonormality", self.frame_orthonormality),
            ("coframe adaptedness", self.coframe_adapted),
        ];
        for (what, residual) in items {
            if !(residual <= STRUCTURE_TOL) {
                return Err(Error::InvalidStructure { what, residual, tol: STRUCTURE_TOL });
            }
        }
        if !(self.min_g_eigenvalue > 0.0) {
            return Err(Error::InvalidStructure {
                what: "g positive definite",
                residual: self.min_g_eigenvalue,
                tol: 0.0,
            });
        }
        Ok(())
    }
}

pub fn check_grid(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidGrid(n));
    }
    Ok(())
}

fn assemble(grid: Grid, provenance: Provenance, j: Vec<Matrix4<f64>>) -> StructureField {
    let om = omega0();
    let g = j
        .iter()
        .map(|jp| {
            let g = om * jp;
            (g + g.transpose()) * 0.5
        })
        .collect();
    let nodes = j.len();
    StructureField {
        grid,
        provenance,
        j,
        g,
        frame: vec![Matrix4::identity(); nodes],
        coframe: vec![Matrix4::identity(); nodes],
    }
}

/// Constant structure `J = J0`, `g = I`.
pub fn make_flat_structure(n: usize) -> Result<StructureField> {
    check_grid(n)?;
    let grid = Grid::new(n);
    let j = vec![j0(); grid.nodes()];
    adapted_coframe(assemble(grid, Provenance::Flat, j))
}

/// Symmetric 4×4 basis (10 elements) used to parametrize `sp(4)`.
fn symmetric_basis() -> Vec<Matrix4<f64>> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in a..4 {
            let mut m = Matrix4::zeros();
            m[(a, b)] = 1.0;
            m[(b, a)] = 1.0;
            out.push(m);
        }
    }
    out
}

/// Wavevectors in `[−m, m]⁴` with first nonzero component positive, plus 0.
fn half_space_wavevectors(m: usize) -> Vec<[i64; 4]> {
    let m = m as i64;
    let mut out = Vec::new();
    for a in -m..=m {
        for b in -m..=m {
            for c in -m..=m {
                for d in -m..=m {
                    let k = [a, b, c, d];
                    match k.iter().find(|&&x| x != 0) {
                        None => out.push(k),
                        Some(&x) if x > 0 => out.push(k),
                        _ => {}
                    }
                }
            }
        }
    }
    out
}

/// One term of the random generator field.
#[derive(Clone, Debug)]
struct Mode {
    k: [i64; 4],
    cos: Matrix4<f64>,
    sin: Matrix4<f64>,
}

/// Random periodic field `A(x) ∈ sp(4, ω0)` (i.e. `ω0 A + Aᵀ ω0 = 0`),
/// scaled so that the expected RMS Frobenius norm of `A` over the torus is
/// `amplitude`.
fn random_generator_modes(seed: u64, amplitude: f64, cutoff: usize) -> Vec<Mode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis: Vec<Matrix4<f64>> = symmetric_basis().into_iter().map(|s| -omega0() * s).collect();
    let ks = half_space_wavevectors(cutoff);
    // each coefficient is uniform on (-1, 1), variance 1/3; cos² + sin² averages to 1 per mode
    let basis_sq: f64 = basis.iter().map(|b| b.norm_squared()).sum();
    let scale = amplitude / (ks.len() as f64 * basis_sq / 3.0).sqrt();
    ks.into_iter()
        .map(|k| {
            let zero = k == [0; 4];
            let mut cos = Matrix4::zeros();
            let mut sin = Matrix4::zeros();
            for b in &basis {
                cos += b * (scale * rng.gen_range(-1.0..1.0));
                let s: f64 = rng.gen_range(-1.0..1.0);
                if !zero {
                    sin += b * (scale * s);
                }
            }
            Mode { k, cos, sin }
        })
        .collect()
}

/// Generic compatible structure `J = exp(A) J0 exp(−A)` with `A` a random
/// band-limited `sp(4)`-valued field.
pub fn make_perturbed_structure(
    n: usize,
    seed: u64,
    amplitude: f64,
    mode_cutoff: usize,
) -> Result<StructureField> {
    check_grid(n)?;
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidParameter(format!("amplitude must be finite and ≥ 0, got {amplitude}")));
    }
    if mode_cutoff >= n / 2 {
        return Err(Error::InvalidParameter(format!("mode cutoff {mode_cutoff} must be < N/2 = {}", n / 2)));
    }
    let grid = Grid::new(n);
    let modes = random_generator_modes(seed, amplitude, mode_cutoff);
    let j: Vec<Matrix4<f64>> = (0..grid.nodes())
        .into_par_iter()
        .map(|p| {
            let mut a = Matrix4::zeros();
            for m in &modes {
                let ph = grid.phase(p, m.k);
                a += m.cos * ph.cos() + m.sin * ph.sin();
            }
            let u = a.exp();
            let u_inv = (-a).exp();
            u * j0() * u_inv
        })
        .collect();
    let s = adapted_coframe(assemble(
        grid,
        Provenance::Perturbed { seed, amplitude, mode_cutoff },
        j,
    ))?;
    s.residuals().check()?;
    Ok(s)
}

/// Deterministic adapted orthonormal frame at every node:
/// `e1 ∝ ∂x1`, `Φe1 = J e1`, `e2 ∝` the g-orthogonal part of `∂x2` (or `∂y2`),
/// `Φe2 = J e2`; the coframe is the dual basis.
pub fn adapted_coframe(mut s: StructureField) -> Result<StructureField> {
    let results: Vec<Result<(Matrix4<f64>, Matrix4<f64>)>> = (0..s.j.len())
        .into_par_iter()
        .map(|p| frame_at(&s.j[p], &s.g[p]).ok_or(Error::DegenerateFrame(p)))
        .collect();
    for (p, r) in results.into_iter().enumerate() {
        let (f, c) = r?;
        s.frame[p] = f;
        s.coframe[p] = c;
    }
    Ok(s)
}

fn frame_at(j: &Matrix4<f64>, g: &Matrix4<f64>) -> Option<(Matrix4<f64>, Matrix4<f64>)> {
    use nalgebra::Vector4;
    let ip = |u: &Vector4<f64>, v: &Vector4<f64>| (u.transpose() * g * v)[0];
    let unit = |i: usize| {
        let mut v = Vector4::zeros();
        v[i] = 1.0;
        v
    };
    let x1 = unit(0);
    let e1 = x1 / ip(&x1, &x1).sqrt();
    let f1 = j * e1;
    let orth = |v: Vector4<f64>| v - e1 * ip(&v, &e1) - f1 * ip(&v, &f1);
    let mut e2 = orth(unit(2));
    if ip(&e2, &e2).sqrt() < FRAME_FALLBACK_NORM {
        e2 = orth(unit(3));
        if ip(&e2, &e2).sqrt() < FRAME_FALLBACK_NORM {
            return None;
        }
    }
    let e2 = e2 / ip(&e2, &e2).sqrt();
    let f2 = j * e2;
    let frame = Matrix4::from_columns(&[e1, f1, e2, f2]);
    let coframe = frame.try_inverse()?;
    Some((frame, coframe))
}

/// Pointwise Frobenius norm of the Nijenhuis tensor on coordinate fields,
/// `N(X,Y) = [JX,JY] − J[JX,Y] − J[X,JY] − [X,Y]`.
pub fn nijenhuis_norm(s: &StructureField) -> Vec<f64> {
    let grid = s.grid();
    let nodes = s.nodes();
    // dj[c][mu*4+nu] = ∂_c J_{mu nu}
    let dj: Vec<Vec<Vec<f64>>> = (0..4)
        .map(|c| {
            (0..16)
                .into_par_iter()
                .map(|e| {
                    let f: Vec<f64> = (0..nodes).map(|p| s.j[p][(e / 4, e % 4)]).collect();
                    grid.derivative_real(&f, c)
                })
                .collect()
        })
        .collect();
    (0..nodes)
        .into_par_iter()
        .map(|p| {
            let j = &s.j[p];
            let d = |c: usize, mu: usize, nu: usize| dj[c][mu * 4 + nu][p];
            let mut total = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    for mu in 0..4 {
                        let mut v = 0.0;
                        for nu in 0..4 {
                            v += j[(nu, a)] * d(nu, mu, b) - j[(nu, b)] * d(nu, mu, a);
                            v += j[(mu, nu)] * d(b, nu, a) - j[(mu, nu)] * d(a, nu, b);
                        }
                        total += v * v;
                    }
                }
            }
            total.sqrt()
        })
        .collect()
}

pub fn max_nijenhuis(s: &StructureField) -> f64 {
    nijenhuis_norm(s).into_iter().fold(0.0, f64::max)
}
