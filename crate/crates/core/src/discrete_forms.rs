//! Basic forms on the periodic grid and their calculus.
//!
//! A p-form is stored as `C(4,p)` component fields over the coordinate
//! coframe `dx1 < dy1 < dx2 < dy2` (lexicographic subsets, see
//! [`crate::exterior`]), component-major. Coefficients are complex: the
//! exterior derivative uses the one-sided Nyquist symbol, so it maps real
//! fields with Nyquist content to complex ones. With that choice `d` is
//! skew-adjoint per axis, its only cohomology comes from constant forms, and
//! the metric adjoint of `d` is exactly `−*d*`.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::exterior::{self, compound, compounds_all, rank, subsets, wedge_top_matrix};
use crate::pointwise_algebra::{self as pa, Projector, BASIS_PAIRS};
use crate::spectral::Grid;
use crate::transverse_geometry::StructureField;
use crate::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// A p-form on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FormField {
    degree: usize,
    n: usize,
    data: Vec<C64>,
}

impl FormField {
    pub fn zeros(degree: usize, n: usize) -> Self {
        assert!(degree <= 4);
        Self { degree, n, data: vec![ZERO; rank(degree) * n.pow(4)] }
    }

    pub fn from_data(degree: usize, n: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rank(degree) * n.pow(4));
        Self { degree, n, data }
    }

    /// Build from a function of `(node coordinates, component)`.
    pub fn from_fn(degree: usize, grid: &Grid, f: impl Fn([f64; 4], usize) -> C64) -> Self {
        let nodes = grid.nodes();
        let mut out = Self::zeros(degree, grid.n());
        for c in 0..rank(degree) {
            for p in 0..nodes {
                out.data[c * nodes + p] = f(grid.coords(p), c);
            }
        }
        out
    }

    /// Constant form with the given coordinate coefficients.
    pub fn constant(degree: usize, n: usize, coeffs: &[C64]) -> Self {
        assert_eq!(coeffs.len(), rank(degree));
        let nodes = n.pow(4);
        let mut out = Self::zeros(degree, n);
        for (c, &v) in coeffs.iter().enumerate() {
            out.data[c * nodes..(c + 1) * nodes].fill(v);
        }
        out
    }

    pub fn constant_real(degree: usize, n: usize, coeffs: &[f64]) -> Self {
        Self::constant(degree, n, &coeffs.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// `ω0 = dx1∧dy1 + dx2∧dy2`.
    pub fn omega0(n: usize) -> Self {
        Self::constant_real(2, n, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> usize {
        self.n.pow(4)
    }

    pub fn components(&self) -> usize {
        rank(self.degree)
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn component(&self, c: usize) -> &[C64] {
        let nodes = self.nodes();
        &self.data[c * nodes..(c + 1) * nodes]
    }

    pub fn get(&self, node: usize, c: usize) -> C64 {
        self.data[c * self.nodes() + node]
    }

    pub fn set(&mut self, node: usize, c: usize, v: C64) {
        let nodes = self.nodes();
        self.data[c * nodes + node] = v;
    }

    /// Coefficients at one node.
    pub fn at(&self, node: usize) -> Vec<C64> {
        (0..self.components()).map(|c| self.get(node, c)).collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::GridMismatch(self.n, other.n));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree.to_string(), found: other.degree });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other).expect("compatible forms");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { degree: self.degree, n: self.n, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other).expect("compatible forms");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { degree: self.degree, n: self.n, data }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { degree: self.degree, n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `self += s·x`
    pub fn axpy(&mut self, s: C64, x: &Self) {
        for (a, b) in self.data.iter_mut().zip(&x.data) {
            *a += s * b;
        }
    }

    pub fn conj(&self) -> Self {
        Self { degree: self.degree, n: self.n, data: self.data.iter().map(|a| a.conj()).collect() }
    }

    pub fn real_part(&self) -> Self {
        Self { degree: self.degree, n: self.n, data: self.data.iter().map(|a| C64::new(a.re, 0.0)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Euclidean (coefficient) inner product `Σ conj(a)·b`.
    pub fn dot(&self, other: &Self) -> C64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// Euclidean coefficient norm.
    pub fn coeff_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Random real band-limited p-form with Fourier modes `|k_a| ≤ max_mode`.
pub fn random_band_limited(degree: usize, grid: &Grid, max_mode: usize, rng: &mut impl Rng) -> FormField {
    let nodes = grid.nodes();
    let m = max_mode as f64;
    let mut data = Vec::with_capacity(rank(degree) * nodes);
    for _ in 0..rank(degree) {
        let mut hat: Vec<C64> = (0..nodes)
            .map(|p| {
                let inside = (0..4).all(|a| grid.wavenumber_real(p, a).abs() <= m);
                // keep the Nyquist line out so the field is a true trigonometric polynomial
                let nyq = (0..4).any(|a| grid.wavenumber(p, a) != grid.wavenumber_real(p, a));
                if inside && !nyq {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    ZERO
                }
            })
            .collect();
        grid.ifft(&mut hat);
        let scale = nodes as f64 / ((2.0 * m + 1.0).powi(4)).sqrt();
        data.extend(hat.into_iter().map(|z| C64::new(z.re * scale, 0.0)));
    }
    FormField::from_data(degree, grid.n(), data)
}

/// Per-node algebraic data derived from a structure: metrics on `Λ^p`, Hodge
/// stars, the Φ action, and changes of basis to the adapted real and complex
/// coframes.
#[derive(Clone, Debug)]
pub struct FormGeometry {
    grid: Grid,
    /// `√det g · (2π/N)⁴`
    weight: Vec<f64>,
    metric: [Vec<f64>; 5],
    metric_inv: [Vec<f64>; 5],
    star: [Vec<f64>; 5],
    /// `α ↦ α(J·, J·)` on 2-forms.
    phi2: Vec<f64>,
    /// Coordinate 2-form coefficients → adapted basis `E`.
    to_frame2: Vec<f64>,
    from_frame2: Vec<f64>,
    /// Coordinate p-form coefficients → complex coframe `(ω¹, ω², ω̄¹, ω̄²)` coefficients.
    to_cplx: [Vec<C64>; 5],
    from_cplx: [Vec<C64>; 5],
}

fn mat4_rows(m: &nalgebra::Matrix4<f64>) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    out
}

fn flatten<T: Copy>(m: &[Vec<T>]) -> Vec<T> {
    m.iter().flat_map(|r| r.iter().copied()).collect()
}

fn transpose<T: Copy>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let (r, c) = (m.len(), m[0].len());
    (0..c).map(|j| (0..r).map(|i| m[i][j]).collect()).collect()
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r).map(|i| (0..c).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

/// Signed permutation of `Λ²` wedge matrices is its own inverse up to transpose.
fn wedge_inverse(p: usize) -> Vec<Vec<f64>> {
    // W_p has exactly one ±1 per row/column; W_p · W_{4−p}ᵀ-style inverse is Wᵀ.
    transpose(&wedge_top_matrix(p))
}

/// Permutation from frame-lex 2-form indices to the `E` ordering.
fn e_from_lex() -> Vec<Vec<f64>> {
    let lex = subsets(2);
    BASIS_PAIRS
        .iter()
        .map(|&(a, b)| {
            let idx = lex.iter().position(|s| s == &vec![a, b]).unwrap();
            (0..6).map(|j| if j == idx { 1.0 } else { 0.0 }).collect()
        })
        .collect()
}

impl FormGeometry {
    pub fn new(s: &StructureField) -> Self {
        let grid = s.grid().clone();
        let nodes = grid.nodes();
        let cell = grid.cell_volume();
        let perm = e_from_lex();
        let perm_t = transpose(&perm);
        let w_inv: Vec<Vec<Vec<f64>>> = (0..=4).map(wedge_inverse).collect();

        struct Node {
            weight: f64,
            metric: [Vec<f64>; 5],
            metric_inv: [Vec<f64>; 5],
            star: [Vec<f64>; 5],
            phi2: Vec<f64>,
            to_frame2: Vec<f64>,
            from_frame2: Vec<f64>,
            to_cplx: [Vec<C64>; 5],
            from_cplx: [Vec<C64>; 5],
        }

        // ω^i = θ^i + iΦθ^i in terms of the real coframe rows
        let mc = {
            let z = C64::new(0.0, 0.0);
            let o = C64::new(1.0, 0.0);
            let i = C64::new(0.0, 1.0);
            nalgebra::Matrix4::new(o, i, z, z, z, z, o, i, o, -i, z, z, z, z, o, -i)
        };

        let per_node: Vec<Node> = (0..nodes)
            .into_par_iter()
            .map(|p| {
                let g = s.g(p);
                let ginv = g.try_inverse().expect("positive definite metric");
                let sqrt_det = g.determinant().sqrt();
                let gi = compounds_all(&mat4_rows(&ginv), 1.0);
                let gi_inv = compounds_all(&mat4_rows(g), 1.0);
                let star: [Vec<f64>; 5] = std::array::from_fn(|k| {
                    let m = matmul(&w_inv[k], &gi[k]);
                    flatten(&m).into_iter().map(|v| v * sqrt_det).collect()
                });
                let jc = compound(&mat4_rows(s.j(p)), 2);
                let phi2 = flatten(&transpose(&jc));
                let fc = compound(&mat4_rows(s.frame(p)), 2);
                let cc = compound(&mat4_rows(s.coframe(p)), 2);
                let to_frame2 = flatten(&matmul(&perm, &transpose(&fc)));
                let from_frame2 = flatten(&matmul(&transpose(&cc), &perm_t));

                let cc_cplx = mc * s.coframe(p).map(|v| C64::new(v, 0.0));
                let r_cplx = cc_cplx.try_inverse().expect("complex coframe");
                let rows_c = |m: &nalgebra::Matrix4<C64>| {
                    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
                    for (i, row) in out.iter_mut().enumerate() {
                        for (j, v) in row.iter_mut().enumerate() {
                            *v = m[(i, j)];
                        }
                    }
                    out
                };
                let one = C64::new(1.0, 0.0);
                let rc = compounds_all(&rows_c(&r_cplx), one);
                let ccc = compounds_all(&rows_c(&cc_cplx), one);
                Node {
                    weight: sqrt_det * cell,
                    metric: std::array::from_fn(|k| flatten(&gi[k])),
                    metric_inv: std::array::from_fn(|k| flatten(&gi_inv[k])),
                    star,
                    phi2,
                    to_frame2,
                    from_frame2,
                    to_cplx: std::array::from_fn(|k| flatten(&transpose(&rc[k]))),
                    from_cplx: std::array::from_fn(|k| flatten(&transpose(&ccc[k]))),
                }
            })
            .collect();

        let gather_f = |f: &dyn Fn(&Node) -> &Vec<f64>| -> Vec<f64> {
            per_node.iter().flat_map(|n| f(n).iter().copied()).collect()
        };
        let gather_c = |f: &dyn Fn(&Node) -> &Vec<C64>| -> Vec<C64> {
            per_node.iter().flat_map(|n| f(n).iter().copied()).collect()
        };
        Self {
            weight: per_node.iter().map(|n| n.weight).collect(),
            metric: std::array::from_fn(|k| gather_f(&|n: &Node| &n.metric[k])),
            metric_inv: std::array::from_fn(|k| gather_f(&|n: &Node| &n.metric_inv[k])),
            star: std::array::from_fn(|k| gather_f(&|n: &Node| &n.star[k])),
            phi2: gather_f(&|n: &Node| &n.phi2),
            to_frame2: gather_f(&|n: &Node| &n.to_frame2),
            from_frame2: gather_f(&|n: &Node| &n.from_frame2),
            to_cplx: std::array::from_fn(|k| gather_c(&|n: &Node| &n.to_cplx[k])),
            from_cplx: std::array::from_fn(|k| gather_c(&|n: &Node| &n.from_cplx[k])),
            grid,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn nodes(&self) -> usize {
        self.grid.nodes()
    }

    pub fn weight(&self, node: usize) -> f64 {
        self.weight[node]
    }

    fn check(&self, a: &FormField) -> Result<()> {
        if a.n != self.n() {
            return Err(Error::GridMismatch(a.n, self.n()));
        }
        Ok(())
    }

    fn require_degree(a: &FormField, ok: impl Fn(usize) -> bool, expected: &str) -> Result<()> {
        if !ok(a.degree) {
            return Err(Error::DegreeMismatch { expected: expected.into(), found: a.degree });
        }
        Ok(())
    }

    // ---- spectral exterior derivative ----------------------------------------

    fn exterior_spectral(&self, a: &FormField, adjoint: bool) -> FormField {
        let grid = &self.grid;
        let nodes = grid.nodes();
        let (from_deg, to_deg) = if adjoint { (a.degree, a.degree - 1) } else { (a.degree, a.degree + 1) };
        let mut hats: Vec<Vec<C64>> = (0..rank(from_deg))
            .into_par_iter()
            .map(|c| {
                let mut h = a.component(c).to_vec();
                grid.fft(&mut h);
                h
            })
            .collect();
        let lower = subsets(if adjoint { to_deg } else { from_deg });
        // (lower index, axis, upper index, sign) for dx^axis ∧ dx^lower = sign dx^upper
        let mut terms = Vec::new();
        for (li, set) in lower.iter().enumerate() {
            for axis in 0..4 {
                if let Some((ui, sign)) = exterior::insert(axis, set) {
                    terms.push((li, axis, ui, sign));
                }
            }
        }
        let out_rank = rank(to_deg);
        let outs: Vec<Vec<C64>> = (0..out_rank)
            .into_par_iter()
            .map(|oc| {
                let mut acc = vec![ZERO; nodes];
                for &(li, axis, ui, sign) in &terms {
                    let (src, dst) = if adjoint { (ui, li) } else { (li, ui) };
                    if dst != oc {
                        continue;
                    }
                    let mut t = hats[src].clone();
                    grid.apply_symbol(&mut t, axis, false);
                    // adjoint of i·k is −i·k
                    let s = if adjoint { -sign } else { sign };
                    for (x, y) in acc.iter_mut().zip(&t) {
                        *x += s * y;
                    }
                }
                grid.ifft(&mut acc);
                acc
            })
            .collect();
        hats.clear();
        FormField::from_data(to_deg, grid.n(), outs.into_iter().flatten().collect())
    }

    /// Exterior derivative, exact on the trigonometric interpolant.
    pub fn d(&self, a: &FormField) -> Result<FormField> {
        self.check(a)?;
        Self::require_degree(a, |p| p <= 3, "≤ 3")?;
        Ok(self.exterior_spectral(a, false))
    }

    /// Euclidean (coefficient) adjoint of `d`.
    pub fn d_adjoint_euclidean(&self, a: &FormField) -> Result<FormField> {
        self.check(a)?;
        Self::require_degree(a, |p| p >= 1, "≥ 1")?;
        Ok(self.exterior_spectral(a, true))
    }

    // ---- pointwise operators ------------------------------------------------

    fn pointwise(&self, mats: &[f64], a: &FormField, out_deg: usize, scale: Option<&[f64]>, inv_scale: bool) -> FormField {
        let nodes = self.nodes();
        let (ri, ro) = (rank(a.degree), rank(out_deg));
        let outs: Vec<Vec<C64>> = (0..ro)
            .into_par_iter()
            .map(|oc| {
                (0..nodes)
                    .map(|p| {
                        let m = &mats[p * ri * ro + oc * ri..p * ri * ro + (oc + 1) * ri];
                        let mut v = ZERO;
                        for (ic, &mv) in m.iter().enumerate() {
                            v += a.data[ic * nodes + p] * mv;
                        }
                        match scale {
                            Some(w) if inv_scale => v / w[p],
                            Some(w) => v * w[p],
                            None => v,
                        }
                    })
                    .collect()
            })
            .collect();
        FormField::from_data(out_deg, a.n, outs.into_iter().flatten().collect())
    }

    fn pointwise_c(&self, mats: &[C64], a: &FormField, mask: Option<&[bool]>) -> FormField {
        let nodes = self.nodes();
        let r = rank(a.degree);
        let outs: Vec<Vec<C64>> = (0..r)
            .into_par_iter()
            .map(|oc| {
                (0..nodes)
                    .map(|p| {
                        let m = &mats[p * r * r + oc * r..p * r * r + (oc + 1) * r];
                        let mut v = ZERO;
                        for (ic, &mv) in m.iter().enumerate() {
                            if mask.is_none_or(|mk| mk[ic]) {
                                v += a.data[ic * nodes + p] * mv;
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        FormField::from_data(a.degree, a.n, outs.into_iter().flatten().collect())
    }

    /// Mass matrix application `M_p a` (pointwise metric Gram times weight).
    pub fn mass(&self, a: &FormField) -> FormField {
        self.pointwise(&self.metric[a.degree], a, a.degree, Some(&self.weight), false)
    }

    pub fn mass_inv(&self, a: &FormField) -> FormField {
        self.pointwise(&self.metric_inv[a.degree], a, a.degree, Some(&self.weight), true)
    }

    /// `Σ_nodes ⟨a(p), b(p)⟩_g √det g (2π/N)⁴`, conjugate-linear in `a`.
    pub fn l2_inner(&self, a: &FormField, b: &FormField) -> Result<C64> {
        self.check(a)?;
        a.check_same(b)?;
        Ok(a.dot(&self.mass(b)))
    }

    pub fn l2_norm(&self, a: &FormField) -> f64 {
        a.dot(&self.mass(a)).re.max(0.0).sqrt()
    }

    /// Metric adjoint of `d`: `δ = M_{p−1}⁻¹ dᴴ M_p`.
    pub fn codifferential(&self, a: &FormField) -> Result<FormField> {
        self.check(a)?;
        Self::require_degree(a, |p| p >= 1, "≥ 1")?;
        let m = self.mass(a);
        let t = self.exterior_spectral(&m, true);
        Ok(self.mass_inv(&t))
    }

    /// Pointwise Hodge star for the orientation `dx1∧dy1∧dx2∧dy2`.
    pub fn star_coord(&self, a: &FormField) -> FormField {
        self.pointwise(&self.star[a.degree], a, 4 - a.degree, None, false)
    }

    /// `α ↦ α(J·, J·)` on 2-forms.
    pub fn phi_pullback(&self, a: &FormField) -> Result<FormField> {
        Self::require_degree(a, |p| p == 2, "2")?;
        Ok(self.pointwise(&self.phi2, a, 2, None, false))
    }

    pub fn project_field(&self, a: &FormField, which: Projector) -> Result<FormField> {
        self.check(a)?;
        Self::require_degree(a, |p| p == 2, "2")?;
        let other = match which {
            Projector::SelfDual | Projector::AntiSelfDual => self.star_coord(a),
            Projector::PhiInvariant | Projector::PhiAntiInvariant => self.phi_pullback(a)?,
        };
        let sign = match which {
            Projector::SelfDual | Projector::PhiInvariant => 1.0,
            _ => -1.0,
        };
        let mut out = a.clone();
        out.axpy(C64::new(sign, 0.0), &other);
        Ok(out.scale_real(0.5))
    }

    /// `∫_base a∧b` (unit fiber), bilinear.
    pub fn pair_eta(&self, a: &FormField, b: &FormField) -> Result<C64> {
        self.check(a)?;
        if a.n != b.n {
            return Err(Error::GridMismatch(a.n, b.n));
        }
        Self::require_degree(a, |p| p == 2, "2")?;
        Self::require_degree(b, |p| p == 2, "2")?;
        let w = wedge_top_matrix(2);
        let nodes = self.nodes();
        let mut total = ZERO;
        for p in 0..nodes {
            for (i, row) in w.iter().enumerate() {
                for (j, &s) in row.iter().enumerate() {
                    if s != 0.0 {
                        total += a.data[i * nodes + p] * b.data[j * nodes + p] * s;
                    }
                }
            }
        }
        Ok(total * self.grid.cell_volume())
    }

    // ---- adapted frame ------------------------------------------------------

    /// Coordinate 2-form coefficients at a node, expressed in the basis `E`.
    pub fn to_frame2(&self, node: usize, coord: &[f64; 6]) -> [f64; 6] {
        apply6(&self.to_frame2[node * 36..(node + 1) * 36], coord)
    }

    pub fn from_frame2(&self, node: usize, frame: &[f64; 6]) -> [f64; 6] {
        apply6(&self.from_frame2[node * 36..(node + 1) * 36], frame)
    }

    /// Apply a fiber operator given on `E` at every node.
    pub fn apply_frame_operator(&self, a: &FormField, op_e: &[[f64; 6]; 6]) -> Result<FormField> {
        Self::require_degree(a, |p| p == 2, "2")?;
        let nodes = self.nodes();
        let mut mats = vec![0.0; nodes * 36];
        for p in 0..nodes {
            let to = &self.to_frame2[p * 36..(p + 1) * 36];
            let from = &self.from_frame2[p * 36..(p + 1) * 36];
            for i in 0..6 {
                for j in 0..6 {
                    let mut v = 0.0;
                    for k in 0..6 {
                        for l in 0..6 {
                            v += from[i * 6 + k] * op_e[k][l] * to[l * 6 + j];
                        }
                    }
                    mats[p * 36 + i * 6 + j] = v;
                }
            }
        }
        Ok(self.pointwise(&mats, a, 2, None, false))
    }

    /// Coordinate fields of the frame forms `θ1∧θ2 − Φθ1∧Φθ2` and
    /// `θ1∧Φθ2 + Φθ1∧θ2`, which span `Λ_Φ^-` at every node.
    pub fn anti_invariant_frame(&self) -> [FormField; 2] {
        let gens = [[0.0, 0.0, 1.0, -1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0, 1.0, 1.0]];
        let nodes = self.nodes();
        gens.map(|e| {
            let mut f = FormField::zeros(2, self.n());
            for p in 0..nodes {
                let c = self.from_frame2(p, &e);
                for (k, v) in c.iter().enumerate() {
                    f.data[k * nodes + p] = C64::new(*v, 0.0);
                }
            }
            f
        })
    }

    /// `(u, v) ↦ u·A1 + v·A2` with `A1, A2` from [`Self::anti_invariant_frame`];
    /// `uv` holds the two scalar fields back to back.
    pub fn embed_anti_invariant(&self, frame: &[FormField; 2], uv: &[C64]) -> FormField {
        let nodes = self.nodes();
        assert_eq!(uv.len(), 2 * nodes);
        let mut out = FormField::zeros(2, self.n());
        for c in 0..6 {
            for p in 0..nodes {
                out.data[c * nodes + p] =
                    frame[0].data[c * nodes + p] * uv[p] + frame[1].data[c * nodes + p] * uv[nodes + p];
            }
        }
        out
    }

    /// Coefficient-space adjoint of [`Self::embed_anti_invariant`].
    pub fn embed_anti_invariant_adjoint(&self, frame: &[FormField; 2], a: &FormField) -> Vec<C64> {
        let nodes = self.nodes();
        let mut out = vec![ZERO; 2 * nodes];
        for (k, f) in frame.iter().enumerate() {
            for p in 0..nodes {
                let mut v = ZERO;
                for c in 0..6 {
                    v += f.data[c * nodes + p].conj() * a.data[c * nodes + p];
                }
                out[k * nodes + p] = v;
            }
        }
        out
    }

    /// Complex structure `R` on `Λ_Φ^-` with `α + iR(α)` of type (2,0).
    pub fn anti_invariant_rotate(&self, a: &FormField) -> Result<FormField> {
        let r = pa::anti_invariant_rotation_matrix();
        let mut op = [[0.0; 6]; 6];
        for (i, row) in op.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let q = r[(i, j)];
                *v = *q.numer() as f64 / *q.denom() as f64;
            }
        }
        self.apply_frame_operator(a, &op)
    }

    // ---- bidegrees ----------------------------------------------------------

    /// Keep the `(p, q)` part in the complexified adapted coframe.
    pub fn bidegree_project_field(&self, a: &FormField, bidegree: (usize, usize)) -> Result<FormField> {
        self.check(a)?;
        if bidegree.0 + bidegree.1 != a.degree {
            return Err(Error::DegreeMismatch {
                expected: format!("{}", bidegree.0 + bidegree.1),
                found: a.degree,
            });
        }
        let k = a.degree;
        let mask: Vec<bool> = subsets(k)
            .iter()
            .map(|s| s.iter().filter(|&&i| i < 2).count() == bidegree.0)
            .collect();
        let coeffs = self.pointwise_c(&self.to_cplx[k], a, None);
        let kept = self.pointwise_c(&self.from_cplx[k], &coeffs, Some(&mask));
        Ok(kept)
    }

    /// Coefficients of `a` in the complex coframe basis `ψ^K` (lexicographic over
    /// `(ω¹, ω², ω̄¹, ω̄²)`).
    pub fn complex_coefficients(&self, a: &FormField) -> FormField {
        self.pointwise_c(&self.to_cplx[a.degree], a, None)
    }

    /// `d a` split by bidegree relative to the tag of `a`.
    pub fn del_delbar(&self, a: &ComplexFormField) -> Result<DelDelbar> {
        let (p, q) = a.bidegree.ok_or(Error::MissingBidegree)?;
        let da = self.d(&a.field)?;
        let del = if p + 1 <= 2 { self.bidegree_project_field(&da, (p + 1, q))? } else { FormField::zeros(da.degree, da.n) };
        let delbar = if q + 1 <= 2 { self.bidegree_project_field(&da, (p, q + 1))? } else { FormField::zeros(da.degree, da.n) };
        let remainder = da.sub(&del).sub(&delbar);
        Ok(DelDelbar {
            del: ComplexFormField::new(del, Some((p + 1, q))),
            delbar: ComplexFormField::new(delbar, Some((p, q + 1))),
            remainder,
        })
    }
}

fn apply6(m: &[f64], v: &[f64; 6]) -> [f64; 6] {
    std::array::from_fn(|i| (0..6).map(|j| m[i * 6 + j] * v[j]).sum())
}

/// A complex form with an optional bidegree tag.
#[derive(Clone, Debug)]
pub struct ComplexFormField {
    pub field: FormField,
    pub bidegree: Option<(usize, usize)>,
}

impl ComplexFormField {
    pub fn new(field: FormField, bidegree: Option<(usize, usize)>) -> Self {
        Self { field, bidegree }
    }

    /// Conjugation swaps `(p, q)` and `(q, p)`.
    pub fn conj(&self) -> Self {
        Self { field: self.field.conj(), bidegree: self.bidegree.map(|(p, q)| (q, p)) }
    }
}

/// Bidegree split of `d a`.
#[derive(Clone, Debug)]
pub struct DelDelbar {
    pub del: ComplexFormField,
    pub delbar: ComplexFormField,
    /// Everything else; vanishes when the structure is integrable.
    pub remainder: FormField,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transverse_geometry::make_flat_structure;

    fn flat(n: usize) -> FormGeometry {
        FormGeometry::new(&make_flat_structure(n).unwrap())
    }

    #[test]
    fn d_of_sin() {
        let geo = flat(8);
        let f = FormField::from_fn(0, geo.grid(), |x, _| C64::new(x[0].sin(), 0.0));
        let df = geo.d(&f).unwrap();
        for p in 0..geo.nodes() {
            let x = geo.grid().coords(p);
            assert!((df.get(p, 0) - C64::new(x[0].cos(), 0.0)).norm() < 1e-12);
            for c in 1..4 {
                assert!(df.get(p, c).norm() < 1e-12);
            }
        }
        let c = FormField::constant_real(1, 8, &[1.0, 2.0, 3.0, 4.0]);
        assert!(geo.d(&c).unwrap().max_abs() < 1e-12);
        assert!(geo.d(&FormField::zeros(4, 8)).is_err());
    }

    #[test]
    fn l2_flat_values() {
        let geo = flat(4);
        let a = FormField::constant_real(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let b = FormField::constant_real(2, 4, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let want = (2.0 * std::f64::consts::PI).powi(4);
        assert!((geo.l2_inner(&a, &a).unwrap().re - want).abs() < 1e-9);
        assert!(geo.l2_inner(&a, &b).unwrap().norm() < 1e-12);
        assert!(geo.l2_inner(&a, &FormField::zeros(1, 4)).is_err());
    }

    #[test]
    fn star_flat_example() {
        let geo = flat(4);
        let a = FormField::constant_real(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let s = geo.star_coord(&a);
        assert_eq!(s.at(0), FormField::constant_real(2, 4, &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).at(0));
    }

    #[test]
    fn flat_projection_examples() {
        let geo = flat(4);
        let w = FormField::omega0(4);
        assert!(geo.project_field(&w, Projector::PhiInvariant).unwrap().sub(&w).max_abs() < 1e-15);
        // dx1∧dx2 − dy1∧dy2 = dx^02 − dx^13
        let a = FormField::constant_real(2, 4, &[0.0, 1.0, 0.0, 0.0, -1.0, 0.0]);
        assert!(geo.project_field(&a, Projector::PhiAntiInvariant).unwrap().sub(&a).max_abs() < 1e-15);
    }

    #[test]
    fn flat_bidegree_example() {
        let geo = flat(4);
        let a = FormField::constant_real(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let p11 = geo.bidegree_project_field(&a, (1, 1)).unwrap();
        assert!(p11.sub(&a).max_abs() < 1e-14);
        assert!(geo.bidegree_project_field(&a, (2, 1)).is_err());
    }

    #[test]
    fn missing_tag_is_rejected() {
        let geo = flat(4);
        let a = ComplexFormField::new(FormField::zeros(2, 4), None);
        assert!(matches!(geo.del_delbar(&a), Err(Error::MissingBidegree)));
    }

    fn perturbed(n: usize) -> FormGeometry {
        let s = crate::transverse_geometry::make_perturbed_structure(n, 7, 0.3, 1).unwrap();
        FormGeometry::new(&s)
    }

    fn random_complex(degree: usize, geo: &FormGeometry, seed: u64) -> FormField {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let nodes = geo.nodes();
        let data = (0..rank(degree) * nodes)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        FormField::from_data(degree, geo.n(), data)
    }

    #[test]
    fn d_squared_vanishes_including_nyquist() {
        let geo = perturbed(6);
        for p in 0..=2 {
            let a = random_complex(p, &geo, p as u64);
            let dda = geo.d(&geo.d(&a).unwrap()).unwrap();
            assert!(dda.max_abs() < 1e-10 * geo.d(&a).unwrap().max_abs(), "degree {p}");
        }
    }

    #[test]
    fn codifferential_is_adjoint_and_equals_minus_star_d_star() {
        let geo = perturbed(6);
        for p in 1..=4 {
            let a = random_complex(p - 1, &geo, 10 + p as u64);
            let b = random_complex(p, &geo, 20 + p as u64);
            let lhs = geo.l2_inner(&geo.d(&a).unwrap(), &b).unwrap();
            let rhs = geo.l2_inner(&a, &geo.codifferential(&b).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0), "degree {p}");
            let sds = geo.star_coord(&geo.d(&geo.star_coord(&b)).unwrap()).scale_real(-1.0);
            let del = geo.codifferential(&b).unwrap();
            assert!(sds.sub(&del).max_abs() < 1e-9 * del.max_abs(), "degree {p}");
        }
    }

    #[test]
    fn star_and_phi_are_involutions_on_two_forms() {
        let geo = perturbed(4);
        let a = random_complex(2, &geo, 3);
        assert!(geo.star_coord(&geo.star_coord(&a)).sub(&a).max_abs() < 1e-12);
        let pa = geo.phi_pullback(&a).unwrap();
        assert!(geo.phi_pullback(&pa).unwrap().sub(&a).max_abs() < 1e-12);
        let star_phi = geo.star_coord(&pa);
        let phi_star = geo.phi_pullback(&geo.star_coord(&a)).unwrap();
        assert!(star_phi.sub(&phi_star).max_abs() < 1e-12);
    }

    #[test]
    fn frame_path_matches_coordinate_path() {
        let geo = perturbed(4);
        let a = random_complex(2, &geo, 5);
        let star_e = pa::star_matrix();
        let phi_e = pa::phi_matrix();
        let s1 = geo.apply_frame_operator(&a, &star_e.to_f64_6x6()).unwrap();
        assert!(s1.sub(&geo.star_coord(&a)).max_abs() < 1e-10);
        let p1 = geo.apply_frame_operator(&a, &phi_e.to_f64_6x6()).unwrap();
        assert!(p1.sub(&geo.phi_pullback(&a).unwrap()).max_abs() < 1e-10);
    }

    #[test]
    fn bidegree_parts_sum_and_rotation_gives_20() {
        let geo = perturbed(4);
        let a = random_complex(2, &geo, 9);
        let parts: Vec<FormField> =
            [(2, 0), (1, 1), (0, 2)].iter().map(|&b| geo.bidegree_project_field(&a, b).unwrap()).collect();
        let sum = parts[0].add(&parts[1]).add(&parts[2]);
        assert!(sum.sub(&a).max_abs() < 1e-12);
        let anti = geo.project_field(&a.real_part(), Projector::PhiAntiInvariant).unwrap();
        let theta = anti.add(&geo.anti_invariant_rotate(&anti).unwrap().scale(C64::new(0.0, 1.0)));
        let t20 = geo.bidegree_project_field(&theta, (2, 0)).unwrap();
        assert!(t20.sub(&theta).max_abs() < 1e-12);
    }
}
