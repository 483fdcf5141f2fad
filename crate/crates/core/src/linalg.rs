//! Matrix-free Hermitian solvers on flat complex vectors.
//!
//! Everything here uses the Euclidean inner product `Σ conj(x)·y`; metric
//! weights enter through the operators (`B` in the generalized eigenproblem,
//! `M·Δ` rather than `Δ` in linear solves). Reductions run sequentially in a
//! fixed order so results are reproducible across thread counts.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type CVec = Vec<C64>;

/// A linear operator given as a closure.
pub type Op<'a> = &'a (dyn Fn(&[C64]) -> CVec + Sync);
/// An in-place projection applied to trial vectors.
pub type Proj<'a> = &'a (dyn Fn(&mut [C64]) + Sync);

/// `Σ conj(a)·b` with four interleaved accumulators (fixed order).
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    let mut re = [0.0f64; 4];
    let mut im = [0.0f64; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for l in 0..4 {
            re[l] += x[l].re * y[l].re + x[l].im * y[l].im;
            im[l] += x[l].re * y[l].im - x[l].im * y[l].re;
        }
    }
    let mut out = C64::new((re[0] + re[1]) + (re[2] + re[3]), (im[0] + im[1]) + (im[2] + im[3]));
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        out += x.conj() * y;
    }
    out
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn axpy(y: &mut [C64], s: C64, x: &[C64]) {
    for (a, b) in y.iter_mut().zip(x) {
        *a += s * b;
    }
}

pub fn scale(x: &mut [C64], s: C64) {
    for v in x.iter_mut() {
        *v *= s;
    }
}

/// Rows per cache block in the multi-vector kernels below.
const CHUNK: usize = 512;

/// `Σ_j c[j][col] · vs[j]` for every column of `c`.
fn combine(vs: &[&[C64]], c: &DMatrix<C64>) -> Vec<CVec> {
    let dim = vs.first().map_or(0, |v| v.len());
    let mut out = vec![vec![C64::new(0.0, 0.0); dim]; c.ncols()];
    for lo in (0..dim).step_by(CHUNK) {
        let hi = (lo + CHUNK).min(dim);
        for (col, o) in out.iter_mut().enumerate() {
            let o = &mut o[lo..hi];
            for (j, v) in vs.iter().enumerate() {
                let s = c[(j, col)];
                if s != C64::new(0.0, 0.0) {
                    axpy(o, s, &v[lo..hi]);
                }
            }
        }
    }
    out
}

/// Gram matrix `G[i][j] = ⟨u_i, v_j⟩` of a Hermitian form, filled from its
/// upper triangle.
fn gram(u: &[&[C64]], v: &[&[C64]]) -> DMatrix<C64> {
    let n = u.len();
    let dim = u.first().map_or(0, |x| x.len());
    let mut g = DMatrix::<C64>::zeros(n, n);
    for lo in (0..dim).step_by(CHUNK) {
        let hi = (lo + CHUNK).min(dim);
        for i in 0..n {
            for j in i..n {
                g[(i, j)] += dot(&u[i][lo..hi], &v[j][lo..hi]);
            }
        }
    }
    for i in 0..n {
        g[(i, i)].im = 0.0;
        for j in i + 1..n {
            g[(j, i)] = g[(i, j)].conj();
        }
    }
    g
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Relative residual below which a guard column stops being refined.
const GUARD_TOL: f64 = 0.2;

#[derive(Clone, Debug, Serialize)]
pub struct LobpcgConfig {
    pub block: usize,
    /// Residual tolerance for pairs with `λ < kernel_threshold`.
    pub tol: f64,
    /// Residual tolerance for the remaining pairs, relative to `λ`.
    pub tol_rest: f64,
    pub kernel_threshold: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for LobpcgConfig {
    fn default() -> Self {
        Self { block: 8, tol: 1e-9, tol_rest: 1e-6, kernel_threshold: 1e-8, max_iter: 500, seed: 0x5eed }
    }
}

impl LobpcgConfig {
    fn tol_for(&self, lambda: f64) -> f64 {
        if lambda < self.kernel_threshold {
            self.tol
        } else {
            self.tol.max(self.tol_rest * lambda)
        }
    }

    /// Number of leading pairs that must converge: every pair below the
    /// kernel threshold plus the first one above it. The rest are guards.
    pub fn required(&self, lambda: &[f64]) -> usize {
        let m = lambda.len();
        match lambda.iter().position(|&l| l >= self.kernel_threshold) {
            Some(k) => (k + 1).min(m),
            None => m.saturating_sub(1).max(1),
        }
    }

    /// Pairs that still get a preconditioned residual direction. Guard
    /// columns drop out once their residual is a modest fraction of `λ`.
    fn active(&self, lambda: &[f64], residuals: &[f64]) -> Vec<usize> {
        let req = self.required(lambda);
        (0..lambda.len())
            .filter(|&i| {
                let tol = if i < req { self.tol_for(lambda[i]) } else { self.tol_for(lambda[i]).max(GUARD_TOL * lambda[i]) };
                residuals[i] > tol
            })
            .collect()
    }

    fn done(&self, lambda: &[f64], residuals: &[f64]) -> bool {
        (0..self.required(lambda)).all(|i| residuals[i] <= self.tol_for(lambda[i]))
    }
}

#[derive(Clone, Debug)]
pub struct EigenSolution {
    /// Ritz values, ascending. The kernel pairs and the first pair above
    /// the kernel threshold are converged.
    pub values: Vec<f64>,
    /// `B`-orthonormal Ritz vectors.
    pub vectors: Vec<CVec>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Vectors with their `A`- and `B`-images, transformed together. Either
/// image list may be empty when not yet computed.
struct Block {
    v: Vec<CVec>,
    av: Vec<CVec>,
    bv: Vec<CVec>,
}

fn refs(vs: &[CVec]) -> Vec<&[C64]> {
    vs.iter().map(|x| x.as_slice()).collect()
}

fn apply(op: Op, vs: &[CVec]) -> Vec<CVec> {
    vs.par_iter().map(|v| op(v)).collect()
}

impl Block {
    fn new(v: Vec<CVec>) -> Self {
        Block { v, av: Vec::new(), bv: Vec::new() }
    }

    fn len(&self) -> usize {
        self.v.len()
    }

    fn combine(&self, c: &DMatrix<C64>) -> Block {
        let part = |vs: &[CVec]| if vs.is_empty() { Vec::new() } else { combine(&refs(vs), c) };
        Block { v: part(&self.v), av: part(&self.av), bv: part(&self.bv) }
    }
}

/// Remove the `B`-components along `basis` (twice, for stability).
fn orth_against(target: &mut Block, basis: &Block) {
    for _ in 0..2 {
        for j in 0..target.len() {
            for i in 0..basis.len() {
                let c = -dot(&basis.bv[i], &target.v[j]);
                axpy(&mut target.v[j], c, &basis.v[i]);
                if !target.av.is_empty() {
                    axpy(&mut target.av[j], c, &basis.av[i]);
                }
                if !target.bv.is_empty() {
                    axpy(&mut target.bv[j], c, &basis.bv[i]);
                }
            }
        }
    }
}

/// `B`-orthonormalize by eigen-decomposition of the Gram matrix, dropping
/// numerically dependent directions.
fn svqb(mut blk: Block, b: Op) -> Block {
    if blk.len() == 0 {
        return blk;
    }
    if blk.bv.is_empty() {
        blk.bv = apply(b, &blk.v);
    }
    let g = gram(&refs(&blk.v), &refs(&blk.bv));
    let n = g.nrows();
    let d: Vec<f64> = (0..n).map(|i| g[(i, i)].re.max(f64::MIN_POSITIVE).sqrt().recip()).collect();
    let gs = DMatrix::from_fn(n, n, |i, j| g[(i, j)] * d[i] * d[j]);
    let (vals, vecs) = hermitian_eigen(&gs);
    let vmax = vals.last().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..n).filter(|&i| vals[i] > 1e-12 * vmax).collect();
    let c = DMatrix::from_fn(n, keep.len(), |r, k| vecs[(r, keep[k])] * d[r] / vals[keep[k]].sqrt());
    blk.combine(&c)
}

/// Smallest eigenpairs of `A x = λ B x` for Hermitian `A ⪰ 0`, `B ≻ 0`, by
/// locally optimal block preconditioned conjugate gradients.
///
/// Convergence of pair `i` means `‖A x_i − λ_i B x_i‖ ≤ tol · ‖B x_i‖`.
/// Pairs below `kernel_threshold` and the first pair above it must converge;
/// later columns are guard vectors. With no pair above the threshold all but
/// the last column must converge. If `project` is given it is applied to
/// every trial vector, which restricts the iteration to an invariant subspace
/// of the pencil.
pub fn lobpcg(dim: usize, a: Op, b: Op, t: Op, project: Option<Proj>, cfg: &LobpcgConfig) -> Result<EigenSolution> {
    let m = cfg.block.min(dim).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start: Vec<CVec> = (0..m)
        .map(|_| {
            let mut v: CVec = (0..dim).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            if let Some(p) = project {
                p(&mut v);
            }
            v
        })
        .collect();
    let mut x = svqb(Block::new(start), b);
    if x.len() < m {
        return Err(Error::NoConvergence { solver: "lobpcg", iterations: 0, residual: f64::NAN });
    }
    x.av = apply(a, &x.v);
    let mut p_blk = Block::new(Vec::new());
    let mut lambda = vec![0.0; m];
    let mut residuals = vec![f64::INFINITY; m];

    for it in 0..=cfg.max_iter {
        let mut w = Block::new(Vec::new());
        if it > 0 {
            if cfg.done(&lambda, &residuals) {
                // confirm with freshly applied operators
                let ax = apply(a, &x.v);
                let bx = apply(b, &x.v);
                let (vals, res) = ritz_residuals(&x.v, &ax, &bx);
                if cfg.done(&vals, &res) {
                    return Ok(EigenSolution { values: vals, vectors: x.v, residuals: res, iterations: it });
                }
                x.av = ax;
                x.bv = bx;
                lambda = vals;
                residuals = res;
            }
            if it == cfg.max_iter {
                break;
            }
            let active = cfg.active(&lambda, &residuals);
            let wv: Vec<CVec> = active
                .par_iter()
                .map(|&i| {
                    let mut r = x.av[i].clone();
                    axpy(&mut r, C64::new(-lambda[i], 0.0), &x.bv[i]);
                    let mut z = t(&r);
                    if let Some(p) = project {
                        p(&mut z);
                    }
                    z
                })
                .collect();
            w = Block::new(wv);
            orth_against(&mut w, &x);
            w = svqb(w, b);
            w.av = apply(a, &w.v);
            if p_blk.len() > 0 {
                orth_against(&mut p_blk, &x);
                orth_against(&mut p_blk, &w);
                p_blk = svqb(p_blk, b);
            }
        }
        // Rayleigh–Ritz on span(X, W, P)
        let mut s: Vec<&[C64]> = refs(&x.v);
        let mut as_: Vec<&[C64]> = refs(&x.av);
        let mut bs: Vec<&[C64]> = refs(&x.bv);
        for blk in [&w, &p_blk] {
            s.extend(refs(&blk.v));
            as_.extend(refs(&blk.av));
            bs.extend(refs(&blk.bv));
        }
        let gb = gram(&s, &bs);
        let ga = gram(&s, &as_);
        let (bvals, bvecs) = hermitian_eigen(&gb);
        let bmax = bvals.last().copied().unwrap_or(1.0);
        let keep: Vec<usize> = (0..bvals.len()).filter(|&i| bvals[i] > 1e-12 * bmax).collect();
        if keep.len() < m {
            return Err(Error::NoConvergence { solver: "lobpcg", iterations: it, residual: f64::NAN });
        }
        let z = DMatrix::from_fn(s.len(), keep.len(), |r, c| bvecs[(r, keep[c])] / bvals[keep[c]].sqrt());
        let h = z.adjoint() * &ga * &z;
        let (hvals, hvecs) = hermitian_eigen(&h);
        let c = &z * hvecs.columns(0, m);
        let new_x = Block { v: combine(&s, &c), av: combine(&as_, &c), bv: combine(&bs, &c) };
        lambda = hvals[..m].to_vec();
        for i in 0..m {
            let mut r = new_x.av[i].clone();
            axpy(&mut r, C64::new(-lambda[i], 0.0), &new_x.bv[i]);
            residuals[i] = norm(&r) / norm(&new_x.bv[i]).max(f64::MIN_POSITIVE);
        }
        // P: the W and P parts of the new iterates, for still active pairs
        let keep_p = cfg.active(&lambda, &residuals);
        p_blk = if it > 0 && !keep_p.is_empty() {
            let c_p = DMatrix::from_fn(s.len() - m, keep_p.len(), |r, k| c[(m + r, keep_p[k])]);
            let (s, as_, bs) = (&s[m..], &as_[m..], &bs[m..]);
            Block { v: combine(s, &c_p), av: combine(as_, &c_p), bv: combine(bs, &c_p) }
        } else {
            Block::new(Vec::new())
        };
        x = new_x;
        // refresh the images against drift of the recurrences
        if it % 20 == 19 {
            x.av = apply(a, &x.v);
            x.bv = apply(b, &x.v);
        }
        if std::env::var_os("LOBPCG_TRACE").is_some() {
            eprintln!("it {it} λ {:?} r {:?}", &lambda, &residuals);
        }
    }
    let worst = residuals[..cfg.required(&lambda)].iter().copied().fold(0.0, f64::max);
    Err(Error::NoConvergence { solver: "lobpcg", iterations: cfg.max_iter, residual: worst })
}

/// Rayleigh quotients and relative residuals of a block.
fn ritz_residuals(x: &[CVec], ax: &[CVec], bx: &[CVec]) -> (Vec<f64>, Vec<f64>) {
    x.iter()
        .zip(ax)
        .zip(bx)
        .map(|((x, ax), bx)| {
            let lam = dot(x, ax).re / dot(x, bx).re;
            let mut r = ax.clone();
            axpy(&mut r, C64::new(-lam, 0.0), bx);
            (lam, norm(&r) / norm(bx).max(f64::MIN_POSITIVE))
        })
        .unzip()
}

/// Integer dimension of a near-kernel with its gap certificate.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct GapCertificate {
    pub dimension: usize,
    /// `λ_{k+1} / max(λ_k, floor)`, where `λ_k` is the largest retained value.
    pub ratio: f64,
    pub largest_retained: Option<f64>,
    pub smallest_discarded: Option<f64>,
}

impl GapCertificate {
    pub const REQUIRED: f64 = 100.0;

    /// Count sorted `values` below `tol_zero`. With nothing retained the
    /// reference value is `tol_zero` itself; `floor` guards a zero divisor.
    pub fn from_sorted(values: &[f64], tol_zero: f64, floor: f64) -> Self {
        let k = values.iter().take_while(|&&v| v < tol_zero).count();
        let retained = (k > 0).then(|| values[k - 1]);
        let discarded = values.get(k).copied();
        let reference = retained.map_or(tol_zero, |v| v.max(floor));
        let ratio = discarded.map_or(f64::INFINITY, |d| d / reference);
        Self { dimension: k, ratio, largest_retained: retained, smallest_discarded: discarded }
    }

    pub fn certified(&self) -> bool {
        self.ratio >= Self::REQUIRED
    }

    pub fn require(&self, what: &str) -> Result<()> {
        if self.certified() {
            Ok(())
        } else {
            Err(Error::AmbiguousNullspace { what: what.into(), gap: self.ratio, required: Self::REQUIRED })
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CgStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Preconditioned conjugate gradients for a Hermitian positive semidefinite
/// system with consistent right-hand side. `project` (if given) removes a
/// known kernel from the iterates.
pub fn pcg(a: Op, rhs: &[C64], t: Op, project: Option<Proj>, tol: f64, max_iter: usize) -> Result<(CVec, CgStats)> {
    let dim = rhs.len();
    let bnorm = norm(rhs);
    let mut x = vec![C64::new(0.0, 0.0); dim];
    if bnorm == 0.0 {
        return Ok((x, CgStats::default()));
    }
    let mut r = rhs.to_vec();
    if let Some(p) = project {
        p(&mut r);
    }
    let mut z = t(&r);
    if let Some(p) = project {
        p(&mut z);
    }
    let mut p_dir = z.clone();
    let mut rz = dot(&r, &z).re;
    for it in 0..max_iter {
        let rel = norm(&r) / bnorm;
        if rel <= tol {
            return Ok((x, CgStats { iterations: it, relative_residual: rel }));
        }
        let ap = a(&p_dir);
        let pap = dot(&p_dir, &ap).re;
        if pap <= 0.0 {
            // direction in the kernel: the residual cannot be reduced further
            return Ok((x, CgStats { iterations: it, relative_residual: rel }));
        }
        let alpha = rz / pap;
        axpy(&mut x, C64::new(alpha, 0.0), &p_dir);
        axpy(&mut r, C64::new(-alpha, 0.0), &ap);
        if let Some(p) = project {
            p(&mut r);
        }
        z = t(&r);
        if let Some(p) = project {
            p(&mut z);
        }
        let rz_new = dot(&r, &z).re;
        let beta = rz_new / rz;
        rz = rz_new;
        for (pd, zv) in p_dir.iter_mut().zip(&z) {
            *pd = zv + *pd * beta;
        }
    }
    let rel = norm(&r) / bnorm;
    if rel <= tol {
        Ok((x, CgStats { iterations: max_iter, relative_residual: rel }))
    } else {
        Err(Error::NoConvergence { solver: "pcg", iterations: max_iter, residual: rel })
    }
}

/// Orthonormalize `vs` in the inner product `⟨x, B y⟩` (Gram–Schmidt, twice).
pub fn b_orthonormalize(vs: &mut Vec<CVec>, b: Op) {
    let mut out: Vec<(CVec, CVec)> = Vec::new();
    for v in vs.drain(..) {
        let mut v = v;
        for _ in 0..2 {
            for (u, bu) in &out {
                let c = dot(bu, &v);
                axpy(&mut v, -c, u);
            }
        }
        let bv = b(&v);
        let nv = dot(&v, &bv).re.sqrt();
        if nv > 0.0 {
            let s = C64::new(1.0 / nv, 0.0);
            out.push((v.iter().map(|z| z * s).collect(), bv.iter().map(|z| z * s).collect()));
        }
    }
    *vs = out.into_iter().map(|(v, _)| v).collect();
}

/// Principal angles (degrees, ascending) between the spans of two
/// `B`-orthonormal families.
pub fn principal_angles(u: &[CVec], v: &[CVec], b: Op) -> Vec<f64> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    let bv: Vec<CVec> = v.iter().map(|x| b(x)).collect();
    let m = DMatrix::from_fn(u.len(), v.len(), |i, j| dot(&u[i], &bv[j]));
    principal_angles_from_overlap(&m)
}

/// Principal angles from the overlap matrix `Uᴴ B V` of orthonormal bases.
pub fn principal_angles_from_overlap(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let sv = m.clone().singular_values();
    let mut angles: Vec<f64> = sv.iter().map(|s| s.clamp(0.0, 1.0).acos().to_degrees()).collect();
    angles.sort_by(f64::total_cmp);
    angles
}

/// Smallest principal angle, 90° when either space is trivial.
pub fn min_angle(angles: &[f64]) -> f64 {
    angles.first().copied().unwrap_or(90.0)
}

/// Distance `‖P_U − P_V‖₂` between spans of orthonormal families; 1 when the
/// dimensions differ.
pub fn subspace_distance(u: &[CVec], v: &[CVec], b: Op) -> f64 {
    if u.len() != v.len() {
        return 1.0;
    }
    if u.is_empty() {
        return 0.0;
    }
    let angles = principal_angles(u, v, b);
    angles.last().copied().unwrap_or(0.0).to_radians().sin()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_op(d: Vec<f64>) -> impl Fn(&[C64]) -> CVec + Sync {
        move |x: &[C64]| x.iter().zip(&d).map(|(v, s)| v * s).collect()
    }

    #[test]
    fn lobpcg_finds_kernel_of_diagonal() {
        let n = 200;
        let d: Vec<f64> = (0..n).map(|i| if i < 3 { 0.0 } else { 1.0 + i as f64 }).collect();
        let a = diag_op(d.clone());
        let b = diag_op(vec![2.0; n]);
        let t = |x: &[C64]| x.to_vec();
        let cfg = LobpcgConfig { block: 7, tol: 1e-10, max_iter: 400, seed: 3, ..LobpcgConfig::default() };
        let sol = lobpcg(n, &a, &b, &t, None, &cfg).unwrap();
        let cert = GapCertificate::from_sorted(&sol.values, 1e-8, f64::EPSILON);
        assert_eq!(cert.dimension, 3);
        assert!(cert.certified());
        assert!((sol.values[3] - 2.0).abs() < 1e-8);
        for (i, v) in sol.vectors.iter().enumerate() {
            let bn = dot(v, &b(v)).re;
            assert!((bn - 1.0).abs() < 1e-10, "vector {i}");
        }
    }

    #[test]
    fn pcg_solves_spd_system() {
        let n = 50;
        let d: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        let a = diag_op(d.clone());
        let rhs: CVec = (0..n).map(|i| C64::new(i as f64, 1.0)).collect();
        let t = |x: &[C64]| x.to_vec();
        let (x, st) = pcg(&a, &rhs, &t, None, 1e-12, 200).unwrap();
        assert!(st.relative_residual <= 1e-12);
        for i in 0..n {
            assert!((x[i] * d[i] - rhs[i]).norm() < 1e-9);
        }
    }

    #[test]
    fn gap_rules() {
        let c = GapCertificate::from_sorted(&[1e-14, 2e-14, 0.5], 1e-8, f64::EPSILON);
        assert_eq!(c.dimension, 2);
        assert!(c.certified());
        let c = GapCertificate::from_sorted(&[1e-9, 5e-8], 1e-8, f64::EPSILON);
        assert!(!c.certified());
        let c = GapCertificate::from_sorted(&[0.3, 1.0], 1e-8, f64::EPSILON);
        assert_eq!(c.dimension, 0);
        assert!(c.certified());
    }

    #[test]
    fn angles_between_coordinate_planes() {
        let e = |i: usize| -> CVec { (0..3).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect() };
        let id = |x: &[C64]| x.to_vec();
        let a = principal_angles(&[e(0)], &[e(1)], &id);
        assert!((a[0] - 90.0).abs() < 1e-12);
        assert_eq!(min_angle(&[]), 90.0);
        assert!(subspace_distance(&[e(0), e(1)], &[e(1), e(0)], &id) < 1e-12);
    }
}
