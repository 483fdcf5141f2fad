//! Exact fiberwise exterior algebra on the rank-4 contact distribution.
//!
//! A fiber of `Λ²D*` is written in the adapted-frame basis
//!
//! ```text
//! E = (θ1∧Φθ1, θ2∧Φθ2, θ1∧θ2, Φθ1∧Φθ2, θ1∧Φθ2, Φθ1∧θ2)
//! ```
//!
//! with transverse volume `θ1∧Φθ1∧θ2∧Φθ2`. The coframe pullback convention is
//! `θi∘Φ = −Φθi`, `Φθi∘Φ = θi`. Everything in this module is exact rational
//! (or Gaussian rational) arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::{half, q, QMat, Subspace, Q};

/// Labels of the adapted-frame basis of `Λ²D*`.
pub const BASIS_LABELS: [&str; 6] =
    ["θ1∧Φθ1", "θ2∧Φθ2", "θ1∧θ2", "Φθ1∧Φθ2", "θ1∧Φθ2", "Φθ1∧θ2"];

/// Index pairs into the adapted coframe `(θ1, Φθ1, θ2, Φθ2)` for each basis element.
pub const BASIS_PAIRS: [(usize, usize); 6] = [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)];

/// A fiber of `Λ²D*` in the adapted-frame basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrameForm2 {
    pub coeffs: [Q; 6],
}

impl FrameForm2 {
    pub fn zero() -> Self {
        Self { coeffs: [Q::zero(); 6] }
    }

    /// The `i`-th basis element (zero-based, so `basis(0)` is `θ1∧Φθ1`).
    pub fn basis(i: usize) -> Self {
        let mut f = Self::zero();
        f.coeffs[i] = Q::one();
        f
    }

    pub fn from_ints(c: [i64; 6]) -> Self {
        Self { coeffs: c.map(q) }
    }

    /// `ω = θ1∧Φθ1 + θ2∧Φθ2`.
    pub fn omega() -> Self {
        Self::from_ints([1, 1, 0, 0, 0, 0])
    }

    pub fn to_vec(&self) -> Vec<Q> {
        self.coeffs.to_vec()
    }

    pub fn from_slice(v: &[Q]) -> Self {
        let mut f = Self::zero();
        f.coeffs.copy_from_slice(v);
        f
    }

    pub fn to_f64(&self) -> [f64; 6] {
        self.coeffs.map(|c| *c.numer() as f64 / *c.denom() as f64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl Add for FrameForm2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        out
    }
}

impl Sub for FrameForm2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for FrameForm2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self { coeffs: self.coeffs.map(|c| -c) }
    }
}

impl Mul<FrameForm2> for Q {
    type Output = FrameForm2;
    fn mul(self, rhs: FrameForm2) -> FrameForm2 {
        FrameForm2 { coeffs: rhs.coeffs.map(|c| self * c) }
    }
}

/// The four pointwise projectors on `Λ²D*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Projector {
    /// `½(id + *̄)`
    SelfDual,
    /// `½(id − *̄)`
    AntiSelfDual,
    /// `½(id + Φ)`
    PhiInvariant,
    /// `½(id − Φ)`
    PhiAntiInvariant,
}

impl Projector {
    pub const ALL: [Projector; 4] =
        [Self::SelfDual, Self::AntiSelfDual, Self::PhiInvariant, Self::PhiAntiInvariant];

    pub fn complement(self) -> Self {
        match self {
            Self::SelfDual => Self::AntiSelfDual,
            Self::AntiSelfDual => Self::SelfDual,
            Self::PhiInvariant => Self::PhiAntiInvariant,
            Self::PhiAntiInvariant => Self::PhiInvariant,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::SelfDual => "g+",
            Self::AntiSelfDual => "g-",
            Self::PhiInvariant => "phi+",
            Self::PhiAntiInvariant => "phi-",
        }
    }
}

impl fmt::Display for Projector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Projector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "g+" => Ok(Self::SelfDual),
            "g-" => Ok(Self::AntiSelfDual),
            "phi+" | "Φ+" => Ok(Self::PhiInvariant),
            "phi-" | "Φ-" => Ok(Self::PhiAntiInvariant),
            _ => Err(format!("unknown projector `{s}`")),
        }
    }
}

/// Transverse star on `E`: e1↔e2, e3↦−e4, e4↦−e3, e5↔e6.
pub fn star_matrix() -> QMat {
    #[rustfmt::skip]
    let m = QMat::from_i64(6, 6, &[
        0, 1, 0, 0, 0, 0,
        1, 0, 0, 0, 0, 0,
        0, 0, 0, -1, 0, 0,
        0, 0, -1, 0, 0, 0,
        0, 0, 0, 0, 0, 1,
        0, 0, 0, 0, 1, 0,
    ]);
    m
}

/// Action `α ↦ α(Φ·, Φ·)` on `E`: e1, e2 fixed, e3↔e4, e5↦−e6, e6↦−e5.
pub fn phi_matrix() -> QMat {
    #[rustfmt::skip]
    let m = QMat::from_i64(6, 6, &[
        1, 0, 0, 0, 0, 0,
        0, 1, 0, 0, 0, 0,
        0, 0, 0, 1, 0, 0,
        0, 0, 1, 0, 0, 0,
        0, 0, 0, 0, 0, -1,
        0, 0, 0, 0, -1, 0,
    ]);
    m
}

/// The pair of involutions the projectors are built from. Kept as a value so
/// identity checks can be run against a modified operator.
#[derive(Clone, Debug)]
pub struct FiberOps {
    pub star: QMat,
    pub phi: QMat,
}

impl Default for FiberOps {
    fn default() -> Self {
        Self { star: star_matrix(), phi: phi_matrix() }
    }
}

impl FiberOps {
    pub fn projector_matrix(&self, which: Projector) -> QMat {
        let id = QMat::identity(6);
        let p = match which {
            Projector::SelfDual => id.add(&self.star),
            Projector::AntiSelfDual => id.sub(&self.star),
            Projector::PhiInvariant => id.add(&self.phi),
            Projector::PhiAntiInvariant => id.sub(&self.phi),
        };
        p.scale(half())
    }

    /// Image of the projector.
    pub fn eigenspace(&self, which: Projector) -> Subspace {
        Subspace::span(6, &self.projector_matrix(which).columns())
    }
}

fn apply(m: &QMat, a: &FrameForm2) -> FrameForm2 {
    FrameForm2::from_slice(&m.apply(&a.coeffs))
}

pub fn star2(a: &FrameForm2) -> FrameForm2 {
    apply(&star_matrix(), a)
}

pub fn phi_act2(a: &FrameForm2) -> FrameForm2 {
    apply(&phi_matrix(), a)
}

pub fn projector_matrix(which: Projector) -> QMat {
    FiberOps::default().projector_matrix(which)
}

pub fn project(a: &FrameForm2, which: Projector) -> FrameForm2 {
    apply(&projector_matrix(which), a)
}

/// Coefficient `c` with `a∧b = c·θ1∧Φθ1∧θ2∧Φθ2`.
pub fn wedge_top(a: &FrameForm2, b: &FrameForm2) -> Q {
    let (a, b) = (&a.coeffs, &b.coeffs);
    a[0] * b[1] + a[1] * b[0] - (a[2] * b[3] + a[3] * b[2]) + a[4] * b[5] + a[5] * b[4]
}

/// Induced metric inner product, `⟨a, b⟩ = wedge_top(a, *̄b)`.
pub fn inner(a: &FrameForm2, b: &FrameForm2) -> Q {
    wedge_top(a, &star2(b))
}

/// Complex structure on `Λ_Φ^-` for which `α + i·R(α)` has type (2,0):
/// `θ1∧θ2 − Φθ1∧Φθ2 ↦ θ1∧Φθ2 + Φθ1∧θ2 ↦ −(θ1∧θ2 − Φθ1∧Φθ2)`, zero on `Λ_Φ^+`.
pub fn anti_invariant_rotation_matrix() -> QMat {
    let h = half();
    let mut m = QMat::zeros(6, 6);
    // columns: images of e3, e4, e5, e6
    for (col, sign) in [(2usize, 1i64), (3, -1)] {
        m[(4, col)] = h * q(sign);
        m[(5, col)] = h * q(sign);
    }
    for col in [4usize, 5] {
        m[(2, col)] = -h;
        m[(3, col)] = h;
    }
    m
}

/// Outcome of one exact identity check.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub paper_anchor: String,
    pub pass: bool,
    pub detail: String,
}

impl IdentityCheck {
    fn new(identity: &str, anchor: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self { identity: identity.into(), paper_anchor: anchor.into(), pass, detail: detail.into() }
    }
}

fn span_of(forms: &[FrameForm2]) -> Subspace {
    Subspace::span(6, &forms.iter().map(FrameForm2::to_vec).collect::<Vec<_>>())
}

/// The displayed generator lists of the four eigenbundles, with `ω` as the
/// first generator of `Λ_g^+`.
pub fn span_lists() -> [(Projector, Vec<FrameForm2>); 4] {
    let f = FrameForm2::from_ints;
    [
        (
            Projector::PhiInvariant,
            vec![f([1, 0, 0, 0, 0, 0]), f([0, 1, 0, 0, 0, 0]), f([0, 0, 1, 1, 0, 0]), f([0, 0, 0, 0, 1, -1])],
        ),
        (Projector::PhiAntiInvariant, vec![f([0, 0, 1, -1, 0, 0]), f([0, 0, 0, 0, 1, 1])]),
        (Projector::SelfDual, vec![f([1, 1, 0, 0, 0, 0]), f([0, 0, 1, -1, 0, 0]), f([0, 0, 0, 0, 1, 1])]),
        (Projector::AntiSelfDual, vec![f([1, -1, 0, 0, 0, 0]), f([0, 0, 1, 1, 0, 0]), f([0, 0, 0, 0, 1, -1])]),
    ]
}

fn list_label(which: Projector) -> &'static str {
    match which {
        Projector::PhiInvariant => "Λ_Φ^+ = span{θ1∧Φθ1, θ2∧Φθ2, θ1∧θ2 + Φθ1∧Φθ2, θ1∧Φθ2 − Φθ1∧θ2}",
        Projector::PhiAntiInvariant => "Λ_Φ^- = span{θ1∧θ2 − Φθ1∧Φθ2, θ1∧Φθ2 + Φθ1∧θ2}",
        Projector::SelfDual => "Λ_g^+ = span{θ1∧Φθ1 + θ2∧Φθ2, θ1∧θ2 − Φθ1∧Φθ2, θ1∧Φθ2 + Φθ1∧θ2}",
        Projector::AntiSelfDual => "Λ_g^- = span{θ1∧Φθ1 − θ2∧Φθ2, θ1∧θ2 + Φθ1∧Φθ2, θ1∧Φθ2 − Φθ1∧θ2}",
    }
}

/// Dimension of one eigenbundle fiber.
pub fn subspace_dim(which: Projector) -> usize {
    FiberOps::default().eigenspace(which).dim()
}

/// Basis of the intersection of two eigenbundle fibers.
pub fn intersection(a: Projector, b: Projector) -> Vec<FrameForm2> {
    let ops = FiberOps::default();
    ops.eigenspace(a)
        .intersection(&ops.eigenspace(b))
        .basis
        .iter()
        .map(|v| FrameForm2::from_slice(v))
        .collect()
}

pub fn verify_span_identities() -> Vec<IdentityCheck> {
    verify_span_identities_with(&FiberOps::default())
}

/// The span-list and splitting identities, checked exactly against `ops`.
pub fn verify_span_identities_with(ops: &FiberOps) -> Vec<IdentityCheck> {
    const LISTS: &str = "fiberwise eigenbundle generators";
    const SPLIT: &str = "Λ_Φ^+ = ℝω ⊕ Λ_g^-, Λ_g^+ = ℝω ⊕ Λ_Φ^-; Λ_Φ^+ ∩ Λ_g^+ = ℝω, Λ_Φ^- ∩ Λ_g^- = 0";
    let mut out = Vec::new();
    for (which, gens) in span_lists() {
        let ok = ops.eigenspace(which).equals(&span_of(&gens));
        out.push(IdentityCheck::new(
            list_label(which),
            LISTS,
            ok,
            format!("dim {} eigenspace = {}", which, ops.eigenspace(which).dim()),
        ));
    }
    let w = Subspace::line(FrameForm2::omega().to_vec());
    let phi_p = ops.eigenspace(Projector::PhiInvariant);
    let phi_m = ops.eigenspace(Projector::PhiAntiInvariant);
    let g_p = ops.eigenspace(Projector::SelfDual);
    let g_m = ops.eigenspace(Projector::AntiSelfDual);

    out.push(IdentityCheck::new(
        "Λ_Φ^+ = ℝω ⊕ Λ_g^-",
        SPLIT,
        phi_p.is_direct_sum_of(&w, &g_m),
        format!("dims {} = 1 + {}", phi_p.dim(), g_m.dim()),
    ));
    out.push(IdentityCheck::new(
        "Λ_g^+ = ℝω ⊕ Λ_Φ^-",
        SPLIT,
        g_p.is_direct_sum_of(&w, &phi_m),
        format!("dims {} = 1 + {}", g_p.dim(), phi_m.dim()),
    ));
    let cap = phi_p.intersection(&g_p);
    out.push(IdentityCheck::new(
        "Λ_Φ^+ ∩ Λ_g^+ = ℝω",
        SPLIT,
        cap.equals(&w),
        format!("intersection dim {}", cap.dim()),
    ));
    let cap = phi_m.intersection(&g_m);
    out.push(IdentityCheck::new(
        "Λ_Φ^- ∩ Λ_g^- = 0",
        SPLIT,
        cap.dim() == 0,
        format!("intersection dim {}", cap.dim()),
    ));
    out
}

/// Operator-level checks: `*̄ω = ω`, `Φω = ω`, involutions and commutation.
pub fn verify_operator_identities_with(ops: &FiberOps) -> Vec<IdentityCheck> {
    let w = FrameForm2::omega();
    let id = QMat::identity(6);
    let star_w = FrameForm2::from_slice(&ops.star.apply(&w.coeffs));
    let phi_w = FrameForm2::from_slice(&ops.phi.apply(&w.coeffs));
    let comm = ops.star.mul(&ops.phi).sub(&ops.phi.mul(&ops.star));
    vec![
        IdentityCheck::new("*̄ω = ω", "Φω = ω, *̄ω = ω", star_w == w, "star applied to ω"),
        IdentityCheck::new("Φω = ω", "Φω = ω, *̄ω = ω", phi_w == w, "Φ applied to ω"),
        IdentityCheck::new("*̄∘*̄ = id on Λ²D", "transverse star is an involution", ops.star.mul(&ops.star) == id, ""),
        IdentityCheck::new("Φ∘Φ = id on Λ²D", "α(Φ·,Φ·) is an involution", ops.phi.mul(&ops.phi) == id, ""),
        IdentityCheck::new("[*̄, Φ] = 0", "both preserve ℝω ⊕ Λ_Φ^- ⊕ Λ_g^-", comm.is_zero(), ""),
    ]
}

// ---------------------------------------------------------------------------
// Complexified fibers

/// Gaussian rational.
pub type QC = Complex<Q>;

fn qc(re: i64, im: i64) -> QC {
    Complex::new(q(re), q(im))
}

/// Labels of the complex basis `(ω¹∧ω², ω¹∧ω̄¹, ω²∧ω̄², ω¹∧ω̄², ω̄¹∧ω², ω̄¹∧ω̄²)`.
pub const COMPLEX_BASIS_LABELS: [&str; 6] = ["ω¹∧ω²", "ω¹∧ω̄¹", "ω²∧ω̄²", "ω¹∧ω̄²", "ω̄¹∧ω²", "ω̄¹∧ω̄²"];

/// Bidegree of each complex basis element.
pub const COMPLEX_BASIS_BIDEGREE: [(u8, u8); 6] = [(2, 0), (1, 1), (1, 1), (1, 1), (1, 1), (0, 2)];

/// `ω^1, ω^2, ω̄^1, ω̄^2` as coefficient vectors on `(θ1, Φθ1, θ2, Φθ2)`.
pub fn complex_coframe() -> [[QC; 4]; 4] {
    let z = qc(0, 0);
    [
        [qc(1, 0), qc(0, 1), z, z],
        [z, z, qc(1, 0), qc(0, 1)],
        [qc(1, 0), qc(0, -1), z, z],
        [z, z, qc(1, 0), qc(0, -1)],
    ]
}

/// Wedge of two complex 1-forms on the adapted coframe, in `E` coordinates.
pub fn wedge1(a: &[QC; 4], b: &[QC; 4]) -> [QC; 6] {
    BASIS_PAIRS.map(|(i, j)| a[i] * b[j] - a[j] * b[i])
}

/// A fiber of `Λ²D*⊗ℂ` in the complex basis [`COMPLEX_BASIS_LABELS`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexFrameForm2 {
    pub coeffs: [QC; 6],
}

impl ComplexFrameForm2 {
    pub fn basis(i: usize) -> Self {
        let mut c = [qc(0, 0); 6];
        c[i] = qc(1, 0);
        Self { coeffs: c }
    }

    /// Complex conjugation, which swaps ω^i and ω̄^i.
    pub fn conj(&self) -> Self {
        let c = self.coeffs.map(|z| z.conj());
        Self { coeffs: [c[5], -c[1], -c[2], c[4], c[3], c[0]] }
    }

    /// Expansion in the real basis `E`, with complex coefficients.
    pub fn expand(&self) -> [QC; 6] {
        let cols = complex_basis_in_e();
        let mut out = [qc(0, 0); 6];
        for (k, col) in cols.iter().enumerate() {
            for i in 0..6 {
                out[i] = out[i] + self.coeffs[k] * col[i];
            }
        }
        out
    }
}

impl Add for ComplexFrameForm2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.coeffs;
        for (a, b) in c.iter_mut().zip(rhs.coeffs) {
            *a = *a + b;
        }
        Self { coeffs: c }
    }
}

impl Mul<ComplexFrameForm2> for QC {
    type Output = ComplexFrameForm2;
    fn mul(self, rhs: ComplexFrameForm2) -> ComplexFrameForm2 {
        ComplexFrameForm2 { coeffs: rhs.coeffs.map(|c| self * c) }
    }
}

/// The complex basis elements expanded in `E`.
pub fn complex_basis_in_e() -> [[QC; 6]; 6] {
    let [w1, w2, b1, b2] = complex_coframe();
    [wedge1(&w1, &w2), wedge1(&w1, &b1), wedge1(&w2, &b2), wedge1(&w1, &b2), wedge1(&b1, &w2), wedge1(&b1, &b2)]
}

fn real_part_if_real(v: &[QC; 6]) -> Option<Vec<Q>> {
    v.iter().all(|z| z.im.is_zero()).then(|| v.iter().map(|z| z.re).collect())
}

/// Real basis of `(Λ_Φ^{1,1})_ℝ` as complex combinations of the complex basis.
pub fn real_11_generators() -> Vec<ComplexFrameForm2> {
    let b = ComplexFrameForm2::basis;
    let i = qc(0, 1);
    vec![
        i * b(1),
        i * b(2),
        b(3) + b(4),
        i * (b(3) + qc(-1, 0) * b(4)),
    ]
}

/// Real basis of `(Λ_Φ^{2,0} ⊕ Λ_Φ^{0,2})_ℝ`.
pub fn real_20_02_generators() -> Vec<ComplexFrameForm2> {
    let b = ComplexFrameForm2::basis;
    let i = qc(0, 1);
    vec![b(0) + b(5), i * (b(0) + qc(-1, 0) * b(5))]
}

/// Real 12×12 form of a complex 6×6 matrix given by columns.
fn realify(cols: &[[QC; 6]]) -> QMat {
    let n = cols.len();
    let mut m = QMat::zeros(12, 2 * n);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..6 {
            m[(i, j)] = c[i].re;
            m[(i + 6, j)] = c[i].im;
            m[(i, n + j)] = -c[i].im;
            m[(i + 6, n + j)] = c[i].re;
        }
    }
    m
}

/// Exact checks of the bidegree real spans against the Φ eigenbundles.
pub fn bidegree_bases() -> Vec<IdentityCheck> {
    const ANCHOR: &str = "ω^i = θ^i + √−1 Φθ^i";
    let ops = FiberOps::default();
    let mut out = Vec::new();

    let expand_real = |gens: &[ComplexFrameForm2]| -> Option<Subspace> {
        let vs: Option<Vec<Vec<Q>>> = gens.iter().map(|g| real_part_if_real(&g.expand())).collect();
        vs.map(|vs| Subspace::span(6, &vs))
    };

    let cols = complex_basis_in_e();
    let full = realify(&cols).rank() == 12;
    out.push(IdentityCheck::new(
        "Λ²_{D,ℂ} = Λ_Φ^{2,0} ⊕ Λ_Φ^{1,1} ⊕ Λ_Φ^{0,2}",
        ANCHOR,
        full,
        "complex basis has full rank",
    ));

    let s11 = expand_real(&real_11_generators());
    out.push(IdentityCheck::new(
        "Λ_Φ^+ = (Λ_Φ^{1,1})_ℝ",
        "Λ_Φ^+ = (Λ_Φ^{1,1})_ℝ",
        s11.as_ref().is_some_and(|s| s.equals(&ops.eigenspace(Projector::PhiInvariant))),
        "real (1,1) generators span the Φ-invariant fiber",
    ));
    let s2002 = expand_real(&real_20_02_generators());
    out.push(IdentityCheck::new(
        "Λ_Φ^- = (Λ_Φ^{2,0} ⊕ Λ_Φ^{0,2})_ℝ",
        "Λ_Φ^- = (Λ_Φ^{2,0} ⊕ Λ_Φ^{0,2})_ℝ",
        s2002.as_ref().is_some_and(|s| s.equals(&ops.eigenspace(Projector::PhiAntiInvariant))),
        "real (2,0)+(0,2) generators span the Φ-anti-invariant fiber",
    ));

    // conjugation acts on the basis as computed from the expansion
    let conj_ok = (0..6).all(|k| {
        let b = ComplexFrameForm2::basis(k);
        let lhs = b.conj().expand();
        let rhs = b.expand().map(|z| z.conj());
        lhs == rhs && b.conj().conj() == b
    });
    out.push(IdentityCheck::new(
        "conj(Λ_Φ^{p,q}) = Λ_Φ^{q,p}",
        "H_Φ^{p,q} = conj(H_Φ^{q,p})",
        conj_ok && ComplexFrameForm2::basis(0).conj() == ComplexFrameForm2::basis(5),
        "conjugation swaps ω¹∧ω² and ω̄¹∧ω̄², is an involution",
    ));

    // Θ = α + i R(α) is of type (2,0) for α ∈ Λ_Φ^-
    let rot = anti_invariant_rotation_matrix();
    let w12 = Subspace::span(12, &[realify(&[cols[0]]).column(0), realify(&[cols[0]]).column(1)]);
    let theta_ok = ops.eigenspace(Projector::PhiAntiInvariant).basis.iter().all(|a| {
        let r = rot.apply(a);
        let mut v = a.clone();
        v.extend(r);
        w12.contains(&v)
    });
    out.push(IdentityCheck::new(
        "α + √−1 R(α) ∈ Λ_Φ^{2,0} for α ∈ Λ_Φ^-",
        "Θ = α + iΦα ∈ Ω_Φ^{2,0}",
        theta_ok,
        "rotation on the anti-invariant fiber",
    ));
    out
}

/// Every fiberwise check, in report order.
pub fn all_identities_with(ops: &FiberOps) -> Vec<IdentityCheck> {
    let mut v = verify_operator_identities_with(ops);
    v.extend(verify_span_identities_with(ops));
    v.extend(bidegree_bases());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> FrameForm2 {
        FrameForm2::basis(i)
    }

    #[test]
    fn star_examples() {
        let w = FrameForm2::omega();
        assert_eq!(star2(&w), w);
        assert_eq!(star2(&e(2)), -e(3));
        assert_eq!(star2(&FrameForm2::zero()), FrameForm2::zero());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_act2(&FrameForm2::omega()), FrameForm2::omega());
        assert_eq!(phi_act2(&e(2)), e(3));
        let v = e(4) - e(5);
        assert_eq!(phi_act2(&v), v);
    }

    #[test]
    fn project_examples() {
        assert_eq!(project(&e(2), Projector::SelfDual), half() * (e(2) - e(3)));
        assert_eq!(project(&FrameForm2::omega(), Projector::PhiInvariant), FrameForm2::omega());
        let v = e(0) - e(1);
        assert_eq!(project(&v, Projector::AntiSelfDual), v);
    }

    #[test]
    fn wedge_examples() {
        let w = FrameForm2::omega();
        assert_eq!(wedge_top(&w, &w), q(2));
        assert_eq!(wedge_top(&e(2), &e(2)), q(0));
        assert_eq!(wedge_top(&e(4), &e(5)), q(1));
    }

    #[test]
    fn identities_all_pass() {
        let checks = verify_span_identities();
        assert_eq!(checks.len(), 8);
        for c in &checks {
            assert!(c.pass, "{} failed: {}", c.identity, c.detail);
        }
        for c in all_identities_with(&FiberOps::default()) {
            assert!(c.pass, "{} failed: {}", c.identity, c.detail);
        }
    }

    #[test]
    fn single_queries() {
        use Projector::*;
        assert!(intersection(PhiAntiInvariant, AntiSelfDual).is_empty());
        assert_eq!(subspace_dim(PhiInvariant), 4);
        assert_eq!(subspace_dim(PhiAntiInvariant), 2);
        let cap = intersection(PhiInvariant, SelfDual);
        assert_eq!(cap.len(), 1);
    }

    #[test]
    fn misprinted_first_generator_is_rejected() {
        // θ1∧Φθ1 − θ2∧Φθ2 is anti-self-dual, so it cannot lie in Λ_g^+.
        let v = e(0) - e(1);
        assert_eq!(star2(&v), -v);
    }

    #[test]
    fn bidegree_expansions() {
        let i = qc(0, 1);
        let a = (i * ComplexFrameForm2::basis(1)).expand();
        assert_eq!(a, [qc(2, 0), qc(0, 0), qc(0, 0), qc(0, 0), qc(0, 0), qc(0, 0)]);
        let b = (ComplexFrameForm2::basis(0) + ComplexFrameForm2::basis(5)).expand();
        assert_eq!(b, [qc(0, 0), qc(0, 0), qc(2, 0), qc(-2, 0), qc(0, 0), qc(0, 0)]);
        for c in bidegree_bases() {
            assert!(c.pass, "{}", c.identity);
        }
    }

    #[test]
    fn tampered_star_is_caught() {
        let mut ops = FiberOps::default();
        ops.star = ops.star.scale(q(-1));
        let bad: Vec<_> = all_identities_with(&ops).into_iter().filter(|c| !c.pass).collect();
        assert!(bad.iter().any(|c| c.identity == "*̄ω = ω"));
    }
}
