//! Periodic 4-dimensional grid with FFT-based differentiation.
//!
//! Nodes sit at `x_a = 2π j_a / N`, `j_a ∈ 0..N`, and are stored with axis 0
//! slowest: `node = ((j0·N + j1)·N + j2)·N + j3`. The axes are
//! `(x1, y1, x2, y2)`.
//!
//! Two derivative symbols are available. [`Grid::derivative`] is the exact
//! derivative of the complex trigonometric interpolant on the frequency set
//! `{−N/2+1, …, N/2}`; it is skew-Hermitian and annihilates only constants.
//! [`Grid::derivative_real`] zeroes the Nyquist frequency, which keeps real
//! fields real, and is used for coefficient fields such as `J`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub const AXES: usize = 4;

#[derive(Clone)]
pub struct Grid {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// One-sided symbol per 1D frequency index.
    wave: Vec<f64>,
    /// Nyquist-free symbol per 1D frequency index.
    wave_real: Vec<f64>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid").field("n", &self.n).finish()
    }
}

impl Grid {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let wave = (0..n)
            .map(|j| if j <= n / 2 { j as f64 } else { j as f64 - n as f64 })
            .collect();
        let wave_real = (0..n)
            .map(|j| {
                if 2 * j == n {
                    0.0
                } else if j < n / 2 {
                    j as f64
                } else {
                    j as f64 - n as f64
                }
            })
            .collect();
        Self { n, forward, inverse, wave, wave_real }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> usize {
        self.n.pow(4)
    }

    /// Quadrature weight of one node, `(2π/N)^4`.
    pub fn cell_volume(&self) -> f64 {
        (2.0 * PI / self.n as f64).powi(4)
    }

    pub fn node_index(&self, j: [usize; 4]) -> usize {
        ((j[0] * self.n + j[1]) * self.n + j[2]) * self.n + j[3]
    }

    pub fn multi_index(&self, node: usize) -> [usize; 4] {
        let n = self.n;
        [node / (n * n * n), (node / (n * n)) % n, (node / n) % n, node % n]
    }

    /// Coordinates of a node. The ratio `j/N` is formed first so that node
    /// `j` of an `N` grid and node `2j` of a `2N` grid agree bit for bit.
    pub fn coords(&self, node: usize) -> [f64; 4] {
        self.multi_index(node).map(|j| 2.0 * PI * (j as f64 / self.n as f64))
    }

    /// Phase `k·x` of an integer wavevector at a node, reduced mod `2π`
    /// through exact integer arithmetic.
    pub fn phase(&self, node: usize, k: [i64; 4]) -> f64 {
        let j = self.multi_index(node);
        let n = self.n as i64;
        let m: i64 = (0..4).map(|a| k[a] * j[a] as i64).sum::<i64>().rem_euclid(n);
        2.0 * PI * (m as f64 / self.n as f64)
    }

    fn stride(&self, axis: usize) -> usize {
        self.n.pow((AXES - 1 - axis) as u32)
    }

    fn transform_axis(&self, data: &mut [Complex64], axis: usize, fft: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        if axis == AXES - 1 {
            fft.process(data);
            return;
        }
        let s = self.stride(axis);
        let block = s * n;
        let mut line = vec![Complex64::default(); n];
        for outer in 0..data.len() / block {
            let base = outer * block;
            for inner in 0..s {
                for (t, v) in line.iter_mut().enumerate() {
                    *v = data[base + inner + t * s];
                }
                fft.process(&mut line);
                for (t, v) in line.iter().enumerate() {
                    data[base + inner + t * s] = *v;
                }
            }
        }
    }

    /// Unnormalized forward transform.
    pub fn fft(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.nodes());
        for axis in 0..AXES {
            self.transform_axis(data, axis, &self.forward);
        }
    }

    /// Inverse transform, normalized so that `ifft(fft(x)) = x`.
    pub fn ifft(&self, data: &mut [Complex64]) {
        for axis in 0..AXES {
            self.transform_axis(data, axis, &self.inverse);
        }
        let scale = 1.0 / self.nodes() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    /// Symbol `k_a` of spectral node `node` along `axis` (one-sided Nyquist).
    pub fn wavenumber(&self, node: usize, axis: usize) -> f64 {
        self.wave[self.multi_index(node)[axis]]
    }

    pub fn wavenumber_real(&self, node: usize, axis: usize) -> f64 {
        self.wave_real[self.multi_index(node)[axis]]
    }

    /// `|k|²` at a spectral node, one-sided symbol.
    pub fn wavenumber_sq(&self, node: usize) -> f64 {
        let j = self.multi_index(node);
        j.iter().map(|&i| self.wave[i] * self.wave[i]).sum()
    }

    /// Multiply spectral data by `i·k_axis` in place.
    pub fn apply_symbol(&self, hat: &mut [Complex64], axis: usize, real: bool) {
        let table = if real { &self.wave_real } else { &self.wave };
        let s = self.stride(axis);
        let n = self.n;
        for (node, v) in hat.iter_mut().enumerate() {
            let k = table[(node / s) % n];
            *v = Complex64::new(-k * v.im, k * v.re);
        }
    }

    /// `∂_axis` of a field, exact on the trigonometric interpolant.
    pub fn derivative(&self, f: &[Complex64], axis: usize) -> Vec<Complex64> {
        let mut hat = f.to_vec();
        self.fft(&mut hat);
        self.apply_symbol(&mut hat, axis, false);
        self.ifft(&mut hat);
        hat
    }

    /// Nyquist-free derivative of a real field; returns a real field.
    pub fn derivative_real(&self, f: &[f64], axis: usize) -> Vec<f64> {
        let mut hat: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.fft(&mut hat);
        self.apply_symbol(&mut hat, axis, true);
        self.ifft(&mut hat);
        hat.into_iter().map(|z| z.re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_round_trip() {
        let g = Grid::new(4);
        let orig: Vec<Complex64> =
            (0..g.nodes()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut x = orig.clone();
        g.fft(&mut x);
        g.ifft(&mut x);
        for (a, b) in x.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_single_modes() {
        let g = Grid::new(8);
        for axis in 0..4 {
            let f: Vec<Complex64> =
                (0..g.nodes()).map(|p| Complex64::new((2.0 * g.coords(p)[axis]).sin(), 0.0)).collect();
            let df = g.derivative(&f, axis);
            for (p, v) in df.iter().enumerate() {
                let want = 2.0 * (2.0 * g.coords(p)[axis]).cos();
                assert!((v.re - want).abs() < 1e-12 && v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn nyquist_mode_has_nonzero_derivative() {
        let g = Grid::new(4);
        let f: Vec<Complex64> = (0..g.nodes())
            .map(|p| Complex64::new(if g.multi_index(p)[1] % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect();
        let df = g.derivative(&f, 1);
        let norm: f64 = df.iter().map(|z| z.norm_sqr()).sum();
        assert!(norm > 1.0);
        let real = g.derivative_real(&f.iter().map(|z| z.re).collect::<Vec<_>>(), 1);
        assert!(real.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn refined_coordinates_agree() {
        let (a, b) = (Grid::new(8), Grid::new(16));
        for node in [0usize, 17, 1234, 4095] {
            let j = a.multi_index(node);
            let fine = b.node_index(j.map(|x| 2 * x));
            assert_eq!(a.coords(node), b.coords(fine));
            assert_eq!(a.phase(node, [1, -2, 0, 3]), b.phase(fine, [1, -2, 0, 3]));
        }
    }
}
