//! Index bookkeeping for exterior forms on a 4-dimensional space.
//!
//! Basis p-forms `dx^I` are indexed by increasing subsets `I ⊂ {0,1,2,3}` in
//! lexicographic order; for 2-forms this is `(01, 02, 03, 12, 13, 23)`.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

pub const DIM: usize = 4;

/// `C(4, p)`.
pub fn rank(p: usize) -> usize {
    [1, 4, 6, 4, 1][p]
}

/// Increasing index subsets of size `p`, lexicographically ordered.
pub fn subsets(p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..DIM {
            cur.push(i);
            rec(i + 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, p, &mut Vec::new(), &mut out);
    out
}

pub fn index_of(set: &[usize]) -> usize {
    subsets(set.len()).iter().position(|s| s == set).expect("increasing subset")
}

/// For `dx^a ∧ dx^I = sign · dx^{I∪a}`: `Some((index of I∪a, sign))`, or
/// `None` when `a ∈ I`.
pub fn insert(a: usize, set: &[usize]) -> Option<(usize, f64)> {
    if set.contains(&a) {
        return None;
    }
    let before = set.iter().filter(|&&i| i < a).count();
    let mut joined = set.to_vec();
    joined.push(a);
    joined.sort_unstable();
    let sign = if before % 2 == 0 { 1.0 } else { -1.0 };
    Some((index_of(&joined), sign))
}

/// Sign of the permutation that sorts `seq` (which has distinct entries),
/// or 0 if entries repeat.
pub fn perm_sign(seq: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] == seq[j] {
                return 0;
            }
            if seq[i] > seq[j] {
                s = -s;
            }
        }
    }
    s
}

/// Matrix `W[I][J]` with `dx^I ∧ dx^J = W[I][J] · dx^0123`, for `|I| = p`.
pub fn wedge_top_matrix(p: usize) -> Vec<Vec<f64>> {
    let rows = subsets(p);
    let cols = subsets(DIM - p);
    rows.iter()
        .map(|i| {
            cols.iter()
                .map(|j| {
                    let mut seq = i.clone();
                    seq.extend(j);
                    perm_sign(&seq) as f64
                })
                .collect()
        })
        .collect()
}

/// p-th compound matrix: entry `(I, K)` is the minor `det m[I, K]`.
///
/// If covectors transform as `dx^μ = Σ_a m[μ][a] f^a`, then
/// `dx^I = Σ_K compound(m)[I][K] f^K`.
pub fn compound<T>(m: &[[T; 4]; 4], p: usize) -> Vec<Vec<T>>
where
    T: Copy + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    assert!((1..=DIM).contains(&p), "use compounds_all for degree 0");
    let sets = subsets(p);
    sets.iter()
        .map(|i| sets.iter().map(|k| minor(m, i, k)).collect())
        .collect()
}

fn minor<T>(m: &[[T; 4]; 4], rows: &[usize], cols: &[usize]) -> T
where
    T: Copy + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    if rows.len() == 1 {
        return m[rows[0]][cols[0]];
    }
    // Laplace expansion along the first row
    let mut acc = T::zero();
    for (c, &col) in cols.iter().enumerate() {
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != col).collect();
        let term = m[rows[0]][col] * minor(m, &rows[1..], &sub_cols);
        acc = if c % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// Compound matrices for all degrees `0..=4`, given the multiplicative unit.
pub fn compounds_all<T>(m: &[[T; 4]; 4], one: T) -> [Vec<Vec<T>>; 5]
where
    T: Copy + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    [vec![vec![one]], compound(m, 1), compound(m, 2), compound(m, 3), compound(m, 4)]
}
