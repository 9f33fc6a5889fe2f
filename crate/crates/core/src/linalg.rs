//! Small dense complex helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, cols: usize) -> CMat {
    CMat::zeros(r, cols)
}

pub fn from_real(rows: &[Vec<f64>]) -> CMat {
    let r = rows.len();
    let n = rows.first().map_or(0, |x| x.len());
    CMat::from_fn(r, n, |i, j| c(rows[i][j], 0.0))
}

/// Frobenius norm.
pub fn norm(m: &CMat) -> f64 {
    m.norm()
}

/// Spectral norm (largest singular value).
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn adjoint(m: &CMat) -> CMat {
    m.adjoint()
}

pub fn unitarity_residual(u: &CMat) -> f64 {
    norm(&(u.adjoint() * u - eye(u.ncols())))
}

pub fn hermitian_residual(m: &CMat) -> f64 {
    norm(&(m - m.adjoint()))
}

pub fn is_real(m: &CMat, tol: f64) -> bool {
    m.iter().all(|z| z.im.abs() <= tol)
}

/// Numerical rank with cutoff `rel * sigma_max`.
pub fn rank(m: &CMat, rel: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * smax).count()
}

/// Orthogonal projector onto the (numerical) kernel of a square matrix.
pub fn kernel_projector(m: &CMat, rel: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return zeros(0, 0);
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("right singular vectors");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut p = zeros(n, n);
    for j in 0..n {
        // a square matrix has exactly n singular values
        if smax == 0.0 || svd.singular_values[j] <= rel * smax {
            let row = vt.row(j);
            p += row.adjoint() * row;
        }
    }
    p
}

pub struct Solve {
    pub x: CMat,
    pub rank_deficient: bool,
    pub residual: f64,
}

/// Solves `m x = rhs`. If `m` is rank deficient at cutoff `rel * sigma_max`,
/// the restricted inverse (inverse on the complement of the kernel, applied to
/// the projection of `rhs` onto the range) is used instead.
pub fn restricted_solve(m: &CMat, rhs: &CMat, rel: f64) -> Solve {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = rel * smax;
    let deficient = svd.singular_values.iter().any(|&s| s <= cut);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let mut tmp = u.adjoint() * rhs;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        let f = if s > cut { 1.0 / s } else { 0.0 };
        for j in 0..tmp.ncols() {
            tmp[(i, j)] *= f;
        }
    }
    let x = vt.adjoint() * tmp;
    let scale = 1.0 + norm(rhs);
    let residual = norm(&(m * &x - rhs)) / scale;
    Solve { x, rank_deficient: deficient, residual }
}

/// Ratio sigma_min / sigma_max.
pub fn inverse_condition(m: &CMat) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smax == 0.0 {
        0.0
    } else {
        smin / smax
    }
}

pub fn solve(m: &CMat, rhs: &CMat) -> Option<CMat> {
    m.clone().lu().solve(rhs)
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    m.clone().try_inverse()
}

/// Embeds `block` into an n×n zero matrix at the given rows/columns.
pub fn scatter(n: usize, rows: &[usize], cols: &[usize], block: &CMat) -> CMat {
    let mut out = zeros(n, n);
    for (a, &r) in rows.iter().enumerate() {
        for (b, &col) in cols.iter().enumerate() {
            out[(r, col)] = block[(a, b)];
        }
    }
    out
}

pub fn submatrix(m: &CMat, rows: &[usize], cols: &[usize]) -> CMat {
    CMat::from_fn(rows.len(), cols.len(), |a, b| m[(rows[a], cols[b])])
}

pub fn diag(d: &[Complex64]) -> CMat {
    let n = d.len();
    CMat::from_fn(n, n, |i, j| if i == j { d[i] } else { c(0.0, 0.0) })
}
