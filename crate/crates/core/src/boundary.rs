//! Vertex conditions `Aψ + Bψ' = 0`, their unitary `𝔖(k; A, B)`, named
//! families and gauge transformations.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::linalg::{self, c, eye, zeros, CMat, I};

/// Per-vertex block: `a`, `b` are `deg(v) × deg(v)`, `channels[r]` is the
/// K-slot of local channel `r`.
#[derive(Clone, Debug)]
pub struct VertexConditions {
    pub vertex: usize,
    pub a: CMat,
    pub b: CMat,
    pub channels: Vec<usize>,
}

impl VertexConditions {
    pub fn unitary(&self, k: Complex64) -> Result<CMat> {
        bc_unitary(&self.a, &self.b, k)
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryConditions {
    pub a: CMat,
    pub b: CMat,
    pub blocks: Option<Vec<VertexConditions>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Validity {
    pub valid: bool,
    pub rank: usize,
    pub dim: usize,
    pub hermitian_residual: f64,
    pub tolerance: f64,
}

/// ε_herm = 1e-9 (1 + ‖A‖ + ‖B‖).
pub fn tolerance(a: &CMat, b: &CMat) -> f64 {
    1e-9 * (1.0 + linalg::norm(a) + linalg::norm(b))
}

pub fn check_pair(a: &CMat, b: &CMat) -> Result<Validity> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::Dimension(format!(
            "A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let mut ab = zeros(n, 2 * n);
    ab.view_mut((0, 0), (n, n)).copy_from(a);
    ab.view_mut((0, n), (n, n)).copy_from(b);
    let rank = linalg::rank(&ab, 1e-10);
    let herm = linalg::hermitian_residual(&(a * b.adjoint()));
    let tol = tolerance(a, b);
    Ok(Validity { valid: rank == n && herm <= tol, rank, dim: n, hermitian_residual: herm, tolerance: tol })
}

/// 𝔖(k) = −(A + ikB)⁻¹(A − ikB).
pub fn bc_unitary(a: &CMat, b: &CMat, k: Complex64) -> Result<CMat> {
    let n = a.nrows();
    if n == 0 {
        return Ok(zeros(0, 0));
    }
    let ik = I * k;
    let plus = a + b * ik;
    let minus = a - b * ik;
    if linalg::inverse_condition(&plus) < 1e-13 {
        return Err(Error::Singular(k));
    }
    let x = linalg::solve(&plus, &minus).ok_or(Error::Singular(k))?;
    Ok(-x)
}

/// A = −(𝔖 − I)/2, B = (𝔖 + I)/(2ik₀).
pub fn from_unitary(s: &CMat, k0: f64) -> Result<(CMat, CMat)> {
    let n = s.nrows();
    if s.ncols() != n {
        return Err(Error::Dimension("unitary must be square".into()));
    }
    let r = linalg::unitarity_residual(s);
    if r > 1e-9 * (1.0 + n as f64) {
        return Err(Error::NotUnitary(r));
    }
    if k0 <= 0.0 {
        return Err(Error::InvalidConditions("k0 must be positive".into()));
    }
    let id = eye(n);
    let a = (s - &id) * c(-0.5, 0.0);
    let b = (s + &id) / (c(0.0, 2.0 * k0));
    Ok((a, b))
}

/// 𝔖(k) from 𝔖(k₀): ((k−k₀)𝔖₀ + (k+k₀))⁻¹((k+k₀)𝔖₀ + (k−k₀)).
pub fn k_transport(s0: &CMat, k0: f64, k: f64) -> Result<CMat> {
    let n = s0.nrows();
    let id = eye(n);
    let lhs = s0 * c(k - k0, 0.0) + &id * c(k + k0, 0.0);
    let rhs = s0 * c(k + k0, 0.0) + &id * c(k - k0, 0.0);
    linalg::solve(&lhs, &rhs).ok_or(Error::Singular(c(k, 0.0)))
}

/// Standard (Kirchhoff) conditions at a vertex of degree `d`.
pub fn standard_pair(d: usize) -> (CMat, CMat) {
    let mut a = zeros(d, d);
    let mut b = zeros(d, d);
    for r in 0..d.saturating_sub(1) {
        a[(r, r)] = c(1.0, 0.0);
        a[(r, r + 1)] = c(-1.0, 0.0);
    }
    if d > 0 {
        for col in 0..d {
            b[(d - 1, col)] = c(1.0, 0.0);
        }
    }
    (a, b)
}

pub fn standard_conditions(d: usize) -> Result<(CMat, CMat)> {
    if d < 2 {
        return Err(Error::InvalidConditions(format!("standard conditions need degree >= 2, got {d}")));
    }
    Ok(standard_pair(d))
}

type CQ = Complex<BigRational>;

/// Exact 𝔖(k) for rational A, B and rational k, by Gaussian elimination over ℚ(i).
pub fn exact_unitary(a: &[Vec<BigRational>], b: &[Vec<BigRational>], k: &BigRational) -> Result<Vec<Vec<CQ>>> {
    let n = a.len();
    let zero = || CQ::new(BigRational::zero(), BigRational::zero());
    let ik = CQ::new(BigRational::zero(), k.clone());
    let re = |q: &BigRational| CQ::new(q.clone(), BigRational::zero());
    // augmented [A + ikB | A − ikB]
    let mut m: Vec<Vec<CQ>> = (0..n)
        .map(|r| {
            let mut row = Vec::with_capacity(2 * n);
            for j in 0..n {
                row.push(re(&a[r][j]) + ik.clone() * re(&b[r][j]));
            }
            for j in 0..n {
                row.push(re(&a[r][j]) - ik.clone() * re(&b[r][j]));
            }
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular(c(0.0, 0.0)))?;
        m.swap(col, piv);
        let inv = CQ::one() / m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..2 * n {
                    let t = m[col][j].clone() * f.clone();
                    m[r][j] = m[r][j].clone() - t;
                }
            }
        }
    }
    Ok((0..n).map(|r| (0..n).map(|j| zero() - m[r][n + j].clone()).collect()).collect())
}

pub fn standard_exact(d: usize) -> Result<Vec<Vec<CQ>>> {
    standard_conditions(d)?;
    let int = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut a = vec![vec![int(0); d]; d];
    let mut b = vec![vec![int(0); d]; d];
    for r in 0..d - 1 {
        a[r][r] = int(1);
        a[r][r + 1] = int(-1);
    }
    for col in 0..d {
        b[d - 1][col] = int(1);
    }
    exact_unitary(&a, &b, &int(1))
}

/// Conditions with `Ker B = {0}` and `2B⁻¹A = H`: A = H/2, B = I.
pub fn from_hermitian(h: &CMat) -> Result<(CMat, CMat)> {
    let r = linalg::hermitian_residual(h);
    if r > 1e-9 * (1.0 + linalg::norm(h)) {
        return Err(Error::NotHermitian(r));
    }
    Ok((h * c(0.5, 0.0), eye(h.nrows())))
}

/// H = 2B⁻¹A, defined iff B is invertible.
pub fn h_parameter(a: &CMat, b: &CMat) -> Result<CMat> {
    if b.nrows() == 0 {
        return Ok(zeros(0, 0));
    }
    if linalg::inverse_condition(b) < 1e-12 {
        return Err(Error::NotHParametrized);
    }
    let x = linalg::solve(b, a).ok_or(Error::NotHParametrized)?;
    Ok(x * c(2.0, 0.0))
}

/// H recovered from 𝔖 at k: −2ik(𝔖 − I)(𝔖 + I)⁻¹.
pub fn hermitian_from_unitary(s: &CMat, k: f64) -> Result<CMat> {
    let n = s.nrows();
    let id = eye(n);
    let inv = linalg::inverse(&(s + &id)).ok_or(Error::NotHParametrized)?;
    Ok((s - &id) * inv * c(0.0, -2.0 * k))
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with phase fix.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) / std::f64::consts::SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

impl BoundaryConditions {
    pub fn global(a: CMat, b: CMat) -> Result<Self> {
        check_pair(&a, &b)?;
        Ok(BoundaryConditions { a, b, blocks: None })
    }

    /// Assembles local conditions; every vertex must be covered by its own block.
    pub fn from_blocks(graph: &MetricGraph, blocks: Vec<VertexConditions>) -> Result<Self> {
        let n = graph.dim();
        let mut a = zeros(n, n);
        let mut b = zeros(n, n);
        let mut covered = vec![false; n];
        for blk in &blocks {
            let d = blk.channels.len();
            if blk.a.nrows() != d || blk.a.ncols() != d || blk.b.nrows() != d || blk.b.ncols() != d {
                return Err(Error::Dimension(format!("block at vertex {} has wrong size", blk.vertex)));
            }
            if blk.channels != graph.vertex_channels(blk.vertex) {
                return Err(Error::NotLocal);
            }
            for &s in &blk.channels {
                if covered[s] {
                    return Err(Error::NotLocal);
                }
                covered[s] = true;
            }
            a += linalg::scatter(n, &blk.channels, &blk.channels, &blk.a);
            b += linalg::scatter(n, &blk.channels, &blk.channels, &blk.b);
        }
        if covered.iter().any(|&x| !x) {
            return Err(Error::NotLocal);
        }
        Ok(BoundaryConditions { a, b, blocks: Some(blocks) })
    }

    /// Builds local conditions from a per-vertex generator `f(vertex, degree)`.
    pub fn local_with(
        graph: &MetricGraph,
        mut f: impl FnMut(usize, usize) -> Result<(CMat, CMat)>,
    ) -> Result<Self> {
        let mut blocks = Vec::new();
        for v in 0..graph.num_vertices() {
            let channels = graph.vertex_channels(v);
            if channels.is_empty() {
                continue;
            }
            let (a, b) = f(v, channels.len())?;
            blocks.push(VertexConditions { vertex: v, a, b, channels });
        }
        Self::from_blocks(graph, blocks)
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn is_local(&self) -> bool {
        self.blocks.is_some()
    }

    pub fn check_valid(&self) -> Result<Validity> {
        check_pair(&self.a, &self.b)
    }

    pub fn unitary(&self, k: Complex64) -> Result<CMat> {
        match &self.blocks {
            Some(blocks) => {
                let n = self.dim();
                let mut s = zeros(n, n);
                for blk in blocks {
                    let sv = blk.unitary(k)?;
                    s += linalg::scatter(n, &blk.channels, &blk.channels, &sv);
                }
                Ok(s)
            }
            None => bc_unitary(&self.a, &self.b, k),
        }
    }

    pub fn unitary_real(&self, k: f64) -> Result<CMat> {
        self.unitary(c(k, 0.0))
    }

    pub fn vertex_block(&self, v: usize) -> Option<&VertexConditions> {
        self.blocks.as_ref().and_then(|bs| bs.iter().find(|b| b.vertex == v))
    }

    /// Global H = 2B⁻¹A.
    pub fn h_matrix(&self) -> Result<CMat> {
        h_parameter(&self.a, &self.b)
    }

    pub fn is_real(&self) -> bool {
        linalg::is_real(&self.a, 0.0) && linalg::is_real(&self.b, 0.0)
    }

    /// AB† = 0 (within tolerance), the k-independence criterion.
    pub fn ab_adjoint_vanishes(&self) -> bool {
        linalg::norm(&(&self.a * self.b.adjoint())) <= tolerance(&self.a, &self.b)
    }

    pub fn kernel_projector_a(&self) -> CMat {
        linalg::kernel_projector(&self.a, 1e-10)
    }

    pub fn kernel_projector_b(&self) -> CMat {
        linalg::kernel_projector(&self.b, 1e-10)
    }

    pub fn dirichlet(graph: &MetricGraph) -> Result<Self> {
        Self::local_with(graph, |_, d| Ok((eye(d), zeros(d, d))))
    }

    pub fn neumann(graph: &MetricGraph) -> Result<Self> {
        Self::local_with(graph, |_, d| Ok((zeros(d, d), eye(d))))
    }

    /// Standard conditions at every vertex; a degree-1 vertex gets Neumann,
    /// which is the d = 1 instance of the same formula.
    pub fn standard(graph: &MetricGraph) -> Result<Self> {
        Self::local_with(graph, |_, d| Ok(standard_pair(d)))
    }

    pub fn hermitian_local(graph: &MetricGraph, hs: &BTreeMap<usize, CMat>) -> Result<Self> {
        Self::local_with(graph, |v, d| {
            let h = hs.get(&v).cloned().unwrap_or_else(|| zeros(d, d));
            if h.nrows() != d || h.ncols() != d {
                return Err(Error::Dimension(format!("H at vertex {v} must be {d}x{d}")));
            }
            from_hermitian(&h)
        })
    }

    /// Per-vertex H with entries drawn from [0.5, 1.5] and symmetrized.
    pub fn positive_entry(graph: &MetricGraph, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::local_with(graph, |_, d| {
            let raw = DMatrix::<f64>::from_fn(d, d, |_, _| rng.random_range(0.5..1.5));
            let h = CMat::from_fn(d, d, |i, j| c(0.5 * (raw[(i, j)] + raw[(j, i)]), 0.0));
            from_hermitian(&h)
        })
    }

    pub fn haar_local(graph: &MetricGraph, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::local_with(graph, |_, d| from_unitary(&haar_unitary(d, &mut rng), 1.0))
    }

    /// (AU, BU) for the diagonal unitary U of `phases`.
    pub fn apply_gauge(&self, graph: &MetricGraph, phases: &GaugePhases) -> Result<Self> {
        let d = phases.diagonal(graph)?;
        let u = linalg::diag(&d);
        let blocks = self.blocks.as_ref().map(|bs| {
            bs.iter()
                .map(|blk| {
                    let du: Vec<Complex64> = blk.channels.iter().map(|&s| d[s]).collect();
                    let uv = linalg::diag(&du);
                    VertexConditions { vertex: blk.vertex, a: &blk.a * &uv, b: &blk.b * &uv, channels: blk.channels.clone() }
                })
                .collect()
        });
        Ok(BoundaryConditions { a: &self.a * &u, b: &self.b * &u, blocks })
    }

    /// Near-block structure of 𝔖(1): connected components of its support graph.
    pub fn block_decomposition(&self) -> Result<Vec<Vec<usize>>> {
        Ok(support_components(&self.unitary_real(1.0)?, 1e-12))
    }
}

pub fn equivalent(bc1: &BoundaryConditions, bc2: &BoundaryConditions) -> Result<bool> {
    if bc1.dim() != bc2.dim() {
        return Err(Error::Dimension("conditions of different size".into()));
    }
    let s1 = bc1.unitary_real(1.0)?;
    let s2 = bc2.unitary_real(1.0)?;
    Ok(linalg::norm(&(s1 - s2)) <= 1e-9 * (1.0 + bc1.dim() as f64))
}

pub fn support_components(s: &CMat, eps: f64) -> Vec<Vec<usize>> {
    let n = s.nrows();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![start];
        comp[start] = id;
        let mut members = Vec::new();
        while let Some(x) = stack.pop() {
            members.push(x);
            for y in 0..n {
                if comp[y] == usize::MAX && (s[(x, y)].norm() > eps || s[(y, x)].norm() > eps) {
                    comp[y] = id;
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Phases per internal edge (shared by both slots) and per external edge.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePhases {
    pub internal: Vec<f64>,
    pub external: Vec<f64>,
}

impl GaugePhases {
    pub fn zero(graph: &MetricGraph) -> Self {
        GaugePhases { internal: vec![0.0; graph.num_internal()], external: vec![0.0; graph.num_external()] }
    }

    pub fn random_trivial(graph: &MetricGraph, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = std::f64::consts::TAU;
        GaugePhases {
            internal: (0..graph.num_internal()).map(|_| rng.random_range(0.0..tau)).collect(),
            external: vec![0.0; graph.num_external()],
        }
    }

    pub fn random(graph: &MetricGraph, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = std::f64::consts::TAU;
        GaugePhases {
            internal: (0..graph.num_internal()).map(|_| rng.random_range(0.0..tau)).collect(),
            external: (0..graph.num_external()).map(|_| rng.random_range(0.1..tau - 0.1)).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.external.iter().all(|&p| p == 0.0)
    }

    pub fn diagonal(&self, graph: &MetricGraph) -> Result<Vec<Complex64>> {
        if self.internal.len() != graph.num_internal() || self.external.len() != graph.num_external() {
            return Err(Error::Dimension("gauge phases do not match the graph".into()));
        }
        let mut d = vec![c(1.0, 0.0); graph.dim()];
        for (j, &p) in self.external.iter().enumerate() {
            d[graph.ext_slot(j)] = Complex64::from_polar(1.0, p);
        }
        for (i, &p) in self.internal.iter().enumerate() {
            let z = Complex64::from_polar(1.0, p);
            d[graph.minus_slot(i)] = z;
            d[graph.plus_slot(i)] = z;
        }
        Ok(d)
    }
}

/// Complex entry in files: `[re, im]`.
pub type Entry = [f64; 2];

fn to_cmat(rows: &[Vec<Entry>]) -> Result<CMat> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("matrix must be square".into()));
    }
    Ok(CMat::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

/// Boundary-condition file: a named family plus its parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum BcSpec {
    Dirichlet,
    Neumann,
    Standard,
    Hermitian {
        /// vertex id → H(v), rows of `[re, im]`
        vertices: BTreeMap<String, Vec<Vec<Entry>>>,
    },
    Haar {
        #[serde(default)]
        seed: u64,
    },
    Positive {
        #[serde(default)]
        seed: u64,
    },
    Explicit {
        a: Vec<Vec<Entry>>,
        b: Vec<Vec<Entry>>,
    },
}

impl BcSpec {
    pub fn parse_family(name: &str, seed: u64) -> Result<Self> {
        Ok(match name {
            "dirichlet" => BcSpec::Dirichlet,
            "neumann" => BcSpec::Neumann,
            "standard" => BcSpec::Standard,
            "haar" => BcSpec::Haar { seed },
            "positive" => BcSpec::Positive { seed },
            other => return Err(Error::Parse(format!("family `{other}` needs a file or is unknown"))),
        })
    }

    pub fn build(&self, graph: &MetricGraph) -> Result<BoundaryConditions> {
        let bc = match self {
            BcSpec::Dirichlet => BoundaryConditions::dirichlet(graph)?,
            BcSpec::Neumann => BoundaryConditions::neumann(graph)?,
            BcSpec::Standard => BoundaryConditions::standard(graph)?,
            BcSpec::Haar { seed } => BoundaryConditions::haar_local(graph, *seed)?,
            BcSpec::Positive { seed } => BoundaryConditions::positive_entry(graph, *seed)?,
            BcSpec::Hermitian { vertices } => {
                let mut hs = BTreeMap::new();
                for (id, rows) in vertices {
                    hs.insert(graph.vertex_index(id)?, to_cmat(rows)?);
                }
                BoundaryConditions::hermitian_local(graph, &hs)?
            }
            BcSpec::Explicit { a, b } => {
                let (a, b) = (to_cmat(a)?, to_cmat(b)?);
                if a.nrows() != graph.dim() {
                    return Err(Error::Dimension(format!("explicit A is {} but dim K = {}", a.nrows(), graph.dim())));
                }
                BoundaryConditions::global(a, b)?
            }
        };
        let v = bc.check_valid()?;
        if !v.valid {
            return Err(Error::InvalidConditions(format!(
                "rank {} of {}, hermitian residual {:e}",
                v.rank, v.dim, v.hermitian_residual
            )));
        }
        Ok(bc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::rat;

    fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
        linalg::norm(&(a - b)) < tol
    }

    #[test]
    fn validity_examples() {
        let n = 3;
        assert!(check_pair(&eye(n), &zeros(n, n)).unwrap().valid);
        assert!(!check_pair(&zeros(n, n), &zeros(n, n)).unwrap().valid);
        assert!(!check_pair(&eye(n), &(eye(n) * I)).unwrap().valid);
        assert!(check_pair(&eye(2), &eye(3)).is_err());
    }

    #[test]
    fn dirichlet_neumann_decoupled() {
        let k = c(1.7, 0.0);
        assert!(close(&bc_unitary(&eye(3), &zeros(3, 3), k).unwrap(), &(-eye(3)), 1e-14));
        assert!(close(&bc_unitary(&zeros(3, 3), &eye(3), k).unwrap(), &eye(3), 1e-14));
        let a = linalg::diag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let b = linalg::diag(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let s = bc_unitary(&a, &b, c(2.0, 0.0)).unwrap();
        assert!(close(&s, &linalg::diag(&[c(-1.0, 0.0), c(1.0, 0.0)]), 1e-14));
    }

    #[test]
    fn singular_on_imaginary_axis() {
        // A = 1, B = 1: A + ikB = 1 + ik vanishes at k = i.
        let r = bc_unitary(&eye(1), &eye(1), c(0.0, 1.0));
        assert!(matches!(r, Err(Error::Singular(_))));
    }

    #[test]
    fn from_unitary_examples() {
        let (a, b) = from_unitary(&eye(2), 1.0).unwrap();
        assert!(a.norm() < 1e-15);
        assert!(close(&b, &(eye(2) / c(0.0, 1.0)), 1e-15));
        let (a, b) = from_unitary(&(-eye(2)), 1.0).unwrap();
        assert!(close(&a, &eye(2), 1e-15) && b.norm() < 1e-15);
        assert!(from_unitary(&(eye(2) * c(2.0, 0.0)), 1.0).is_err());
    }

    #[test]
    fn haar_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = haar_unitary(4, &mut rng);
        assert!(linalg::unitarity_residual(&u) < 1e-12);
        let (a, b) = from_unitary(&u, 3.0).unwrap();
        assert!(close(&bc_unitary(&a, &b, c(3.0, 0.0)).unwrap(), &u, 1e-12));
    }

    #[test]
    fn scaled_conditions_equivalent() {
        let g = corpus::double_edge_graph();
        let bc = BoundaryConditions::haar_local(&g, 1).unwrap();
        let bc2 = BoundaryConditions::global(&bc.a * c(2.0, 0.0), &bc.b * c(2.0, 0.0)).unwrap();
        assert!(equivalent(&bc, &bc2).unwrap());
        let d = BoundaryConditions::dirichlet(&g).unwrap();
        let nm = BoundaryConditions::neumann(&g).unwrap();
        assert!(!equivalent(&d, &nm).unwrap());
    }

    #[test]
    fn transport_examples() {
        let g = corpus::double_edge_graph();
        let bc = BoundaryConditions::haar_local(&g, 2).unwrap();
        let s0 = bc.unitary_real(1.5).unwrap();
        let s = k_transport(&s0, 1.5, 4.0).unwrap();
        assert!(close(&s, &bc.unitary_real(4.0).unwrap(), 1e-10));
        assert!(close(&(&s * &s0), &(&s0 * &s), 1e-10));
        let back = k_transport(&s, 4.0, 1.5).unwrap();
        assert!(close(&back, &s0, 1e-10));
        let st = BoundaryConditions::standard(&g).unwrap().unitary_real(1.0).unwrap();
        assert!(close(&k_transport(&st, 1.0, 3.0).unwrap(), &st, 1e-12));
    }

    #[test]
    fn standard_values() {
        let (a, b) = standard_conditions(2).unwrap();
        let s = bc_unitary(&a, &b, c(1.0, 0.0)).unwrap();
        assert!(close(&s, &linalg::from_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]), 1e-14));
        let (a, b) = standard_conditions(3).unwrap();
        assert!((&a * b.adjoint()).norm() == 0.0);
        let s = bc_unitary(&a, &b, c(5.0, 0.0)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { -1.0 / 3.0 } else { 2.0 / 3.0 };
                assert!((s[(i, j)] - c(want, 0.0)).norm() < 1e-14);
            }
        }
        assert!(standard_conditions(1).is_err());
    }

    #[test]
    fn exact_standard_entries() {
        for d in 2..=6usize {
            let s = standard_exact(d).unwrap();
            for i in 0..d {
                for j in 0..d {
                    let want = if i == j { rat(-(d as i64 - 2), d as i64) } else { rat(2, d as i64) };
                    assert_eq!(s[i][j], CQ::new(want, BigRational::zero()));
                }
            }
        }
    }

    #[test]
    fn hermitian_parametrization() {
        let (a, b) = from_hermitian(&zeros(2, 2)).unwrap();
        assert!(close(&bc_unitary(&a, &b, c(3.0, 0.0)).unwrap(), &eye(2), 1e-15));
        let h = linalg::from_real(&[vec![1.0, 0.3], vec![0.3, -2.0]]);
        let (a, b) = from_hermitian(&h).unwrap();
        let s = bc_unitary(&a, &b, c(1.0, 0.0)).unwrap();
        assert!(close(&hermitian_from_unitary(&s, 1.0).unwrap(), &h, 1e-12));
        let eig = nalgebra::SymmetricEigen::new(h.clone());
        let k = 2.0;
        let s = bc_unitary(&a, &b, c(k, 0.0)).unwrap();
        for (j, &lam) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(j).into_owned();
            let want = (c(k, lam / 2.0)) / (c(k, -lam / 2.0));
            assert!(((&s * &v) - &v * want).norm() < 1e-12);
        }
        assert!(from_hermitian(&linalg::from_real(&[vec![0.0, 1.0], vec![0.0, 0.0]])).is_err());
        assert!(close(&h_parameter(&a, &b).unwrap(), &h, 1e-14));
        assert!(matches!(h_parameter(&eye(2), &zeros(2, 2)), Err(Error::NotHParametrized)));
    }

    #[test]
    fn positive_and_haar_families() {
        let g = corpus::double_edge_graph();
        let p = BoundaryConditions::positive_entry(&g, 9).unwrap();
        assert!(p.check_valid().unwrap().valid);
        for blk in p.blocks.as_ref().unwrap() {
            let h = h_parameter(&blk.a, &blk.b).unwrap();
            assert!(h.iter().all(|z| z.re > 0.0));
        }
        let p2 = BoundaryConditions::positive_entry(&g, 9).unwrap();
        assert_eq!(p.a, p2.a);
        let h1 = BoundaryConditions::haar_local(&g, 1).unwrap();
        let h2 = BoundaryConditions::haar_local(&g, 2).unwrap();
        assert!(h1.check_valid().unwrap().valid);
        assert!(!equivalent(&h1, &h2).unwrap());
        let blk = h1.vertex_block(0).unwrap();
        assert_eq!(blk.channels.len(), 2);
        assert!(linalg::unitarity_residual(&blk.unitary(c(1.0, 0.0)).unwrap()) < 1e-12);
    }

    #[test]
    fn blocks() {
        let g = corpus::path_graph(rat(1, 1));
        let bc = BoundaryConditions::standard(&g).unwrap();
        let parts = bc.block_decomposition().unwrap();
        assert_eq!(parts.len(), 2);
        let nm = BoundaryConditions::neumann(&g).unwrap();
        assert_eq!(nm.block_decomposition().unwrap().len(), 4);
    }

    #[test]
    fn gauge_keeps_validity() {
        let g = corpus::double_edge_graph();
        let bc = BoundaryConditions::haar_local(&g, 3).unwrap();
        let z = bc.apply_gauge(&g, &GaugePhases::zero(&g)).unwrap();
        assert!(equivalent(&bc, &z).unwrap());
        let ph = GaugePhases::random(&g, 4);
        assert!(!ph.is_trivial());
        assert!(bc.apply_gauge(&g, &ph).unwrap().check_valid().unwrap().valid);
    }

    #[test]
    fn bc_file_round_trip() {
        let g = corpus::path_graph(rat(1, 2));
        let spec: BcSpec = serde_json::from_str(r#"{"family":"haar","seed":4}"#).unwrap();
        let bc = spec.build(&g).unwrap();
        assert!(equivalent(&bc, &BoundaryConditions::haar_local(&g, 4).unwrap()).unwrap());
        let spec: BcSpec =
            serde_json::from_str(r#"{"family":"hermitian","vertices":{"v0":[[[1,0],[0.5,0]],[[0.5,0],[2,0]]]}}"#).unwrap();
        assert!(spec.build(&g).unwrap().check_valid().unwrap().valid);
    }
}
