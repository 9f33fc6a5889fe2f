//! Global scattering matrix S(k; A, B, a) and interior amplitudes.
//!
//! Two routes: the transfer route solves `(I − 𝔖T)x = 𝔖[I;0;0]` for the
//! outgoing amplitudes `x = [S; α; e^{−ika}β]`, falling back to a restricted
//! inverse when `I − 𝔖T` is rank deficient; the direct route solves
//! `Z[S; α; β] = −(A − ikB)[I;0;0]` with `Z = AX + ikBY`.

use num_complex::Complex64;
use serde::Serialize;

use crate::boundary::{BoundaryConditions, GaugePhases};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::linalg::{self, c, eye, zeros, CMat, I};

pub const RANK_CUTOFF: f64 = 1e-10;
/// Relative residual above which a complex-k solve is reported as a pole.
pub const POLE_RESIDUAL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct TransferBlocks {
    pub t: CMat,
    pub x: CMat,
    pub y: CMat,
}

#[derive(Clone, Debug)]
pub struct ScatteringResult {
    pub k: Complex64,
    pub s: CMat,
    pub alpha: CMat,
    pub beta: CMat,
    pub rank_deficient: bool,
    pub residual: f64,
}

impl ScatteringResult {
    pub fn unitarity_residual(&self) -> f64 {
        linalg::unitarity_residual(&self.s)
    }
}

pub fn complex_lengths(graph: &MetricGraph) -> Result<Vec<Complex64>> {
    Ok(graph.lengths_f64()?.into_iter().map(|a| c(a, 0.0)).collect())
}

pub fn transfer_blocks(graph: &MetricGraph, k: Complex64) -> Result<TransferBlocks> {
    Ok(transfer_blocks_metric(graph, k, &complex_lengths(graph)?))
}

/// T, X, Y for explicit (possibly complex) lengths.
pub fn transfer_blocks_metric(graph: &MetricGraph, k: Complex64, lengths: &[Complex64]) -> TransferBlocks {
    let n = graph.dim();
    let ne = graph.num_external();
    let mut t = zeros(n, n);
    let mut x = zeros(n, n);
    let mut y = zeros(n, n);
    for j in 0..ne {
        x[(j, j)] = c(1.0, 0.0);
        y[(j, j)] = c(1.0, 0.0);
    }
    for (i, &a) in lengths.iter().enumerate() {
        let (m, p) = (graph.minus_slot(i), graph.plus_slot(i));
        let ep = (I * k * a).exp();
        let em = (-I * k * a).exp();
        t[(m, p)] = ep;
        t[(p, m)] = ep;
        // rows: ψ(0) and ψ(a); columns: α_i (slot m) and β_i (slot p)
        x[(m, m)] = c(1.0, 0.0);
        x[(m, p)] = c(1.0, 0.0);
        x[(p, m)] = ep;
        x[(p, p)] = em;
        y[(m, m)] = c(1.0, 0.0);
        y[(m, p)] = c(-1.0, 0.0);
        y[(p, m)] = -ep;
        y[(p, p)] = em;
    }
    TransferBlocks { t, x, y }
}

fn injection(graph: &MetricGraph) -> CMat {
    let mut inj = zeros(graph.dim(), graph.num_external());
    for j in 0..graph.num_external() {
        inj[(j, j)] = c(1.0, 0.0);
    }
    inj
}

pub fn global_smatrix(graph: &MetricGraph, bc: &BoundaryConditions, k: Complex64) -> Result<ScatteringResult> {
    global_smatrix_metric(graph, bc, k, &complex_lengths(graph)?)
}

pub fn global_smatrix_metric(
    graph: &MetricGraph,
    bc: &BoundaryConditions,
    k: Complex64,
    lengths: &[Complex64],
) -> Result<ScatteringResult> {
    let sv = bc.unitary(k)?;
    smatrix_from_vertex(graph, &sv, k, lengths)
}

/// Transfer route given a precomputed 𝔖(k).
pub fn smatrix_from_vertex(graph: &MetricGraph, sv: &CMat, k: Complex64, lengths: &[Complex64]) -> Result<ScatteringResult> {
    let n = graph.dim();
    let ne = graph.num_external();
    let ni = graph.num_internal();
    if sv.nrows() != n {
        return Err(Error::Dimension(format!("𝔖 is {} but dim K = {n}", sv.nrows())));
    }
    let tb = transfer_blocks_metric(graph, k, lengths);
    let kmat = eye(n) - sv * &tb.t;
    let rhs = sv * injection(graph);
    let sol = linalg::restricted_solve(&kmat, &rhs, RANK_CUTOFF);
    if k.im != 0.0 && sol.residual > POLE_RESIDUAL {
        return Err(Error::Pole { k, residual: sol.residual });
    }
    if k.im == 0.0 && sol.residual > POLE_RESIDUAL {
        return Err(Error::Invariant(format!("restricted solve residual {:e} at real k", sol.residual)));
    }
    let x = sol.x;
    let s = x.rows(0, ne).into_owned();
    let alpha = x.rows(ne, ni).into_owned();
    let mut beta = x.rows(ne + ni, ni).into_owned();
    for (i, &a) in lengths.iter().enumerate() {
        let f = (I * k * a).exp();
        for j in 0..ne {
            beta[(i, j)] *= f;
        }
    }
    Ok(ScatteringResult { k, s, alpha, beta, rank_deficient: sol.rank_deficient, residual: sol.residual })
}

/// S(k) alone by LU on I − 𝔖T; `None` near singular points.
pub fn smatrix_lu(graph: &MetricGraph, sv: &CMat, k: Complex64, lengths: &[Complex64]) -> Option<CMat> {
    let tb = transfer_blocks_metric(graph, k, lengths);
    let kmat = eye(graph.dim()) - sv * &tb.t;
    let x = linalg::solve(&kmat, &(sv * injection(graph)))?;
    x.iter().all(|z| z.is_finite()).then(|| x.rows(0, graph.num_external()).into_owned())
}

pub fn smatrix_via_z(graph: &MetricGraph, bc: &BoundaryConditions, k: Complex64) -> Result<ScatteringResult> {
    let lengths = complex_lengths(graph)?;
    let n = graph.dim();
    let ne = graph.num_external();
    let ni = graph.num_internal();
    let tb = transfer_blocks_metric(graph, k, &lengths);
    let ik = I * k;
    let z = &bc.a * &tb.x + &bc.b * &tb.y * ik;
    if n > 0 && linalg::inverse_condition(&z) < 1e-10 {
        return Err(Error::SingularSystem(k));
    }
    let rhs = -((&bc.a - &bc.b * ik) * injection(graph));
    let x = linalg::solve(&z, &rhs).ok_or(Error::SingularSystem(k))?;
    let residual = linalg::norm(&(&z * &x - &rhs)) / (1.0 + linalg::norm(&rhs));
    Ok(ScatteringResult {
        k,
        s: x.rows(0, ne).into_owned(),
        alpha: x.rows(ne, ni).into_owned(),
        beta: x.rows(ne + ni, ni).into_owned(),
        rank_deficient: false,
        residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub k: f64,
    pub unitarity: f64,
    pub hermitian_analyticity: f64,
    pub gauge: f64,
    pub reflection_gauge: f64,
    pub transpose: Option<f64>,
    pub route_agreement: Option<f64>,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        [self.unitarity, self.hermitian_analyticity, self.gauge, self.reflection_gauge]
            .into_iter()
            .chain(self.transpose)
            .chain(self.route_agreement)
            .fold(0.0, f64::max)
    }
}

/// Unitarity, S(−k)S(k) = I, gauge invariance (trivial and reflection parts),
/// transposition symmetry for real conditions and agreement of both routes.
pub fn check_identities(graph: &MetricGraph, bc: &BoundaryConditions, k: f64, seed: u64) -> Result<IdentityReport> {
    let kc = c(k, 0.0);
    let s = global_smatrix(graph, bc, kc)?.s;
    let s_neg = global_smatrix(graph, bc, c(-k, 0.0))?.s;
    let ne = graph.num_external();
    let unitarity = linalg::unitarity_residual(&s);
    let hermitian_analyticity = linalg::norm(&(&s_neg * &s - eye(ne)));
    let triv = bc.apply_gauge(graph, &GaugePhases::random_trivial(graph, seed))?;
    let gauge = linalg::norm(&(global_smatrix(graph, &triv, kc)?.s - &s));
    let full = bc.apply_gauge(graph, &GaugePhases::random(graph, seed ^ 0x9e37))?;
    let sg = global_smatrix(graph, &full, kc)?.s;
    let reflection_gauge = (0..ne).map(|j| (sg[(j, j)] - s[(j, j)]).norm()).fold(0.0, f64::max);
    let transpose = bc.is_real().then(|| linalg::norm(&(&s - s.transpose())));
    let route_agreement = smatrix_via_z(graph, bc, kc).ok().map(|z| linalg::norm(&(z.s - &s)));
    Ok(IdentityReport { k, unitarity, hermitian_analyticity, gauge, reflection_gauge, transpose, route_agreement })
}
