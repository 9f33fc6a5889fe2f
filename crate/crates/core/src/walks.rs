//! Walks between external edges, their weights, and the walk (Fourier)
//! expansion of the scattering matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boundary::BoundaryConditions;
use crate::error::{Error, Result};
use crate::graph::{EdgeLength, LengthMode, MetricGraph};
use crate::linalg::{self, c, zeros, CMat, I};
use crate::scattering;

pub type Score = Vec<u32>;

pub fn total(n: &[u32]) -> u32 {
    n.iter().sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub from_edge: usize,
    pub to_edge: usize,
    pub edges: Vec<usize>,
    pub chain: Vec<usize>,
}

impl Walk {
    /// Validates `{e′, i₁ … i_N, e}` and derives its vertex chain.
    pub fn new(graph: &MetricGraph, from_edge: usize, to_edge: usize, edges: Vec<usize>) -> Result<Walk> {
        let ne = graph.num_external();
        if from_edge >= ne || to_edge >= ne {
            return Err(Error::WalkMismatch("external edge out of range".into()));
        }
        let mut v = graph.external()[from_edge].vertex;
        let mut chain = vec![v];
        for &i in &edges {
            let e = graph
                .internal()
                .get(i)
                .ok_or_else(|| Error::WalkMismatch(format!("internal edge {i} out of range")))?;
            if !e.touches(v) {
                return Err(Error::WalkMismatch(format!("edge `{}` is not incident with `{}`", e.id, graph.vertices()[v])));
            }
            v = e.other_end(v);
            chain.push(v);
        }
        if v != graph.external()[to_edge].vertex {
            return Err(Error::WalkMismatch("walk does not end at the terminal external edge".into()));
        }
        Ok(Walk { from_edge, to_edge, edges, chain })
    }

    pub fn score(&self, graph: &MetricGraph) -> Score {
        let mut n = vec![0u32; graph.num_internal()];
        for &i in &self.edges {
            n[i] += 1;
        }
        n
    }

    pub fn comb_length(&self) -> usize {
        self.edges.len()
    }

    pub fn metric_length(&self, graph: &MetricGraph) -> EdgeLength {
        graph.score_length(&self.score(graph))
    }

    pub fn reversed(&self) -> Walk {
        let mut edges = self.edges.clone();
        edges.reverse();
        let mut chain = self.chain.clone();
        chain.reverse();
        Walk { from_edge: self.to_edge, to_edge: self.from_edge, edges, chain }
    }

    pub fn tour(&self) -> BTreeSet<usize> {
        self.edges.iter().copied().collect()
    }

    /// All slot realizations: per chain position the (out, in) slot pair.
    /// Only tadpole traversals admit more than one.
    pub fn realizations(&self, graph: &MetricGraph) -> Vec<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.chain.len());
        self.realize(graph, 0, graph.ext_slot(self.from_edge), &mut cur, &mut out);
        out
    }

    fn realize(&self, graph: &MetricGraph, pos: usize, inn: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if pos == self.edges.len() {
            cur.push((graph.ext_slot(self.to_edge), inn));
            out.push(cur.clone());
            cur.pop();
            return;
        }
        let v = self.chain[pos];
        let i = self.edges[pos];
        let e = &graph.internal()[i];
        let mut outs = Vec::with_capacity(2);
        if e.from == v {
            outs.push(graph.minus_slot(i));
        }
        if e.to == v {
            outs.push(graph.plus_slot(i));
        }
        for o in outs {
            cur.push((o, inn));
            let next = graph.partner(o).expect("internal slot");
            self.realize(graph, pos + 1, next, cur, out);
            cur.pop();
        }
    }

    /// Vertices of the chain where the walk is transmitted (in ≠ out channel),
    /// for the first realization.
    pub fn transmitted(&self, graph: &MetricGraph) -> Vec<usize> {
        let r = &self.realizations(graph)[0];
        r.iter()
            .zip(&self.chain)
            .filter(|((o, i), _)| o != i)
            .map(|(_, &v)| v)
            .collect()
    }

    pub fn describe(&self, graph: &MetricGraph) -> String {
        let mut parts = vec![graph.external()[self.from_edge].id.clone()];
        parts.extend(self.edges.iter().map(|&i| graph.internal()[i].id.clone()));
        parts.push(graph.external()[self.to_edge].id.clone());
        parts.join(",")
    }
}

/// Euler-type criterion: does a walk from `start` to `end` with score `n` exist?
pub fn walk_exists(graph: &MetricGraph, start: usize, end: usize, n: &[u32]) -> bool {
    let nv = graph.num_vertices();
    let mut deg = vec![0u64; nv];
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut touched = vec![false; nv];
    let mut any = false;
    for (e, &k) in graph.internal().iter().zip(n) {
        if k == 0 {
            continue;
        }
        any = true;
        deg[e.from] += k as u64;
        deg[e.to] += k as u64;
        touched[e.from] = true;
        touched[e.to] = true;
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        parent[a] = b;
    }
    if !any {
        return start == end;
    }
    if !touched[start] || !touched[end] {
        return false;
    }
    let root = find(&mut parent, start);
    for v in 0..nv {
        if touched[v] && find(&mut parent, v) != root {
            return false;
        }
    }
    let odd: Vec<usize> = (0..nv).filter(|&v| deg[v] % 2 == 1).collect();
    if start == end {
        odd.is_empty()
    } else {
        odd.len() == 2 && odd.contains(&start) && odd.contains(&end)
    }
}

/// All walks e′ → e with score exactly `n`, in canonical (edge-index) order.
pub fn enumerate_walks(graph: &MetricGraph, from_edge: usize, to_edge: usize, n: &[u32]) -> Vec<Walk> {
    let mut out = Vec::new();
    search_walks(graph, from_edge, to_edge, n, usize::MAX, &mut out);
    out
}

pub fn first_walk(graph: &MetricGraph, from_edge: usize, to_edge: usize, n: &[u32]) -> Option<Walk> {
    let mut out = Vec::new();
    search_walks(graph, from_edge, to_edge, n, 1, &mut out);
    out.pop()
}

fn search_walks(graph: &MetricGraph, from_edge: usize, to_edge: usize, n: &[u32], limit: usize, out: &mut Vec<Walk>) {
    let start = graph.external()[from_edge].vertex;
    let end = graph.external()[to_edge].vertex;
    if n.len() != graph.num_internal() || !walk_exists(graph, start, end, n) {
        return;
    }
    let mut rem = n.to_vec();
    let mut seq = Vec::new();
    let mut chain = vec![start];
    fn rec(
        g: &MetricGraph,
        v: usize,
        end: usize,
        rem: &mut Vec<u32>,
        seq: &mut Vec<usize>,
        chain: &mut Vec<usize>,
        ends: (usize, usize),
        limit: usize,
        out: &mut Vec<Walk>,
    ) {
        if out.len() >= limit {
            return;
        }
        if rem.iter().all(|&x| x == 0) {
            if v == end {
                out.push(Walk { from_edge: ends.0, to_edge: ends.1, edges: seq.clone(), chain: chain.clone() });
            }
            return;
        }
        for i in 0..rem.len() {
            if rem[i] == 0 {
                continue;
            }
            let e = &g.internal()[i];
            if !e.touches(v) {
                continue;
            }
            let w = e.other_end(v);
            rem[i] -= 1;
            if walk_exists(g, w, end, rem) {
                seq.push(i);
                chain.push(w);
                rec(g, w, end, rem, seq, chain, ends, limit, out);
                seq.pop();
                chain.pop();
            }
            rem[i] += 1;
        }
    }
    rec(graph, start, end, &mut rem, &mut seq, &mut chain, (from_edge, to_edge), limit, out);
}

/// Multinomial |n|! / ∏ nᵢ!.
pub fn multinomial(n: &[u32]) -> u128 {
    let mut acc: u128 = 1;
    let mut m: u128 = 0;
    for &k in n {
        for j in 1..=k as u128 {
            m += 1;
            acc = acc * m / j;
        }
    }
    acc
}

fn require_local(bc: &BoundaryConditions) -> Result<()> {
    if bc.is_local() {
        Ok(())
    } else {
        Err(Error::NotLocal)
    }
}

/// (W̃(w;k), W(w;k)): W̃ sums, over slot realizations, the ordered product of
/// 𝔖(k)[out, in]; W = e^{ik⟨n,a⟩} W̃.
pub fn walk_weight(graph: &MetricGraph, walk: &Walk, bc: &BoundaryConditions, k: Complex64) -> Result<(Complex64, Complex64)> {
    require_local(bc)?;
    let check = Walk::new(graph, walk.from_edge, walk.to_edge, walk.edges.clone())?;
    let sv = bc.unitary(k)?;
    let wt = reduced_weight(graph, &check, &sv);
    let phase = match graph.mode() {
        LengthMode::ExactRational => {
            let len = match walk.metric_length(graph) {
                EdgeLength::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
                EdgeLength::Symbolic(_) => unreachable!(),
            };
            (I * k * len).exp()
        }
        LengthMode::Symbolic => return Ok((wt, Complex64::new(f64::NAN, f64::NAN))),
    };
    Ok((wt, wt * phase))
}

pub fn reduced_weight(graph: &MetricGraph, walk: &Walk, sv: &CMat) -> Complex64 {
    walk.realizations(graph)
        .iter()
        .map(|r| r.iter().fold(c(1.0, 0.0), |acc, &(o, i)| acc * sv[(o, i)]))
        .sum()
}

/// Coefficient values carried through the graded walk recursion.
pub trait WalkWeight: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
}

impl WalkWeight for Complex64 {
    fn zero() -> Self {
        c(0.0, 0.0)
    }
    fn one() -> Self {
        c(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Leading term `(t, Φ)`: minimal transmission count and the summed products
/// of H entries over realizations attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Leading {
    pub t: u32,
    pub phi: Complex64,
}

impl WalkWeight for Leading {
    fn zero() -> Self {
        Leading { t: u32::MAX, phi: c(0.0, 0.0) }
    }
    fn one() -> Self {
        Leading { t: 0, phi: c(1.0, 0.0) }
    }
    fn is_zero(&self) -> bool {
        self.t == u32::MAX
    }
    fn add_assign(&mut self, other: &Self) {
        if other.t < self.t {
            *self = *other;
        } else if other.t == self.t && other.t != u32::MAX {
            self.phi += other.phi;
        }
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Leading { t: self.t + other.t, phi: self.phi * other.phi }
    }
}

/// Score-graded walk recursion from external edge `from_edge`.
///
/// Returns, for every score `n` with `nᵢ ≤ caps[i]` and `|n| ≤ max_total`,
/// the vector over exit edges `e` of `Σ_{w ∈ 𝒲_{e,e′}(n)} weight(w)` where a
/// walk's weight is the product of `step(out, in)` along its realizations.
pub fn graded_walk_sums<W: WalkWeight>(
    graph: &MetricGraph,
    from_edge: usize,
    caps: &[u32],
    max_total: u32,
    step: impl Fn(usize, usize) -> W,
) -> BTreeMap<Score, Vec<W>> {
    let dim = graph.dim();
    let ne = graph.num_external();
    let ni = graph.num_internal();
    let channels: Vec<Vec<usize>> = (0..graph.num_vertices()).map(|v| graph.vertex_channels(v)).collect();
    let mut result: BTreeMap<Score, Vec<W>> = BTreeMap::new();
    let mut layer: HashMap<Score, Vec<W>> = HashMap::new();
    let mut init = vec![W::zero(); dim];
    init[graph.ext_slot(from_edge)] = W::one();
    layer.insert(vec![0; ni], init);
    for level in 0..=max_total {
        let mut next: HashMap<Score, Vec<W>> = HashMap::new();
        for (score, amp) in &layer {
            let mut exits = vec![W::zero(); ne];
            let mut any_exit = false;
            for (s, a) in amp.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let v = graph.slot_vertex(s);
                for &o in &channels[v] {
                    match graph.slot_edge(o) {
                        None => {
                            let w = a.mul(&step(o, s));
                            if !w.is_zero() {
                                exits[o].add_assign(&w);
                                any_exit = true;
                            }
                        }
                        Some(i) => {
                            if level == max_total || score[i] >= caps[i] {
                                continue;
                            }
                            let w = a.mul(&step(o, s));
                            if w.is_zero() {
                                continue;
                            }
                            let mut ns = score.clone();
                            ns[i] += 1;
                            let p = graph.partner(o).expect("internal slot");
                            next.entry(ns).or_insert_with(|| vec![W::zero(); dim])[p].add_assign(&w);
                        }
                    }
                }
            }
            if any_exit {
                result.insert(score.clone(), exits);
            }
        }
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
    result
}

/// Ŝ_n(k) as an |E|×|E| matrix (exact walk sum, all channel pairs).
pub fn fourier_matrix(graph: &MetricGraph, bc: &BoundaryConditions, n: &[u32], k: Complex64) -> Result<CMat> {
    require_local(bc)?;
    if n.len() != graph.num_internal() {
        return Err(Error::Dimension("score length differs from |I|".into()));
    }
    let sv = bc.unitary(k)?;
    let ne = graph.num_external();
    let mut m = zeros(ne, ne);
    for ep in 0..ne {
        let sums = graded_walk_sums(graph, ep, n, total(n), |o, i| sv[(o, i)]);
        if let Some(col) = sums.get(n) {
            for e in 0..ne {
                m[(e, ep)] = col[e];
            }
        }
    }
    Ok(m)
}

/// All coefficients Ŝ_n(k)[·, e′] with nᵢ ≤ caps[i], |n| ≤ max_total.
pub fn fourier_table(
    graph: &MetricGraph,
    bc: &BoundaryConditions,
    from_edge: usize,
    caps: &[u32],
    max_total: u32,
    k: Complex64,
) -> Result<BTreeMap<Score, Vec<Complex64>>> {
    require_local(bc)?;
    let sv = bc.unitary(k)?;
    Ok(graded_walk_sums(graph, from_edge, caps, max_total, |o, i| sv[(o, i)]))
}

fn leading_step(h: &CMat) -> impl Fn(usize, usize) -> Leading + '_ {
    move |o, i| if o == i { Leading::one() } else { Leading { t: 1, phi: h[(o, i)] } }
}

/// Leading terms for all capped scores (global H = 2B⁻¹A).
pub fn leading_table(
    graph: &MetricGraph,
    bc: &BoundaryConditions,
    from_edge: usize,
    caps: &[u32],
    max_total: u32,
) -> Result<BTreeMap<Score, Vec<Leading>>> {
    require_local(bc)?;
    let h = bc.h_matrix()?;
    Ok(graded_walk_sums(graph, from_edge, caps, max_total, leading_step(&h)))
}

/// (t_{e,e′}(n), Φ_n); `None` when 𝒲_{e,e′}(n) is empty.
pub fn leading_asymptotics(
    graph: &MetricGraph,
    bc: &BoundaryConditions,
    n: &[u32],
    e: usize,
    e_prime: usize,
) -> Result<Option<(u32, Complex64)>> {
    let tab = leading_table(graph, bc, e_prime, n, total(n))?;
    Ok(tab.get(n).map(|col| col[e]).filter(|l| !l.is_zero()).map(|l| (l.t, l.phi)))
}

/// A single matrix element Ŝ_n(k)_{e,e′} with its walk set.
pub struct FourierCoefficient<'a> {
    pub graph: &'a MetricGraph,
    pub bc: &'a BoundaryConditions,
    pub score: Score,
    pub e: usize,
    pub e_prime: usize,
    pub walks: Vec<Walk>,
}

pub fn fourier_coefficient<'a>(
    graph: &'a MetricGraph,
    bc: &'a BoundaryConditions,
    n: &[u32],
    e: usize,
    e_prime: usize,
) -> Result<FourierCoefficient<'a>> {
    require_local(bc)?;
    let walks = enumerate_walks(graph, e_prime, e, n);
    Ok(FourierCoefficient { graph, bc, score: n.to_vec(), e, e_prime, walks })
}

impl FourierCoefficient<'_> {
    /// Σ_{w ∈ 𝒲} W̃(w; k); identically 0 for an empty walk set.
    pub fn evaluate(&self, k: Complex64) -> Result<Complex64> {
        if self.walks.is_empty() {
            return Ok(c(0.0, 0.0));
        }
        let sv = self.bc.unitary(k)?;
        Ok(self.walks.iter().map(|w| reduced_weight(self.graph, w, &sv)).sum())
    }

    pub fn leading(&self) -> Result<Option<(u32, Complex64)>> {
        if self.walks.is_empty() {
            return Ok(None);
        }
        leading_asymptotics(self.graph, self.bc, &self.score, self.e, self.e_prime)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingVerdict {
    pub zero: bool,
    /// true when decided exactly (empty walk set or positive leading term)
    pub certified: bool,
    pub max_sample: f64,
    pub samples: usize,
}

pub const VANISH_SAMPLES: usize = 16;
pub const VANISH_THRESHOLD: f64 = 1e-12;

/// True when every vertex block has H(v) = 2B⁻¹A with strictly positive entries.
pub fn has_positive_entries(bc: &BoundaryConditions) -> bool {
    let Some(blocks) = &bc.blocks else { return false };
    blocks.iter().all(|b| match crate::boundary::h_parameter(&b.a, &b.b) {
        Ok(h) => h.iter().all(|z| z.re > 0.0 && z.im.abs() <= 1e-12 * z.re),
        Err(_) => false,
    })
}

pub fn vanishing_test(coef: &FourierCoefficient<'_>, seed: u64) -> Result<VanishingVerdict> {
    if coef.walks.is_empty() {
        return Ok(VanishingVerdict { zero: true, certified: true, max_sample: 0.0, samples: 0 });
    }
    if has_positive_entries(coef.bc) {
        if let Some((_, phi)) = coef.leading()? {
            if phi.re > 0.0 {
                return Ok(VanishingVerdict { zero: false, certified: true, max_sample: phi.norm(), samples: 0 });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max = 0.0f64;
    for _ in 0..VANISH_SAMPLES {
        let k: f64 = rng.random_range(1.0..100.0);
        max = max.max(coef.evaluate(c(k, 0.0))?.norm());
    }
    Ok(VanishingVerdict { zero: max < VANISH_THRESHOLD, certified: false, max_sample: max, samples: VANISH_SAMPLES })
}

pub const DEFAULT_NODES: usize = 256;

/// k·Im a on the shifted quadrature contour.
pub const CONTOUR_SHIFT: f64 = 0.1;

/// Midpoint periodic trapezoid for (k/2π)^{|I|} ∫ S(k; a) e^{−ik⟨n,a⟩} da over
/// [0, 2π/k]^{|I|}, one matrix per requested score.
///
/// S(k; ·) is analytic for Im a > 0, so the rule runs on a + iδ with
/// kδ = CONTOUR_SHIFT and is rescaled by e^{kδ|n|}; aliasing from the
/// scores n + N·m then drops by e^{−N kδ}, which matters when some vertex
/// reflects almost totally.
pub fn quadrature_coefficients(
    graph: &MetricGraph,
    bc: &BoundaryConditions,
    k: f64,
    scores: &[Vec<i64>],
    nodes: usize,
) -> Result<Vec<CMat>> {
    let d = graph.num_internal();
    if d > 3 {
        return Err(Error::Bound(format!("quadrature over {d} edges (limit 3)")));
    }
    if k <= 0.0 || nodes == 0 {
        return Err(Error::InvalidConditions("quadrature needs k > 0 and nodes > 0".into()));
    }
    let ne = graph.num_external();
    let mut acc = vec![zeros(ne, ne); scores.len()];
    let delta = CONTOUR_SHIFT / k;
    let kc = c(k, 0.0);
    let sv = bc.unitary(kc)?;
    let h = std::f64::consts::TAU / k / nodes as f64;
    let total_pts = nodes.pow(d as u32);
    let mut idx = vec![0usize; d];
    for _ in 0..total_pts {
        let a: Vec<f64> = idx.iter().map(|&m| (m as f64 + 0.5) * h).collect();
        let ac: Vec<Complex64> = a.iter().map(|&x| c(x, delta)).collect();
        let s = match scattering::smatrix_lu(graph, &sv, kc, &ac) {
            Some(s) => s,
            None => scattering::smatrix_from_vertex(graph, &sv, kc, &ac)?.s,
        };
        for j in 0..scores.len() {
            let phase: f64 = scores[j].iter().zip(&a).map(|(&n, &x)| n as f64 * x).sum();
            acc[j] += &s * (-I * k * phase).exp();
        }
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < nodes {
                break;
            }
            *slot = 0;
        }
    }
    for (m, n) in acc.iter_mut().zip(scores) {
        let size: i64 = n.iter().sum();
        *m *= c((CONTOUR_SHIFT * size as f64).exp() / total_pts as f64, 0.0);
    }
    Ok(acc)
}

pub fn fourier_quadrature(
    graph: &MetricGraph,
    bc: &BoundaryConditions,
    n: &[i64],
    e: usize,
    e_prime: usize,
    k: f64,
    nodes: usize,
) -> Result<Complex64> {
    Ok(quadrature_coefficients(graph, bc, k, &[n.to_vec()], nodes)?[0][(e, e_prime)])
}

/// Σ_{N ≤ K} P_E (𝔖T)^N 𝔖 P_E = Σ_{|n| ≤ K} Ŝ_n(k) e^{ik⟨n,a⟩}.
pub fn partial_sum(graph: &MetricGraph, bc: &BoundaryConditions, k: f64, cutoff: usize) -> Result<CMat> {
    partial_sum_metric(graph, bc, k, cutoff, &scattering::complex_lengths(graph)?)
}

pub fn partial_sum_metric(graph: &MetricGraph, bc: &BoundaryConditions, k: f64, cutoff: usize, lengths: &[Complex64]) -> Result<CMat> {
    let kc = c(k, 0.0);
    let sv = bc.unitary(kc)?;
    let tb = scattering::transfer_blocks_metric(graph, kc, lengths);
    let ne = graph.num_external();
    let st = &sv * &tb.t;
    let mut term = sv.columns(0, ne).into_owned();
    let mut acc = term.rows(0, ne).into_owned();
    for _ in 0..cutoff {
        term = &st * term;
        acc += term.rows(0, ne);
    }
    Ok(acc)
}

/// Scores of all walks e′ → e with |n| ≤ max_comb_len, ordered by metric
/// length (rational mode) or graded-lexicographically (symbolic mode).
pub fn length_spectrum(graph: &MetricGraph, e: usize, e_prime: usize, max_comb_len: u32) -> Vec<(Score, EdgeLength)> {
    let start = graph.external()[e_prime].vertex;
    let end = graph.external()[e].vertex;
    let ni = graph.num_internal();
    let mut seen: BTreeSet<(usize, Score)> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert((start, vec![0; ni]));
    queue.push_back((start, vec![0u32; ni]));
    let mut found: BTreeSet<Score> = BTreeSet::new();
    while let Some((v, n)) = queue.pop_front() {
        if v == end {
            found.insert(n.clone());
        }
        if total(&n) >= max_comb_len {
            continue;
        }
        for (i, ed) in graph.internal().iter().enumerate() {
            if !ed.touches(v) {
                continue;
            }
            let mut m = n.clone();
            m[i] += 1;
            let w = ed.other_end(v);
            if seen.insert((w, m.clone())) {
                queue.push_back((w, m));
            }
        }
    }
    let mut out: Vec<(Score, EdgeLength)> = found.into_iter().map(|n| {
        let l = graph.score_length(&n);
        (n, l)
    }).collect();
    match graph.mode() {
        LengthMode::ExactRational => out.sort_by(|a, b| match (&a.1, &b.1) {
            (EdgeLength::Exact(x), EdgeLength::Exact(y)) => x.cmp(y).then_with(|| a.0.cmp(&b.0)),
            _ => a.0.cmp(&b.0),
        }),
        LengthMode::Symbolic => out.sort_by(|a, b| total(&a.0).cmp(&total(&b.0)).then_with(|| a.0.cmp(&b.0))),
    }
    out
}

/// Exact length-spectrum interface for L_{e,e}: scores over the hidden
/// graph's edge symbols. Lengths are only used to order walks; in symbolic
/// mode they are concretized by square roots of distinct primes, which are
/// rationally independent.
pub struct LengthSpectrumOracle {
    graph: MetricGraph,
    root: usize,
    lengths: Vec<f64>,
}

pub fn default_concrete_lengths(m: usize) -> Vec<f64> {
    let mut primes = Vec::with_capacity(m);
    let mut p = 2u64;
    while primes.len() < m {
        if (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            primes.push(p);
        }
        p += 1;
    }
    primes.into_iter().map(|p| (p as f64).sqrt()).collect()
}

pub fn spectrum_oracle(graph: &MetricGraph, e: usize) -> Result<LengthSpectrumOracle> {
    if e >= graph.num_external() {
        return Err(Error::UnknownEdge(format!("external index {e}")));
    }
    let lengths = match graph.mode() {
        LengthMode::Symbolic => default_concrete_lengths(graph.num_internal()),
        LengthMode::ExactRational => graph.lengths_f64()?,
    };
    Ok(LengthSpectrumOracle { graph: graph.clone(), root: graph.external()[e].vertex, lengths })
}

impl LengthSpectrumOracle {
    pub fn with_lengths(mut self, lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() != self.graph.num_internal() || lengths.iter().any(|&x| x <= 0.0) {
            return Err(Error::Dimension("concrete lengths must be positive, one per edge".into()));
        }
        self.lengths = lengths;
        Ok(self)
    }

    /// Number of symbols (the dimension of score vectors).
    pub fn symbols(&self) -> usize {
        self.graph.num_internal()
    }

    pub fn member(&self, n: &[u32]) -> bool {
        n.len() == self.symbols() && walk_exists(&self.graph, self.root, self.root, n)
    }

    pub fn length(&self, n: &[u32]) -> f64 {
        n.iter().zip(&self.lengths).map(|(&k, &a)| k as f64 * a).sum()
    }

    /// Shortest closed walk at the root using at least one edge outside `inside`.
    pub fn min_excluded(&self, inside: &BTreeSet<usize>) -> Option<Score> {
        use std::cmp::Ordering;
        use std::collections::BinaryHeap;
        #[derive(PartialEq)]
        struct Item(f64, usize, bool);
        impl Eq for Item {}
        impl PartialOrd for Item {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }
        impl Ord for Item {
            fn cmp(&self, o: &Self) -> Ordering {
                o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1)).then_with(|| o.2.cmp(&self.2))
            }
        }
        let g = &self.graph;
        let nv = g.num_vertices();
        let idx = |v: usize, f: bool| v * 2 + f as usize;
        let mut dist = vec![f64::INFINITY; 2 * nv];
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; 2 * nv];
        let mut heap = BinaryHeap::new();
        dist[idx(self.root, false)] = 0.0;
        heap.push(Item(0.0, self.root, false));
        while let Some(Item(d, v, f)) = heap.pop() {
            if d > dist[idx(v, f)] {
                continue;
            }
            for (i, e) in g.internal().iter().enumerate() {
                if !e.touches(v) {
                    continue;
                }
                let w = e.other_end(v);
                let nf = f || !inside.contains(&i);
                let nd = d + self.lengths[i];
                if nd < dist[idx(w, nf)] {
                    dist[idx(w, nf)] = nd;
                    prev[idx(w, nf)] = Some((idx(v, f), i));
                    heap.push(Item(nd, w, nf));
                }
            }
        }
        let target = idx(self.root, true);
        if !dist[target].is_finite() {
            return None;
        }
        let mut n = vec![0u32; self.symbols()];
        let mut cur = target;
        while let Some((p, i)) = prev[cur] {
            n[i] += 1;
            cur = p;
        }
        Some(n)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TourInfo {
    pub vertices: Vec<usize>,
    pub components: usize,
    pub homology_rank: i64,
    /// false when the tour subgraph is disconnected (rank then counts per component)
    pub connected: bool,
}

/// V_𝔗 and the cycle rank |𝔗| − |V_𝔗| + (#components).
pub fn tour_utilities(graph: &MetricGraph, tour: &BTreeSet<usize>) -> Result<TourInfo> {
    let mut verts: BTreeSet<usize> = BTreeSet::new();
    for &i in tour {
        let e = graph.internal().get(i).ok_or_else(|| Error::UnknownEdge(format!("internal index {i}")))?;
        verts.insert(e.from);
        verts.insert(e.to);
    }
    let vlist: Vec<usize> = verts.iter().copied().collect();
    let pos: HashMap<usize, usize> = vlist.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut parent: Vec<usize> = (0..vlist.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &i in tour {
        let e = &graph.internal()[i];
        let (a, b) = (find(&mut parent, pos[&e.from]), find(&mut parent, pos[&e.to]));
        parent[a] = b;
    }
    let comps = (0..vlist.len()).filter(|&x| find(&mut parent, x) == x).count();
    Ok(TourInfo {
        homology_rank: tour.len() as i64 - vlist.len() as i64 + comps as i64,
        vertices: vlist,
        components: comps,
        connected: comps <= 1,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthEstimate {
    /// (Im k, estimate) pairs
    pub estimates: Vec<(f64, f64)>,
    pub value: f64,
    pub stable: bool,
}

/// Shortest length seen by S(k)_{e,e}, from (1/i) d/dk log S_{ee}(k) at
/// k = 1 + iκ for growing κ. Demonstration only.
pub fn shortest_length_demo(graph: &MetricGraph, bc: &BoundaryConditions, e: usize) -> Result<LengthEstimate> {
    let lengths = scattering::complex_lengths(graph)?;
    if graph.num_internal() == 0 {
        return Ok(LengthEstimate { estimates: vec![], value: 0.0, stable: true });
    }
    let f = |k: Complex64| -> Result<Complex64> { Ok(scattering::global_smatrix_metric(graph, bc, k, &lengths)?.s[(e, e)]) };
    let h = 1e-4;
    let mut est = Vec::new();
    let mut stable = true;
    for &kappa in &[5.0, 10.0, 20.0] {
        let k = c(1.0, kappa);
        let v = f(k)?;
        if v.norm() < 1e-250 || !v.norm().is_finite() {
            stable = false;
            continue;
        }
        let d = (f(k + c(h, 0.0))? - f(k - c(h, 0.0))?) / c(2.0 * h, 0.0);
        let w = (d / v / I).re;
        est.push((kappa, w));
    }
    let value = est.last().map_or(f64::NAN, |x| x.1);
    if est.len() >= 2 {
        let a = est[est.len() - 2].1;
        if (a - value).abs() > 0.05 * value.abs().max(1e-12) {
            stable = false;
        }
    } else {
        stable = false;
    }
    Ok(LengthEstimate { estimates: est, value, stable })
}

/// Exact rational metric length ⟨n, a⟩.
pub fn exact_length(graph: &MetricGraph, n: &[u32]) -> Result<BigRational> {
    match graph.score_length(n) {
        EdgeLength::Exact(q) => Ok(q),
        EdgeLength::Symbolic(_) => Err(Error::Symbolic),
    }
}

pub fn op_norm_of_contraction(graph: &MetricGraph, bc: &BoundaryConditions, k: f64, lengths: &[Complex64]) -> Result<f64> {
    let kc = c(k, 0.0);
    let sv = bc.unitary(kc)?;
    let tb = scattering::transfer_blocks_metric(graph, kc, lengths);
    Ok(linalg::op_norm(&(sv * tb.t)))
}
