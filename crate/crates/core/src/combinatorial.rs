//! Euler (KBP), Hamiltonian (HPP) and travelling-salesman (TSP I–III) walks
//! decided through nonvanishing walk coefficients of S(k), each with an
//! independent exhaustive search.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::boundary::BoundaryConditions;
use crate::error::{Error, Result};
use crate::graph::{InternalSpec, LengthMode, MetricGraph};
use crate::walks::{self, first_walk, walk_exists, Score, Walk, WalkWeight};

/// Seed of the positive-entry conditions used by every certificate.
pub const CERTIFICATE_SEED: u64 = 0x9e37;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    EulerTheorem,
    FourierCertificate,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    Kbp,
    Hpp,
    Tsp1,
    Tsp2,
    Tsp3(BigRational),
}

#[derive(Clone, Debug)]
pub struct ProblemAnswer {
    pub feasible: bool,
    pub witness: Option<Walk>,
    pub score: Option<Score>,
    pub length: Option<BigRational>,
    pub certificate: CertificateKind,
}

impl ProblemAnswer {
    fn infeasible(certificate: CertificateKind) -> Self {
        ProblemAnswer { feasible: false, witness: None, score: None, length: None, certificate }
    }

    pub fn to_text(&self, graph: &MetricGraph) -> String {
        let mut s = format!("feasible: {}\ncertificate: {}\n", self.feasible, serde_json::to_value(self.certificate).unwrap().as_str().unwrap());
        if let Some(l) = &self.length {
            s += &format!("length: {l}\n");
        }
        if let Some(n) = &self.score {
            s += &format!("score: {}\n", n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        }
        if let Some(w) = &self.witness {
            s += &format!("witness: {}\n", w.describe(graph));
        }
        s
    }
}

fn endpoints(graph: &MetricGraph, e: usize, e_prime: usize) -> Result<(usize, usize)> {
    let ne = graph.num_external();
    if e >= ne || e_prime >= ne {
        return Err(Error::UnknownEdge("external index out of range".into()));
    }
    Ok((graph.external()[e].vertex, graph.external()[e_prime].vertex))
}

/// N_{e,e′}(v; n): half the incident score (tadpoles twice) plus n_{e,e′}(v)/2.
pub fn visit_count(graph: &MetricGraph, n: &[u32], e: usize, e_prime: usize, v: usize) -> Result<BigRational> {
    let (end, start) = endpoints(graph, e, e_prime)?;
    let mut twice: i64 = 0;
    for (ed, &k) in graph.internal().iter().zip(n) {
        twice += k as i64 * (ed.from == v) as i64 + k as i64 * (ed.to == v) as i64;
    }
    twice += (v == end) as i64 + (v == start) as i64;
    Ok(BigRational::new(twice.into(), 2.into()))
}

fn visits_all(graph: &MetricGraph, n: &[u32], e: usize, e_prime: usize) -> Result<bool> {
    for v in 0..graph.num_vertices() {
        if visit_count(graph, n, e, e_prime, v)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn hpp_target(graph: &MetricGraph, start: usize, end: usize) -> u32 {
    graph.num_vertices() as u32 - (start != end) as u32
}

fn length_of(a0: &[BigRational], n: &[u32]) -> BigRational {
    n.iter().zip(a0).fold(BigRational::zero(), |acc, (&k, a)| acc + a * BigRational::from_integer(k.into()))
}

fn check_lengths(graph: &MetricGraph, a0: &[BigRational]) -> Result<()> {
    if a0.len() != graph.num_internal() || a0.iter().any(|a| *a <= BigRational::zero()) {
        return Err(Error::Dimension("a₀ must give one positive length per internal edge".into()));
    }
    Ok(())
}

fn certificate_bc(graph: &MetricGraph) -> Result<BoundaryConditions> {
    BoundaryConditions::positive_entry(graph, CERTIFICATE_SEED)
}

/// Scores with nonvanishing Ŝ_n(k)_{e,e′}, decided exactly from the leading
/// term under positive-entry conditions.
fn nonvanishing_scores(graph: &MetricGraph, e: usize, e_prime: usize, caps: &[u32], max_total: u32) -> Result<Vec<Score>> {
    let bc = certificate_bc(graph)?;
    let tab = walks::leading_table(graph, &bc, e_prime, caps, max_total)?;
    let mut out = Vec::new();
    for (n, col) in tab {
        let l = col[e];
        if l.is_zero() {
            continue;
        }
        if l.phi.re <= 0.0 {
            return Err(Error::Invariant(format!("leading coefficient {} of score {n:?} is not positive", l.phi)));
        }
        out.push(n);
    }
    Ok(out)
}

pub fn solve_kbp(graph: &MetricGraph, e: usize, e_prime: usize) -> Result<ProblemAnswer> {
    let (end, start) = endpoints(graph, e, e_prime)?;
    let ones = vec![1u32; graph.num_internal()];
    let euler = walk_exists(graph, start, end, &ones);
    let cert = nonvanishing_scores(graph, e, e_prime, &ones, ones.len() as u32)?.contains(&ones);
    if euler != cert {
        return Err(Error::Invariant(format!("Euler criterion ({euler}) and Fourier certificate ({cert}) disagree")));
    }
    if !euler {
        return Ok(ProblemAnswer::infeasible(CertificateKind::EulerTheorem));
    }
    let witness = first_walk(graph, e_prime, e, &ones).ok_or_else(|| Error::Invariant("Euler walk not found".into()))?;
    Ok(ProblemAnswer { feasible: true, witness: Some(witness), score: Some(ones), length: None, certificate: CertificateKind::EulerTheorem })
}

#[derive(Clone, Debug)]
pub struct PenaltyLaps {
    pub graph: MetricGraph,
    /// index in the augmented graph of every original internal edge
    pub original: Vec<usize>,
    /// (vertex, lap index) in the augmented graph
    pub laps: Vec<(usize, usize)>,
}

impl PenaltyLaps {
    /// Original-edge part of an augmented score.
    pub fn project(&self, n: &[u32]) -> Score {
        self.original.iter().map(|&j| n[j]).collect()
    }

    /// Drop lap traversals from a walk on the augmented graph.
    pub fn erase(&self, base: &MetricGraph, w: &Walk) -> Result<Walk> {
        let back: HashMap<usize, usize> = self.original.iter().enumerate().map(|(i, &j)| (j, i)).collect();
        let edges = w.edges.iter().filter_map(|j| back.get(j).copied()).collect();
        Walk::new(base, w.from_edge, w.to_edge, edges)
    }
}

/// Attach a tadpole at every vertex other than ∂(e), ∂(e′). In symbolic mode
/// the laps get fresh symbols; otherwise `lap_lengths` (one per lap, in vertex
/// order) must be given.
pub fn add_penalty_laps(graph: &MetricGraph, e: usize, e_prime: usize, lap_lengths: Option<&[BigRational]>) -> Result<PenaltyLaps> {
    let (end, start) = endpoints(graph, e, e_prime)?;
    let targets: Vec<usize> = (0..graph.num_vertices()).filter(|&v| v != end && v != start).collect();
    let lengths: Vec<Option<BigRational>> = match graph.mode() {
        LengthMode::Symbolic => vec![None; targets.len()],
        LengthMode::ExactRational => {
            let l = lap_lengths.ok_or_else(|| Error::Dimension("lap lengths required for rational graphs".into()))?;
            if l.len() != targets.len() {
                return Err(Error::Dimension(format!("{} lap lengths for {} laps", l.len(), targets.len())));
            }
            l.iter().cloned().map(Some).collect()
        }
    };
    if lengths.iter().flatten().any(|b| *b <= BigRational::zero()) {
        return Err(Error::Infeasible("penalty-lap length must be positive".into()));
    }
    let names: Vec<String> = targets.iter().map(|&v| format!("~lap:{}", graph.vertices()[v])).collect();
    let extra = targets
        .iter()
        .zip(&names)
        .zip(lengths)
        .map(|((&v, id), length)| InternalSpec { id: id.clone(), from: graph.vertices()[v].clone(), to: graph.vertices()[v].clone(), length })
        .collect();
    let aug = graph.with_extra_edges(extra)?;
    let original = graph.internal().iter().map(|ed| aug.internal_index(&ed.id)).collect::<Result<Vec<_>>>()?;
    let laps = targets.iter().zip(&names).map(|(&v, id)| Ok((v, aug.internal_index(id)?))).collect::<Result<Vec<_>>>()?;
    Ok(PenaltyLaps { graph: aug, original, laps })
}

fn degree_one_rule(graph: &MetricGraph, start: usize, end: usize) -> Option<bool> {
    let has_pendant = (0..graph.num_vertices()).any(|v| graph.degree_of(v) == 1);
    if !has_pendant {
        return None;
    }
    let ok = graph.num_internal() == 1 && graph.num_vertices() == 2 && {
        let i = &graph.internal()[0];
        i.touches(start) && i.touches(end)
    };
    Some(ok)
}

/// Hamiltonian scores via the penalty-lap coefficients Ŝ_{(n,1)}: original
/// part with |n| = |V| (or |V|−1) and every lap traversed once.
fn hpp_scores(graph: &MetricGraph, e: usize, e_prime: usize) -> Result<Vec<Score>> {
    let (end, start) = endpoints(graph, e, e_prime)?;
    let target = hpp_target(graph, start, end);
    let sym = graph.to_symbolic();
    let laps = add_penalty_laps(&sym, e, e_prime, None)?;
    let ni = laps.graph.num_internal();
    // a walk visiting every vertex once can repeat an edge only as {e′,i,i,e}
    let mut caps = vec![2u32; ni];
    for &(_, j) in &laps.laps {
        caps[j] = 1;
    }
    let found = nonvanishing_scores(&laps.graph, e, e_prime, &caps, target + laps.laps.len() as u32)?;
    let mut out: Vec<Score> = found
        .into_iter()
        .filter(|n| laps.laps.iter().all(|&(_, j)| n[j] == 1))
        .map(|n| laps.project(&n))
        .filter(|n| walks::total(n) == target)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Simple-score route: n ∈ {0,1}^I with |n| on target, all N(v) ≠ 0 and a walk.
fn hpp_simple_route(graph: &MetricGraph, e: usize, e_prime: usize) -> Result<bool> {
    let (end, start) = endpoints(graph, e, e_prime)?;
    let target = hpp_target(graph, start, end);
    let ni = graph.num_internal();
    if ni > 24 {
        return Err(Error::Bound("simple-score route limited to 24 edges".into()));
    }
    for mask in 0u32..(1u32 << ni) {
        if mask.count_ones() != target {
            continue;
        }
        let n: Score = (0..ni).map(|i| mask >> i & 1).collect();
        if visits_all(graph, &n, e, e_prime)? && walk_exists(graph, start, end, &n) {
            return Ok(true);
        }
    }
    // two vertices, both externals at one of them: {e′,i,i,e}
    Ok(graph.num_vertices() == 2 && start == end && graph.internal().iter().any(|i| !i.is_tadpole()))
}

pub fn solve_hpp(graph: &MetricGraph, e: usize, e_prime: usize) -> Result<ProblemAnswer> {
    let (end, start) = endpoints(graph, e, e_prime)?;
    if let Some(ok) = degree_one_rule(graph, start, end) {
        if !ok {
            return Ok(ProblemAnswer::infeasible(CertificateKind::FourierCertificate));
        }
        let n = vec![if start == end { 2 } else { 1 }];
        let witness = first_walk(graph, e_prime, e, &n).ok_or_else(|| Error::Invariant("degree-one witness missing".into()))?;
        return Ok(ProblemAnswer { feasible: true, witness: Some(witness), score: Some(n), length: None, certificate: CertificateKind::FourierCertificate });
    }
    let scores = hpp_scores(graph, e, e_prime)?;
    let simple = hpp_simple_route(graph, e, e_prime)?;
    if simple != !scores.is_empty() {
        return Err(Error::Invariant(format!("penalty-lap certificate ({}) and simple-score route ({simple}) disagree", !scores.is_empty())));
    }
    let Some(n) = scores.into_iter().next() else {
        return Ok(ProblemAnswer::infeasible(CertificateKind::FourierCertificate));
    };
    let witness = first_walk(graph, e_prime, e, &n).ok_or_else(|| Error::Invariant(format!("no walk for certified score {n:?}")))?;
    Ok(ProblemAnswer { feasible: true, witness: Some(witness), score: Some(n), length: None, certificate: CertificateKind::FourierCertificate })
}

/// 𝒩^(I): nonvanishing scores with entries ≤ 2 visiting every vertex.
pub fn tsp_scores(graph: &MetricGraph, e: usize, e_prime: usize) -> Result<Vec<Score>> {
    let ni = graph.num_internal();
    let found = nonvanishing_scores(&graph.to_symbolic(), e, e_prime, &vec![2; ni], 2 * ni as u32)?;
    let mut out = Vec::new();
    for n in found {
        if visits_all(graph, &n, e, e_prime)? {
            out.push(n);
        }
    }
    Ok(out)
}

fn argmin(a0: &[BigRational], scores: impl IntoIterator<Item = Score>) -> Option<(Score, BigRational)> {
    let mut best: Option<(Score, BigRational)> = None;
    for n in scores {
        let l = length_of(a0, &n);
        let better = match &best {
            None => true,
            Some((bn, bl)) => l < *bl || (l == *bl && n < *bn),
        };
        if better {
            best = Some((n, l));
        }
    }
    best
}

fn answer_with(graph: &MetricGraph, e: usize, e_prime: usize, n: Score, l: BigRational) -> Result<ProblemAnswer> {
    let witness = first_walk(graph, e_prime, e, &n).ok_or_else(|| Error::Invariant(format!("no walk for certified score {n:?}")))?;
    Ok(ProblemAnswer { feasible: true, witness: Some(witness), score: Some(n), length: Some(l), certificate: CertificateKind::FourierCertificate })
}

pub fn solve_tsp1(graph: &MetricGraph, a0: &[BigRational], e: usize, e_prime: usize) -> Result<ProblemAnswer> {
    check_lengths(graph, a0)?;
    let scores = tsp_scores(graph, e, e_prime)?;
    match argmin(a0, scores) {
        Some((n, l)) => answer_with(graph, e, e_prime, n, l),
        None if graph.is_connected() => Err(Error::Invariant("𝒩^(I) is empty on a connected graph".into())),
        None => Ok(ProblemAnswer::infeasible(CertificateKind::FourierCertificate)),
    }
}

pub fn solve_tsp2(graph: &MetricGraph, a0: &[BigRational], e: usize, e_prime: usize) -> Result<ProblemAnswer> {
    check_lengths(graph, a0)?;
    let (end, start) = endpoints(graph, e, e_prime)?;
    let scores = match degree_one_rule(graph, start, end) {
        Some(false) => vec![],
        Some(true) => vec![vec![if start == end { 2 } else { 1 }]],
        None => hpp_scores(graph, e, e_prime)?,
    };
    match argmin(a0, scores) {
        Some((n, l)) => answer_with(graph, e, e_prime, n, l),
        None => Ok(ProblemAnswer::infeasible(CertificateKind::FourierCertificate)),
    }
}

pub fn solve_tsp3(graph: &MetricGraph, a0: &[BigRational], e: usize, e_prime: usize, bound: &BigRational) -> Result<ProblemAnswer> {
    let best = solve_tsp1(graph, a0, e, e_prime)?;
    match &best.length {
        Some(l) if l <= bound => Ok(best),
        _ => Ok(ProblemAnswer::infeasible(CertificateKind::FourierCertificate)),
    }
}

/// Largest |I| the exhaustive searches accept by default.
pub const ORACLE_BOUND: usize = 10;

/// Exhaustive search, independent of the scattering machinery.
pub fn brute_force_oracle(
    problem: &Problem,
    graph: &MetricGraph,
    a0: &[BigRational],
    e: usize,
    e_prime: usize,
    bound: usize,
) -> Result<ProblemAnswer> {
    if graph.num_internal() > bound || graph.num_vertices() > bound {
        return Err(Error::Bound(format!("instance exceeds oracle bound {bound}")));
    }
    let (end, start) = endpoints(graph, e, e_prime)?;
    match problem {
        Problem::Kbp => Ok(match euler_trail(graph, start, end) {
            Some(edges) => brute_answer(graph, e, e_prime, edges, None)?,
            None => ProblemAnswer::infeasible(CertificateKind::BruteForce),
        }),
        Problem::Hpp | Problem::Tsp2 => {
            if *problem == Problem::Tsp2 {
                check_lengths(graph, a0)?;
            }
            let walks = hamiltonian_walks(graph, start, end);
            let best = walks
                .into_iter()
                .map(|edges| {
                    let w = Walk { from_edge: e_prime, to_edge: e, chain: vec![], edges };
                    let n = w.score(graph);
                    let l = if *problem == Problem::Tsp2 { length_of(a0, &n) } else { BigRational::zero() };
                    (l, n, w.edges)
                })
                .min();
            Ok(match best {
                Some((l, _, edges)) => brute_answer(graph, e, e_prime, edges, (*problem == Problem::Tsp2).then_some(l))?,
                None => ProblemAnswer::infeasible(CertificateKind::BruteForce),
            })
        }
        Problem::Tsp1 | Problem::Tsp3(_) => {
            check_lengths(graph, a0)?;
            let ans = match capped_covering_walk(graph, a0, start, end) {
                Some((l, edges)) => brute_answer(graph, e, e_prime, edges, Some(l))?,
                None => ProblemAnswer::infeasible(CertificateKind::BruteForce),
            };
            if let Problem::Tsp3(limit) = problem {
                if ans.length.as_ref().is_some_and(|l| l > limit) {
                    return Ok(ProblemAnswer::infeasible(CertificateKind::BruteForce));
                }
            }
            Ok(ans)
        }
    }
}

fn brute_answer(graph: &MetricGraph, e: usize, e_prime: usize, edges: Vec<usize>, length: Option<BigRational>) -> Result<ProblemAnswer> {
    let w = Walk::new(graph, e_prime, e, edges)?;
    let n = w.score(graph);
    Ok(ProblemAnswer { feasible: true, score: Some(n), witness: Some(w), length, certificate: CertificateKind::BruteForce })
}

fn euler_trail(graph: &MetricGraph, start: usize, end: usize) -> Option<Vec<usize>> {
    let ni = graph.num_internal();
    let mut used = vec![false; ni];
    let mut seq = Vec::new();
    fn rec(g: &MetricGraph, v: usize, end: usize, used: &mut [bool], seq: &mut Vec<usize>) -> bool {
        if seq.len() == used.len() {
            return v == end;
        }
        for i in 0..used.len() {
            let ed = &g.internal()[i];
            if used[i] || !ed.touches(v) {
                continue;
            }
            used[i] = true;
            seq.push(i);
            if rec(g, ed.other_end(v), end, used, seq) {
                return true;
            }
            seq.pop();
            used[i] = false;
        }
        false
    }
    rec(graph, start, end, &mut used, &mut seq).then_some(seq)
}

/// All walks from `start` to `end` visiting every vertex once (∂(e) twice when start = end).
fn hamiltonian_walks(graph: &MetricGraph, start: usize, end: usize) -> Vec<Vec<usize>> {
    let nv = graph.num_vertices();
    let need: Vec<u32> = (0..nv).map(|v| if v == start && v == end { 2 } else { 1 }).collect();
    let mut count = vec![0u32; nv];
    count[start] = 1;
    let mut out = Vec::new();
    let mut seq = Vec::new();
    fn rec(g: &MetricGraph, v: usize, end: usize, need: &[u32], count: &mut [u32], seq: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == end && count == need {
            out.push(seq.clone());
        }
        for (i, ed) in g.internal().iter().enumerate() {
            if !ed.touches(v) {
                continue;
            }
            let w = ed.other_end(v);
            if count[w] >= need[w] {
                continue;
            }
            count[w] += 1;
            seq.push(i);
            rec(g, w, end, need, count, seq, out);
            seq.pop();
            count[w] -= 1;
        }
    }
    rec(graph, start, end, &need, &mut count, &mut seq, &mut out);
    out
}

/// Shortest vertex-covering walk among all walks with every nᵢ ≤ 2
/// (lexicographically smallest score on ties).
fn capped_covering_walk(graph: &MetricGraph, a0: &[BigRational], start: usize, end: usize) -> Option<(BigRational, Vec<usize>)> {
    let ni = graph.num_internal();
    let nv = graph.num_vertices();
    let mut seen: HashSet<(usize, Score)> = HashSet::new();
    let mut parent: HashMap<(usize, Score), (usize, Score, usize)> = HashMap::new();
    let mut queue = std::collections::VecDeque::new();
    let s0 = (start, vec![0u32; ni]);
    seen.insert(s0.clone());
    queue.push_back(s0);
    let mut best: Option<(BigRational, Score)> = None;
    while let Some((v, n)) = queue.pop_front() {
        if v == end {
            let mut covered = vec![false; nv];
            covered[start] = true;
            for (ed, &k) in graph.internal().iter().zip(&n) {
                if k > 0 {
                    covered[ed.from] = true;
                    covered[ed.to] = true;
                }
            }
            if covered.iter().all(|&c| c) {
                let l = length_of(a0, &n);
                if best.as_ref().is_none_or(|(bl, bn)| l < *bl || (l == *bl && n < *bn)) {
                    best = Some((l, n.clone()));
                }
            }
        }
        for (i, ed) in graph.internal().iter().enumerate() {
            if ed.touches(v) && n[i] < 2 {
                let mut m = n.clone();
                m[i] += 1;
                let key = (ed.other_end(v), m);
                if seen.insert(key.clone()) {
                    parent.insert(key.clone(), (v, n.clone(), i));
                    queue.push_back(key);
                }
            }
        }
    }
    let (l, n) = best?;
    let mut edges = Vec::new();
    let mut cur = (end, n);
    while let Some((pv, pn, i)) = parent.get(&cur) {
        edges.push(*i);
        cur = (*pv, pn.clone());
    }
    edges.reverse();
    Some((l, edges))
}

/// Shortest vertex-covering walk with no cap on edge repetitions: Dijkstra
/// over (vertex, visited set). Confirms that the nᵢ ≤ 2 restriction loses nothing.
pub fn uncapped_tsp_optimum(graph: &MetricGraph, a0: &[BigRational], e: usize, e_prime: usize) -> Result<Option<BigRational>> {
    check_lengths(graph, a0)?;
    let (end, start) = endpoints(graph, e, e_prime)?;
    let nv = graph.num_vertices();
    if nv > 20 {
        return Err(Error::Bound("visited-set search limited to 20 vertices".into()));
    }
    let full = (1u32 << nv) - 1;
    let mut dist: BTreeMap<(usize, u32), BigRational> = BTreeMap::new();
    let mut done: HashSet<(usize, u32)> = HashSet::new();
    dist.insert((start, 1 << start), BigRational::zero());
    loop {
        let next = dist
            .iter()
            .filter(|(k, _)| !done.contains(k))
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(k, d)| (*k, d.clone()));
        let Some(((v, mask), d)) = next else { return Ok(None) };
        if v == end && mask == full {
            return Ok(Some(d));
        }
        done.insert((v, mask));
        for (i, ed) in graph.internal().iter().enumerate() {
            if !ed.touches(v) {
                continue;
            }
            let w = ed.other_end(v);
            let key = (w, mask | 1 << w);
            let nd = &d + &a0[i];
            if !done.contains(&key) && dist.get(&key).is_none_or(|old| nd < *old) {
                dist.insert(key, nd);
            }
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}
