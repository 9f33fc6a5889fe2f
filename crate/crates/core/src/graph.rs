//! Finite noncompact graphs: vertices, oriented internal edges with exact or
//! symbolic lengths, external half-lines, and the canonical slot layout
//! `K = K_E ⊕ K_I⁻ ⊕ K_I⁺` used by every matrix downstream.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EdgeLength {
    Exact(BigRational),
    /// Nonnegative integer combination of the internal-edge symbols.
    Symbolic(Vec<u32>),
}

impl EdgeLength {
    pub fn is_zero(&self) -> bool {
        match self {
            EdgeLength::Exact(q) => q.is_zero(),
            EdgeLength::Symbolic(v) => v.iter().all(|&x| x == 0),
        }
    }
}

impl fmt::Display for EdgeLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLength::Exact(q) => write!(f, "{q}"),
            EdgeLength::Symbolic(v) => {
                let terms: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(j, &c)| if c == 1 { format!("a{j}") } else { format!("{c}*a{j}") })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join("+"))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthMode {
    ExactRational,
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalEdge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub length: EdgeLength,
}

impl InternalEdge {
    pub fn is_tadpole(&self) -> bool {
        self.from == self.to
    }

    pub fn other_end(&self, v: usize) -> usize {
        if self.from == v {
            self.to
        } else {
            self.from
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.from == v || self.to == v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalEdge {
    pub id: String,
    pub vertex: usize,
}

/// Position in `K`: external channel, `ψ_i(0)` slot or `ψ_i(a_i)` slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    External(usize),
    Minus(usize),
    Plus(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    internal: Vec<InternalEdge>,
    external: Vec<ExternalEdge>,
    mode: LengthMode,
}

/// Input description of an internal edge; `length` is required in exact mode
/// and ignored in symbolic mode (each edge gets its own symbol).
#[derive(Clone, Debug)]
pub struct InternalSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub length: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub connected: bool,
    pub has_external: bool,
    pub tadpole_free: bool,
    pub min_degree: usize,
    pub max_degree: usize,
    pub rational_independence_bound_ok: bool,
    pub relation_bound: u32,
}

impl AssumptionReport {
    pub fn standing_assumptions_hold(&self) -> bool {
        self.connected && self.has_external && self.tadpole_free && self.rational_independence_bound_ok
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(Error::Parse(format!("floating-point length `{s}` rejected; use p/q")));
    }
    BigRational::from_str(t).map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

impl MetricGraph {
    pub fn new(
        vertices: Vec<String>,
        internal: Vec<InternalSpec>,
        external: Vec<(String, String)>,
        mode: LengthMode,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Structure("graph has no vertices".into()));
        }
        let mut vidx = HashMap::new();
        for (k, v) in vertices.iter().enumerate() {
            if vidx.insert(v.clone(), k).is_some() {
                return Err(Error::Structure(format!("duplicate vertex id `{v}`")));
            }
        }
        let lookup = |name: &str| {
            vidx.get(name)
                .copied()
                .ok_or_else(|| Error::Structure(format!("edge endpoint `{name}` is not a vertex")))
        };
        let mut seen = HashSet::new();
        let mut ints = Vec::with_capacity(internal.len());
        for spec in &internal {
            if !seen.insert(spec.id.clone()) {
                return Err(Error::Structure(format!("duplicate edge id `{}`", spec.id)));
            }
            let from = lookup(&spec.from)?;
            let to = lookup(&spec.to)?;
            let length = match mode {
                LengthMode::ExactRational => {
                    let q = spec
                        .length
                        .clone()
                        .ok_or_else(|| Error::Structure(format!("edge `{}` has no length", spec.id)))?;
                    if !q.is_positive() {
                        return Err(Error::Structure(format!("edge `{}` has nonpositive length", spec.id)));
                    }
                    EdgeLength::Exact(q)
                }
                LengthMode::Symbolic => EdgeLength::Symbolic(Vec::new()),
            };
            ints.push(InternalEdge { id: spec.id.clone(), from, to, length });
        }
        let mut exts = Vec::with_capacity(external.len());
        for (id, v) in &external {
            if !seen.insert(id.clone()) {
                return Err(Error::Structure(format!("duplicate edge id `{id}`")));
            }
            exts.push(ExternalEdge { id: id.clone(), vertex: lookup(v)? });
        }
        ints.sort_by(|a, b| a.id.cmp(&b.id));
        exts.sort_by(|a, b| a.id.cmp(&b.id));
        if mode == LengthMode::Symbolic {
            let n = ints.len();
            for (j, e) in ints.iter_mut().enumerate() {
                let mut v = vec![0u32; n];
                v[j] = 1;
                e.length = EdgeLength::Symbolic(v);
            }
        }
        Ok(MetricGraph { vertices, internal: ints, external: exts, mode })
    }

    /// Exact-mode constructor from string literals; lengths as "p/q".
    pub fn exact(vertices: &[&str], internal: &[(&str, &str, &str, &str)], external: &[(&str, &str)]) -> Result<Self> {
        let ints = internal
            .iter()
            .map(|(id, f, t, l)| {
                Ok(InternalSpec { id: id.to_string(), from: f.to_string(), to: t.to_string(), length: Some(parse_rational(l)?) })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            ints,
            external.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            LengthMode::ExactRational,
        )
    }

    pub fn symbolic(vertices: &[&str], internal: &[(&str, &str, &str)], external: &[(&str, &str)]) -> Result<Self> {
        let ints = internal
            .iter()
            .map(|(id, f, t)| InternalSpec { id: id.to_string(), from: f.to_string(), to: t.to_string(), length: None })
            .collect();
        Self::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            ints,
            external.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            LengthMode::Symbolic,
        )
    }

    pub fn mode(&self) -> LengthMode {
        self.mode
    }
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn internal(&self) -> &[InternalEdge] {
        &self.internal
    }
    pub fn external(&self) -> &[ExternalEdge] {
        &self.external
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn num_internal(&self) -> usize {
        self.internal.len()
    }
    pub fn num_external(&self) -> usize {
        self.external.len()
    }
    /// dim K = |E| + 2|I|.
    pub fn dim(&self) -> usize {
        self.external.len() + 2 * self.internal.len()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == id).ok_or_else(|| Error::UnknownVertex(id.into()))
    }
    pub fn internal_index(&self, id: &str) -> Result<usize> {
        self.internal.iter().position(|e| e.id == id).ok_or_else(|| Error::UnknownEdge(id.into()))
    }
    pub fn external_index(&self, id: &str) -> Result<usize> {
        self.external.iter().position(|e| e.id == id).ok_or_else(|| Error::UnknownEdge(id.into()))
    }

    pub fn ext_slot(&self, j: usize) -> usize {
        j
    }
    pub fn minus_slot(&self, i: usize) -> usize {
        self.external.len() + i
    }
    pub fn plus_slot(&self, i: usize) -> usize {
        self.external.len() + self.internal.len() + i
    }

    pub fn slot(&self, s: usize) -> Slot {
        let ne = self.external.len();
        let ni = self.internal.len();
        if s < ne {
            Slot::External(s)
        } else if s < ne + ni {
            Slot::Minus(s - ne)
        } else {
            Slot::Plus(s - ne - ni)
        }
    }

    pub fn slot_vertex(&self, s: usize) -> usize {
        match self.slot(s) {
            Slot::External(j) => self.external[j].vertex,
            Slot::Minus(i) => self.internal[i].from,
            Slot::Plus(i) => self.internal[i].to,
        }
    }

    /// The slot at the other end of the same internal edge.
    pub fn partner(&self, s: usize) -> Option<usize> {
        match self.slot(s) {
            Slot::External(_) => None,
            Slot::Minus(i) => Some(self.plus_slot(i)),
            Slot::Plus(i) => Some(self.minus_slot(i)),
        }
    }

    pub fn slot_edge(&self, s: usize) -> Option<usize> {
        match self.slot(s) {
            Slot::External(_) => None,
            Slot::Minus(i) | Slot::Plus(i) => Some(i),
        }
    }

    /// Local channel order at `v`: external, outgoing-internal, incoming-internal,
    /// each by id. A tadpole contributes one outgoing and one incoming channel.
    pub fn vertex_channels(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, e) in self.external.iter().enumerate() {
            if e.vertex == v {
                out.push(self.ext_slot(j));
            }
        }
        for (i, e) in self.internal.iter().enumerate() {
            if e.from == v {
                out.push(self.minus_slot(i));
            }
        }
        for (i, e) in self.internal.iter().enumerate() {
            if e.to == v {
                out.push(self.plus_slot(i));
            }
        }
        out
    }

    pub fn degree_of(&self, v: usize) -> usize {
        self.external.iter().filter(|e| e.vertex == v).count()
            + self.internal.iter().filter(|e| e.from == v).count()
            + self.internal.iter().filter(|e| e.to == v).count()
    }

    pub fn degree(&self, v: &str) -> Result<usize> {
        Ok(self.degree_of(self.vertex_index(v)?))
    }

    /// Degree in the interior (internal edges only, tadpoles twice).
    pub fn interior_degree(&self, v: usize) -> usize {
        self.internal.iter().filter(|e| e.from == v).count() + self.internal.iter().filter(|e| e.to == v).count()
    }

    /// (all incident edge ids, outgoing internal ids, incoming internal ids).
    pub fn star(&self, v: &str) -> Result<(Vec<String>, Vec<String>, Vec<String>)> {
        let vi = self.vertex_index(v)?;
        let mut all: Vec<String> = self.external.iter().filter(|e| e.vertex == vi).map(|e| e.id.clone()).collect();
        let outs: Vec<String> = self.internal.iter().filter(|e| e.from == vi).map(|e| e.id.clone()).collect();
        let ins: Vec<String> = self.internal.iter().filter(|e| e.to == vi).map(|e| e.id.clone()).collect();
        for e in self.internal.iter().filter(|e| e.touches(vi)) {
            all.push(e.id.clone());
        }
        Ok((all, outs, ins))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for e in &self.internal {
            let a = find(&mut parent, e.from);
            let b = find(&mut parent, e.to);
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..n).all(|v| find(&mut parent, v) == root)
    }

    pub fn is_tadpole_free(&self) -> bool {
        self.internal.iter().all(|e| !e.is_tadpole())
    }

    pub fn validate(&self, relation_bound: u32) -> Result<AssumptionReport> {
        let degs: Vec<usize> = (0..self.vertices.len()).map(|v| self.degree_of(v)).collect();
        let total: usize = degs.iter().sum();
        if total != self.external.len() + 2 * self.internal.len() {
            return Err(Error::Invariant("degree sum differs from |E| + 2|I|".into()));
        }
        let indep = match self.mode {
            LengthMode::Symbolic => true,
            LengthMode::ExactRational => find_relation(&self.exact_lengths()?, relation_bound)?.is_none(),
        };
        Ok(AssumptionReport {
            connected: self.is_connected(),
            has_external: !self.external.is_empty(),
            tadpole_free: self.is_tadpole_free(),
            min_degree: degs.iter().copied().min().unwrap_or(0),
            max_degree: degs.iter().copied().max().unwrap_or(0),
            rational_independence_bound_ok: indep,
            relation_bound,
        })
    }

    pub fn exact_lengths(&self) -> Result<Vec<BigRational>> {
        self.internal
            .iter()
            .map(|e| match &e.length {
                EdgeLength::Exact(q) => Ok(q.clone()),
                EdgeLength::Symbolic(_) => Err(Error::Symbolic),
            })
            .collect()
    }

    pub fn lengths_f64(&self) -> Result<Vec<f64>> {
        Ok(self.exact_lengths()?.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect())
    }

    /// Replaces every length with the given exact values (canonical order).
    pub fn concretize(&self, values: &[BigRational]) -> Result<Self> {
        if values.len() != self.internal.len() {
            return Err(Error::Dimension(format!("{} lengths for {} edges", values.len(), self.internal.len())));
        }
        if values.iter().any(|q| !q.is_positive()) {
            return Err(Error::Structure("lengths must be positive".into()));
        }
        let mut g = self.clone();
        g.mode = LengthMode::ExactRational;
        for (e, q) in g.internal.iter_mut().zip(values) {
            e.length = EdgeLength::Exact(q.clone());
        }
        Ok(g)
    }

    pub fn to_symbolic(&self) -> Self {
        let mut g = self.clone();
        g.mode = LengthMode::Symbolic;
        let n = g.internal.len();
        for (j, e) in g.internal.iter_mut().enumerate() {
            let mut v = vec![0u32; n];
            v[j] = 1;
            e.length = EdgeLength::Symbolic(v);
        }
        g
    }

    /// Metric length ⟨n, a⟩ of a score.
    pub fn score_length(&self, n: &[u32]) -> EdgeLength {
        match self.mode {
            LengthMode::ExactRational => {
                let mut s = BigRational::zero();
                for (e, &k) in self.internal.iter().zip(n) {
                    if let EdgeLength::Exact(q) = &e.length {
                        s += q * BigRational::from_integer(BigInt::from(k));
                    }
                }
                EdgeLength::Exact(s)
            }
            LengthMode::Symbolic => {
                let dim = self.internal.first().map_or(0, |e| match &e.length {
                    EdgeLength::Symbolic(v) => v.len(),
                    _ => 0,
                });
                let mut out = vec![0u32; dim];
                for (e, &k) in self.internal.iter().zip(n) {
                    if let EdgeLength::Symbolic(v) = &e.length {
                        for (o, &c) in out.iter_mut().zip(v) {
                            *o += c * k;
                        }
                    }
                }
                EdgeLength::Symbolic(out)
            }
        }
    }

    /// Adds internal edges (used for penalty laps). Symbolic graphs get fresh symbols.
    pub fn with_extra_edges(&self, extra: Vec<InternalSpec>) -> Result<Self> {
        let mut specs: Vec<InternalSpec> = self
            .internal
            .iter()
            .map(|e| InternalSpec {
                id: e.id.clone(),
                from: self.vertices[e.from].clone(),
                to: self.vertices[e.to].clone(),
                length: match &e.length {
                    EdgeLength::Exact(q) => Some(q.clone()),
                    EdgeLength::Symbolic(_) => None,
                },
            })
            .collect();
        specs.extend(extra);
        Self::new(
            self.vertices.clone(),
            specs,
            self.external.iter().map(|e| (e.id.clone(), self.vertices[e.vertex].clone())).collect(),
            self.mode,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&GraphFile::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: GraphFile = serde_json::from_str(s)?;
        f.into_graph()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub internal: Vec<InternalFile>,
    pub external: Vec<ExternalFile>,
    pub length_mode: LengthMode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InternalFile {
    pub id: String,
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExternalFile {
    pub id: String,
    pub vertex: String,
}

impl From<&MetricGraph> for GraphFile {
    fn from(g: &MetricGraph) -> Self {
        GraphFile {
            vertices: g.vertices.clone(),
            internal: g
                .internal
                .iter()
                .map(|e| InternalFile {
                    id: e.id.clone(),
                    from: g.vertices[e.from].clone(),
                    to: g.vertices[e.to].clone(),
                    length: match &e.length {
                        EdgeLength::Exact(q) => Some(q.to_string()),
                        EdgeLength::Symbolic(_) => None,
                    },
                })
                .collect(),
            external: g
                .external
                .iter()
                .map(|e| ExternalFile { id: e.id.clone(), vertex: g.vertices[e.vertex].clone() })
                .collect(),
            length_mode: g.mode,
        }
    }
}

impl GraphFile {
    pub fn into_graph(self) -> Result<MetricGraph> {
        let specs = self
            .internal
            .into_iter()
            .map(|e| {
                let length = match (&self.length_mode, e.length) {
                    (LengthMode::ExactRational, Some(s)) => Some(parse_rational(&s)?),
                    (LengthMode::ExactRational, None) => {
                        return Err(Error::Parse(format!("edge `{}` needs a length", e.id)))
                    }
                    (LengthMode::Symbolic, _) => None,
                };
                Ok(InternalSpec { id: e.id, from: e.from, to: e.to, length })
            })
            .collect::<Result<Vec<_>>>()?;
        MetricGraph::new(
            self.vertices,
            specs,
            self.external.into_iter().map(|e| (e.id, e.vertex)).collect(),
            self.length_mode,
        )
    }
}

/// Searches for a nonzero integer vector `n` with `|n_i| <= bound` and
/// `Σ n_i a_i = 0` (meet in the middle over the two halves of the edges).
pub fn find_relation(lengths: &[BigRational], bound: u32) -> Result<Option<Vec<i64>>> {
    let m = lengths.len();
    if m == 0 || bound == 0 {
        return Ok(None);
    }
    let mut lcm = BigInt::one();
    for q in lengths {
        let d = q.denom().clone();
        let g = gcd(&lcm, &d);
        lcm = &lcm / &g * &d;
    }
    let ints: Vec<i128> = lengths
        .iter()
        .map(|q| {
            let v = q.numer() * (&lcm / q.denom());
            v.to_i128().ok_or_else(|| Error::Bound("length numerators too large".into()))
        })
        .collect::<Result<_>>()?;
    let b = bound as i64;
    let side = (2 * b + 1) as f64;
    let half = m / 2;
    if side.powi((m - half) as i32) > 2.0e7 {
        return Err(Error::Bound(format!("relation search over {m} edges with bound {bound}")));
    }
    let enumerate = |coeffs: &[i128]| -> Vec<(i128, Vec<i64>)> {
        let k = coeffs.len();
        let mut out = Vec::new();
        let mut v = vec![-b; k];
        loop {
            let s: i128 = v.iter().zip(coeffs).map(|(&x, &c)| x as i128 * c).sum();
            out.push((s, v.clone()));
            let mut j = 0;
            loop {
                if j == k {
                    return out;
                }
                if v[j] < b {
                    v[j] += 1;
                    break;
                }
                v[j] = -b;
                j += 1;
            }
        }
    };
    let left = enumerate(&ints[..half]);
    let right = enumerate(&ints[half..]);
    let mut map: HashMap<i128, Vec<i64>> = HashMap::new();
    for (s, v) in &left {
        let nonzero = v.iter().any(|&x| x != 0);
        match map.get(s) {
            Some(prev) if prev.iter().any(|&x| x != 0) || !nonzero => {}
            _ => {
                map.insert(*s, v.clone());
            }
        }
    }
    for (s, v) in &right {
        if let Some(l) = map.get(&(-s)) {
            let rz = v.iter().all(|&x| x == 0);
            let lz = l.iter().all(|&x| x == 0);
            if !(rz && lz) {
                let mut rel = l.clone();
                rel.extend(v.iter().copied());
                return Ok(Some(rel));
            }
        }
    }
    Ok(None)
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.abs(), b.abs());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

/// Random connected tadpole-free graph with symbolic lengths.
/// External edges go to distinct vertices while possible.
pub fn random_graph(num_vertices: usize, num_internal: usize, num_external: usize, seed: u64) -> Result<MetricGraph> {
    if num_vertices == 0 {
        return Err(Error::Infeasible("no vertices".into()));
    }
    if num_vertices == 1 && num_internal > 0 {
        return Err(Error::Infeasible("a single vertex forces tadpoles".into()));
    }
    if num_internal + 1 < num_vertices {
        return Err(Error::Infeasible(format!(
            "{num_internal} edges cannot connect {num_vertices} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = |n: usize| n.saturating_sub(1).to_string().len();
    let (wv, wi, we) = (width(num_vertices), width(num_internal), width(num_external));
    let vname = |k: usize| format!("v{k:0wv$}");
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..num_vertices {
        let u = rng.random_range(0..v);
        edges.push((u, v));
    }
    while edges.len() < num_internal {
        let u = rng.random_range(0..num_vertices);
        let mut v = rng.random_range(0..num_vertices - 1);
        if v >= u {
            v += 1;
        }
        edges.push((u, v));
    }
    edges.shuffle(&mut rng);
    let internal = edges
        .iter()
        .enumerate()
        .map(|(k, &(u, v))| {
            let (f, t) = if rng.random_bool(0.5) { (u, v) } else { (v, u) };
            InternalSpec { id: format!("i{k:0wi$}"), from: vname(f), to: vname(t), length: None }
        })
        .collect();
    let mut order: Vec<usize> = (0..num_vertices).collect();
    order.shuffle(&mut rng);
    let external = (0..num_external)
        .map(|k| {
            let v = if k < num_vertices { order[k] } else { rng.random_range(0..num_vertices) };
            (format!("e{k:0we$}"), vname(v))
        })
        .collect();
    MetricGraph::new((0..num_vertices).map(vname).collect(), internal, external, LengthMode::Symbolic)
}
