//! Small named graphs used throughout the tests, benches and CLI examples.

use num_rational::BigRational;

use crate::boundary::{BoundaryConditions, VertexConditions};
use crate::graph::{InternalSpec, LengthMode, MetricGraph};
use crate::linalg::from_real;

/// e – v0 –i(a)– v1 – e′ (external ids "e", "ep").
pub fn path_graph(a: BigRational) -> MetricGraph {
    MetricGraph::new(
        vec!["v0".into(), "v1".into()],
        vec![InternalSpec { id: "i".into(), from: "v0".into(), to: "v1".into(), length: Some(a) }],
        vec![("e".into(), "v0".into()), ("ep".into(), "v1".into())],
        LengthMode::ExactRational,
    )
    .expect("path graph")
}

/// e1 at v0, i3: v0→v1, the loop i1, i2: v1→v2, e2 at v2.
pub fn double_edge_graph() -> MetricGraph {
    MetricGraph::exact(
        &["v0", "v1", "v2"],
        &[("i1", "v1", "v2", "1"), ("i2", "v1", "v2", "3/2"), ("i3", "v0", "v1", "5/7")],
        &[("e1", "v0"), ("e2", "v2")],
    )
    .expect("double_edge graph")
}

pub fn double_edge_with_lengths(a1: &str, a2: &str, a3: &str) -> MetricGraph {
    MetricGraph::exact(
        &["v0", "v1", "v2"],
        &[("i1", "v1", "v2", a1), ("i2", "v1", "v2", a2), ("i3", "v0", "v1", a3)],
        &[("e1", "v0"), ("e2", "v2")],
    )
    .expect("double_edge graph")
}

/// Single pendant edge: e at v0, i: v0→v1, v1 a dead end.
pub fn pendant_graph(a: &str) -> MetricGraph {
    MetricGraph::exact(&["v0", "v1"], &[("i", "v0", "v1", a)], &[("e", "v0")]).expect("pendant graph")
}

/// The bridges of Königsberg: A–B twice, A–C twice, A–D, B–D, C–D.
pub fn konigsberg() -> MetricGraph {
    MetricGraph::exact(
        &["A", "B", "C", "D"],
        &[
            ("i1", "A", "B", "1"),
            ("i2", "A", "B", "2"),
            ("i3", "A", "C", "3"),
            ("i4", "A", "C", "5"),
            ("i5", "A", "D", "7"),
            ("i6", "B", "D", "11"),
            ("i7", "C", "D", "13"),
        ],
        &[("e1", "A"), ("e2", "B")],
    )
    .expect("konigsberg")
}

/// Triangle v0, v1, v2 with externals at v0 and v1.
pub fn triangle(a: [&str; 3]) -> MetricGraph {
    MetricGraph::exact(
        &["v0", "v1", "v2"],
        &[("i1", "v0", "v1", a[0]), ("i2", "v1", "v2", a[1]), ("i3", "v2", "v0", a[2])],
        &[("e1", "v0"), ("e2", "v1")],
    )
    .expect("triangle")
}

/// Line graph e – v0 –i– v1 – e′ with the matrices printed for the
/// vanishing-coefficient example, rewritten in the slot order (e, e′, i⁻, i⁺).
pub fn transmitting_line() -> (MetricGraph, BoundaryConditions) {
    let g = path_graph(BigRational::from_integer(1.into()));
    // columns (ψ_e, ψ_i(0)) at v0 and (ψ_i(a), ψ_e′) at v1
    let a0 = from_real(&[vec![1.0, -1.0], vec![0.0, 0.0]]);
    let b0 = from_real(&[vec![0.0, 0.0], vec![1.0, 1.0]]);
    let a1 = from_real(&[vec![1.0, -1.0], vec![0.0, 0.0]]);
    let b1 = from_real(&[vec![0.0, 0.0], vec![1.0, 1.0]]);
    // local channel order at v1 is (e′, i⁺); swap columns of (ψ_i(a), ψ_e′)
    let swap = from_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
    let blocks = vec![
        VertexConditions { vertex: 0, a: a0, b: b0, channels: g.vertex_channels(0) },
        VertexConditions { vertex: 1, a: &a1 * &swap, b: &b1 * &swap, channels: g.vertex_channels(1) },
    ];
    let bc = BoundaryConditions::from_blocks(&g, blocks).expect("example conditions");
    (g, bc)
}

/// Same line graph with fully reflecting (Neumann) vertices: S_v = I.
pub fn reflecting_line() -> (MetricGraph, BoundaryConditions) {
    let g = path_graph(BigRational::from_integer(1.into()));
    let bc = BoundaryConditions::neumann(&g).expect("neumann");
    (g, bc)
}

/// Even cycle of length `n` with both externals at v0.
pub fn cycle(n: usize) -> MetricGraph {
    let names: Vec<String> = (0..n).map(|j| format!("v{j}")).collect();
    let internal = (0..n)
        .map(|j| InternalSpec {
            id: format!("i{j}"),
            from: names[j].clone(),
            to: names[(j + 1) % n].clone(),
            length: Some(BigRational::from_integer((j as i64 + 1).into())),
        })
        .collect();
    MetricGraph::new(names.clone(), internal, vec![("e1".into(), names[0].clone()), ("e2".into(), names[0].clone())], LengthMode::ExactRational)
        .expect("cycle")
}
