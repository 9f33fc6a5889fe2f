use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgraph::boundary::BcSpec;
use qgraph::combinatorial::{self as comb, Problem};
use qgraph::graph::{parse_rational, random_graph, rat};
use qgraph::linalg::{self, c, CMat};
use qgraph::{corpus, reconstruct, scattering, walks, BoundaryConditions, LengthMode, MetricGraph};

use crate::grid::{parse_k_grid, parse_score};
use crate::{BcArgs, Command, EdgeArgs, Failure, Generate, Method, Named, ProblemArg, Suite};

type Res<T> = Result<T, Failure>;

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn load_graph(path: &Path) -> Res<MetricGraph> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    MetricGraph::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_bc(graph: &MetricGraph, args: &BcArgs) -> Res<BoundaryConditions> {
    let spec = if Path::new(&args.bc).is_file() {
        let text = fs::read_to_string(&args.bc).map_err(|e| Failure::Input(format!("{}: {e}", args.bc)))?;
        serde_json::from_str::<BcSpec>(&text).map_err(|e| Failure::Input(format!("{}: {e}", args.bc)))?
    } else {
        BcSpec::parse_family(&args.bc, args.seed)?
    };
    Ok(spec.build(graph)?)
}

fn external(graph: &MetricGraph, id: Option<&str>, default: usize) -> Res<usize> {
    if graph.num_external() == 0 {
        return Err(Failure::Input("graph has no external edges".into()));
    }
    match id {
        Some(id) => Ok(graph.external_index(id)?),
        None => Ok(default),
    }
}

/// (e, e′): exit and entry edges.
fn endpoints(graph: &MetricGraph, edges: &EdgeArgs) -> Res<(usize, usize)> {
    let last = graph.num_external().saturating_sub(1);
    let ep = external(graph, edges.from.as_deref(), 0)?;
    let e = external(graph, edges.to.as_deref(), last)?;
    Ok((e, ep))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Res<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

struct Csv(csv::Writer<Vec<u8>>);

impl Csv {
    fn new(header: &[String]) -> Res<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(|e| Failure::Invariant(e.to_string()))?;
        Ok(Csv(w))
    }

    fn row(&mut self, fields: &[String]) -> Res<()> {
        self.0.write_record(fields).map_err(|e| Failure::Invariant(e.to_string()))
    }

    fn finish(self) -> Res<String> {
        let bytes = self.0.into_inner().map_err(|e| Failure::Invariant(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Failure::Invariant(e.to_string()))
    }
}

fn matrix_header(graph: &MetricGraph, name: &str) -> Vec<String> {
    let ids: Vec<&str> = graph.external().iter().map(|x| x.id.as_str()).collect();
    let mut h = Vec::new();
    for e in &ids {
        for ep in &ids {
            h.push(format!("{name}_{e}_{ep}_re"));
            h.push(format!("{name}_{e}_{ep}_im"));
        }
    }
    h
}

fn matrix_fields(m: &CMat) -> Vec<String> {
    let mut f = Vec::with_capacity(2 * m.len());
    for e in 0..m.nrows() {
        for ep in 0..m.ncols() {
            f.push(num(m[(e, ep)].re));
            f.push(num(m[(e, ep)].im));
        }
    }
    f
}

fn score_text(n: &[u32]) -> String {
    n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn run(cmd: &Command) -> Res<()> {
    match cmd {
        Command::Validate { graph, bound } => validate(&load_graph(graph)?, *bound),
        Command::Smatrix { graph, bc, k, out } => {
            let g = load_graph(graph)?;
            let bc = load_bc(&g, bc)?;
            emit(out, &smatrix(&g, &bc, &parse_k_grid(k)?)?)
        }
        Command::Fourier { graph, bc, k, score, method, nodes, out } => {
            let g = load_graph(graph)?;
            let bc = load_bc(&g, bc)?;
            let n = parse_score(score, g.num_internal())?;
            emit(out, &fourier(&g, &bc, &parse_k_grid(k)?, &n, *method, *nodes)?)
        }
        Command::Walks { graph, edges, score, limit, out } => {
            let g = load_graph(graph)?;
            let (e, ep) = endpoints(&g, edges)?;
            let n = parse_score(score, g.num_internal())?;
            let found = walks::enumerate_walks(&g, ep, e, &n);
            let mut csv = Csv::new(&["walk".into(), "comb_length".into(), "length".into()])?;
            for w in found.iter().take(*limit) {
                csv.row(&[w.describe(&g), w.comb_length().to_string(), w.metric_length(&g).to_string()])?;
            }
            emit(out, &csv.finish()?)?;
            if found.len() > *limit {
                eprintln!("qgraph: {} walks, first {limit} listed", found.len());
            }
            if found.is_empty() {
                return Err(Failure::Negative(format!("no walk with score {}", score_text(&n))));
            }
            Ok(())
        }
        Command::Spectrum { graph, edges, max, out } => {
            let g = load_graph(graph)?;
            let (e, ep) = endpoints(&g, edges)?;
            let mut csv = Csv::new(&["score".into(), "comb_length".into(), "length".into()])?;
            for (n, l) in walks::length_spectrum(&g, e, ep, *max) {
                csv.row(&[score_text(&n), walks::total(&n).to_string(), l.to_string()])?;
            }
            emit(out, &csv.finish()?)
        }
        Command::Reconstruct { graph, ext, out } => {
            let g = load_graph(graph)?;
            let e = external(&g, ext.as_deref(), 0)?;
            reconstruct_cmd(&g, e, out)
        }
        Command::Solve { problem, graph, edges, max_length, oracle, oracle_bound, out } => {
            let g = load_graph(graph)?;
            let (e, ep) = endpoints(&g, edges)?;
            solve(&g, *problem, e, ep, max_length.as_deref(), *oracle, *oracle_bound, out)
        }
        Command::Check { suite, graph, bc, k, tol, nodes, out } => {
            let g = load_graph(graph)?;
            let bcs = load_bc(&g, bc)?;
            check(&g, &bcs, *suite, &parse_k_grid(k)?, *tol, *nodes, bc.seed, out)
        }
        Command::Generate { what } => generate(what),
    }
}

fn validate(g: &MetricGraph, bound: u32) -> Res<()> {
    let r = g.validate(bound)?;
    let text = format!(
        "connected: {}\nhas_external: {}\ntadpole_free: {}\nmin_degree: {}\nmax_degree: {}\nrational_independence_bound_ok: {}\nrelation_bound: {}\nstanding_assumptions_hold: {}\n",
        r.connected,
        r.has_external,
        r.tadpole_free,
        r.min_degree,
        r.max_degree,
        r.rational_independence_bound_ok,
        r.relation_bound,
        r.standing_assumptions_hold()
    );
    print!("{text}");
    if r.standing_assumptions_hold() {
        Ok(())
    } else {
        Err(Failure::Negative("standing assumptions fail".into()))
    }
}

fn smatrix(g: &MetricGraph, bc: &BoundaryConditions, ks: &[f64]) -> Res<String> {
    let mut header = vec!["k".to_string()];
    header.extend(matrix_header(g, "s"));
    header.push("unitarity_residual".into());
    let mut csv = Csv::new(&header)?;
    for &k in ks {
        let s = scattering::global_smatrix(g, bc, c(k, 0.0))?;
        let mut row = vec![num(k)];
        row.extend(matrix_fields(&s.s));
        row.push(num(s.unitarity_residual()));
        csv.row(&row)?;
    }
    csv.finish()
}

fn fourier(g: &MetricGraph, bc: &BoundaryConditions, ks: &[f64], n: &[u32], method: Method, nodes: usize) -> Res<String> {
    let mut header = vec!["k".to_string()];
    header.extend(matrix_header(g, "shat"));
    let mut csv = Csv::new(&header)?;
    let signed: Vec<i64> = n.iter().map(|&x| x as i64).collect();
    for &k in ks {
        let m = match method {
            Method::Walks => walks::fourier_matrix(g, bc, n, c(k, 0.0))?,
            Method::Quadrature => walks::quadrature_coefficients(g, bc, k, &[signed.clone()], nodes)?.remove(0),
        };
        let mut row = vec![num(k)];
        row.extend(matrix_fields(&m));
        csv.row(&row)?;
    }
    csv.finish()
}

fn reconstruct_cmd(g: &MetricGraph, e: usize, out: &Option<PathBuf>) -> Res<()> {
    let hidden = g.to_symbolic();
    let oracle = walks::spectrum_oracle(&hidden, e)?;
    let r = reconstruct::reconstruct_interior(&oracle)?;
    let mut csv = Csv::new(&["step", "case", "vertices", "symbol", "w", "nu", "length"].map(String::from))?;
    for s in &r.steps {
        let vs: Vec<String> = s.vertices.iter().map(|v| format!("u{v}")).collect();
        let nu: Vec<String> = s.nu.iter().map(|x| x.to_string()).collect();
        csv.row(&[
            s.step.to_string(),
            s.case.to_string(),
            vs.join(" "),
            format!("a{}", s.symbol),
            score_text(&s.w),
            nu.join(" "),
            s.length_expr.clone(),
        ])?;
    }
    print!("{}", csv.finish()?);
    let root = g.external()[e].vertex;
    let iso = reconstruct::rooted_isomorphic(&r.graph, r.root, &hidden, root);
    eprintln!("qgraph: {} vertices, {} edges, rooted-isomorphic: {iso}", r.graph.num_vertices(), r.graph.num_internal());
    if let Some(p) = out {
        emit(&Some(p.clone()), &r.graph.to_json()?)?;
    }
    if !iso {
        return Err(Failure::Invariant("reconstruction is not isomorphic to the input".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn solve(
    g: &MetricGraph,
    problem: ProblemArg,
    e: usize,
    ep: usize,
    max_length: Option<&str>,
    oracle: bool,
    oracle_bound: usize,
    out: &Option<PathBuf>,
) -> Res<()> {
    let needs_lengths = !matches!(problem, ProblemArg::Kbp | ProblemArg::Hpp);
    let a0 = match (needs_lengths, g.mode()) {
        (false, _) => Vec::new(),
        (true, LengthMode::ExactRational) => g.exact_lengths()?,
        (true, LengthMode::Symbolic) => return Err(Failure::Input("TSP needs exact lengths".into())),
    };
    let p = match problem {
        ProblemArg::Kbp => Problem::Kbp,
        ProblemArg::Hpp => Problem::Hpp,
        ProblemArg::Tsp1 => Problem::Tsp1,
        ProblemArg::Tsp2 => Problem::Tsp2,
        ProblemArg::Tsp3 => {
            let l = max_length.ok_or_else(|| Failure::Input("tsp3 needs --max-length".into()))?;
            Problem::Tsp3(parse_rational(l)?)
        }
    };
    let answer = if oracle {
        comb::brute_force_oracle(&p, g, &a0, e, ep, oracle_bound)?
    } else {
        match &p {
            Problem::Kbp => comb::solve_kbp(g, e, ep)?,
            Problem::Hpp => comb::solve_hpp(g, e, ep)?,
            Problem::Tsp1 => comb::solve_tsp1(g, &a0, e, ep)?,
            Problem::Tsp2 => comb::solve_tsp2(g, &a0, e, ep)?,
            Problem::Tsp3(l) => comb::solve_tsp3(g, &a0, e, ep, l)?,
        }
    };
    let name = format!("{problem:?}").to_lowercase();
    emit(out, &format!("problem: {name}\n{}", answer.to_text(g)))?;
    if answer.feasible {
        Ok(())
    } else {
        Err(Failure::Negative(format!("{name}: infeasible")))
    }
}

struct Checker {
    csv: Csv,
    worst: f64,
    tol: f64,
}

impl Checker {
    fn record(&mut self, suite: &str, k: f64, metric: &str, value: f64) -> Res<()> {
        if value > self.worst || value.is_nan() {
            self.worst = if value.is_nan() { f64::INFINITY } else { value };
        }
        let status = if value <= self.tol { "ok" } else { "fail" };
        self.csv.row(&[suite.into(), num(k), metric.into(), num(value), status.into()])
    }
}

/// Truncation order of the series suite.
const SERIES_ORDER: u32 = 4;

/// ‖Σ_{|n|≤K} Ŝ_n(k) e^{ik⟨n,a⟩} − Σ_{N≤K} P_E(𝔖T)^N 𝔖 P_E‖.
fn series_residual(g: &MetricGraph, bc: &BoundaryConditions, k: f64) -> Res<f64> {
    let lengths = g.lengths_f64()?;
    let ne = g.num_external();
    let caps = vec![SERIES_ORDER; g.num_internal()];
    let mut acc = CMat::zeros(ne, ne);
    for ep in 0..ne {
        for (n, col) in walks::fourier_table(g, bc, ep, &caps, SERIES_ORDER, c(k, 0.0))? {
            let phase: f64 = n.iter().zip(&lengths).map(|(&x, a)| x as f64 * a).sum();
            let z = Complex64::new(0.0, k * phase).exp();
            for e in 0..ne {
                acc[(e, ep)] += col[e] * z;
            }
        }
    }
    let direct = walks::partial_sum(g, bc, k, SERIES_ORDER as usize)?;
    Ok(linalg::norm(&(acc - direct)))
}

fn quadrature_residual(g: &MetricGraph, bc: &BoundaryConditions, k: f64, nodes: usize) -> Res<f64> {
    let m = g.num_internal();
    if m > 2 {
        return Err(Failure::Input(format!("quadrature suite takes |I| <= 2, got {m}")));
    }
    let mut scores: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..m {
        scores = scores.into_iter().flat_map(|p| (0..=2u32).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    let signed: Vec<Vec<i64>> = scores.iter().map(|n| n.iter().map(|&x| x as i64).collect()).collect();
    let quad = walks::quadrature_coefficients(g, bc, k, &signed, nodes)?;
    let mut worst = 0.0f64;
    for (n, q) in scores.iter().zip(&quad) {
        let w = walks::fourier_matrix(g, bc, n, c(k, 0.0))?;
        worst = worst.max((w - q).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

#[allow(clippy::too_many_arguments)]
fn check(g: &MetricGraph, bc: &BoundaryConditions, suite: Suite, ks: &[f64], tol: f64, nodes: usize, seed: u64, out: &Option<PathBuf>) -> Res<()> {
    let header = ["suite", "k", "metric", "value", "status"].map(String::from);
    let mut ch = Checker { csv: Csv::new(&header)?, worst: 0.0, tol };
    let identities = matches!(suite, Suite::Identities | Suite::All);
    let series = matches!(suite, Suite::Series | Suite::All) && bc.is_local();
    if matches!(suite, Suite::Series) && !bc.is_local() {
        return Err(Failure::Input("series suite needs local conditions".into()));
    }
    for &k in ks {
        if identities {
            let r = scattering::check_identities(g, bc, k, seed)?;
            ch.record("identities", k, "unitarity", r.unitarity)?;
            ch.record("identities", k, "hermitian_analyticity", r.hermitian_analyticity)?;
            ch.record("identities", k, "gauge", r.gauge)?;
            ch.record("identities", k, "reflection_gauge", r.reflection_gauge)?;
            if let Some(t) = r.transpose {
                ch.record("identities", k, "transpose", t)?;
            }
            if let Some(t) = r.route_agreement {
                ch.record("identities", k, "route_agreement", t)?;
            }
        }
        if series {
            ch.record("series", k, "walk_series", series_residual(g, bc, k)?)?;
        }
        if suite == Suite::Quadrature {
            ch.record("quadrature", k, "walk_vs_quadrature", quadrature_residual(g, bc, k, nodes)?)?;
        }
    }
    let worst = ch.worst;
    emit(out, &ch.csv.finish()?)?;
    if worst <= tol {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("check failed: max residual {worst:e} > {tol:e}")))
    }
}

fn generate(what: &Generate) -> Res<()> {
    let (g, out) = match what {
        Generate::Random { vertices, internal, external, seed, exact, out } => {
            let g = random_graph(*vertices, *internal, *external, *seed)?;
            let g = if *exact {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
                let lengths: Vec<_> = (0..*internal).map(|_| rat(rng.random_range(1..=20), rng.random_range(1..=6))).collect();
                g.concretize(&lengths)?
            } else {
                g
            };
            (g, out)
        }
        Generate::Named { name, size, out } => {
            let g = match name {
                Named::Path => corpus::path_graph(rat(1, 1)),
                Named::Pendant => corpus::pendant_graph("1"),
                Named::DoubleEdge => corpus::double_edge_graph(),
                Named::Konigsberg => corpus::konigsberg(),
                Named::Triangle => corpus::triangle(["1", "5/2", "3"]),
                Named::Cycle => {
                    if *size < 2 {
                        return Err(Failure::Input("cycle needs --size >= 2".into()));
                    }
                    corpus::cycle(*size)
                }
            };
            (g, out)
        }
    };
    emit(out, &(g.to_json()? + "\n"))
}
