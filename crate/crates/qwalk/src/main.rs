//! Command-line surface: graph generation, Q-graph construction, spectra,
//! amplitude scans, PST/no-PST certificates and PGST witness searches.
//! All JSON output has fixed field order and floats rounded to 15 significant
//! digits so repeated runs are byte-identical.

use clap::{Parser, Subcommand};
use qwalk::graph::{make_family, q_graph, read_edge_list, write_edge_list, Graph};
use qwalk::qgraph::{closed_form_spectrum, Branch};
use qwalk::quadratic::QuadraticNumber;
use qwalk::spectral::{eigendecompose, SpectralDecomposition, DEFAULT_EIGEN_TOL, DEFAULT_SUPPORT_TOL};
use qwalk::transfer::{
    pgst_witness_search_with_jobs, pst_check, qgraph_no_pst_certificate, Tolerances, TransferError,
    Verdict, Violation,
};
use qwalk::walk::{amplitude, fidelity_scan};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qwalk", about = "Continuous-time quantum walks on Q-graphs of regular graphs", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a named graph family as an edge-list file
    Family {
        /// hypercube | cocktail | halved_hypercube | cycle | complete | path | petersen
        name: String,
        /// Family parameters (e.g. dimension)
        params: Vec<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build the Q-graph of an edge-list graph
    Qgraph {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Spectral decomposition of a graph; with --closed-form the input is a
    /// regular base graph and the Q-graph spectrum is emitted branch by branch
    Spectrum {
        input: PathBuf,
        #[arg(long)]
        closed_form: bool,
        #[arg(long, default_value_t = DEFAULT_EIGEN_TOL)]
        tol_eigen: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Perfect-state-transfer certificate between two vertices
    Pst {
        input: PathBuf,
        u: usize,
        v: usize,
        #[arg(long, default_value_t = DEFAULT_EIGEN_TOL)]
        tol_eigen: f64,
        #[arg(long, default_value_t = DEFAULT_SUPPORT_TOL)]
        tol_support: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Certificate that the Q-graph of an integral regular base has no PST
    NoPstQgraph {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EIGEN_TOL)]
        tol_eigen: f64,
        #[arg(long, default_value_t = DEFAULT_SUPPORT_TOL)]
        tol_support: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Pretty-good-state-transfer witness search on the Q-graph of a base
    /// graph with PST
    Pgst {
        input: PathBuf,
        u: usize,
        v: usize,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 1_000_000)]
        alpha_max: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Fidelity |amplitude(u,v,t)| on a uniform time grid, as CSV
    Fidelity {
        input: PathBuf,
        u: usize,
        v: usize,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long, default_value_t = 1001)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_EIGEN_TOL)]
        tol_eigen: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Application failure with the exit-code contract: 2 = input/hypothesis
/// error, 3 = internal invariant violation.
struct AppError {
    code: u8,
    message: String,
}

impl AppError {
    fn input(message: impl ToString) -> Self {
        AppError { code: 2, message: message.to_string() }
    }

    fn internal(message: impl ToString) -> Self {
        AppError { code: 3, message: message.to_string() }
    }
}

impl From<TransferError> for AppError {
    fn from(e: TransferError) -> Self {
        match e {
            TransferError::InvariantViolation(_) => AppError::internal(e),
            _ => AppError::input(e),
        }
    }
}

/// Rounds to 15 significant digits so serialized floats are reproducible.
fn round15(x: f64) -> f64 {
    format!("{x:.14e}").parse().expect("formatted float reparses")
}

#[derive(Serialize)]
struct ToleranceDto {
    eigen: f64,
    support: f64,
}

impl From<Tolerances> for ToleranceDto {
    fn from(t: Tolerances) -> Self {
        ToleranceDto { eigen: t.eigen, support: t.support }
    }
}

/// An eigenvalue carried with its exact rendering when available.
#[derive(Serialize)]
struct ValueDto {
    display: String,
    value: f64,
}

impl ValueDto {
    fn exact(q: &QuadraticNumber) -> Self {
        ValueDto { display: q.to_string(), value: round15(q.to_f64()) }
    }

    fn float(x: f64) -> Self {
        ValueDto { display: format!("{}", round15(x)), value: round15(x) }
    }
}

#[derive(Serialize)]
struct ComplexDto {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct SpectrumDoc {
    command: &'static str,
    closed_form: bool,
    order: usize,
    exactness: &'static str,
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
    branches: Option<Vec<BranchDto>>,
    tolerances: ToleranceDto,
}

#[derive(Serialize)]
struct BranchDto {
    branch: &'static str,
    source_eigenvalue: Option<f64>,
    value: ValueDto,
    multiplicity: usize,
}

#[derive(Serialize)]
struct PstDoc {
    command: &'static str,
    u: usize,
    v: usize,
    verdict: &'static str,
    support: Vec<ValueDto>,
    s_plus: Vec<f64>,
    s_minus: Vec<f64>,
    delta: Option<u64>,
    g: Option<u64>,
    tau0: Option<f64>,
    phase: Option<ComplexDto>,
    times_are_odd_multiples_of_tau0: Option<bool>,
    dynamic_fidelity: Option<f64>,
    violated_condition: Option<ViolationDto>,
    tolerances: ToleranceDto,
}

#[derive(Serialize)]
struct ViolationDto {
    tag: &'static str,
    eigenvalue: f64,
}

#[derive(Serialize)]
struct NoPstDoc {
    command: &'static str,
    verdict: &'static str,
    base_order: usize,
    base_edges: usize,
    degree: usize,
    bipartite: bool,
    base_connected: bool,
    base_order_exceeds_two: bool,
    spectrum: Vec<i64>,
    vertices: Vec<NoPstVertexDto>,
    tolerances: ToleranceDto,
}

#[derive(Serialize)]
struct NoPstVertexDto {
    vertex: usize,
    is_edge_vertex: bool,
    contributing: Vec<i64>,
    support: Vec<ValueDto>,
    surd_table: Vec<SurdRowDto>,
    periodic: bool,
    witness: Option<[String; 2]>,
}

#[derive(Serialize)]
struct SurdRowDto {
    lambda: i64,
    delta_squared: i64,
    sigma: u64,
    theta: u64,
}

#[derive(Serialize)]
struct PgstDoc {
    command: &'static str,
    u: usize,
    v: usize,
    epsilon: f64,
    g: u64,
    alpha: u64,
    t0: f64,
    fidelity: f64,
    target_reached: bool,
    table: Vec<PgstRowDto>,
    tolerances: ToleranceDto,
}

#[derive(Serialize)]
struct PgstRowDto {
    lambda: i64,
    delta_squared: i64,
    sigma: u64,
    theta: u64,
    p: i64,
    residual: f64,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), AppError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(AppError::input),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, doc: &T) -> Result<(), AppError> {
    let mut text = serde_json::to_string_pretty(doc).map_err(AppError::internal)?;
    text.push('\n');
    emit(out, &text)
}

fn load(path: &PathBuf) -> Result<Graph, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::input(format!("{}: {e}", path.display())))?;
    read_edge_list(&text).map_err(AppError::input)
}

fn decompose(g: &Graph, tol: f64) -> Result<SpectralDecomposition, AppError> {
    eigendecompose(&g.adjacency(), tol).map_err(AppError::input)
}

fn warn_degree_one(g: &Graph) {
    if g.vertex_count() >= 1 && (0..g.vertex_count()).all(|v| g.degree(v) == 1) {
        eprintln!("warning: base graph is 1-regular; only P_2 (giving the path P_3) is a meaningful base");
    }
}

fn run(cmd: Cmd) -> Result<(), AppError> {
    match cmd {
        Cmd::Family { name, params, out } => {
            let g = make_family(&name, &params).map_err(AppError::input)?;
            emit(&out, &write_edge_list(&g))
        }
        Cmd::Qgraph { input, out } => {
            let g = load(&input)?;
            emit(&out, &write_edge_list(&q_graph(&g)))
        }
        Cmd::Spectrum { input, closed_form, tol_eigen, out } => {
            let g = load(&input)?;
            if closed_form {
                warn_degree_one(&g);
                let dec = decompose(&g, tol_eigen)?;
                let pairs = closed_form_spectrum(&g, &dec).map_err(AppError::input)?;
                let branches: Vec<BranchDto> = pairs
                    .iter()
                    .map(|p| BranchDto {
                        branch: match p.branch {
                            Branch::Plus => "plus",
                            Branch::Minus => "minus",
                            Branch::MinusTwo => "minus_two",
                            Branch::Zero => "zero",
                        },
                        source_eigenvalue: p.source_eigenvalue.map(round15),
                        value: match p.value.exact() {
                            Some(q) => ValueDto::exact(q),
                            None => ValueDto::float(p.value.to_f64()),
                        },
                        multiplicity: p.multiplicity,
                    })
                    .collect();
                let doc = SpectrumDoc {
                    command: "spectrum",
                    closed_form: true,
                    order: g.vertex_count() + g.edge_count(),
                    exactness: if dec.is_exact() { "exact-rational" } else { "floating" },
                    eigenvalues: branches.iter().map(|b| b.value.value).collect(),
                    multiplicities: branches.iter().map(|b| b.multiplicity).collect(),
                    branches: Some(branches),
                    tolerances: ToleranceDto { eigen: tol_eigen, support: DEFAULT_SUPPORT_TOL },
                };
                emit_json(&out, &doc)
            } else {
                let dec = decompose(&g, tol_eigen)?;
                let doc = SpectrumDoc {
                    command: "spectrum",
                    closed_form: false,
                    order: g.vertex_count(),
                    exactness: if dec.is_exact() { "exact-rational" } else { "floating" },
                    eigenvalues: dec.eigenvalues().iter().map(|&x| round15(x)).collect(),
                    multiplicities: dec.multiplicities().to_vec(),
                    branches: None,
                    tolerances: ToleranceDto { eigen: tol_eigen, support: DEFAULT_SUPPORT_TOL },
                };
                emit_json(&out, &doc)
            }
        }
        Cmd::Pst { input, u, v, tol_eigen, tol_support, out } => {
            let g = load(&input)?;
            let dec = decompose(&g, tol_eigen)?;
            let tols = Tolerances { eigen: tol_eigen, support: tol_support };
            let cert = pst_check(&dec, u, v, tols)?;
            let doc = PstDoc {
                command: "pst",
                u: cert.u,
                v: cert.v,
                verdict: match cert.verdict {
                    Verdict::Pst => "pst",
                    Verdict::NoPst => "no_pst",
                },
                support: cert.support.iter().map(ValueDto::exact).collect(),
                s_plus: cert.s_plus.iter().map(|&x| round15(x)).collect(),
                s_minus: cert.s_minus.iter().map(|&x| round15(x)).collect(),
                delta: cert.pst.as_ref().map(|p| p.delta),
                g: cert.pst.as_ref().map(|p| p.g),
                tau0: cert.pst.as_ref().map(|p| round15(p.tau0)),
                phase: cert.pst.as_ref().map(|p| ComplexDto { re: round15(p.phase.re), im: round15(p.phase.im) }),
                times_are_odd_multiples_of_tau0: cert.pst.as_ref().map(|p| p.times_are_odd_multiples_of_tau0),
                dynamic_fidelity: cert.pst.as_ref().map(|p| round15(p.dynamic_fidelity)),
                violated_condition: cert.violated.as_ref().map(|viol| ViolationDto {
                    tag: viol.tag(),
                    eigenvalue: round15(match viol {
                        Violation::NotStronglyCospectral { eigenvalue } => *eigenvalue,
                        Violation::SupportNotQuadratic { eigenvalue } => *eigenvalue,
                        Violation::ParityMismatch { eigenvalue, .. } => *eigenvalue,
                    }),
                }),
                tolerances: tols.into(),
            };
            emit_json(&out, &doc)
        }
        Cmd::NoPstQgraph { input, tol_eigen, tol_support, out } => {
            let g = load(&input)?;
            let tols = Tolerances { eigen: tol_eigen, support: tol_support };
            let report = qgraph_no_pst_certificate(&g, tols)?;
            let doc = NoPstDoc {
                command: "no-pst-qgraph",
                verdict: "no_pst",
                base_order: report.base_order,
                base_edges: report.base_edges,
                degree: report.degree,
                bipartite: report.bipartite,
                base_connected: report.base_connected,
                base_order_exceeds_two: report.base_order_exceeds_two,
                spectrum: report.spectrum.clone(),
                vertices: report
                    .entries
                    .iter()
                    .map(|e| NoPstVertexDto {
                        vertex: e.vertex,
                        is_edge_vertex: e.is_edge_vertex,
                        contributing: e.contributing.clone(),
                        support: e.support.iter().map(ValueDto::exact).collect(),
                        surd_table: e
                            .surd_table
                            .iter()
                            .map(|&(lambda, delta_squared, sigma, theta)| SurdRowDto { lambda, delta_squared, sigma, theta })
                            .collect(),
                        periodic: e.periodicity.periodic,
                        witness: e.periodicity.witness.as_ref().map(|(a, b)| [a.to_string(), b.to_string()]),
                    })
                    .collect(),
                tolerances: tols.into(),
            };
            emit_json(&out, &doc)
        }
        Cmd::Pgst { input, u, v, eps, alpha_max, jobs, out } => {
            let g = load(&input)?;
            warn_degree_one(&g);
            let w = pgst_witness_search_with_jobs(&g, u, v, eps, alpha_max, jobs)?;
            let doc = PgstDoc {
                command: "pgst",
                u: w.u,
                v: w.v,
                epsilon: round15(w.epsilon),
                g: w.g,
                alpha: w.alpha,
                t0: round15(w.t0),
                fidelity: round15(w.fidelity),
                target_reached: w.target_reached,
                table: w
                    .table
                    .iter()
                    .map(|r| PgstRowDto {
                        lambda: r.lambda,
                        delta_squared: r.delta_squared,
                        sigma: r.sigma,
                        theta: r.theta,
                        p: r.p,
                        residual: round15(r.residual),
                    })
                    .collect(),
                tolerances: Tolerances::default().into(),
            };
            emit_json(&out, &doc)
        }
        Cmd::Fidelity { input, u, v, t0, t1, steps, tol_eigen, out } => {
            let g = load(&input)?;
            if t1 <= t0 {
                return Err(AppError::input("t1 must exceed t0"));
            }
            if steps < 2 {
                return Err(AppError::input("steps must be at least 2"));
            }
            let n = g.vertex_count();
            if u >= n || v >= n {
                return Err(AppError::input(format!("vertex indices must be below {n}")));
            }
            let dec = decompose(&g, tol_eigen)?;
            let series = fidelity_scan(
                |t| amplitude(&dec, t, u, v).expect("indices validated above"),
                u,
                v,
                t0,
                t1,
                steps,
            );
            emit(&out, &series.to_csv())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
