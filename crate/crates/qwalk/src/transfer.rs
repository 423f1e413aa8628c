//! State-transfer analysis: the perfect-state-transfer decision with full
//! certificates, vertex periodicity, no-PST certificates for Q-graphs of
//! integral regular graphs, and the constructive pretty-good-state-transfer
//! witness search.

use crate::graph::Graph;
use crate::qgraph::{exact_pair_value, qgraph_context};
use crate::quadratic::{square_free_part, QuadraticNumber};
use crate::spectral::{
    eigendecompose, eigenvalue_support, strong_cospectrality, SpectralDecomposition, SpectralError,
    DEFAULT_EIGEN_TOL, DEFAULT_SUPPORT_TOL,
};
use crate::walk::{amplitude, qgraph_amplitude, WalkError};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransferError {
    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("internal invariant violation: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("support eigenvalue {0} is not expressible over a single square root")]
    MixedSurds(f64),
}

/// Tolerances recorded into every certificate so results are auditable.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub eigen: f64,
    pub support: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eigen: DEFAULT_EIGEN_TOL, support: DEFAULT_SUPPORT_TOL }
    }
}

/// Recognizes a floating eigenvalue as an integer or a quadratic integer
/// `(p + b*sqrt(theta))/2` by scanning monic integer quadratics with
/// coefficients bounded by the spectral radius. Returns `None` when nothing
/// within tolerance reconstructs the value.
pub fn recognize_algebraic(lambda: f64, radius: f64) -> Option<QuadraticNumber> {
    let rounded = lambda.round();
    if (lambda - rounded).abs() < 1e-7 {
        return Some(QuadraticNumber::integer(rounded as i64));
    }
    let b = radius.abs().ceil() as i64 + 1;
    let mut best: Option<(f64, QuadraticNumber)> = None;
    for p in -2 * b..=2 * b {
        let q_real = p as f64 * lambda - lambda * lambda;
        let q = q_real.round() as i64;
        let resid = (lambda * lambda - p as f64 * lambda + q as f64).abs();
        if resid > 1e-6 {
            continue;
        }
        let disc = p * p - 4 * q;
        if disc <= 0 {
            continue;
        }
        let (sigma, theta) = square_free_part(disc as u64);
        if theta == 1 {
            continue; // rational roots were handled above
        }
        let sign = if lambda > p as f64 / 2.0 { 1 } else { -1 };
        let candidate = QuadraticNumber::half(p, sign * sigma as i64, theta as i64);
        if (candidate.to_f64() - lambda).abs() < 1e-8 {
            match &best {
                Some((r, _)) if *r <= resid => {}
                _ => best = Some((resid, candidate)),
            }
        }
    }
    best.map(|(_, q)| q)
}

/// Exact eigenvalue support of a vertex, with members recognized as
/// quadratic numbers.
pub fn support_values(dec: &SpectralDecomposition, u: usize, tol: f64) -> Result<Vec<QuadraticNumber>, TransferError> {
    let support = eigenvalue_support(dec, u, tol)?;
    let radius = dec.spectral_radius_bound();
    support
        .members
        .iter()
        .map(|&i| {
            if let Some(ints) = dec.integer_eigenvalues() {
                return Ok(QuadraticNumber::integer(ints[i]));
            }
            let lam = dec.eigenvalues()[i];
            recognize_algebraic(lam, radius).ok_or(TransferError::MixedSurds(lam))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodicityMode {
    AllInteger,
    SingleSurd,
    None,
}

/// Vertex periodicity over an eigenvalue support.
#[derive(Debug, Clone)]
pub struct PeriodicityReport {
    pub vertex: usize,
    pub periodic: bool,
    pub mode: PeriodicityMode,
    /// Offending eigenvalue pair when not periodic.
    pub witness: Option<(QuadraticNumber, QuadraticNumber)>,
}

/// A vertex is periodic iff the support is all integers, or all members are
/// `(a + b_lambda*sqrt(Delta))/2` for one square-free `Delta > 1` and a shared
/// integer `a` (integer members allowed with `b = 0`, forcing them to equal
/// `a/2`).
pub fn periodicity_check(support: &[QuadraticNumber], vertex: usize) -> PeriodicityReport {
    assert!(!support.is_empty(), "support must be nonempty");
    if support.iter().all(|x| x.is_integer()) {
        return PeriodicityReport {
            vertex,
            periodic: true,
            mode: PeriodicityMode::AllInteger,
            witness: None,
        };
    }
    let surds: Vec<&QuadraticNumber> = support.iter().filter(|x| !x.is_rational()).collect();
    let delta = surds[0].radicand();
    // every surd member must live over the same radicand
    for s in &surds[1..] {
        if s.radicand() != delta {
            return PeriodicityReport {
                vertex,
                periodic: false,
                mode: PeriodicityMode::None,
                witness: Some((*surds[0], **s)),
            };
        }
    }
    // shared integer a: all members (surd or not) need rational part a/2,
    // expressible in half-integer form
    let a2 = surds[0].rational_part();
    let ok = support.iter().all(|x| x.half_form().is_some() && x.rational_part() == a2);
    if ok {
        PeriodicityReport {
            vertex,
            periodic: true,
            mode: PeriodicityMode::SingleSurd,
            witness: None,
        }
    } else {
        let bad = support
            .iter()
            .find(|x| x.half_form().is_none() || x.rational_part() != a2)
            .expect("a mismatching member exists on this path");
        PeriodicityReport {
            vertex,
            periodic: false,
            mode: PeriodicityMode::None,
            witness: Some((*surds[0], *bad)),
        }
    }
}

/// `g = gcd((lambda_0 - lambda)/sqrt(Delta))` over the support. Errors when a
/// gap is not a nonnegative integer multiple of `sqrt(Delta)`.
pub fn compute_g(support: &[QuadraticNumber], lambda0: QuadraticNumber, delta: u64) -> Result<u64, TransferError> {
    let mut g: u64 = 0;
    for &lam in support {
        if !lam.is_rational() && !lambda0.is_rational() && lam.radicand() != lambda0.radicand() {
            return Err(TransferError::MixedSurds(lam.to_f64()));
        }
        let gap = lambda0 - lam;
        let normalized: Ratio<i64> = if delta == 1 {
            if !gap.is_rational() {
                return Err(TransferError::MixedSurds(lam.to_f64()));
            }
            gap.rational_part()
        } else {
            if !gap.rational_part().is_zero() || (!gap.is_zero() && gap.radicand() != delta as i64) {
                return Err(TransferError::MixedSurds(lam.to_f64()));
            }
            gap.surd_coefficient()
        };
        if !normalized.is_integer() || normalized.is_negative() {
            return Err(TransferError::MixedSurds(lam.to_f64()));
        }
        let k = normalized.to_integer() as u64;
        g = g.gcd(&k);
    }
    if g == 0 {
        return Err(TransferError::InvariantViolation("support has no nonzero gap".into()));
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pst,
    NoPst,
}

/// The Theorem 2.1 condition that failed, with witness data.
#[derive(Debug, Clone)]
pub enum Violation {
    NotStronglyCospectral {
        /// Eigenvalue whose projector columns at `u`, `v` are neither equal
        /// nor opposite (or support mismatch).
        eigenvalue: f64,
    },
    SupportNotQuadratic {
        eigenvalue: f64,
    },
    ParityMismatch {
        eigenvalue: f64,
        normalized_gap_over_g: i64,
    },
}

impl Violation {
    pub fn tag(&self) -> &'static str {
        match self {
            Violation::NotStronglyCospectral { .. } => "not_strongly_cospectral",
            Violation::SupportNotQuadratic { .. } => "support_not_quadratic",
            Violation::ParityMismatch { .. } => "parity_mismatch",
        }
    }
}

/// Data present only on a positive PST verdict.
#[derive(Debug, Clone)]
pub struct PstData {
    /// Square-free `Delta`; 1 for integral support.
    pub delta: u64,
    pub g: u64,
    /// Minimal PST time `pi/(g*sqrt(Delta))`.
    pub tau0: f64,
    /// `e^{-i tau0 lambda_0}`.
    pub phase: Complex64,
    /// PST occurs exactly at odd multiples of `tau0`.
    pub times_are_odd_multiples_of_tau0: bool,
    /// `|amplitude(u, v, tau0)|`, the a-posteriori dynamic confirmation.
    pub dynamic_fidelity: f64,
}

#[derive(Debug, Clone)]
pub struct PSTCertificate {
    pub u: usize,
    pub v: usize,
    pub verdict: Verdict,
    /// Support of `u` as recognized exact values (empty if recognition failed).
    pub support: Vec<QuadraticNumber>,
    /// Eigenvalues with `E e_u = E e_v`.
    pub s_plus: Vec<f64>,
    /// Eigenvalues with `E e_u = -E e_v`.
    pub s_minus: Vec<f64>,
    pub pst: Option<PstData>,
    pub violated: Option<Violation>,
    pub tolerances: Tolerances,
}

/// Decides PST between `u` and `v`: strong cospectrality, the integral or
/// single-surd quadratic-integer shape of the support, and the even/odd split
/// of normalized eigenvalue gaps. A positive verdict is confirmed dynamically
/// by evaluating the amplitude at the minimal time.
pub fn pst_check(dec: &SpectralDecomposition, u: usize, v: usize, tols: Tolerances) -> Result<PSTCertificate, TransferError> {
    if u == v {
        return Err(TransferError::HypothesesUnmet("vertices must be distinct".into()));
    }
    let cosp = strong_cospectrality(dec, u, v, tols.support)?;
    let supp_u = eigenvalue_support(dec, u, tols.support)?;
    let s_plus: Vec<f64> = cosp.s_plus.iter().map(|&i| dec.eigenvalues()[i]).collect();
    let s_minus: Vec<f64> = cosp.s_minus.iter().map(|&i| dec.eigenvalues()[i]).collect();

    let fail = |support: Vec<QuadraticNumber>, violated: Violation| PSTCertificate {
        u,
        v,
        verdict: Verdict::NoPst,
        support,
        s_plus: s_plus.clone(),
        s_minus: s_minus.clone(),
        pst: None,
        violated: Some(violated),
        tolerances: tols,
    };

    // (i) strong cospectrality
    if !cosp.strongly_cospectral {
        let offending = supp_u
            .members
            .iter()
            .find(|i| !cosp.s_plus.contains(i) && !cosp.s_minus.contains(i))
            .map(|&i| dec.eigenvalues()[i])
            .unwrap_or(f64::NAN);
        return Ok(fail(Vec::new(), Violation::NotStronglyCospectral { eigenvalue: offending }));
    }

    // (ii) support shape: all integers, or quadratic integers over one surd
    let support = match support_values(dec, u, tols.support) {
        Ok(s) => s,
        Err(TransferError::MixedSurds(lam)) => {
            return Ok(fail(Vec::new(), Violation::SupportNotQuadratic { eigenvalue: lam }))
        }
        Err(e) => return Err(e),
    };
    let periodicity = periodicity_check(&support, u);
    let delta = match periodicity.mode {
        PeriodicityMode::AllInteger => 1u64,
        PeriodicityMode::SingleSurd => {
            // non-integer members must be genuine quadratic integers
            if let Some(bad) = support.iter().find(|x| !x.is_zero() && !x.is_quadratic_integer()) {
                return Ok(fail(support.clone(), Violation::SupportNotQuadratic { eigenvalue: bad.to_f64() }));
            }
            support.iter().find(|x| !x.is_rational()).expect("single-surd mode has a surd").radicand() as u64
        }
        PeriodicityMode::None => {
            let (_, w) = periodicity.witness.expect("non-periodic report carries a witness");
            return Ok(fail(support.clone(), Violation::SupportNotQuadratic { eigenvalue: w.to_f64() }));
        }
    };

    // (iii) parity of normalized gaps against the S+/S- split
    let lambda0 = *support
        .iter()
        .max_by(|a, b| a.to_f64().partial_cmp(&b.to_f64()).unwrap())
        .expect("support is nonempty");
    let g = match compute_g(&support, lambda0, delta) {
        Ok(g) => g,
        Err(TransferError::MixedSurds(lam)) => {
            return Ok(fail(support.clone(), Violation::SupportNotQuadratic { eigenvalue: lam }))
        }
        Err(e) => return Err(e),
    };
    for (&idx, &lam_exact) in supp_u.members.iter().zip(support.iter().collect::<Vec<_>>()) {
        let gap = lambda0 - lam_exact;
        let normalized = if delta == 1 { gap.rational_part() } else { gap.surd_coefficient() };
        let k = normalized.to_integer() / g as i64;
        let in_plus = cosp.s_plus.contains(&idx);
        let want_plus = k % 2 == 0;
        if in_plus != want_plus {
            return Ok(fail(
                support.clone(),
                Violation::ParityMismatch { eigenvalue: dec.eigenvalues()[idx], normalized_gap_over_g: k },
            ));
        }
    }

    // positive verdict: compute tau0 and phase, then confirm dynamically
    let tau0 = PI / (g as f64 * (delta as f64).sqrt());
    let phase = (-Complex64::i() * tau0 * lambda0.to_f64()).exp();
    let amp = amplitude(dec, tau0, u, v)?;
    let dynamic_fidelity = amp.norm();
    if dynamic_fidelity <= 1.0 - 1e-9 {
        return Err(TransferError::InvariantViolation(format!(
            "certificate claims PST at tau0={tau0} but |amplitude| = {dynamic_fidelity}"
        )));
    }
    if (amp / dynamic_fidelity - phase).norm() > 1e-9 {
        return Err(TransferError::InvariantViolation("PST phase does not match e^{-i tau0 lambda0}".into()));
    }
    Ok(PSTCertificate {
        u,
        v,
        verdict: Verdict::Pst,
        support,
        s_plus,
        s_minus,
        pst: Some(PstData {
            delta,
            g,
            tau0,
            phase,
            times_are_odd_multiples_of_tau0: true,
            dynamic_fidelity,
        }),
        violated: None,
        tolerances: tols,
    })
}

/// Per-vertex entry of a Q-graph no-PST certificate.
#[derive(Debug, Clone)]
pub struct NoPstVertexEntry {
    /// Vertex of Q(G); indices `>= n` are edge-vertices.
    pub vertex: usize,
    pub is_edge_vertex: bool,
    /// Base eigenvalues contributing the pair `lambda_{+-}` to the support.
    pub contributing: Vec<i64>,
    /// Q-graph support members established exactly.
    pub support: Vec<QuadraticNumber>,
    /// `(lambda, Delta^2, sigma, theta)` rows showing each `Delta^2` is not a
    /// perfect square.
    pub surd_table: Vec<(i64, i64, u64, u64)>,
    pub periodicity: PeriodicityReport,
}

/// A Theorem-4.2-style certificate: no vertex of Q(G) is periodic, hence no
/// PST anywhere in Q(G).
#[derive(Debug, Clone)]
pub struct QGraphNoPstReport {
    pub verdict: Verdict,
    pub base_order: usize,
    pub base_edges: usize,
    pub degree: usize,
    pub bipartite: bool,
    /// Preamble facts the Case-2 contradiction relies on.
    pub base_connected: bool,
    pub base_order_exceeds_two: bool,
    pub spectrum: Vec<i64>,
    pub entries: Vec<NoPstVertexEntry>,
    pub tolerances: Tolerances,
}

/// Certifies the absence of PST on Q(G) for an integral regular connected
/// base graph: every vertex's Q-graph support contains irrational pairs
/// `(r + lambda - 2 +- sqrt((lambda+r)^2+4))/2` from at least two base
/// eigenvalues, so no periodicity mode applies.
pub fn qgraph_no_pst_certificate(g: &Graph, tols: Tolerances) -> Result<QGraphNoPstReport, TransferError> {
    let ctx = qgraph_context(g).map_err(|e| TransferError::HypothesesUnmet(e.to_string()))?;
    if ctx.degree < 2 {
        return Err(TransferError::HypothesesUnmet(
            "base graph must be at least 2-regular (Q(P_2) = P_3 does have PST)".into(),
        ));
    }
    if ctx.n <= 2 {
        return Err(TransferError::HypothesesUnmet("base graph must have more than 2 vertices".into()));
    }
    let dec = eigendecompose(&g.adjacency(), tols.eigen)?;
    let Some(ints) = dec.integer_eigenvalues().map(|s| s.to_vec()) else {
        return Err(TransferError::NotApplicable(
            "base graph spectrum is not integral; the certificate hypotheses are unmet".into(),
        ));
    };
    let exact = dec.exact().expect("integer spectrum implies exact projectors");
    let r = ctx.degree as i64;
    let rmat = crate::graph::incidence(g).matrix().clone();

    // E_lambda * R in exact rational arithmetic, per eigenvalue
    let er: Vec<Vec<Vec<Ratio<i64>>>> = exact
        .projectors
        .iter()
        .map(|p| {
            (0..ctx.m)
                .map(|col| {
                    (0..ctx.n)
                        .map(|row| {
                            (0..ctx.n)
                                .map(|k| p[(row, k)] * Ratio::from_integer(rmat[(k, col)]))
                                .sum()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let d = ints.len();
    let mut entries = Vec::with_capacity(ctx.n + ctx.m);
    for z in 0..ctx.n + ctx.m {
        let is_edge_vertex = z >= ctx.n;
        let mut contributing = Vec::new();
        for i in 0..d {
            if ctx.bipartite && i == d - 1 {
                continue; // lambda_d = -r generates the 0/-2 branches, not a surd pair
            }
            let member = if is_edge_vertex {
                er[i][z - ctx.n].iter().any(|x| !x.is_zero())
            } else {
                !exact.projectors[i].column_is_zero(z)
            };
            if member {
                contributing.push(ints[i]);
            }
        }
        if contributing.len() < 2 {
            // cannot happen for a connected base with n > 2 (recorded in the
            // preamble); reaching here means the Case-2 contradiction failed
            return Err(TransferError::InvariantViolation(format!(
                "vertex {z} of Q(G) has fewer than two contributing base eigenvalues"
            )));
        }
        let mut support = Vec::new();
        let mut surd_table = Vec::new();
        for &lam in &contributing {
            let d2 = (lam + r).pow(2) + 4;
            let (sigma, theta) = square_free_part(d2 as u64);
            if theta == 1 {
                return Err(TransferError::InvariantViolation(format!(
                    "(lambda + r)^2 + 4 = {d2} is a perfect square for lambda = {lam}"
                )));
            }
            surd_table.push((lam, d2, sigma, theta));
            support.push(exact_pair_value(lam, r, true));
            support.push(exact_pair_value(lam, r, false));
        }
        let periodicity = periodicity_check(&support, z);
        if periodicity.periodic {
            return Err(TransferError::InvariantViolation(format!(
                "vertex {z} of Q(G) unexpectedly classified periodic"
            )));
        }
        entries.push(NoPstVertexEntry {
            vertex: z,
            is_edge_vertex,
            contributing,
            support,
            surd_table,
            periodicity,
        });
    }

    Ok(QGraphNoPstReport {
        verdict: Verdict::NoPst,
        base_order: ctx.n,
        base_edges: ctx.m,
        degree: ctx.degree,
        bipartite: ctx.bipartite,
        base_connected: true,
        base_order_exceeds_two: true,
        spectrum: ints,
        entries,
        tolerances: tols,
    })
}

/// One row of the PGST surd table: `Delta^2 = sigma^2 * theta` and the
/// nearest-integer target `p` for the returned `alpha`.
#[derive(Debug, Clone)]
pub struct ThetaRow {
    pub lambda: i64,
    pub delta_squared: i64,
    pub sigma: u64,
    pub theta: u64,
    pub p: i64,
    /// `(alpha + 1/(2g)) * sqrt(theta) - p`, the Kronecker approximation
    /// residual, evaluated at 128 fractional bits.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct PGSTWitness {
    pub u: usize,
    pub v: usize,
    pub epsilon: f64,
    pub alpha: u64,
    /// `t0 = (4 alpha + 2/g) pi`.
    pub t0: f64,
    pub fidelity: f64,
    pub g: u64,
    /// False when `alpha_max` was exhausted; the best-found witness is
    /// returned, which is a search incompleteness, not a mathematical negative.
    pub target_reached: bool,
    pub table: Vec<ThetaRow>,
}

/// `floor(sqrt(theta) * 2^bits)` by integer square root.
fn sqrt_scaled(theta: u64, bits: u32) -> BigInt {
    let scaled = num_bigint::BigUint::from(theta) << (2 * bits);
    BigInt::from(scaled.sqrt())
}

/// Nearest integer to `(alpha + 1/(2g)) * sqrt(theta)` and the signed
/// residual, in fixed-point arithmetic with `bits` fractional bits.
fn nearest_integer_target(alpha: u64, g: u64, theta: u64, bits: u32) -> (i64, f64) {
    let s = sqrt_scaled(theta, bits); // sqrt(theta) * 2^bits
    let num = BigInt::from(2 * g * alpha + 1) * &s;
    let den = BigInt::from(2 * g) << bits;
    let p: BigInt = Integer::div_floor(&(&num + (&den >> 1)), &den);
    let resid_num = num - &p * &den;
    let residual = resid_num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN);
    (p.to_i64().expect("target fits in i64 at desk scale"), residual)
}

/// Searches for the smallest `alpha <= alpha_max` whose time
/// `t0 = (4 alpha + 2/g) pi` achieves Q-graph fidelity above `1 - epsilon`
/// between `u` and `v`. Requires the base graph to admit PST at `pi/g` with
/// integral support, and for a bipartite base that `r/g` is even.
pub fn pgst_witness_search(
    g: &Graph,
    u: usize,
    v: usize,
    epsilon: f64,
    alpha_max: u64,
) -> Result<PGSTWitness, TransferError> {
    pgst_witness_search_with_jobs(g, u, v, epsilon, alpha_max, 1)
}

/// As `pgst_witness_search`, with the scan partitioned into `jobs` parallel
/// stripes; the result is the smallest qualifying `alpha` regardless of
/// `jobs`.
pub fn pgst_witness_search_with_jobs(
    g: &Graph,
    u: usize,
    v: usize,
    epsilon: f64,
    alpha_max: u64,
    jobs: usize,
) -> Result<PGSTWitness, TransferError> {
    if !(0.0..1.0).contains(&epsilon) || epsilon == 0.0 {
        return Err(TransferError::HypothesesUnmet("epsilon must lie in (0, 1)".into()));
    }
    if alpha_max < 1 {
        return Err(TransferError::HypothesesUnmet("alpha_max must be at least 1".into()));
    }
    let ctx = qgraph_context(g).map_err(|e| TransferError::HypothesesUnmet(e.to_string()))?;
    if ctx.degree < 2 {
        return Err(TransferError::HypothesesUnmet("base graph must be at least 2-regular".into()));
    }
    let tols = Tolerances::default();
    let dec = eigendecompose(&g.adjacency(), tols.eigen)?;
    let cert = pst_check(&dec, u, v, tols)?;
    let Some(pst) = cert.pst.as_ref().filter(|_| cert.verdict == Verdict::Pst) else {
        return Err(TransferError::HypothesesUnmet(format!(
            "base graph has no PST between {u} and {v} ({})",
            cert.violated.as_ref().map(|x| x.tag()).unwrap_or("unknown")
        )));
    };
    if pst.delta != 1 {
        return Err(TransferError::HypothesesUnmet(
            "base PST time is not pi/g over an integral support; the construction does not apply".into(),
        ));
    }
    let gg = pst.g;
    let r = ctx.degree as u64;
    if ctx.bipartite && !(r % gg == 0 && (r / gg) % 2 == 0) {
        return Err(TransferError::HypothesesUnmet(format!(
            "bipartite base needs r/g even; r = {r}, g = {gg}"
        )));
    }

    // support of u, dropping -r for a bipartite base
    let ints = dec.integer_eigenvalues().expect("delta = 1 implies exact mode");
    let supp = eigenvalue_support(&dec, u, tols.support)?;
    let lambdas: Vec<i64> = supp
        .members
        .iter()
        .map(|&i| ints[i])
        .filter(|&lam| !(ctx.bipartite && lam == -(ctx.degree as i64)))
        .collect();

    let fidelity_at = |alpha: u64| -> f64 {
        let t0 = (4.0 * alpha as f64 + 2.0 / gg as f64) * PI;
        qgraph_amplitude(&dec, ctx.degree, ctx.bipartite, t0, u, v)
            .expect("original-vertex indices validated above")
            .norm()
    };

    let threshold = 1.0 - epsilon;
    let jobs = jobs.max(1);
    let mut found: Option<u64> = None;
    let mut best = (0u64, -1.0f64);
    const BLOCK: u64 = 8192;
    let mut start = 1u64;
    while start <= alpha_max && found.is_none() {
        // one wave of `jobs` blocks, scanned in parallel, merged in order
        let blocks: Vec<(u64, u64)> = (0..jobs as u64)
            .map(|k| {
                let lo = start + k * BLOCK;
                (lo, (lo + BLOCK - 1).min(alpha_max))
            })
            .filter(|(lo, hi)| lo <= hi)
            .collect();
        let results: Vec<(Option<u64>, (u64, f64))> = std::thread::scope(|scope| {
            let handles: Vec<_> = blocks
                .iter()
                .map(|&(lo, hi)| {
                    let fidelity_at = &fidelity_at;
                    scope.spawn(move || {
                        let mut hit = None;
                        let mut local_best = (0u64, -1.0f64);
                        for alpha in lo..=hi {
                            let f = fidelity_at(alpha);
                            if f > local_best.1 {
                                local_best = (alpha, f);
                            }
                            if f > threshold {
                                hit = Some(alpha);
                                break;
                            }
                        }
                        (hit, local_best)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan thread panicked")).collect()
        });
        for (hit, local_best) in results {
            if local_best.1 > best.1 {
                best = local_best;
            }
            if let Some(a) = hit {
                found = Some(a);
                break; // earlier blocks were merged first; this is the smallest
            }
        }
        start += jobs as u64 * BLOCK;
    }

    let (alpha, target_reached) = match found {
        Some(a) => (a, true),
        None => (best.0, false),
    };
    let fidelity = fidelity_at(alpha);
    let t0 = (4.0 * alpha as f64 + 2.0 / gg as f64) * PI;
    let table = lambdas
        .iter()
        .map(|&lam| {
            let d2 = (lam + ctx.degree as i64).pow(2) + 4;
            let (sigma, theta) = square_free_part(d2 as u64);
            let (p, residual) = nearest_integer_target(alpha, gg, theta, 128);
            ThetaRow { lambda: lam, delta_squared: d2, sigma, theta, p, residual }
        })
        .collect();
    Ok(PGSTWitness {
        u,
        v,
        epsilon,
        alpha,
        t0,
        fidelity,
        g: gg,
        target_reached,
        table,
    })
}
