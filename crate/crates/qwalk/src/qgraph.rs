//! Closed-form eigenvalues, eigenvectors and eigenprojectors of the Q-graph
//! adjacency matrix of a regular graph, built from the base graph's spectral
//! decomposition and the kernel of the incidence matrix.
//!
//! For an r-regular base graph with eigenvalue `lambda`, the Q-graph picks up
//! the pair `lambda_{+-} = (r + lambda - 2 +- sqrt((lambda+r)^2 + 4))/2`,
//! the eigenvalue -2 on the kernel of R, and (bipartite case) the eigenvalue 0.

use crate::graph::{classify, incidence, Graph};
use crate::quadratic::QuadraticNumber;
use crate::spectral::{kernel_basis, SpectralDecomposition};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QGraphError {
    #[error("base graph must be connected")]
    Disconnected,
    #[error("base graph must be regular")]
    NotRegular,
    #[error("base graph must have degree at least 1")]
    DegreeTooSmall,
    #[error("decomposition dimension {0} does not match graph order {1}")]
    DimensionMismatch(usize, usize),
}

/// Validated context shared by the closed-form operations.
#[derive(Debug, Clone)]
pub struct QGraphContext {
    pub n: usize,
    pub m: usize,
    pub degree: usize,
    pub bipartite: bool,
    /// 2-coloring when bipartite.
    pub bipartition: Option<Vec<u8>>,
}

/// Checks connectivity and regularity; `degree = 1` (the path `P_2`) is
/// permitted, matching the `Q(P_2) = P_3` boundary case.
pub fn qgraph_context(g: &Graph) -> Result<QGraphContext, QGraphError> {
    let c = classify(g);
    if !c.is_connected {
        return Err(QGraphError::Disconnected);
    }
    let degree = c.regularity.ok_or(QGraphError::NotRegular)?;
    if degree < 1 {
        return Err(QGraphError::DegreeTooSmall);
    }
    Ok(QGraphContext {
        n: g.vertex_count(),
        m: g.edge_count(),
        degree,
        bipartite: c.is_bipartite,
        bipartition: c.bipartition,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
    MinusTwo,
    Zero,
}

/// An eigenvalue carried exactly (quadratic number over an integral base
/// spectrum) or as a float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenvalueRepr {
    Exact(QuadraticNumber),
    Float(f64),
}

impl EigenvalueRepr {
    pub fn to_f64(&self) -> f64 {
        match self {
            EigenvalueRepr::Exact(q) => q.to_f64(),
            EigenvalueRepr::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&QuadraticNumber> {
        match self {
            EigenvalueRepr::Exact(q) => Some(q),
            EigenvalueRepr::Float(_) => None,
        }
    }
}

/// One distinct eigenvalue of the Q-graph with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct QGraphEigenpair {
    pub branch: Branch,
    /// Index of the source eigenvalue in the base decomposition; absent for
    /// the -2 and 0 branches.
    pub source_index: Option<usize>,
    pub source_eigenvalue: Option<f64>,
    pub value: EigenvalueRepr,
    pub multiplicity: usize,
}

/// The exact pair value `(r + lambda - 2 +- sqrt((lambda+r)^2+4))/2` for an
/// integer base eigenvalue.
pub fn exact_pair_value(lambda: i64, r: i64, plus: bool) -> QuadraticNumber {
    let disc = (lambda + r).pow(2) + 4;
    QuadraticNumber::half(r + lambda - 2, if plus { 1 } else { -1 }, disc)
}

fn float_pair_value(lambda: f64, r: f64, plus: bool) -> f64 {
    let disc = ((lambda + r) * (lambda + r) + 4.0).sqrt();
    0.5 * (r + lambda - 2.0 + if plus { disc } else { -disc })
}

/// Full multiset (as distinct value/multiplicity pairs) of the `n + m`
/// Q-graph eigenvalues. For a bipartite base graph the pair generated by
/// `lambda_d = -r` appears as the 0 and -2 branches.
pub fn closed_form_spectrum(g: &Graph, dec: &SpectralDecomposition) -> Result<Vec<QGraphEigenpair>, QGraphError> {
    let ctx = qgraph_context(g)?;
    if dec.dim() != ctx.n {
        return Err(QGraphError::DimensionMismatch(dec.dim(), ctx.n));
    }
    let r = ctx.degree;
    let mut out = Vec::new();
    let d = dec.eigenvalues().len();
    for i in 0..d {
        let lam = dec.eigenvalues()[i];
        let mult = dec.multiplicities()[i];
        if ctx.bipartite && i == d - 1 {
            // lambda_d = -r: the plus branch is 0, the minus branch folds
            // into the -2 eigenspace
            debug_assert!((lam + r as f64).abs() < 1e-9);
            debug_assert_eq!(mult, 1);
            continue;
        }
        for plus in [true, false] {
            let value = match dec.integer_eigenvalues() {
                Some(ints) => EigenvalueRepr::Exact(exact_pair_value(ints[i], r as i64, plus)),
                None => EigenvalueRepr::Float(float_pair_value(lam, r as f64, plus)),
            };
            out.push(QGraphEigenpair {
                branch: if plus { Branch::Plus } else { Branch::Minus },
                source_index: Some(i),
                source_eigenvalue: Some(lam),
                value,
                multiplicity: mult,
            });
        }
    }
    if ctx.bipartite {
        out.push(QGraphEigenpair {
            branch: Branch::Zero,
            source_index: None,
            source_eigenvalue: None,
            value: EigenvalueRepr::Exact(QuadraticNumber::integer(0)),
            multiplicity: 1,
        });
    }
    let kernel_mult = ctx.m + usize::from(ctx.bipartite) - ctx.n;
    if kernel_mult > 0 {
        out.push(QGraphEigenpair {
            branch: Branch::MinusTwo,
            source_index: None,
            source_eigenvalue: None,
            value: EigenvalueRepr::Exact(QuadraticNumber::integer(-2)),
            multiplicity: kernel_mult,
        });
    }
    debug_assert_eq!(out.iter().map(|p| p.multiplicity).sum::<usize>(), ctx.n + ctx.m);
    Ok(out)
}

/// One closed-form eigenvector of the Q-graph adjacency matrix.
#[derive(Debug, Clone)]
pub struct QGraphEigenvector {
    pub branch: Branch,
    /// `(i, j)`: eigenvector `j` within base eigenspace `i`; for the -2
    /// branch, `i` indexes the kernel basis.
    pub source: Option<(usize, usize)>,
    pub value: f64,
    pub vector: DVector<f64>,
}

/// Orthonormal eigenvectors per Theorems 3.1/3.2: the `(c x, R^T x)` pairs
/// scaled by `(c^2 + lambda + r)^{-1/2}` with `c = lambda_{+-} + 2 - r - lambda`,
/// the `(0, zeta_k)` kernel vectors, and for a bipartite base the signed
/// bipartition vector at eigenvalue 0.
pub fn closed_form_eigenvectors(g: &Graph, dec: &SpectralDecomposition) -> Result<Vec<QGraphEigenvector>, QGraphError> {
    let ctx = qgraph_context(g)?;
    if dec.dim() != ctx.n {
        return Err(QGraphError::DimensionMismatch(dec.dim(), ctx.n));
    }
    let (n, m, r) = (ctx.n, ctx.m, ctx.degree as f64);
    let rt = incidence(g).as_f64().transpose();
    let d = dec.eigenvalues().len();
    let mut out = Vec::new();
    for i in 0..d {
        if ctx.bipartite && i == d - 1 {
            continue;
        }
        let lam = dec.eigenvalues()[i];
        for plus in [true, false] {
            let value = float_pair_value(lam, r, plus);
            let c = value + 2.0 - r - lam;
            let scale = 1.0 / (c * c + lam + r).sqrt();
            for j in 0..dec.multiplicities()[i] {
                let x = dec.basis(i).column(j);
                let mut v = DVector::zeros(n + m);
                v.rows_mut(0, n).copy_from(&(x * c * scale));
                v.rows_mut(n, m).copy_from(&(&rt * x * scale));
                out.push(QGraphEigenvector {
                    branch: if plus { Branch::Plus } else { Branch::Minus },
                    source: Some((i, j)),
                    value,
                    vector: v,
                });
            }
        }
    }
    if ctx.bipartite {
        let coloring = ctx.bipartition.as_ref().expect("bipartite graphs carry a coloring");
        let mut v = DVector::zeros(n + m);
        let scale = 1.0 / (n as f64).sqrt();
        for (i, &c) in coloring.iter().enumerate() {
            v[i] = if c == 0 { scale } else { -scale };
        }
        out.push(QGraphEigenvector {
            branch: Branch::Zero,
            source: None,
            value: 0.0,
            vector: v,
        });
    }
    for (k, zeta) in kernel_basis(&incidence(g)).iter().enumerate() {
        let mut v = DVector::zeros(n + m);
        v.rows_mut(n, m).copy_from(zeta);
        out.push(QGraphEigenvector {
            branch: Branch::MinusTwo,
            source: Some((k, 0)),
            value: -2.0,
            vector: v,
        });
    }
    debug_assert_eq!(out.len(), n + m);
    Ok(out)
}

/// Eigenprojectors of the Q-graph adjacency, one per entry of
/// `closed_form_spectrum`, in the same order.
#[derive(Debug, Clone)]
pub struct QGraphProjectorSet {
    pub pairs: Vec<QGraphEigenpair>,
    pub projectors: Vec<DMatrix<f64>>,
}

/// Block-form projectors: for the `lambda_{+-}` branches
/// `F = (c^2 E, c E R; c (E R)^T, R^T E R)/(c^2 + lambda + r)`, for -2 the
/// kernel projector `diag(0, sum zeta zeta^T)`, and for 0 the label-free form
/// `diag(E_{-r}, 0)`.
pub fn qgraph_projectors(g: &Graph, dec: &SpectralDecomposition) -> Result<QGraphProjectorSet, QGraphError> {
    let ctx = qgraph_context(g)?;
    let pairs = closed_form_spectrum(g, dec)?;
    let (n, m, r) = (ctx.n, ctx.m, ctx.degree as f64);
    let rmat = incidence(g).as_f64();
    let mut projectors = Vec::with_capacity(pairs.len());
    for pair in &pairs {
        let f = match pair.branch {
            Branch::Plus | Branch::Minus => {
                let i = pair.source_index.expect("pair branches carry a source");
                let lam = dec.eigenvalues()[i];
                let e = dec.projector(i);
                let c = pair.value.to_f64() + 2.0 - r - lam;
                let scale = 1.0 / (c * c + lam + r);
                let er = e * &rmat;
                let mut f = DMatrix::zeros(n + m, n + m);
                f.view_mut((0, 0), (n, n)).copy_from(&(e * (c * c * scale)));
                f.view_mut((0, n), (n, m)).copy_from(&(&er * (c * scale)));
                f.view_mut((n, 0), (m, n)).copy_from(&(er.transpose() * (c * scale)));
                f.view_mut((n, n), (m, m)).copy_from(&(rmat.transpose() * e * &rmat * scale));
                f
            }
            Branch::MinusTwo => {
                let mut k = DMatrix::zeros(m, m);
                for zeta in kernel_basis(&incidence(g)) {
                    k += &zeta * zeta.transpose();
                }
                let mut f = DMatrix::zeros(n + m, n + m);
                f.view_mut((n, n), (m, m)).copy_from(&k);
                f
            }
            Branch::Zero => {
                // diag(E_{-r}, 0); the smallest eigenvalue of a connected
                // bipartite regular graph is -r
                let e = dec.projector(dec.eigenvalues().len() - 1);
                let mut f = DMatrix::zeros(n + m, n + m);
                f.view_mut((0, 0), (n, n)).copy_from(e);
                f
            }
        };
        projectors.push(f);
    }
    Ok(QGraphProjectorSet { pairs, projectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_family, q_graph};
    use crate::spectral::{eigendecompose, DEFAULT_EIGEN_TOL};

    fn dec_of(g: &Graph) -> SpectralDecomposition {
        eigendecompose(&g.adjacency(), DEFAULT_EIGEN_TOL).unwrap()
    }

    fn sorted_multiset(pairs: &[QGraphEigenpair]) -> Vec<f64> {
        let mut v: Vec<f64> = pairs
            .iter()
            .flat_map(|p| std::iter::repeat(p.value.to_f64()).take(p.multiplicity))
            .collect();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }

    #[test]
    fn c3_closed_form() {
        let g = make_family("cycle", &[3]).unwrap();
        let pairs = closed_form_spectrum(&g, &dec_of(&g)).unwrap();
        // Sp {2, -1}: pairs 1 +- sqrt(5) (x1) and (-1 +- sqrt(5))/2 (x2), no -2
        assert_eq!(pairs.len(), 4);
        assert!(pairs.iter().all(|p| p.branch != Branch::MinusTwo && p.branch != Branch::Zero));
        let s5 = 5f64.sqrt();
        let expect = [1.0 + s5, (-1.0 + s5) / 2.0, (-1.0 - s5) / 2.0, 1.0 - s5];
        let mut got = sorted_multiset(&pairs);
        got.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let mut expect = expect.to_vec();
        expect.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn c4_closed_form_bipartite() {
        let g = make_family("cycle", &[4]).unwrap();
        let pairs = closed_form_spectrum(&g, &dec_of(&g)).unwrap();
        let s5 = 5f64.sqrt();
        let s2 = 2f64.sqrt();
        let mut expect = vec![1.0 + s5, s2, s2, 0.0, 1.0 - s5, -s2, -s2, -2.0];
        expect.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let got = sorted_multiset(&pairs);
        assert_eq!(got.len(), 8);
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-12, "{g} vs {e}");
        }
        assert!(pairs.iter().any(|p| p.branch == Branch::Zero && p.multiplicity == 1));
        assert!(pairs.iter().any(|p| p.branch == Branch::MinusTwo && p.multiplicity == 1));
    }

    #[test]
    fn p2_closed_form_r1() {
        // Q(P_2) = P_3 with spectrum {sqrt(2), 0, -sqrt(2)}
        let g = make_family("path", &[2]).unwrap();
        let pairs = closed_form_spectrum(&g, &dec_of(&g)).unwrap();
        let got = sorted_multiset(&pairs);
        let s2 = 2f64.sqrt();
        assert_eq!(got.len(), 3);
        assert!((got[0] - s2).abs() < 1e-12);
        assert!(got[1].abs() < 1e-12);
        assert!((got[2] + s2).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_numeric_spectrum() {
        for g in [
            make_family("cycle", &[3]).unwrap(),
            make_family("cycle", &[4]).unwrap(),
            make_family("cycle", &[5]).unwrap(),
            make_family("hypercube", &[3]).unwrap(),
            make_family("cocktail", &[3]).unwrap(),
            make_family("petersen", &[]).unwrap(),
        ] {
            let pairs = closed_form_spectrum(&g, &dec_of(&g)).unwrap();
            let closed = sorted_multiset(&pairs);
            let q = q_graph(&g);
            let dec_q = dec_of(&q);
            let mut numeric: Vec<f64> = dec_q
                .eigenvalues()
                .iter()
                .zip(dec_q.multiplicities())
                .flat_map(|(&v, &m)| std::iter::repeat(v).take(m))
                .collect();
            numeric.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert_eq!(closed.len(), numeric.len());
            for (c, n) in closed.iter().zip(&numeric) {
                assert!((c - n).abs() < 1e-8, "{c} vs {n}");
            }
        }
    }

    #[test]
    fn no_minus_two_branch_value_for_non_bipartite() {
        for g in [make_family("cycle", &[5]).unwrap(), make_family("cocktail", &[3]).unwrap(), make_family("petersen", &[]).unwrap()] {
            let pairs = closed_form_spectrum(&g, &dec_of(&g)).unwrap();
            for p in &pairs {
                if matches!(p.branch, Branch::Plus | Branch::Minus) {
                    assert!((p.value.to_f64() + 2.0).abs() > 1e-9);
                }
            }
        }
    }

    #[test]
    fn eigenvectors_are_eigenvectors() {
        for g in [
            make_family("cycle", &[3]).unwrap(),
            make_family("cycle", &[4]).unwrap(),
            make_family("hypercube", &[3]).unwrap(),
            make_family("cocktail", &[3]).unwrap(),
        ] {
            let dec = dec_of(&g);
            let vectors = closed_form_eigenvectors(&g, &dec).unwrap();
            let aq = q_graph(&g).adjacency();
            for ev in &vectors {
                assert!((ev.vector.norm() - 1.0).abs() < 1e-10, "unit norm");
                let resid = (&aq * &ev.vector - &ev.vector * ev.value).norm();
                assert!(resid < 1e-9, "residual {resid}");
            }
            // plus/minus vectors from the same (i, j) are orthogonal
            for a in &vectors {
                for b in &vectors {
                    if a.branch == Branch::Plus && b.branch == Branch::Minus && a.source == b.source {
                        assert!(a.vector.dot(&b.vector).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn c4_zero_branch_vector() {
        let g = make_family("cycle", &[4]).unwrap();
        let vectors = closed_form_eigenvectors(&g, &dec_of(&g)).unwrap();
        let zero = vectors.iter().find(|v| v.branch == Branch::Zero).unwrap();
        // C_4 bipartition is {0, 2} vs {1, 3}: signs alternate, edge block zero
        let v = &zero.vector;
        for i in 0..4 {
            assert!((v[i].abs() - 0.5).abs() < 1e-12);
        }
        assert!((v[0] - v[2]).abs() < 1e-12 && (v[1] - v[3]).abs() < 1e-12);
        assert!((v[0] + v[1]).abs() < 1e-12);
        for i in 4..8 {
            assert!(v[i].abs() < 1e-12);
        }
    }

    #[test]
    fn projector_completeness_c3() {
        let g = make_family("cycle", &[3]).unwrap();
        let set = qgraph_projectors(&g, &dec_of(&g)).unwrap();
        let mut sum = DMatrix::zeros(6, 6);
        for p in &set.projectors {
            sum += p;
        }
        assert!((sum - DMatrix::identity(6, 6)).amax() < 1e-12);
    }

    #[test]
    fn projector_f0_c4() {
        let g = make_family("cycle", &[4]).unwrap();
        let dec = dec_of(&g);
        let set = qgraph_projectors(&g, &dec).unwrap();
        let zero_idx = set.pairs.iter().position(|p| p.branch == Branch::Zero).unwrap();
        let f0 = &set.projectors[zero_idx];
        let e_bottom = dec.projector(dec.eigenvalues().len() - 1);
        assert!((f0.view((0, 0), (4, 4)) - e_bottom).amax() < 1e-12);
        assert!(f0.view((0, 4), (8, 4)).amax() < 1e-12);
        assert!(f0.view((4, 0), (4, 8)).amax() < 1e-12);
    }

    #[test]
    fn projector_reconstruction_and_orthogonality() {
        for g in [make_family("cocktail", &[3]).unwrap(), make_family("cycle", &[4]).unwrap(), make_family("petersen", &[]).unwrap()] {
            let dec = dec_of(&g);
            let set = qgraph_projectors(&g, &dec).unwrap();
            let nm = g.vertex_count() + g.edge_count();
            let mut sum = DMatrix::zeros(nm, nm);
            let mut recon = DMatrix::zeros(nm, nm);
            for (pair, p) in set.pairs.iter().zip(&set.projectors) {
                sum += p;
                recon += p * pair.value.to_f64();
            }
            assert!((sum - DMatrix::identity(nm, nm)).amax() < 1e-10);
            assert!((recon - q_graph(&g).adjacency()).amax() < 1e-10);
            // plus/minus projectors from the same source annihilate each other
            for (i, pi) in set.pairs.iter().enumerate() {
                for (j, pj) in set.pairs.iter().enumerate() {
                    if i != j && pi.source_index.is_some() && pi.source_index == pj.source_index {
                        assert!((&set.projectors[i] * &set.projectors[j]).amax() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_bases() {
        let disconnected = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let dec = dec_of(&disconnected);
        assert!(matches!(closed_form_spectrum(&disconnected, &dec), Err(QGraphError::Disconnected)));

        let irregular = make_family("path", &[3]).unwrap();
        let dec = dec_of(&irregular);
        assert!(matches!(closed_form_spectrum(&irregular, &dec), Err(QGraphError::NotRegular)));
    }
}
