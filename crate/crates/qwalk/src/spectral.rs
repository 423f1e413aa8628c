//! Eigendecomposition of symmetric matrices into eigenvalue/projector pairs,
//! exact rational eigenprojectors for integral spectra, eigenvalue support and
//! strong cospectrality.

use crate::graph::IncidenceMatrix;
use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

type Rat = Ratio<i64>;

/// Default relative tolerance for merging numeric eigenvalues into one
/// eigenspace. Adjacency matrices are integer, so true gaps are far larger
/// at desk scale.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;

/// Default threshold on `||E_lambda e_u||` for support membership.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("supplied spectrum does not annihilate the matrix: {0}")]
    SpectrumInvalid(String),
    #[error("vertex index {0} out of range for dimension {1}")]
    VertexOutOfRange(usize, usize),
}

/// A dense square matrix with exact rational entries. Only the handful of
/// operations needed for Lagrange-interpolated projectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    n: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(n: usize) -> Self {
        RatMat { n, data: vec![Rat::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_int(a: &DMatrix<i64>) -> Self {
        assert_eq!(a.nrows(), a.ncols());
        let n = a.nrows();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Rat::from_integer(a[(i, j)]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, rhs: &RatMat) -> RatMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = RatMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &RatMat) -> RatMat {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&rhs.data) {
            *x += *y;
        }
        out
    }

    pub fn scale(&self, s: Rat) -> RatMat {
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= s;
        }
        out
    }

    /// `self - s*I`
    pub fn sub_scalar(&self, s: Rat) -> RatMat {
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] -= s;
        }
        out
    }

    pub fn trace(&self) -> Rat {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column_is_zero(&self, j: usize) -> bool {
        (0..self.n).all(|i| self[(i, j)].is_zero())
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            let r = self[(i, j)];
            *r.numer() as f64 / *r.denom() as f64
        })
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.n + j]
    }
}

/// Exact rational eigenprojectors of an integer symmetric matrix with a
/// validated integral spectrum.
#[derive(Debug, Clone)]
pub struct ExactProjectors {
    /// Distinct eigenvalues, strictly decreasing.
    pub eigenvalues: Vec<i64>,
    pub projectors: Vec<RatMat>,
}

/// Builds exact eigenprojectors by Lagrange interpolation
/// `E_lambda = prod_{mu != lambda} (A - mu I)/(lambda - mu)` in rational
/// arithmetic. The supplied spectrum is validated by checking that
/// `prod (A - lambda I) = 0` exactly; failure signals a non-integral matrix
/// or a wrong spectrum.
pub fn exact_integer_projectors(adj: &DMatrix<i64>, spectrum: &[i64]) -> Result<ExactProjectors, SpectralError> {
    let n = adj.nrows();
    if adj.ncols() != n {
        return Err(SpectralError::SpectrumInvalid("matrix not square".into()));
    }
    if adj != &adj.transpose() {
        return Err(SpectralError::NotSymmetric(f64::INFINITY));
    }
    let mut eigenvalues: Vec<i64> = spectrum.to_vec();
    eigenvalues.sort_unstable_by(|a, b| b.cmp(a));
    eigenvalues.dedup();
    if eigenvalues.len() != spectrum.len() {
        return Err(SpectralError::SpectrumInvalid("spectrum contains repeated values".into()));
    }
    if eigenvalues.is_empty() {
        return Err(SpectralError::SpectrumInvalid("spectrum is empty".into()));
    }

    let a = RatMat::from_int(adj);
    let mut annihilator = RatMat::identity(n);
    for &lam in &eigenvalues {
        annihilator = annihilator.mul(&a.sub_scalar(Rat::from_integer(lam)));
    }
    if !annihilator.is_zero() {
        return Err(SpectralError::SpectrumInvalid(format!(
            "prod(A - lambda I) != 0 for spectrum {eigenvalues:?}"
        )));
    }

    let mut projectors = Vec::with_capacity(eigenvalues.len());
    for (i, &lam) in eigenvalues.iter().enumerate() {
        let mut p = RatMat::identity(n);
        let mut denom = Rat::one();
        for (k, &mu) in eigenvalues.iter().enumerate() {
            if k == i {
                continue;
            }
            p = p.mul(&a.sub_scalar(Rat::from_integer(mu)));
            denom *= Rat::from_integer(lam - mu);
        }
        projectors.push(p.scale(denom.recip()));
    }
    Ok(ExactProjectors { eigenvalues, projectors })
}

/// Eigenvalue/multiplicity/projector triples of a symmetric matrix, with
/// optional exact rational projectors when the spectrum is integral.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    dim: usize,
    /// Distinct eigenvalues, strictly decreasing.
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
    projectors: Vec<DMatrix<f64>>,
    /// Orthonormal eigenvector bases, one `dim x a_i` block per eigenvalue.
    bases: Vec<DMatrix<f64>>,
    exact: Option<ExactProjectors>,
    eigen_tol: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn projectors(&self) -> &[DMatrix<f64>] {
        &self.projectors
    }

    pub fn projector(&self, i: usize) -> &DMatrix<f64> {
        &self.projectors[i]
    }

    pub fn basis(&self, i: usize) -> &DMatrix<f64> {
        &self.bases[i]
    }

    /// Exact rational projectors, present when the rounded spectrum validated
    /// via `prod(A - lambda I) = 0`.
    pub fn exact(&self) -> Option<&ExactProjectors> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn eigen_tol(&self) -> f64 {
        self.eigen_tol
    }

    /// Integer spectrum when exact mode is active.
    pub fn integer_eigenvalues(&self) -> Option<&[i64]> {
        self.exact.as_ref().map(|e| e.eigenvalues.as_slice())
    }

    /// Largest eigenvalue.
    pub fn spectral_radius_bound(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }
}

/// Numeric eigendecomposition with eigenvalue grouping at relative tolerance
/// `tol`. Exact rational projectors are attached automatically whenever the
/// rounded spectrum validates exactly.
pub fn eigendecompose(adj: &DMatrix<f64>, tol: f64) -> Result<SpectralDecomposition, SpectralError> {
    let n = adj.nrows();
    if adj.ncols() != n {
        return Err(SpectralError::SpectrumInvalid("matrix not square".into()));
    }
    let asym = (adj - adj.transpose()).amax();
    if asym > 1e-12 {
        return Err(SpectralError::NotSymmetric(asym));
    }

    let eig = nalgebra::SymmetricEigen::new(adj.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());

    let radius = eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let merge = tol * radius.max(1.0);

    let mut eigenvalues = Vec::new();
    let mut multiplicities = Vec::new();
    let mut bases: Vec<DMatrix<f64>> = Vec::new();
    let mut group: Vec<usize> = Vec::new();
    let flush = |group: &mut Vec<usize>, eigenvalues: &mut Vec<f64>, multiplicities: &mut Vec<usize>, bases: &mut Vec<DMatrix<f64>>| {
        if group.is_empty() {
            return;
        }
        let mean: f64 = group.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / group.len() as f64;
        let mut b = DMatrix::zeros(n, group.len());
        for (c, &k) in group.iter().enumerate() {
            b.set_column(c, &eig.eigenvectors.column(k));
        }
        eigenvalues.push(mean);
        multiplicities.push(group.len());
        bases.push(b);
        group.clear();
    };
    for &k in &order {
        if let Some(&last) = group.last() {
            if (eig.eigenvalues[last] - eig.eigenvalues[k]).abs() > merge {
                flush(&mut group, &mut eigenvalues, &mut multiplicities, &mut bases);
            }
        }
        group.push(k);
    }
    flush(&mut group, &mut eigenvalues, &mut multiplicities, &mut bases);

    let projectors: Vec<DMatrix<f64>> = bases.iter().map(|b| b * b.transpose()).collect();

    // Automatic exact mode for integral spectra.
    let mut exact = None;
    let rounded: Vec<i64> = eigenvalues.iter().map(|x| x.round() as i64).collect();
    if eigenvalues.iter().zip(&rounded).all(|(x, &r)| (x - r as f64).abs() < 1e-6) {
        let adj_int = DMatrix::from_fn(n, n, |i, j| adj[(i, j)].round() as i64);
        let int_ok = adj.iter().zip(adj_int.iter()).all(|(x, &r)| (x - r as f64).abs() < 1e-12);
        if int_ok {
            if let Ok(e) = exact_integer_projectors(&adj_int, &rounded) {
                for (x, &r) in eigenvalues.iter_mut().zip(&rounded) {
                    *x = r as f64;
                }
                exact = Some(e);
            }
        }
    }

    Ok(SpectralDecomposition {
        dim: n,
        eigenvalues,
        multiplicities,
        projectors,
        bases,
        exact,
        eigen_tol: tol,
    })
}

/// Eigenvalue support of a vertex: indices of eigenvalues with
/// `E_lambda e_u != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenvalueSupport {
    pub vertex: usize,
    /// Indices into the decomposition's eigenvalue list.
    pub members: Vec<usize>,
}

pub fn eigenvalue_support(dec: &SpectralDecomposition, u: usize, tol: f64) -> Result<EigenvalueSupport, SpectralError> {
    if u >= dec.dim() {
        return Err(SpectralError::VertexOutOfRange(u, dec.dim()));
    }
    let members = match dec.exact() {
        Some(e) => (0..e.projectors.len()).filter(|&i| !e.projectors[i].column_is_zero(u)).collect(),
        None => (0..dec.projectors.len())
            .filter(|&i| dec.projector(i).column(u).norm() > tol)
            .collect(),
    };
    Ok(EigenvalueSupport { vertex: u, members })
}

/// Per-eigenvalue comparison of the projector columns of two vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CospectralityReport {
    pub u: usize,
    pub v: usize,
    pub strongly_cospectral: bool,
    /// Eigenvalue indices with `E_lambda e_u = E_lambda e_v != 0`.
    pub s_plus: Vec<usize>,
    /// Eigenvalue indices with `E_lambda e_u = -E_lambda e_v != 0`.
    pub s_minus: Vec<usize>,
}

pub fn strong_cospectrality(dec: &SpectralDecomposition, u: usize, v: usize, tol: f64) -> Result<CospectralityReport, SpectralError> {
    if u >= dec.dim() {
        return Err(SpectralError::VertexOutOfRange(u, dec.dim()));
    }
    if v >= dec.dim() {
        return Err(SpectralError::VertexOutOfRange(v, dec.dim()));
    }
    let mut s_plus = Vec::new();
    let mut s_minus = Vec::new();
    let mut all_classified = true;
    match dec.exact() {
        Some(e) => {
            for (i, p) in e.projectors.iter().enumerate() {
                let n = p.dim();
                let zero_u = p.column_is_zero(u);
                let zero_v = p.column_is_zero(v);
                if zero_u && zero_v {
                    continue;
                }
                if (0..n).all(|r| p[(r, u)] == p[(r, v)]) {
                    s_plus.push(i);
                } else if (0..n).all(|r| p[(r, u)] == -p[(r, v)]) {
                    s_minus.push(i);
                } else {
                    all_classified = false;
                }
            }
        }
        None => {
            for (i, p) in dec.projectors().iter().enumerate() {
                let cu = p.column(u);
                let cv = p.column(v);
                if cu.norm() <= tol && cv.norm() <= tol {
                    continue;
                }
                if (&cu - &cv).norm() <= tol {
                    s_plus.push(i);
                } else if (&cu + &cv).norm() <= tol {
                    s_minus.push(i);
                } else {
                    all_classified = false;
                }
            }
        }
    }
    Ok(CospectralityReport {
        u,
        v,
        strongly_cospectral: all_classified,
        s_plus,
        s_minus,
    })
}

/// Orthonormal basis of the right null space of the incidence matrix, found
/// from the zero eigenspace of `R^T R`. The count is `m - n` for connected
/// non-bipartite graphs and `m - n + 1` for connected bipartite graphs.
pub fn kernel_basis(r: &IncidenceMatrix) -> Vec<DVector<f64>> {
    let rf = r.as_f64();
    let gram = rf.transpose() * &rf;
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut out = Vec::new();
    for k in 0..eig.eigenvalues.len() {
        // eigenvalues of R^T R are >= 0; anything below this is the kernel
        if eig.eigenvalues[k].abs() < 1e-7 {
            out.push(DVector::from_column_slice(eig.eigenvectors.column(k).as_slice()));
        }
    }
    out
}
