//! The densely embedded pair `(E0, E1)` realised on `C^n`.
//!
//! `E0` carries a chosen vector norm and `E1 = D(A)` carries the graph norm
//! `|x|_1 = |x|_0 + |Ax|_0`, so the embedding constant `c1` is exactly 1.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, Schur};

use crate::error::{Error, Result};
use crate::expm::{expm, phi_combination, CMatrix};
use crate::scalar::{norm2, norm_sup, phi_all, re, C64, ZERO};

/// Embedding constant of `E1` into `E0` under the graph norm.
pub const C1: f64 = 1.0;

/// Norm on `E0`.
#[derive(Debug, Clone, PartialEq)]
pub enum E0Norm {
    Euclidean,
    Sup,
    /// `max_k w_k |x_k|`, used for the spectral interpolation scales.
    WeightedSup(Vec<f64>),
}

impl E0Norm {
    pub fn name(&self) -> &'static str {
        match self {
            E0Norm::Euclidean => "euclidean",
            E0Norm::Sup => "sup",
            E0Norm::WeightedSup(_) => "weighted-sup",
        }
    }

    pub fn vector(&self, x: &[C64]) -> f64 {
        match self {
            E0Norm::Euclidean => norm2(x),
            E0Norm::Sup => norm_sup(x),
            E0Norm::WeightedSup(w) => x.iter().zip(w).map(|(v, wk)| wk * v.norm()).fold(0.0, f64::max),
        }
    }

    /// Induced operator norm of `b` on `(C^n, |.|)`.
    pub fn operator(&self, b: &CMatrix) -> f64 {
        match self {
            E0Norm::Euclidean => {
                if b.is_empty() {
                    return 0.0;
                }
                b.clone()
                    .svd(false, false)
                    .singular_values
                    .iter()
                    .copied()
                    .fold(0.0, f64::max)
            }
            E0Norm::Sup => b
                .row_iter()
                .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
                .fold(0.0, f64::max),
            E0Norm::WeightedSup(w) => (0..b.nrows())
                .map(|i| (0..b.ncols()).map(|j| w[i] * b[(i, j)].norm() / w[j]).sum::<f64>())
                .fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Dense,
    Diagonal,
    Tridiagonal,
}

impl Structure {
    pub fn name(self) -> &'static str {
        match self {
            Structure::Dense => "dense",
            Structure::Diagonal => "diagonal",
            Structure::Tridiagonal => "tridiagonal",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Propagator {
    /// Eigenvalues are the diagonal.
    Diagonal,
    /// `A = Q diag(eigenvalues) Q^H` with `Q` unitary.
    Hermitian { q: CMatrix },
    Dense,
}

/// Modal coordinates of a unitarily diagonalisable operator.
pub(crate) struct Modal<'a> {
    pub eigenvalues: &'a [C64],
    q: Option<&'a CMatrix>,
}

impl Modal<'_> {
    pub fn to_modal(&self, x: &[C64]) -> Vec<C64> {
        match self.q {
            None => x.to_vec(),
            Some(q) => {
                let n = x.len();
                (0..n)
                    .map(|k| (0..n).map(|i| q[(i, k)].conj() * x[i]).sum())
                    .collect()
            }
        }
    }

    pub fn from_modal(&self, y: &[C64]) -> Vec<C64> {
        match self.q {
            None => y.to_vec(),
            Some(q) => {
                let v = q * DVector::from_column_slice(y);
                v.iter().copied().collect()
            }
        }
    }
}

/// A closed operator `A : E1 -> E0` on `C^n` with its norms.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    matrix: CMatrix,
    e0: E0Norm,
    structure: Structure,
    eigenvalues: Vec<C64>,
    norm: f64,
    propagator: Propagator,
}

impl OperatorPair {
    pub fn new(matrix: CMatrix, e0: E0Norm, structure: Structure) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || !matrix.is_square() {
            return Err(Error::InvalidStructure("matrix must be square and non-empty"));
        }
        if let E0Norm::WeightedSup(w) = &e0 {
            if w.len() != n || w.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                return Err(Error::InvalidParameter("weights must be positive, one per coordinate".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let off = match structure {
                    Structure::Dense => false,
                    Structure::Diagonal => i != j,
                    Structure::Tridiagonal => i.abs_diff(j) > 1,
                };
                if off && matrix[(i, j)] != ZERO {
                    return Err(Error::InvalidStructure(match structure {
                        Structure::Diagonal => "off-diagonal entries must be exactly zero",
                        _ => "entries outside the tridiagonal band must be exactly zero",
                    }));
                }
            }
        }
        let hermitian = (0..n).all(|i| (0..=i).all(|j| matrix[(i, j)] == matrix[(j, i)].conj()));
        let (eigenvalues, propagator) = if structure == Structure::Diagonal {
            (matrix.diagonal().iter().copied().collect(), Propagator::Diagonal)
        } else if hermitian {
            let eig = matrix.clone().symmetric_eigen();
            let values: Vec<C64> = eig.eigenvalues.iter().map(|v| re(*v)).collect();
            (values, Propagator::Hermitian { q: eig.eigenvectors })
        } else {
            let schur = Schur::try_new(matrix.clone(), f64::EPSILON, 1000 * (n + 1)).ok_or(Error::EigenFailure)?;
            let values = schur.eigenvalues().ok_or(Error::EigenFailure)?;
            (values.iter().copied().collect::<Vec<C64>>(), Propagator::Dense)
        };
        let norm = match (&e0, &propagator) {
            (E0Norm::Euclidean, Propagator::Diagonal | Propagator::Hermitian { .. }) => {
                eigenvalues.iter().map(|v: &C64| v.norm()).fold(0.0, f64::max)
            }
            _ => e0.operator(&matrix),
        };
        Ok(Self {
            matrix,
            e0,
            structure,
            eigenvalues,
            norm,
            propagator,
        })
    }

    pub fn from_diagonal(values: &[C64], e0: E0Norm) -> Result<Self> {
        let m = DMatrix::from_diagonal(&DVector::from_column_slice(values));
        Self::new(m, e0, Structure::Diagonal)
    }

    /// Second-order Dirichlet Laplacian on `n` interior points of `(0, 1)`.
    pub fn laplacian1d(n: usize, e0: E0Norm) -> Result<Self> {
        let h = 1.0 / (n as f64 + 1.0);
        let inv = 1.0 / (h * h);
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                re(-2.0 * inv)
            } else if i.abs_diff(j) == 1 {
                re(inv)
            } else {
                ZERO
            }
        });
        Self::new(m, e0, Structure::Tridiagonal)
    }

    /// Upper Jordan block of the given size.
    pub fn jordan(lambda: C64, size: usize, e0: E0Norm) -> Result<Self> {
        let m = DMatrix::from_fn(size, size, |i, j| {
            if i == j {
                lambda
            } else if j == i + 1 {
                re(1.0)
            } else {
                ZERO
            }
        });
        Self::new(m, e0, Structure::Dense)
    }

    /// The same operator with a different `E0` norm.
    pub fn with_norm(&self, e0: E0Norm) -> Result<Self> {
        Self::new(self.matrix.clone(), e0, self.structure)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn e0(&self) -> &E0Norm {
        &self.e0
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    /// `|A|` as an operator on `E0`.
    pub fn operator_norm(&self) -> f64 {
        self.norm
    }

    /// True when `A` is unitarily diagonalisable by construction
    /// (diagonal or Hermitian).
    pub fn is_normal(&self) -> bool {
        !matches!(self.propagator, Propagator::Dense)
    }

    pub(crate) fn modal(&self) -> Option<Modal<'_>> {
        match &self.propagator {
            Propagator::Diagonal => Some(Modal { eigenvalues: &self.eigenvalues, q: None }),
            Propagator::Hermitian { q } => Some(Modal { eigenvalues: &self.eigenvalues, q: Some(q) }),
            Propagator::Dense => None,
        }
    }

    pub fn singular_tolerance(&self) -> f64 {
        1e-12 * (1.0 + self.norm)
    }

    pub fn distance_to_spectrum(&self, mu: C64) -> f64 {
        self.eigenvalues.iter().map(|l| (mu - l).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn check_dim(&self, x: &[C64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: x.len() });
        }
        Ok(())
    }

    pub fn norm0(&self, x: &[C64]) -> f64 {
        self.e0.vector(x)
    }

    /// Graph norm `|x|_0 + |Ax|_0`.
    pub fn norm1(&self, x: &[C64]) -> f64 {
        self.norm0(x) + self.norm0(&self.apply(x))
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let n = self.dim();
        match self.structure {
            Structure::Diagonal => x.iter().zip(&self.eigenvalues).map(|(v, l)| v * l).collect(),
            Structure::Tridiagonal => (0..n)
                .map(|i| {
                    let lo = i.saturating_sub(1);
                    let hi = (i + 1).min(n - 1);
                    (lo..=hi).map(|j| self.matrix[(i, j)] * x[j]).sum()
                })
                .collect(),
            Structure::Dense => (0..n).map(|i| (0..n).map(|j| self.matrix[(i, j)] * x[j]).sum()).collect(),
        }
    }

    /// `(mu - A) x`.
    pub fn apply_shifted(&self, mu: C64, x: &[C64]) -> Vec<C64> {
        let ax = self.apply(x);
        x.iter().zip(&ax).map(|(v, a)| mu * v - a).collect()
    }

    fn guard(&self, mu: C64) -> Result<()> {
        let tol = self.singular_tolerance();
        if self.distance_to_spectrum(mu) <= tol {
            return Err(Error::SingularResolvent { mu, tol });
        }
        Ok(())
    }

    fn shifted_matrix(&self, mu: C64) -> CMatrix {
        let mut m = -self.matrix.clone();
        for i in 0..self.dim() {
            m[(i, i)] += mu;
        }
        m
    }

    /// Solves `(mu - A) x = y`.
    pub fn resolvent_solve(&self, mu: C64, y: &[C64]) -> Result<Vec<C64>> {
        self.check_dim(y)?;
        self.guard(mu)?;
        match self.structure {
            Structure::Diagonal => return Ok(y.iter().zip(&self.eigenvalues).map(|(v, l)| v / (mu - l)).collect()),
            Structure::Tridiagonal => {
                return self.tridiagonal_solve(mu, y).ok_or(Error::SingularResolvent { mu, tol: self.singular_tolerance() })
            }
            Structure::Dense => {}
        }
        let lu = self.shifted_matrix(mu).lu();
        let rhs = DVector::from_column_slice(y);
        let mut x = lu.solve(&rhs).ok_or(Error::SingularResolvent { mu, tol: self.singular_tolerance() })?;
        // one step of iterative refinement
        let r = &rhs - DVector::from_vec(self.apply_shifted(mu, x.as_slice()));
        if let Some(dx) = lu.solve(&r) {
            x += dx;
        }
        Ok(x.iter().copied().collect())
    }

    /// Gaussian elimination with partial pivoting on the band of `mu - A`.
    fn tridiagonal_solve(&self, mu: C64, y: &[C64]) -> Option<Vec<C64>> {
        let n = self.dim();
        let m = &self.matrix;
        let mut d: Vec<C64> = (0..n).map(|i| mu - m[(i, i)]).collect();
        let mut up: Vec<C64> = (0..n.saturating_sub(1)).map(|i| -m[(i, i + 1)]).collect();
        let lo: Vec<C64> = (0..n.saturating_sub(1)).map(|i| -m[(i + 1, i)]).collect();
        let mut up2 = alloc::vec![ZERO; n.saturating_sub(2)];
        let mut b = y.to_vec();
        for i in 0..n.saturating_sub(1) {
            if d[i].norm() >= lo[i].norm() {
                if d[i] == ZERO {
                    return None;
                }
                let f = lo[i] / d[i];
                d[i + 1] -= f * up[i];
                let bi = b[i];
                b[i + 1] -= f * bi;
            } else {
                let f = d[i] / lo[i];
                d[i] = lo[i];
                let tmp = d[i + 1];
                d[i + 1] = up[i] - f * tmp;
                if i + 2 < n {
                    up2[i] = up[i + 1];
                    up[i + 1] = -f * up2[i];
                }
                up[i] = tmp;
                let bi = b[i];
                b[i] = b[i + 1];
                b[i + 1] = bi - f * b[i + 1];
            }
        }
        if d[n - 1] == ZERO {
            return None;
        }
        let mut x = alloc::vec![ZERO; n];
        for i in (0..n).rev() {
            let mut acc = b[i];
            if i + 1 < n {
                acc -= up[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= up2[i] * x[i + 2];
            }
            x[i] = acc / d[i];
        }
        Some(x)
    }

    /// `|(mu - A)^{-1}|` as an operator on `E0`.
    pub fn resolvent_norm(&self, mu: C64) -> Result<f64> {
        self.guard(mu)?;
        match (&self.e0, self.is_normal()) {
            (E0Norm::Euclidean, true) => Ok(1.0 / self.distance_to_spectrum(mu)),
            (E0Norm::Euclidean, false) => {
                let s = self.shifted_matrix(mu).svd(false, false);
                let smin = s.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
                if smin == 0.0 {
                    return Err(Error::SingularResolvent { mu, tol: self.singular_tolerance() });
                }
                Ok(1.0 / smin)
            }
            _ => {
                let inv = self.resolvent_matrix(mu)?;
                Ok(self.e0.operator(&inv))
            }
        }
    }

    /// `(mu - A)^{-1}` as a dense matrix.
    pub fn resolvent_matrix(&self, mu: C64) -> Result<CMatrix> {
        self.guard(mu)?;
        if let Structure::Diagonal = self.structure {
            let d: Vec<C64> = self.eigenvalues.iter().map(|l| (mu - l).inv()).collect();
            return Ok(DMatrix::from_diagonal(&DVector::from_vec(d)));
        }
        self.shifted_matrix(mu)
            .try_inverse()
            .ok_or(Error::SingularResolvent { mu, tol: self.singular_tolerance() })
    }

    /// Eigenvalues and spectral bound; the scan fields are left empty.
    pub fn spectrum_and_bound(&self) -> SpectralReport {
        SpectralReport {
            eigenvalues: self.eigenvalues.clone(),
            spectral_bound: spectral_bound(&self.eigenvalues),
            scan: Vec::new(),
            bound_constant: None,
            half_plane_offset: None,
        }
    }

    /// `e^{tA} x` from the matrix exponential (dense) or per eigenvalue.
    pub fn semigroup_apply_oracle(&self, t: f64, x: &[C64]) -> Result<Vec<C64>> {
        self.check_dim(x)?;
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter("semigroup time must be nonnegative".into()));
        }
        if t == 0.0 {
            return Ok(x.to_vec());
        }
        Ok(self.step(t, ZERO, Some(x), &[]))
    }

    /// `e^{t(A+shift)} x0 + sum_j t^j phi_j(t(A+shift)) w_j` with `w_1` first.
    pub(crate) fn step(&self, t: f64, shift: C64, x0: Option<&[C64]>, ws: &[Vec<C64>]) -> Vec<C64> {
        match self.modal() {
            Some(modal) => {
                let x0m = x0.map(|x| modal.to_modal(x));
                let wsm: Vec<Vec<C64>> = ws.iter().map(|w| modal.to_modal(w)).collect();
                let out = step_modal(modal.eigenvalues, t, shift, x0m.as_deref(), &wsm);
                modal.from_modal(&out)
            }
            None => {
                if ws.is_empty() && shift == ZERO {
                    let e = expm(&(&self.matrix * re(t)));
                    let x = x0.expect("step without data");
                    (e * DVector::from_column_slice(x)).iter().copied().collect()
                } else {
                    phi_combination(&self.matrix, shift, t, x0, ws)
                }
            }
        }
    }
}

/// Scalar version of [`OperatorPair::step`] acting mode by mode.
pub(crate) fn step_modal(eigs: &[C64], t: f64, shift: C64, x0: Option<&[C64]>, ws: &[Vec<C64>]) -> Vec<C64> {
    let p = ws.len();
    let mut out = alloc::vec![ZERO; eigs.len()];
    for (k, lam) in eigs.iter().enumerate() {
        let z = (lam + shift) * t;
        let mut acc = match x0 {
            Some(x) => z.exp() * x[k],
            None => ZERO,
        };
        if p > 0 {
            let phis = phi_all(p, z);
            let mut tj = t;
            for j in 0..p {
                acc += phis[j] * tj * ws[j][k];
                tj *= t;
            }
        }
        out[k] = acc;
    }
    out
}

pub fn spectral_bound(eigenvalues: &[C64]) -> f64 {
    eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
}

/// One resolvent-norm evaluation of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub mu: C64,
    /// `None` when `mu` hit the spectrum.
    pub resolvent_norm: Option<f64>,
}

impl ScanPoint {
    /// `(1 + |mu|) |(mu - A)^{-1}|`.
    pub fn weighted_norm(&self) -> Option<f64> {
        self.resolvent_norm.map(|r| (1.0 + self.mu.norm()) * r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub eigenvalues: Vec<C64>,
    /// `s(A) = max Re lambda`.
    pub spectral_bound: f64,
    pub scan: Vec<ScanPoint>,
    /// `N = max (1 + |mu|) |(mu - A)^{-1}|` over the scan.
    pub bound_constant: Option<f64>,
    pub half_plane_offset: Option<f64>,
}
