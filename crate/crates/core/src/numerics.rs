//! Dense complex linear algebra substrate and the tolerance policy shared by
//! every other module.
//!
//! All equalities in the triple-product world are checked as residuals. The
//! comparison scale is anchored at `max(1, magnitude)` so that zero matrices
//! compare sanely.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Equality and rank cutoffs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eq_tol: f64,
    /// Relative singular-value cutoff.
    pub rank_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eq_tol: 1e-9, rank_tol: 1e-10 }
    }
}

impl Tolerance {
    pub fn new(eq_tol: f64, rank_tol: f64) -> Result<Self> {
        if !(rank_tol > 0.0 && rank_tol < eq_tol && eq_tol < 1.0) {
            return Err(Error::OutOfRange(format!(
                "tolerances must satisfy 0 < rank_tol ({rank_tol:e}) < eq_tol ({eq_tol:e}) < 1"
            )));
        }
        Ok(Self { eq_tol, rank_tol })
    }

    /// Overrides `eq_tol`, pulling `rank_tol` down if needed to keep the ordering.
    pub fn with_eq_tol(eq_tol: f64) -> Result<Self> {
        let rank_tol = Self::default().rank_tol.min(eq_tol / 10.0);
        Self::new(eq_tol, rank_tol)
    }
}

pub fn check_finite(a: &ComplexMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Thin singular value decomposition `a = U diag(sigma) V*`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    /// Nonincreasing.
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.u.clone();
        for (k, s) in self.sigma.iter().enumerate() {
            let mut col = us.column_mut(k);
            col *= Complex64::from(*s);
        }
        us * self.v.adjoint()
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    check_finite(a)?;
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return Ok(Svd {
            u: ComplexMatrix::zeros(a.nrows(), 0),
            sigma: Vec::new(),
            v: ComplexMatrix::zeros(a.ncols(), 0),
        });
    }
    let dec = a.clone().svd(true, true);
    let (u, v_t) = match (dec.u, dec.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Inconsistency("SVD did not return singular vectors".into())),
    };
    let v = v_t.adjoint();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]));
    let mut su = ComplexMatrix::zeros(a.nrows(), k);
    let mut sv = ComplexMatrix::zeros(a.ncols(), k);
    let mut sigma = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        su.set_column(dst, &u.column(src));
        sv.set_column(dst, &v.column(src));
        sigma.push(dec.singular_values[src].max(0.0));
    }
    let out = Svd { u: su, sigma, v: sv };
    // nalgebra's complex SVD occasionally returns mismatched singular vectors
    // for rank-deficient input; fall back to the hermitian dilation then.
    if svd_defect(a, &out) <= SVD_CHECK {
        return Ok(out);
    }
    let out = dilation_svd(a);
    let defect = svd_defect(a, &out);
    if defect > SVD_CHECK {
        return Err(Error::Inconsistency(format!("SVD defect {defect:.3e}")));
    }
    Ok(out)
}

const SVD_CHECK: f64 = 1e-12;

/// Reconstruction and orthonormality defect, relative to `max(1, |a|)`.
fn svd_defect(a: &ComplexMatrix, s: &Svd) -> f64 {
    let k = s.sigma.len();
    let eye = ComplexMatrix::identity(k, k);
    let recon = max_abs(&(s.reconstruct() - a)) / max_abs(a).max(1.0);
    let orth_u = max_abs(&(s.u.adjoint() * &s.u - &eye));
    let orth_v = max_abs(&(s.v.adjoint() * &s.v - &eye));
    recon.max(orth_u).max(orth_v)
}

/// SVD from the eigenpairs `(σ, (u; v)/√2)` of `[[0, a], [a*, 0]]`.
///
/// Columns whose halves are not balanced (`σ` at noise level, where `±σ`
/// mix) are replaced by orthonormal completions with `σ = 0`.
fn dilation_svd(a: &ComplexMatrix) -> Svd {
    let (m, n) = a.shape();
    let k = m.min(n);
    let mut h = ComplexMatrix::zeros(m + n, m + n);
    h.view_mut((0, m), (m, n)).copy_from(a);
    h.view_mut((m, 0), (n, m)).copy_from(&a.adjoint());
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..m + n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut us = Vec::new();
    let mut vs = Vec::new();
    let mut sigma = Vec::new();
    for &src in order.iter().take(k) {
        let w = eig.eigenvectors.column(src);
        let x = w.rows(0, m).into_owned();
        let y = w.rows(m, n).into_owned();
        let (xn, yn) = (x.norm(), y.norm());
        if (xn - yn).abs() > 1e-6 || xn < 0.5 {
            break;
        }
        us.push(x / Complex64::from(xn));
        vs.push(y / Complex64::from(yn));
        sigma.push(eig.eigenvalues[src].max(0.0));
    }
    let (u, v) = if us.is_empty() {
        (ComplexMatrix::zeros(m, 0), ComplexMatrix::zeros(n, 0))
    } else {
        (ComplexMatrix::from_columns(&us), ComplexMatrix::from_columns(&vs))
    };
    let u = complete_columns(&u, m, k);
    let v = complete_columns(&v, n, k);
    sigma.resize(k, 0.0);
    Svd { u, sigma, v }
}

/// Extends orthonormal columns `q` (in `ℂ^dim`) to `k` orthonormal columns.
fn complete_columns(q: &ComplexMatrix, dim: usize, k: usize) -> ComplexMatrix {
    let have = q.ncols();
    if have >= k {
        return q.clone();
    }
    let proj = ComplexMatrix::identity(dim, dim) - q * q.adjoint();
    let eig = SymmetricEigen::new(proj);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut out = ComplexMatrix::zeros(dim, k);
    out.view_mut((0, 0), (dim, have)).copy_from(q);
    for (dst, &src) in (have..k).zip(&order) {
        out.set_column(dst, &eig.eigenvectors.column(src));
    }
    out
}

/// Eigen-decomposition of a hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn herm_eig(a: &ComplexMatrix, tol: &Tolerance) -> Result<HermEig> {
    check_finite(a)?;
    if a.nrows() != a.ncols() {
        return Err(Error::Shape(format!("herm_eig needs a square matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    let dev = max_abs(&(a - a.adjoint()));
    if dev > tol.eq_tol * max_abs(a).max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let h = (a + a.adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(h);
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
        values.push(eig.eigenvalues[src]);
    }
    Ok(HermEig { values, vectors })
}

/// Max-entry distance within `eq_tol * max(1, largest entry of a or b)`.
pub fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    let scale = max_abs(a).max(max_abs(b)).max(1.0);
    Ok(max_abs(&(a - b)) <= tol.eq_tol * scale)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of independent standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary from the QR factorisation of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(n, n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Haar-distributed real orthogonal matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    let g = RealMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            let mut col = q.column_mut(k);
            col *= -1.0;
        }
    }
    q
}

/// Orthonormal basis (as columns) of the null space of a real matrix, using a
/// cutoff of `cutoff * max(1, largest singular value)`.
pub fn real_null_space(m: &RealMatrix, cutoff: f64) -> RealMatrix {
    let n = m.ncols();
    if n == 0 {
        return RealMatrix::zeros(0, 0);
    }
    // Pad to square so that V is complete.
    let rows = m.nrows().max(n);
    let mut sq = RealMatrix::zeros(rows, n);
    sq.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let dec = sq.svd(false, true);
    let v_t = dec.v_t.expect("v_t requested");
    let smax = dec.singular_values.max().max(1.0);
    let kernel: Vec<usize> = (0..n).filter(|&k| dec.singular_values[k] <= cutoff * smax).collect();
    let mut out = RealMatrix::zeros(n, kernel.len());
    for (j, &k) in kernel.iter().enumerate() {
        out.set_column(j, &v_t.row(k).transpose());
    }
    out
}

/// Numerical rank of a real matrix.
pub fn real_rank(m: &RealMatrix, cutoff: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.max().max(1.0);
    sv.iter().filter(|&&s| s > cutoff * smax).count()
}

pub fn operator_norm(m: &RealMatrix) -> f64 {
    if m.is_empty() {
        0.0
    } else {
        m.clone().singular_values().max()
    }
}
