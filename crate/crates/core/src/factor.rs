//! Cartan factors of types 1-4, their elements and finite ℓ∞-sums.
//!
//! Matrix factors (rectangular, antisymmetric, symmetric) carry a complex
//! matrix payload and use the triple product `½(a b* c + c b* a)`. Spin
//! factors are modelled intrinsically: a coordinate vector in a fixed
//! orthonormal basis, with entrywise conjugation as `x ↦ x̄` and product
//! `⟨x|y⟩z + ⟨z|y⟩x − ⟨x|z̄⟩ȳ`.
//!
//! Every factor also has a fixed orthonormal complex basis. Interleaving the
//! real and imaginary parts of the coordinates in that basis gives the real
//! coordinates on which the (only real-linear) operators `L(a,b)` and
//! `Q(a,b)` are materialized.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, complex_normal, ComplexMatrix, RealMatrix, Tolerance, I, ONE, ZERO};
use crate::spectral::merge_pieces;

/// Which Cartan factor, with its dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawFactor")]
pub enum Factor {
    /// `m × n` complex matrices.
    Rect { m: usize, n: usize },
    /// `n × n` antisymmetric matrices.
    Antisym { n: usize },
    /// `n × n` symmetric matrices.
    Sym { n: usize },
    /// Spin factor on `ℂⁿ`, `n ≥ 3`.
    Spin { n: usize },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawFactor {
    Rect { m: usize, n: usize },
    Antisym { n: usize },
    Sym { n: usize },
    Spin { n: usize },
}

impl TryFrom<RawFactor> for Factor {
    type Error = Error;

    fn try_from(raw: RawFactor) -> Result<Self> {
        let f = match raw {
            RawFactor::Rect { m, n } => Factor::Rect { m, n },
            RawFactor::Antisym { n } => Factor::Antisym { n },
            RawFactor::Sym { n } => Factor::Sym { n },
            RawFactor::Spin { n } => Factor::Spin { n },
        };
        f.validate()?;
        Ok(f)
    }
}

impl Factor {
    pub fn rect(m: usize, n: usize) -> Result<Self> {
        let f = Factor::Rect { m, n };
        f.validate().map(|_| f)
    }

    pub fn antisym(n: usize) -> Result<Self> {
        let f = Factor::Antisym { n };
        f.validate().map(|_| f)
    }

    pub fn sym(n: usize) -> Result<Self> {
        let f = Factor::Sym { n };
        f.validate().map(|_| f)
    }

    pub fn spin(n: usize) -> Result<Self> {
        let f = Factor::Spin { n };
        f.validate().map(|_| f)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Factor::Rect { m, n } => m >= 1 && n >= 1,
            Factor::Antisym { n } | Factor::Sym { n } => n >= 1,
            Factor::Spin { n } => n >= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidFactor(self.to_string()))
        }
    }

    pub fn complex_dim(&self) -> usize {
        match *self {
            Factor::Rect { m, n } => m * n,
            Factor::Antisym { n } => n * (n - 1) / 2,
            Factor::Sym { n } => n * (n + 1) / 2,
            Factor::Spin { n } => n,
        }
    }

    pub fn real_dim(&self) -> usize {
        2 * self.complex_dim()
    }

    /// Maximal number of mutually orthogonal minimal tripotents.
    pub fn rank(&self) -> usize {
        match *self {
            Factor::Rect { m, n } => m.min(n),
            Factor::Antisym { n } => n / 2,
            Factor::Sym { n } => n,
            Factor::Spin { .. } => 2,
        }
    }

    /// Shape of the matrix payload, or `None` for spin factors.
    pub fn matrix_shape(&self) -> Option<(usize, usize)> {
        match *self {
            Factor::Rect { m, n } => Some((m, n)),
            Factor::Antisym { n } | Factor::Sym { n } => Some((n, n)),
            Factor::Spin { .. } => None,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::Rect { m, n } => write!(f, "Rect({m},{n})"),
            Factor::Antisym { n } => write!(f, "Antisym({n})"),
            Factor::Sym { n } => write!(f, "Sym({n})"),
            Factor::Spin { n } => write!(f, "Spin({n})"),
        }
    }
}

impl FromStr for Factor {
    type Err = Error;

    /// Parses the `Display` form, e.g. `Rect(2,3)`, `sym(2)`, `Spin(4)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cannot parse factor '{s}'"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let close = s.rfind(')').ok_or_else(bad)?;
        let kind = s[..open].trim().to_ascii_lowercase();
        let args: Vec<usize> = s[open + 1..close]
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (kind.as_str(), args.as_slice()) {
            ("rect", [m, n]) => Factor::rect(*m, *n),
            ("antisym", [n]) => Factor::antisym(*n),
            ("sym", [n]) => Factor::sym(*n),
            ("spin", [n]) => Factor::spin(*n),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Payload {
    Matrix(ComplexMatrix),
    Vector(DVector<Complex64>),
}

/// A point of a single Cartan factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    factor: Factor,
    payload: Payload,
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

impl Element {
    /// Builds a matrix-factor element, checking the (anti)symmetry constraint.
    pub fn from_matrix_tol(factor: Factor, m: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        factor.validate()?;
        numerics::check_finite(&m)?;
        let shape = factor.matrix_shape().ok_or_else(|| Error::NotInFactor {
            factor: factor.to_string(),
            reason: "spin factor elements are vectors".into(),
        })?;
        if m.shape() != shape {
            return Err(Error::Shape(format!("{factor} needs {shape:?}, got {:?}", m.shape())));
        }
        let scale = numerics::max_abs(&m).max(1.0);
        let dev = match factor {
            Factor::Sym { .. } => numerics::max_abs(&(&m - m.transpose())),
            Factor::Antisym { .. } => numerics::max_abs(&(&m + m.transpose())),
            _ => 0.0,
        };
        if dev > tol.eq_tol * scale {
            return Err(Error::NotInFactor {
                factor: factor.to_string(),
                reason: format!("(anti)symmetry defect {dev:.3e}"),
            });
        }
        Ok(Self { factor, payload: Payload::Matrix(m) })
    }

    pub fn from_matrix(factor: Factor, m: ComplexMatrix) -> Result<Self> {
        Self::from_matrix_tol(factor, m, &Tolerance::default())
    }

    /// Element of `Rect(m,n)` with the shape of `m`.
    pub fn rect(m: ComplexMatrix) -> Result<Self> {
        let f = Factor::rect(m.nrows(), m.ncols())?;
        Self::from_matrix(f, m)
    }

    pub fn spin(v: DVector<Complex64>) -> Result<Self> {
        let factor = Factor::spin(v.len())?;
        if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { factor, payload: Payload::Vector(v) })
    }

    pub fn spin_from_slice(v: &[Complex64]) -> Result<Self> {
        Self::spin(DVector::from_column_slice(v))
    }

    /// Real spin vector.
    pub fn spin_real(v: &[f64]) -> Result<Self> {
        Self::spin(DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::from(x))))
    }

    pub fn zero(factor: Factor) -> Self {
        match factor.matrix_shape() {
            Some((r, c)) => Self { factor, payload: Payload::Matrix(ComplexMatrix::zeros(r, c)) },
            None => Self { factor, payload: Payload::Vector(DVector::zeros(factor.complex_dim())) },
        }
    }

    /// Matrix unit `e_ij` of `Rect(m,n)`.
    pub fn matrix_unit(m: usize, n: usize, i: usize, j: usize) -> Self {
        let mut a = ComplexMatrix::zeros(m, n);
        a[(i, j)] = ONE;
        Self { factor: Factor::Rect { m, n }, payload: Payload::Matrix(a) }
    }

    /// Square matrix element of the given factor from row-major entries.
    pub fn square(factor: Factor, rows: &[&[Complex64]]) -> Result<Self> {
        let n = rows.len();
        let flat: Vec<Complex64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        if flat.len() != n * n {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_matrix(factor, ComplexMatrix::from_row_slice(n, n, &flat))
    }

    pub fn factor(&self) -> Factor {
        self.factor
    }

    pub fn matrix(&self) -> Option<&ComplexMatrix> {
        match &self.payload {
            Payload::Matrix(m) => Some(m),
            Payload::Vector(_) => None,
        }
    }

    pub fn vector(&self) -> Option<&DVector<Complex64>> {
        match &self.payload {
            Payload::Vector(v) => Some(v),
            Payload::Matrix(_) => None,
        }
    }

    /// Coordinates in the factor's orthonormal basis.
    pub fn coords(&self) -> Vec<Complex64> {
        match (&self.payload, self.factor) {
            (Payload::Vector(v), _) => v.iter().copied().collect(),
            (Payload::Matrix(a), Factor::Rect { m, n }) => {
                (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| a[(i, j)]).collect()
            }
            (Payload::Matrix(a), Factor::Sym { n }) => {
                let mut out = Vec::with_capacity(self.factor.complex_dim());
                for i in 0..n {
                    out.push(a[(i, i)]);
                    for j in i + 1..n {
                        out.push((a[(i, j)] + a[(j, i)]) * (0.5 * SQRT2));
                    }
                }
                out
            }
            (Payload::Matrix(a), Factor::Antisym { n }) => {
                let mut out = Vec::with_capacity(self.factor.complex_dim());
                for i in 0..n {
                    for j in i + 1..n {
                        out.push((a[(i, j)] - a[(j, i)]) * (0.5 * SQRT2));
                    }
                }
                out
            }
            (Payload::Matrix(_), Factor::Spin { .. }) => unreachable!("spin factors carry vectors"),
        }
    }

    pub fn from_coords(factor: Factor, c: &[Complex64]) -> Result<Self> {
        factor.validate()?;
        if c.len() != factor.complex_dim() {
            return Err(Error::Shape(format!(
                "{factor} has dimension {}, got {} coordinates",
                factor.complex_dim(),
                c.len()
            )));
        }
        let payload = match factor {
            Factor::Spin { .. } => Payload::Vector(DVector::from_column_slice(c)),
            Factor::Rect { m, n } => Payload::Matrix(ComplexMatrix::from_row_slice(m, n, c)),
            Factor::Sym { n } => {
                let mut a = ComplexMatrix::zeros(n, n);
                let mut k = 0;
                for i in 0..n {
                    a[(i, i)] = c[k];
                    k += 1;
                    for j in i + 1..n {
                        let v = c[k] / SQRT2;
                        a[(i, j)] = v;
                        a[(j, i)] = v;
                        k += 1;
                    }
                }
                Payload::Matrix(a)
            }
            Factor::Antisym { n } => {
                let mut a = ComplexMatrix::zeros(n, n);
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        let v = c[k] / SQRT2;
                        a[(i, j)] = v;
                        a[(j, i)] = -v;
                        k += 1;
                    }
                }
                Payload::Matrix(a)
            }
        };
        Ok(Self { factor, payload })
    }

    /// Orthonormal complex basis of the factor.
    pub fn basis(factor: Factor) -> Vec<Element> {
        let d = factor.complex_dim();
        (0..d)
            .map(|k| {
                let mut c = vec![ZERO; d];
                c[k] = ONE;
                Element::from_coords(factor, &c).expect("valid factor")
            })
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(factor: Factor, rng: &mut R) -> Self {
        let c: Vec<Complex64> = (0..factor.complex_dim()).map(|_| complex_normal(rng)).collect();
        Element::from_coords(factor, &c).expect("valid factor")
    }

    fn map_payload(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let payload = match &self.payload {
            Payload::Matrix(m) => Payload::Matrix(m.map(&f)),
            Payload::Vector(v) => Payload::Vector(v.map(&f)),
        };
        Self { factor: self.factor, payload }
    }

    fn zip_payload(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.factor, other.factor, "elements live in different factors");
        let payload = match (&self.payload, &other.payload) {
            (Payload::Matrix(a), Payload::Matrix(b)) => Payload::Matrix(a.zip_map(b, &f)),
            (Payload::Vector(a), Payload::Vector(b)) => Payload::Vector(a.zip_map(b, &f)),
            _ => unreachable!("payload kind is determined by the factor"),
        };
        Self { factor: self.factor, payload }
    }

    /// Entrywise conjugation (the spin conjugation for spin factors).
    pub fn conj(&self) -> Self {
        self.map_payload(|z| z.conj())
    }

    fn entries(&self) -> Box<dyn Iterator<Item = Complex64> + '_> {
        match &self.payload {
            Payload::Matrix(m) => Box::new(m.iter().copied()),
            Payload::Vector(v) => Box::new(v.iter().copied()),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.factor == other.factor {
            Ok(())
        } else {
            Err(Error::FactorMismatch { left: self.factor.to_string(), right: other.factor.to_string() })
        }
    }

    fn matrix_pieces(&self, a: &ComplexMatrix, tol: &Tolerance) -> Result<Vec<(f64, Element)>> {
        let s = numerics::svd(a)?;
        let raw: Vec<(f64, Element)> = s
            .sigma
            .iter()
            .enumerate()
            .map(|(k, &sigma)| {
                let u = s.u.column(k) * s.v.column(k).adjoint();
                (sigma, Element { factor: self.factor, payload: Payload::Matrix(u) })
            })
            .collect();
        let merged = merge_pieces(raw, tol);
        // Cluster sums of (anti)symmetric inputs are (anti)symmetric; remove rounding drift.
        Ok(merged
            .into_iter()
            .map(|(sigma, u)| {
                let m = u.matrix().expect("matrix payload");
                let fixed = match self.factor {
                    Factor::Sym { .. } => (m + m.transpose()).map(|z| z * 0.5),
                    Factor::Antisym { .. } => (m - m.transpose()).map(|z| z * 0.5),
                    _ => m.clone(),
                };
                (sigma, Element { factor: self.factor, payload: Payload::Matrix(fixed) })
            })
            .collect())
    }

    /// Rank-two spectral data of a spin vector: `x = λ₁ e₁ + λ₂ e₂` with
    /// `e₁ ⊥ e₂` minimal tripotents, built from the real/imaginary split of a
    /// phase-rotated copy of `x`.
    fn spin_pieces(&self, x: &DVector<Complex64>, tol: &Tolerance) -> Vec<(f64, Element)> {
        let w: Complex64 = x.iter().map(|z| z * z).sum(); // ⟨x|x̄⟩
        let nu = if w.norm() > 0.0 { (w / w.norm()).sqrt() } else { ONE };
        let y = x.map(|z| z * nu.conj());
        let p: DVector<f64> = y.map(|z| z.re);
        let q: DVector<f64> = y.map(|z| z.im);
        let (pn, qn) = (p.norm(), q.norm());
        let to_el = |v: DVector<Complex64>| Element { factor: self.factor, payload: Payload::Vector(v) };
        let real = |v: &DVector<f64>| v.map(Complex64::from);
        if pn == 0.0 {
            return Vec::new();
        }
        let phat = real(&(&p / pn));
        let mut raw = Vec::new();
        if qn <= tol.rank_tol * pn {
            raw.push((pn, to_el(phat.map(|z| z * nu))));
        } else {
            let qhat = real(&(&q / qn)).map(|z| z * I);
            let e1 = (&phat + &qhat).map(|z| z * nu * 0.5);
            let e2 = (&phat - &qhat).map(|z| z * nu * 0.5);
            raw.push((pn + qn, to_el(e1)));
            raw.push((pn - qn, to_el(e2)));
        }
        merge_pieces(raw, tol)
    }
}

/// The algebraic interface shared by single-factor elements and ℓ∞-sums.
///
/// `plus`, `minus` and `inner` panic if the operands live in different
/// spaces; fallible entry points (`triple`) return an error instead.
pub trait JbElement: Clone + fmt::Debug + Send + Sync + Sized {
    fn same_space(&self, other: &Self) -> Result<()>;
    /// `{a,b,c}`: linear in `a`, `c`, conjugate-linear in `b`.
    fn triple(a: &Self, b: &Self, c: &Self) -> Result<Self>;
    fn norm(&self) -> f64;
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn scale(&self, s: Complex64) -> Self;
    /// Hilbert inner product in the orthonormal coordinates, linear in `self`.
    fn inner(&self, other: &Self) -> Complex64;
    fn real_dim(&self) -> usize;
    fn to_real(&self) -> DVector<f64>;
    #[allow(clippy::wrong_self_convention)]
    fn from_real_like(&self, v: &DVector<f64>) -> Self;
    fn max_abs(&self) -> f64;
    fn max_abs_diff(&self, other: &Self) -> f64;
    /// `(σ, u)` pairs with `σ` strictly decreasing and `u` mutually orthogonal
    /// tripotents, such that `self = Σ σ u`.
    fn spectral_pieces(&self, tol: &Tolerance) -> Result<Vec<(f64, Self)>>;
    fn random_like<R: Rng + ?Sized>(&self, rng: &mut R) -> Self;

    fn real(&self, t: f64) -> Self {
        self.scale(Complex64::from(t))
    }

    fn is_zero(&self, tol: &Tolerance) -> bool {
        self.max_abs() <= tol.eq_tol
    }

    /// Entrywise comparison with scale `max(1, |a|, |b|)`.
    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        let scale = self.max_abs().max(other.max_abs()).max(1.0);
        self.max_abs_diff(other) <= tol.eq_tol * scale
    }

    /// Relative residual `|a − b| / max(1, |a|, |b|)`.
    fn residual(&self, other: &Self) -> f64 {
        let scale = self.max_abs().max(other.max_abs()).max(1.0);
        self.max_abs_diff(other) / scale
    }

    /// Real basis of the underlying real vector space.
    fn real_basis(&self) -> Vec<Self> {
        let d = self.real_dim();
        (0..d)
            .map(|k| {
                let mut v = DVector::zeros(d);
                v[k] = 1.0;
                self.from_real_like(&v)
            })
            .collect()
    }

    fn cube(&self) -> Self {
        Self::triple(self, self, self).expect("same space")
    }
}

impl JbElement for Element {
    fn same_space(&self, other: &Self) -> Result<()> {
        self.check_same(other)
    }

    fn triple(a: &Self, b: &Self, c: &Self) -> Result<Self> {
        a.check_same(b)?;
        a.check_same(c)?;
        let payload = match (&a.payload, &b.payload, &c.payload) {
            (Payload::Matrix(a), Payload::Matrix(b), Payload::Matrix(c)) => {
                let bs = b.adjoint();
                let m = (a * &bs * c + c * &bs * a).map(|z| z * 0.5);
                Payload::Matrix(m)
            }
            (Payload::Vector(x), Payload::Vector(y), Payload::Vector(z)) => {
                let xy = x.dotc(y).conj(); // ⟨x|y⟩ = Σ x_i conj(y_i)
                let zy = z.dotc(y).conj();
                let xzbar: Complex64 = x.iter().zip(z.iter()).map(|(p, q)| p * q).sum();
                let ybar = y.map(|t| t.conj());
                Payload::Vector(z * xy + x * zy - ybar * xzbar)
            }
            _ => unreachable!("payload kind is determined by the factor"),
        };
        Ok(Element { factor: a.factor, payload })
    }

    fn norm(&self) -> f64 {
        match &self.payload {
            Payload::Matrix(m) => {
                if m.is_empty() {
                    0.0
                } else {
                    m.clone().singular_values().max()
                }
            }
            Payload::Vector(x) => {
                let t = x.norm_squared();
                let s: Complex64 = x.iter().map(|z| z * z).sum();
                (t + (t * t - s.norm_sqr()).max(0.0).sqrt()).sqrt()
            }
        }
    }

    fn zero_like(&self) -> Self {
        Element::zero(self.factor)
    }

    fn plus(&self, other: &Self) -> Self {
        self.zip_payload(other, |a, b| a + b)
    }

    fn minus(&self, other: &Self) -> Self {
        self.zip_payload(other, |a, b| a - b)
    }

    fn scale(&self, s: Complex64) -> Self {
        self.map_payload(|z| z * s)
    }

    fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.factor, other.factor, "elements live in different factors");
        let ca = self.coords();
        let cb = other.coords();
        ca.iter().zip(&cb).map(|(a, b)| a * b.conj()).sum()
    }

    fn real_dim(&self) -> usize {
        self.factor.real_dim()
    }

    fn to_real(&self) -> DVector<f64> {
        let c = self.coords();
        DVector::from_iterator(2 * c.len(), c.iter().flat_map(|z| [z.re, z.im]))
    }

    fn from_real_like(&self, v: &DVector<f64>) -> Self {
        let c: Vec<Complex64> = v.as_slice().chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
        Element::from_coords(self.factor, &c).expect("real vector of the right length")
    }

    fn max_abs(&self) -> f64 {
        self.entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.factor, other.factor, "elements live in different factors");
        self.entries().zip(other.entries()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    fn spectral_pieces(&self, tol: &Tolerance) -> Result<Vec<(f64, Self)>> {
        match &self.payload {
            Payload::Matrix(a) => self.matrix_pieces(a, tol),
            Payload::Vector(x) => Ok(self.spin_pieces(x, tol)),
        }
    }

    fn random_like<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        Element::random(self.factor, rng)
    }
}

/// Ordered list of factors forming a finite ℓ∞-sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SumSpace(pub Vec<Factor>);

impl SumSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidFactor("empty ℓ∞-sum".into()));
        }
        for f in &factors {
            f.validate()?;
        }
        Ok(Self(factors))
    }

    pub fn single(f: Factor) -> Self {
        Self(vec![f])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn real_dim(&self) -> usize {
        self.0.iter().map(Factor::real_dim).sum()
    }

    pub fn complex_dim(&self) -> usize {
        self.0.iter().map(Factor::complex_dim).sum()
    }

    /// Real-coordinate offset of each factor.
    pub fn offsets(&self) -> Vec<usize> {
        self.0
            .iter()
            .scan(0, |acc, f| {
                let o = *acc;
                *acc += f.real_dim();
                Some(o)
            })
            .collect()
    }

    pub fn zero(&self) -> SumElement {
        SumElement { parts: self.0.iter().map(|f| Element::zero(*f)).collect() }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> SumElement {
        SumElement { parts: self.0.iter().map(|f| Element::random(*f, rng)).collect() }
    }

    /// `x` placed in slot `index`, zero elsewhere.
    pub fn embed(&self, index: usize, x: Element) -> Result<SumElement> {
        let f = self.0.get(index).ok_or_else(|| Error::Shape(format!("no factor {index}")))?;
        if *f != x.factor() {
            return Err(Error::FactorMismatch { left: f.to_string(), right: x.factor().to_string() });
        }
        let mut z = self.zero();
        z.parts[index] = x;
        Ok(z)
    }
}

impl fmt::Display for SumSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", names.join(" ⊕ "))
    }
}

/// A point of a finite ℓ∞-sum of Cartan factors.
#[derive(Debug, Clone, PartialEq)]
pub struct SumElement {
    parts: Vec<Element>,
}

impl SumElement {
    pub fn new(parts: Vec<Element>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidFactor("empty ℓ∞-sum".into()));
        }
        Ok(Self { parts })
    }

    pub fn single(e: Element) -> Self {
        Self { parts: vec![e] }
    }

    pub fn parts(&self) -> &[Element] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &Element {
        &self.parts[i]
    }

    pub fn into_parts(self) -> Vec<Element> {
        self.parts
    }

    pub fn space(&self) -> SumSpace {
        SumSpace(self.parts.iter().map(Element::factor).collect())
    }

    /// Componentwise application of a single-factor operation.
    pub fn lift(&self, f: impl Fn(&Element) -> Result<Element>) -> Result<SumElement> {
        Ok(SumElement { parts: self.parts.iter().map(f).collect::<Result<_>>()? })
    }

    /// Componentwise application of a ternary operation on aligned sums.
    pub fn lift3(
        a: &SumElement,
        b: &SumElement,
        c: &SumElement,
        f: impl Fn(&Element, &Element, &Element) -> Result<Element>,
    ) -> Result<SumElement> {
        a.same_space(b)?;
        a.same_space(c)?;
        let parts = a
            .parts
            .iter()
            .zip(&b.parts)
            .zip(&c.parts)
            .map(|((x, y), z)| f(x, y, z))
            .collect::<Result<_>>()?;
        Ok(SumElement { parts })
    }
}

impl JbElement for SumElement {
    fn same_space(&self, other: &Self) -> Result<()> {
        if self.parts.len() != other.parts.len() {
            return Err(Error::FactorMismatch { left: self.space().to_string(), right: other.space().to_string() });
        }
        for (a, b) in self.parts.iter().zip(&other.parts) {
            a.same_space(b)?;
        }
        Ok(())
    }

    fn triple(a: &Self, b: &Self, c: &Self) -> Result<Self> {
        SumElement::lift3(a, b, c, Element::triple)
    }

    fn norm(&self) -> f64 {
        self.parts.iter().map(Element::norm).fold(0.0, f64::max)
    }

    fn zero_like(&self) -> Self {
        self.space().zero()
    }

    fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.parts.len(), other.parts.len(), "misaligned sums");
        Self { parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.plus(b)).collect() }
    }

    fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.parts.len(), other.parts.len(), "misaligned sums");
        Self { parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.minus(b)).collect() }
    }

    fn scale(&self, s: Complex64) -> Self {
        Self { parts: self.parts.iter().map(|a| a.scale(s)).collect() }
    }

    fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.parts.len(), other.parts.len(), "misaligned sums");
        self.parts.iter().zip(&other.parts).map(|(a, b)| a.inner(b)).sum()
    }

    fn real_dim(&self) -> usize {
        self.parts.iter().map(Element::real_dim).sum()
    }

    fn to_real(&self) -> DVector<f64> {
        let chunks: Vec<DVector<f64>> = self.parts.iter().map(Element::to_real).collect();
        DVector::from_iterator(self.real_dim(), chunks.iter().flat_map(|c| c.iter().copied()))
    }

    fn from_real_like(&self, v: &DVector<f64>) -> Self {
        let mut offset = 0;
        let parts = self
            .parts
            .iter()
            .map(|p| {
                let d = p.real_dim();
                let chunk = v.rows(offset, d).into_owned();
                offset += d;
                p.from_real_like(&chunk)
            })
            .collect();
        Self { parts }
    }

    fn max_abs(&self) -> f64 {
        self.parts.iter().map(Element::max_abs).fold(0.0, f64::max)
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.parts.len(), other.parts.len(), "misaligned sums");
        self.parts.iter().zip(&other.parts).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }

    fn spectral_pieces(&self, tol: &Tolerance) -> Result<Vec<(f64, Self)>> {
        let space = self.space();
        let mut raw = Vec::new();
        for (i, p) in self.parts.iter().enumerate() {
            for (sigma, u) in p.spectral_pieces(tol)? {
                raw.push((sigma, space.embed(i, u)?));
            }
        }
        Ok(merge_pieces(raw, tol))
    }

    fn random_like<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        self.space().random(rng)
    }

    /// Required in every part, each with its own scale.
    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        assert_eq!(self.parts.len(), other.parts.len(), "misaligned sums");
        self.parts.iter().zip(&other.parts).all(|(a, b)| a.approx_eq(b, tol))
    }

    fn residual(&self, other: &Self) -> f64 {
        assert_eq!(self.parts.len(), other.parts.len(), "misaligned sums");
        self.parts.iter().zip(&other.parts).map(|(a, b)| a.residual(b)).fold(0.0, f64::max)
    }
}

/// Materializes `c ↦ {a,b,c}` on real coordinates.
pub fn l_operator<T: JbElement>(a: &T, b: &T) -> Result<RealMatrix> {
    a.same_space(b)?;
    operator_matrix(a, |c| T::triple(a, b, c))
}

/// Materializes `z ↦ Q(a,b)(z) = {a,z,b}` on real coordinates (conjugate-linear).
pub fn q_operator_matrix<T: JbElement>(a: &T, b: &T) -> Result<RealMatrix> {
    a.same_space(b)?;
    operator_matrix(a, |z| T::triple(a, z, b))
}

/// `Q(a,b)(z) = {a,z,b}`.
pub fn q_operator<T: JbElement>(a: &T, b: &T, z: &T) -> Result<T> {
    T::triple(a, z, b)
}

/// `Q(a)(z) = {a,z,a}`.
pub fn quad<T: JbElement>(a: &T, z: &T) -> Result<T> {
    T::triple(a, z, a)
}

/// Real matrix of a real-linear map `T → T`, built column by column.
pub fn operator_matrix<T: JbElement>(template: &T, f: impl Fn(&T) -> Result<T>) -> Result<RealMatrix> {
    let basis = template.real_basis();
    let d = basis.len();
    let mut m = DMatrix::zeros(d, d);
    for (j, b) in basis.iter().enumerate() {
        m.set_column(j, &f(b)?.to_real());
    }
    Ok(m)
}

/// Applies a real matrix to an element through its real coordinates.
pub fn apply_real<T: JbElement>(m: &RealMatrix, x: &T) -> T {
    x.from_real_like(&(m * x.to_real()))
}

/// Triple isomorphism between `Spin(3)` and `Sym(2)` or `Spin(4)` and `Rect(2,2)`.
///
/// Basis vectors `a, b, c, d` of the spin factor are real; with
/// `e₁ = (a+ib)/2`, `e₂ = (a−ib)/2`, `e₃ = (c+id)/2`, `e₄ = (c−id)/2` the
/// identification sends `e₁ ↦ e₁₁`, `e₂ ↦ e₂₂`, and `c ↦ i(e₁₂ + e₂₁)` (n = 3)
/// or `e₃ ↦ e₁₂`, `e₄ ↦ −e₂₁` (n = 4). The phases on the off-diagonal images
/// are forced: `Q(c)(a) = −a` in the spin factor, while `Q(σ)(1) = 1` for the
/// real swap matrix `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinEmbedding {
    n: usize,
}

impl SpinEmbedding {
    pub fn new(n: usize) -> Result<Self> {
        if n == 3 || n == 4 {
            Ok(Self { n })
        } else {
            Err(Error::OutOfRange(format!("spin/matrix identification exists for n = 3 or 4, not {n}")))
        }
    }

    pub fn source(&self) -> Factor {
        Factor::Spin { n: self.n }
    }

    pub fn target(&self) -> Factor {
        if self.n == 3 {
            Factor::Sym { n: 2 }
        } else {
            Factor::Rect { m: 2, n: 2 }
        }
    }

    pub fn embed(&self, x: &Element) -> Result<Element> {
        if x.factor() != self.source() {
            return Err(Error::FactorMismatch { left: self.source().to_string(), right: x.factor().to_string() });
        }
        let v = x.vector().expect("spin payload");
        let mut m = ComplexMatrix::zeros(2, 2);
        // a ↦ I, b = −i(e₁ − e₂) ↦ diag(−i, i)
        m[(0, 0)] = v[0] - I * v[1];
        m[(1, 1)] = v[0] + I * v[1];
        if self.n == 3 {
            m[(0, 1)] = I * v[2];
            m[(1, 0)] = I * v[2];
        } else {
            // c = e₃ + e₄ ↦ e₁₂ − e₂₁, d = −i(e₃ − e₄) ↦ −i(e₁₂ + e₂₁)
            m[(0, 1)] = v[2] - I * v[3];
            m[(1, 0)] = -v[2] - I * v[3];
        }
        Element::from_matrix(self.target(), m)
    }

    pub fn pull_back(&self, y: &Element) -> Result<Element> {
        if y.factor() != self.target() {
            return Err(Error::FactorMismatch { left: self.target().to_string(), right: y.factor().to_string() });
        }
        let m = y.matrix().expect("matrix payload");
        let half = Complex64::from(0.5);
        let mut v = vec![(m[(0, 0)] + m[(1, 1)]) * half, (m[(1, 1)] - m[(0, 0)]) * half / I];
        if self.n == 3 {
            v.push((m[(0, 1)] + m[(1, 0)]) * half / I);
        } else {
            v.push((m[(0, 1)] - m[(1, 0)]) * half);
            v.push((m[(0, 1)] + m[(1, 0)]) * half * I);
        }
        Element::spin_from_slice(&v)
    }
}

// ---------------------------------------------------------------------------
// JSON element format

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawData {
    Matrix(Vec<Vec<[f64; 2]>>),
    Vector(Vec<[f64; 2]>),
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    factor: Factor,
    data: RawData,
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pair = |z: &Complex64| [z.re, z.im];
        let data = match &self.payload {
            Payload::Matrix(m) => {
                RawData::Matrix((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(&m[(i, j)])).collect()).collect())
            }
            Payload::Vector(v) => RawData::Vector(v.iter().map(pair).collect()),
        };
        RawElement { factor: self.factor, data }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawElement::deserialize(d)?;
        let c = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
        let el = match (raw.factor, raw.data) {
            (f @ Factor::Spin { .. }, RawData::Vector(v)) => {
                if v.len() != f.complex_dim() {
                    return Err(D::Error::custom(format!("{f} needs {} coordinates", f.complex_dim())));
                }
                Element::spin_from_slice(&v.iter().map(c).collect::<Vec<_>>())
            }
            (f, RawData::Matrix(rows)) if f.matrix_shape().is_some() => {
                let (r, cols) = f.matrix_shape().unwrap();
                if rows.len() != r || rows.iter().any(|row| row.len() != cols) {
                    return Err(D::Error::custom(format!("{f} needs a {r}x{cols} matrix")));
                }
                let flat: Vec<Complex64> = rows.iter().flat_map(|row| row.iter().map(c)).collect();
                Element::from_matrix(f, ComplexMatrix::from_row_slice(r, cols, &flat))
            }
            (f, _) => Err(Error::Parse(format!("data layout does not match {f}"))),
        };
        el.map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RawSum {
    parts: Vec<Element>,
}

impl Serialize for SumElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSum { parts: self.parts.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SumElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawSum::deserialize(d)?;
        SumElement::new(raw.parts).map_err(D::Error::custom)
    }
}

/// Either JSON element form; a bare element is read as a one-part sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyElement {
    Sum(SumElement),
    Single(Element),
}

impl AnyElement {
    pub fn into_sum(self) -> SumElement {
        match self {
            AnyElement::Sum(s) => s,
            AnyElement::Single(e) => SumElement::single(e),
        }
    }

    /// Re-wraps `x` in the same form as `self`.
    pub fn rewrap(&self, x: SumElement) -> AnyElement {
        match self {
            AnyElement::Single(_) if x.parts().len() == 1 => AnyElement::Single(x.into_parts().remove(0)),
            _ => AnyElement::Sum(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn m2() -> Factor {
        Factor::Rect { m: 2, n: 2 }
    }

    fn e(i: usize, j: usize) -> Element {
        Element::matrix_unit(2, 2, i, j)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn descriptor_validation() {
        assert!(Factor::rect(0, 2).is_err());
        assert!(Factor::spin(2).is_err());
        assert!(Factor::spin(3).is_ok());
        assert!(Factor::sym(1).is_ok());
        assert_eq!("Rect(2,3)".parse::<Factor>().unwrap(), Factor::Rect { m: 2, n: 3 });
        assert_eq!("spin(5)".parse::<Factor>().unwrap(), Factor::Spin { n: 5 });
        assert!("spin(2)".parse::<Factor>().is_err());
        assert!("cube(3)".parse::<Factor>().is_err());
        assert_eq!(Factor::Antisym { n: 4 }.complex_dim(), 6);
        assert_eq!(Factor::Sym { n: 3 }.complex_dim(), 6);
    }

    #[test]
    fn membership_is_checked() {
        let a = ComplexMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(Element::from_matrix(Factor::Sym { n: 2 }, a.clone()).is_err());
        assert!(Element::from_matrix(Factor::Antisym { n: 2 }, a.clone()).is_err());
        assert!(Element::from_matrix(m2(), a).is_ok());
        assert!(Element::from_matrix(Factor::Rect { m: 2, n: 3 }, ComplexMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn triple_product_examples() {
        let e11 = e(0, 0);
        assert_eq!(Element::triple(&e11, &e11, &e11).unwrap(), e11);
        // Quadrangle relation {e11, e12, e22} = ½ e21.
        let q = Element::triple(&e11, &e(0, 1), &e(1, 1)).unwrap();
        assert!(q.max_abs_diff(&e(1, 0).real(0.5)) < 1e-15);
        let x = Element::spin_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!(Element::triple(&x, &x, &x).unwrap().max_abs_diff(&x) < 1e-15);
    }

    #[test]
    fn triple_product_factor_mismatch() {
        let x = Element::spin_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(Element::triple(&e(0, 0), &x, &e(0, 0)), Err(Error::FactorMismatch { .. })));
    }

    #[test]
    fn l_operator_examples() {
        let e11 = e(0, 0);
        let l = l_operator(&e11, &e11).unwrap();
        let y = apply_real(&l, &e(0, 1));
        assert!(y.max_abs_diff(&e(0, 1).real(0.5)) < 1e-15);
        let y = apply_real(&l, &e(1, 1));
        assert!(y.max_abs() < 1e-15);
        let x = Element::spin_real(&[1.0, 0.0, 0.0]).unwrap();
        let l = l_operator(&x, &x).unwrap();
        let sym = (&l + l.transpose()) * 0.5;
        assert!((&l - &sym).norm() < 1e-12, "L(x,x) is self-adjoint");
        let ev = sym.symmetric_eigen().eigenvalues;
        assert!(ev.iter().all(|&v| v >= -1e-12));
    }

    #[test]
    fn l_operator_agrees_with_triple_on_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [m2(), Factor::Sym { n: 3 }, Factor::Antisym { n: 4 }, Factor::Spin { n: 5 }] {
            let a = Element::random(f, &mut rng);
            let b = Element::random(f, &mut rng);
            let l = l_operator(&a, &b).unwrap();
            for x in Element::zero(f).real_basis() {
                let direct = Element::triple(&a, &b, &x).unwrap();
                assert!(apply_real(&l, &x).approx_eq(&direct, &tol()));
            }
        }
    }

    #[test]
    fn q_operator_examples() {
        let e11 = e(0, 0);
        assert_eq!(quad(&e11, &e11).unwrap(), e11);
        assert!(quad(&e11, &e(1, 1)).unwrap().max_abs() < 1e-15);
        let a = Element::rect(ComplexMatrix::from_row_slice(2, 2, &[c(2., 0.), ZERO, ZERO, ZERO])).unwrap();
        let b = Element::rect(ComplexMatrix::from_row_slice(2, 2, &[c(0.5, 0.), ZERO, ZERO, ZERO])).unwrap();
        assert!(quad(&a, &b).unwrap().max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn q_is_conjugate_linear_and_cubes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Element::random(Factor::Spin { n: 4 }, &mut rng);
        let z = Element::random(Factor::Spin { n: 4 }, &mut rng);
        let lam = c(0.3, -1.7);
        let lhs = q_operator(&a, &a, &z.scale(lam)).unwrap();
        let rhs = q_operator(&a, &a, &z).unwrap().scale(lam.conj());
        assert!(lhs.approx_eq(&rhs, &tol()));
        assert!(quad(&a, &a).unwrap().approx_eq(&a.cube(), &tol()));
    }

    #[test]
    fn norm_examples() {
        let x = Element::spin_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!((x.norm() - 1.0).abs() < 1e-15);
        let e1 = Element::spin_from_slice(&[c(0.5, 0.), c(0., 0.5), ZERO]).unwrap();
        assert!((e1.norm() - 1.0).abs() < 1e-15);
        let d = Element::rect(ComplexMatrix::from_row_slice(2, 2, &[c(2., 0.), ZERO, ZERO, c(3., 0.)])).unwrap();
        assert!((d.norm() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn coords_round_trip_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for f in [Factor::Rect { m: 2, n: 3 }, Factor::Sym { n: 3 }, Factor::Antisym { n: 4 }, Factor::Spin { n: 3 }] {
            let x = Element::random(f, &mut rng);
            let y = Element::from_coords(f, &x.coords()).unwrap();
            assert!(x.max_abs_diff(&y) < 1e-14);
            let basis = Element::basis(f);
            for (i, b) in basis.iter().enumerate() {
                for (j, bb) in basis.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((b.inner(bb) - Complex64::from(expect)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn spin_embedding_basis_images() {
        let emb = SpinEmbedding::new(3).unwrap();
        let a = Element::spin_real(&[1.0, 0.0, 0.0]).unwrap();
        let ia = emb.embed(&a).unwrap();
        assert!(ia.max_abs_diff(&Element::square(Factor::Sym { n: 2 }, &[&[ONE, ZERO], &[ZERO, ONE]]).unwrap()) < 1e-15);
        let emb4 = SpinEmbedding::new(4).unwrap();
        let e3 = Element::spin_from_slice(&[ZERO, ZERO, c(0.5, 0.), c(0., 0.5)]).unwrap();
        assert!(emb4.embed(&e3).unwrap().max_abs_diff(&e(0, 1)) < 1e-15);
        assert!(SpinEmbedding::new(5).is_err());
    }

    #[test]
    fn spin_embedding_intertwines() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [3, 4] {
            let emb = SpinEmbedding::new(n).unwrap();
            for _ in 0..100 {
                let f = emb.source();
                let (x, y, z) = (Element::random(f, &mut rng), Element::random(f, &mut rng), Element::random(f, &mut rng));
                let lhs = emb.embed(&Element::triple(&x, &y, &z).unwrap()).unwrap();
                let rhs = Element::triple(&emb.embed(&x).unwrap(), &emb.embed(&y).unwrap(), &emb.embed(&z).unwrap()).unwrap();
                assert!(lhs.residual(&rhs) <= 1e-9);
                assert!((x.norm() - emb.embed(&x).unwrap().norm()).abs() <= 1e-9 * x.norm().max(1.0));
                assert!(emb.pull_back(&emb.embed(&x).unwrap()).unwrap().max_abs_diff(&x) < 1e-14);
            }
        }
    }

    #[test]
    fn sum_operations_are_partwise() {
        let space = SumSpace::new(vec![m2(), Factor::Spin { n: 3 }]).unwrap();
        let p = space.embed(0, e(0, 0)).unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-15);
        let d = Element::rect(ComplexMatrix::from_row_slice(2, 2, &[c(2., 0.), ZERO, ZERO, ZERO])).unwrap();
        let s = SumElement::new(vec![d, Element::spin_real(&[0.0, 1.0, 0.0]).unwrap()]).unwrap();
        assert!((s.norm() - 2.0).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (a, b, cc) = (space.random(&mut rng), space.random(&mut rng), space.random(&mut rng));
        let t = SumElement::triple(&a, &b, &cc).unwrap();
        for i in 0..2 {
            let direct = Element::triple(a.part(i), b.part(i), cc.part(i)).unwrap();
            assert_eq!(t.part(i), &direct);
        }
        let other = SumSpace::single(m2()).zero();
        assert!(SumElement::triple(&a, &other, &a).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = Element::random(Factor::Sym { n: 2 }, &mut rng);
        let s = serde_json::to_string(&x).unwrap();
        let y: Element = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let v = Element::random(Factor::Spin { n: 3 }, &mut rng);
        let sum = SumElement::new(vec![x, v]).unwrap();
        let s = serde_json::to_string(&sum).unwrap();
        let back: AnyElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back.into_sum(), sum);
    }

    #[test]
    fn json_rejects_bad_inputs() {
        let bad = r#"{"factor":{"kind":"sym","n":2},"data":[[[1,0],[2,0]],[[0,0],[1,0]]]}"#;
        assert!(serde_json::from_str::<Element>(bad).is_err());
        let bad = r#"{"factor":{"kind":"spin","n":2},"data":[[1,0],[0,0]]}"#;
        assert!(serde_json::from_str::<Element>(bad).is_err());
        let ok = r#"{"factor":{"kind":"rect","m":1,"n":2},"data":[[[1,0],[0,1]]]}"#;
        let x: Element = serde_json::from_str(ok).unwrap();
        assert_eq!(x.matrix().unwrap()[(0, 1)], I);
    }
}
