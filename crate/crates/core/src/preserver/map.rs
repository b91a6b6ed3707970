//! Candidate bijections between finite ℓ∞-sums of Cartan factors.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{operator_matrix, Element, Factor, JbElement, SumElement, SumSpace};
use crate::numerics::{random_orthogonal, random_unitary, ComplexMatrix, RealMatrix, Tolerance, ONE};

/// Relative distance under which an input counts as hitting a special point or line.
const HIT_TOL: f64 = 1e-12;

fn hits(x: &SumElement, target: &SumElement) -> bool {
    x.max_abs_diff(target) <= HIT_TOL * x.max_abs().max(target.max_abs()).max(1.0)
}

/// A bijection of `ℂ` fixing `0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarFunction {
    Identity,
    Conjugation,
    InverseOrZero,
    /// Permutes the listed points and fixes every other point.
    Table { pairs: Vec<(Complex64, Complex64)> },
}

impl ScalarFunction {
    pub fn table(pairs: Vec<(Complex64, Complex64)>) -> Result<Self> {
        let f = ScalarFunction::Table { pairs };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let ScalarFunction::Table { pairs } = self else {
            return Ok(());
        };
        let close = |a: Complex64, b: Complex64| (a - b).norm() <= HIT_TOL * a.norm().max(1.0);
        for (i, (k, v)) in pairs.iter().enumerate() {
            if !(k.re.is_finite() && k.im.is_finite() && v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            if close(*k, Complex64::default()) || close(*v, Complex64::default()) {
                return Err(Error::OutOfRange("a scalar table must fix 0".into()));
            }
            if pairs[..i].iter().any(|(k2, v2)| close(*k, *k2) || close(*v, *v2)) {
                return Err(Error::OutOfRange("scalar table is not injective".into()));
            }
        }
        for (_, v) in pairs {
            if !pairs.iter().any(|(k, _)| close(*k, *v)) {
                return Err(Error::OutOfRange(format!("table value {v} is not in its support")));
            }
        }
        Ok(())
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        match self {
            ScalarFunction::Identity => z,
            ScalarFunction::Conjugation => z.conj(),
            ScalarFunction::InverseOrZero => {
                if z == Complex64::default() {
                    z
                } else {
                    z.inv()
                }
            }
            ScalarFunction::Table { pairs } => pairs
                .iter()
                .find(|(k, _)| (z - k).norm() <= HIT_TOL * k.norm().max(1.0))
                .map_or(z, |(_, v)| *v),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            ScalarFunction::Table { pairs } => {
                ScalarFunction::Table { pairs: pairs.iter().map(|(k, v)| (*v, *k)).collect() }
            }
            f => f.clone(),
        }
    }
}

/// How a linear recipe interacts with multiplication by `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linearity {
    Complex,
    Conjugate,
    Real,
}

/// Pointwise edits layered under a base map.
#[derive(Debug, Clone)]
pub enum Modification {
    /// `x ↦ x + ε‖x‖d`.
    NormShift { eps: f64, d: SumElement },
    /// Inverse of `NormShift`, solved by fixed-point iteration.
    NormShiftInverse { eps: f64, d: SumElement },
    /// Exchanges each listed pair of points.
    PointSwaps(Vec<(SumElement, SumElement)>),
}

impl Modification {
    fn apply(&self, x: &SumElement) -> Result<SumElement> {
        match self {
            Modification::NormShift { eps, d } => Ok(x.plus(&d.real(eps * x.norm()))),
            Modification::NormShiftInverse { eps, d } => {
                let mut z = x.clone();
                for _ in 0..200 {
                    let next = x.minus(&d.real(eps * z.norm()));
                    let done = next.max_abs_diff(&z) <= 1e-15 * x.max_abs().max(1.0);
                    z = next;
                    if done {
                        return Ok(z);
                    }
                }
                Err(Error::Inconsistency("norm-shift inverse did not converge".into()))
            }
            Modification::PointSwaps(pairs) => {
                for (p, q) in pairs {
                    if hits(x, p) {
                        return Ok(q.clone());
                    }
                    if hits(x, q) {
                        return Ok(p.clone());
                    }
                }
                Ok(x.clone())
            }
        }
    }

    fn inverse(&self) -> Self {
        match self {
            Modification::NormShift { eps, d } => Modification::NormShiftInverse { eps: *eps, d: d.clone() },
            Modification::NormShiftInverse { eps, d } => Modification::NormShift { eps: *eps, d: d.clone() },
            Modification::PointSwaps(p) => Modification::PointSwaps(p.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Recipe {
    /// Real-linear operator on the doubled real coordinates, with its inverse.
    Linear { matrix: RealMatrix, inverse: RealMatrix, kind: Linearity },
    /// Domain factor `i` is sent to codomain factor `sigma[i]` by `parts[i]`.
    FactorPermuted { sigma: Vec<usize>, parts: Vec<PreserverMap> },
    /// `λe ↦ f(λ)e` on the line through the minimal tripotent `e`, identity elsewhere.
    Gauge { e: SumElement, f: ScalarFunction },
    /// `base ∘ modification`.
    Perturb { base: Box<PreserverMap>, modification: Modification },
    /// Applied left to right.
    Composite(Vec<PreserverMap>),
}

/// Special inputs of a map, used to aim the samplers.
#[derive(Debug, Clone)]
pub enum Probe {
    Line(SumElement),
    Point(SumElement),
}

#[derive(Debug, Clone)]
pub struct PreserverMap {
    pub name: String,
    pub domain: SumSpace,
    pub codomain: SumSpace,
    pub recipe: Recipe,
}

impl PreserverMap {
    pub fn apply(&self, x: &SumElement) -> Result<SumElement> {
        if x.space() != self.domain {
            return Err(Error::FactorMismatch { left: self.domain.to_string(), right: x.space().to_string() });
        }
        match &self.recipe {
            Recipe::Linear { matrix, .. } => Ok(self.codomain.zero().from_real_like(&(matrix * x.to_real()))),
            Recipe::FactorPermuted { sigma, parts } => {
                let mut out: Vec<Option<Element>> = vec![None; sigma.len()];
                for (i, part) in parts.iter().enumerate() {
                    let y = part.apply(&SumElement::single(x.part(i).clone()))?;
                    out[sigma[i]] = Some(y.into_parts().remove(0));
                }
                SumElement::new(out.into_iter().map(|p| p.expect("sigma is a bijection")).collect())
            }
            Recipe::Gauge { e, f } => {
                let lambda = x.inner(e) / e.inner(e);
                if hits(x, &e.scale(lambda)) {
                    Ok(e.scale(f.apply(lambda)))
                } else {
                    Ok(x.clone())
                }
            }
            Recipe::Perturb { base, modification } => base.apply(&modification.apply(x)?),
            Recipe::Composite(maps) => maps.iter().try_fold(x.clone(), |acc, m| m.apply(&acc)),
        }
    }

    pub fn invert(&self) -> PreserverMap {
        let recipe = match &self.recipe {
            Recipe::Linear { matrix, inverse, kind } => {
                Recipe::Linear { matrix: inverse.clone(), inverse: matrix.clone(), kind: *kind }
            }
            Recipe::FactorPermuted { sigma, parts } => {
                let mut tau = vec![0; sigma.len()];
                for (i, &j) in sigma.iter().enumerate() {
                    tau[j] = i;
                }
                let inv_parts = tau.iter().map(|&i| parts[i].invert()).collect();
                Recipe::FactorPermuted { sigma: tau, parts: inv_parts }
            }
            Recipe::Gauge { e, f } => Recipe::Gauge { e: e.clone(), f: f.inverse() },
            Recipe::Perturb { base, modification } => {
                let undo = PreserverMap {
                    name: String::new(),
                    domain: self.domain.clone(),
                    codomain: self.domain.clone(),
                    recipe: Recipe::Perturb {
                        base: Box::new(PreserverMap::identity(self.domain.clone())),
                        modification: modification.inverse(),
                    },
                };
                Recipe::Composite(vec![base.invert(), undo])
            }
            Recipe::Composite(maps) => Recipe::Composite(maps.iter().rev().map(|m| m.invert()).collect()),
        };
        PreserverMap {
            name: format!("inverse of {}", self.name),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            recipe,
        }
    }

    /// Inputs where the map departs from its generic behaviour.
    pub fn probes(&self) -> Vec<Probe> {
        match &self.recipe {
            Recipe::Linear { .. } => Vec::new(),
            Recipe::FactorPermuted { parts, .. } => {
                let mut out = Vec::new();
                for (i, part) in parts.iter().enumerate() {
                    for p in part.probes() {
                        let lift = |x: &SumElement| self.domain.embed(i, x.part(0).clone());
                        match p {
                            Probe::Line(e) => out.extend(lift(&e).ok().map(Probe::Line)),
                            Probe::Point(q) => out.extend(lift(&q).ok().map(Probe::Point)),
                        }
                    }
                }
                out
            }
            Recipe::Gauge { e, .. } => vec![Probe::Line(e.clone())],
            Recipe::Perturb { base, modification } => {
                let mut out = match modification {
                    Modification::PointSwaps(pairs) => {
                        pairs.iter().flat_map(|(p, q)| [Probe::Point(p.clone()), Probe::Point(q.clone())]).collect()
                    }
                    _ => Vec::new(),
                };
                if base.is_linear().is_none() {
                    out.extend(base.probes());
                }
                out
            }
            Recipe::Composite(maps) => {
                let mut out = Vec::new();
                for (k, m) in maps.iter().enumerate() {
                    let pull_back = |x: &SumElement| {
                        maps[..k].iter().rev().try_fold(x.clone(), |acc, p| p.invert().apply(&acc)).ok()
                    };
                    let linear_prefix = maps[..k].iter().all(|p| p.is_linear().is_some());
                    for probe in m.probes() {
                        match probe {
                            Probe::Line(e) if linear_prefix => out.extend(pull_back(&e).map(Probe::Line)),
                            Probe::Line(e) | Probe::Point(e) => out.extend(pull_back(&e).map(Probe::Point)),
                        }
                    }
                }
                out
            }
        }
    }

    /// The linearity of a purely linear recipe.
    pub fn is_linear(&self) -> Option<Linearity> {
        match &self.recipe {
            Recipe::Linear { kind, .. } => Some(*kind),
            _ => None,
        }
    }

    pub fn round_trip_residual(&self, x: &SumElement) -> Result<f64> {
        Ok(self.invert().apply(&self.apply(x)?)?.residual(x))
    }

    // ----- builders --------------------------------------------------------

    pub fn identity(space: SumSpace) -> Self {
        let d = space.real_dim();
        PreserverMap {
            name: "identity".into(),
            domain: space.clone(),
            codomain: space,
            recipe: Recipe::Linear { matrix: DMatrix::identity(d, d), inverse: DMatrix::identity(d, d), kind: Linearity::Complex },
        }
    }

    /// Linear map from an element-level closure; the inverse is computed numerically.
    pub fn from_fn(
        name: impl Into<String>,
        domain: SumSpace,
        codomain: SumSpace,
        kind: Linearity,
        f: impl Fn(&SumElement) -> Result<SumElement>,
    ) -> Result<Self> {
        if domain.real_dim() != codomain.real_dim() {
            return Err(Error::Shape(format!("{domain} and {codomain} have different dimensions")));
        }
        let template = domain.zero();
        let matrix = operator_matrix(&template, |x| {
            let y = f(x)?;
            if y.space() != codomain {
                return Err(Error::FactorMismatch { left: codomain.to_string(), right: y.space().to_string() });
            }
            Ok(template.from_real_like(&y.to_real()))
        })?;
        Self::from_matrix(name, domain, codomain, kind, matrix)
    }

    pub fn from_matrix(name: impl Into<String>, domain: SumSpace, codomain: SumSpace, kind: Linearity, matrix: RealMatrix) -> Result<Self> {
        let d = domain.real_dim();
        if matrix.shape() != (d, d) || codomain.real_dim() != d {
            return Err(Error::Shape(format!("operator must be {d}x{d} on {domain} -> {codomain}")));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let inverse = matrix.clone().try_inverse().ok_or_else(|| Error::NotInvertible("singular operator".into()))?;
        let check = (&matrix * &inverse - DMatrix::<f64>::identity(d, d)).amax();
        if check > 1e-8 {
            return Err(Error::NotInvertible(format!("operator inverse residual {check:.3e}")));
        }
        Ok(PreserverMap { name: name.into(), domain, codomain, recipe: Recipe::Linear { matrix, inverse, kind } })
    }

    /// Single-factor linear map from an element closure.
    pub fn on_factor(
        name: impl Into<String>,
        domain: Factor,
        codomain: Factor,
        kind: Linearity,
        f: impl Fn(&Element) -> Result<Element>,
    ) -> Result<Self> {
        Self::from_fn(name, SumSpace::single(domain), SumSpace::single(codomain), kind, |x| {
            Ok(SumElement::single(f(x.part(0))?))
        })
    }

    /// `x ↦ u x v` on `Rect(m,n)`.
    pub fn unitary_multiplier(factor: Factor, u: ComplexMatrix, v: ComplexMatrix) -> Result<Self> {
        let (m, n) = match factor {
            Factor::Rect { m, n } => (m, n),
            f => return Err(Error::NotInFactor { factor: f.to_string(), reason: "unitary multipliers act on Rect".into() }),
        };
        if u.shape() != (m, m) || v.shape() != (n, n) {
            return Err(Error::Shape(format!("multipliers must be {m}x{m} and {n}x{n}")));
        }
        Self::on_factor("unitary multiplier", factor, factor, Linearity::Complex, |x| {
            Element::from_matrix(factor, &u * x.matrix().expect("matrix") * &v)
        })
    }

    pub fn random_unitary_multiplier<R: Rng + ?Sized>(factor: Factor, rng: &mut R) -> Result<Self> {
        let (m, n) = factor.matrix_shape().filter(|_| matches!(factor, Factor::Rect { .. })).ok_or_else(|| {
            Error::NotInFactor { factor: factor.to_string(), reason: "unitary multipliers act on Rect".into() }
        })?;
        Self::unitary_multiplier(factor, random_unitary(m, rng), random_unitary(n, rng))
    }

    /// `x ↦ xᵀ`; on `Rect(m,n)` the codomain is `Rect(n,m)`.
    pub fn transpose(factor: Factor) -> Result<Self> {
        let codomain = match factor {
            Factor::Rect { m, n } => Factor::Rect { m: n, n: m },
            Factor::Spin { .. } => {
                return Err(Error::NotInFactor { factor: factor.to_string(), reason: "no transpose on a spin factor".into() })
            }
            f => f,
        };
        Self::on_factor("transpose", factor, codomain, Linearity::Complex, |x| {
            Element::from_matrix(codomain, x.matrix().expect("matrix").transpose())
        })
    }

    /// Entrywise complex conjugation.
    pub fn conjugation(factor: Factor) -> Result<Self> {
        Self::on_factor("conjugation", factor, factor, Linearity::Conjugate, |x| Ok(x.conj()))
    }

    /// `x ↦ ω·Ox` on `Spin(n)` with `O` real orthogonal and `|ω| = 1`.
    pub fn spin_orthogonal(factor: Factor, o: RealMatrix, phase: Complex64) -> Result<Self> {
        let Factor::Spin { n } = factor else {
            return Err(Error::NotInFactor { factor: factor.to_string(), reason: "expected a spin factor".into() });
        };
        if o.shape() != (n, n) {
            return Err(Error::Shape(format!("orthogonal matrix must be {n}x{n}")));
        }
        if (o.transpose() * &o - DMatrix::<f64>::identity(n, n)).amax() > 1e-10 || (phase.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange("spin maps need a real orthogonal matrix and a unimodular phase".into()));
        }
        let oc = o.map(Complex64::from);
        Self::on_factor("spin orthogonal", factor, factor, Linearity::Complex, |x| {
            Element::spin(&oc * x.vector().expect("vector") * phase)
        })
    }

    pub fn random_spin_orthogonal<R: Rng + ?Sized>(factor: Factor, rng: &mut R) -> Result<Self> {
        let Factor::Spin { n } = factor else {
            return Err(Error::NotInFactor { factor: factor.to_string(), reason: "expected a spin factor".into() });
        };
        let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        Self::spin_orthogonal(factor, random_orthogonal(n, rng), phase)
    }

    /// `x ↦ u x uᵀ` on `Sym(n)` or `Antisym(n)`.
    pub fn congruence(factor: Factor, u: ComplexMatrix) -> Result<Self> {
        let n = match factor {
            Factor::Sym { n } | Factor::Antisym { n } => n,
            f => return Err(Error::NotInFactor { factor: f.to_string(), reason: "congruence acts on Sym or Antisym".into() }),
        };
        if u.shape() != (n, n) {
            return Err(Error::Shape(format!("congruence matrix must be {n}x{n}")));
        }
        Self::on_factor("congruence", factor, factor, Linearity::Complex, |x| {
            Element::from_matrix(factor, &u * x.matrix().expect("matrix") * u.transpose())
        })
    }

    pub fn random_congruence<R: Rng + ?Sized>(factor: Factor, rng: &mut R) -> Result<Self> {
        let n = factor.matrix_shape().map(|s| s.0).unwrap_or(0);
        Self::congruence(factor, random_unitary(n.max(1), rng))
    }

    /// Conjugates one complex coordinate and fixes the others: real-linear,
    /// neither linear nor conjugate-linear.
    pub fn coordinate_conjugation(factor: Factor, index: usize) -> Result<Self> {
        if index >= factor.complex_dim() {
            return Err(Error::OutOfRange(format!("{factor} has {} coordinates", factor.complex_dim())));
        }
        Self::on_factor("coordinate conjugation", factor, factor, Linearity::Real, |x| {
            let mut c = x.coords();
            c[index] = c[index].conj();
            Element::from_coords(factor, &c)
        })
    }

    /// Swaps the images of `e₁₂` and `e₂₂` on `Rect(2,2)`.
    pub fn peirce_swap() -> Result<Self> {
        let f = Factor::Rect { m: 2, n: 2 };
        Self::on_factor("peirce swap", f, f, Linearity::Complex, |x| {
            let mut m = x.matrix().expect("matrix").clone();
            m.swap((0, 1), (1, 1));
            Element::from_matrix(f, m)
        })
    }

    /// `⊕ parts[i]` with factor `i` sent to slot `sigma[i]`.
    pub fn factor_permuted(sigma: Vec<usize>, parts: Vec<PreserverMap>) -> Result<Self> {
        if sigma.len() != parts.len() || sigma.is_empty() {
            return Err(Error::Shape("one part per factor is required".into()));
        }
        let mut seen = vec![false; sigma.len()];
        for &j in &sigma {
            if j >= sigma.len() || seen[j] {
                return Err(Error::OutOfRange("sigma is not a permutation".into()));
            }
            seen[j] = true;
        }
        let mut dom = Vec::new();
        let mut cod = vec![None; sigma.len()];
        for (i, p) in parts.iter().enumerate() {
            if p.domain.len() != 1 || p.codomain.len() != 1 {
                return Err(Error::Shape("parts must act on single factors".into()));
            }
            dom.push(p.domain.factors()[0]);
            cod[sigma[i]] = Some(p.codomain.factors()[0]);
        }
        let name = format!("sum({})", parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(", "));
        Ok(PreserverMap {
            name,
            domain: SumSpace::new(dom)?,
            codomain: SumSpace::new(cod.into_iter().map(|c| c.expect("filled")).collect())?,
            recipe: Recipe::FactorPermuted { sigma, parts },
        })
    }

    pub fn direct_sum(parts: Vec<PreserverMap>) -> Result<Self> {
        Self::factor_permuted((0..parts.len()).collect(), parts)
    }

    /// Exchanges two copies of the same factor.
    pub fn factor_swap(factor: Factor) -> Result<Self> {
        let id = || PreserverMap::identity(SumSpace::single(factor));
        let mut m = Self::factor_permuted(vec![1, 0], vec![id(), id()])?;
        m.name = "factor swap".into();
        Ok(m)
    }

    /// `λe ↦ f(λ)e` on the line of the minimal tripotent `e`.
    pub fn gauge(space: SumSpace, e: SumElement, f: ScalarFunction, tol: &Tolerance) -> Result<Self> {
        f.validate()?;
        if e.space() != space {
            return Err(Error::FactorMismatch { left: space.to_string(), right: e.space().to_string() });
        }
        let t = crate::lattice::Tripotent::new(e.clone(), tol)?;
        if !t.is_minimal()? {
            return Err(Error::NotMinimal(t.peirce()?.complex_dims()[2]));
        }
        let name = format!("gauge {f:?}");
        Ok(PreserverMap { name, domain: space.clone(), codomain: space, recipe: Recipe::Gauge { e, f } })
    }

    /// `λ ↦ λ⁻¹` on the line `ℂe₁₁` of `Rect(m,n)`.
    pub fn inverse_gauge_e11(factor: Factor, tol: &Tolerance) -> Result<Self> {
        let (m, n) = factor
            .matrix_shape()
            .filter(|_| matches!(factor, Factor::Rect { .. }))
            .ok_or_else(|| Error::NotInFactor { factor: factor.to_string(), reason: "expected Rect".into() })?;
        let e = SumElement::single(Element::matrix_unit(m, n, 0, 0));
        Self::gauge(SumSpace::single(factor), e, ScalarFunction::InverseOrZero, tol)
    }

    /// `x ↦ x + ε‖x‖d`, then `base`.
    pub fn norm_shift(base: PreserverMap, eps: f64, d: SumElement) -> Result<Self> {
        if d.space() != base.domain {
            return Err(Error::FactorMismatch { left: base.domain.to_string(), right: d.space().to_string() });
        }
        if !(eps.is_finite() && eps * d.norm() < 1.0) {
            return Err(Error::NotInvertible("norm shift needs ε‖d‖ < 1".into()));
        }
        Ok(PreserverMap {
            name: format!("norm shift {eps}"),
            domain: base.domain.clone(),
            codomain: base.codomain.clone(),
            recipe: Recipe::Perturb { base: Box::new(base), modification: Modification::NormShift { eps, d } },
        })
    }

    /// Exchanges the listed points, then `base`.
    pub fn point_swaps(base: PreserverMap, pairs: Vec<(SumElement, SumElement)>) -> Result<Self> {
        for (i, (p, q)) in pairs.iter().enumerate() {
            if p.space() != base.domain || q.space() != base.domain {
                return Err(Error::FactorMismatch { left: base.domain.to_string(), right: p.space().to_string() });
            }
            if hits(p, q) {
                return Err(Error::OutOfRange("a point cannot be swapped with itself".into()));
            }
            let clash = |x: &SumElement| pairs[..i].iter().any(|(a, b)| hits(x, a) || hits(x, b));
            if clash(p) || clash(q) {
                return Err(Error::NotInvertible("swapped points overlap".into()));
            }
        }
        Ok(PreserverMap {
            name: "point swaps".into(),
            domain: base.domain.clone(),
            codomain: base.codomain.clone(),
            recipe: Recipe::Perturb { base: Box::new(base), modification: Modification::PointSwaps(pairs) },
        })
    }

    pub fn compose(maps: Vec<PreserverMap>) -> Result<Self> {
        let first = maps.first().ok_or_else(|| Error::Shape("empty composition".into()))?;
        for w in maps.windows(2) {
            if w[0].codomain != w[1].domain {
                return Err(Error::FactorMismatch { left: w[0].codomain.to_string(), right: w[1].domain.to_string() });
            }
        }
        let last = maps.last().expect("nonempty");
        Ok(PreserverMap {
            name: maps.iter().map(|m| m.name.as_str()).collect::<Vec<_>>().join(" then "),
            domain: first.domain.clone(),
            codomain: last.codomain.clone(),
            recipe: Recipe::Composite(maps.clone()),
        })
    }
}

/// `e₁₁` embedded in a one-factor space of matrices.
pub fn e11(factor: Factor) -> Result<SumElement> {
    let (m, n) = factor.matrix_shape().ok_or_else(|| Error::NotInFactor {
        factor: factor.to_string(),
        reason: "expected a matrix factor".into(),
    })?;
    match factor {
        Factor::Rect { .. } | Factor::Sym { .. } => {
            let mut a = ComplexMatrix::zeros(m, n);
            a[(0, 0)] = ONE;
            Ok(SumElement::single(Element::from_matrix(factor, a)?))
        }
        _ => Err(Error::NotInFactor { factor: factor.to_string(), reason: "no diagonal units".into() }),
    }
}
