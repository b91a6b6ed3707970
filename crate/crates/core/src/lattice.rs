//! Tripotents, Peirce decompositions and the relations between tripotents.

use std::sync::OnceLock;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::factor::{apply_real, l_operator, q_operator_matrix, quad, Element, Factor, JbElement};
use crate::numerics::{ComplexMatrix, RealMatrix, Tolerance, ONE, ZERO};
use crate::spectral::resolve;

pub fn tripotent_residual<T: JbElement>(a: &T) -> f64 {
    a.cube().residual(a)
}

pub fn is_tripotent<T: JbElement>(a: &T, tol: &Tolerance) -> bool {
    a.cube().approx_eq(a, tol)
}

/// Peirce projection `P_j(e)(x)` for `j ∈ {0,1,2}` from the operator identities
/// `P₂ = Q(e)²`, `P₁ = 2(L(e,e) − Q(e)²)`, `P₀ = Id − 2L(e,e) + Q(e)²`.
pub fn peirce_project<T: JbElement>(e: &T, j: usize, x: &T) -> Result<T> {
    let q2 = quad(e, &quad(e, x)?)?;
    let l = T::triple(e, e, x)?;
    Ok(match j {
        2 => q2,
        1 => l.minus(&q2).real(2.0),
        0 => x.minus(&l.real(2.0)).plus(&q2),
        _ => return Err(Error::OutOfRange(format!("Peirce index {j}"))),
    })
}

/// `x ∈ E_j(e)` iff `P_j(e)(x) = x`.
pub fn in_peirce<T: JbElement>(e: &T, j: usize, x: &T, tol: &Tolerance) -> Result<bool> {
    Ok(peirce_project(e, j, x)?.approx_eq(x, tol))
}

/// A validated tripotent with lazily computed Peirce data.
#[derive(Debug, Clone)]
pub struct Tripotent<T> {
    element: T,
    tol: Tolerance,
    peirce: OnceLock<PeirceDecomposition>,
}

impl<T: JbElement> Tripotent<T> {
    pub fn new(e: T, tol: &Tolerance) -> Result<Self> {
        if !is_tripotent(&e, tol) {
            return Err(Error::NotTripotent(tripotent_residual(&e)));
        }
        Ok(Self { element: e, tol: *tol, peirce: OnceLock::new() })
    }

    pub fn element(&self) -> &T {
        &self.element
    }

    pub fn into_element(self) -> T {
        self.element
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    pub fn peirce(&self) -> Result<&PeirceDecomposition> {
        if let Some(p) = self.peirce.get() {
            return Ok(p);
        }
        let p = PeirceDecomposition::compute(&self.element, &self.tol)?;
        Ok(self.peirce.get_or_init(|| p))
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero(&self.tol)
    }

    /// `E₂(e) = ℂe ≠ {0}`.
    pub fn is_minimal(&self) -> Result<bool> {
        Ok(!self.is_zero() && self.peirce()?.complex_dims()[2] == 1)
    }

    /// `E₀(e) = {0}`.
    pub fn is_complete(&self) -> Result<bool> {
        Ok(self.peirce()?.complex_dims()[0] == 0)
    }

    /// `E₂(e)` is the whole space.
    pub fn is_unitary(&self) -> Result<bool> {
        Ok(2 * self.peirce()?.complex_dims()[2] == self.element.real_dim())
    }

    pub fn project(&self, j: usize, x: &T) -> Result<T> {
        peirce_project(&self.element, j, x)
    }

    pub fn jordan(&self) -> JordanStructure<'_, T> {
        JordanStructure { e: &self.element }
    }
}

/// Eigenspace splitting of `L(e,e)` with projectors on real coordinates.
#[derive(Debug, Clone)]
pub struct PeirceDecomposition {
    /// `[P₀, P₁, P₂]`.
    pub projectors: [RealMatrix; 3],
    /// Orthonormal real bases of `[E₀, E₁, E₂]` as matrix columns.
    pub bases: [RealMatrix; 3],
}

impl PeirceDecomposition {
    pub fn compute<T: JbElement>(e: &T, tol: &Tolerance) -> Result<Self> {
        let l = l_operator(e, e)?;
        let sym = (&l + l.transpose()) * 0.5;
        let eig = sym.symmetric_eigen();
        let d = l.nrows();
        let mut cols: [Vec<DVector<f64>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (k, &lam) in eig.eigenvalues.iter().enumerate() {
            let j = [0usize, 1, 2]
                .into_iter()
                .find(|&j| (lam - j as f64 / 2.0).abs() <= tol.eq_tol)
                .ok_or(Error::PeirceInconsistency(lam))?;
            cols[j].push(eig.eigenvectors.column(k).into_owned());
        }
        let bases = cols.map(|c| {
            if c.is_empty() {
                RealMatrix::zeros(d, 0)
            } else {
                RealMatrix::from_columns(&c)
            }
        });
        let projectors = [0, 1, 2].map(|j| &bases[j] * bases[j].transpose());

        let q = q_operator_matrix(e, e)?;
        let q2 = &q * &q;
        let dev = (&projectors[2] - &q2).amax();
        if dev > tol.eq_tol * q2.amax().max(1.0) {
            return Err(Error::Inconsistency(format!("P₂ differs from Q(e)² by {dev:.3e}")));
        }
        Ok(Self { projectors, bases })
    }

    pub fn complex_dims(&self) -> [usize; 3] {
        [0, 1, 2].map(|j| self.bases[j].ncols() / 2)
    }

    pub fn project<T: JbElement>(&self, j: usize, x: &T) -> T {
        apply_real(&self.projectors[j], x)
    }

    /// Real basis of `E_j(e)` as elements shaped like `template`.
    pub fn basis<T: JbElement>(&self, j: usize, template: &T) -> Vec<T> {
        self.bases[j].column_iter().map(|c| template.from_real_like(&c.into_owned())).collect()
    }
}

/// `L(a,b) = 0`, checked on the materialized operator.
pub fn orthogonal<T: JbElement>(a: &T, b: &T, tol: &Tolerance) -> Result<bool> {
    let l = l_operator(a, b)?;
    Ok(l.amax() <= tol.eq_tol * (a.norm() * b.norm()).max(1.0))
}

/// `e ≤ v` iff `v − e` is a tripotent orthogonal to `e`.
pub fn leq<T: JbElement>(e: &Tripotent<T>, v: &Tripotent<T>) -> Result<bool> {
    let tol = e.tolerance();
    e.element().same_space(v.element())?;
    let d = v.element().minus(e.element());
    Ok(is_tripotent(&d, tol) && orthogonal(&d, e.element(), tol)?)
}

/// `u ∈ E₁(v)` and `v ∈ E₁(u)`.
pub fn colinear<T: JbElement>(u: &Tripotent<T>, v: &Tripotent<T>) -> Result<bool> {
    let tol = u.tolerance();
    Ok(in_peirce(v.element(), 1, u.element(), tol)? && in_peirce(u.element(), 1, v.element(), tol)?)
}

/// `u ∈ E₁(v)` and `v ∈ E₂(u)`.
pub fn governs<T: JbElement>(u: &Tripotent<T>, v: &Tripotent<T>) -> Result<bool> {
    let tol = u.tolerance();
    Ok(in_peirce(v.element(), 1, u.element(), tol)? && in_peirce(u.element(), 2, v.element(), tol)?)
}

/// The Jordan *-algebra structure of `E₂(e)`.
#[derive(Debug, Clone, Copy)]
pub struct JordanStructure<'a, T> {
    e: &'a T,
}

impl<'a, T: JbElement> JordanStructure<'a, T> {
    pub fn new(e: &'a T) -> Self {
        Self { e }
    }

    /// `a ∘_e b = {a,e,b}`.
    pub fn circ(&self, a: &T, b: &T) -> Result<T> {
        T::triple(a, self.e, b)
    }

    /// `a^{*_e} = {e,a,e}`.
    pub fn star(&self, a: &T) -> Result<T> {
        T::triple(self.e, a, self.e)
    }

    /// `U_a(x) = 2(a∘x)∘a − a²∘x`.
    pub fn u_op(&self, a: &T, x: &T) -> Result<T> {
        let ax = self.circ(a, x)?;
        let a2 = self.circ(a, a)?;
        Ok(self.circ(&ax, a)?.real(2.0).minus(&self.circ(&a2, x)?))
    }
}

/// `[[α, γ√(α(1−α))], [γ̄√(α(1−α)), 1−α]]` in `Sym(2)` (with `γ = 1`) or `Rect(2,2)`.
pub fn minimal_projection(alpha: f64, gamma: Complex64, factor: Factor, tol: &Tolerance) -> Result<Tripotent<Element>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange(format!("alpha = {alpha} not in [0,1]")));
    }
    if (gamma.norm() - 1.0).abs() > tol.eq_tol {
        return Err(Error::OutOfRange(format!("|gamma| = {} is not 1", gamma.norm())));
    }
    match factor {
        Factor::Sym { n: 2 } if (gamma - ONE).norm() > tol.eq_tol => {
            return Err(Error::OutOfRange("symmetric family needs gamma = 1".into()))
        }
        Factor::Sym { n: 2 } | Factor::Rect { m: 2, n: 2 } => {}
        _ => return Err(Error::OutOfRange(format!("no minimal projection family in {factor}"))),
    }
    let g = gamma * (alpha * (1.0 - alpha)).sqrt();
    let m = ComplexMatrix::from_row_slice(2, 2, &[alpha.into(), g, g.conj(), (1.0 - alpha).into()]);
    Tripotent::new(Element::from_matrix_tol(factor, m, tol)?, tol)
}

/// `[[α, β], [γ, δ]]` with `|α|²+|β|²+|γ|²+|δ|² = 1` and `αδ = βγ`.
pub fn minimal_tripotent_param(
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    delta: Complex64,
    factor: Factor,
    tol: &Tolerance,
) -> Result<Tripotent<Element>> {
    let norm2 = alpha.norm_sqr() + beta.norm_sqr() + gamma.norm_sqr() + delta.norm_sqr();
    if (norm2 - 1.0).abs() > tol.eq_tol {
        return Err(Error::OutOfRange(format!("squared entry norm {norm2} is not 1")));
    }
    if (alpha * delta - beta * gamma).norm() > tol.eq_tol {
        return Err(Error::OutOfRange("alpha*delta != beta*gamma".into()));
    }
    match factor {
        Factor::Sym { n: 2 } if (beta - gamma).norm() > tol.eq_tol => {
            return Err(Error::OutOfRange("symmetric family needs beta = gamma".into()))
        }
        Factor::Sym { n: 2 } | Factor::Rect { m: 2, n: 2 } => {}
        _ => return Err(Error::OutOfRange(format!("no minimal tripotent family in {factor}"))),
    }
    let m = ComplexMatrix::from_row_slice(2, 2, &[alpha, beta, gamma, delta]);
    let t = Tripotent::new(Element::from_matrix_tol(factor, m, tol)?, tol)?;
    if !t.is_minimal()? {
        return Err(Error::NotMinimal(t.peirce()?.complex_dims()[2]));
    }
    Ok(t)
}

/// Four tripotents `v₁..v₄` with `v₁ ⊥ v₃`, `v₂ ⊥ v₄`, cyclic colinearity and
/// `{v₁,v₂,v₃} = ½ v₄`.
#[derive(Debug, Clone)]
pub struct Quadrangle<T> {
    pub v: [Tripotent<T>; 4],
}

impl<T: JbElement> Quadrangle<T> {
    pub fn new(v: [Tripotent<T>; 4]) -> Result<Self> {
        let q = Self { v };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let [v1, v2, v3, v4] = &self.v;
        let tol = v1.tolerance();
        let fail = |what: &str| Err(Error::Inconsistency(format!("quadrangle: {what}")));
        if !orthogonal(v1.element(), v3.element(), tol)? || !orthogonal(v2.element(), v4.element(), tol)? {
            return fail("opposite vertices are not orthogonal");
        }
        for i in 0..4 {
            if !colinear(&self.v[i], &self.v[(i + 1) % 4])? {
                return fail("adjacent vertices are not colinear");
            }
        }
        let t = T::triple(v1.element(), v2.element(), v3.element())?;
        if !t.approx_eq(&v4.element().real(0.5), tol) {
            return fail("{v1,v2,v3} != v4/2");
        }
        Ok(())
    }
}

/// `(v, u, ṽ)` with `v ⊥ ṽ`, `u` governing both and `ṽ = Q(u)(v)`.
#[derive(Debug, Clone)]
pub struct Trangle<T> {
    pub v: Tripotent<T>,
    pub u: Tripotent<T>,
    pub v_tilde: Tripotent<T>,
}

impl<T: JbElement> Trangle<T> {
    pub fn new(v: Tripotent<T>, u: Tripotent<T>, v_tilde: Tripotent<T>) -> Result<Self> {
        let t = Self { v, u, v_tilde };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let tol = self.v.tolerance();
        let fail = |what: &str| Err(Error::Inconsistency(format!("trangle: {what}")));
        if !orthogonal(self.v.element(), self.v_tilde.element(), tol)? {
            return fail("v and v~ are not orthogonal");
        }
        if !governs(&self.u, &self.v)? || !governs(&self.u, &self.v_tilde)? {
            return fail("u does not govern both ends");
        }
        if !quad(self.u.element(), self.v.element())?.approx_eq(self.v_tilde.element(), tol) {
            return fail("Q(u)(v) != v~");
        }
        Ok(())
    }
}

fn unit(f: Factor, entries: [Complex64; 4], tol: &Tolerance) -> Result<Tripotent<Element>> {
    Tripotent::new(Element::from_matrix_tol(f, ComplexMatrix::from_row_slice(2, 2, &entries), tol)?, tol)
}

/// `(e₁₁, e₁₂, e₂₂, e₂₁)` in `Rect(2,2)`.
pub fn canonical_quadrangle(tol: &Tolerance) -> Result<Quadrangle<Element>> {
    let f = Factor::Rect { m: 2, n: 2 };
    Quadrangle::new([
        unit(f, [ONE, ZERO, ZERO, ZERO], tol)?,
        unit(f, [ZERO, ONE, ZERO, ZERO], tol)?,
        unit(f, [ZERO, ZERO, ZERO, ONE], tol)?,
        unit(f, [ZERO, ZERO, ONE, ZERO], tol)?,
    ])
}

/// `(e₁₁, e₁₂ + e₂₁, e₂₂)` in `Sym(2)`.
pub fn canonical_trangle(tol: &Tolerance) -> Result<Trangle<Element>> {
    let f = Factor::Sym { n: 2 };
    Trangle::new(
        unit(f, [ONE, ZERO, ZERO, ZERO], tol)?,
        unit(f, [ZERO, ONE, ONE, ZERO], tol)?,
        unit(f, [ZERO, ZERO, ZERO, ONE], tol)?,
    )
}

/// Tripotents obtained from one random element: every nonempty partial sum of
/// its spectral pieces, each also rotated by a random unimodular phase.
pub fn tripotents_from_resolution<T: JbElement, R: Rng + ?Sized>(
    x: &T,
    rng: &mut R,
    tol: &Tolerance,
) -> Result<Vec<Tripotent<T>>> {
    let pieces: Vec<T> = resolve(x, tol)?.pieces.into_iter().map(|p| p.1).collect();
    let k = pieces.len().min(6);
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        let s = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .fold(x.zero_like(), |acc, i| acc.plus(&pieces[i]));
        let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        out.push(Tripotent::new(s.scale(phase), tol)?);
        out.push(Tripotent::new(s, tol)?);
    }
    Ok(out)
}

/// A pool of tripotents in `template`'s space: zero, spectral partial sums
/// of random elements, and for 2×2 factors the parametrized families.
pub fn tripotent_pool<T: JbElement, R: Rng + ?Sized>(
    template: &T,
    seeds: usize,
    rng: &mut R,
    tol: &Tolerance,
) -> Result<Vec<Tripotent<T>>> {
    let mut pool = vec![Tripotent::new(template.zero_like(), tol)?];
    for _ in 0..seeds {
        let x = template.random_like(rng);
        pool.extend(tripotents_from_resolution(&x, rng, tol)?);
    }
    Ok(pool)
}

/// Pool in a single 2×2 matrix factor, adding the minimal projection families.
pub fn matrix2_pool<R: Rng + ?Sized>(factor: Factor, seeds: usize, rng: &mut R, tol: &Tolerance) -> Result<Vec<Tripotent<Element>>> {
    let mut pool = tripotent_pool(&Element::zero(factor), seeds, rng, tol)?;
    for k in 0..=4 {
        let alpha = k as f64 / 4.0;
        let gamma = match factor {
            Factor::Sym { .. } => ONE,
            _ => Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)),
        };
        pool.push(minimal_projection(alpha, gamma, factor, tol)?);
    }
    Ok(pool)
}

/// A random nonzero tripotent `w ≤ u`, built by resolving a positive
/// invertible element of the Jordan algebra `E₂(u)` and summing a random
/// nonempty subset of its spectral pieces.
pub fn random_subtripotent<T: JbElement, R: Rng + ?Sized>(u: &T, rng: &mut R, tol: &Tolerance) -> Result<T> {
    if u.is_zero(tol) {
        return Ok(u.clone());
    }
    let x = u.random_like(rng);
    let y = peirce_project(u, 2, &x)?;
    let h = y.plus(&quad(u, &y)?).real(0.5);
    let p = h.plus(&u.real(h.norm() + 1.0));
    let pieces: Vec<T> = resolve(&p, tol)?.pieces.into_iter().map(|q| q.1).collect();
    let k = pieces.len();
    let mask = loop {
        let m: u64 = rng.random_range(1..(1u64 << k.min(63)));
        if m != 0 {
            break m;
        }
    };
    Ok((0..k)
        .filter(|i| mask & (1 << i) != 0)
        .fold(u.zero_like(), |acc, i| acc.plus(&pieces[i])))
}
