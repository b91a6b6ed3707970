//! Truncations, quadratic annihilators, pure atoms and transition values.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{q_operator_matrix, quad, JbElement};
use crate::lattice::{peirce_project, Tripotent};
use crate::numerics::{real_null_space, Tolerance};
use crate::spectral::range_tripotent;

/// `a` is a truncation of `b` iff `{a,a,a} = {a,b,a}`.
pub fn is_truncation<T: JbElement>(a: &T, b: &T, tol: &Tolerance) -> Result<bool> {
    Ok(truncation_residual(a, b)?.0 <= tol.eq_tol)
}

/// Relative residual of `{a,a,a} = {a,b,a}`, with the two sides.
fn truncation_residual<T: JbElement>(a: &T, b: &T) -> Result<(f64, T, T)> {
    let cube = a.cube();
    let aba = quad(a, b)?;
    Ok((cube.residual(&aba), cube, aba))
}

/// `z` lies in the inner quadratic annihilator of `{a}`: `Q(a)(z) = 0`,
/// measured against `max(1, |a|²|z|)`.
pub fn in_inner_annihilator<T: JbElement>(z: &T, a: &T, tol: &Tolerance) -> Result<bool> {
    let w = quad(a, z)?;
    let scale = (a.max_abs().powi(2) * z.max_abs()).max(1.0);
    Ok(w.max_abs() <= tol.eq_tol * scale)
}

/// `z` lies in the outer quadratic annihilator of `set`: `Q(z)(s) = 0` for every `s`.
pub fn in_outer_annihilator<T: JbElement>(z: &T, set: &[T], tol: &Tolerance) -> Result<bool> {
    for s in set {
        let w = quad(z, s)?;
        let scale = (z.max_abs().powi(2) * s.max_abs()).max(1.0);
        if w.max_abs() > tol.eq_tol * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The three equivalent forms of "`a` is a truncation of `b`".
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Characterizations {
    /// `{a,a,a} = {a,b,a}`.
    pub definition: bool,
    /// `b − a` lies in the inner quadratic annihilator of `a`.
    pub decomposition: bool,
    /// `P₂(r(a))(b) = a`.
    pub peirce: bool,
    pub definition_residual: f64,
    pub peirce_residual: f64,
}

impl Characterizations {
    pub fn agree(&self) -> bool {
        self.definition == self.decomposition && self.decomposition == self.peirce
    }
}

/// All three characterizations, without requiring agreement.
pub fn characterize<T: JbElement>(a: &T, b: &T, tol: &Tolerance) -> Result<Characterizations> {
    a.same_space(b)?;
    let (definition_residual, _, _) = truncation_residual(a, b)?;
    let decomposition = in_inner_annihilator(&b.minus(a), a, tol)?;
    let r = range_tripotent(a, tol)?;
    let p = peirce_project(r.element(), 2, b)?;
    let peirce_residual = p.residual(a);
    Ok(Characterizations {
        definition: definition_residual <= tol.eq_tol,
        decomposition,
        peirce: peirce_residual <= tol.eq_tol,
        definition_residual,
        peirce_residual,
    })
}

/// All three characterizations; disagreement is an inconsistency error.
pub fn truncation_characterizations<T: JbElement>(a: &T, b: &T, tol: &Tolerance) -> Result<Characterizations> {
    let c = characterize(a, b, tol)?;
    if !c.agree() {
        return Err(Error::Inconsistency(format!(
            "truncation characterizations disagree: definition={} decomposition={} peirce={} \
             (residuals {:.3e}, {:.3e})",
            c.definition, c.decomposition, c.peirce, c.definition_residual, c.peirce_residual
        )));
    }
    Ok(c)
}

/// Checks `{x : Q(a)(x) = 0} = {x : P₂(r(a))(x) = 0}` on a real basis and by
/// comparing kernels of the materialized operators.
pub fn annihilator_element_formula_check<T: JbElement>(a: &T, tol: &Tolerance) -> Result<bool> {
    let r = range_tripotent(a, tol)?;
    let qa = q_operator_matrix(a, a)?;
    let p2 = &r.peirce()?.projectors[2];
    let ker_q = real_null_space(&qa, tol.eq_tol);
    let ker_p = real_null_space(p2, tol.eq_tol);
    if ker_q.ncols() != ker_p.ncols() {
        return Ok(false);
    }
    // Equal dimensions: the kernels agree iff P₂(r(a)) kills ker Q(a).
    if ker_q.ncols() > 0 && (p2 * &ker_q).amax() > tol.eq_tol.sqrt() {
        return Ok(false);
    }
    let scale = (a.max_abs().powi(2)).max(1.0);
    for x in a.real_basis() {
        let q_zero = quad(a, &x)?.max_abs() <= tol.eq_tol * scale;
        let p_zero = peirce_project(r.element(), 2, &x)?.max_abs() <= tol.eq_tol;
        if q_zero != p_zero {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `a` is a truncation of `Q(b)(c)`.
pub fn truncation_of_triple_product<T: JbElement>(a: &T, b: &T, c: &T, tol: &Tolerance) -> Result<bool> {
    is_truncation(a, &quad(b, c)?, tol)
}

/// Relative residual of `a^[3] = {a, Q(b)(c), a}`.
pub fn triple_truncation_residual<T: JbElement>(a: &T, b: &T, c: &T) -> Result<f64> {
    Ok(truncation_residual(a, &quad(b, c)?)?.0)
}

/// A minimal tripotent `e` with the functional `φ_e` given by `P₂(e)(x) = φ_e(x) e`.
#[derive(Debug, Clone)]
pub struct PureAtom<T> {
    e: Tripotent<T>,
}

impl<T: JbElement> PureAtom<T> {
    pub fn new(e: Tripotent<T>) -> Result<Self> {
        if !e.is_minimal()? {
            return Err(Error::NotMinimal(e.peirce()?.complex_dims()[2]));
        }
        Ok(Self { e })
    }

    pub fn tripotent(&self) -> &Tripotent<T> {
        &self.e
    }

    pub fn phi(&self, x: &T) -> Result<Complex64> {
        let e = self.e.element();
        let y = self.e.project(2, x)?;
        let lambda = y.inner(e) / e.inner(e);
        if !y.approx_eq(&e.scale(lambda), self.e.tolerance()) {
            return Err(Error::Inconsistency("Peirce-2 image is not a multiple of e".into()));
        }
        Ok(lambda)
    }
}

/// `TTP(e, v) = φ_v(e)`.
pub fn ttp<T: JbElement>(e: &Tripotent<T>, v: &Tripotent<T>) -> Result<Complex64> {
    if !e.is_minimal()? {
        return Err(Error::NotMinimal(e.peirce()?.complex_dims()[2]));
    }
    PureAtom::new(v.clone())?.phi(e.element())
}
