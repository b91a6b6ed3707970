//! Odd functional calculus through spectral resolutions `a = Σ σ_k u_k`.

use crate::error::{Error, Result};
use crate::factor::{q_operator_matrix, quad, JbElement};
use crate::lattice::Tripotent;
use crate::numerics::Tolerance;

/// `a = Σ σ_k u_k` with `σ_k` strictly decreasing and `u_k` mutually orthogonal tripotents.
#[derive(Debug, Clone)]
pub struct SpectralResolution<T> {
    pub pieces: Vec<(f64, T)>,
    zero: T,
}

impl<T: JbElement> SpectralResolution<T> {
    pub fn singular_values(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.0).collect()
    }

    pub fn reconstruct(&self) -> T {
        self.apply(|s| s)
    }

    /// `Σ f(σ_k) u_k`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> T {
        self.pieces.iter().fold(self.zero.clone(), |acc, (s, u)| acc.plus(&u.real(f(*s))))
    }

    /// Sum of the pieces whose singular value satisfies `keep`.
    pub fn sum_where(&self, keep: impl Fn(f64) -> bool) -> T {
        self.apply(|s| if keep(s) { 1.0 } else { 0.0 })
    }
}

/// Sorts pieces by decreasing `σ`, drops those below `rank_tol · σ_max` and
/// merges runs whose consecutive gaps are within `rank_tol · σ_max` into one
/// piece carrying the run's mean value.
pub fn merge_pieces<T: JbElement>(mut raw: Vec<(f64, T)>, tol: &Tolerance) -> Vec<(f64, T)> {
    raw.sort_by(|a, b| b.0.total_cmp(&a.0));
    let smax = match raw.first() {
        Some((s, _)) if *s > 0.0 => *s,
        _ => return Vec::new(),
    };
    let cut = tol.rank_tol * smax;
    struct Group<T> {
        sum: f64,
        count: usize,
        last: f64,
        u: T,
    }
    let mut groups: Vec<Group<T>> = Vec::new();
    for (s, u) in raw {
        if s <= cut {
            continue;
        }
        match groups.last_mut() {
            Some(g) if g.last - s <= cut => {
                g.sum += s;
                g.count += 1;
                g.last = s;
                g.u = g.u.plus(&u);
            }
            _ => groups.push(Group { sum: s, count: 1, last: s, u }),
        }
    }
    groups.into_iter().map(|g| (g.sum / g.count as f64, g.u)).collect()
}

pub fn resolve<T: JbElement>(a: &T, tol: &Tolerance) -> Result<SpectralResolution<T>> {
    let res = SpectralResolution { pieces: a.spectral_pieces(tol)?, zero: a.zero_like() };
    let back = res.reconstruct();
    if !back.approx_eq(a, tol) {
        return Err(Error::Inconsistency(format!(
            "spectral reconstruction residual {:.3e}",
            back.residual(a)
        )));
    }
    Ok(res)
}

/// `r(a) = Σ u_k` over all retained pieces.
pub fn range_tripotent<T: JbElement>(a: &T, tol: &Tolerance) -> Result<Tripotent<T>> {
    let r = resolve(a, tol)?.sum_where(|_| true);
    Tripotent::new(r, tol)
}

/// `u(a) = Σ u_k` over pieces with `|σ_k − 1| ≤ eq_tol`.
pub fn support_tripotent<T: JbElement>(a: &T, tol: &Tolerance) -> Result<Tripotent<T>> {
    let u = resolve(a, tol)?.sum_where(|s| (s - 1.0).abs() <= tol.eq_tol);
    Tripotent::new(u, tol)
}

/// `a^[1/3] = Σ σ_k^{1/3} u_k`.
pub fn cube_root<T: JbElement>(a: &T, tol: &Tolerance) -> Result<T> {
    Ok(resolve(a, tol)?.apply(f64::cbrt))
}

/// `a† = Σ σ_k⁻¹ u_k`.
pub fn generalized_inverse<T: JbElement>(a: &T, tol: &Tolerance) -> Result<T> {
    Ok(resolve(a, tol)?.apply(|s| 1.0 / s))
}

/// Relative residuals of `Q(a)(b) = a`, `Q(b)(a) = b` and `[Q(a), Q(b)] = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseResiduals {
    pub q_a: f64,
    pub q_b: f64,
    pub commutator: f64,
}

impl InverseResiduals {
    pub fn max(&self) -> f64 {
        self.q_a.max(self.q_b).max(self.commutator)
    }
}

pub fn inverse_residuals<T: JbElement>(a: &T, b: &T) -> Result<InverseResiduals> {
    let q_a = quad(a, b)?.residual(a);
    let q_b = quad(b, a)?.residual(b);
    let qa = q_operator_matrix(a, a)?;
    let qb = q_operator_matrix(b, b)?;
    let ab = &qa * &qb;
    let ba = &qb * &qa;
    let scale = ab.amax().max(ba.amax()).max(1.0);
    Ok(InverseResiduals { q_a, q_b, commutator: (&ab - &ba).amax() / scale })
}

/// Von Neumann regularity with the generalized inverse as witness.
///
/// Every element of a finite-dimensional factor is regular, so this only
/// returns `Ok(true, a†)` or an inconsistency error when the witness
/// identities fail.
pub fn is_vn_regular<T: JbElement>(a: &T, tol: &Tolerance) -> Result<(bool, T)> {
    let b = generalized_inverse(a, tol)?;
    let r = inverse_residuals(a, &b)?;
    if r.max() > tol.eq_tol {
        return Err(Error::Inconsistency(format!("regularity witness residual {:.3e}", r.max())));
    }
    Ok((true, b))
}
