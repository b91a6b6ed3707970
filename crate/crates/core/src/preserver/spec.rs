//! JSON map recipes.
//!
//! ```json
//! {"recipe": "linear", "factor": {"kind": "rect", "m": 2, "n": 2},
//!  "op": {"kind": "unitary_multiplier", "seed": 7}}
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{AnyElement, Element, Factor, SumElement, SumSpace};
use crate::numerics::{random_orthogonal, random_unitary, ComplexMatrix, Tolerance};
use crate::preserver::map::{e11, Linearity, PreserverMap, ScalarFunction};

type RawMatrix = Vec<Vec<[f64; 2]>>;

fn complex_matrix(raw: &RawMatrix) -> Result<ComplexMatrix> {
    let rows = raw.len();
    let cols = raw.first().map_or(0, |r| r.len());
    if rows == 0 || raw.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("matrix rows must be nonempty and of equal length".into()));
    }
    let flat: Vec<Complex64> = raw.iter().flatten().map(|p| Complex64::new(p[0], p[1])).collect();
    Ok(ComplexMatrix::from_row_slice(rows, cols, &flat))
}

fn real_matrix(raw: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let rows = raw.len();
    let cols = raw.first().map_or(0, |r| r.len());
    if rows == 0 || raw.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("matrix rows must be nonempty and of equal length".into()));
    }
    Ok(DMatrix::from_row_iterator(rows, cols, raw.iter().flatten().copied()))
}

/// A named linear operation on one factor. Missing matrices are drawn from
/// `seed` (default 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OpSpec {
    Identity,
    UnitaryMultiplier {
        u: Option<RawMatrix>,
        v: Option<RawMatrix>,
        seed: Option<u64>,
    },
    Transpose,
    SpinOrthogonal {
        o: Option<Vec<Vec<f64>>>,
        phase: Option<Complex64>,
        seed: Option<u64>,
    },
    Congruence {
        u: Option<RawMatrix>,
        seed: Option<u64>,
    },
    CoordinateConjugation {
        index: usize,
    },
    PeirceSwap,
    /// Explicit operator on the interleaved real coordinates.
    Matrix {
        matrix: Vec<Vec<f64>>,
        linearity: Linearity,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModificationSpec {
    /// `x ↦ x + ε‖x‖d`; `d` defaults to `e₁₁`.
    NormShift { eps: f64, direction: Option<AnyElement> },
    PointSwaps { pairs: Vec<(AnyElement, AnyElement)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Linear {
        factor: Factor,
        op: OpSpec,
    },
    /// `op` followed by entrywise conjugation.
    Conjlinear {
        factor: Factor,
        op: OpSpec,
    },
    /// `λe ↦ f(λ)e` on the line of `line` (default `e₁₁`, or `1` on `ℂ`).
    Gauge {
        factor: Factor,
        line: Option<AnyElement>,
        function: ScalarFunction,
    },
    Perturb {
        base: Box<MapSpec>,
        modification: ModificationSpec,
    },
    /// Factor `i` goes to slot `sigma[i]` (identity permutation by default).
    Sum {
        parts: Vec<MapSpec>,
        sigma: Option<Vec<usize>>,
    },
    Compose {
        maps: Vec<MapSpec>,
    },
}

fn rng_for(seed: Option<u64>) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.unwrap_or(0))
}

impl OpSpec {
    pub fn build(&self, factor: Factor) -> Result<PreserverMap> {
        factor.validate()?;
        match self {
            OpSpec::Identity => Ok(PreserverMap::identity(SumSpace::single(factor))),
            OpSpec::UnitaryMultiplier { u, v, seed } => {
                let (m, n) = factor.matrix_shape().unwrap_or((0, 0));
                let mut rng = rng_for(*seed);
                let u = match u {
                    Some(raw) => complex_matrix(raw)?,
                    None => random_unitary(m.max(1), &mut rng),
                };
                let v = match v {
                    Some(raw) => complex_matrix(raw)?,
                    None => random_unitary(n.max(1), &mut rng),
                };
                check_unitary(&u)?;
                check_unitary(&v)?;
                PreserverMap::unitary_multiplier(factor, u, v)
            }
            OpSpec::Transpose => PreserverMap::transpose(factor),
            OpSpec::SpinOrthogonal { o, phase, seed } => {
                let mut rng = rng_for(*seed);
                let o = match o {
                    Some(raw) => real_matrix(raw)?,
                    None => random_orthogonal(factor.complex_dim(), &mut rng),
                };
                PreserverMap::spin_orthogonal(factor, o, phase.unwrap_or(Complex64::from(1.0)))
            }
            OpSpec::Congruence { u, seed } => {
                let mut rng = rng_for(*seed);
                let n = factor.matrix_shape().map_or(1, |s| s.0);
                let u = match u {
                    Some(raw) => complex_matrix(raw)?,
                    None => random_unitary(n, &mut rng),
                };
                check_unitary(&u)?;
                PreserverMap::congruence(factor, u)
            }
            OpSpec::CoordinateConjugation { index } => PreserverMap::coordinate_conjugation(factor, *index),
            OpSpec::PeirceSwap => {
                if factor != (Factor::Rect { m: 2, n: 2 }) {
                    return Err(Error::NotInFactor { factor: factor.to_string(), reason: "the Peirce swap acts on Rect(2,2)".into() });
                }
                PreserverMap::peirce_swap()
            }
            OpSpec::Matrix { matrix, linearity } => {
                let space = SumSpace::single(factor);
                PreserverMap::from_matrix("matrix", space.clone(), space, *linearity, real_matrix(matrix)?)
            }
        }
    }
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let n = u.nrows();
    if u.ncols() != n || (u.adjoint() * u - ComplexMatrix::identity(n, n)).camax() > 1e-9 {
        return Err(Error::OutOfRange("matrix is not unitary".into()));
    }
    Ok(())
}

fn default_line(factor: Factor) -> Result<SumElement> {
    match factor {
        Factor::Spin { .. } => {
            let e = (0..factor.complex_dim())
                .map(|k| match k {
                    0 => Complex64::new(0.5, 0.0),
                    1 => Complex64::new(0.0, 0.5),
                    _ => Complex64::default(),
                })
                .collect::<Vec<_>>();
            Ok(SumElement::single(Element::spin_from_slice(&e)?))
        }
        Factor::Antisym { n } => {
            let mut m = ComplexMatrix::zeros(n, n);
            m[(0, 1)] = Complex64::from(1.0);
            m[(1, 0)] = -m[(0, 1)];
            Ok(SumElement::single(Element::from_matrix(factor, m)?))
        }
        f => e11(f),
    }
}

fn in_space(x: &AnyElement, space: &SumSpace) -> Result<SumElement> {
    let s = x.clone().into_sum();
    if &s.space() != space {
        return Err(Error::FactorMismatch { left: space.to_string(), right: s.space().to_string() });
    }
    Ok(s)
}

impl MapSpec {
    pub fn build(&self, tol: &Tolerance) -> Result<PreserverMap> {
        match self {
            MapSpec::Linear { factor, op } => op.build(*factor),
            MapSpec::Conjlinear { factor, op } => {
                let base = op.build(*factor)?;
                let conj = PreserverMap::conjugation(base.codomain.factors()[0])?;
                let mut m = PreserverMap::compose(vec![base, conj])?;
                m.name = format!("conjugate of {}", m.name);
                Ok(m)
            }
            MapSpec::Gauge { factor, line, function } => {
                let space = SumSpace::single(*factor);
                let e = match line {
                    Some(x) => in_space(x, &space)?,
                    None => default_line(*factor)?,
                };
                PreserverMap::gauge(space, e, function.clone(), tol)
            }
            MapSpec::Perturb { base, modification } => {
                let base = base.build(tol)?;
                match modification {
                    ModificationSpec::NormShift { eps, direction } => {
                        let d = match direction {
                            Some(x) => in_space(x, &base.domain)?,
                            None => match base.domain.factors() {
                                [f] => default_line(*f)?,
                                _ => {
                                    let f = base.domain.factors()[0];
                                    base.domain.embed(0, default_line(f)?.into_parts().remove(0))?
                                }
                            },
                        };
                        PreserverMap::norm_shift(base, *eps, d)
                    }
                    ModificationSpec::PointSwaps { pairs } => {
                        let pairs = pairs
                            .iter()
                            .map(|(p, q)| Ok((in_space(p, &base.domain)?, in_space(q, &base.domain)?)))
                            .collect::<Result<Vec<_>>>()?;
                        PreserverMap::point_swaps(base, pairs)
                    }
                }
            }
            MapSpec::Sum { parts, sigma } => {
                let parts = parts.iter().map(|p| p.build(tol)).collect::<Result<Vec<_>>>()?;
                let sigma = sigma.clone().unwrap_or_else(|| (0..parts.len()).collect());
                PreserverMap::factor_permuted(sigma, parts)
            }
            MapSpec::Compose { maps } => {
                PreserverMap::compose(maps.iter().map(|m| m.build(tol)).collect::<Result<Vec<_>>>()?)
            }
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
