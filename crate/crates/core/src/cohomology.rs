//! The complex `(Λ̃(M), d_s)` in degrees 2 → 3 → 4.
//!
//! `Λ̃_p` is the `k`-invariant part of `∧^p m` on which the Chevalley
//! involution acts by `(−1)^{p+1}`; `d_s(v) = proj_m [[s̃, v]]`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, LinalgError};
use crate::multivec::{schouten, Multivector};
use crate::poisson::{self, PhiPoissonSolution, PoissonError};
use crate::quasiroot::{InvariantBasis, MlaModel, ModelError};
use crate::rootsys::{e8_from_chain_picture, Family, E8_TRIVALENT_NODE};

/// Basis expansions must reproduce the image to this accuracy.
pub const EXPANSION_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum CohomologyError {
    #[error("image of a degree-{degree} basis vector is outside the invariant span (residual {residual:e})")]
    ImageNotInSpan { degree: usize, residual: f64 },
    #[error("model is not E8 at the branch node with l = 6")]
    NotE8Level6,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
}

/// `Λ̃_2, Λ̃_3, Λ̃_4` of one model; independent of the chosen solution.
#[derive(Debug, Clone)]
pub struct InvariantComplex {
    pub basis2: InvariantBasis,
    pub basis3: InvariantBasis,
    pub basis4: InvariantBasis,
}

impl InvariantComplex {
    pub fn build(model: &MlaModel) -> Result<Self, ModelError> {
        let (b2, (b3, b4)) = rayon::join(
            || model.invariant_subspace(2, -1),
            || {
                rayon::join(
                    || model.invariant_subspace(3, 1),
                    || model.invariant_subspace(4, -1),
                )
            },
        );
        Ok(Self {
            basis2: b2?,
            basis3: b3?,
            basis4: b4?,
        })
    }
}

type Matrix = Vec<Vec<Complex64>>;

#[derive(Debug, Clone)]
pub struct ComplexSlice {
    pub model: MlaModel,
    pub solution: PhiPoissonSolution,
    pub bases: InvariantComplex,
    pub s: Multivector<Complex64>,
    /// `dim Λ̃_3 × dim Λ̃_2`.
    pub d2: Matrix,
    /// `dim Λ̃_4 × dim Λ̃_3`.
    pub d3: Matrix,
    /// Largest basis-expansion residual met while assembling `d2`, `d3`.
    pub expansion_residual: f64,
}

fn to_map(v: &Multivector<Complex64>) -> BTreeMap<Vec<u16>, Complex64> {
    v.terms().map(|(m, c)| (m.factors().to_vec(), *c)).collect()
}

pub fn d_s(model: &MlaModel, s: &Multivector<Complex64>, v: &Multivector<Complex64>) -> Multivector<Complex64> {
    model.project_to_m(&schouten(model.sc(), s, v))
}

/// Matrix of `d_s` from `source` to `target`; columns are coordinates.
fn coboundary_matrix(
    model: &MlaModel,
    s: &Multivector<Complex64>,
    source: &InvariantBasis,
    target: &InvariantBasis,
) -> Result<(Matrix, f64), CohomologyError> {
    let tcols: Vec<_> = target.vectors.iter().map(|v| to_map(&v.to_complex())).collect();
    let mut m = vec![vec![Complex64::zero(); source.dim()]; target.dim()];
    let mut worst = 0.0f64;
    for (j, v) in source.vectors.iter().enumerate() {
        let img = d_s(model, s, &v.to_complex());
        let (x, res) = linalg::least_squares(&tcols, &to_map(&img))?;
        let scale = img.norm_inf().max(1.0);
        if res > EXPANSION_TOL * scale {
            return Err(CohomologyError::ImageNotInSpan {
                degree: source.degree,
                residual: res,
            });
        }
        worst = worst.max(res);
        for (i, xi) in x.into_iter().enumerate() {
            m[i][j] = xi;
        }
    }
    Ok((m, worst))
}

impl ComplexSlice {
    pub fn build(model: &MlaModel, bases: &InvariantComplex, solution: &PhiPoissonSolution) -> Result<Self, CohomologyError> {
        let s = poisson::invariant_bivector(model, &solution.family)?;
        let (d2, r2) = coboundary_matrix(model, &s, &bases.basis2, &bases.basis3)?;
        let (d3, r3) = coboundary_matrix(model, &s, &bases.basis3, &bases.basis4)?;
        Ok(Self {
            model: model.clone(),
            solution: solution.clone(),
            bases: bases.clone(),
            s,
            d2,
            d3,
            expansion_residual: r2.max(r3),
        })
    }

    pub fn d_s(&self, v: &Multivector<Complex64>) -> Multivector<Complex64> {
        d_s(&self.model, &self.s, v)
    }

    /// `max ‖d_s d_s v‖∞` over the basis of `Λ̃_2`, evaluated on multivectors.
    pub fn ds_square_residual(&self) -> f64 {
        self.bases
            .basis2
            .vectors
            .iter()
            .map(|v| self.d_s(&self.d_s(&v.to_complex())).norm_inf())
            .fold(0.0, f64::max)
    }

    /// `max |d3 · d2|` entrywise.
    pub fn matrix_square_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for row in &self.d3 {
            for j in 0..self.bases.basis2.dim() {
                let v: Complex64 = row.iter().enumerate().map(|(k, a)| a * self.d2[k][j]).sum();
                worst = worst.max(v.norm());
            }
        }
        worst
    }

    /// Least-squares `λ` with `d_s(s̃) ≈ λ κ² φ̃`; `None` when `φ̃ = 0`.
    pub fn ds_s_factor(&self) -> Result<Option<(Complex64, f64)>, CohomologyError> {
        let k2 = self.solution.family.kappa.powi(2);
        let phi = poisson::phi_tilde(&self.model)?.to_complex().scale(&Complex64::new(k2, 0.0));
        if phi.is_zero() {
            return Ok(None);
        }
        let img = self.d_s(&self.s);
        let (x, res) = linalg::least_squares(&[to_map(&phi)], &to_map(&img))?;
        Ok(Some((x[0], res)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyDims {
    pub dim2: usize,
    pub dim3: usize,
    pub dim4: usize,
    pub rank_d2: usize,
    pub rank_d3: usize,
    pub h2: usize,
    pub h3: usize,
}

pub fn cohomology_dims(slice: &ComplexSlice) -> Result<CohomologyDims, CohomologyError> {
    let dim2 = slice.bases.basis2.dim();
    let dim3 = slice.bases.basis3.dim();
    let dim4 = slice.bases.basis4.dim();
    let rank_d2 = linalg::complex_rank(&slice.d2)?;
    let rank_d3 = linalg::complex_rank(&slice.d3)?;
    Ok(CohomologyDims {
        dim2,
        dim3,
        dim4,
        rank_d2,
        rank_d3,
        h2: dim2 - rank_d2,
        h3: dim3 - rank_d3 - rank_d2,
    })
}

// ---------------------------------------------------------------- E8 lemma

/// The four roots of the nonvanishing check, in the chain/branch picture.
pub const E8_BETA: ([i32; 7], i32) = ([0, 1, 2, 1, 1, 0, 0], 1);
pub const E8_GAMMA: ([i32; 7], i32) = ([1, 2, 2, 2, 2, 2, 1], 1);
pub const E8_EPSILON: ([i32; 7], i32) = ([-1, -2, -3, -3, -3, -2, -1], -2);
pub const E8_ZETA: ([i32; 7], i32) = ([0, -1, -1, 0, 0, 0, 0], 0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct E8LemmaReport {
    pub all_roots: bool,
    pub sum_zero: bool,
    pub beta_plus_gamma_root: bool,
    pub beta_plus_zeta_root: bool,
    pub gamma_plus_epsilon_root: bool,
    pub gamma_plus_zeta_not_root: bool,
    pub beta_plus_epsilon_not_root: bool,
    /// Residual of `υ̃` against the span of `Λ̃_3`.
    pub upsilon_span_residual: f64,
    pub ds_upsilon_norm: f64,
    /// Coefficient of `X_β∧X_γ∧X_ε∧X_ζ` in `d_s(υ̃)`.
    pub coefficient: (f64, f64),
    /// `coefficient / (N_{βζ} c_2)`.
    pub coefficient_ratio: (f64, f64),
}

impl E8LemmaReport {
    pub fn membership_ok(&self) -> bool {
        self.all_roots
            && self.sum_zero
            && self.beta_plus_gamma_root
            && self.beta_plus_zeta_root
            && self.gamma_plus_epsilon_root
            && self.gamma_plus_zeta_not_root
            && self.beta_plus_epsilon_not_root
    }

    pub fn passed(&self) -> bool {
        let c = Complex64::new(self.coefficient.0, self.coefficient.1);
        self.membership_ok()
            && self.upsilon_span_residual < EXPANSION_TOL
            && self.ds_upsilon_norm > 1e-6
            && c.norm() > 1e-6
    }
}

/// Part of `φ̃` on the class types `{1,1,4}` and `{5,5,2}`.
pub fn upsilon(model: &MlaModel) -> Result<Multivector<Complex64>, ModelError> {
    let l = model.level();
    let phi = poisson::phi_tilde(model)?;
    let keep = |m: &crate::multivec::Monomial| {
        let mut cls: Vec<usize> = m.factors().iter().map(|&f| model.class_of(f as usize)).collect();
        cls.sort_unstable();
        cls == [1, 1, l - 2] || cls == [2, l - 1, l - 1]
    };
    let mut out = Multivector::zero(3);
    for (m, c) in phi.terms() {
        if keep(m) {
            out.add_term(m.clone(), crate::scalar::Scalar::to_complex(c));
        }
    }
    Ok(out)
}

pub fn e8_lemma_check(slice: &ComplexSlice) -> Result<E8LemmaReport, CohomologyError> {
    let model = &slice.model;
    let rs = model.sc().root_system();
    let t = rs.lie_type();
    if t.family() != Family::E || t.rank() != 8 || model.alpha() != E8_TRIVALENT_NODE || model.level() != 6 {
        return Err(CohomologyError::NotE8Level6);
    }
    let v = |(c, b): ([i32; 7], i32)| e8_from_chain_picture(c, b);
    let (b, g, e, z) = (v(E8_BETA), v(E8_GAMMA), v(E8_EPSILON), v(E8_ZETA));
    let add = |x: &[i32], y: &[i32]| -> Vec<i32> { x.iter().zip(y).map(|(a, b)| a + b).collect() };
    let is_root = |x: &[i32]| rs.index_of(x).is_some();
    let total = add(&add(&b, &g), &add(&e, &z));
    let all_roots = [&b, &g, &e, &z].iter().all(|x| is_root(x));
    let ups = upsilon(model)?;
    let basis3: Vec<_> = slice.bases.basis3.vectors.iter().map(|x| to_map(&x.to_complex())).collect();
    let (_, span_res) = linalg::least_squares(&basis3, &to_map(&ups))?;
    let img = slice.d_s(&ups);
    let (coefficient, ratio) = if all_roots {
        let idx: Vec<usize> = [&b, &g, &e, &z].iter().map(|x| rs.index_of(x).unwrap()).collect();
        let c = img.coefficient_of(&idx);
        let n_bz = model.sc().n(idx[0], idx[3]) as f64;
        let c2 = slice.solution.family.c[2];
        let ratio = if n_bz != 0.0 && c2.norm() > 0.0 { c / (c2 * n_bz) } else { Complex64::zero() };
        (c, ratio)
    } else {
        (Complex64::zero(), Complex64::zero())
    };
    Ok(E8LemmaReport {
        all_roots,
        sum_zero: total.iter().all(|&x| x == 0),
        beta_plus_gamma_root: is_root(&add(&b, &g)),
        beta_plus_zeta_root: is_root(&add(&b, &z)),
        gamma_plus_epsilon_root: is_root(&add(&g, &e)),
        gamma_plus_zeta_not_root: !is_root(&add(&g, &z)),
        beta_plus_epsilon_not_root: !is_root(&add(&b, &e)),
        upsilon_span_residual: span_res,
        ds_upsilon_norm: img.norm_inf(),
        coefficient: (coefficient.re, coefficient.im),
        coefficient_ratio: (ratio.re, ratio.im),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::StructureConstants;
    use crate::poisson::{solve_phi_poisson, Tolerances};
    use crate::rootsys::{RootSystem, SimpleLieType};
    use std::sync::Arc;

    fn model(t: &str, node: usize, l: usize) -> MlaModel {
        let t: SimpleLieType = t.parse().unwrap();
        let sc = Arc::new(StructureConstants::build(Arc::new(RootSystem::build(t))));
        MlaModel::build(sc, node, l).unwrap()
    }

    #[test]
    fn g2_level_three() {
        let m = model("G2", 0, 3);
        let bases = InvariantComplex::build(&m).unwrap();
        for sol in solve_phi_poisson(&m, 1.0, Tolerances::default()).unwrap() {
            let slice = ComplexSlice::build(&m, &bases, &sol).unwrap();
            assert_eq!((slice.d2.len(), slice.d2[0].len()), (1, 1));
            assert!(slice.d2[0][0].norm() > 1e-6);
            let dims = cohomology_dims(&slice).unwrap();
            assert_eq!((dims.h2, dims.h3), (0, 0));
            let (f, res) = slice.ds_s_factor().unwrap().unwrap();
            assert!(res < 1e-12 && (f - 1.0).norm() < 1e-12, "{f} {res}");
        }
    }

    #[test]
    fn level_two_is_empty() {
        let m = model("G2", 1, 2);
        let bases = InvariantComplex::build(&m).unwrap();
        let sol = &solve_phi_poisson(&m, 1.0, Tolerances::default()).unwrap()[0];
        let slice = ComplexSlice::build(&m, &bases, sol).unwrap();
        assert!(slice.d2.is_empty());
        assert!(slice.ds_s_factor().unwrap().is_none());
    }

    #[test]
    fn e8_check_rejects_other_models() {
        let m = model("G2", 0, 3);
        let bases = InvariantComplex::build(&m).unwrap();
        let sol = &solve_phi_poisson(&m, 1.0, Tolerances::default()).unwrap()[0];
        let slice = ComplexSlice::build(&m, &bases, sol).unwrap();
        assert_eq!(e8_lemma_check(&slice).unwrap_err(), CohomologyError::NotE8Level6);
    }
}
