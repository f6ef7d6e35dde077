//! φ-Poisson bivectors on `M_{lα}` and the Drinfeld–Jimbo r-matrix.
//!
//! All multivectors are stored over the integral Chevalley basis `E_β`; the
//! orthonormal-pairing basis is `X_β = μ_β E_β` with `μ_β² = (β,β)/2`, so
//!
//! * `s̃ = Σ_{β∈m} c_{[β]} X_β∧X_{−β} = Σ_{β∈m} c_{[β]} μ_β² E_β∧E_{−β}`,
//! * `φ̃ = 8 Σ_{a+b+c=0} N_{ab} X_a∧X_b∧X_c` (unordered triples in `m`),
//!   whose coefficient on `E_a∧E_b∧E_c` is `8 N_{ab} μ_a² μ_b²`.
//!
//! With this normalization `[[s̃, s̃]] = κ² φ̃` holds exactly when the
//! coefficients satisfy `c_{i+j}(c_i + c_j) = c_i c_j + κ²`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chevalley::{BasisElement, StructureConstants};
use crate::linalg;
use crate::multivec::{adjoint_action, schouten, Multivector};
use crate::quasiroot::{MlaModel, ModelError};
use crate::scalar::Scalar;

type Q = Rational64;

/// Residuals below this are accepted.
pub const ACCEPT: f64 = 1e-9;
/// Residuals above this are rejected; anything in between is indeterminate.
pub const REJECT: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum PoissonError {
    #[error("family has {got} classes, model level is {l}")]
    LevelMismatch { l: usize, got: usize },
    #[error("family violates c[l−i] = −c[i] or c[l/2] = 0")]
    NotAntisymmetric,
    #[error("expected a bivector, got degree {0}")]
    Degree(usize),
    #[error("candidate with residual {0:e} is neither accepted nor rejected")]
    Indeterminate(f64),
    #[error("tolerances must satisfy 0 < accept < reject")]
    Tolerances,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub accept: f64,
    pub reject: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            accept: ACCEPT,
            reject: REJECT,
        }
    }
}

impl Tolerances {
    pub fn new(accept: f64, reject: f64) -> Result<Self, PoissonError> {
        if accept > 0.0 && accept < reject {
            Ok(Self { accept, reject })
        } else {
            Err(PoissonError::Tolerances)
        }
    }
}

/// Coefficients `c[i]`, `i = 0..l` (`c[0]` unused and zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFamily {
    pub c: Vec<Complex64>,
    pub kappa: f64,
}

impl CoefficientFamily {
    pub fn zero(l: usize, kappa: f64) -> Self {
        Self {
            c: vec![Complex64::zero(); l],
            kappa,
        }
    }

    /// Fills `c[1..]` from the independent values `c[1..=⌊(l−1)/2⌋]`.
    pub fn from_independent(l: usize, values: &[Complex64], kappa: f64) -> Self {
        let mut c = vec![Complex64::zero(); l];
        for (k, &v) in values.iter().enumerate().take((l - 1) / 2) {
            c[k + 1] = v;
            c[l - k - 1] = -v;
        }
        Self { c, kappa }
    }

    pub fn level(&self) -> usize {
        self.c.len()
    }

    pub fn check(&self, l: usize) -> Result<(), PoissonError> {
        if self.c.len() != l {
            return Err(PoissonError::LevelMismatch { l, got: self.c.len() });
        }
        let ok = (1..l).all(|i| self.c[i] == -self.c[l - i]) && self.c[0].is_zero();
        if ok {
            Ok(())
        } else {
            Err(PoissonError::NotAntisymmetric)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiPoissonSolution {
    pub family: CoefficientFamily,
    /// `‖[[s̃,s̃]] − κ²φ̃‖∞`.
    pub residual: f64,
    pub recurrence_residual: f64,
    pub branch_label: String,
}

pub fn phi_tilde(model: &MlaModel) -> Result<Multivector<Q>, ModelError> {
    let sc = model.sc();
    let mut out = Multivector::zero(3);
    for m in model.weight_zero_monomials(3)? {
        let f = m.factors();
        let (a, b) = (f[0] as usize, f[1] as usize);
        let coef = Q::from_integer(8 * sc.n(a, b)) * sc.weight(a) * sc.weight(b);
        out.add_term(m.clone(), coef);
    }
    Ok(out)
}

pub fn invariant_bivector(model: &MlaModel, family: &CoefficientFamily) -> Result<Multivector<Complex64>, PoissonError> {
    family.check(model.level())?;
    let sc = model.sc();
    let rs = sc.root_system();
    let mut out = Multivector::zero(2);
    for &b in model.m_basis() {
        let c = family.c[model.class_of(b)] * Scalar::to_complex(&sc.weight(b));
        out.add_assign(&Multivector::monomial(&[b, rs.neg_index(b)], c));
    }
    Ok(out)
}

/// `max |c[i+j](c[i]+c[j]) − (c[i]c[j] + κ²)|` over classes with `i+j ≢ 0`.
pub fn recurrence_residual(l: usize, family: &CoefficientFamily) -> f64 {
    let c = &family.c;
    let k2 = family.kappa * family.kappa;
    let mut worst = 0.0f64;
    for i in 1..l {
        for j in 1..l {
            if (i + j) % l == 0 {
                continue;
            }
            let r = (c[(i + j) % l] * (c[i] + c[j]) - (c[i] * c[j] + k2)).norm();
            // NaN must not hide behind max
            worst = if r.is_nan() { f64::INFINITY } else { worst.max(r) };
        }
    }
    worst
}

/// `‖proj_m [[v, v]] − κ² φ̃‖∞`.
pub fn verify_mcybe(model: &MlaModel, v: &Multivector<Complex64>, kappa: f64) -> Result<f64, PoissonError> {
    if v.degree() != 2 {
        return Err(PoissonError::Degree(v.degree()));
    }
    let w = model.project_to_m(&schouten(model.sc(), v, v));
    let phi = phi_tilde(model)?.to_complex().scale(&Complex64::new(kappa * kappa, 0.0));
    Ok(w.sub(&phi).norm_inf())
}

// ---------------------------------------------------------------- solver

type Poly = Vec<Complex64>; // ascending powers

fn poly_trim(mut p: Poly) -> Poly {
    let scale = p.iter().map(|x| x.norm()).fold(0.0, f64::max);
    while p.last().is_some_and(|x| x.norm() <= 1e-13 * scale) {
        p.pop();
    }
    p
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Complex64::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_eval(p: &Poly, x: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::zero(), |acc, c| acc * x + c)
}

fn poly_deriv(p: &Poly) -> Poly {
    p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

/// All complex roots (Durand–Kerner, then Newton polish).
pub fn poly_roots(p: &[Complex64]) -> Vec<Complex64> {
    let p = poly_trim(p.to_vec());
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let monic: Poly = p.iter().map(|c| c / lead).collect();
    let seed = Complex64::new(0.4, 0.9);
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = poly_eval(&monic, z[i]) / den;
            if step.is_finite() {
                z[i] -= step;
                delta = delta.max(step.norm());
            }
        }
        if delta < 1e-16 {
            break;
        }
    }
    let d = poly_deriv(&monic);
    for r in z.iter_mut() {
        for _ in 0..4 {
            let dv = poly_eval(&d, *r);
            if dv.norm() == 0.0 {
                break;
            }
            let step = poly_eval(&monic, *r) / dv;
            if step.is_finite() {
                *r -= step;
            }
        }
    }
    z
}

fn snap(z: Complex64) -> Complex64 {
    let s = z.norm().max(1.0) * 1e-12;
    Complex64::new(
        if z.re.abs() < s { 0.0 } else { z.re },
        if z.im.abs() < s { 0.0 } else { z.im },
    )
}

/// Numerically propagates `c_{k+1} = (c_1 c_k + 1)/(c_1 + c_k)` at `κ = 1`
/// and completes the family by antisymmetry.
fn family_from_seed(l: usize, x: Complex64) -> CoefficientFamily {
    let half = (l - 1) / 2;
    let mut vals = vec![x];
    for _ in 1..half {
        let ck = *vals.last().unwrap();
        vals.push(snap((x * ck + 1.0) / (x + ck)));
    }
    CoefficientFamily::from_independent(l, &vals, 1.0)
}

/// The polynomial constraints on `c_1` at `κ = 1`.
pub fn seed_constraints(l: usize) -> Vec<Poly> {
    let one = Complex64::new(1.0, 0.0);
    let x: Poly = vec![Complex64::zero(), one];
    // c_k = num[k]/den[k]
    let mut num: Vec<Poly> = vec![Vec::new(), x.clone()];
    let mut den: Vec<Poly> = vec![Vec::new(), vec![one]];
    for k in 1..l.saturating_sub(1) {
        num.push(poly_add(&poly_mul(&x, &num[k]), &den[k]));
        den.push(poly_add(&poly_mul(&x, &den[k]), &num[k]));
    }
    let mut out = Vec::new();
    for k in 1..l {
        if 2 * k == l {
            out.push(poly_trim(num[k].clone()));
        } else if k < l - k {
            out.push(poly_trim(poly_add(
                &poly_mul(&num[l - k], &den[k]),
                &poly_mul(&num[k], &den[l - k]),
            )));
        }
    }
    out.retain(|p| !p.is_empty());
    out
}

/// All φ-Poisson coefficient families, ordered by `(re, im)` of `c_1`.
pub fn solve_phi_poisson(model: &MlaModel, kappa: f64, tol: Tolerances) -> Result<Vec<PhiPoissonSolution>, PoissonError> {
    let l = model.level();
    let mut seeds: Vec<Complex64> = Vec::new();
    if l <= 2 {
        seeds.push(Complex64::zero());
    } else if let Some(p) = seed_constraints(l).into_iter().min_by_key(|p| p.len()) {
        for r in poly_roots(&p) {
            let r = snap(r);
            if !seeds.iter().any(|s| (s - r).norm() < 1e-8) {
                seeds.push(r);
            }
        }
    }
    let mut out = Vec::new();
    for x in seeds {
        let unit = family_from_seed(l, x);
        let res = recurrence_residual(l, &unit);
        if res > tol.reject || res.is_nan() {
            continue;
        }
        if res >= tol.accept {
            return Err(PoissonError::Indeterminate(res));
        }
        let family = CoefficientFamily {
            c: unit.c.iter().map(|c| c * kappa).collect(),
            kappa,
        };
        let s = invariant_bivector(model, &family)?;
        let residual = verify_mcybe(model, &s, kappa)?;
        out.push(PhiPoissonSolution {
            recurrence_residual: recurrence_residual(l, &family),
            family,
            residual,
            branch_label: String::new(),
        });
    }
    let key = |z: Complex64| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64);
    out.sort_by_key(|s| key(s.family.c.get(1).copied().unwrap_or_default()));
    for (k, s) in out.iter_mut().enumerate() {
        s.branch_label = format!("l{l}-b{k}");
    }
    Ok(out)
}

// ---------------------------------------------------------------- Drinfeld–Jimbo

/// `r = Σ_{α>0} X_α∧X_{−α}`.
pub fn drinfeld_jimbo_r(sc: &StructureConstants) -> Multivector<Q> {
    let rs = sc.root_system();
    let mut out = Multivector::zero(2);
    for a in rs.positive_indices() {
        out.add_assign(&Multivector::monomial(&[a, rs.neg_index(a)], sc.weight(a)));
    }
    out
}

fn invert(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| Q::from_integer(i64::from(i == j))));
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).expect("nonsingular form");
        a.swap(k, p);
        let inv = a[k][k].recip();
        for x in a[k].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != k && !a[r][k].is_zero() {
                let f = a[r][k];
                for c in 0..2 * n {
                    let v = a[k][c] * f;
                    a[r][c] -= v;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Dual basis of `g` under the invariant form with `(X_α, X_{−α}) = 1`,
/// as `(ordinal, coefficient)` combinations.
fn dual_basis(sc: &StructureConstants) -> Vec<Vec<(usize, Q)>> {
    let rs = sc.root_system();
    let rank = rs.rank();
    let mut out: Vec<Vec<(usize, Q)>> = (0..rs.len())
        .map(|a| vec![(rs.neg_index(a), sc.weight(a))])
        .collect();
    // (H_i, H_j) = 4 (α_i, α_j) / ((α_i, α_i)(α_j, α_j))
    let simple = rs.simple_indices();
    let gram: Vec<Vec<Q>> = simple
        .iter()
        .map(|&i| {
            simple
                .iter()
                .map(|&j| Q::from_integer(4) * rs.inner(i, j) / (rs.norm2(i) * rs.norm2(j)))
                .collect()
        })
        .collect();
    let ginv = invert(&gram);
    for row in ginv.iter().take(rank) {
        out.push(
            row.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, &x)| (rs.len() + j, x))
                .collect(),
        );
    }
    out
}

/// The canonical invariant trivector `½ Σ_{a,b} [e_a, e_b] ∧ e^a ∧ e^b`.
pub fn invariant_trivector(sc: &StructureConstants) -> Multivector<Q> {
    let dual = dual_basis(sc);
    let dim = sc.dim();
    let half = Q::new(1, 2);
    let mut acc: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
    for a in 0..dim {
        for b in 0..dim {
            let br = sc.bracket(sc.element(a), sc.element(b));
            for (z, n) in br {
                for &(da, ca) in &dual[a] {
                    for &(db, cb) in &dual[b] {
                        let key = vec![sc.ordinal(z), da, db];
                        *acc.entry(key).or_insert(Q::zero()) += half * Q::from_integer(n) * ca * cb;
                    }
                }
            }
        }
    }
    let mut out = Multivector::zero(3);
    for (k, c) in acc {
        out.add_assign(&Multivector::monomial(&k, c));
    }
    out
}

#[derive(Debug, Clone)]
pub struct DjReport {
    pub w: Multivector<Q>,
    pub invariant: bool,
    pub cartan_free: bool,
    pub lambda: Complex64,
    pub residual: f64,
}

pub fn verify_dj(sc: &StructureConstants) -> DjReport {
    let r = drinfeld_jimbo_r(sc);
    let w = schouten(sc, &r, &r);
    let invariant = (0..sc.dim()).all(|o| adjoint_action(sc, sc.element(o), &w).is_zero());
    let nroots = sc.root_system().len();
    let cartan_free = w.terms().all(|(m, _)| m.factors().iter().all(|&f| (f as usize) < nroots));
    let phi = invariant_trivector(sc);
    let to_map = |v: &Multivector<Q>| -> BTreeMap<Vec<u16>, Complex64> {
        v.terms().map(|(m, c)| (m.factors().to_vec(), Scalar::to_complex(c))).collect()
    };
    let (lambda, residual) = match linalg::least_squares(&[to_map(&phi)], &to_map(&w)) {
        Ok((x, res)) => (x[0], res),
        Err(_) => (Complex64::zero(), f64::INFINITY),
    };
    DjReport {
        w,
        invariant,
        cartan_free,
        lambda,
        residual,
    }
}

/// Whether `v` is annihilated by every basis element of `g`.
pub fn is_g_invariant(sc: &StructureConstants, v: &Multivector<Q>) -> bool {
    (0..sc.dim()).all(|o| adjoint_action(sc, sc.element(o), v).is_zero())
}

pub fn cartan_elements(sc: &StructureConstants) -> impl Iterator<Item = BasisElement> {
    (0..sc.root_system().rank()).map(BasisElement::Cartan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{RootSystem, SimpleLieType};
    use std::sync::Arc;

    fn sc(t: &str) -> Arc<StructureConstants> {
        let t: SimpleLieType = t.parse().unwrap();
        Arc::new(StructureConstants::build(Arc::new(RootSystem::build(t))))
    }

    fn i(x: f64) -> Complex64 {
        Complex64::new(0.0, x)
    }

    #[test]
    fn l5_quartic() {
        let cons = seed_constraints(5);
        let p = cons.iter().min_by_key(|p| p.len()).unwrap();
        let want = [1.0, 0.0, 10.0, 0.0, 5.0];
        let scale = p[4].re;
        for (a, b) in p.iter().zip(want) {
            assert!((a * 5.0 / scale - b).norm() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn recurrence_examples() {
        let f = CoefficientFamily::from_independent(4, &[i(1.0)], 1.0);
        assert!(recurrence_residual(4, &f) < 1e-15);
        let f = CoefficientFamily::from_independent(6, &[i(3f64.sqrt()), i(1.0 / 3f64.sqrt())], 1.0);
        assert!(recurrence_residual(6, &f) < 1e-14);
        assert_eq!(recurrence_residual(4, &CoefficientFamily::zero(4, 0.0)), 0.0);
    }

    #[test]
    fn g2_level_three_solution() {
        let m = MlaModel::build(sc("G2"), 0, 3).unwrap();
        let sols = solve_phi_poisson(&m, 1.0, Tolerances::default()).unwrap();
        assert_eq!(sols.len(), 2);
        for s in &sols {
            assert!((s.family.c[1].norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
            assert!(s.residual < 1e-12, "{}", s.residual);
        }
    }

    #[test]
    fn sl2_dj() {
        let rep = verify_dj(&sc("A1"));
        assert!(rep.invariant);
        assert!(!rep.cartan_free);
        assert_eq!(rep.w, Multivector::monomial(&[2, 1, 0], Q::from_integer(2)));
        assert!(rep.residual < 1e-12);
    }

    #[test]
    fn canonical_trivector_is_invariant() {
        for t in ["A2", "B2", "G2"] {
            let s = sc(t);
            assert!(is_g_invariant(&s, &invariant_trivector(&s)), "{t}");
        }
    }

    #[test]
    fn roots_of_quadratic() {
        let r = poly_roots(&[Complex64::new(1.0, 0.0), Complex64::zero(), Complex64::new(3.0, 0.0)]);
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        }
    }
}
