//! The homogeneous model `M_{lα}`.
//!
//! Fixing a simple root `α` and a level `l`, the roots whose `α`-coefficient
//! is divisible by `l` form the subsystem `Ω_P` of the stabilizer `k`; the
//! remaining roots fall into the quasi-root classes `i = 1..l−1` by their
//! `α`-coefficient modulo `l`, and span the complement `m`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

use crate::chevalley::{BasisElement, StructureConstants};
use crate::linalg::{self, LinalgError, SparseRow};
use crate::multivec::{adjoint_action, cartan_involution, Monomial, Multivector};

pub type Q = Rational64;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("node {node} out of range for rank {rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("level {l} out of range: need 2 ≤ l ≤ {max}")]
    LevelOutOfRange { l: usize, max: usize },
    #[error("residue {0} is not a quasi-root class")]
    ResidueOutOfRange(usize),
    #[error("classes {0} and {1} sum to zero")]
    OppositeClasses(usize, usize),
    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone)]
pub struct MlaModel {
    sc: Arc<StructureConstants>,
    alpha: usize,
    l: usize,
    residue: Vec<usize>,
    omega_p: Vec<usize>,
    classes: Vec<Vec<usize>>,
    m_basis: Vec<usize>,
}

impl MlaModel {
    pub fn build(sc: Arc<StructureConstants>, alpha: usize, l: usize) -> Result<Self, ModelError> {
        let rs = sc.root_system();
        if alpha >= rs.rank() {
            return Err(ModelError::NodeOutOfRange {
                node: alpha,
                rank: rs.rank(),
            });
        }
        let max = rs.highest_root().coeffs()[alpha] as usize;
        if l < 2 || l > max {
            return Err(ModelError::LevelOutOfRange { l, max });
        }
        let residue: Vec<usize> = rs
            .roots()
            .iter()
            .map(|r| r.coeffs()[alpha].rem_euclid(l as i32) as usize)
            .collect();
        let mut classes = vec![Vec::new(); l];
        for (i, &k) in residue.iter().enumerate() {
            classes[k].push(i);
        }
        let omega_p = std::mem::take(&mut classes[0]);
        let m_basis = (0..rs.len()).filter(|&i| residue[i] != 0).collect();
        Ok(Self {
            sc,
            alpha,
            l,
            residue,
            omega_p,
            classes,
            m_basis,
        })
    }

    pub fn sc(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn sc_arc(&self) -> &Arc<StructureConstants> {
        &self.sc
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn level(&self) -> usize {
        self.l
    }

    pub fn omega_p(&self) -> &[usize] {
        &self.omega_p
    }

    /// Roots of class `i`, `1 ≤ i < l`.
    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn class_of(&self, root: usize) -> usize {
        self.residue[root]
    }

    pub fn m_basis(&self) -> &[usize] {
        &self.m_basis
    }

    /// Whether a basis ordinal spans part of `m` (as opposed to `k`).
    pub fn in_m(&self, ordinal: usize) -> bool {
        ordinal < self.residue.len() && self.residue[ordinal] != 0
    }

    pub fn project_to_m<S: crate::scalar::Scalar>(&self, v: &Multivector<S>) -> Multivector<S> {
        v.retain_factors(|o| self.in_m(o as usize))
    }

    /// Indecomposable positive roots of `Ω_P` and their negatives; together
    /// with the Cartan subalgebra they generate `k`.
    pub fn generators(&self) -> Vec<usize> {
        let rs = self.sc.root_system();
        let pos: Vec<usize> = self.omega_p.iter().copied().filter(|&g| rs.is_positive(g)).collect();
        let mut out = Vec::new();
        for &g in &pos {
            let decomposable = pos.iter().any(|&a| {
                rs.sum_index(a, rs.neg_index(g))
                    .map(|b| pos.contains(&rs.neg_index(b)))
                    .unwrap_or(false)
            });
            if !decomposable {
                out.push(g);
                out.push(rs.neg_index(g));
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether class `i` is connected by `Ω_P`-steps.
    pub fn connectivity_check(&self, i: usize) -> Result<bool, ModelError> {
        if i == 0 || i >= self.l {
            return Err(ModelError::ResidueOutOfRange(i));
        }
        Ok(class_connected(&self.sc, &self.classes[i], &self.omega_p))
    }

    /// Whether `[m_i, m_j]` spans `m_{i+j}` (exact rank).
    pub fn bracket_image_check(&self, i: usize, j: usize) -> Result<bool, ModelError> {
        for k in [i, j] {
            if k == 0 || k >= self.l {
                return Err(ModelError::ResidueOutOfRange(k));
            }
        }
        if (i + j) % self.l == 0 {
            return Err(ModelError::OppositeClasses(i, j));
        }
        let target = &self.classes[(i + j) % self.l];
        let col: HashMap<usize, usize> = target.iter().enumerate().map(|(c, &r)| (r, c)).collect();
        let rs = self.sc.root_system();
        let mut rows: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
        for &x in &self.classes[i] {
            for &y in &self.classes[j] {
                if let Some(z) = rs.sum_index(x, y) {
                    let n = self.sc.n(x, y);
                    // a bracket outside the target class would be a bug
                    let c = *col.get(&z).expect("bracket leaves the target class");
                    let mut row = vec![Q::zero(); target.len()];
                    row[c] = Q::from_integer(n);
                    rows.entry(z).or_insert(row);
                }
            }
        }
        let rows: Vec<Vec<Q>> = rows.into_values().collect();
        Ok(linalg::rank_bareiss(&rows) == target.len())
    }

    /// Strictly increasing `p`-tuples of `m`-roots summing to zero.
    pub fn weight_zero_monomials(&self, p: usize) -> Result<Vec<Monomial>, ModelError> {
        let rs = self.sc.root_system();
        let m = &self.m_basis;
        let mut out = Vec::new();
        match p {
            2 => {
                for &a in m {
                    let b = rs.neg_index(a);
                    if a < b {
                        out.push(mono(&[a, b]));
                    }
                }
            }
            3 => {
                for (ia, &a) in m.iter().enumerate() {
                    for &b in &m[ia + 1..] {
                        if let Some(s) = rs.sum_index(a, b) {
                            let c = rs.neg_index(s);
                            if c > b && self.in_m(c) {
                                out.push(mono(&[a, b, c]));
                            }
                        }
                    }
                }
            }
            4 => {
                let mut by_sum: HashMap<Vec<i32>, Vec<(usize, usize)>> = HashMap::new();
                for (ia, &a) in m.iter().enumerate() {
                    for &b in &m[ia + 1..] {
                        by_sum.entry(rs.root(a).add(rs.root(b))).or_default().push((a, b));
                    }
                }
                for (ia, &a) in m.iter().enumerate() {
                    for &b in &m[ia + 1..] {
                        let neg: Vec<i32> = rs.root(a).add(rs.root(b)).iter().map(|x| -x).collect();
                        if let Some(list) = by_sum.get(&neg) {
                            for &(c, d) in list {
                                if c > b {
                                    out.push(mono(&[a, b, c, d]));
                                }
                            }
                        }
                    }
                }
            }
            _ => return Err(ModelError::UnsupportedDegree(p)),
        }
        out.sort();
        Ok(out)
    }

    /// θ-eigenvectors spanned by weight-zero monomials: `T ± θ(T)` per orbit.
    pub fn theta_columns(&self, p: usize, theta_sign: i64) -> Result<Vec<Multivector<Q>>, ModelError> {
        let monos = self.weight_zero_monomials(p)?;
        let mut cols = Vec::new();
        for t in &monos {
            let mut v = Multivector::<Q>::zero(p);
            v.add_term(t.clone(), Q::from_integer(1));
            let th = cartan_involution(&self.sc, &v);
            let (img, s) = th.terms().next().map(|(m, c)| (m.clone(), *c)).expect("θ of a monomial");
            if img == *t {
                if s == Q::from_integer(theta_sign) {
                    cols.push(v);
                }
            } else if *t < img {
                cols.push(v.add(&th.scale(&Q::from_integer(theta_sign))));
            }
        }
        Ok(cols)
    }

    /// Exact basis of `(∧^p m)^{k,θ}` with the given θ-sign.
    pub fn invariant_subspace(&self, p: usize, theta_sign: i64) -> Result<InvariantBasis, ModelError> {
        let cols = self.theta_columns(p, theta_sign)?;
        let gens = self.omega_p.clone();
        let mut rows: BTreeMap<(usize, Monomial), SparseRow> = BTreeMap::new();
        for (j, col) in cols.iter().enumerate() {
            for &g in &gens {
                let img = adjoint_action(&self.sc, BasisElement::Root(g), col);
                for (m, c) in img.terms() {
                    rows.entry((g, m.clone())).or_default().push((j, *c));
                }
            }
        }
        let rows: Vec<SparseRow> = rows.into_values().collect();
        let kernel = linalg::kernel_sparse(cols.len(), &rows)?;
        let vectors = kernel
            .iter()
            .map(|k| {
                let mut v = Multivector::zero(p);
                for &(j, x) in k {
                    v.add_assign(&cols[j].scale(&x));
                }
                v
            })
            .collect();
        Ok(InvariantBasis {
            degree: p,
            theta_sign,
            vectors,
        })
    }

    /// Exact `k`-invariance against every root vector of `Ω_P` and every
    /// Cartan element.
    pub fn is_k_invariant(&self, v: &Multivector<Q>) -> bool {
        let rank = self.sc.root_system().rank();
        self.omega_p
            .iter()
            .map(|&g| BasisElement::Root(g))
            .chain((0..rank).map(BasisElement::Cartan))
            .all(|x| adjoint_action(&self.sc, x, v).is_zero())
    }
}

fn mono(f: &[usize]) -> Monomial {
    let v: Vec<u16> = f.iter().map(|&x| x as u16).collect();
    Monomial::canonical(&v).expect("distinct factors").1
}

/// Connectivity of `class` under steps `β ↦ β + γ`, `γ ∈ omega`.
pub fn class_connected(sc: &StructureConstants, class: &[usize], omega: &[usize]) -> bool {
    if class.is_empty() {
        return true;
    }
    let rs = sc.root_system();
    let members: HashMap<usize, usize> = class.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let mut seen = vec![false; class.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(k) = stack.pop() {
        for &g in omega {
            if let Some(t) = rs.sum_index(class[k], g) {
                if let Some(&kt) = members.get(&t) {
                    if !seen[kt] {
                        seen[kt] = true;
                        stack.push(kt);
                    }
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Debug, Clone)]
pub struct InvariantBasis {
    pub degree: usize,
    pub theta_sign: i64,
    pub vectors: Vec<Multivector<Q>>,
}

impl InvariantBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{RootSystem, SimpleLieType};

    fn model(t: &str, node: usize, l: usize) -> Result<MlaModel, ModelError> {
        let t: SimpleLieType = t.parse().unwrap();
        let sc = Arc::new(StructureConstants::build(Arc::new(RootSystem::build(t))));
        MlaModel::build(sc, node, l)
    }

    #[test]
    fn level_precondition() {
        assert_eq!(
            model("A2", 0, 2).unwrap_err(),
            ModelError::LevelOutOfRange { l: 2, max: 1 }
        );
        assert!(model("G2", 0, 4).is_err());
    }

    #[test]
    fn g2_level_three_partition() {
        let m = model("G2", 0, 3).unwrap();
        assert_eq!(m.omega_p().len(), 6);
        assert_eq!(m.m_basis().len(), 6);
        let rs = m.sc().root_system();
        for i in 1..3 {
            let mut neg: Vec<usize> = m.class(3 - i).iter().map(|&r| rs.neg_index(r)).collect();
            neg.sort_unstable();
            assert_eq!(neg, m.class(i));
        }
    }

    #[test]
    fn empty_subsystem_disconnects() {
        let m = model("G2", 0, 3).unwrap();
        assert!(m.class(1).len() >= 2);
        assert!(!class_connected(m.sc(), m.class(1), &[]));
        assert!(m.connectivity_check(1).unwrap());
    }

    #[test]
    fn generators_are_a_base() {
        let m = model("F4", 2, 4).unwrap();
        let rs = m.sc().root_system();
        let pos: Vec<usize> = m.generators().into_iter().filter(|&g| rs.is_positive(g)).collect();
        // Ω_P has full rank, so its base has four elements
        assert_eq!(pos.len(), 4);
    }

    #[test]
    fn level_two_has_no_weight_zero_triples() {
        let m = model("G2", 1, 2).unwrap();
        assert!(m.weight_zero_monomials(3).unwrap().is_empty());
    }

    #[test]
    fn small_invariant_dims() {
        let m = model("G2", 0, 3).unwrap();
        let b2 = m.invariant_subspace(2, -1).unwrap();
        let b3 = m.invariant_subspace(3, 1).unwrap();
        assert_eq!((b2.dim(), b3.dim()), (1, 1));
        for v in b2.vectors.iter().chain(&b3.vectors) {
            assert!(m.is_k_invariant(v));
        }
    }
}
