//! Sparse exterior algebra `Λ(g)` over the Chevalley basis.
//!
//! A [`Monomial`] is a strictly increasing list of basis ordinals (roots
//! first, then the simple coroots, see [`StructureConstants::ordinal`]).
//! A [`Multivector`] is homogeneous of one degree and maps monomials to
//! coefficients; zero coefficients are never stored.
//!
//! The Schouten bracket of monomials is
//!
//! ```text
//! [[x_1 ∧ … ∧ x_p, y_1 ∧ … ∧ y_q]] =
//!     Σ_{i,j} (−1)^{i+j} [x_i, y_j] ∧ x_1 ∧ … x̂_i … ∧ x_p ∧ y_1 ∧ … ŷ_j … ∧ y_q
//! ```
//!
//! so that `[[e ∧ f, e ∧ f]] = 2 h ∧ e ∧ f` in `sl2`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::chevalley::{BasisElement, StructureConstants};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[u16; 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    /// From factors that are already strictly increasing.
    pub fn from_sorted(factors: &[u16]) -> Option<Self> {
        factors
            .windows(2)
            .all(|w| w[0] < w[1])
            .then(|| Monomial(SmallVec::from_slice(factors)))
    }

    /// Sorts `factors`, returning the permutation sign, or `None` when a
    /// factor repeats.
    pub fn canonical(factors: &[u16]) -> Option<(i64, Self)> {
        let mut v: SmallVec<[u16; 6]> = SmallVec::from_slice(factors);
        let mut sign = 1i64;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && v[j - 1] == v[j] {
                return None;
            }
        }
        Some((sign, Monomial(v)))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn factors(&self) -> &[u16] {
        &self.0
    }

    pub fn contains(&self, ordinal: u16) -> bool {
        self.0.binary_search(&ordinal).is_ok()
    }

    fn without(&self, k: usize) -> SmallVec<[u16; 6]> {
        let mut v = self.0.clone();
        v.remove(k);
        v
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[derive(Clone, PartialEq)]
pub struct Multivector<S: Scalar> {
    degree: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multivector")
            .field("degree", &self.degree)
            .field("terms", &self.terms)
            .finish()
    }
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(c: S) -> Self {
        let mut out = Self::zero(0);
        out.add_term(Monomial::one(), c);
        out
    }

    pub fn basis(ordinal: usize) -> Self {
        let mut out = Self::zero(1);
        out.add_term(Monomial(SmallVec::from_slice(&[ordinal as u16])), S::one());
        out
    }

    /// Builds `c · f_1 ∧ … ∧ f_k` for unsorted factors.
    pub fn monomial(factors: &[usize], c: S) -> Self {
        let f: SmallVec<[u16; 6]> = factors.iter().map(|&x| x as u16).collect();
        let mut out = Self::zero(factors.len());
        if let Some((sign, m)) = Monomial::canonical(&f) {
            out.add_term(m, if sign > 0 { c } else { -c });
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of `f_1 ∧ … ∧ f_k` given in any order.
    pub fn coefficient_of(&self, factors: &[usize]) -> S {
        let f: SmallVec<[u16; 6]> = factors.iter().map(|&x| x as u16).collect();
        match Monomial::canonical(&f) {
            Some((sign, m)) => {
                let c = self.coefficient(&m);
                if sign > 0 {
                    c
                } else {
                    -c
                }
            }
            None => S::zero(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        assert_eq!(m.degree(), self.degree, "monomial degree mismatch");
        if c.is_negligible() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_negligible() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    fn add_signed(&mut self, factors: &[u16], c: S) {
        if let Some((sign, m)) = Monomial::canonical(factors) {
            self.add_term(m, if sign > 0 { c } else { -c });
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), -v.clone());
        }
        out
    }

    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        let mut out = Multivector::zero(self.degree);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), f(v));
        }
        out
    }

    pub fn to_complex(&self) -> Multivector<Complex64> {
        self.map(|c| c.to_complex())
    }

    /// Keeps the monomials whose factors all satisfy `keep`.
    pub fn retain_factors(&self, keep: impl Fn(u16) -> bool) -> Self {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.factors().iter().all(|&f| keep(f)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        let mut buf: SmallVec<[u16; 8]> = SmallVec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                buf.clear();
                buf.extend_from_slice(a.factors());
                buf.extend_from_slice(b.factors());
                out.add_signed(&buf, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Sum of the root coordinates of each monomial's factors.
    pub fn weights(&self, sc: &StructureConstants) -> Vec<Vec<i32>> {
        self.terms.keys().map(|m| monomial_weight(sc, m)).collect()
    }

    /// Serializable `(ordinals, re, im)` triples in canonical order.
    pub fn to_triples(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let z = c.to_complex();
                Term {
                    monomial: m.factors().to_vec(),
                    re: z.re,
                    im: z.im,
                }
            })
            .collect()
    }
}

impl Multivector<Complex64> {
    pub fn from_triples(degree: usize, triples: &[Term]) -> Option<Self> {
        let mut out = Self::zero(degree);
        for t in triples {
            let m = Monomial::from_sorted(&t.monomial)?;
            if m.degree() != degree {
                return None;
            }
            out.add_term(m, Complex64::new(t.re, t.im));
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub monomial: Vec<u16>,
    pub re: f64,
    pub im: f64,
}

pub fn monomial_weight(sc: &StructureConstants, m: &Monomial) -> Vec<i32> {
    let rs = sc.root_system();
    let mut w = vec![0i32; rs.rank()];
    for &f in m.factors() {
        if let BasisElement::Root(r) = sc.element(f as usize) {
            for (acc, c) in w.iter_mut().zip(rs.root(r).coeffs()) {
                *acc += c;
            }
        }
    }
    w
}

fn bracket_ordinals(sc: &StructureConstants, x: u16, y: u16) -> SmallVec<[(u16, i64); 8]> {
    sc.bracket(sc.element(x as usize), sc.element(y as usize))
        .into_iter()
        .map(|(e, c)| (sc.ordinal(e) as u16, c))
        .collect()
}

/// The Schouten bracket on `Λ(g)`. Degree-0 arguments bracket to zero.
pub fn schouten<S: Scalar>(
    sc: &StructureConstants,
    u: &Multivector<S>,
    v: &Multivector<S>,
) -> Multivector<S> {
    let (p, q) = (u.degree(), v.degree());
    if p == 0 || q == 0 {
        return Multivector::zero((p + q).saturating_sub(1));
    }
    let mut out = Multivector::zero(p + q - 1);
    let mut buf: SmallVec<[u16; 8]> = SmallVec::new();
    for (x, cx) in u.terms() {
        for (y, cy) in v.terms() {
            let cxy = cx.clone() * cy.clone();
            for i in 0..p {
                let rest_x = x.without(i);
                for j in 0..q {
                    let br = bracket_ordinals(sc, x.factors()[i], y.factors()[j]);
                    if br.is_empty() {
                        continue;
                    }
                    let rest_y = y.without(j);
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    for (z, c) in br {
                        buf.clear();
                        buf.push(z);
                        buf.extend_from_slice(&rest_x);
                        buf.extend_from_slice(&rest_y);
                        out.add_signed(&buf, cxy.clone() * S::from_i64(sign * c));
                    }
                }
            }
        }
    }
    out
}

/// Adjoint action of a basis element, extended as a derivation.
pub fn adjoint_action<S: Scalar>(
    sc: &StructureConstants,
    x: BasisElement,
    v: &Multivector<S>,
) -> Multivector<S> {
    let xo = sc.ordinal(x) as u16;
    let mut out = Multivector::zero(v.degree());
    let mut buf: SmallVec<[u16; 8]> = SmallVec::new();
    for (m, c) in v.terms() {
        for k in 0..m.degree() {
            for (z, n) in bracket_ordinals(sc, xo, m.factors()[k]) {
                buf.clear();
                buf.extend_from_slice(m.factors());
                buf[k] = z;
                out.add_signed(&buf, c.clone() * S::from_i64(n));
            }
        }
    }
    out
}

/// Chevalley involution `E_α ↦ −E_{−α}`, `H ↦ −H`, applied factorwise.
pub fn cartan_involution<S: Scalar>(sc: &StructureConstants, v: &Multivector<S>) -> Multivector<S> {
    let mut out = Multivector::zero(v.degree());
    let mut buf: SmallVec<[u16; 8]> = SmallVec::new();
    let sign = if v.degree() % 2 == 0 { 1 } else { -1 };
    for (m, c) in v.terms() {
        buf.clear();
        for &f in m.factors() {
            let (img, _) = sc.involution(sc.element(f as usize));
            buf.push(sc.ordinal(img) as u16);
        }
        out.add_signed(&buf, c.clone() * S::from_i64(sign));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{RootSystem, SimpleLieType};
    use num_rational::Rational64;
    use std::sync::Arc;

    type Q = Rational64;

    fn sc(s: &str) -> StructureConstants {
        let t: SimpleLieType = s.parse().unwrap();
        StructureConstants::build(Arc::new(RootSystem::build(t)))
    }

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(Monomial::canonical(&[2, 1, 3]).unwrap().0, -1);
        assert_eq!(Monomial::canonical(&[3, 1, 2]).unwrap().0, 1);
        assert!(Monomial::canonical(&[1, 2, 1]).is_none());
    }

    #[test]
    fn wedge_basics() {
        let x1 = Multivector::<Q>::basis(1);
        let x2 = Multivector::<Q>::basis(2);
        let x3 = Multivector::<Q>::basis(3);
        assert!(x1.wedge(&x1).is_zero());
        let lhs = x1.wedge(&x2).wedge(&x3);
        assert_eq!(lhs, Multivector::monomial(&[1, 2, 3], q(1)));
        assert_eq!(x2.wedge(&x1), Multivector::monomial(&[1, 2], q(-1)));
    }

    #[test]
    fn sl2_schouten() {
        let s = sc("A1");
        // roots: 0 = −α, 1 = α; Cartan ordinal 2
        let (f, e, h) = (0usize, 1usize, 2usize);
        let ef = Multivector::<Q>::monomial(&[e, f], q(1));
        let w = schouten(&s, &ef, &ef);
        assert_eq!(w, Multivector::monomial(&[h, e, f], q(2)));
    }

    #[test]
    fn degree_one_is_lie_bracket() {
        let s = sc("A2");
        let rs = s.root_system();
        let a1 = rs.index_of(&[1, 0]).unwrap();
        let a2 = rs.index_of(&[0, 1]).unwrap();
        let a12 = rs.index_of(&[1, 1]).unwrap();
        let w = schouten(&s, &Multivector::<Q>::basis(a1), &Multivector::basis(a2));
        assert_eq!(w, Multivector::monomial(&[a12], q(s.n(a1, a2))));
    }

    #[test]
    fn involution_examples() {
        let s = sc("B2");
        let rs = s.root_system();
        let a = rs.index_of(&[1, 1]).unwrap();
        let na = rs.neg_index(a);
        let v = Multivector::<Q>::monomial(&[a, na], q(1));
        assert_eq!(cartan_involution(&s, &v), v.scale(&q(-1)));
    }

    #[test]
    fn action_on_scalar_is_zero() {
        let s = sc("A2");
        let one = Multivector::<Q>::scalar(q(5));
        assert!(adjoint_action(&s, BasisElement::Root(0), &one).is_zero());
    }
}
