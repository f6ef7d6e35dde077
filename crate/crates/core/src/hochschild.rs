//! Hochschild cochains of small finite-dimensional algebras over `ℚ`.
//!
//! A `p`-cochain is stored densely as its values on basis tuples:
//! `data[((i_1·n + i_2)·n + … + i_p)·n + k]` is the `e_k`-coordinate of
//! `ξ(e_{i_1}, …, e_{i_p})`.

use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::Rng;

use crate::linalg::{self, LinalgError, SparseRow};

type Q = Rational64;

/// Unital associative algebra given by its structure-constant cube.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAlgebra {
    pub name: String,
    pub dim: usize,
    /// `mult[(i·n + j)·n + k]`: coefficient of `e_k` in `e_i e_j`.
    pub mult: Vec<Q>,
    pub unit: Vec<Q>,
}

impl FiniteAlgebra {
    /// `ℚ[x]/(x^n)` with basis `1, x, …, x^{n−1}`.
    pub fn truncated_polynomial(n: usize) -> Self {
        let mut mult = vec![Q::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    mult[(i * n + j) * n + i + j] = Q::one();
                }
            }
        }
        let mut unit = vec![Q::zero(); n];
        unit[0] = Q::one();
        Self {
            name: format!("Q[x]/(x^{n})"),
            dim: n,
            mult,
            unit,
        }
    }

    /// `ℚ[x_1..x_k]` modulo all quadratic monomials; basis `1, x_1, …, x_k`.
    pub fn square_zero(k: usize) -> Self {
        let n = k + 1;
        let mut mult = vec![Q::zero(); n * n * n];
        for i in 0..n {
            mult[i * n + i] = Q::one(); // 1 · e_i
            mult[(i * n) * n + i] = Q::one(); // e_i · 1
        }
        let mut unit = vec![Q::zero(); n];
        unit[0] = Q::one();
        Self {
            name: format!("square-zero({k})"),
            dim: n,
            mult,
            unit,
        }
    }

    /// Upper triangular 2×2 matrices, basis `e11, e12, e22`. Noncommutative.
    pub fn upper_triangular() -> Self {
        let n = 3;
        let mut mult = vec![Q::zero(); 27];
        let mut set = |i: usize, j: usize, k: usize| mult[(i * n + j) * n + k] = Q::one();
        set(0, 0, 0); // e11 e11 = e11
        set(0, 1, 1); // e11 e12 = e12
        set(1, 2, 1); // e12 e22 = e12
        set(2, 2, 2); // e22 e22 = e22
        Self {
            name: "upper-triangular 2x2".into(),
            dim: n,
            mult,
            unit: vec![Q::one(), Q::zero(), Q::one()],
        }
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let n = self.dim;
        let mut out = vec![Q::zero(); n];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                for k in 0..n {
                    let c = self.mult[(i * n + j) * n + k];
                    if !c.is_zero() {
                        out[k] += x * y * c;
                    }
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        v[i] = Q::one();
        v
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let (a, b, c) = (self.basis(i), self.basis(j), self.basis(k));
                    self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c))
                })
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| self.mul(&self.basis(i), &self.basis(j)) == self.mul(&self.basis(j), &self.basis(i))))
    }

    pub fn is_unital(&self) -> bool {
        (0..self.dim).all(|i| {
            let e = self.basis(i);
            self.mul(&self.unit, &e) == e && self.mul(&e, &self.unit) == e
        })
    }

    /// The multiplication as a 2-cochain.
    pub fn multiplication(&self) -> Cochain {
        Cochain {
            arity: 2,
            dim: self.dim,
            data: self.mult.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    pub arity: usize,
    pub dim: usize,
    pub data: Vec<Q>,
}

fn tuples(dim: usize, p: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(p as u32);
    (0..total).map(move |mut t| {
        let mut v = vec![0; p];
        for k in (0..p).rev() {
            v[k] = t % dim;
            t /= dim;
        }
        v
    })
}

fn flat(dim: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &i| acc * dim + i)
}

impl Cochain {
    pub fn zero(dim: usize, arity: usize) -> Self {
        Self {
            arity,
            dim,
            data: vec![Q::zero(); dim.pow(arity as u32 + 1)],
        }
    }

    pub fn random<R: Rng>(dim: usize, arity: usize, rng: &mut R) -> Self {
        let mut c = Self::zero(dim, arity);
        for x in c.data.iter_mut() {
            if rng.gen_bool(0.5) {
                *x = Q::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            }
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// `ξ(e_{i_1}, …, e_{i_p})`.
    pub fn value(&self, args: &[usize]) -> &[Q] {
        let o = flat(self.dim, args) * self.dim;
        &self.data[o..o + self.dim]
    }

    /// `ξ` with one argument a general vector, the rest basis elements.
    fn value_with(&self, args: &[usize], slot: usize, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        let mut a = args.to_vec();
        for (i, x) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            a[slot] = i;
            for (o, y) in out.iter_mut().zip(self.value(&a)) {
                *o += x * y;
            }
        }
        out
    }

    fn scale(&self, c: Q) -> Self {
        Self {
            data: self.data.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Q::one()))
    }
}

/// `(dξ)(a_1..a_{p+1}) = a_1 ξ(a_2..) + Σ_k (−1)^k ξ(..a_k a_{k+1}..) + (−1)^{p+1} ξ(..a_p) a_{p+1}`.
pub fn coboundary(alg: &FiniteAlgebra, xi: &Cochain) -> Cochain {
    let n = alg.dim;
    let p = xi.arity;
    let mut out = Cochain::zero(n, p + 1);
    for args in tuples(n, p + 1) {
        let mut acc = alg.mul(&alg.basis(args[0]), xi.value(&args[1..]));
        for k in 1..=p {
            let prod = alg.mul(&alg.basis(args[k - 1]), &alg.basis(args[k]));
            let mut merged: Vec<usize> = args[..k - 1].to_vec();
            merged.push(0);
            merged.extend_from_slice(&args[k + 1..]);
            let v = xi.value_with(&merged, k - 1, &prod);
            let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
            for (a, x) in acc.iter_mut().zip(v) {
                *a += sign * x;
            }
        }
        let last = alg.mul(xi.value(&args[..p]), &alg.basis(args[p]));
        let sign = if (p + 1) % 2 == 0 { Q::one() } else { -Q::one() };
        for (a, x) in acc.iter_mut().zip(last) {
            *a += sign * x;
        }
        let o = flat(n, &args) * n;
        out.data[o..o + n].copy_from_slice(&acc);
    }
    out
}

/// `(τξ)(a_1..a_p) = (−1)^{p(p+1)/2} ξ(a_p..a_1)`.
pub fn tau(xi: &Cochain) -> Cochain {
    let n = xi.dim;
    let p = xi.arity;
    let sign = if (p * (p + 1) / 2) % 2 == 0 { Q::one() } else { -Q::one() };
    let mut out = Cochain::zero(n, p);
    for args in tuples(n, p) {
        let rev: Vec<usize> = args.iter().rev().copied().collect();
        let o = flat(n, &args) * n;
        for (k, x) in xi.value(&rev).iter().enumerate() {
            out.data[o + k] = sign * x;
        }
    }
    out
}

/// `(ξ + τξ)/2` and `(ξ − τξ)/2`.
pub fn parity_split(xi: &Cochain) -> (Cochain, Cochain) {
    let t = tau(xi);
    let half = Q::new(1, 2);
    (xi.add(&t).scale(half), xi.sub(&t).scale(half))
}

fn permutations(p: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..p).collect();
    fn rec(k: usize, perm: &mut Vec<usize>, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if k == perm.len() {
            out.push((perm.clone(), sign));
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, if i == k { sign } else { -sign }, out);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, 1, &mut out);
    out
}

/// Full antisymmetrization with the `1/p!` normalization.
pub fn alt(xi: &Cochain) -> Cochain {
    let n = xi.dim;
    let p = xi.arity;
    let perms = permutations(p);
    let norm = Q::new(1, perms.len() as i64);
    let mut out = Cochain::zero(n, p);
    for args in tuples(n, p) {
        let o = flat(n, &args) * n;
        for (perm, sign) in &perms {
            let permuted: Vec<usize> = perm.iter().map(|&i| args[i]).collect();
            for (k, x) in xi.value(&permuted).iter().enumerate() {
                out.data[o + k] += norm * Q::from_integer(*sign) * x;
            }
        }
    }
    out
}

/// Leibniz rule in every slot, on all basis tuples.
pub fn is_polyderivation(alg: &FiniteAlgebra, xi: &Cochain) -> bool {
    let n = alg.dim;
    let p = xi.arity;
    for slot in 0..p {
        for args in tuples(n, p) {
            for a in 0..n {
                for b in 0..n {
                    let prod = alg.mul(&alg.basis(a), &alg.basis(b));
                    let lhs = {
                        let mut t = args.clone();
                        t[slot] = 0;
                        xi.value_with(&t, slot, &prod)
                    };
                    let mut ta = args.clone();
                    ta[slot] = b;
                    let mut tb = args.clone();
                    tb[slot] = a;
                    let r1 = alg.mul(&alg.basis(a), xi.value(&ta));
                    let r2 = alg.mul(xi.value(&tb), &alg.basis(b));
                    if lhs.iter().zip(r1.iter().zip(&r2)).any(|(l, (x, y))| *l != x + y) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Exact basis of the `p`-cocycles, optionally restricted to skew cochains.
pub fn cocycle_basis(alg: &FiniteAlgebra, p: usize, skew: bool) -> Result<Vec<Cochain>, LinalgError> {
    let n = alg.dim;
    let len = n.pow(p as u32 + 1);
    let unit = |j: usize| {
        let mut c = Cochain::zero(n, p);
        c.data[j] = Q::one();
        c
    };
    let out_len = n.pow(p as u32 + 2);
    let mut rows: Vec<SparseRow> = vec![Vec::new(); out_len + if skew { len } else { 0 }];
    for j in 0..len {
        let e = unit(j);
        for (r, x) in coboundary(alg, &e).data.into_iter().enumerate() {
            if !x.is_zero() {
                rows[r].push((j, x));
            }
        }
        if skew {
            for (r, x) in e.sub(&alt(&e)).data.into_iter().enumerate() {
                if !x.is_zero() {
                    rows[out_len + r].push((j, x));
                }
            }
        }
    }
    rows.retain(|r| !r.is_empty());
    let kernel = linalg::kernel_sparse(len, &rows)?;
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut c = Cochain::zero(n, p);
            for (j, x) in v {
                c.data[j] = x;
            }
            c
        })
        .collect())
}

pub fn skew_cocycle_is_polyderivation(alg: &FiniteAlgebra, xi: &Cochain) -> bool {
    is_polyderivation(alg, xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn test_algebras_are_well_formed() {
        for a in [
            FiniteAlgebra::truncated_polynomial(3),
            FiniteAlgebra::square_zero(2),
            FiniteAlgebra::truncated_polynomial(4),
            FiniteAlgebra::upper_triangular(),
        ] {
            assert!(a.is_associative() && a.is_unital(), "{}", a.name);
        }
        assert!(!FiniteAlgebra::upper_triangular().is_commutative());
        assert!(FiniteAlgebra::square_zero(2).is_commutative());
    }

    #[test]
    fn multiplication_is_a_cocycle() {
        let a = FiniteAlgebra::truncated_polynomial(3);
        assert!(coboundary(&a, &a.multiplication()).is_zero());
    }

    #[test]
    fn derivations_of_truncated_cubic() {
        let a = FiniteAlgebra::truncated_polynomial(3);
        let ders = cocycle_basis(&a, 1, false).unwrap();
        assert_eq!(ders.len(), 2);
        for d in &ders {
            assert!(is_polyderivation(&a, d));
        }
    }

    #[test]
    fn tau_involution_and_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xi = Cochain::random(3, 3, &mut rng);
        assert_eq!(tau(&tau(&xi)), xi);
        let (p, m) = parity_split(&xi);
        assert_eq!(tau(&p), p);
        assert_eq!(tau(&m), m.scale(-Q::one()));
        assert_eq!(p.add(&m), xi);
    }

    #[test]
    fn alt_kills_symmetric_and_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let xi = Cochain::random(3, 2, &mut rng);
        let mut sym = xi.clone();
        for args in tuples(3, 2) {
            let o = flat(3, &args) * 3;
            let r = flat(3, &[args[1], args[0]]) * 3;
            for k in 0..3 {
                sym.data[o + k] = xi.data[o + k] + xi.data[r + k];
            }
        }
        assert!(alt(&sym).is_zero());
        assert_eq!(alt(&alt(&xi)), alt(&xi));
    }
}
