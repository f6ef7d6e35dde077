//! Linear algebra kernels.
//!
//! * exact dense rank (fraction-free Bareiss over big integers) and exact
//!   dense kernels (big-rational Gauss–Jordan), used for small systems and as
//!   cross-check oracles;
//! * a sparse kernel solver that eliminates modulo a 61-bit prime, lifts the
//!   kernel by rational reconstruction and then verifies every lifted vector
//!   exactly. Since `rank_p ≤ rank_ℚ` and the lifted vectors are independent
//!   kernel vectors over `ℚ`, the dimension it reports is exact;
//! * complex rank with complete pivoting and an explicit dead zone;
//! * least-squares expansion of a vector in a (non-orthogonal) basis.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

pub type SparseRow = Vec<(usize, Rational64)>;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("rational reconstruction failed for a kernel entry")]
    Reconstruction,
    #[error("lifted kernel vector is not an exact kernel vector")]
    Verification,
    #[error("a denominator vanishes modulo the working prime")]
    BadPrime,
    #[error("rank is indeterminate: relative pivot {0:e} lies in the dead zone")]
    Indeterminate(f64),
    #[error("singular Gram matrix")]
    Singular,
}

// ---------------------------------------------------------------- exact dense

fn to_integer_rows(rows: &[Vec<Rational64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = r
                .iter()
                .fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
            r.iter()
                .map(|x| BigInt::from(*x.numer()) * BigInt::from(l / x.denom()))
                .collect()
        })
        .collect()
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn rank_bareiss(rows: &[Vec<Rational64>]) -> usize {
    let mut m = to_integer_rows(rows);
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Exact kernel basis (one vector per free column, `1` in that column).
pub fn kernel_dense(rows: &[Vec<Rational64>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom())))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].recip();
        for c in col..ncols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..ncols {
                    let v = &m[rank][c] * &f;
                    m[r][c] = &m[r][c] - v;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

// ---------------------------------------------------------------- modular

pub const PRIME: u64 = (1 << 61) - 1;

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

#[inline]
fn neg_mod(a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        PRIME - a
    }
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

fn reduce(x: Rational64) -> Result<u64, LinalgError> {
    let p = PRIME as i128;
    let n = (*x.numer() as i128).rem_euclid(p) as u64;
    let d = (*x.denom() as i128).rem_euclid(p) as u64;
    if d == 0 {
        return Err(LinalgError::BadPrime);
    }
    Ok(mul_mod(n, inv_mod(d)))
}

/// Wang's rational reconstruction with symmetric bounds `√(p/2)`.
pub fn rational_reconstruct(a: u64) -> Option<Rational64> {
    let bound: i128 = ((PRIME / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (PRIME as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some(Rational64::new(n as i64, d as i64))
}

/// Echelon form mod p, rows keyed by leading column, pivot normalized to 1.
fn echelon_mod(rows: Vec<BTreeMap<usize, u64>>) -> BTreeMap<usize, Vec<(usize, u64)>> {
    let mut piv: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for mut row in rows {
        let mut cursor = 0usize;
        loop {
            let Some((&c, &v)) = row.range(cursor..).next() else {
                break;
            };
            match piv.get(&c) {
                Some(prow) => {
                    let f = neg_mod(v);
                    row.remove(&c);
                    for &(pc, pv) in &prow[1..] {
                        let e = row.entry(pc).or_insert(0);
                        *e = add_mod(*e, mul_mod(f, pv));
                        if *e == 0 {
                            row.remove(&pc);
                        }
                    }
                    cursor = c + 1;
                }
                None => {
                    let inv = inv_mod(v);
                    let normalized: Vec<(usize, u64)> =
                        row.iter().filter(|(&k, _)| k >= c).map(|(&k, &x)| (k, mul_mod(x, inv))).collect();
                    // everything left of c was eliminated by earlier pivots
                    debug_assert!(row.range(..c).next().is_none());
                    piv.insert(c, normalized);
                    break;
                }
            }
        }
    }
    piv
}

fn union_find_components(ncols: usize, rows: &[SparseRow]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..ncols).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for r in rows {
        if let Some(&(first, _)) = r.first() {
            let a = find(&mut parent, first);
            for &(c, _) in &r[1..] {
                let b = find(&mut parent, c);
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..ncols {
        let r = find(&mut parent, c);
        groups.entry(r).or_default().push(c);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|g| g[0]);
    out
}

fn verify_exact(rows: &[&SparseRow], v: &BTreeMap<usize, Rational64>) -> bool {
    rows.iter().all(|r| {
        let mut acc = BigRational::zero();
        for (c, a) in r.iter() {
            if let Some(x) = v.get(c) {
                let t = BigRational::new(
                    BigInt::from(*a.numer()) * BigInt::from(*x.numer()),
                    BigInt::from(*a.denom()) * BigInt::from(*x.denom()),
                );
                acc += t;
            }
        }
        acc.is_zero()
    })
}

fn kernel_component(
    cols: &[usize],
    rows: &[&SparseRow],
) -> Result<Vec<SparseRow>, LinalgError> {
    let mut modrows = Vec::with_capacity(rows.len());
    for r in rows {
        let mut m = BTreeMap::new();
        for &(c, x) in r.iter() {
            let v = reduce(x)?;
            if v != 0 {
                m.insert(c, v);
            }
        }
        if !m.is_empty() {
            modrows.push(m);
        }
    }
    let piv = echelon_mod(modrows);
    let free: Vec<usize> = cols.iter().copied().filter(|c| !piv.contains_key(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v: BTreeMap<usize, u64> = BTreeMap::new();
        v.insert(f, 1);
        for (&pc, prow) in piv.iter().rev() {
            let mut s = 0u64;
            for &(c, a) in &prow[1..] {
                if let Some(&x) = v.get(&c) {
                    s = add_mod(s, mul_mod(a, x));
                }
            }
            if s != 0 {
                v.insert(pc, neg_mod(s));
            }
        }
        let mut q = BTreeMap::new();
        for (c, x) in v {
            q.insert(c, rational_reconstruct(x).ok_or(LinalgError::Reconstruction)?);
        }
        if !verify_exact(rows, &q) {
            return Err(LinalgError::Verification);
        }
        out.push(q.into_iter().collect());
    }
    Ok(out)
}

/// Exact kernel of a sparse rational system with `ncols` unknowns.
///
/// Unknowns are split into connected components of the row/column incidence
/// graph and each block is solved independently. Every returned vector is
/// verified exactly; the vectors carry an identity pattern on the free
/// columns and are therefore independent.
pub fn kernel_sparse(ncols: usize, rows: &[SparseRow]) -> Result<Vec<SparseRow>, LinalgError> {
    let comps = union_find_components(ncols, rows);
    let mut comp_of = vec![0usize; ncols];
    for (k, g) in comps.iter().enumerate() {
        for &c in g {
            comp_of[c] = k;
        }
    }
    let mut comp_rows: Vec<Vec<&SparseRow>> = vec![Vec::new(); comps.len()];
    for r in rows {
        if let Some(&(c, _)) = r.first() {
            comp_rows[comp_of[c]].push(r);
        }
    }
    let parts: Vec<Result<Vec<SparseRow>, LinalgError>> = comps
        .par_iter()
        .zip(comp_rows.par_iter())
        .map(|(cols, rs)| kernel_component(cols, rs))
        .collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    out.sort_by_key(|v| v.first().map(|e| e.0));
    Ok(out)
}

// ---------------------------------------------------------------- complex

/// Relative pivots below this are zero.
pub const RANK_ZERO: f64 = 1e-10;
/// Relative pivots above this are nonzero; in between the rank is ambiguous.
pub const RANK_NONZERO: f64 = 1e-6;

/// Numerical rank with complete pivoting. Pivots are compared with the
/// first (largest) pivot; a pivot in `[RANK_ZERO, RANK_NONZERO]` is an error.
pub fn complex_rank(m: &[Vec<Complex64>]) -> Result<usize, LinalgError> {
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut first = 0.0f64;
    while rank < nrows.min(ncols) {
        let mut best = (0.0f64, rank, rank);
        for (r, row) in a.iter().enumerate().skip(rank) {
            for (c, x) in row.iter().enumerate().skip(rank) {
                if x.norm() > best.0 {
                    best = (x.norm(), r, c);
                }
            }
        }
        if rank == 0 {
            if best.0 == 0.0 {
                return Ok(0);
            }
            first = best.0;
        }
        let rel = best.0 / first;
        if rel < RANK_ZERO {
            break;
        }
        if rel <= RANK_NONZERO {
            return Err(LinalgError::Indeterminate(rel));
        }
        a.swap(rank, best.1);
        for row in a.iter_mut() {
            row.swap(rank, best.2);
        }
        let p = a[rank][rank];
        for r in rank + 1..nrows {
            let f = a[r][rank] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for c in rank..ncols {
                let v = a[rank][c] * f;
                a[r][c] -= v;
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Solves `A x = b` for a small square complex system with partial pivoting.
pub fn complex_solve(a: &[Vec<Complex64>], b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
    let n = b.len();
    let mut m: Vec<Vec<Complex64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut r = r.clone();
            r.push(bi);
            r
        })
        .collect();
    let scale = a.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm()))
            .ok_or(LinalgError::Singular)?;
        if m[piv][k].norm() <= 1e-13 * scale.max(1e-300) {
            return Err(LinalgError::Singular);
        }
        m.swap(k, piv);
        for r in 0..n {
            if r != k {
                let f = m[r][k] / m[k][k];
                for c in k..=n {
                    let v = m[k][c] * f;
                    m[r][c] -= v;
                }
            }
        }
    }
    Ok((0..n).map(|k| m[k][n] / m[k][k]).collect())
}

/// Coordinates of `v` in the basis `cols` (all as sparse coordinate maps)
/// by the normal equations, plus the ∞-norm of the residual.
pub fn least_squares<K: Ord + Clone>(
    cols: &[BTreeMap<K, Complex64>],
    v: &BTreeMap<K, Complex64>,
) -> Result<(Vec<Complex64>, f64), LinalgError> {
    let n = cols.len();
    let dot = |a: &BTreeMap<K, Complex64>, b: &BTreeMap<K, Complex64>| -> Complex64 {
        a.iter()
            .filter_map(|(k, x)| b.get(k).map(|y| x.conj() * y))
            .sum()
    };
    if n == 0 {
        let res = v.values().map(|x| x.norm()).fold(0.0, f64::max);
        return Ok((Vec::new(), res));
    }
    let gram: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| dot(&cols[i], &cols[j])).collect()).collect();
    let rhs: Vec<Complex64> = (0..n).map(|i| dot(&cols[i], v)).collect();
    let x = complex_solve(&gram, &rhs)?;
    let mut r: BTreeMap<K, Complex64> = v.clone();
    for (c, xi) in cols.iter().zip(&x) {
        for (k, a) in c {
            *r.entry(k.clone()).or_insert(Complex64::zero()) -= a * xi;
        }
    }
    let res = r.values().map(|x| x.norm()).fold(0.0, f64::max);
    Ok((x, res))
}
