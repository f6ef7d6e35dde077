//! Integer structure constants of a Chevalley basis.
//!
//! The Lie algebra basis is `{E_β : β ∈ Ω} ∪ {H_1, …, H_r}` where `H_i` is the
//! simple coroot. Brackets are
//!
//! * `[E_α, E_β] = N_{αβ} E_{α+β}` when `α + β` is a root,
//! * `[E_α, E_{−α}] = H_α`, the coroot of `α` expanded over the `H_i`,
//! * `[H_i, E_β] = ⟨β, α_i^∨⟩ E_β` and `[H_i, H_j] = 0`.
//!
//! Signs are fixed on extraspecial pairs (positive, in root order) and
//! propagated with Carter's identities. `|N_{αβ}| = p + 1`.
//!
//! The Weyl-normalized basis `X_α = μ_α E_α` with `μ_α² = (α, α)/2` satisfies
//! `(X_α, X_{−α}) = 1` and the plain cyclic rule `N_{αβ} = N_{βγ} = N_{γα}`;
//! for simply-laced types it coincides with the Chevalley basis.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rootsys::RootSystem;

/// A basis element of `g`, by ordinal: roots first (in root order), then the
/// simple coroots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisElement {
    Root(usize),
    Cartan(usize),
}

/// A formal integer combination of basis elements.
pub type LieVector = Vec<(BasisElement, i64)>;

#[derive(Debug, Clone)]
pub struct StructureConstants {
    rs: Arc<RootSystem>,
    n: Vec<i8>,
    /// μ_α² = (α, α)/2 per root.
    weight: Vec<Rational64>,
    /// coroot[α][i]: coefficient of H_i in H_α.
    coroot: Vec<Vec<i64>>,
    /// cartan_action[i][β] = β(H_i).
    cartan_action: Vec<Vec<i64>>,
}

impl StructureConstants {
    pub fn build(rs: Arc<RootSystem>) -> Self {
        let n = compute_signs(&rs);
        let len = rs.len();
        let rank = rs.rank();
        let weight = (0..len).map(|a| rs.norm2(a) / 2).collect();
        let simple = rs.simple_indices();
        let coroot = (0..len)
            .map(|a| {
                let n2 = rs.norm2(a);
                rs.root(a)
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| {
                        let v = Rational64::from_integer(i64::from(c)) * rs.norm2(simple[i]) / n2;
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let cartan_action = (0..rank)
            .map(|i| (0..len).map(|b| rs.cartan_integer(b, simple[i])).collect())
            .collect();
        Self {
            rs,
            n,
            weight,
            coroot,
            cartan_action,
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    /// Dimension of `g`.
    pub fn dim(&self) -> usize {
        self.rs.len() + self.rs.rank()
    }

    pub fn ordinal(&self, x: BasisElement) -> usize {
        match x {
            BasisElement::Root(i) => i,
            BasisElement::Cartan(i) => self.rs.len() + i,
        }
    }

    pub fn element(&self, ordinal: usize) -> BasisElement {
        if ordinal < self.rs.len() {
            BasisElement::Root(ordinal)
        } else {
            BasisElement::Cartan(ordinal - self.rs.len())
        }
    }

    /// `N_{αβ}` by root index; zero when `α + β` is not a root.
    #[inline]
    pub fn n(&self, a: usize, b: usize) -> i64 {
        i64::from(self.n[a * self.rs.len() + b])
    }

    /// `μ_α² = (α, α)/2`.
    pub fn weight(&self, a: usize) -> Rational64 {
        self.weight[a]
    }

    pub fn coroot(&self, a: usize) -> &[i64] {
        &self.coroot[a]
    }

    /// `β(H_i)`.
    pub fn cartan_value(&self, i: usize, beta: usize) -> i64 {
        self.cartan_action[i][beta]
    }

    /// `β(t_α) = (α, β)` for `t_α = [X_α, X_{−α}]` in the Weyl-normalized basis.
    pub fn weyl_pairing(&self, beta: usize, alpha: usize) -> Rational64 {
        self.rs.inner(alpha, beta)
    }

    /// Structure constant of the Weyl-normalized basis as `(sign, square)`.
    pub fn weyl_constant(&self, a: usize, b: usize) -> (i64, Rational64) {
        let n = self.n(a, b);
        match self.rs.sum_index(a, b) {
            Some(c) if n != 0 => (
                n.signum(),
                Rational64::from_integer(n * n) * self.weight[a] * self.weight[b] / self.weight[c],
            ),
            _ => (0, Rational64::zero()),
        }
    }

    pub fn bracket(&self, x: BasisElement, y: BasisElement) -> LieVector {
        use BasisElement::*;
        match (x, y) {
            (Root(a), Root(b)) => {
                if b == self.rs.neg_index(a) {
                    self.coroot[a]
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (Cartan(i), c))
                        .collect()
                } else {
                    match self.rs.sum_index(a, b) {
                        Some(c) => vec![(Root(c), self.n(a, b))],
                        None => Vec::new(),
                    }
                }
            }
            (Cartan(i), Root(b)) => {
                let v = self.cartan_action[i][b];
                if v == 0 {
                    Vec::new()
                } else {
                    vec![(Root(b), v)]
                }
            }
            (Root(a), Cartan(i)) => {
                let v = self.cartan_action[i][a];
                if v == 0 {
                    Vec::new()
                } else {
                    vec![(Root(a), -v)]
                }
            }
            (Cartan(_), Cartan(_)) => Vec::new(),
        }
    }

    pub fn bracket_vectors(&self, x: &[(BasisElement, i64)], y: &[(BasisElement, i64)]) -> LieVector {
        let mut acc: std::collections::BTreeMap<BasisElement, i64> = Default::default();
        for &(bx, cx) in x {
            for &(by, cy) in y {
                for (bz, cz) in self.bracket(bx, by) {
                    *acc.entry(bz).or_insert(0) += cx * cy * cz;
                }
            }
        }
        acc.into_iter().filter(|(_, c)| *c != 0).collect()
    }

    /// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
    pub fn jacobi_residual(&self, x: BasisElement, y: BasisElement, z: BasisElement) -> LieVector {
        let one = |e| vec![(e, 1i64)];
        let t1 = self.bracket_vectors(&one(x), &self.bracket(y, z));
        let t2 = self.bracket_vectors(&one(y), &self.bracket(z, x));
        let t3 = self.bracket_vectors(&one(z), &self.bracket(x, y));
        let mut acc: std::collections::BTreeMap<BasisElement, i64> = Default::default();
        for (e, c) in t1.into_iter().chain(t2).chain(t3) {
            *acc.entry(e).or_insert(0) += c;
        }
        acc.into_iter().filter(|(_, c)| *c != 0).collect()
    }

    /// Chevalley involution on a basis element: `E_α ↦ −E_{−α}`, `H ↦ −H`.
    pub fn involution(&self, x: BasisElement) -> (BasisElement, i64) {
        match x {
            BasisElement::Root(a) => (BasisElement::Root(self.rs.neg_index(a)), -1),
            BasisElement::Cartan(i) => (BasisElement::Cartan(i), -1),
        }
    }

    /// Copy with the sign of one constant (and its transpose) flipped.
    /// Used only by mutation controls.
    pub fn with_flipped_sign(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        let len = self.rs.len();
        out.n[a * len + b] = -out.n[a * len + b];
        out.n[b * len + a] = -out.n[b * len + a];
        out
    }

    /// Checks properties (I)–(IV) and `|N| = p + 1` on every root pair.
    /// Property (II) is checked on the Weyl-normalized constants.
    pub fn check_properties(&self) -> PropertyReport {
        let rs = &self.rs;
        let len = rs.len();
        let mut report = PropertyReport::default();
        for a in 0..len {
            for b in 0..len {
                report.pairs += 1;
                let n = self.n(a, b);
                let sum = rs.sum_index(a, b);
                if (n != 0) != sum.is_some() {
                    report.nonzero_iff_root += 1;
                }
                if self.n(b, a) != -n {
                    report.antisymmetry += 1;
                }
                if self.n(rs.neg_index(a), rs.neg_index(b)) != -n {
                    report.negation += 1;
                }
                if let Some(s) = sum {
                    let (p, _) = rs.string_indices(a, b);
                    if n.unsigned_abs() != u64::from(p) + 1 {
                        report.magnitude += 1;
                    }
                    let c = rs.neg_index(s);
                    let w_ab = self.weyl_constant(a, b);
                    if w_ab != self.weyl_constant(b, c) || w_ab != self.weyl_constant(c, a) {
                        report.cyclic += 1;
                    }
                }
            }
        }
        report
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub pairs: usize,
    pub nonzero_iff_root: usize,
    pub cyclic: usize,
    pub antisymmetry: usize,
    pub negation: usize,
    pub magnitude: usize,
}

impl PropertyReport {
    pub fn violations(&self) -> usize {
        self.nonzero_iff_root + self.cyclic + self.antisymmetry + self.negation + self.magnitude
    }
}

fn compute_signs(rs: &RootSystem) -> Vec<i8> {
    let len = rs.len();
    let mut table = vec![0i64; len * len];
    let pos: Vec<usize> = rs.positive_indices().collect();
    // positive roots are already in (height, lex) order
    for &xi in &pos {
        // special pairs (r, s), r < s in root order, r + s = ξ
        let mut special: Vec<(usize, usize)> = Vec::new();
        for &r in &pos {
            if r >= xi {
                break;
            }
            let s = match rs.index_of(&diff(rs, xi, r)) {
                Some(s) if rs.is_positive(s) && r < s => s,
                _ => continue,
            };
            special.push((r, s));
        }
        let Some(&(r1, s1)) = special.first() else {
            continue;
        };
        let (p, _) = rs.string_indices(r1, s1);
        let extra = i64::from(p) + 1;
        table[r1 * len + s1] = extra;
        table[s1 * len + r1] = -extra;
        for &(r, s) in &special[1..] {
            let lhs = {
                let t1 = match rs.sum_index(s, rs.neg_index(r1)) {
                    Some(d) => {
                        Rational64::from_integer(
                            general(rs, &table, s, rs.neg_index(r1))
                                * general(rs, &table, r, rs.neg_index(s1)),
                        ) / rs.norm2(d)
                    }
                    None => Rational64::zero(),
                };
                let t2 = match rs.sum_index(r, rs.neg_index(r1)) {
                    Some(d) => {
                        Rational64::from_integer(
                            general(rs, &table, rs.neg_index(r1), r)
                                * general(rs, &table, s, rs.neg_index(s1)),
                        ) / rs.norm2(d)
                    }
                    None => Rational64::zero(),
                };
                t1 + t2
            };
            let v = lhs * rs.norm2(xi) / extra;
            assert!(v.is_integer(), "non-integral structure constant");
            let v = v.to_integer();
            table[r * len + s] = v;
            table[s * len + r] = -v;
        }
    }
    let mut out = vec![0i8; len * len];
    for a in 0..len {
        for b in 0..len {
            out[a * len + b] = general(rs, &table, a, b) as i8;
        }
    }
    out
}

fn diff(rs: &RootSystem, a: usize, b: usize) -> Vec<i32> {
    rs.root(a)
        .coeffs()
        .iter()
        .zip(rs.root(b).coeffs())
        .map(|(x, y)| x - y)
        .collect()
}

/// `N_{ab}` for arbitrary roots, reduced to positive pairs of the table.
fn general(rs: &RootSystem, table: &[i64], a: usize, b: usize) -> i64 {
    let len = rs.len();
    let Some(c) = rs.sum_index(a, b) else {
        return 0;
    };
    let (pa, pb) = (rs.is_positive(a), rs.is_positive(b));
    match (pa, pb) {
        (true, true) => table[a * len + b],
        (false, false) => -general(rs, table, rs.neg_index(a), rs.neg_index(b)),
        (false, true) => -general(rs, table, b, a),
        (true, false) => {
            let nb = rs.neg_index(b);
            let v = if rs.is_positive(c) {
                // N_{a,b} = −(c,c)/(a,a) · N_{−b,c}
                -Rational64::from_integer(general(rs, table, nb, c)) * rs.norm2(c) / rs.norm2(a)
            } else {
                // N_{a,b} = (c,c)/(b,b) · N_{−c,a}
                Rational64::from_integer(general(rs, table, rs.neg_index(c), a)) * rs.norm2(c)
                    / rs.norm2(b)
            };
            debug_assert!(v.is_integer());
            v.to_integer()
        }
    }
}

/// `true` when every element is `±1`-weighted, i.e. the type is simply laced.
pub fn is_simply_laced(sc: &StructureConstants) -> bool {
    (0..sc.root_system().len()).all(|a| sc.weight(a).is_one())
}
