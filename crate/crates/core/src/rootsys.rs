//! Root systems of the simple Lie algebras A–G (rank ≤ 8).
//!
//! Nodes follow Bourbaki labeling. Roots are integer coordinate vectors over
//! the simple roots and are stored in a fixed order: ascending height, ties
//! broken lexicographically. With that order the negative of root `i` sits at
//! index `len - 1 - i`.
//!
//! The bilinear form is normalized so that long roots have squared length 2.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_RANK: usize = 8;
const CACHE_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("invalid simple Lie type {family}{rank}")]
    InvalidType { family: char, rank: usize },
    #[error("cannot parse Lie type `{0}`")]
    Parse(String),
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0:?} is not a root")]
    NotARoot(Vec<i32>),
    #[error("root string undefined for proportional roots")]
    Proportional,
    #[error("node {node} out of range for rank {rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("cache: {0}")]
    Cache(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleLieType {
    family: Family,
    rank: usize,
}

impl SimpleLieType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family {
            Family::A => (1..=MAX_RANK).contains(&rank),
            Family::B | Family::C => (2..=MAX_RANK).contains(&rank),
            Family::D => (4..=MAX_RANK).contains(&rank),
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(RootSystemError::InvalidType {
                family: family.letter(),
                rank,
            })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of roots, from the classification.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * n + n,
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * n - 2 * n,
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
        }
    }

    /// Every valid type of rank at most `max_rank`.
    pub fn all_up_to_rank(max_rank: usize) -> Vec<Self> {
        let families = [
            Family::A,
            Family::B,
            Family::C,
            Family::D,
            Family::E,
            Family::F,
            Family::G,
        ];
        let mut out = Vec::new();
        for family in families {
            for rank in 1..=max_rank.min(MAX_RANK) {
                if let Ok(t) = Self::new(family, rank) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Squared lengths of the simple roots and the Dynkin edges.
    fn dynkin(&self) -> (Vec<Rational64>, Vec<(usize, usize)>) {
        let n = self.rank;
        let two = Rational64::from_integer(2);
        let one = Rational64::from_integer(1);
        let chain = |len: usize| (0..len.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
        match self.family {
            Family::A => (vec![two; n], chain(n)),
            Family::B => {
                let mut lens = vec![two; n];
                lens[n - 1] = one;
                (lens, chain(n))
            }
            Family::C => {
                let mut lens = vec![one; n];
                lens[n - 1] = two;
                (lens, chain(n))
            }
            Family::D => {
                let mut edges = chain(n - 1);
                edges.push((n - 3, n - 1));
                (vec![two; n], edges)
            }
            Family::E => {
                // 1-3-4-5-...-n with node 2 attached to node 4.
                let mut edges = vec![(0, 2), (1, 3)];
                for i in 2..n - 1 {
                    edges.push((i, i + 1));
                }
                (vec![two; n], edges)
            }
            Family::F => (vec![two, two, one, one], chain(4)),
            Family::G => (vec![Rational64::new(2, 3), two], chain(2)),
        }
    }
}

impl fmt::Display for SimpleLieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for SimpleLieType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| RootSystemError::Parse(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| RootSystemError::Parse(s.to_string()))?;
        Self::new(family, rank)
    }
}

/// Integer Cartan matrix `a_ij = 2(α_i, α_j)/(α_i, α_i)` together with the
/// symmetrizer `d_i = (α_i, α_i)/2`, so that `d_i a_ij` is symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
    symmetrizer: Vec<Rational64>,
}

impl CartanMatrix {
    pub fn of(t: SimpleLieType) -> Self {
        let form = simple_form(t);
        let n = t.rank();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = form[i][j] * 2 / form[i][i];
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let symmetrizer = (0..n).map(|i| form[i][i] / 2).collect();
        Self {
            entries,
            symmetrizer,
        }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn symmetrizer(&self) -> &[Rational64] {
        &self.symmetrizer
    }

    /// `d_i a_ij`, the symmetrized matrix.
    pub fn symmetrized(&self) -> Vec<Vec<Rational64>> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.symmetrizer[i] * self.entries[i][j])
                    .collect()
            })
            .collect()
    }

    /// Sylvester's criterion on the symmetrized matrix.
    pub fn is_positive_definite(&self) -> bool {
        let s = self.symmetrized();
        (1..=self.rank()).all(|k| {
            let minor: Vec<Vec<Rational64>> = s[..k].iter().map(|row| row[..k].to_vec()).collect();
            rational_det(minor).is_positive()
        })
    }
}

fn rational_det(mut m: Vec<Vec<Rational64>>) -> Rational64 {
    let n = m.len();
    let mut det = Rational64::from_integer(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational64::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let sub = f * m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

fn simple_form(t: SimpleLieType) -> Vec<Vec<Rational64>> {
    let (lens, edges) = t.dynkin();
    let n = t.rank();
    let mut form = vec![vec![Rational64::zero(); n]; n];
    for i in 0..n {
        form[i][i] = lens[i];
    }
    for (i, j) in edges {
        let v = -(lens[i].max(lens[j]) / 2);
        form[i][j] = v;
        form[j][i] = v;
    }
    form
}

/// A root, as coordinates over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    coeffs: Vec<i32>,
}

impl Root {
    pub fn new(coeffs: Vec<i32>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.coeffs
    }

    pub fn height(&self) -> i32 {
        self.coeffs.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.height() > 0
    }

    pub fn neg(&self) -> Root {
        Root::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Root) -> Vec<i32> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Converts a coefficient vector written on the E8 diagram drawn as a
/// seven-node chain with the branch node hanging off the third chain node
/// into Bourbaki coordinates. Chain position 1 is Bourbaki node 1, positions
/// 2..7 are nodes 3..8 and the branch node is node 2.
pub fn e8_from_chain_picture(chain: [i32; 7], branch: i32) -> Vec<i32> {
    vec![
        chain[0], branch, chain[1], chain[2], chain[3], chain[4], chain[5], chain[6],
    ]
}

/// Bourbaki index (0-based) of the E8 branch node.
pub const E8_TRIVALENT_NODE: usize = 3;

#[derive(Debug, Clone)]
pub struct RootSystem {
    lie_type: SimpleLieType,
    cartan: CartanMatrix,
    form: Vec<Vec<Rational64>>,
    roots: Vec<Root>,
    index: HashMap<Vec<i32>, usize>,
    // sum table: sums[i * n + j] = index of root_i + root_j, or u16::MAX
    sums: Vec<u16>,
}

const NO_ROOT: u16 = u16::MAX;

impl RootSystem {
    /// Closes the simple roots under simple reflections.
    pub fn build(t: SimpleLieType) -> Self {
        let cartan = CartanMatrix::of(t);
        let form = simple_form(t);
        let n = t.rank();
        let simple: Vec<Vec<i32>> = (0..n)
            .map(|i| (0..n).map(|j| i32::from(i == j)).collect())
            .collect();
        let mut seen: HashSet<Vec<i32>> = simple.iter().cloned().collect();
        let mut frontier = simple;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in &frontier {
                for i in 0..n {
                    let w = reflect(&cartan, v, i);
                    if seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        let mut coeffs: Vec<Vec<i32>> = seen.into_iter().collect();
        Self::from_sorted(t, cartan, form, {
            sort_roots(&mut coeffs);
            coeffs
        })
    }

    fn from_sorted(
        lie_type: SimpleLieType,
        cartan: CartanMatrix,
        form: Vec<Vec<Rational64>>,
        coeffs: Vec<Vec<i32>>,
    ) -> Self {
        let index: HashMap<Vec<i32>, usize> = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let roots: Vec<Root> = coeffs.into_iter().map(Root::new).collect();
        let len = roots.len();
        let mut sums = vec![NO_ROOT; len * len];
        for i in 0..len {
            for j in 0..len {
                if let Some(&k) = index.get(&roots[i].add(&roots[j])) {
                    sums[i * len + j] = k as u16;
                }
            }
        }
        Self {
            lie_type,
            cartan,
            form,
            roots,
            index,
            sums,
        }
    }

    pub fn lie_type(&self) -> SimpleLieType {
        self.lie_type
    }

    pub fn rank(&self) -> usize {
        self.lie_type.rank()
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn index_of(&self, coeffs: &[i32]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    pub fn is_root(&self, v: &[i32]) -> Result<bool, RootSystemError> {
        self.check_len(v)?;
        Ok(self.index.contains_key(v))
    }

    fn check_len(&self, v: &[i32]) -> Result<(), RootSystemError> {
        if v.len() != self.rank() {
            return Err(RootSystemError::LengthMismatch {
                expected: self.rank(),
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn neg_index(&self, i: usize) -> usize {
        self.len() - 1 - i
    }

    /// Index of `root_i + root_j` when that sum is a root.
    #[inline]
    pub fn sum_index(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.sums[i * self.len() + j];
        (k != NO_ROOT).then_some(k as usize)
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i >= self.len() / 2
    }

    pub fn positive_indices(&self) -> std::ops::Range<usize> {
        self.len() / 2..self.len()
    }

    /// Indices of the simple roots, in node order.
    pub fn simple_indices(&self) -> Vec<usize> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                let v: Vec<i32> = (0..n).map(|j| i32::from(i == j)).collect();
                self.index[&v]
            })
            .collect()
    }

    pub fn height(&self, i: usize) -> i32 {
        self.roots[i].height()
    }

    /// The bilinear form on the simple-root coordinates.
    pub fn form(&self) -> &[Vec<Rational64>] {
        &self.form
    }

    pub fn pairing(&self, a: &[i32], b: &[i32]) -> Rational64 {
        let mut acc = Rational64::zero();
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    acc += self.form[i][j] * i64::from(ai * bj);
                }
            }
        }
        acc
    }

    /// `(root_i, root_j)`.
    pub fn inner(&self, i: usize, j: usize) -> Rational64 {
        self.pairing(self.roots[i].coeffs(), self.roots[j].coeffs())
    }

    pub fn norm2(&self, i: usize) -> Rational64 {
        self.inner(i, i)
    }

    /// `2(β, α)/(α, α)`.
    pub fn cartan_integer(&self, beta: usize, alpha: usize) -> i64 {
        let v = self.inner(beta, alpha) * 2 / self.norm2(alpha);
        debug_assert!(v.is_integer());
        v.to_integer()
    }

    pub fn highest_root(&self) -> &Root {
        self.roots.last().expect("root system is never empty")
    }

    /// `(p, q)` with `p = max{k : β − kα ∈ Ω}` and `q = max{k : β + kα ∈ Ω}`.
    pub fn root_string(&self, alpha: &Root, beta: &Root) -> Result<(u32, u32), RootSystemError> {
        let a = self
            .index_of(alpha.coeffs())
            .ok_or_else(|| RootSystemError::NotARoot(alpha.coeffs().to_vec()))?;
        let b = self
            .index_of(beta.coeffs())
            .ok_or_else(|| RootSystemError::NotARoot(beta.coeffs().to_vec()))?;
        if a == b || a == self.neg_index(b) {
            return Err(RootSystemError::Proportional);
        }
        Ok(self.string_indices(a, b))
    }

    pub fn string_indices(&self, a: usize, b: usize) -> (u32, u32) {
        let na = self.neg_index(a);
        let walk = |step: usize| {
            let mut k = 0;
            let mut cur = b;
            while let Some(next) = self.sum_index(cur, step) {
                k += 1;
                cur = next;
            }
            k
        };
        (walk(na), walk(a))
    }

    /// Structured-text cache; see [`RootSystem::from_cache_text`].
    pub fn to_cache_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("phipoisson-roots v{CACHE_VERSION}\n"));
        out.push_str(&format!("type {}\n", self.lie_type));
        out.push_str(&format!("rank {}\n", self.rank()));
        out.push_str(&format!("count {}\n", self.len()));
        for r in &self.roots {
            let line: Vec<String> = r.coeffs().iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Loads a cache file and checks it against a fresh enumeration.
    pub fn from_cache_text(text: &str) -> Result<Self, RootSystemError> {
        let bad = |msg: &str| RootSystemError::Cache(msg.to_string());
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty cache"))?;
        if header.trim() != format!("phipoisson-roots v{CACHE_VERSION}") {
            return Err(bad("unsupported cache version"));
        }
        let mut field = |key: &str| -> Result<String, RootSystemError> {
            let line = lines.next().ok_or_else(|| bad("truncated header"))?;
            line.strip_prefix(key)
                .map(|v| v.trim().to_string())
                .ok_or_else(|| RootSystemError::Cache(format!("expected `{key}`")))
        };
        let t: SimpleLieType = field("type")?.parse()?;
        let rank: usize = field("rank")?.parse().map_err(|_| bad("bad rank"))?;
        let count: usize = field("count")?.parse().map_err(|_| bad("bad count"))?;
        if rank != t.rank() || count != t.root_count() {
            return Err(bad("header does not match type"));
        }
        let mut coeffs = Vec::with_capacity(count);
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let v: Result<Vec<i32>, _> = line.split_whitespace().map(str::parse).collect();
            let v = v.map_err(|_| bad("bad coefficient"))?;
            if v.len() != rank {
                return Err(bad("bad root length"));
            }
            coeffs.push(v);
        }
        let fresh = Self::build(t);
        let cached: Vec<&[i32]> = coeffs.iter().map(|c| c.as_slice()).collect();
        let rebuilt: Vec<&[i32]> = fresh.roots.iter().map(|r| r.coeffs()).collect();
        if cached != rebuilt {
            return Err(bad("cached roots differ from enumeration"));
        }
        Ok(fresh)
    }
}

fn reflect(cartan: &CartanMatrix, v: &[i32], i: usize) -> Vec<i32> {
    // <v, α_i^∨> = Σ_j v_j a_ij
    let c: i64 = v
        .iter()
        .enumerate()
        .map(|(j, &vj)| i64::from(vj) * cartan.entry(i, j))
        .sum();
    let mut w = v.to_vec();
    w[i] -= c as i32;
    w
}

fn sort_roots(coeffs: &mut [Vec<i32>]) {
    coeffs.sort_by(|a, b| {
        let ha: i32 = a.iter().sum();
        let hb: i32 = b.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
}
