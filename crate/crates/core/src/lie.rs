//! Finite simple Lie algebras in a Chevalley basis.
//!
//! Conventions:
//! - simple roots are numbered as in Bourbaki;
//! - `cartan[i][j] = <α_i, α_j^∨> = 2(α_i, α_j)/(α_j, α_j)`, so the marks are a
//!   left null vector of the affine Cartan matrix and the comarks a right one;
//! - the invariant form is normalized so that the highest root has `(θ, θ) = 2`;
//! - the Cartan subalgebra basis is the simple coroots `h_i = α_i^∨`;
//! - structure constants `N_{α,β}` are fixed by taking every extraspecial pair
//!   positive, with `N_{-α,-β} = -N_{α,β}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inverse, SparseVec};
use crate::rational::{q, qf, Q};

pub const DEFAULT_RANK_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn parse(s: &str) -> Option<Series> {
        Some(match s.trim().to_ascii_uppercase().as_str() {
            "A" => Series::A,
            "B" => Series::B,
            "C" => Series::C,
            "D" => Series::D,
            "E" => Series::E,
            "F" => Series::F,
            "G" => Series::G,
            _ => return None,
        })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// JSON form of an algebra request: `{"series":"A","rank":2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub series: String,
    pub rank: usize,
}

impl AlgebraSpec {
    /// Parses compact names such as `A2` or `G2`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        let mut chars = name.chars();
        let series = chars.next().map(|c| c.to_string()).unwrap_or_default();
        let rank = chars
            .as_str()
            .parse::<usize>()
            .map_err(|_| Error::UnsupportedAlgebra {
                series: series.clone(),
                rank: 0,
                reason: format!("cannot parse algebra name {name:?}"),
            })?;
        Ok(Self { series, rank })
    }

    pub fn build(&self) -> Result<SimpleAlgebra> {
        let series = Series::parse(&self.series).ok_or_else(|| Error::UnsupportedAlgebra {
            series: self.series.clone(),
            rank: self.rank,
            reason: "unknown series".into(),
        })?;
        SimpleAlgebra::new(series, self.rank)
    }
}

/// Basis element of a finite simple algebra: a root vector `e_α` (by index
/// into [`SimpleAlgebra::roots`]) or a simple coroot `h_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FiniteBasis {
    Cartan(usize),
    Root(usize),
}

#[derive(Debug, Clone)]
pub struct SimpleAlgebra {
    pub series: Series,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// `(α_i, α_j)` normalized to `(θ, θ) = 2`.
    pub gram: Vec<Vec<Q>>,
    /// Positive roots over the simple roots, sorted by height and then by
    /// descending coefficient vector.
    pub positive_roots: Vec<Vec<i64>>,
    /// All roots: the positive ones followed by their negatives in the same order.
    pub roots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    pub comarks: Vec<i64>,
    /// Row `j` is `ω_j` expanded over the simple roots.
    pub fundamental_weights_root_basis: Vec<Vec<Q>>,
    /// `N_{α,β}` for root indices whose sum is a root.
    pub chevalley_constants: HashMap<(usize, usize), i64>,
    root_index: HashMap<Vec<i64>, usize>,
}

fn series_gram(series: Series, r: usize) -> Option<Vec<Vec<Q>>> {
    let mut g = vec![vec![Q::zero(); r]; r];
    let link = |g: &mut Vec<Vec<Q>>, i: usize, j: usize, v: Q| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match series {
        Series::A => {
            for i in 0..r {
                g[i][i] = q(2);
                if i + 1 < r {
                    link(&mut g, i, i + 1, q(-1));
                }
            }
        }
        Series::B => {
            if r < 2 {
                return None;
            }
            for i in 0..r {
                g[i][i] = if i + 1 == r { q(1) } else { q(2) };
                if i + 1 < r {
                    link(&mut g, i, i + 1, q(-1));
                }
            }
        }
        Series::C => {
            if r < 2 {
                return None;
            }
            for i in 0..r {
                g[i][i] = if i + 1 == r { q(2) } else { q(1) };
                if i + 1 < r {
                    let v = if i + 2 == r { q(-1) } else { qf(-1, 2) };
                    link(&mut g, i, i + 1, v);
                }
            }
        }
        Series::D => {
            if r < 4 {
                return None;
            }
            for i in 0..r {
                g[i][i] = q(2);
            }
            for i in 0..r - 2 {
                link(&mut g, i, i + 1, q(-1));
            }
            link(&mut g, r - 3, r - 1, q(-1));
        }
        Series::E => {
            if !(6..=8).contains(&r) {
                return None;
            }
            for i in 0..r {
                g[i][i] = q(2);
            }
            // Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4.
            link(&mut g, 0, 2, q(-1));
            link(&mut g, 1, 3, q(-1));
            for i in 2..r - 1 {
                link(&mut g, i, i + 1, q(-1));
            }
        }
        Series::F => {
            if r != 4 {
                return None;
            }
            g[0][0] = q(2);
            g[1][1] = q(2);
            g[2][2] = q(1);
            g[3][3] = q(1);
            link(&mut g, 0, 1, q(-1));
            link(&mut g, 1, 2, q(-1));
            link(&mut g, 2, 3, qf(-1, 2));
        }
        Series::G => {
            if r != 2 {
                return None;
            }
            g[0][0] = qf(2, 3);
            g[1][1] = q(2);
            link(&mut g, 0, 1, q(-1));
        }
    }
    Some(g)
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

fn root_order(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    let ha: i64 = a.iter().sum();
    let hb: i64 = b.iter().sum();
    ha.cmp(&hb).then_with(|| b.cmp(a))
}

impl SimpleAlgebra {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        Self::with_cap(series, rank, DEFAULT_RANK_CAP)
    }

    pub fn with_cap(series: Series, rank: usize, cap: usize) -> Result<Self> {
        let unsupported = |reason: &str| Error::UnsupportedAlgebra {
            series: series.to_string(),
            rank,
            reason: reason.into(),
        };
        if rank == 0 {
            return Err(unsupported("rank must be positive"));
        }
        if rank > cap {
            return Err(unsupported(&format!(
                "rank exceeds the configured cap {cap}"
            )));
        }
        let gram = series_gram(series, rank)
            .ok_or_else(|| unsupported("no simple algebra of this type"))?;
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let v = q(2) * gram[i][j] / gram[j][j];
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();

        let positive_roots = Self::generate_positive_roots(&cartan);
        let mut roots = positive_roots.clone();
        roots.extend(positive_roots.iter().map(|r| neg(r)));
        let root_index: HashMap<Vec<i64>, usize> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let highest_root = positive_roots
            .last()
            .cloned()
            .expect("nonempty root system");

        let cartan_q: Vec<Vec<Q>> = cartan
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        let fundamental_weights_root_basis =
            inverse(&cartan_q).expect("finite Cartan matrix is invertible");

        let mut alg = SimpleAlgebra {
            series,
            rank,
            cartan,
            gram,
            positive_roots,
            roots,
            highest_root,
            comarks: Vec::new(),
            fundamental_weights_root_basis,
            chevalley_constants: HashMap::new(),
            root_index,
        };
        let theta2 = alg.root_norm2(&alg.highest_root.clone());
        if theta2 != q(2) {
            let s = q(2) / theta2;
            for row in alg.gram.iter_mut() {
                for x in row.iter_mut() {
                    *x *= s;
                }
            }
        }
        alg.comarks = (0..rank)
            .map(|j| {
                let c = q(alg.highest_root[j]) * alg.gram[j][j] / q(2);
                c.to_integer()
            })
            .collect();
        alg.chevalley_constants = alg.compute_structure_constants();
        Ok(alg)
    }

    fn generate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let r = cartan.len();
        let simple: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut all: std::collections::HashSet<Vec<i64>> = simple.iter().cloned().collect();
        let mut layer = simple.clone();
        let mut out = simple;
        while !layer.is_empty() {
            let mut next: Vec<Vec<i64>> = Vec::new();
            for beta in &layer {
                for i in 0..r {
                    // α_i-string through β: β - qα_i, ..., β + pα_i with p - q = -<β, α_i^∨>.
                    let mut qn = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if all.contains(&down) {
                            qn += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..r).map(|k| beta[k] * cartan[k][i]).sum();
                    let p = qn - pairing;
                    if p > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if all.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out.sort_by(|a, b| root_order(a, b));
        out
    }

    pub fn dim(&self) -> usize {
        self.roots.len() + self.rank
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn marks(&self) -> &[i64] {
        &self.highest_root
    }

    /// Dual Coxeter number `1 + Σ č_j`.
    pub fn dual_coxeter(&self) -> i64 {
        1 + self.comarks.iter().sum::<i64>()
    }

    pub fn root_index(&self, coeffs: &[i64]) -> Option<usize> {
        self.root_index.get(coeffs).copied()
    }

    pub fn is_root(&self, coeffs: &[i64]) -> bool {
        self.root_index.contains_key(coeffs)
    }

    pub fn is_positive_index(&self, idx: usize) -> bool {
        idx < self.positive_roots.len()
    }

    pub fn negative_index(&self, idx: usize) -> usize {
        let p = self.positive_roots.len();
        if idx < p {
            idx + p
        } else {
            idx - p
        }
    }

    /// `(λ, μ)` for vectors over the simple roots.
    pub fn inner(&self, a: &[Q], b: &[Q]) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    pub fn root_norm2(&self, coeffs: &[i64]) -> Q {
        let v: Vec<Q> = coeffs.iter().map(|&x| q(x)).collect();
        self.inner(&v, &v)
    }

    /// `<β, α_i^∨>` for β over the simple roots.
    pub fn pairing_with_coroot(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|k| beta[k] * self.cartan[k][i]).sum()
    }

    /// Coroot `α^∨` expanded over the simple coroots.
    pub fn coroot(&self, coeffs: &[i64]) -> Vec<Q> {
        let n2 = self.root_norm2(coeffs);
        (0..self.rank)
            .map(|i| q(coeffs[i]) * self.gram[i][i] / n2)
            .collect()
    }

    fn compute_structure_constants(&self) -> HashMap<(usize, usize), i64> {
        let np = self.positive_roots.len();
        let mut pos: HashMap<(usize, usize), i64> = HashMap::new();
        for xi_idx in 0..np {
            let xi = self.positive_roots[xi_idx].clone();
            if xi.iter().sum::<i64>() == 1 {
                continue;
            }
            // Extraspecial pair: smallest γ with ξ - γ a positive root.
            let (g_idx, d_idx) = (0..np)
                .find_map(|g| {
                    let d: Vec<i64> = xi
                        .iter()
                        .zip(&self.positive_roots[g])
                        .map(|(a, b)| a - b)
                        .collect();
                    self.root_index(&d).filter(|&di| di < np).map(|di| (g, di))
                })
                .expect("non-simple positive root decomposes");
            let gamma = self.positive_roots[g_idx].clone();
            let delta = self.positive_roots[d_idx].clone();
            let mut p = 0;
            let mut probe: Vec<i64> = delta.iter().zip(&gamma).map(|(a, b)| a - b).collect();
            while self.is_root(&probe) {
                p += 1;
                probe = probe.iter().zip(&gamma).map(|(a, b)| a - b).collect();
            }
            let n_gd = p + 1;
            pos.insert((g_idx, d_idx), n_gd);
            pos.insert((d_idx, g_idx), -n_gd);
            let xi2 = self.root_norm2(&xi);
            for a_idx in 0..np {
                let alpha = &self.positive_roots[a_idx];
                let beta: Vec<i64> = xi.iter().zip(alpha).map(|(a, b)| a - b).collect();
                let Some(b_idx) = self.root_index(&beta).filter(|&b| b < np) else {
                    continue;
                };
                if a_idx >= b_idx || a_idx == g_idx {
                    continue;
                }
                let ng = neg(&gamma);
                let nd = neg(&delta);
                let mut s = Q::zero();
                let bg = add(&beta, &ng);
                if self.is_root(&bg) {
                    s += q(self.n_general(&pos, &beta, &ng) * self.n_general(&pos, alpha, &nd))
                        / self.root_norm2(&bg);
                }
                let ag = add(alpha, &ng);
                if self.is_root(&ag) {
                    s += q(self.n_general(&pos, &ng, alpha) * self.n_general(&pos, &beta, &nd))
                        / self.root_norm2(&ag);
                }
                let val = xi2 * s / q(n_gd);
                assert!(val.is_integer(), "non-integral structure constant");
                let v = val.to_integer();
                pos.insert((a_idx, b_idx), v);
                pos.insert((b_idx, a_idx), -v);
            }
        }
        let mut all = HashMap::new();
        for (i, x) in self.roots.iter().enumerate() {
            for (j, y) in self.roots.iter().enumerate() {
                let n = self.n_general(&pos, x, y);
                if n != 0 {
                    all.insert((i, j), n);
                }
            }
        }
        all
    }

    fn n_general(&self, pos: &HashMap<(usize, usize), i64>, x: &[i64], y: &[i64]) -> i64 {
        let z = add(x, y);
        if !self.is_root(&z) {
            return 0;
        }
        let positive = |v: &[i64]| v.iter().any(|&c| c > 0);
        match (positive(x), positive(y)) {
            (true, true) => {
                let i = self.root_index(x).unwrap();
                let j = self.root_index(y).unwrap();
                *pos.get(&(i, j))
                    .expect("positive pair computed in height order")
            }
            (false, false) => -self.n_general(pos, &neg(x), &neg(y)),
            (false, true) => -self.n_general(pos, y, x),
            (true, false) => {
                if positive(&z) {
                    // x = a + z with a = -y; N_{x,y}/(z,z) = N_{y,-z}/(x,x) and N_{-a,-z} = -N_{a,z}.
                    let a = neg(y);
                    let v =
                        -self.root_norm2(&z) / self.root_norm2(x) * q(self.n_general(pos, &a, &z));
                    v.to_integer()
                } else {
                    -self.n_general(pos, &neg(x), &neg(y))
                }
            }
        }
    }

    fn check(&self, x: FiniteBasis) -> Result<()> {
        let ok = match x {
            FiniteBasis::Cartan(i) => i < self.rank,
            FiniteBasis::Root(i) => i < self.roots.len(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// All basis elements: the Cartan part first, then root vectors.
    pub fn basis(&self) -> Vec<FiniteBasis> {
        (0..self.rank)
            .map(FiniteBasis::Cartan)
            .chain((0..self.roots.len()).map(FiniteBasis::Root))
            .collect()
    }

    /// `[x, y]` in the Chevalley basis.
    pub fn finite_bracket(&self, x: FiniteBasis, y: FiniteBasis) -> Result<SparseVec<FiniteBasis>> {
        self.check(x)?;
        self.check(y)?;
        let mut out = BTreeMap::new();
        match (x, y) {
            (FiniteBasis::Cartan(_), FiniteBasis::Cartan(_)) => {}
            (FiniteBasis::Cartan(i), FiniteBasis::Root(a)) => {
                let c = self.pairing_with_coroot(&self.roots[a], i);
                if c != 0 {
                    out.insert(FiniteBasis::Root(a), q(c));
                }
            }
            (FiniteBasis::Root(a), FiniteBasis::Cartan(i)) => {
                let c = self.pairing_with_coroot(&self.roots[a], i);
                if c != 0 {
                    out.insert(FiniteBasis::Root(a), q(-c));
                }
            }
            (FiniteBasis::Root(a), FiniteBasis::Root(b)) => {
                if self.negative_index(a) == b {
                    for (i, c) in self.coroot(&self.roots[a]).into_iter().enumerate() {
                        if !c.is_zero() {
                            out.insert(FiniteBasis::Cartan(i), c);
                        }
                    }
                } else if let Some(&n) = self.chevalley_constants.get(&(a, b)) {
                    let s = add(&self.roots[a], &self.roots[b]);
                    out.insert(FiniteBasis::Root(self.root_index(&s).unwrap()), q(n));
                }
            }
        }
        Ok(out)
    }

    /// Normalized invariant form `B(x, y)`.
    pub fn invariant_form(&self, x: FiniteBasis, y: FiniteBasis) -> Result<Q> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (x, y) {
            (FiniteBasis::Cartan(i), FiniteBasis::Cartan(j)) => {
                q(4) * self.gram[i][j] / (self.gram[i][i] * self.gram[j][j])
            }
            (FiniteBasis::Root(a), FiniteBasis::Root(b)) if self.negative_index(a) == b => {
                q(2) / self.root_norm2(&self.roots[a])
            }
            _ => Q::zero(),
        })
    }

    pub fn finite_bracket_vec(
        &self,
        x: &SparseVec<FiniteBasis>,
        y: &SparseVec<FiniteBasis>,
    ) -> Result<SparseVec<FiniteBasis>> {
        let mut out = BTreeMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                let br = self.finite_bracket(*a, *b)?;
                crate::linalg::axpy(&mut out, ca * cb, &br);
            }
        }
        Ok(out)
    }

    pub fn invariant_form_vec(
        &self,
        x: &SparseVec<FiniteBasis>,
        y: &SparseVec<FiniteBasis>,
    ) -> Result<Q> {
        let mut s = Q::zero();
        for (a, ca) in x {
            for (b, cb) in y {
                s += ca * cb * self.invariant_form(*a, *b)?;
            }
        }
        Ok(s)
    }

    /// Human-readable root, e.g. `α1+α2` or `-(α1+α2)`.
    pub fn fmt_root(coeffs: &[i64]) -> String {
        let negative = coeffs.iter().any(|&c| c < 0);
        let body: Vec<String> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let c = c.abs();
                if c == 1 {
                    format!("α{}", i + 1)
                } else {
                    format!("{}α{}", c, i + 1)
                }
            })
            .collect();
        let s = body.join("+");
        if !negative {
            s
        } else if body.len() == 1 {
            format!("-{s}")
        } else {
            format!("-({s})")
        }
    }

    pub fn fmt_basis(&self, x: FiniteBasis) -> String {
        match x {
            FiniteBasis::Cartan(i) => format!("h{}", i + 1),
            FiniteBasis::Root(a) => format!("e[{}]", Self::fmt_root(&self.roots[a])),
        }
    }

    pub fn dump(&self) -> AlgebraDump {
        let mut constants: Vec<(Vec<i64>, Vec<i64>, i64)> = self
            .chevalley_constants
            .iter()
            .filter(|((a, b), _)| self.is_positive_index(*a) && self.is_positive_index(*b))
            .map(|((a, b), n)| (self.roots[*a].clone(), self.roots[*b].clone(), *n))
            .collect();
        constants.sort();
        AlgebraDump {
            series: self.series.to_string(),
            rank: self.rank,
            cartan: self.cartan.clone(),
            positive_roots: self.positive_roots.clone(),
            highest_root: self.highest_root.clone(),
            marks: self.highest_root.clone(),
            comarks: self.comarks.clone(),
            root_lengths: self
                .positive_roots
                .iter()
                .map(|r| crate::rational::fmt_q(&self.root_norm2(r)))
                .collect(),
            positive_structure_constants: constants,
        }
    }
}

/// Serializable summary for golden comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDump {
    pub series: String,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    pub marks: Vec<i64>,
    pub comarks: Vec<i64>,
    pub root_lengths: Vec<String>,
    pub positive_structure_constants: Vec<(Vec<i64>, Vec<i64>, i64)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jacobi_holds(alg: &SimpleAlgebra) -> bool {
        let basis = alg.basis();
        for (i, &x) in basis.iter().enumerate() {
            for (j, &y) in basis.iter().enumerate().skip(i + 1) {
                let xy = alg.finite_bracket(x, y).unwrap();
                for &z in basis.iter().skip(j + 1) {
                    let zv: SparseVec<FiniteBasis> = [(z, q(1))].into_iter().collect();
                    let xv: SparseVec<FiniteBasis> = [(x, q(1))].into_iter().collect();
                    let yv: SparseVec<FiniteBasis> = [(y, q(1))].into_iter().collect();
                    let mut sum = alg.finite_bracket_vec(&xy, &zv).unwrap();
                    let yz = alg.finite_bracket(y, z).unwrap();
                    crate::linalg::axpy(&mut sum, q(1), &alg.finite_bracket_vec(&yz, &xv).unwrap());
                    let zx = alg.finite_bracket(z, x).unwrap();
                    crate::linalg::axpy(&mut sum, q(1), &alg.finite_bracket_vec(&zx, &yv).unwrap());
                    if !sum.is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Independent enumeration: repeatedly reflect the simple roots by all
    /// simple reflections until the set stops growing.
    fn roots_by_reflection(alg: &SimpleAlgebra) -> std::collections::BTreeSet<Vec<i64>> {
        let r = alg.rank;
        let mut set: std::collections::BTreeSet<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        loop {
            let mut grown = false;
            for beta in set.clone() {
                for i in 0..r {
                    let c = alg.pairing_with_coroot(&beta, i);
                    let mut img = beta.clone();
                    img[i] -= c;
                    grown |= set.insert(img);
                }
            }
            if !grown {
                return set;
            }
        }
    }

    #[test]
    fn a1_smallest_case() {
        let a = SimpleAlgebra::new(Series::A, 1).unwrap();
        assert_eq!(a.positive_roots, vec![vec![1]]);
        assert_eq!(a.marks(), &[1]);
        assert_eq!(a.comarks, vec![1]);
    }

    #[test]
    fn a2_roots_and_marks() {
        let a = SimpleAlgebra::new(Series::A, 2).unwrap();
        assert_eq!(a.positive_roots, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(a.highest_root, vec![1, 1]);
        assert_eq!(a.marks(), &[1, 1]);
        assert_eq!(a.dim(), 8);
    }

    #[test]
    fn g2_matches_reflection_closure() {
        let g = SimpleAlgebra::new(Series::G, 2).unwrap();
        assert_eq!(g.num_positive_roots(), 6);
        assert_eq!(g.marks(), &[3, 2]);
        assert_eq!(g.comarks, vec![1, 2]);
        let all: std::collections::BTreeSet<Vec<i64>> = g.roots.iter().cloned().collect();
        assert_eq!(all, roots_by_reflection(&g));
    }

    #[test]
    fn root_counts_for_every_series() {
        let cases = [
            (Series::A, 3, 6),
            (Series::B, 2, 4),
            (Series::B, 3, 9),
            (Series::C, 3, 9),
            (Series::C, 4, 16),
            (Series::D, 4, 12),
            (Series::D, 5, 20),
            (Series::E, 6, 36),
            (Series::E, 7, 63),
            (Series::E, 8, 120),
            (Series::F, 4, 24),
            (Series::G, 2, 6),
        ];
        for (s, r, n) in cases {
            let alg = SimpleAlgebra::new(s, r).unwrap();
            assert_eq!(alg.num_positive_roots(), n, "{s}{r}");
            let all: std::collections::BTreeSet<Vec<i64>> = alg.roots.iter().cloned().collect();
            assert_eq!(all, roots_by_reflection(&alg), "{s}{r}");
        }
    }

    #[test]
    fn known_marks_and_dual_coxeter() {
        let f4 = SimpleAlgebra::new(Series::F, 4).unwrap();
        assert_eq!(f4.marks(), &[2, 3, 4, 2]);
        assert_eq!(f4.dual_coxeter(), 9);
        let e8 = SimpleAlgebra::new(Series::E, 8).unwrap();
        assert_eq!(e8.marks(), &[2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(e8.dual_coxeter(), 30);
        let b3 = SimpleAlgebra::new(Series::B, 3).unwrap();
        assert_eq!(b3.marks(), &[1, 2, 2]);
        assert_eq!(b3.dual_coxeter(), 5);
        let c3 = SimpleAlgebra::new(Series::C, 3).unwrap();
        assert_eq!(c3.marks(), &[2, 2, 1]);
        assert_eq!(c3.dual_coxeter(), 4);
    }

    #[test]
    fn cartan_shape_and_marks_annihilation() {
        for (s, r) in [
            (Series::A, 4),
            (Series::B, 4),
            (Series::C, 3),
            (Series::D, 5),
            (Series::E, 6),
            (Series::F, 4),
            (Series::G, 2),
        ] {
            let alg = SimpleAlgebra::new(s, r).unwrap();
            for i in 0..r {
                assert_eq!(alg.cartan[i][i], 2);
                for j in 0..r {
                    if i != j {
                        assert!(alg.cartan[i][j] <= 0);
                    }
                }
            }
            // c_0 = 1 with row 0 of the affine matrix given by α_0 = -θ.
            let theta = &alg.highest_root;
            for k in 0..r {
                let a0k = -alg.pairing_with_coroot(theta, k);
                let s: i64 = a0k + (0..r).map(|j| theta[j] * alg.cartan[j][k]).sum::<i64>();
                assert_eq!(s, 0);
            }
            // ω A = I
            for j in 0..r {
                for i in 0..r {
                    let v: Q = (0..r)
                        .map(|k| alg.fundamental_weights_root_basis[j][k] * q(alg.cartan[k][i]))
                        .sum();
                    assert_eq!(v, if i == j { q(1) } else { q(0) });
                }
            }
        }
    }

    #[test]
    fn chevalley_relations_a2() {
        let a = SimpleAlgebra::new(Series::A, 2).unwrap();
        let e1 = FiniteBasis::Root(0);
        let e2 = FiniteBasis::Root(1);
        let f1 = FiniteBasis::Root(3);
        let br = a.finite_bracket(e1, f1).unwrap();
        assert_eq!(br, [(FiniteBasis::Cartan(0), q(1))].into_iter().collect());
        let br = a.finite_bracket(e1, e2).unwrap();
        assert_eq!(br.len(), 1);
        let (k, v) = br.into_iter().next().unwrap();
        assert_eq!(k, FiniteBasis::Root(2));
        assert_eq!(v, q(1), "extraspecial pair (α1, α2) is positive");
        assert!(a
            .finite_bracket(FiniteBasis::Cartan(0), FiniteBasis::Cartan(1))
            .unwrap()
            .is_empty());
        assert_eq!(
            a.finite_bracket(FiniteBasis::Root(99), e1),
            Err(Error::AlgebraMismatch)
        );
    }

    #[test]
    fn structure_constant_magnitudes_are_string_lengths() {
        for (s, r) in [
            (Series::B, 3),
            (Series::C, 3),
            (Series::G, 2),
            (Series::F, 4),
        ] {
            let alg = SimpleAlgebra::new(s, r).unwrap();
            for (&(a, b), &n) in &alg.chevalley_constants {
                let beta = &alg.roots[b];
                let alpha = &alg.roots[a];
                let mut p = 0;
                let mut probe: Vec<i64> = beta.iter().zip(alpha).map(|(x, y)| x - y).collect();
                while alg.is_root(&probe) {
                    p += 1;
                    probe = probe.iter().zip(alpha).map(|(x, y)| x - y).collect();
                }
                assert_eq!(n.abs(), p + 1, "{s}{r}");
            }
        }
    }

    #[test]
    fn jacobi_exhaustive_rank_up_to_three() {
        for (s, r) in [
            (Series::A, 1),
            (Series::A, 2),
            (Series::A, 3),
            (Series::B, 2),
            (Series::B, 3),
            (Series::C, 3),
            (Series::G, 2),
        ] {
            let alg = SimpleAlgebra::new(s, r).unwrap();
            assert!(jacobi_holds(&alg), "{s}{r}");
        }
    }

    #[test]
    fn jacobi_rank_four() {
        for (s, r) in [(Series::D, 4), (Series::F, 4), (Series::C, 4)] {
            let alg = SimpleAlgebra::new(s, r).unwrap();
            assert!(jacobi_holds(&alg), "{s}{r}");
        }
    }

    #[test]
    fn form_values_and_invariance() {
        let a = SimpleAlgebra::new(Series::A, 2).unwrap();
        assert_eq!(
            a.invariant_form(FiniteBasis::Root(0), FiniteBasis::Root(3))
                .unwrap(),
            q(1)
        );
        assert_eq!(
            a.invariant_form(FiniteBasis::Root(0), FiniteBasis::Root(1))
                .unwrap(),
            q(0)
        );
        assert_eq!(
            a.invariant_form(FiniteBasis::Cartan(0), FiniteBasis::Cartan(0))
                .unwrap(),
            q(2)
        );
        for alg in [
            a,
            SimpleAlgebra::new(Series::G, 2).unwrap(),
            SimpleAlgebra::new(Series::B, 3).unwrap(),
        ] {
            let basis = alg.basis();
            for &x in &basis {
                for &y in &basis {
                    assert_eq!(
                        alg.invariant_form(x, y).unwrap(),
                        alg.invariant_form(y, x).unwrap()
                    );
                    let xy = alg.finite_bracket(x, y).unwrap();
                    for &z in &basis {
                        let zv: SparseVec<FiniteBasis> = [(z, q(1))].into_iter().collect();
                        let xv: SparseVec<FiniteBasis> = [(x, q(1))].into_iter().collect();
                        let xz = alg.finite_bracket(x, z).unwrap();
                        let yv: SparseVec<FiniteBasis> = [(y, q(1))].into_iter().collect();
                        let lhs = alg.invariant_form_vec(&xy, &zv).unwrap();
                        let rhs = alg.invariant_form_vec(&yv, &xz).unwrap();
                        assert_eq!(lhs + rhs, q(0));
                        let _ = xv;
                    }
                }
            }
        }
    }

    #[test]
    fn form_matches_scaled_trace_form_a2() {
        // Killing form of sl3 is 6·tr(xy); the normalized form is tr(xy) = Killing/6.
        // Independently compute tr(ad x ad y)/ (2 h^∨) on the Chevalley basis.
        let a = SimpleAlgebra::new(Series::A, 2).unwrap();
        let basis = a.basis();
        let idx: HashMap<FiniteBasis, usize> =
            basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let ad = |x: FiniteBasis| -> Vec<Vec<Q>> {
            let n = basis.len();
            let mut m = vec![vec![Q::zero(); n]; n];
            for (j, &b) in basis.iter().enumerate() {
                for (k, v) in a.finite_bracket(x, b).unwrap() {
                    m[idx[&k]][j] = v;
                }
            }
            m
        };
        for &x in &basis {
            for &y in &basis {
                let (ax, ay) = (ad(x), ad(y));
                let n = basis.len();
                let mut tr = Q::zero();
                for i in 0..n {
                    for k in 0..n {
                        tr += ax[i][k] * ay[k][i];
                    }
                }
                assert_eq!(
                    tr / q(2 * a.dual_coxeter()),
                    a.invariant_form(x, y).unwrap()
                );
            }
        }
    }

    #[test]
    fn unsupported_types() {
        assert!(matches!(
            SimpleAlgebra::new(Series::E, 5),
            Err(Error::UnsupportedAlgebra { .. })
        ));
        assert!(matches!(
            SimpleAlgebra::new(Series::A, 9),
            Err(Error::UnsupportedAlgebra { .. })
        ));
        assert!(matches!(
            SimpleAlgebra::new(Series::D, 3),
            Err(Error::UnsupportedAlgebra { .. })
        ));
        assert!(SimpleAlgebra::with_cap(Series::A, 9, 10).is_ok());
        assert!(AlgebraSpec::from_name("Q2").unwrap().build().is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec: AlgebraSpec = serde_json::from_str(r#"{"series":"A","rank":2}"#).unwrap();
        let alg = spec.build().unwrap();
        let dump = alg.dump();
        let text = serde_json::to_string(&dump).unwrap();
        let back: AlgebraDump = serde_json::from_str(&text).unwrap();
        assert_eq!(back, dump);
        assert_eq!(
            dump.positive_structure_constants,
            vec![(vec![0, 1], vec![1, 0], -1), (vec![1, 0], vec![0, 1], 1)]
        );
    }
}
