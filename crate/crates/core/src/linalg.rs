//! Exact linear algebra over the rationals: incremental sparse spans and a
//! small dense reduced-row-echelon solver.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;

/// Sparse vector keyed by an ordered basis label.
pub type SparseVec<K> = BTreeMap<K, Q>;

pub fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: Q, x: &SparseVec<K>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let e = y.entry(k.clone()).or_insert_with(Q::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

/// Incrementally maintained row-echelon basis of a subspace.
///
/// Every stored row has a pivot (its smallest key) with coefficient 1, and no
/// other row has a nonzero entry at that pivot.
#[derive(Debug, Clone)]
pub struct SparseSpan<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for SparseSpan<K> {
    fn default() -> Self {
        Self {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> SparseSpan<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut out = v.clone();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => out.keys().find(|k| self.rows.contains_key(*k)).cloned(),
                Some(c) => out
                    .range((
                        std::ops::Bound::Excluded(c.clone()),
                        std::ops::Bound::Unbounded,
                    ))
                    .map(|(k, _)| k)
                    .find(|k| self.rows.contains_key(*k))
                    .cloned(),
            };
            let Some(k) = next else { break };
            let c = out[&k];
            axpy(&mut out, -c, &self.rows[&k]);
            cursor = Some(k);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns true when the span grew.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let mut r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), *c)) else {
            return false;
        };
        let inv = lead.recip();
        for c in r.values_mut() {
            *c *= inv;
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).copied() {
                axpy(row, -c, &r);
            }
        }
        self.rows.insert(pivot, r);
        true
    }
}

/// Result of solving a dense linear system `A x = b`.
#[derive(Debug, Clone)]
pub struct Rref {
    /// Reduced rows over `n` unknowns plus the right-hand side.
    pub rows: Vec<(usize, Vec<Q>, Q)>,
    pub n: usize,
    pub consistent: bool,
}

impl Rref {
    /// Row-reduces the augmented system given as `(coefficients, rhs)` rows.
    pub fn solve(n: usize, eqs: &[(Vec<Q>, Q)]) -> Self {
        let mut m: Vec<(Vec<Q>, Q)> = eqs.to_vec();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..m.len()).find(|&i| !m[i].0[col].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r].0[col].recip();
            for x in m[r].0.iter_mut() {
                *x *= inv;
            }
            m[r].1 *= inv;
            for i in 0..m.len() {
                if i != r && !m[i].0[col].is_zero() {
                    let f = m[i].0[col];
                    let (pr, pb) = (m[r].0.clone(), m[r].1);
                    for (x, y) in m[i].0.iter_mut().zip(pr.iter()) {
                        *x -= f * y;
                    }
                    m[i].1 -= f * pb;
                }
            }
            pivots.push((r, col));
            r += 1;
        }
        let consistent = m[r..].iter().all(|(_, b)| b.is_zero());
        let rows = pivots
            .iter()
            .map(|&(i, col)| (col, m[i].0.clone(), m[i].1))
            .collect();
        Self {
            rows,
            n,
            consistent,
        }
    }

    /// Value of unknown `j` if it is the same in every solution.
    pub fn determined(&self, j: usize) -> Option<Q> {
        self.rows.iter().find_map(|(col, coeffs, b)| {
            let only = *col == j
                && coeffs
                    .iter()
                    .enumerate()
                    .all(|(k, c)| k == j || c.is_zero());
            only.then_some(*b)
        })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Basis of the null space of a dense matrix (rows given as slices).
pub fn nullspace(n: usize, rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let eqs: Vec<(Vec<Q>, Q)> = rows.iter().map(|r| (r.clone(), Q::zero())).collect();
    let rref = Rref::solve(n, &eqs);
    let pivot_cols: Vec<usize> = rref.rows.iter().map(|(c, _, _)| *c).collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Q::zero(); n];
        v[free] = Q::one();
        for (col, coeffs, _) in &rref.rows {
            v[*col] = -coeffs[free];
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col];
                let pr = m[col].clone();
                for (x, y) in m[i].iter_mut().zip(pr.iter()) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
