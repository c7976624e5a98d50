//! Untwisted affine algebras `g ⊗ C[t, t⁻¹] ⊕ C k` on a truncated Laurent window.
//!
//! There is no derivation `d`; null depth lives on weights instead.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{FiniteBasis, SimpleAlgebra};
use crate::linalg::{axpy, inverse, nullspace, SparseVec};
use crate::rational::{q, Q};

/// `E_{α+mδ}` (root given by index into the finite root list), `E^i_{mδ}`, or `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffineBasis {
    Real { root: usize, m: i64 },
    Cartan { i: usize, m: i64 },
    Central,
}

impl AffineBasis {
    pub fn loop_parts(self) -> Option<(FiniteBasis, i64)> {
        match self {
            AffineBasis::Real { root, m } => Some((FiniteBasis::Root(root), m)),
            AffineBasis::Cartan { i, m } => Some((FiniteBasis::Cartan(i), m)),
            AffineBasis::Central => None,
        }
    }

    pub fn from_loop(a: FiniteBasis, m: i64) -> Self {
        match a {
            FiniteBasis::Root(root) => AffineBasis::Real { root, m },
            FiniteBasis::Cartan(i) => AffineBasis::Cartan { i, m },
        }
    }

    pub fn degree(self) -> i64 {
        self.loop_parts().map_or(0, |(_, m)| m)
    }
}

/// Affine root `α + mδ` with `α` a finite root or zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineRoot {
    pub m: i64,
    pub alpha: Vec<i64>,
}

/// ω-basis coordinates `(n; λ_0, …, λ_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaLabel {
    pub n: i64,
    pub lambda: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct AffineAlgebra {
    pub finite: Arc<SimpleAlgebra>,
    pub cartan: Vec<Vec<i64>>,
}

impl AffineAlgebra {
    pub fn new(finite: SimpleAlgebra) -> Self {
        let cartan = affine_cartan_matrix(&finite);
        Self {
            finite: Arc::new(finite),
            cartan,
        }
    }

    pub fn rank(&self) -> usize {
        self.finite.rank
    }

    /// Loop and central parts of `[a ⊗ t^m, b ⊗ t^n]`: the loop part sits at degree `m + n`.
    pub fn bracket_parts(
        &self,
        a: FiniteBasis,
        m: i64,
        b: FiniteBasis,
        n: i64,
    ) -> Result<(SparseVec<FiniteBasis>, Q)> {
        let loop_part = self.finite.finite_bracket(a, b)?;
        let central = if m + n == 0 && m != 0 {
            q(m) * self.finite.invariant_form(a, b)?
        } else {
            Q::zero()
        };
        Ok((loop_part, central))
    }

    pub fn bracket_basis(
        &self,
        x: AffineBasis,
        y: AffineBasis,
        window: i64,
    ) -> Result<SparseVec<AffineBasis>> {
        let (Some((a, m)), Some((b, n))) = (x.loop_parts(), y.loop_parts()) else {
            return Ok(BTreeMap::new());
        };
        let (lp, c) = self.bracket_parts(a, m, b, n)?;
        let mut out = BTreeMap::new();
        if !lp.is_empty() {
            if (m + n).abs() > window {
                return Err(Error::WindowOverflow {
                    degree: m + n,
                    window,
                });
            }
            for (k, v) in lp {
                out.insert(AffineBasis::from_loop(k, m + n), v);
            }
        }
        if !c.is_zero() {
            out.insert(AffineBasis::Central, c);
        }
        Ok(out)
    }

    pub fn affine_bracket(&self, x: &AffineElement, y: &AffineElement) -> Result<AffineElement> {
        if x.window != y.window {
            return Err(Error::Invalid(format!(
                "window mismatch: {} vs {}",
                x.window, y.window
            )));
        }
        let mut out = BTreeMap::new();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let br = self.bracket_basis(*a, *b, x.window)?;
                axpy(&mut out, ca * cb, &br);
            }
        }
        Ok(AffineElement {
            terms: out,
            window: x.window,
        })
    }

    /// Every basis element with `|m| ≤ window`, plus `k`.
    pub fn basis_in_window(&self, window: i64) -> Vec<AffineBasis> {
        let fin = self.finite.basis();
        let mut out = Vec::new();
        for m in -window..=window {
            out.extend(fin.iter().map(|&a| AffineBasis::from_loop(a, m)));
        }
        out.push(AffineBasis::Central);
        out
    }

    /// Positive root vectors up to degree `window`, in scan order: column 0
    /// holds the finite positive roots; each later column runs from the most
    /// negative finite root up through the Cartan directions to the highest root.
    pub fn positive_root_array(&self, window: i64) -> Vec<AffineBasis> {
        let np = self.finite.num_positive_roots();
        let mut out: Vec<AffineBasis> = (0..np)
            .map(|root| AffineBasis::Real { root, m: 0 })
            .collect();
        for m in 1..=window {
            out.extend((0..np).rev().map(|i| AffineBasis::Real { root: i + np, m }));
            out.extend((0..self.rank()).map(|i| AffineBasis::Cartan { i, m }));
            out.extend((0..np).map(|root| AffineBasis::Real { root, m }));
        }
        out
    }

    pub fn root_of(&self, x: AffineBasis) -> Option<AffineRoot> {
        match x {
            AffineBasis::Real { root, m } => Some(AffineRoot {
                m,
                alpha: self.finite.roots[root].clone(),
            }),
            AffineBasis::Cartan { m, .. } => Some(AffineRoot {
                m,
                alpha: vec![0; self.rank()],
            }),
            AffineBasis::Central => None,
        }
    }

    /// `α + mδ = mα_0 + Σ (a_j + m c_j) α_j`.
    pub fn to_simple_coeffs(&self, r: &AffineRoot) -> Vec<i64> {
        let c = self.finite.marks();
        std::iter::once(r.m)
            .chain((0..self.rank()).map(|j| r.alpha[j] + r.m * c[j]))
            .collect()
    }

    pub fn from_simple_coeffs(&self, n: &[i64]) -> AffineRoot {
        let c = self.finite.marks();
        AffineRoot {
            m: n[0],
            alpha: (0..self.rank()).map(|j| n[j + 1] - n[0] * c[j]).collect(),
        }
    }

    pub fn simple_to_omega(&self, n: &[i64]) -> OmegaLabel {
        let r = self.rank();
        OmegaLabel {
            n: n[0],
            lambda: (0..=r)
                .map(|j| (0..=r).map(|k| n[k] * self.cartan[k][j]).sum())
                .collect(),
        }
    }

    pub fn omega_to_simple(&self, w: &OmegaLabel) -> Result<Vec<i64>> {
        let r = self.rank();
        let fin = &self.finite;
        let at: Vec<Vec<Q>> = (0..r)
            .map(|j| (0..r).map(|k| q(fin.cartan[k][j])).collect())
            .collect();
        let inv = inverse(&at).expect("finite Cartan matrix is invertible");
        let rhs: Vec<Q> = (1..=r)
            .map(|j| q(w.lambda[j] - w.n * self.cartan[0][j]))
            .collect();
        let mut out = vec![w.n];
        for row in inv.iter() {
            let v: Q = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
            if !v.is_integer() {
                return Err(Error::Invalid(format!(
                    "ω-label {w:?} is not on the root lattice"
                )));
            }
            out.push(v.to_integer());
        }
        if self.simple_to_omega(&out) != *w {
            return Err(Error::Invalid(format!(
                "ω-label {w:?} has inconsistent λ_0"
            )));
        }
        Ok(out)
    }

    pub fn to_omega(&self, r: &AffineRoot) -> OmegaLabel {
        self.simple_to_omega(&self.to_simple_coeffs(r))
    }

    pub fn from_omega(&self, w: &OmegaLabel) -> Result<AffineRoot> {
        Ok(self.from_simple_coeffs(&self.omega_to_simple(w)?))
    }

    /// Label such as `E_{-α1+2δ}`, `E^1_{δ}` or `k`.
    pub fn fmt_basis(&self, x: AffineBasis) -> String {
        match x {
            AffineBasis::Real { root, m } => {
                format!("E_{{{}}}", fmt_affine_root(&self.finite.roots[root], m))
            }
            AffineBasis::Cartan { i, m } => format!("E^{}_{{{}}}", i + 1, fmt_delta(m)),
            AffineBasis::Central => "k".into(),
        }
    }
}

pub fn fmt_delta(m: i64) -> String {
    match m {
        0 => "0".into(),
        1 => "δ".into(),
        -1 => "-δ".into(),
        _ => format!("{m}δ"),
    }
}

pub fn fmt_affine_root(alpha: &[i64], m: i64) -> String {
    if alpha.iter().all(|&a| a == 0) {
        return fmt_delta(m);
    }
    let a = SimpleAlgebra::fmt_root(alpha);
    match m {
        0 => a,
        m if m > 0 => format!("{a}+{}", fmt_delta(m)),
        m => format!("{a}{}", fmt_delta(m)),
    }
}

/// Rows and columns indexed `0..=r` with index 0 for `α_0 = δ - θ`;
/// entry `(j, k)` is `<α_j, α_k^∨>`.
pub fn affine_cartan_matrix(alg: &SimpleAlgebra) -> Vec<Vec<i64>> {
    let r = alg.rank;
    let theta: Vec<Q> = alg.highest_root.iter().map(|&x| q(x)).collect();
    let mut a = vec![vec![0i64; r + 1]; r + 1];
    a[0][0] = 2;
    for j in 0..r {
        a[0][j + 1] = -alg.pairing_with_coroot(&alg.highest_root, j);
        let unit: Vec<Q> = (0..r).map(|k| q(i64::from(k == j))).collect();
        // <α_j, θ^∨> = (α_j, θ) since (θ, θ) = 2.
        a[j + 1][0] = -alg.inner(&unit, &theta).to_integer();
        for k in 0..r {
            a[j + 1][k + 1] = alg.cartan[j][k];
        }
    }
    a
}

/// Right null vector of the affine Cartan matrix, normalized to `č_0 = 1`.
pub fn comarks_from_kernel(a: &[Vec<i64>]) -> Vec<Q> {
    let n = a.len();
    let rows: Vec<Vec<Q>> = a
        .iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect();
    let ns = nullspace(n, &rows);
    assert_eq!(ns.len(), 1, "affine Cartan matrix has corank 1");
    let v = &ns[0];
    v.iter().map(|x| x / v[0]).collect()
}

/// Sparse combination of affine basis elements with an explicit window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineElement {
    pub terms: SparseVec<AffineBasis>,
    pub window: i64,
}

impl AffineElement {
    pub fn zero(window: i64) -> Self {
        Self {
            terms: BTreeMap::new(),
            window,
        }
    }

    pub fn basis(x: AffineBasis, window: i64) -> Result<Self> {
        if x.degree().abs() > window {
            return Err(Error::WindowOverflow {
                degree: x.degree(),
                window,
            });
        }
        Ok(Self {
            terms: [(x, q(1))].into_iter().collect(),
            window,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, c: Q, other: &AffineElement) {
        axpy(&mut self.terms, c, &other.terms);
    }

    pub fn to_json_rows(&self, alg: &AffineAlgebra) -> Vec<ElementRow> {
        let r = alg.rank();
        self.terms
            .iter()
            .map(|(b, c)| {
                let (variant, alpha, m) = match *b {
                    AffineBasis::Real { root, m } => ("real", alg.finite.roots[root].clone(), m),
                    AffineBasis::Cartan { i, m } => {
                        ("cartan", (0..r).map(|k| i64::from(k == i)).collect(), m)
                    }
                    AffineBasis::Central => ("central", vec![0; r], 0),
                };
                ElementRow(variant.into(), alpha, m, *c.numer(), *c.denom())
            })
            .collect()
    }

    pub fn from_json_rows(alg: &AffineAlgebra, rows: &[ElementRow], window: i64) -> Result<Self> {
        let mut out = Self::zero(window);
        for ElementRow(variant, alpha, m, num, den) in rows {
            if *den == 0 {
                return Err(Error::Invalid("zero denominator".into()));
            }
            let b = match variant.as_str() {
                "real" => AffineBasis::Real {
                    root: alg.finite.root_index(alpha).ok_or(Error::AlgebraMismatch)?,
                    m: *m,
                },
                "cartan" => {
                    let i = alpha
                        .iter()
                        .position(|&x| x == 1)
                        .ok_or(Error::AlgebraMismatch)?;
                    if alpha.len() != alg.rank() || alpha.iter().filter(|&&x| x != 0).count() != 1 {
                        return Err(Error::AlgebraMismatch);
                    }
                    AffineBasis::Cartan { i, m: *m }
                }
                "central" => AffineBasis::Central,
                other => return Err(Error::Invalid(format!("unknown basis variant {other:?}"))),
            };
            out.add_scaled(Q::new(*num, *den), &Self::basis(b, window)?);
        }
        Ok(out)
    }
}

/// `(variant, α-coefficients, m, numerator, denominator)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRow(pub String, pub Vec<i64>, pub i64, pub i64, pub i64);

impl fmt::Display for AffineRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_affine_root(&self.alpha, self.m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Series;

    fn aff(s: Series, r: usize) -> AffineAlgebra {
        AffineAlgebra::new(SimpleAlgebra::new(s, r).unwrap())
    }

    #[test]
    fn affine_cartan_examples() {
        assert_eq!(
            aff(Series::A, 2).cartan,
            vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]
        );
        assert_eq!(aff(Series::A, 1).cartan, vec![vec![2, -2], vec![-2, 2]]);
        let c = comarks_from_kernel(&aff(Series::A, 2).cartan);
        assert_eq!(c, vec![q(1), q(1), q(1)]);
    }

    #[test]
    fn marks_and_comarks_are_null_vectors_for_all_types() {
        for (s, r) in [
            (Series::B, 3),
            (Series::C, 3),
            (Series::D, 5),
            (Series::E, 6),
            (Series::F, 4),
            (Series::G, 2),
        ] {
            let a = aff(s, r);
            let cm = comarks_from_kernel(&a.cartan);
            let expect: Vec<Q> = std::iter::once(q(1))
                .chain(a.finite.comarks.iter().map(|&x| q(x)))
                .collect();
            assert_eq!(cm, expect, "{s}{r}");
            let marks: Vec<i64> = std::iter::once(1)
                .chain(a.finite.marks().iter().copied())
                .collect();
            for k in 0..=r {
                assert_eq!((0..=r).map(|j| marks[j] * a.cartan[j][k]).sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn loop_bracket_with_central_term() {
        let a = aff(Series::A, 1);
        let x = AffineElement::basis(AffineBasis::Real { root: 0, m: 1 }, 3).unwrap();
        let y = AffineElement::basis(AffineBasis::Real { root: 1, m: -1 }, 3).unwrap();
        let br = a.affine_bracket(&x, &y).unwrap();
        let expect: SparseVec<AffineBasis> = [
            (AffineBasis::Cartan { i: 0, m: 0 }, q(1)),
            (AffineBasis::Central, q(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(br.terms, expect);
        let k = AffineElement::basis(AffineBasis::Central, 3).unwrap();
        assert!(a.affine_bracket(&k, &x).unwrap().is_zero());
    }

    #[test]
    fn cartan_loops_give_heisenberg_term() {
        let a = aff(Series::A, 2);
        for m in 1..=3 {
            let h1 = AffineBasis::Cartan { i: 0, m };
            let h2 = AffineBasis::Cartan { i: 1, m: -m };
            let br = a.bracket_basis(h1, h2, 3).unwrap();
            assert_eq!(br, [(AffineBasis::Central, q(-m))].into_iter().collect());
            let br = a
                .bracket_basis(h1, AffineBasis::Cartan { i: 0, m: -m }, 3)
                .unwrap();
            assert_eq!(br, [(AffineBasis::Central, q(2 * m))].into_iter().collect());
        }
    }

    #[test]
    fn overflow_is_reported() {
        let a = aff(Series::A, 1);
        let err = a.bracket_basis(
            AffineBasis::Real { root: 0, m: 2 },
            AffineBasis::Cartan { i: 0, m: 2 },
            3,
        );
        assert_eq!(
            err,
            Err(Error::WindowOverflow {
                degree: 4,
                window: 3
            })
        );
        // Commuting pair: nothing to overflow.
        assert!(a
            .bracket_basis(
                AffineBasis::Cartan { i: 0, m: 2 },
                AffineBasis::Cartan { i: 0, m: 2 },
                3
            )
            .unwrap()
            .is_empty());
    }

    #[test]
    fn root_labels() {
        let a = aff(Series::A, 2);
        let r = AffineRoot {
            m: 3,
            alpha: vec![1, 0],
        };
        assert_eq!(a.to_simple_coeffs(&r), vec![3, 4, 3]);
        let alpha0 = a.from_simple_coeffs(&[1, 0, 0]);
        assert_eq!(
            a.to_omega(&alpha0),
            OmegaLabel {
                n: 1,
                lambda: vec![2, -1, -1]
            }
        );
        let delta = AffineRoot {
            m: 1,
            alpha: vec![0, 0],
        };
        assert_eq!(
            a.to_omega(&delta),
            OmegaLabel {
                n: 1,
                lambda: vec![0, 0, 0]
            }
        );
    }

    #[test]
    fn conversions_round_trip() {
        for (s, r) in [
            (Series::A, 1),
            (Series::A, 2),
            (Series::G, 2),
            (Series::B, 3),
            (Series::C, 3),
        ] {
            let a = aff(s, r);
            for x in a.basis_in_window(4) {
                let Some(root) = a.root_of(x) else { continue };
                let w = a.to_omega(&root);
                assert_eq!(a.from_omega(&w).unwrap(), root);
                assert_eq!(a.from_simple_coeffs(&a.to_simple_coeffs(&root)), root);
            }
        }
    }

    #[test]
    fn positive_array_order() {
        let a1 = aff(Series::A, 1);
        let arr: Vec<String> = a1
            .positive_root_array(1)
            .into_iter()
            .map(|x| a1.fmt_basis(x))
            .collect();
        assert_eq!(arr, vec!["E_{α1}", "E_{-α1+δ}", "E^1_{δ}", "E_{α1+δ}"]);
        let a2 = aff(Series::A, 2);
        assert_eq!(a2.positive_root_array(1).len(), 3 + 8);
        assert_eq!(a2.positive_root_array(0).len(), 3);
        let arr: Vec<String> = a2
            .positive_root_array(1)
            .into_iter()
            .map(|x| a2.fmt_basis(x))
            .collect();
        assert_eq!(arr[3], "E_{-(α1+α2)+δ}");
        assert_eq!(arr[10], "E_{α1+α2+δ}");
    }

    #[test]
    fn jacobi_exhaustive_a1_a2() {
        for (s, r, w) in [(Series::A, 1, 3), (Series::A, 2, 2)] {
            let a = aff(s, r);
            let basis = a.basis_in_window(w);
            let big = 3 * w;
            for (i, &x) in basis.iter().enumerate() {
                for (j, &y) in basis.iter().enumerate().skip(i) {
                    let xy = a.bracket_basis(x, y, big).unwrap();
                    for &z in basis.iter().skip(j) {
                        let mut sum = BTreeMap::new();
                        for (u, c) in &xy {
                            axpy(&mut sum, *c, &a.bracket_basis(*u, z, big).unwrap());
                        }
                        for (u, c) in &a.bracket_basis(y, z, big).unwrap() {
                            axpy(&mut sum, *c, &a.bracket_basis(*u, x, big).unwrap());
                        }
                        for (u, c) in &a.bracket_basis(z, x, big).unwrap() {
                            axpy(&mut sum, *c, &a.bracket_basis(*u, y, big).unwrap());
                        }
                        assert!(sum.is_empty(), "{x:?} {y:?} {z:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn json_rows_round_trip() {
        let a = aff(Series::A, 2);
        let mut e = AffineElement::zero(2);
        e.add_scaled(
            Q::new(3, 2),
            &AffineElement::basis(AffineBasis::Real { root: 4, m: -2 }, 2).unwrap(),
        );
        e.add_scaled(
            q(-1),
            &AffineElement::basis(AffineBasis::Cartan { i: 1, m: 1 }, 2).unwrap(),
        );
        e.add_scaled(
            q(5),
            &AffineElement::basis(AffineBasis::Central, 2).unwrap(),
        );
        let rows = e.to_json_rows(&a);
        let text = serde_json::to_string(&rows).unwrap();
        let back: Vec<ElementRow> = serde_json::from_str(&text).unwrap();
        assert_eq!(AffineElement::from_json_rows(&a, &back, 2).unwrap(), e);
        assert!(AffineElement::basis(AffineBasis::Cartan { i: 0, m: 3 }, 2).is_err());
    }
}
