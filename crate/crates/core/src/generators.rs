//! Greedy generating sets for the positive root vectors of a contracted algebra.
//!
//! Candidates are scanned column by column (ascending Laurent degree), and
//! within a column from the most negative finite root upwards. A candidate is
//! kept iff it lies outside the subalgebra generated by the vectors kept so far.
//! Positive degrees only add, so truncating the closure at degree `W` is exact
//! for every vector of degree `≤ W`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::affine::{fmt_affine_root, AffineBasis};
use crate::contraction::ContractedAlgebra;
use crate::error::{Error, Result};
use crate::lie::SimpleAlgebra;
use crate::linalg::{SparseSpan, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeptGenerator {
    pub label: String,
    /// Finite part of the affine root; all zeros for `E^i_{mδ}`.
    pub root: Vec<i64>,
    pub degree: i64,
    /// Cartan direction for imaginary vectors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cartan: Option<usize>,
}

/// Kept degrees `start + step·k` of one array row, observed up to the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFamily {
    pub label: String,
    pub root: Vec<i64>,
    pub start: i64,
    pub step: i64,
    pub degrees: Vec<i64>,
    pub certified_to: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub contraction: String,
    pub window: i64,
    pub kept: Vec<KeptGenerator>,
    /// Display list: single generators and families, in scan order.
    pub display: Vec<String>,
    pub families: Vec<GeneratorFamily>,
    /// Dimension of the generated subalgebra in each degree `0..=W`.
    pub closure_dims: Vec<usize>,
    pub notes: Vec<String>,
}

impl GeneratorReport {
    /// Kept `(finite root, degree)` pairs with imaginary spaces shown only when
    /// every Cartan direction was kept.
    pub fn collapsed(&self, rank: usize) -> BTreeSet<(Vec<i64>, i64)> {
        let mut imag: BTreeMap<i64, usize> = BTreeMap::new();
        let mut out = BTreeSet::new();
        for g in &self.kept {
            if g.cartan.is_some() {
                *imag.entry(g.degree).or_default() += 1;
            } else {
                out.insert((g.root.clone(), g.degree));
            }
        }
        for (m, c) in imag {
            if c == rank {
                out.insert((vec![0; rank], m));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "contraction {}  window W={}\n",
            self.contraction, self.window
        );
        s.push_str("generators:\n");
        for d in &self.display {
            s.push_str(&format!("  {d}\n"));
        }
        s.push_str("closure dimension by degree:\n ");
        for (m, d) in self.closure_dims.iter().enumerate() {
            s.push_str(&format!(" {m}:{d}"));
        }
        s.push('\n');
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }
}

/// Subalgebra generated by a growing set of homogeneous vectors, truncated at `window`.
struct Closure<'a> {
    c: &'a ContractedAlgebra,
    window: i64,
    span: SparseSpan<AffineBasis>,
    elems: Vec<SparseVec<AffineBasis>>,
    gens: Vec<SparseVec<AffineBasis>>,
}

fn degree(v: &SparseVec<AffineBasis>) -> i64 {
    v.keys().next().map_or(0, |x| x.degree())
}

impl Closure<'_> {
    fn push_new(&mut self, v: SparseVec<AffineBasis>, work: &mut Vec<SparseVec<AffineBasis>>) {
        if !v.is_empty() && self.span.insert(&v) {
            self.elems.push(v.clone());
            work.push(v);
        }
    }

    fn bracket(
        &self,
        x: &SparseVec<AffineBasis>,
        y: &SparseVec<AffineBasis>,
    ) -> Result<Option<SparseVec<AffineBasis>>> {
        if degree(x) + degree(y) > self.window {
            return Ok(None);
        }
        let mut v = self.c.bracket_vec(x, y, self.window)?;
        // Brackets of positive root vectors never reach k.
        v.remove(&AffineBasis::Central);
        Ok(Some(v))
    }

    fn add_generator(&mut self, g: SparseVec<AffineBasis>) -> Result<()> {
        let mut work = Vec::new();
        for e in self.elems.clone() {
            if let Some(v) = self.bracket(&g, &e)? {
                self.push_new(v, &mut work);
            }
        }
        self.gens.push(g.clone());
        self.push_new(g, &mut work);
        while let Some(e) = work.pop() {
            for g in self.gens.clone() {
                if let Some(v) = self.bracket(&g, &e)? {
                    self.push_new(v, &mut work);
                }
            }
        }
        Ok(())
    }
}

/// Row of the positive root array: a finite root index or the imaginary row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Row {
    Real(usize),
    Imaginary,
}

fn fmt_family(alpha: &[i64], start: i64, step: i64) -> String {
    let k = match (step, start) {
        (1, 0) => "k".to_string(),
        (1, a) => format!("(k+{a})"),
        (d, 0) => format!("{d}k"),
        (d, a) => format!("({d}k+{a})"),
    };
    if alpha.iter().all(|&a| a == 0) {
        format!("E_{{{k}δ}} (k ≥ 0)")
    } else {
        format!("E_{{{}+{k}δ}} (k ≥ 0)", SimpleAlgebra::fmt_root(alpha))
    }
}

/// Arithmetic progression through the last kept degree, running into the
/// window edge: `(members, step)`. Degrees off the progression stay single.
fn tail_family(degrees: &[i64], window: i64) -> Option<(Vec<i64>, i64)> {
    let n = degrees.len();
    if n < 2 {
        return None;
    }
    let last = degrees[n - 1];
    let d = last - degrees[n - 2];
    if d > window / 2 || last + d <= window {
        return None;
    }
    let mut members: Vec<i64> = std::iter::successors(Some(last), |&m| Some(m - d))
        .take_while(|m| degrees.binary_search(m).is_ok())
        .collect();
    members.reverse();
    // Two unit steps at the edge are indistinguishable from a one-off.
    (members.len() >= 3 || d >= 2).then_some((members, d))
}

pub fn minimal_generators(c: &ContractedAlgebra, window: i64) -> Result<GeneratorReport> {
    if window < 2 {
        return Err(Error::Invalid(format!(
            "generator scan needs W ≥ 2, got {window}"
        )));
    }
    let affine = &c.algebra;
    let alg = &affine.finite;
    let r = alg.rank;
    let mut closure = Closure {
        c,
        window,
        span: SparseSpan::new(),
        elems: Vec::new(),
        gens: Vec::new(),
    };
    let mut kept = Vec::new();
    // Per row: kept degrees (imaginary: number of kept directions per degree), and scan position.
    let mut rows: BTreeMap<Row, (BTreeMap<i64, usize>, usize)> = BTreeMap::new();
    for (pos, x) in affine.positive_root_array(window).into_iter().enumerate() {
        let v: SparseVec<AffineBasis> = [(x, crate::Q::one())].into_iter().collect();
        if closure.span.contains(&v) {
            continue;
        }
        closure.add_generator(v)?;
        let (row, root, cartan) = match x {
            AffineBasis::Real { root, .. } => (Row::Real(root), alg.roots[root].clone(), None),
            AffineBasis::Cartan { i, .. } => (Row::Imaginary, vec![0; r], Some(i)),
            AffineBasis::Central => unreachable!("k is not in the positive array"),
        };
        let entry = rows.entry(row).or_insert_with(|| (BTreeMap::new(), pos));
        *entry.0.entry(x.degree()).or_default() += 1;
        kept.push(KeptGenerator {
            label: affine.fmt_basis(x),
            root,
            degree: x.degree(),
            cartan,
        });
    }

    let mut notes = Vec::new();
    let mut families = Vec::new();
    let mut display: Vec<(usize, i64, String)> = Vec::new();
    for (row, (per_degree, pos)) in &rows {
        let alpha = match row {
            Row::Real(i) => alg.roots[*i].clone(),
            Row::Imaginary => vec![0; r],
        };
        let mut degrees = Vec::new();
        for (&m, &count) in per_degree {
            if *row == Row::Imaginary && count < r {
                notes.push(format!(
                    "E_{{{}}}: {count} of {r} Cartan directions kept, the others lie in the closure; not listed",
                    fmt_affine_root(&alpha, m)
                ));
            } else {
                degrees.push(m);
            }
        }
        let family = tail_family(&degrees, window);
        let in_family = |m: &i64| family.as_ref().is_some_and(|(f, _)| f.contains(m));
        for &m in degrees.iter().filter(|m| !in_family(m)) {
            if m == window {
                return Err(Error::Inconclusive(window));
            }
            display.push((*pos, m, format!("E_{{{}}}", fmt_affine_root(&alpha, m))));
        }
        if let Some((members, step)) = family {
            let start = members[0];
            let label = fmt_family(&alpha, start, step);
            display.push((*pos, start, label.clone()));
            families.push(GeneratorFamily {
                label,
                root: alpha.clone(),
                start,
                step,
                degrees: members,
                certified_to: window,
            });
        }
    }
    if !families.is_empty() {
        notes.push(format!(
            "families are certified up to degree {window} and conjectured beyond"
        ));
    }
    // Scan order: by degree of first element, then array position.
    display.sort_by_key(|(pos, m, _)| (*m, *pos));

    let mut closure_dims = vec![0; window as usize + 1];
    for e in &closure.elems {
        closure_dims[degree(e) as usize] += 1;
    }
    Ok(GeneratorReport {
        contraction: format!("{} ε={}", c.grading.group, c.epsilon.compact()),
        window,
        kept,
        display: display.into_iter().map(|(_, _, s)| s).collect(),
        families,
        closure_dims,
        notes,
    })
}
