//! Depth-truncated weight systems of integrable highest-weight modules.
//!
//! A weight is stored as `(depth, λ_1..λ_r)`; `λ_0 = ℓ - Σ č_j λ_j` is always
//! derived from the level `ℓ`. Multiplicities come from Freudenthal's formula
//! on the affine weight lattice with the form normalised by `(θ|θ) = 2`,
//! `(Λ_0|δ) = 1`, `(δ|δ) = 0`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::affine::{AffineAlgebra, AffineBasis};
use crate::error::{Error, Result};
use crate::grading::{EfoSpec, Grading, Group, Label, Layer};
use crate::rational::q;
use crate::solve::TauTable;
use crate::Q;

pub const DEFAULT_DEPTH_CAP: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffineWeight {
    pub depth: u32,
    /// Finite Dynkin labels `λ_1..λ_r`.
    pub labels: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct WeightSystem {
    pub affine: AffineAlgebra,
    /// `(Λ_0, .., Λ_r)` at depth 0.
    pub highest: Vec<i64>,
    pub level: i64,
    pub max_depth: u32,
    pub multiplicities: BTreeMap<AffineWeight, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRow {
    pub depth: u32,
    /// Full labels `(λ_0, .., λ_r)`.
    pub labels: Vec<i64>,
    pub multiplicity: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
}

/// One column of the string table: weights whose δ-strings start at `top_depth`
/// and share the multiplicity sequence `multiplicities[k]` at depth `top_depth + k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringFamily {
    pub top_depth: u32,
    pub members: Vec<Vec<i64>>,
    pub multiplicities: Vec<u64>,
}

pub fn weight_system(
    affine: &AffineAlgebra,
    highest: &[i64],
    max_depth: u32,
) -> Result<WeightSystem> {
    weight_system_with_cap(affine, highest, max_depth, DEFAULT_DEPTH_CAP)
}

pub fn weight_system_with_cap(
    affine: &AffineAlgebra,
    highest: &[i64],
    max_depth: u32,
    cap: u32,
) -> Result<WeightSystem> {
    let alg = &affine.finite;
    let r = alg.rank;
    if highest.len() != r + 1 || highest.iter().any(|&x| x < 0) {
        return Err(Error::NonDominant(highest.to_vec()));
    }
    if max_depth > cap {
        return Err(Error::DepthTooLarge {
            depth: max_depth,
            cap,
        });
    }
    let level = highest[0] + (0..r).map(|j| alg.comarks[j] * highest[j + 1]).sum::<i64>();
    let mut ws = WeightSystem {
        affine: affine.clone(),
        highest: highest.to_vec(),
        level,
        max_depth,
        multiplicities: BTreeMap::new(),
    };
    ws.fill();
    Ok(ws)
}

/// A positive real affine root `β + mδ` with its Dynkin labels and `|β|²`.
struct RealRoot {
    beta: Vec<i64>,
    m: u32,
    shift: Vec<i64>,
    norm2: Q,
    height: i64,
}

impl WeightSystem {
    pub fn rank(&self) -> usize {
        self.affine.finite.rank
    }

    pub fn highest_weight(&self) -> AffineWeight {
        AffineWeight {
            depth: 0,
            labels: self.highest[1..].to_vec(),
        }
    }

    pub fn lambda0(&self, labels: &[i64]) -> i64 {
        let c = &self.affine.finite.comarks;
        self.level - labels.iter().zip(c).map(|(l, c)| l * c).sum::<i64>()
    }

    pub fn full_labels(&self, w: &AffineWeight) -> Vec<i64> {
        let mut v = vec![self.lambda0(&w.labels)];
        v.extend_from_slice(&w.labels);
        v
    }

    pub fn multiplicity(&self, w: &AffineWeight) -> u64 {
        self.multiplicities.get(w).copied().unwrap_or(0)
    }

    pub fn contains(&self, w: &AffineWeight) -> bool {
        self.multiplicities.contains_key(w)
    }

    pub fn len(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = &AffineWeight> {
        self.multiplicities.keys()
    }

    /// Shallowest occurrence of the full labels `(λ_0, .., λ_r)`.
    pub fn locate(&self, full: &[i64]) -> Result<AffineWeight> {
        let not_found = || Error::WeightNotInSystem {
            depth: 0,
            labels: full.to_vec(),
        };
        if full.len() != self.rank() + 1 || self.lambda0(&full[1..]) != full[0] {
            return Err(not_found());
        }
        (0..=self.max_depth)
            .map(|depth| AffineWeight {
                depth,
                labels: full[1..].to_vec(),
            })
            .find(|w| self.contains(w))
            .ok_or_else(not_found)
    }

    fn require(&self, w: &AffineWeight) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(Error::WeightNotInSystem {
                depth: w.depth,
                labels: w.labels.clone(),
            })
        }
    }

    /// Integer coefficients `b_j` with `λ̄ - Λ̄ = Σ b_j α_j`.
    pub fn root_displacement(&self, w: &AffineWeight) -> Vec<i64> {
        let fw = &self.affine.finite.fundamental_weights_root_basis;
        let r = self.rank();
        (0..r)
            .map(|k| {
                let v: Q = (0..r)
                    .map(|j| q(w.labels[j] - self.highest[j + 1]) * fw[j][k])
                    .sum();
                assert!(
                    v.is_integer(),
                    "finite displacement leaves the root lattice"
                );
                v.to_integer()
            })
            .collect()
    }

    /// Shift of a weight under an affine basis element: depth drops by the Laurent degree.
    pub fn shift(&self, w: &AffineWeight, x: AffineBasis) -> Option<AffineWeight> {
        let alg = &self.affine.finite;
        let (labels, m) = match x {
            AffineBasis::Central => return Some(w.clone()),
            AffineBasis::Cartan { m, .. } => (w.labels.clone(), m),
            AffineBasis::Real { root, m } => {
                let beta = &alg.roots[root];
                let labels = (0..alg.rank)
                    .map(|j| w.labels[j] + alg.pairing_with_coroot(beta, j))
                    .collect();
                (labels, m)
            }
        };
        let depth = i64::from(w.depth) - m;
        (depth >= 0).then_some(AffineWeight {
            depth: depth as u32,
            labels,
        })
    }

    fn coords(&self, labels: &[i64]) -> Vec<Q> {
        let fw = &self.affine.finite.fundamental_weights_root_basis;
        let r = self.rank();
        (0..r)
            .map(|k| (0..r).map(|j| q(labels[j]) * fw[j][k]).sum())
            .collect()
    }

    fn real_roots(&self) -> Vec<RealRoot> {
        let alg = &self.affine.finite;
        let mut out = Vec::new();
        for m in 0..=self.max_depth {
            let betas = if m == 0 {
                &alg.positive_roots
            } else {
                &alg.roots
            };
            for beta in betas {
                out.push(RealRoot {
                    beta: beta.clone(),
                    m,
                    shift: (0..alg.rank)
                        .map(|j| alg.pairing_with_coroot(beta, j))
                        .collect(),
                    norm2: alg.root_norm2(beta),
                    height: beta.iter().sum(),
                });
            }
        }
        out
    }

    /// Freudenthal recursion, processing candidates by affine height of `Λ - μ`
    /// so that every `μ + kα` is settled before `μ`.
    fn fill(&mut self) {
        let alg = self.affine.finite.clone();
        let r = alg.rank;
        let ell = q(self.level);
        let hv = alg.dual_coxeter();
        let coxeter: i64 = 1 + alg.marks().iter().sum::<i64>();
        let rho_labels = vec![1i64; r];
        let plus =
            |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        let top = self.highest_weight();
        let top_rho = self.coords(&plus(&top.labels, &rho_labels));
        let top_norm = alg.inner(&top_rho, &top_rho);
        let roots = self.real_roots();
        let theta_shift: Vec<i64> = (0..r)
            .map(|j| alg.pairing_with_coroot(&alg.highest_root, j))
            .collect();

        // Highest finite height seen per depth, bounding the m = 0 strings.
        let mut max_height: Vec<Option<i64>> = vec![None; self.max_depth as usize + 1];
        let mut queue: BTreeSet<(i64, AffineWeight)> = BTreeSet::new();
        let mut seen: BTreeSet<AffineWeight> = BTreeSet::new();
        queue.insert((0, top.clone()));
        seen.insert(top.clone());

        while let Some((_, mu)) = queue.pop_first() {
            let b = self.root_displacement(&mu);
            let fin_height: i64 = b.iter().sum();
            let mult = if mu == top {
                1
            } else {
                let mu_coords = self.coords(&mu.labels);
                let mu_rho = self.coords(&plus(&mu.labels, &rho_labels));
                let n = i64::from(mu.depth);
                let denom = top_norm - alg.inner(&mu_rho, &mu_rho) + q(2 * (self.level + hv) * n);
                if denom <= Q::zero() {
                    0
                } else {
                    let mut sum = Q::zero();
                    for rt in &roots {
                        let beta_q: Vec<Q> = rt.beta.iter().map(|&x| q(x)).collect();
                        let base = alg.inner(&mu_coords, &beta_q) + ell * q(i64::from(rt.m));
                        let mut labels = mu.labels.clone();
                        for k in 1i64.. {
                            let depth = n - k * i64::from(rt.m);
                            if depth < 0 {
                                break;
                            }
                            if rt.m == 0 {
                                match max_height[mu.depth as usize] {
                                    Some(h) if fin_height + k * rt.height <= h => {}
                                    _ => break,
                                }
                            }
                            labels = plus(&labels, &rt.shift);
                            let w = AffineWeight {
                                depth: depth as u32,
                                labels: labels.clone(),
                            };
                            let c = self.multiplicity(&w);
                            if c != 0 {
                                sum += (base + q(k) * rt.norm2) * q(c as i64);
                            }
                        }
                    }
                    for m in 1..=n {
                        for k in 1.. {
                            let depth = n - k * m;
                            if depth < 0 {
                                break;
                            }
                            let w = AffineWeight {
                                depth: depth as u32,
                                labels: mu.labels.clone(),
                            };
                            let c = self.multiplicity(&w);
                            sum += q(r as i64) * ell * q(m) * q(c as i64);
                        }
                    }
                    let v = q(2) * sum / denom;
                    assert!(
                        v.is_integer() && v >= Q::zero(),
                        "Freudenthal produced {v} at {mu:?}"
                    );
                    v.to_u64().expect("multiplicity fits in u64")
                }
            };
            if mult == 0 {
                continue;
            }
            self.multiplicities.insert(mu.clone(), mult);
            let slot = &mut max_height[mu.depth as usize];
            *slot = Some(slot.map_or(fin_height, |h| h.max(fin_height)));

            let mut children = Vec::with_capacity(r + 1);
            for j in 0..r {
                let labels = mu
                    .labels
                    .iter()
                    .zip(&alg.cartan[j])
                    .map(|(l, a)| l - a)
                    .collect();
                children.push(AffineWeight {
                    depth: mu.depth,
                    labels,
                });
            }
            if mu.depth < self.max_depth {
                children.push(AffineWeight {
                    depth: mu.depth + 1,
                    labels: plus(&mu.labels, &theta_shift),
                });
            }
            for c in children {
                if seen.insert(c.clone()) {
                    let h = i64::from(c.depth) * coxeter
                        - self.root_displacement(&c).iter().sum::<i64>();
                    queue.insert((h, c));
                }
            }
        }
    }

    /// δ-string tops grouped into families with a common multiplicity sequence.
    pub fn string_families(&self) -> Vec<StringFamily> {
        let mut tops: BTreeMap<Vec<i64>, u32> = BTreeMap::new();
        for w in self.weights() {
            let e = tops.entry(w.labels.clone()).or_insert(w.depth);
            *e = (*e).min(w.depth);
        }
        let mut fams: BTreeMap<(u32, Vec<u64>), Vec<Vec<i64>>> = BTreeMap::new();
        for (labels, top) in tops {
            let mults = (top..=self.max_depth)
                .map(|depth| {
                    self.multiplicity(&AffineWeight {
                        depth,
                        labels: labels.clone(),
                    })
                })
                .collect();
            let full = self.full_labels(&AffineWeight { depth: top, labels });
            fams.entry((top, mults)).or_default().push(full);
        }
        fams.into_iter()
            .map(|((top_depth, multiplicities), mut members)| {
                members.sort_by(|a, b| b.cmp(a));
                StringFamily {
                    top_depth,
                    members,
                    multiplicities,
                }
            })
            .collect()
    }

    pub fn rows(&self) -> Vec<WeightRow> {
        self.multiplicities
            .iter()
            .map(|(w, &m)| WeightRow {
                depth: w.depth,
                labels: self.full_labels(w),
                multiplicity: m,
                class: None,
            })
            .collect()
    }
}

/// `Σ b_j s_j mod N`; anchored so that the highest weight sits in class 0.
pub fn module_class_horizontal(ws: &WeightSystem, efo: &EfoSpec, w: &AffineWeight) -> Result<u64> {
    ws.require(w)?;
    Ok(horizontal_from_displacement(ws, efo, w))
}

fn horizontal_from_displacement(ws: &WeightSystem, efo: &EfoSpec, w: &AffineWeight) -> u64 {
    let v: i64 = ws
        .root_displacement(w)
        .iter()
        .zip(&efo.s[1..])
        .map(|(b, &s)| b * i64::from(s))
        .sum();
    v.rem_euclid(efo.n as i64) as u64
}

/// `(-depth) mod N`: a degree `m` operator lowers the depth by `m`.
pub fn module_class_vertical(n: u64, w: &AffineWeight) -> u64 {
    (-i64::from(w.depth)).rem_euclid(n as i64) as u64
}

/// Layer-by-layer module class compatible with [`Grading::mixed_class`].
pub fn module_class(ws: &WeightSystem, g: &Grading, w: &AffineWeight) -> Result<Label> {
    ws.require(w)?;
    Ok(g.layers
        .iter()
        .map(|l| match l {
            Layer::Horizontal(e) => horizontal_from_displacement(ws, e, w),
            Layer::Vertical(n) => module_class_vertical(*n, w),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleWitness {
    pub element: String,
    pub element_class: String,
    pub weight: Vec<i64>,
    pub weight_depth: u32,
    pub weight_class: String,
    pub image: Vec<i64>,
    pub image_depth: u32,
    pub image_class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleGradingReport {
    pub passed: bool,
    pub checks: usize,
    pub witness: Option<ModuleWitness>,
}

pub fn verify_module_grading(ws: &WeightSystem, g: &Grading, window: i64) -> ModuleGradingReport {
    verify_module_grading_with(ws, g, window, |w| {
        module_class(ws, g, w).expect("weight taken from the system")
    })
}

/// Checks `class(λ + α) = class(λ) + class(x)` for every basis element `x` of
/// degree `|m| ≤ window` and every `λ` whose image stays in the system.
pub fn verify_module_grading_with<F>(
    ws: &WeightSystem,
    g: &Grading,
    window: i64,
    class_fn: F,
) -> ModuleGradingReport
where
    F: Fn(&AffineWeight) -> Label,
{
    let classes: BTreeMap<&AffineWeight, Label> = ws.weights().map(|w| (w, class_fn(w))).collect();
    let mut checks = 0;
    for x in ws.affine.basis_in_window(window) {
        let cx = g.mixed_class(&ws.affine, x);
        for (w, cw) in &classes {
            let Some(img) = ws.shift(w, x) else { continue };
            let Some(ci) = classes.get(&img) else {
                continue;
            };
            checks += 1;
            let expected = g.group.add(cw, &cx);
            if *ci != expected {
                let grp = &g.group;
                return ModuleGradingReport {
                    passed: false,
                    checks,
                    witness: Some(ModuleWitness {
                        element: ws.affine.fmt_basis(x),
                        element_class: grp.fmt_label(&cx),
                        weight: ws.full_labels(w),
                        weight_depth: w.depth,
                        weight_class: grp.fmt_label(cw),
                        image: ws.full_labels(&img),
                        image_depth: img.depth,
                        image_class: grp.fmt_label(ci),
                    }),
                };
            }
        }
    }
    ModuleGradingReport {
        passed: true,
        checks,
        witness: None,
    }
}

/// A weight system with every weight assigned a class in `group`.
#[derive(Debug, Clone)]
pub struct GradedWeightSystem {
    pub system: WeightSystem,
    pub group: Group,
    pub classes: BTreeMap<AffineWeight, Label>,
}

impl GradedWeightSystem {
    pub fn new(system: WeightSystem, g: &Grading) -> Self {
        let classes = system
            .weights()
            .map(|w| {
                (
                    w.clone(),
                    module_class(&system, g, w).expect("weight taken from the system"),
                )
            })
            .collect();
        Self {
            system,
            group: g.group.clone(),
            classes,
        }
    }

    /// Total multiplicity carried by each class, indexed like the group.
    pub fn class_dimensions(&self) -> Vec<u64> {
        let mut dims = vec![0; self.group.order()];
        for (w, c) in &self.classes {
            dims[self.group.index(c)] += self.system.multiplicity(w);
        }
        dims
    }

    pub fn component(&self, label: &[u64]) -> Vec<&AffineWeight> {
        self.classes
            .iter()
            .filter(|(_, c)| c.as_slice() == label)
            .map(|(w, _)| w)
            .collect()
    }

    pub fn rows(&self) -> Vec<WeightRow> {
        let mut rows = self.system.rows();
        for (row, c) in rows.iter_mut().zip(self.classes.values()) {
            row.class = Some(self.group.fmt_label(c));
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorPair {
    pub left: String,
    pub right: String,
    /// Product of the truncated class dimensions.
    pub dimension: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorComponent {
    pub class: String,
    pub retained: Vec<TensorPair>,
    pub dropped: Vec<TensorPair>,
    pub dimension: u64,
}

/// `(V ⊗ W)_σ = ⊕_{μ+ν=σ} τ_{μν} V_μ ⊗ W_ν`: pairs with `τ = 0` are dropped.
pub fn graded_tensor(
    v: &GradedWeightSystem,
    w: &GradedWeightSystem,
    tau: &TauTable,
) -> Result<Vec<TensorComponent>> {
    if v.group != w.group || tau.group != v.group {
        return Err(Error::GroupMismatch(format!(
            "modules graded by {} and {}, τ over {}",
            v.group, w.group, tau.group
        )));
    }
    let grp = &v.group;
    let (dv, dw) = (v.class_dimensions(), w.class_dimensions());
    let mut out: Vec<TensorComponent> = grp
        .labels()
        .iter()
        .map(|l| TensorComponent {
            class: grp.fmt_label(l),
            retained: Vec::new(),
            dropped: Vec::new(),
            dimension: 0,
        })
        .collect();
    for a in 0..grp.order() {
        for b in 0..grp.order() {
            let comp = &mut out[grp.add_idx(a, b)];
            let pair = TensorPair {
                left: grp.fmt_label(&grp.label(a)),
                right: grp.fmt_label(&grp.label(b)),
                dimension: dv[a] * dw[b],
            };
            if tau.values[a][b] == 1 {
                comp.dimension += pair.dimension;
                comp.retained.push(pair);
            } else {
                comp.dropped.push(pair);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{Series, SimpleAlgebra};

    fn a2() -> AffineAlgebra {
        AffineAlgebra::new(SimpleAlgebra::new(Series::A, 2).unwrap())
    }

    fn basic(depth: u32) -> WeightSystem {
        weight_system(&a2(), &[1, 0, 0], depth).unwrap()
    }

    fn at(ws: &WeightSystem, full: &[i64]) -> AffineWeight {
        ws.locate(full).unwrap()
    }

    #[test]
    fn top_of_the_module() {
        let ws = basic(0);
        assert_eq!(ws.len(), 1);
        assert_eq!(ws.rows()[0].labels, vec![1, 0, 0]);
        assert_eq!(ws.rows()[0].multiplicity, 1);
    }

    #[test]
    fn null_string_multiplicities() {
        // Two-coloured partition numbers.
        let ws = basic(10);
        let col: Vec<u64> = (0..=10)
            .map(|depth| {
                ws.multiplicity(&AffineWeight {
                    depth,
                    labels: vec![0, 0],
                })
            })
            .collect();
        assert_eq!(col, vec![1, 2, 5, 10, 20, 36, 65, 110, 185, 300, 481]);
    }

    #[test]
    fn depth_one_tops() {
        let ws = basic(1);
        for full in [
            [-1, 1, 1],
            [0, -1, 2],
            [2, -2, 1],
            [3, -1, -1],
            [0, 2, -1],
            [2, 1, -2],
        ] {
            let w = at(&ws, &full);
            assert_eq!(w.depth, 1);
            assert_eq!(ws.multiplicity(&w), 1);
        }
    }

    #[test]
    fn level_and_dominance() {
        let ws = weight_system(&a2(), &[0, 1, 1], 2).unwrap();
        assert_eq!(ws.level, 2);
        assert!(ws.rows().iter().all(|r| r.labels.iter().sum::<i64>() == 2));
        assert!(matches!(
            weight_system(&a2(), &[1, -1, 1], 2),
            Err(Error::NonDominant(_))
        ));
        assert!(matches!(
            weight_system(&a2(), &[1, 0, 0], 13),
            Err(Error::DepthTooLarge { .. })
        ));
    }

    #[test]
    fn finite_top_layer_is_the_finite_module() {
        // Depth 0 of Λ = (0,1,1) is the adjoint of A2: weight 0 twice, roots once.
        let ws = weight_system(&a2(), &[0, 1, 1], 0).unwrap();
        assert_eq!(ws.len(), 7);
        assert_eq!(
            ws.multiplicity(&AffineWeight {
                depth: 0,
                labels: vec![0, 0]
            }),
            2
        );
    }

    #[test]
    fn horizontal_classes() {
        let alg = a2();
        let ws = basic(6);
        let e111 = crate::grading::efo_order(&alg.finite, &[1, 1, 1]).unwrap();
        let e010 = crate::grading::efo_order(&alg.finite, &[0, 1, 0]).unwrap();
        let cls =
            |e: &EfoSpec, full: &[i64]| module_class_horizontal(&ws, e, &at(&ws, full)).unwrap();
        assert_eq!(cls(&e111, &[0, 2, -1]), 1);
        assert_eq!(cls(&e111, &[-1, 1, 1]), 2);
        assert_eq!(cls(&e111, &[-2, 0, 3]), 0);
        assert_eq!(cls(&e111, &[4, -3, 0]), 0);
        assert_eq!(cls(&e010, &[2, -2, 1]), 2);
        assert_eq!(cls(&e010, &[0, -1, 2]), 0);
        assert_eq!(cls(&e010, &[-1, 1, 1]), 1);
        let missing = AffineWeight {
            depth: 0,
            labels: vec![1, 1],
        };
        assert!(module_class_horizontal(&ws, &e111, &missing).is_err());
    }

    #[test]
    fn vertical_classes() {
        let w = |depth| AffineWeight {
            depth,
            labels: vec![0, 0],
        };
        let c: Vec<u64> = (0..5).map(|d| module_class_vertical(2, &w(d))).collect();
        assert_eq!(c, vec![0, 1, 0, 1, 0]);
        assert_eq!(module_class_vertical(3, &w(1)), 2);
    }

    #[test]
    fn compatibility_and_negative_control() {
        let alg = a2();
        let ws = basic(4);
        let g = Grading::horizontal(&alg.finite, &[1, 1, 1]).unwrap();
        assert!(verify_module_grading(&ws, &g, 4).passed);
        let v = Grading::vertical(3).unwrap();
        assert!(verify_module_grading(&ws, &v, 4).passed);
        let bad = at(&ws, &[-1, 1, 1]);
        let rep = verify_module_grading_with(&ws, &g, 4, |w| {
            let c = module_class(&ws, &g, w).unwrap();
            if *w == bad {
                g.group.add(&c, &[1])
            } else {
                c
            }
        });
        assert!(!rep.passed);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn tensor_components() {
        let alg = a2();
        let g = Grading::horizontal(&alg.finite, &[0, 1, 1]).unwrap();
        let v = GradedWeightSystem::new(basic(2), &g);
        let all = graded_tensor(&v, &v, &TauTable::ones(&g.group)).unwrap();
        assert!(all
            .iter()
            .all(|c| c.dropped.is_empty() && c.retained.len() == 2));
        let mut tau = TauTable::ones(&g.group);
        tau.values = vec![vec![1, 0], vec![0, 0]];
        let cut = graded_tensor(&v, &v, &tau).unwrap();
        assert_eq!(cut[0].retained.len(), 1);
        assert_eq!(
            (
                cut[0].retained[0].left.as_str(),
                cut[0].retained[0].right.as_str()
            ),
            ("0", "0")
        );
        assert!(cut[1].retained.is_empty());
        let other = GradedWeightSystem::new(basic(2), &Grading::vertical(3).unwrap());
        assert!(matches!(
            graded_tensor(&v, &other, &tau),
            Err(Error::GroupMismatch(_))
        ));
    }
}
