//! Contracted affine algebras
//! `[x, y]_ε = ε_{μν} [a,b] ⊗ t^{m+n} + κ_{μν} m B(a,b) δ_{m+n,0} k`
//! and their structural diagnostics.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::affine::{AffineAlgebra, AffineBasis};
use crate::error::{Error, Result};
use crate::grading::{Grading, Label};
use crate::lie::FiniteBasis;
use crate::linalg::{axpy, nullspace, Rref, SparseVec};
use crate::rational::{fmt_q, q, Q};
use crate::solve::{gamma_equations, pair_key, sym, EpsilonTable};

#[derive(Debug, Clone)]
pub struct ContractedAlgebra {
    pub algebra: AffineAlgebra,
    pub grading: Grading,
    pub epsilon: EpsilonTable,
    /// Effective central coefficients `κ = εγ`, symmetric.
    pub kappa: Vec<Vec<Q>>,
}

/// Symmetric κ table from upper-triangle values over all pairs `μ ≤ ν`.
pub fn kappa_from_flat(order: usize, flat: &[Q]) -> Result<Vec<Vec<Q>>> {
    if flat.len() != order * (order + 1) / 2 {
        return Err(Error::Invalid(format!(
            "expected {} κ values, got {}",
            order * (order + 1) / 2,
            flat.len()
        )));
    }
    let mut k = vec![vec![Q::zero(); order]; order];
    let mut it = flat.iter();
    for a in 0..order {
        for b in a..order {
            let v = *it.next().unwrap();
            k[a][b] = v;
            k[b][a] = v;
        }
    }
    Ok(k)
}

/// `κ = ε` (undeformed form). A `∅` slot gets 1 when the γ equations allow it
/// and 0 when they force the central term there to vanish.
pub fn kappa_plain(eps: &EpsilonTable) -> Vec<Vec<Q>> {
    let n = eps.group.order();
    let mut k: Vec<Vec<Q>> = (0..n)
        .map(|a| (0..n).map(|b| eps.effective(a, b)).collect())
        .collect();
    for a in 0..n {
        for b in a..n {
            if eps.get(a, b).is_none() && check_kappa(eps, &k).is_err() {
                k[a][b] = Q::zero();
                k[b][a] = Q::zero();
            }
        }
    }
    k
}

/// Checks that `κ = εγ` for some γ solving the γ equations, with `κ ≠ 0`
/// allowed where `ε = 0` only if that γ entry is not forced to vanish.
pub fn check_kappa(eps: &EpsilonTable, kappa: &[Vec<Q>]) -> Result<()> {
    let g = &eps.group;
    let n = g.order();
    for a in 0..n {
        for b in 0..n {
            if kappa[a][b] != kappa[b][a] {
                return Err(Error::InconsistentKappa(format!(
                    "κ is not symmetric at {}",
                    pair_key(g, a, b)
                )));
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let var = |p: (usize, usize)| pairs.iter().position(|&x| x == p).unwrap();
    let nv = pairs.len();
    let unit = |i: usize, c: Q| {
        let mut v = vec![Q::zero(); nv];
        v[i] = c;
        v
    };
    let mut eqs: Vec<(Vec<Q>, Q)> = Vec::new();
    let mut limits: Vec<(usize, (usize, usize))> = Vec::new();
    for &(a, b) in &pairs {
        let e = eps.get(a, b).unwrap_or_else(Q::one);
        if !e.is_zero() {
            eqs.push((unit(var((a, b)), q(1)), kappa[a][b] / e));
        } else if !kappa[a][b].is_zero() {
            limits.push((var((a, b)), (a, b)));
        }
    }
    if !Rref::solve(nv, &eqs).consistent {
        return Err(Error::InconsistentKappa(
            "κ/ε values are contradictory".into(),
        ));
    }
    for ((mu, nu, sigma), (x, p), (y, qq)) in gamma_equations(eps) {
        let mut row = vec![Q::zero(); nv];
        row[var(p)] += x;
        row[var(qq)] -= y;
        eqs.push((row, Q::zero()));
        if !Rref::solve(nv, &eqs).consistent {
            return Err(Error::InconsistentKappa(format!(
                "γ equation ε_{{μ,ν}}γ_{{μ+ν,σ}} = ε_{{ν,σ}}γ_{{μ,ν+σ}} fails at (μ,ν,σ) = ({},{},{}): γ{} would have to differ from κ/ε",
                g.fmt_label(&g.label(mu)),
                g.fmt_label(&g.label(nu)),
                g.fmt_label(&g.label(sigma)),
                pair_key(g, p.0, p.1),
            )));
        }
    }
    let rref = Rref::solve(nv, &eqs);
    for (v, (a, b)) in limits {
        if rref.determined(v) == Some(Q::zero()) {
            return Err(Error::InconsistentKappa(format!(
                "κ{} ≠ 0 with ε{} = 0 needs γ{} free, but the γ equations force it to 0",
                pair_key(g, a, b),
                pair_key(g, a, b),
                pair_key(g, a, b)
            )));
        }
    }
    Ok(())
}

pub fn contract(
    algebra: &AffineAlgebra,
    grading: &Grading,
    eps: &EpsilonTable,
    kappa: Vec<Vec<Q>>,
) -> Result<ContractedAlgebra> {
    if eps.group != grading.group {
        return Err(Error::GroupMismatch(format!(
            "ε over {} but grading over {}",
            eps.group, grading.group
        )));
    }
    eps.require_solution()?;
    check_kappa(eps, &kappa)?;
    Ok(ContractedAlgebra {
        algebra: algebra.clone(),
        grading: grading.clone(),
        epsilon: eps.clone(),
        kappa,
    })
}

impl ContractedAlgebra {
    pub fn class_index(&self, x: AffineBasis) -> usize {
        self.grading
            .group
            .index(&self.grading.mixed_class(&self.algebra, x))
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
        let (mu, nu) = (self.class_index(x), self.class_index(y));
        let (lp, c) = self.algebra.bracket_parts(a, m, b, n)?;
        let e = self.epsilon.effective(mu, nu);
        let mut out = BTreeMap::new();
        if !e.is_zero() && !lp.is_empty() {
            if (m + n).abs() > window {
                return Err(Error::WindowOverflow {
                    degree: m + n,
                    window,
                });
            }
            for (k, v) in lp {
                out.insert(AffineBasis::from_loop(k, m + n), v * e);
            }
        }
        let kc = c * self.kappa[mu][nu];
        if !kc.is_zero() {
            out.insert(AffineBasis::Central, kc);
        }
        Ok(out)
    }

    pub fn bracket_vec(
        &self,
        x: &SparseVec<AffineBasis>,
        y: &SparseVec<AffineBasis>,
        window: i64,
    ) -> Result<SparseVec<AffineBasis>> {
        let mut out = BTreeMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                axpy(&mut out, ca * cb, &self.bracket_basis(*a, *b, window)?);
            }
        }
        Ok(out)
    }
}

/// One cyclic summand of the Jacobiator of a basis triple:
/// `ε_{μν} ε_{μ+ν,σ} · loop + ε_{μν} κ_{μ+ν,σ} · central`.
#[derive(Debug, Clone)]
struct JacobiTerm {
    first: (usize, usize),
    second: (usize, usize),
    loop_part: SparseVec<AffineBasis>,
    central: Q,
}

#[derive(Debug, Clone)]
struct TripleEntry {
    triple: [AffineBasis; 3],
    terms: Vec<JacobiTerm>,
}

/// Grading-dependent data for fast Jacobi checks across many ε tables.
#[derive(Debug, Clone)]
pub struct JacobiCache {
    window: i64,
    triples_checked: usize,
    entries: Vec<TripleEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiReport {
    pub passed: bool,
    pub triples_checked: usize,
    /// `(x, y, z, residual)` for the first failing triple.
    pub witness: Option<(String, String, String, String)>,
}

impl JacobiCache {
    /// All unordered basis triples with every partial and total degree inside the window.
    pub fn build(algebra: &AffineAlgebra, grading: &Grading, window: i64) -> Result<Self> {
        if window < 2 {
            return Err(Error::Invalid(format!(
                "Jacobi verification needs W ≥ 2, got {window}"
            )));
        }
        let basis: Vec<AffineBasis> = algebra
            .basis_in_window(window)
            .into_iter()
            .filter(|x| *x != AffineBasis::Central)
            .collect();
        let cls: Vec<usize> = basis
            .iter()
            .map(|&x| grading.group.index(&grading.mixed_class(algebra, x)))
            .collect();
        let g = &grading.group;
        let mut entries = Vec::new();
        let mut checked = 0;
        let fin = &algebra.finite;
        let parts = |x: AffineBasis| x.loop_parts().unwrap();
        for i in 0..basis.len() {
            for j in i..basis.len() {
                let (a, m) = parts(basis[i]);
                let (b, n) = parts(basis[j]);
                if (m + n).abs() > window {
                    continue;
                }
                for k in j..basis.len() {
                    let (c, p) = parts(basis[k]);
                    if (n + p).abs() > window
                        || (m + p).abs() > window
                        || (m + n + p).abs() > window
                    {
                        continue;
                    }
                    checked += 1;
                    let items = [(a, m, cls[i]), (b, n, cls[j]), (c, p, cls[k])];
                    let mut terms = Vec::new();
                    for (x, y, z) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                        let (fa, fm, fc) = items[x];
                        let (fb, fn_, gc) = items[y];
                        let (fz, fp, zc) = items[z];
                        let inner = fin.finite_bracket(fa, fb)?;
                        if inner.is_empty() {
                            continue;
                        }
                        let mut loop_part = BTreeMap::new();
                        let mut central = Q::zero();
                        for (u, cu) in &inner {
                            let (lp, cc) = algebra.bracket_parts(*u, fm + fn_, fz, fp)?;
                            for (w, cw) in lp {
                                axpy(
                                    &mut loop_part,
                                    *cu,
                                    &[(AffineBasis::from_loop(w, fm + fn_ + fp), cw)]
                                        .into_iter()
                                        .collect(),
                                );
                            }
                            central += cu * cc;
                        }
                        if loop_part.is_empty() && central.is_zero() {
                            continue;
                        }
                        terms.push(JacobiTerm {
                            first: (fc, gc),
                            second: (g.add_idx(fc, gc), zc),
                            loop_part,
                            central,
                        });
                    }
                    if !terms.is_empty() {
                        entries.push(TripleEntry {
                            triple: [basis[i], basis[j], basis[k]],
                            terms,
                        });
                    }
                }
            }
        }
        Ok(Self {
            window,
            triples_checked: checked,
            entries,
        })
    }

    pub fn check(&self, c: &ContractedAlgebra) -> JacobiReport {
        for entry in &self.entries {
            let mut loop_sum: SparseVec<AffineBasis> = BTreeMap::new();
            let mut central = Q::zero();
            for t in &entry.terms {
                let e1 = c.epsilon.effective(t.first.0, t.first.1);
                if e1.is_zero() {
                    continue;
                }
                let e2 = c.epsilon.effective(t.second.0, t.second.1);
                axpy(&mut loop_sum, e1 * e2, &t.loop_part);
                central += e1 * c.kappa[t.second.0][t.second.1] * t.central;
            }
            if !central.is_zero() {
                loop_sum.insert(AffineBasis::Central, central);
            }
            if !loop_sum.is_empty() {
                let alg = &c.algebra;
                let residual: Vec<String> = loop_sum
                    .iter()
                    .map(|(b, v)| format!("{}·{}", fmt_q(v), alg.fmt_basis(*b)))
                    .collect();
                return JacobiReport {
                    passed: false,
                    triples_checked: self.triples_checked,
                    witness: Some((
                        alg.fmt_basis(entry.triple[0]),
                        alg.fmt_basis(entry.triple[1]),
                        alg.fmt_basis(entry.triple[2]),
                        residual.join(" + "),
                    )),
                };
            }
        }
        JacobiReport {
            passed: true,
            triples_checked: self.triples_checked,
            witness: None,
        }
    }

    pub fn window(&self) -> i64 {
        self.window
    }
}

pub fn verify_jacobi(c: &ContractedAlgebra, window: i64) -> Result<JacobiReport> {
    Ok(JacobiCache::build(&c.algebra, &c.grading, window)?.check(c))
}

/// Builds a contracted algebra without validating ε or κ; used to exhibit
/// Jacobi failures of non-solutions.
pub fn contract_unchecked(
    algebra: &AffineAlgebra,
    grading: &Grading,
    eps: &EpsilonTable,
    kappa: Vec<Vec<Q>>,
) -> ContractedAlgebra {
    ContractedAlgebra {
        algebra: algebra.clone(),
        grading: grading.clone(),
        epsilon: eps.clone(),
        kappa,
    }
}

/// `{a ⊗ t^m : m ≡ residue mod period}` for a root vector `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootFamily {
    pub label: String,
    pub class: Label,
    pub root: Vec<i64>,
    pub residue: u64,
    pub period: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterReport {
    pub central_root_families: Vec<RootFamily>,
    /// `(residue, class, dimension of central Cartan directions, rank)`.
    pub central_cartan: Vec<(u64, Label, usize, usize)>,
    /// Classes whose whole subspace is central.
    pub central_classes: Vec<Label>,
    pub k_central: bool,
}

impl CenterReport {
    pub fn class_is_central(&self, l: &[u64]) -> bool {
        self.central_classes.iter().any(|c| c == l)
    }

    pub fn is_only_k(&self) -> bool {
        self.central_root_families.is_empty() && self.central_cartan.iter().all(|c| c.2 == 0)
    }
}

/// Decided per family over all Laurent degrees: the loop bracket with every
/// other family must be contracted away or vanish, and so must the central term.
pub fn center_report(c: &ContractedAlgebra) -> Result<CenterReport> {
    let alg = &c.algebra;
    let fin = &alg.finite;
    let grading = &c.grading;
    let g = &grading.group;
    let period = grading.vertical_period();
    let basis = fin.basis();
    let cls = |a: FiniteBasis, r: u64| g.index(&grading.class_loop(fin, a, r as i64));
    let commutes = |a: FiniteBasis, r: u64, b: FiniteBasis, s: u64| -> Result<bool> {
        let (mu, nu) = (cls(a, r), cls(b, s));
        if !c.epsilon.effective(mu, nu).is_zero() && !fin.finite_bracket(a, b)?.is_empty() {
            return Ok(false);
        }
        if (r + s).is_multiple_of(period)
            && !c.kappa[mu][nu].is_zero()
            && !fin.invariant_form(a, b)?.is_zero()
        {
            return Ok(false);
        }
        Ok(true)
    };
    let mut families = Vec::new();
    let mut cartan = Vec::new();
    let mut noncentral_classes: BTreeSet<usize> = BTreeSet::new();
    let mut seen_classes: BTreeSet<usize> = BTreeSet::new();
    for r in 0..period {
        for &a in &basis {
            let FiniteBasis::Root(ri) = a else { continue };
            seen_classes.insert(cls(a, r));
            let mut ok = true;
            for &b in &basis {
                for s in 0..period {
                    ok &= commutes(a, r, b, s)?;
                }
            }
            if ok {
                let root = fin.roots[ri].clone();
                families.push(RootFamily {
                    label: family_label(&root, r, period),
                    class: g.label(cls(a, r)),
                    root,
                    residue: r,
                    period,
                });
            } else {
                noncentral_classes.insert(cls(a, r));
            }
        }
        // Cartan directions h = Σ x_i h_i in degree class r.
        let h_class = cls(FiniteBasis::Cartan(0), r);
        seen_classes.insert(h_class);
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for s in 0..period {
            for &b in &basis {
                let nu = cls(b, s);
                match b {
                    FiniteBasis::Root(bi) if !c.epsilon.effective(h_class, nu).is_zero() => {
                        rows.push(
                            (0..fin.rank)
                                .map(|i| q(fin.pairing_with_coroot(&fin.roots[bi], i)))
                                .collect(),
                        );
                    }
                    FiniteBasis::Cartan(j)
                        if (r + s) % period == 0 && !c.kappa[h_class][nu].is_zero() =>
                    {
                        rows.push(
                            (0..fin.rank)
                                .map(|i| {
                                    fin.invariant_form(
                                        FiniteBasis::Cartan(i),
                                        FiniteBasis::Cartan(j),
                                    )
                                    .unwrap()
                                })
                                .collect(),
                        );
                    }
                    _ => {}
                }
            }
        }
        let dim = nullspace(fin.rank, &rows).len();
        if dim < fin.rank {
            noncentral_classes.insert(h_class);
        }
        cartan.push((r, g.label(h_class), dim, fin.rank));
    }
    let central_classes = seen_classes
        .into_iter()
        .filter(|x| !noncentral_classes.contains(x))
        .map(|x| g.label(x))
        .collect();
    Ok(CenterReport {
        central_root_families: families,
        central_cartan: cartan,
        central_classes,
        k_central: true,
    })
}

fn family_label(root: &[i64], r: u64, period: u64) -> String {
    let a = crate::lie::SimpleAlgebra::fmt_root(root);
    let m = if period == 1 {
        "mδ".to_string()
    } else if r == 0 {
        format!("{period}mδ")
    } else {
        format!("({period}m+{r})δ")
    };
    format!("E_{{{a}+{m}}}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StructureTag {
    Identity,
    Trivial,
    InonuWignerType,
    SubalgebraPreserving,
    Other,
}

/// Tags are not exclusive; `Other` appears only when nothing else applies.
pub fn classify_structure(eps: &EpsilonTable) -> BTreeSet<StructureTag> {
    let flat = eps.flat();
    let mut tags = BTreeSet::new();
    if flat.iter().all(|v| v.is_one()) {
        tags.insert(StructureTag::Identity);
    }
    if flat.iter().all(|v| v.is_zero()) {
        tags.insert(StructureTag::Trivial);
    }
    if eps.group.moduli == [2] && eps.mask.is_generic() && flat == [q(1), q(1), q(0)] {
        tags.insert(StructureTag::InonuWignerType);
    }
    if eps.get(0, 0) == Some(q(1)) {
        tags.insert(StructureTag::SubalgebraPreserving);
    }
    if tags.is_empty() {
        tags.insert(StructureTag::Other);
    }
    tags
}

/// Extra structural remark for the two abelian-extension patterns.
pub fn structure_note(eps: &EpsilonTable) -> Option<&'static str> {
    let n = eps.group.order();
    if n < 2 || eps.get(0, 0) != Some(q(1)) {
        return None;
    }
    let others = (1..n).flat_map(|a| (a..n).map(move |b| (a, b)));
    let rest_zero = others
        .clone()
        .all(|(a, b)| eps.get(a, b).is_none_or(|v| v.is_zero()));
    if !rest_zero {
        return None;
    }
    let row: Vec<Option<Q>> = (1..n).map(|b| eps.get(0, b)).collect();
    if row.iter().all(|v| v.is_none_or(|v| v.is_zero())) {
        Some("direct sum of the zero-class subalgebra and an abelian ideal")
    } else if row.iter().all(|v| v.is_none_or(|v| v.is_one())) {
        Some("semidirect product of the zero-class subalgebra with an abelian ideal")
    } else {
        None
    }
}

/// Symbolic rendering of the contracted bracket between classes `μ` and `ν`:
/// `ε·[a,b]⊗t^{m+n} + κ·m k B(a,b) δ_{m+n,0}` with zero parts dropped.
pub fn bracket_formula(c: &ContractedAlgebra, mu: usize, nu: usize) -> String {
    let e = c.epsilon.get(mu, nu);
    let k = c.kappa[sym(mu, nu).0][sym(mu, nu).1];
    let mut parts = Vec::new();
    match e {
        Some(v) if v.is_zero() => {}
        Some(v) if v.is_one() => parts.push("[a,b]⊗t^{m+n}".to_string()),
        Some(v) => parts.push(format!("{}·[a,b]⊗t^{{m+n}}", fmt_q(&v))),
        None => parts.push("[a,b]⊗t^{m+n} (∅: vanishes identically)".to_string()),
    }
    if !k.is_zero() {
        if k.is_one() {
            parts.push("m k B(a,b) δ_{m+n,0}".into());
        } else {
            parts.push(format!("{}·m k B(a,b) δ_{{m+n,0}}", fmt_q(&k)));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
