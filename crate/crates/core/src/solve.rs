//! Discrete solvers for the contraction-parameter equations.
//!
//! Unknowns take values in `{0, 1}`. A pair `(μ, ν)` marked irrelevant in the
//! mask (`∅`) carries no ε value; any product containing it drops out of its
//! equation chain, since the corresponding bracket vanishes identically.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::grading::{Group, Mask};
use crate::rational::{fmt_q, Q};

pub const DEFAULT_GROUP_CAP: usize = 16;

/// Symmetric table `ε_{μ,ν}`; entries outside the mask are `∅`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonTable {
    pub group: Group,
    pub mask: Mask,
    values: Vec<Vec<Q>>,
}

/// Upper-triangle positions `(μ, ν)`, `μ ≤ ν`, that carry an unknown.
pub fn relevant_pairs(mask: &Mask) -> Vec<(usize, usize)> {
    let n = mask.group.order();
    (0..n)
        .flat_map(|a| (a..n).map(move |b| (a, b)))
        .filter(|&(a, b)| mask.is_relevant(a, b))
        .collect()
}

impl EpsilonTable {
    /// Values listed over [`relevant_pairs`] in order.
    pub fn from_flat(mask: &Mask, flat: &[Q]) -> Result<Self> {
        let pairs = relevant_pairs(mask);
        if flat.len() != pairs.len() {
            return Err(Error::Invalid(format!(
                "expected {} ε values for the relevant pairs of {}, got {}",
                pairs.len(),
                mask.group,
                flat.len()
            )));
        }
        let n = mask.group.order();
        let mut values = vec![vec![Q::zero(); n]; n];
        for (&(a, b), v) in pairs.iter().zip(flat) {
            values[a][b] = *v;
            values[b][a] = *v;
        }
        Ok(Self {
            group: mask.group.clone(),
            mask: mask.clone(),
            values,
        })
    }

    pub fn all_ones(mask: &Mask) -> Self {
        let n = relevant_pairs(mask).len();
        Self::from_flat(mask, &vec![Q::one(); n]).expect("length matches")
    }

    pub fn get(&self, a: usize, b: usize) -> Option<Q> {
        self.mask.is_relevant(a, b).then(|| self.values[a][b])
    }

    /// Multiplier applied to brackets; `∅` slots act as 1 since their bracket is zero anyway.
    pub fn effective(&self, a: usize, b: usize) -> Q {
        self.get(a, b).unwrap_or_else(Q::one)
    }

    pub fn flat(&self) -> Vec<Q> {
        relevant_pairs(&self.mask)
            .into_iter()
            .map(|(a, b)| self.values[a][b])
            .collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.flat().iter().all(|v| v.is_zero() || v.is_one())
    }

    /// First triple `(μ, ν, σ)` whose present terms disagree.
    pub fn violation(&self) -> Option<(usize, usize, usize)> {
        let g = &self.group;
        let n = g.order();
        let prod = |a: usize, b: usize, c: usize| -> Option<Q> {
            let ab = g.add_idx(a, b);
            Some(self.get(a, b)? * self.get(ab, c)?)
        };
        for mu in 0..n {
            for nu in 0..n {
                for sigma in 0..n {
                    let terms: Vec<Q> = [
                        prod(mu, nu, sigma),
                        prod(nu, sigma, mu),
                        prod(mu, sigma, nu),
                    ]
                    .into_iter()
                    .flatten()
                    .collect();
                    if terms.windows(2).any(|w| w[0] != w[1]) {
                        return Some((mu, nu, sigma));
                    }
                }
            }
        }
        None
    }

    pub fn require_solution(&self) -> Result<()> {
        match self.violation() {
            None => Ok(()),
            Some((a, b, c)) => Err(Error::NotASolution(format!(
                "ε violates the triple equation at (μ,ν,σ) = ({},{},{})",
                self.group.fmt_label(&self.group.label(a)),
                self.group.fmt_label(&self.group.label(b)),
                self.group.fmt_label(&self.group.label(c))
            ))),
        }
    }

    /// Compact form such as `(1,1,0)` or `(∅,1,0)` over the upper triangle.
    pub fn compact(&self) -> String {
        let n = self.group.order();
        let parts: Vec<String> = (0..n)
            .flat_map(|a| (a..n).map(move |b| (a, b)))
            .map(|(a, b)| self.get(a, b).map_or("∅".to_string(), |v| fmt_q(&v)))
            .collect();
        format!("({})", parts.join(","))
    }

    pub fn to_json(&self) -> Value {
        let mut eps = Map::new();
        for (a, b) in relevant_pairs(&self.mask) {
            eps.insert(pair_key(&self.group, a, b), q_json(&self.values[a][b]));
        }
        let mask: Vec<Value> = self
            .mask
            .empty_slots()
            .into_iter()
            .map(|(a, b)| Value::String(pair_key(&self.group, a, b)))
            .collect();
        json!({
            "group": self.group.to_string(),
            "epsilon": eps,
            "mask": mask,
        })
    }

    /// Reads the object written by [`EpsilonTable::to_json`]; missing
    /// relevant entries are an error.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Invalid(format!("solution table: {m}"));
        let group = Group::parse(
            v.get("group")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("missing group"))?,
        )?;
        let mut mask = Mask::all(&group);
        for slot in v
            .get("mask")
            .and_then(Value::as_array)
            .cloned()
            .unwrap_or_default()
        {
            let key = slot
                .as_str()
                .ok_or_else(|| bad("mask entries must be strings"))?;
            let (a, b) = parse_pair_key(&group, key)?;
            mask.set_irrelevant(a, b);
        }
        let eps = v
            .get("epsilon")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing epsilon"))?;
        let mut vals: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (k, val) in eps {
            let (a, b) = parse_pair_key(&group, k)?;
            let (a, b) = (a.min(b), a.max(b));
            vals.insert((a, b), parse_q_json(val)?);
        }
        let flat = relevant_pairs(&mask)
            .into_iter()
            .map(|p| {
                vals.get(&p)
                    .copied()
                    .ok_or_else(|| bad(&format!("missing entry {}", pair_key(&group, p.0, p.1))))
            })
            .collect::<Result<Vec<Q>>>()?;
        Self::from_flat(&mask, &flat)
    }
}

pub fn pair_key(g: &Group, a: usize, b: usize) -> String {
    format!(
        "({},{})",
        g.fmt_label(&g.label(a)),
        g.fmt_label(&g.label(b))
    )
}

/// Inverse of [`pair_key`].
pub fn parse_pair_key(g: &Group, key: &str) -> Result<(usize, usize)> {
    let inner = key.trim().trim_start_matches('(').trim_end_matches(')');
    let (x, y) = inner
        .split_once(',')
        .ok_or_else(|| Error::Invalid(format!("cannot parse pair {key:?}")))?;
    Ok((g.index(&g.parse_label(x)?), g.index(&g.parse_label(y)?)))
}

pub fn q_json(v: &Q) -> Value {
    if v.is_integer() {
        json!(v.to_integer())
    } else {
        json!(fmt_q(v))
    }
}

pub fn parse_q_json(v: &Value) -> Result<Q> {
    if let Some(i) = v.as_i64() {
        return Ok(Q::from_integer(i));
    }
    let s = v
        .as_str()
        .ok_or_else(|| Error::Invalid(format!("not a rational: {v}")))?;
    parse_q(s)
}

pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    match s.trim().split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(Q::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Boolean equation system: in every chain, all present products must agree.
#[derive(Debug, Default)]
struct Chains {
    nvars: usize,
    /// Each term is a constant bit times a product of unknowns.
    chains: Vec<Vec<(bool, Vec<usize>)>>,
}

impl Chains {
    fn eval(term: &(bool, Vec<usize>), x: &[u8]) -> u8 {
        u8::from(term.0 && term.1.iter().all(|&v| x[v] == 1))
    }

    fn holds(chain: &[(bool, Vec<usize>)], x: &[u8]) -> bool {
        let mut it = chain.iter().map(|t| Self::eval(t, x));
        match it.next() {
            None => true,
            Some(first) => it.all(|v| v == first),
        }
    }

    /// All assignments, lexicographic with 0 before 1.
    fn solve(&self) -> Vec<Vec<u8>> {
        let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); self.nvars + 1];
        for (i, c) in self.chains.iter().enumerate() {
            let last = c.iter().flat_map(|t| t.1.iter().copied()).max();
            by_last[last.map_or(0, |l| l + 1)].push(i);
        }
        let mut x = vec![0u8; self.nvars];
        if by_last[0]
            .iter()
            .any(|&i| !Self::holds(&self.chains[i], &x))
        {
            return Vec::new();
        }
        let mut out = Vec::new();
        self.dfs(0, &mut x, &by_last, &mut out);
        out
    }

    fn dfs(&self, k: usize, x: &mut Vec<u8>, by_last: &[Vec<usize>], out: &mut Vec<Vec<u8>>) {
        if k == self.nvars {
            out.push(x.clone());
            return;
        }
        for v in [0u8, 1] {
            x[k] = v;
            if by_last[k + 1]
                .iter()
                .all(|&i| Self::holds(&self.chains[i], x))
            {
                self.dfs(k + 1, x, by_last, out);
            }
        }
        x[k] = 0;
    }
}

fn check_cap(group: &Group, cap: usize) -> Result<()> {
    if group.order() > cap {
        return Err(Error::GroupTooLarge {
            order: group.order(),
            cap,
        });
    }
    Ok(())
}

pub fn solve_epsilon(mask: &Mask) -> Result<Vec<EpsilonTable>> {
    solve_epsilon_with_cap(mask, DEFAULT_GROUP_CAP)
}

pub fn solve_epsilon_with_cap(mask: &Mask, cap: usize) -> Result<Vec<EpsilonTable>> {
    let g = &mask.group;
    check_cap(g, cap)?;
    let n = g.order();
    let pairs = relevant_pairs(mask);
    let var: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let v = |a: usize, b: usize| var.get(&(a.min(b), a.max(b))).copied();
    let mut sys = Chains {
        nvars: pairs.len(),
        ..Default::default()
    };
    let prod = |a: usize, b: usize, c: usize| -> Option<(bool, Vec<usize>)> {
        Some((true, vec![v(a, b)?, v(g.add_idx(a, b), c)?]))
    };
    for mu in 0..n {
        for nu in 0..n {
            for sigma in 0..n {
                let chain: Vec<_> = [
                    prod(mu, nu, sigma),
                    prod(nu, sigma, mu),
                    prod(mu, sigma, nu),
                ]
                .into_iter()
                .flatten()
                .collect();
                if chain.len() > 1 {
                    sys.chains.push(chain);
                }
            }
        }
    }
    Ok(sys
        .solve()
        .into_iter()
        .map(|x| {
            let flat: Vec<Q> = x.iter().map(|&b| Q::from_integer(i64::from(b))).collect();
            EpsilonTable::from_flat(mask, &flat).expect("length matches")
        })
        .collect())
}

/// Square `{0,1}` table over `Γ × Γ`; symmetric for τ, not for ψ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitTable {
    pub group: Group,
    pub values: Vec<Vec<u8>>,
}

impl BitTable {
    pub fn ones(group: &Group) -> Self {
        let n = group.order();
        Self {
            group: group.clone(),
            values: vec![vec![1; n]; n],
        }
    }

    pub fn to_json(&self, name: &str) -> Value {
        let n = self.group.order();
        let mut m = Map::new();
        for a in 0..n {
            for b in 0..n {
                m.insert(pair_key(&self.group, a, b), json!(self.values[a][b]));
            }
        }
        json!({ name: m })
    }
}

/// ψ: first index an algebra class, second a module class.
pub type PsiTable = BitTable;
/// τ: symmetric over pairs of module classes.
pub type TauTable = BitTable;

fn discrete_bit(e: &EpsilonTable, a: usize, b: usize) -> Result<Option<bool>> {
    match e.get(a, b) {
        None => Ok(None),
        Some(v) if v.is_zero() => Ok(Some(false)),
        Some(v) if v.is_one() => Ok(Some(true)),
        Some(v) => Err(Error::Invalid(format!(
            "discrete solver needs ε in {{0,1}}, found {}",
            fmt_q(&v)
        ))),
    }
}

fn psi_system(eps: &EpsilonTable) -> Result<Chains> {
    let g = &eps.group;
    let n = g.order();
    let v = |a: usize, b: usize| a * n + b;
    let mut sys = Chains {
        nvars: n * n,
        ..Default::default()
    };
    for mu in 0..n {
        for nu in 0..n {
            let e = discrete_bit(eps, mu, nu)?;
            for sigma in 0..n {
                let mut chain = Vec::new();
                if let Some(bit) = e {
                    chain.push((bit, vec![v(g.add_idx(mu, nu), sigma)]));
                }
                chain.push((true, vec![v(nu, sigma), v(mu, g.add_idx(nu, sigma))]));
                chain.push((true, vec![v(mu, sigma), v(nu, g.add_idx(mu, sigma))]));
                sys.chains.push(chain);
            }
        }
    }
    Ok(sys)
}

/// `ε_{μν} ψ_{μ+ν,σ} = ψ_{νσ} ψ_{μ,ν+σ} = ψ_{μσ} ψ_{ν,μ+σ}`.
pub fn solve_psi(eps: &EpsilonTable) -> Result<Vec<PsiTable>> {
    eps.require_solution()?;
    check_cap(&eps.group, DEFAULT_GROUP_CAP)?;
    Ok(psi_system(eps)?
        .solve()
        .into_iter()
        .map(|x| unflatten(&eps.group, &x))
        .collect())
}

pub fn psi_is_solution(eps: &EpsilonTable, psi: &PsiTable) -> Result<bool> {
    if psi.group != eps.group {
        return Err(Error::GroupMismatch(format!(
            "ψ over {} but ε over {}",
            psi.group, eps.group
        )));
    }
    let x: Vec<u8> = psi.values.iter().flatten().copied().collect();
    Ok(psi_system(eps)?.chains.iter().all(|c| Chains::holds(c, &x)))
}

fn unflatten(g: &Group, x: &[u8]) -> BitTable {
    let n = g.order();
    BitTable {
        group: g.clone(),
        values: (0..n).map(|a| x[a * n..(a + 1) * n].to_vec()).collect(),
    }
}

/// Which second index the last member of the τ chain uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauVariant {
    /// `ψ_{σν} τ_{σ+ν,μ}`, matching the pattern of the first two members.
    #[default]
    PatternConsistent,
    /// `ψ_{σν} τ_{σ+ν,ν}` as printed.
    Literal,
}

/// `ψ_{σ,μ+ν} τ_{μν} = ψ_{σμ} τ_{σ+μ,ν} = ψ_{σν} τ_{σ+ν,X}` with symmetric τ.
pub fn solve_tau(eps: &EpsilonTable, psi: &PsiTable, variant: TauVariant) -> Result<Vec<TauTable>> {
    let g = &psi.group;
    eps.require_solution()?;
    if !psi_is_solution(eps, psi)? {
        return Err(Error::NotASolution(
            "ψ does not satisfy its equations for the given ε".into(),
        ));
    }
    let n = g.order();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let v = |a: usize, b: usize| {
        let (a, b) = sym(a, b);
        a * n - a * (a + 1) / 2 + b
    };
    let mut sys = Chains {
        nvars: pairs.len(),
        ..Default::default()
    };
    let bit = |a: usize, b: usize| psi.values[a][b] == 1;
    for sigma in 0..n {
        for mu in 0..n {
            for nu in 0..n {
                let x = match variant {
                    TauVariant::PatternConsistent => mu,
                    TauVariant::Literal => nu,
                };
                sys.chains.push(vec![
                    (bit(sigma, g.add_idx(mu, nu)), vec![v(mu, nu)]),
                    (bit(sigma, mu), vec![v(g.add_idx(sigma, mu), nu)]),
                    (bit(sigma, nu), vec![v(g.add_idx(sigma, nu), x)]),
                ]);
            }
        }
    }
    Ok(sys
        .solve()
        .into_iter()
        .map(|x| {
            let mut values = vec![vec![0u8; n]; n];
            for (i, &(a, b)) in pairs.iter().enumerate() {
                values[a][b] = x[i];
                values[b][a] = x[i];
            }
            BitTable {
                group: g.clone(),
                values,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaEntry {
    Zero,
    /// Entries sharing a symbol are equal.
    Free(usize),
}

/// General solution of the γ equations: every entry is zero or a free symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaTable {
    pub group: Group,
    pub entries: Vec<Vec<GammaEntry>>,
    pub num_free: usize,
}

impl GammaTable {
    /// Every `{0,1}` specialization, in lexicographic order of the free symbols.
    pub fn enumerate(&self) -> Vec<Vec<Vec<u8>>> {
        (0..1usize << self.num_free)
            .map(|bits| {
                self.entries
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| match e {
                                GammaEntry::Zero => 0,
                                GammaEntry::Free(s) => {
                                    ((bits >> (self.num_free - 1 - s)) & 1) as u8
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_free(&self, a: usize, b: usize) -> bool {
        matches!(self.entries[a][b], GammaEntry::Free(_))
    }

    pub fn to_json(&self) -> Value {
        let n = self.group.order();
        let mut m = Map::new();
        for a in 0..n {
            for b in a..n {
                let v = match self.entries[a][b] {
                    GammaEntry::Zero => json!(0),
                    GammaEntry::Free(s) => json!(format!("g{}", s + 1)),
                };
                m.insert(pair_key(&self.group, a, b), v);
            }
        }
        json!({ "gamma": m })
    }
}

/// Equations `ε_{μν} γ_{μ+ν,σ} = ε_{νσ} γ_{μ,ν+σ}` over symmetric γ, as pairs
/// `((ε_{μν}, (μ+ν, σ)), (ε_{νσ}, (μ, ν+σ)))` with `(μ, ν, σ)` attached.
/// Triples touching a `∅` slot are vacuous and skipped.
pub(crate) fn gamma_equations(
    eps: &EpsilonTable,
) -> Vec<(
    (usize, usize, usize),
    (Q, (usize, usize)),
    (Q, (usize, usize)),
)> {
    let g = &eps.group;
    let n = g.order();
    let mut out = Vec::new();
    for mu in 0..n {
        for nu in 0..n {
            for sigma in 0..n {
                let (Some(a), Some(b)) = (eps.get(mu, nu), eps.get(nu, sigma)) else {
                    continue;
                };
                let p = sym(g.add_idx(mu, nu), sigma);
                let q = sym(mu, g.add_idx(nu, sigma));
                out.push(((mu, nu, sigma), (a, p), (b, q)));
            }
        }
    }
    out
}

pub(crate) fn sym(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

pub fn solve_gamma(eps: &EpsilonTable) -> Result<Vec<GammaTable>> {
    eps.require_solution()?;
    let g = &eps.group;
    check_cap(g, DEFAULT_GROUP_CAP)?;
    let n = g.order();
    let idx = |p: (usize, usize)| p.0 * n + p.1;
    let mut parent: Vec<usize> = (0..n * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let nx = p[c];
            p[c] = r;
            c = nx;
        }
        r
    }
    let mut zero_forced = vec![false; n * n];
    for (_, (a, p), (b, q)) in gamma_equations(eps) {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => {}
            (false, true) => zero_forced[idx(p)] = true,
            (true, false) => zero_forced[idx(q)] = true,
            (false, false) => {
                if a != b {
                    return Err(Error::Invalid("γ solver handles ε in {0,1} only".into()));
                }
                let (rp, rq) = (find(&mut parent, idx(p)), find(&mut parent, idx(q)));
                if rp != rq {
                    parent[rp.max(rq)] = rp.min(rq);
                }
            }
        }
    }
    let mut root_zero = vec![false; n * n];
    for a in 0..n {
        for b in a..n {
            if zero_forced[idx((a, b))] {
                let r = find(&mut parent, idx((a, b)));
                root_zero[r] = true;
            }
        }
    }
    let mut symbol: BTreeMap<usize, usize> = BTreeMap::new();
    let mut entries = vec![vec![GammaEntry::Zero; n]; n];
    for a in 0..n {
        for b in a..n {
            let r = find(&mut parent, idx((a, b)));
            let e = if root_zero[r] {
                GammaEntry::Zero
            } else {
                let next = symbol.len();
                GammaEntry::Free(*symbol.entry(r).or_insert(next))
            };
            entries[a][b] = e;
            entries[b][a] = e;
        }
    }
    Ok(vec![GammaTable {
        group: g.clone(),
        entries,
        num_free: symbol.len(),
    }])
}
