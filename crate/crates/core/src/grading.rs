//! Toroidal gradings: horizontal (EFO), vertical (Laurent degree mod N), and mixed.
//!
//! Horizontal classes are `<α, s> mod N` with `N = MC`, not mod `M`; this is
//! what makes `[0,1,0]` on `A2` a genuine `Z3` grading.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::affine::{AffineAlgebra, AffineBasis};
use crate::error::{Error, Result};
use crate::lie::{FiniteBasis, SimpleAlgebra};
use crate::rational::Q;

/// Element of a finite abelian group `Z_{N_1} × … × Z_{N_k}`.
pub type Label = Vec<u64>;

/// Product of cyclic groups; the empty product is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Group {
    pub moduli: Vec<u64>,
}

impl Group {
    pub fn cyclic(n: u64) -> Self {
        Self { moduli: vec![n] }
    }

    pub fn trivial() -> Self {
        Self { moduli: Vec::new() }
    }

    /// Parses `Z2`, `Z3`, `Z2xZ2` (also `Z2⊗Z2`, `Z2*Z2`), or `1` for the trivial group.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.eq_ignore_ascii_case("trivial") {
            return Ok(Self::trivial());
        }
        let moduli = s
            .split(['x', 'X', '*', '⊗'])
            .map(|f| {
                let f = f.trim();
                let n = f
                    .strip_prefix('Z')
                    .or_else(|| f.strip_prefix('z'))
                    .unwrap_or(f);
                match n.parse::<u64>() {
                    Ok(n) if n >= 1 => Ok(n),
                    _ => Err(Error::Invalid(format!("cannot parse group factor {f:?}"))),
                }
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(Self { moduli })
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().product::<u64>() as usize
    }

    pub fn zero(&self) -> Label {
        vec![0; self.moduli.len()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Label {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((x, y), n)| (x + y) % n)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Label {
        a.iter()
            .zip(&self.moduli)
            .map(|(x, n)| (n - x % n) % n)
            .collect()
    }

    /// Mixed-radix index with the first factor most significant.
    pub fn index(&self, a: &[u64]) -> usize {
        a.iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (x, n)| acc * *n as usize + *x as usize)
    }

    pub fn label(&self, mut idx: usize) -> Label {
        let mut out = vec![0; self.moduli.len()];
        for (k, n) in self.moduli.iter().enumerate().rev() {
            out[k] = (idx % *n as usize) as u64;
            idx /= *n as usize;
        }
        out
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        self.index(&self.add(&self.label(a), &self.label(b)))
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..self.order()).map(|i| self.label(i)).collect()
    }

    /// `0`, `1` for one cyclic factor, otherwise the concatenated digits (`01`)
    /// or a parenthesized tuple when some modulus exceeds 10.
    pub fn fmt_label(&self, a: &[u64]) -> String {
        if self.moduli.iter().all(|&n| n <= 10) {
            a.iter().map(|x| x.to_string()).collect()
        } else {
            format!(
                "({})",
                a.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<Label> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parsed: Option<Vec<u64>> = if s.contains(',') {
            s.split(',').map(|p| p.trim().parse::<u64>().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(u64::from)).collect()
        };
        let parts =
            parsed.ok_or_else(|| Error::Invalid(format!("cannot parse group label {s:?}")))?;
        if parts.len() != self.moduli.len() || parts.iter().zip(&self.moduli).any(|(x, n)| x >= n) {
            return Err(Error::Invalid(format!(
                "label {s:?} is not an element of {self}"
            )));
        }
        Ok(parts)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfoSpec {
    pub s: Vec<u32>,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "N")]
    pub n: u64,
}

/// `M = s_0 + Σ c_j s_j`, `C` the least positive integer with every
/// `C <ω_j, s>` integral, `N = MC`.
pub fn efo_order(alg: &SimpleAlgebra, s: &[u32]) -> Result<EfoSpec> {
    let bad = |reason: &str| Error::InvalidEfo {
        s: s.to_vec(),
        reason: reason.into(),
    };
    if s.len() != alg.rank + 1 {
        return Err(bad(&format!(
            "expected {} entries for rank {}",
            alg.rank + 1,
            alg.rank
        )));
    }
    let g = s.iter().fold(0u32, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return Err(bad("all entries are zero"));
    }
    if g != 1 {
        return Err(bad("entries must have gcd 1"));
    }
    let marks = alg.marks();
    let m = u64::from(s[0])
        + (0..alg.rank)
            .map(|j| marks[j] as u64 * u64::from(s[j + 1]))
            .sum::<u64>();
    let mut c: i64 = 1;
    for row in &alg.fundamental_weights_root_basis {
        let v: Q = row
            .iter()
            .zip(&s[1..])
            .map(|(w, &sk)| w * Q::from_integer(i64::from(sk)))
            .sum();
        c = c.lcm(v.denom());
    }
    Ok(EfoSpec {
        s: s.to_vec(),
        m,
        c: c as u64,
        n: m * c as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Layer {
    Horizontal(EfoSpec),
    Vertical(u64),
}

impl Layer {
    pub fn order(&self) -> u64 {
        match self {
            Layer::Horizontal(e) => e.n,
            Layer::Vertical(n) => *n,
        }
    }
}

/// JSON form: `{"layers":[{"kind":"horizontal","s":[0,1,1]},{"kind":"vertical","N":2}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingSpec {
    pub layers: Vec<LayerSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LayerSpec {
    Horizontal {
        s: Vec<u32>,
    },
    Vertical {
        #[serde(rename = "N")]
        n: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub layers: Vec<Layer>,
    pub group: Group,
}

impl Grading {
    pub fn from_spec(alg: &SimpleAlgebra, spec: &GradingSpec) -> Result<Self> {
        let layers = spec
            .layers
            .iter()
            .map(|l| match l {
                LayerSpec::Horizontal { s } => efo_order(alg, s).map(Layer::Horizontal),
                LayerSpec::Vertical { n } if *n >= 2 => Ok(Layer::Vertical(*n)),
                LayerSpec::Vertical { n } => Err(Error::InvalidGrading(format!(
                    "vertical modulus {n} must be at least 2"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_layers(layers))
    }

    pub fn from_layers(layers: Vec<Layer>) -> Self {
        let group = Group {
            moduli: layers.iter().map(Layer::order).collect(),
        };
        Self { layers, group }
    }

    pub fn horizontal(alg: &SimpleAlgebra, s: &[u32]) -> Result<Self> {
        Ok(Self::from_layers(vec![Layer::Horizontal(efo_order(
            alg, s,
        )?)]))
    }

    pub fn vertical(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrading(format!(
                "vertical modulus {n} must be at least 2"
            )));
        }
        Ok(Self::from_layers(vec![Layer::Vertical(n)]))
    }

    /// `ĝ_0 = ĝ`.
    pub fn trivial() -> Self {
        Self::from_layers(Vec::new())
    }

    pub fn to_spec(&self) -> GradingSpec {
        GradingSpec {
            layers: self
                .layers
                .iter()
                .map(|l| match l {
                    Layer::Horizontal(e) => LayerSpec::Horizontal { s: e.s.clone() },
                    Layer::Vertical(n) => LayerSpec::Vertical { n: *n },
                })
                .collect(),
        }
    }

    /// Least common multiple of the vertical moduli: classes depend on `m` only mod this.
    pub fn vertical_period(&self) -> u64 {
        self.layers.iter().fold(1u64, |acc, l| match l {
            Layer::Vertical(n) => acc.lcm(n),
            Layer::Horizontal(_) => acc,
        })
    }

    /// Class of `a ⊗ t^m`.
    pub fn class_loop(&self, alg: &SimpleAlgebra, a: FiniteBasis, m: i64) -> Label {
        self.layers
            .iter()
            .map(|l| match l {
                Layer::Horizontal(e) => horizontal_class_finite(alg, e, a),
                Layer::Vertical(n) => vertical_class_degree(*n, m),
            })
            .collect()
    }

    /// Per-layer class of an affine basis element; `k` is always in the zero class.
    pub fn mixed_class(&self, alg: &AffineAlgebra, x: AffineBasis) -> Label {
        match x.loop_parts() {
            Some((a, m)) => self.class_loop(&alg.finite, a, m),
            None => self.group.zero(),
        }
    }
}

/// `<α, s> mod N` for root vectors, 0 on the Cartan subalgebra.
pub fn horizontal_class_finite(alg: &SimpleAlgebra, efo: &EfoSpec, a: FiniteBasis) -> u64 {
    match a {
        FiniteBasis::Cartan(_) => 0,
        FiniteBasis::Root(i) => {
            let v: i64 = alg.roots[i]
                .iter()
                .zip(&efo.s[1..])
                .map(|(x, &s)| x * i64::from(s))
                .sum();
            v.rem_euclid(efo.n as i64) as u64
        }
    }
}

pub fn horizontal_class(alg: &AffineAlgebra, efo: &EfoSpec, x: AffineBasis) -> u64 {
    x.loop_parts()
        .map_or(0, |(a, _)| horizontal_class_finite(&alg.finite, efo, a))
}

pub fn vertical_class_degree(n: u64, m: i64) -> u64 {
    m.rem_euclid(n as i64) as u64
}

pub fn vertical_class(n: u64, x: AffineBasis) -> u64 {
    x.loop_parts()
        .map_or(0, |(_, m)| vertical_class_degree(n, m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingWitness {
    pub x: String,
    pub y: String,
    pub term: String,
    pub expected: Label,
    pub found: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingReport {
    pub passed: bool,
    pub pairs_checked: usize,
    pub witness: Option<GradingWitness>,
}

pub fn verify_grading(
    grading: &Grading,
    alg: &AffineAlgebra,
    window: i64,
) -> Result<GradingReport> {
    verify_grading_with(alg, &grading.group, window, |x| grading.mixed_class(alg, x))
}

/// Checks `[ĝ_μ, ĝ_ν] ⊆ ĝ_{μ+ν}` for all basis pairs with `|m| ≤ window`
/// against an arbitrary class function.
pub fn verify_grading_with<F>(
    alg: &AffineAlgebra,
    group: &Group,
    window: i64,
    class: F,
) -> Result<GradingReport>
where
    F: Fn(AffineBasis) -> Label,
{
    if window < 2 {
        return Err(Error::Invalid(format!(
            "grading verification needs W ≥ 2, got {window}"
        )));
    }
    let basis = alg.basis_in_window(window);
    let classes: Vec<Label> = basis.iter().map(|&x| class(x)).collect();
    let mut checked = 0;
    for (i, &x) in basis.iter().enumerate() {
        for (j, &y) in basis.iter().enumerate() {
            checked += 1;
            let expected = group.add(&classes[i], &classes[j]);
            for (t, _) in alg.bracket_basis(x, y, 2 * window)? {
                let found = class(t);
                if found != expected {
                    return Ok(GradingReport {
                        passed: false,
                        pairs_checked: checked,
                        witness: Some(GradingWitness {
                            x: alg.fmt_basis(x),
                            y: alg.fmt_basis(y),
                            term: alg.fmt_basis(t),
                            expected,
                            found,
                        }),
                    });
                }
            }
        }
    }
    Ok(GradingReport {
        passed: true,
        pairs_checked: checked,
        witness: None,
    })
}

/// Whether the central term `m k B(a,b) δ_{m+n,0}` counts toward relevance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelevanceMode {
    #[default]
    Full,
    LoopOnly,
}

/// `relevant[μ][ν]` is true iff `[ĝ_μ, ĝ_ν] ≠ 0`; false entries are the `∅` slots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mask {
    pub group: Group,
    pub relevant: Vec<Vec<bool>>,
}

impl Mask {
    pub fn all(group: &Group) -> Self {
        let n = group.order();
        Self {
            group: group.clone(),
            relevant: vec![vec![true; n]; n],
        }
    }

    pub fn is_relevant(&self, a: usize, b: usize) -> bool {
        self.relevant[a][b]
    }

    pub fn is_generic(&self) -> bool {
        self.relevant.iter().all(|r| r.iter().all(|&x| x))
    }

    pub fn set_irrelevant(&mut self, a: usize, b: usize) {
        self.relevant[a][b] = false;
        self.relevant[b][a] = false;
    }

    /// Irrelevant pairs `(μ, ν)` with `μ ≤ ν`.
    pub fn empty_slots(&self) -> Vec<(usize, usize)> {
        let n = self.group.order();
        (0..n)
            .flat_map(|a| (a..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !self.relevant[a][b])
            .collect()
    }
}

/// Decided from the finite root system and residues of `m` modulo the
/// vertical period, so the result does not depend on any truncation.
pub fn relevance_mask(grading: &Grading, alg: &AffineAlgebra, mode: RelevanceMode) -> Result<Mask> {
    let group = &grading.group;
    let mut mask = Mask {
        group: group.clone(),
        relevant: vec![vec![false; group.order()]; group.order()],
    };
    let period = grading.vertical_period() as i64;
    let fin = alg.finite.basis();
    for &a in &fin {
        for &b in &fin {
            let loop_nonzero = !alg.finite.finite_bracket(a, b)?.is_empty();
            let form_nonzero = mode == RelevanceMode::Full
                && !num_traits::Zero::is_zero(&alg.finite.invariant_form(a, b)?);
            if !loop_nonzero && !form_nonzero {
                continue;
            }
            for r in 0..period {
                for s in 0..period {
                    let central = form_nonzero && (r + s) % period == 0;
                    if loop_nonzero || central {
                        let i = group.index(&grading.class_loop(&alg.finite, a, r));
                        let j = group.index(&grading.class_loop(&alg.finite, b, s));
                        mask.relevant[i][j] = true;
                    }
                }
            }
        }
    }
    Ok(mask)
}
