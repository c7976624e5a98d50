//! Job specifications: a JSON file, command-line flags, or both (flags win).

use std::path::Path;

use kacmoody::affine::AffineAlgebra;
use kacmoody::contraction::{kappa_from_flat, kappa_plain};
use kacmoody::grading::{
    relevance_mask, Grading, GradingSpec, Group, LayerSpec, Mask, RelevanceMode,
};
use kacmoody::lie::AlgebraSpec;
use kacmoody::solve::{parse_pair_key, parse_q, EpsilonTable, TauVariant};
use kacmoody::{Error, Q};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const DEFAULT_ALGEBRA: &str = "A2";
pub const DEFAULT_EFO: [u32; 3] = [0, 1, 1];

/// Mirrors `schemas/job.schema.json`. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic: Option<bool>,
    /// Irrelevant pairs, e.g. `"00"` or `"(01,10)"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relevance: Option<RelevanceMode>,
    /// Upper-triangle values over the relevant pairs, or a solution table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    /// Upper-triangle values over all pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_jacobi: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hw: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_variant: Option<TauVariant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<bool>,
}

pub fn read_job(path: &Path) -> Result<JobSpec, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Invalid(format!("job file {}: {e}", path.display())))
}

impl JobSpec {
    /// Fields set in `over` replace those of `self`.
    pub fn merged(self, over: JobSpec) -> JobSpec {
        macro_rules! pick {
            ($($f:ident),*) => { JobSpec { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            command,
            algebra,
            grading,
            group,
            generic,
            mask,
            relevance,
            epsilon,
            solutions,
            index,
            kappa,
            check_jacobi,
            window,
            hw,
            depth,
            psi,
            tau,
            tau_variant,
            gamma
        )
    }

    pub fn affine(&self) -> Result<AffineAlgebra, Error> {
        let name = self.algebra.as_deref().unwrap_or(DEFAULT_ALGEBRA);
        Ok(AffineAlgebra::new(AlgebraSpec::from_name(name)?.build()?))
    }

    pub fn has_grading(&self) -> bool {
        self.grading.as_ref().is_some_and(|g| !g.layers.is_empty())
    }

    /// Without any layer the rank-2 default `[0,1,1]` is used for `A2`; other
    /// algebras need an explicit grading.
    pub fn grading(&self, affine: &AffineAlgebra) -> Result<Grading, Error> {
        let spec = match &self.grading {
            Some(g) if !g.layers.is_empty() => g.clone(),
            _ if affine.rank() == 2
                && self.algebra.as_deref().unwrap_or(DEFAULT_ALGEBRA) == DEFAULT_ALGEBRA =>
            {
                GradingSpec {
                    layers: vec![LayerSpec::Horizontal {
                        s: DEFAULT_EFO.to_vec(),
                    }],
                }
            }
            _ => {
                return Err(Error::InvalidGrading(
                    "no grading given: use --efo and/or --vertical".into(),
                ))
            }
        };
        Grading::from_spec(&affine.finite, &spec)
    }

    pub fn relevance(&self) -> RelevanceMode {
        self.relevance.unwrap_or_default()
    }

    /// From `--group` with `--generic`/`--mask`, or from the algebra and grading.
    pub fn mask(&self) -> Result<Mask, Error> {
        if let Some(g) = &self.group {
            if self.has_grading() {
                return Err(Error::Invalid(
                    "give either --group or a grading, not both".into(),
                ));
            }
            let group = Group::parse(g)?;
            let mut mask = Mask::all(&group);
            for key in self.mask.iter().flatten() {
                let (a, b) = parse_mask_key(&group, key)?;
                mask.set_irrelevant(a, b);
            }
            if self.generic == Some(true) && !mask.is_generic() {
                return Err(Error::Invalid("--generic conflicts with --mask".into()));
            }
            return Ok(mask);
        }
        let affine = self.affine()?;
        let grading = self.grading(&affine)?;
        let mut mask = if self.generic == Some(true) {
            Mask::all(&grading.group)
        } else {
            relevance_mask(&grading, &affine, self.relevance())?
        };
        for key in self.mask.iter().flatten() {
            let (a, b) = parse_mask_key(&grading.group, key)?;
            mask.set_irrelevant(a, b);
        }
        Ok(mask)
    }

    /// The ε table named by `--epsilon` or by `--solutions` and `--index`.
    pub fn epsilon(&self, mask: &Mask) -> Result<EpsilonTable, Error> {
        if let Some(path) = &self.solutions {
            if self.epsilon.is_some() {
                return Err(Error::Invalid(
                    "give either --epsilon or --solutions".into(),
                ));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cannot read {path}: {e}")))?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Invalid(format!("solution file {path}: {e}")))?;
            let tables = v.as_array().ok_or_else(|| {
                Error::Invalid(format!("solution file {path}: expected an array"))
            })?;
            let i = self.index.unwrap_or(0);
            let t = tables.get(i).ok_or_else(|| {
                Error::Invalid(format!(
                    "solution file {path} has {} tables, no index {i}",
                    tables.len()
                ))
            })?;
            return check_table_mask(EpsilonTable::from_json(t)?, mask);
        }
        match &self.epsilon {
            None => Err(Error::Invalid(
                "no contraction given: use --epsilon or --solutions".into(),
            )),
            Some(Value::Array(vals)) => {
                let flat = vals
                    .iter()
                    .map(value_q)
                    .collect::<Result<Vec<Q>, Error>>()?;
                EpsilonTable::from_flat(mask, &flat)
            }
            Some(v @ Value::Object(_)) => check_table_mask(EpsilonTable::from_json(v)?, mask),
            Some(other) => Err(Error::Invalid(format!(
                "epsilon must be an array or a table, got {other}"
            ))),
        }
    }

    pub fn kappa(&self, eps: &EpsilonTable) -> Result<Vec<Vec<Q>>, Error> {
        match &self.kappa {
            None => Ok(kappa_plain(eps)),
            Some(vals) => {
                let flat = vals
                    .iter()
                    .map(value_q)
                    .collect::<Result<Vec<Q>, Error>>()?;
                kappa_from_flat(eps.group.order(), &flat)
            }
        }
    }
}

fn check_table_mask(t: EpsilonTable, mask: &Mask) -> Result<EpsilonTable, Error> {
    if t.mask != *mask {
        return Err(Error::GroupMismatch(format!(
            "table over {} with ∅ slots {:?} does not match the selected grading ({} with ∅ slots {:?})",
            t.group,
            t.mask.empty_slots(),
            mask.group,
            mask.empty_slots()
        )));
    }
    Ok(t)
}

fn value_q(v: &Value) -> Result<Q, Error> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap())),
        Value::String(s) => parse_q(s),
        other => Err(Error::Invalid(format!("not a rational: {other}"))),
    }
}

/// `00` (two single-digit labels) or `(μ,ν)` with group labels.
pub fn parse_mask_key(g: &Group, key: &str) -> Result<(usize, usize), Error> {
    let key = key.trim();
    if key.contains(',') {
        return parse_pair_key(g, key);
    }
    let digits: Vec<char> = key.chars().collect();
    let width = g.moduli.len();
    if width == 0 || digits.len() != 2 * width {
        return Err(Error::Invalid(format!(
            "cannot read mask pair {key:?} for {g}; use (μ,ν)"
        )));
    }
    let (x, y): (String, String) = (
        digits[..width].iter().collect(),
        digits[width..].iter().collect(),
    );
    Ok((g.index(&g.parse_label(&x)?), g.index(&g.parse_label(&y)?)))
}
