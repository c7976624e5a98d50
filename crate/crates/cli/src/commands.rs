//! The five subcommands. Each returns text, JSON, and whether its check passed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use kacmoody::affine::AffineAlgebra;
use kacmoody::contraction::{
    bracket_formula, center_report, classify_structure, contract, structure_note, verify_jacobi,
    ContractedAlgebra,
};
use kacmoody::generators::minimal_generators;
use kacmoody::grading::{verify_grading, Grading, Layer};
use kacmoody::lie::{FiniteBasis, SimpleAlgebra};
use kacmoody::rational::fmt_q;
use kacmoody::solve::{q_json, solve_epsilon, solve_gamma, solve_psi, solve_tau, EpsilonTable};
use kacmoody::weights::{verify_module_grading, weight_system, GradedWeightSystem};
use kacmoody::Error;
use serde_json::{json, Value};

use crate::job::JobSpec;

pub const DEFAULT_GRADE_WINDOW: i64 = 3;
pub const DEFAULT_JACOBI_WINDOW: i64 = 3;
pub const DEFAULT_GENERATOR_WINDOW: i64 = 5;
pub const DEFAULT_DEPTH: u32 = 10;

pub struct Output {
    pub text: String,
    pub json: Value,
    /// False when a requested verification failed.
    pub ok: bool,
}

/// `mδ`, `2mδ`, `(2m+1)δ` for residue `r` modulo `period`.
fn degree_form(r: u64, period: u64) -> String {
    match (period, r) {
        (1, _) => "mδ".into(),
        (p, 0) => format!("{p}mδ"),
        (p, r) => format!("({p}m+{r})δ"),
    }
}

fn layers_json(g: &Grading) -> Value {
    g.layers
        .iter()
        .map(|l| match l {
            Layer::Horizontal(e) => {
                json!({"kind": "horizontal", "s": e.s, "M": e.m, "C": e.c, "N": e.n})
            }
            Layer::Vertical(n) => json!({"kind": "vertical", "N": n}),
        })
        .collect()
}

fn layers_text(g: &Grading) -> String {
    let parts: Vec<String> = g
        .layers
        .iter()
        .map(|l| match l {
            Layer::Horizontal(e) => {
                format!("horizontal EFO {:?} (M={}, C={}, N={})", e.s, e.m, e.c, e.n)
            }
            Layer::Vertical(n) => format!("vertical Z{n}"),
        })
        .collect();
    if parts.is_empty() {
        "trivial".into()
    } else {
        parts.join(" ⊗ ")
    }
}

/// Basis families `E_{α + (pm+r)δ}`, `E_{(pm+r)δ}` and `k` grouped by class.
fn class_members(affine: &AffineAlgebra, g: &Grading) -> Vec<Vec<String>> {
    let fin = &affine.finite;
    let period = g.vertical_period();
    let mut out = vec![Vec::new(); g.group.order()];
    out[0].push("k".to_string());
    for r in 0..period {
        let h = g
            .group
            .index(&g.class_loop(fin, FiniteBasis::Cartan(0), r as i64));
        out[h].push(format!("E_{{{}}}", degree_form(r, period)));
        for (i, root) in fin.roots.iter().enumerate() {
            let c = g
                .group
                .index(&g.class_loop(fin, FiniteBasis::Root(i), r as i64));
            out[c].push(format!(
                "E_{{{}+{}}}",
                SimpleAlgebra::fmt_root(root),
                degree_form(r, period)
            ));
        }
    }
    out
}

pub fn grade(job: &JobSpec) -> Result<Output, Error> {
    let affine = job.affine()?;
    let g = job.grading(&affine)?;
    let window = job.window.unwrap_or(DEFAULT_GRADE_WINDOW);
    let members = class_members(&affine, &g);
    let report = verify_grading(&g, &affine, window)?;
    let alg_name = algebra_name(&affine);

    let mut text = format!(
        "Â{} grading: {}  group {}\n",
        &alg_name[1..],
        layers_text(&g),
        g.group
    );
    for (i, m) in members.iter().enumerate() {
        let _ = writeln!(
            text,
            "  class {}: {}",
            g.group.fmt_label(&g.group.label(i)),
            m.join(", ")
        );
    }
    let _ = writeln!(
        text,
        "verify_grading W={window}: {} ({} pairs)",
        if report.passed { "pass" } else { "FAIL" },
        report.pairs_checked
    );
    if let Some(w) = &report.witness {
        let _ = writeln!(
            text,
            "  [{}, {}] contains {} in class {:?}, expected {:?}",
            w.x, w.y, w.term, w.found, w.expected
        );
    }
    let classes: Vec<Value> = members
        .iter()
        .enumerate()
        .map(|(i, m)| json!({"class": g.group.fmt_label(&g.group.label(i)), "elements": m}))
        .collect();
    Ok(Output {
        text,
        json: json!({
            "algebra": alg_name,
            "group": g.group.to_string(),
            "layers": layers_json(&g),
            "classes": classes,
            "window": window,
            "verification": report,
        }),
        ok: report.passed,
    })
}

fn algebra_name(a: &AffineAlgebra) -> String {
    format!("{:?}{}", a.finite.series, a.rank())
}

pub fn solve(job: &JobSpec) -> Result<Output, Error> {
    let mask = job.mask()?;
    let sols = solve_epsilon(&mask)?;
    let variant = job.tau_variant.unwrap_or_default();
    let (want_psi, want_tau, want_gamma) = (
        job.psi == Some(true),
        job.tau == Some(true),
        job.gamma == Some(true),
    );
    let slots = mask.empty_slots();
    let g = &mask.group;
    let mut text = format!(
        "group {g}, {}\n{} ε solutions:\n",
        if slots.is_empty() {
            "generic".to_string()
        } else {
            let keys: Vec<String> = slots
                .iter()
                .map(|&(a, b)| kacmoody::solve::pair_key(g, a, b))
                .collect();
            format!("∅ at {}", keys.join(" "))
        },
        sols.len()
    );
    let mut tables = Vec::new();
    for (i, e) in sols.iter().enumerate() {
        let mut t = e.to_json();
        let tags: Vec<String> = classify_structure(e)
            .iter()
            .map(|t| format!("{t:?}"))
            .collect();
        let _ = write!(text, "  {:>3}. {}  [{}]", i, e.compact(), tags.join(", "));
        t["tags"] = json!(tags);
        if want_psi || want_tau {
            let psis = solve_psi(e)?;
            let _ = write!(text, "  ψ: {}", psis.len());
            if want_psi {
                t["psi"] = psis
                    .iter()
                    .map(|p| p.to_json("psi")["psi"].clone())
                    .collect();
            }
            if want_tau {
                let mut total = 0;
                let mut per = Vec::new();
                for p in &psis {
                    let taus = solve_tau(e, p, variant)?;
                    total += taus.len();
                    per.push(
                        taus.iter()
                            .map(|t| t.to_json("tau")["tau"].clone())
                            .collect::<Value>(),
                    );
                }
                let _ = write!(text, "  τ: {total}");
                t["tau"] = json!({"variant": variant, "per_psi": per});
            }
        }
        if want_gamma {
            let gam = solve_gamma(e)?;
            let gj = gam[0].to_json()["gamma"].clone();
            let _ = write!(text, "  γ: {}", compact_gamma(&gj));
            t["gamma"] = gj;
        }
        text.push('\n');
        tables.push(t);
    }
    Ok(Output {
        text,
        json: Value::Array(tables),
        ok: true,
    })
}

fn compact_gamma(v: &Value) -> String {
    let parts: Vec<String> = v
        .as_object()
        .map(|m| {
            m.iter()
                .map(|(k, x)| {
                    format!(
                        "{k}={}",
                        x.as_str().map_or_else(|| x.to_string(), str::to_string)
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    parts.join(" ")
}

fn contracted(job: &JobSpec) -> Result<ContractedAlgebra, Error> {
    if job.group.is_some() {
        return Err(Error::Invalid(
            "contractions need an algebra and grading, not --group".into(),
        ));
    }
    let affine = job.affine()?;
    let g = job.grading(&affine)?;
    let mask = job.mask()?;
    let eps = job.epsilon(&mask)?;
    let kappa = job.kappa(&eps)?;
    contract(&affine, &g, &eps, kappa)
}

fn kappa_json(c: &ContractedAlgebra) -> Value {
    let g = &c.grading.group;
    let n = g.order();
    let mut m = serde_json::Map::new();
    for a in 0..n {
        for b in a..n {
            m.insert(kacmoody::solve::pair_key(g, a, b), q_json(&c.kappa[a][b]));
        }
    }
    Value::Object(m)
}

pub fn contract_cmd(job: &JobSpec) -> Result<Output, Error> {
    let c = contracted(job)?;
    let g = &c.grading.group;
    let n = g.order();
    let eps: &EpsilonTable = &c.epsilon;
    let mut text = format!(
        "Â{} grading {} ({}), ε = {}\n",
        &algebra_name(&c.algebra)[1..],
        layers_text(&c.grading),
        g,
        eps.compact()
    );
    let kparts: Vec<String> = (0..n)
        .flat_map(|a| (a..n).map(move |b| (a, b)))
        .map(|(a, b)| fmt_q(&c.kappa[a][b]))
        .collect();
    let _ = writeln!(text, "κ = ({})", kparts.join(","));
    let mut brackets = serde_json::Map::new();
    text.push_str("brackets:\n");
    for a in 0..n {
        for b in a..n {
            let key = kacmoody::solve::pair_key(g, a, b);
            let f = bracket_formula(&c, a, b);
            let _ = writeln!(text, "  {key}: {f}");
            brackets.insert(key, json!(f));
        }
    }
    let tags: Vec<String> = classify_structure(eps)
        .iter()
        .map(|t| format!("{t:?}"))
        .collect();
    let _ = writeln!(text, "structure: {}", tags.join(", "));
    let note = structure_note(eps);
    if let Some(s) = note {
        let _ = writeln!(text, "  {s}");
    }
    let center = center_report(&c)?;
    let central: Vec<String> = center
        .central_classes
        .iter()
        .map(|l| g.fmt_label(l))
        .collect();
    let _ = writeln!(
        text,
        "center: k{}{}",
        if central.is_empty() {
            String::new()
        } else {
            format!(", all of classes {}", central.join(" "))
        },
        if center.central_root_families.is_empty() {
            String::new()
        } else {
            let fams: Vec<&str> = center
                .central_root_families
                .iter()
                .map(|f| f.label.as_str())
                .collect();
            format!("; root vectors {}", fams.join(" "))
        }
    );
    let gamma = solve_gamma(eps)?[0].to_json()["gamma"].clone();
    let _ = writeln!(text, "γ general solution: {}", compact_gamma(&gamma));
    let mut ok = true;
    let mut jacobi = Value::Null;
    if job.check_jacobi == Some(true) {
        let w = job.window.unwrap_or(DEFAULT_JACOBI_WINDOW);
        let rep = verify_jacobi(&c, w)?;
        ok = rep.passed;
        let _ = writeln!(
            text,
            "Jacobi W={w}: {} ({} triples)",
            if rep.passed { "pass" } else { "FAIL" },
            rep.triples_checked
        );
        if let Some(wit) = &rep.witness {
            let _ = writeln!(text, "  witness: {wit:?}");
        }
        jacobi = json!({"window": w, "report": rep});
    }
    Ok(Output {
        text,
        json: json!({
            "algebra": algebra_name(&c.algebra),
            "layers": layers_json(&c.grading),
            "table": eps.to_json(),
            "kappa": kappa_json(&c),
            "brackets": brackets,
            "structure": tags,
            "structure_note": note,
            "center": center,
            "gamma": gamma,
            "jacobi": jacobi,
        }),
        ok,
    })
}

pub fn generators(job: &JobSpec) -> Result<Output, Error> {
    let c = contracted(job)?;
    let w = job.window.unwrap_or(DEFAULT_GENERATOR_WINDOW);
    let rep = minimal_generators(&c, w)?;
    Ok(Output {
        text: rep.to_text(),
        json: serde_json::to_value(&rep).expect("report serializes"),
        ok: true,
    })
}

pub fn repgrade(job: &JobSpec) -> Result<Output, Error> {
    let affine = job.affine()?;
    let hw = job
        .hw
        .clone()
        .ok_or_else(|| Error::Invalid("repgrade needs --hw".into()))?;
    let depth = job.depth.unwrap_or(DEFAULT_DEPTH);
    let g = job.grading(&affine)?;
    let ws = weight_system(&affine, &hw, depth)?;
    let check = verify_module_grading(&ws, &g, i64::from(depth.max(1)));
    let graded = GradedWeightSystem::new(ws, &g);
    let mut rows = graded.rows();
    rows.sort_by(|a, b| a.depth.cmp(&b.depth).then_with(|| b.labels.cmp(&a.labels)));
    let dims = graded.class_dimensions();
    let families = graded.system.string_families();

    let mut text = format!(
        "Â{} highest weight {:?} (level {}), depth ≤ {depth}, grading {} ({})\n",
        &algebra_name(&affine)[1..],
        hw,
        graded.system.level,
        layers_text(&g),
        g.group
    );
    text.push_str("depth  weight (λ0,..,λr)  mult  class\n");
    for r in &rows {
        let labels: Vec<String> = r.labels.iter().map(i64::to_string).collect();
        let _ = writeln!(
            text,
            "{:>5}  {:<18}  {:>4}  {}",
            r.depth,
            format!("({})", labels.join(",")),
            r.multiplicity,
            r.class.as_deref().unwrap_or("")
        );
    }
    let mut by_class: BTreeMap<String, u64> = BTreeMap::new();
    for (i, d) in dims.iter().enumerate() {
        by_class.insert(g.group.fmt_label(&g.group.label(i)), *d);
    }
    let dim_text: Vec<String> = by_class.iter().map(|(k, v)| format!("V{k}: {v}")).collect();
    let _ = writeln!(text, "dimensions to depth {depth}: {}", dim_text.join(", "));
    text.push_str("string families (top depth: multiplicities; members):\n");
    for f in &families {
        let members: Vec<String> = f
            .members
            .iter()
            .map(|m| {
                format!(
                    "({})",
                    m.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        let _ = writeln!(
            text,
            "  {}: {:?}; {}",
            f.top_depth,
            f.multiplicities,
            members.join(" ")
        );
    }
    let _ = writeln!(
        text,
        "module grading check: {} ({} checks)",
        if check.passed { "pass" } else { "FAIL" },
        check.checks
    );
    if let Some(w) = &check.witness {
        let _ = writeln!(text, "  witness: {w:?}");
    }
    Ok(Output {
        text,
        json: json!({
            "algebra": algebra_name(&affine),
            "highest": hw,
            "level": graded.system.level,
            "max_depth": depth,
            "group": g.group.to_string(),
            "layers": layers_json(&g),
            "rows": rows,
            "class_dimensions": by_class,
            "families": families,
            "verification": check,
        }),
        ok: check.passed,
    })
}
