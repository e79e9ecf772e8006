use std::collections::BTreeMap;
use std::fmt;

use hf_core::cfk::{slice_map, GradedElement, SliceOp};
use hf_core::floer::{
    action_sweep, cokernel_comparison, compare_kernels, eg_cohomology, h1_action, hf_hat,
    hf_infinity, hf_plus_nontorsion, hf_plus_reduced, hf_plus_torsion, triple_cup_report,
    ActionResult, DegreeWindow,
};
use hf_core::linalg::{cokernel, rank, SparseMatrix};
use hf_core::verify::{verify, Suite};
use hf_core::{HfError, Integer, Multivector, Ring};
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::render;
use crate::{Command, Shared};

/// Largest genus run without `--extended`.
pub const DESK_GENUS: usize = 6;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Extended(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Extended(m) => write!(f, "extended-scale required: {m}"),
        }
    }
}

impl From<HfError> for CliError {
    fn from(e: HfError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub tsv: String,
    /// A verification check failed.
    pub failed: bool,
}

type Res<T> = Result<T, CliError>;

fn genus(shared: &Shared) -> Res<usize> {
    let g = shared
        .genus
        .ok_or_else(|| CliError::Usage("--genus is required".into()))?;
    check_scale(g, shared.extended)?;
    Ok(g)
}

fn check_scale(g: usize, extended: bool) -> Res<()> {
    if g > DESK_GENUS && !extended {
        return Err(CliError::Extended(format!(
            "genus {g} is above {DESK_GENUS}; pass --extended"
        )));
    }
    Ok(())
}

fn ring(shared: &Shared) -> Res<Ring> {
    Ok(shared.ring.parse()?)
}

fn window(shared: &Shared, g: usize) -> Res<DegreeWindow> {
    let Some(text) = &shared.degrees else {
        return Ok(DegreeWindow::default_for(g));
    };
    let bad = || CliError::Usage(format!("--degrees expects MIN..MAX, got '{text}'"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok(DegreeWindow::new(lo, hi)?)
}

fn nonzero_spinc(shared: &Shared) -> Res<i64> {
    match shared.spinc {
        0 => Err(CliError::Usage(
            "this command needs --spinc k with k ≠ 0".into(),
        )),
        k => Ok(k),
    }
}

pub fn run(command: &Command, shared: &Shared) -> Res<Outcome> {
    let json = match command {
        Command::Snf { input } => snf(input)?,
        Command::Verify { suite, max_genus } => {
            let suite: Suite = suite.parse()?;
            check_scale(*max_genus, shared.extended)?;
            verify(suite, *max_genus, shared.extended)?.to_json()
        }
        _ => cached(command, shared)?,
    };
    let (text, tsv) = render::render(command, &json);
    let failed = matches!(command, Command::Verify { .. }) && json["pass"] != json!(true);
    Ok(Outcome {
        json,
        text,
        tsv,
        failed,
    })
}

/// The commands whose output depends only on the flags.
fn cached(command: &Command, shared: &Shared) -> Res<Value> {
    let g = genus(shared)?;
    let ring = ring(shared)?;
    let window = window(shared, g)?;
    let request = json!({
        "command": format!("{command:?}"),
        "genus": g,
        "spinc": shared.spinc,
        "ring": ring.to_string(),
        "degrees": [window.lo, window.hi],
    });
    let cache = Cache::from_env();
    let key = Cache::key(&request);
    if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
        return Ok(hit);
    }
    let value = compute(command, shared, g, ring, window)?;
    if let Some(c) = &cache {
        if let Err(e) = c.put(&key, &value) {
            eprintln!("hf: cache write failed: {e}");
        }
    }
    Ok(value)
}

fn compute(
    command: &Command,
    shared: &Shared,
    g: usize,
    ring: Ring,
    window: DegreeWindow,
) -> Res<Value> {
    let k = shared.spinc;
    Ok(match command {
        Command::Hat => {
            if k != 0 {
                return Err(CliError::Usage(
                    "hat is computed in the torsion structure only (k = 0)".into(),
                ));
            }
            hf_hat(g, ring)?.to_json()
        }
        Command::Plus { reduced } => match (k, reduced) {
            (0, false) => hf_plus_torsion(g, ring, window)?.to_json(),
            (0, true) => hf_plus_reduced(g, ring, window)?.to_json(),
            (_, false) => hf_plus_nontorsion(g, k, window)?.0.to_json(),
            (_, true) => return Err(CliError::Usage("--reduced applies to k = 0".into())),
        },
        Command::Infinity => {
            if k != 0 {
                return Err(CliError::Usage(
                    "HF^∞ is computed in the torsion structure only (k = 0)".into(),
                ));
            }
            hf_infinity(g, ring, window)?.to_json()
        }
        Command::Nontorsion => nontorsion(g, nonzero_spinc(shared)?, window)?,
        Command::Action { gamma, xi, u_power } => {
            action(g, nonzero_spinc(shared)?, *gamma, xi.as_deref(), *u_power)?
        }
        Command::Eg => eg(g, ring)?,
        Command::Beta => {
            let r = triple_cup_report(g)?;
            json!({
                "genus": g,
                "composites_vanish": r.composites_vanish,
                "quotient_dims": r.quotient_dims,
                "total": r.total(),
            })
        }
        Command::Slice { op, degree } => {
            let op = SliceOp::parse(op, k)?;
            slice_map(g, op, *degree, ring)?.matrix.to_json()
        }
        Command::Snf { .. } | Command::Verify { .. } => unreachable!("not cached"),
    })
}

fn ranks_json(m: &BTreeMap<i64, usize>) -> Value {
    Value::Array(
        m.iter()
            .map(|(d, r)| json!({"deg": d, "rank": r}))
            .collect(),
    )
}

fn nontorsion(g: usize, k: i64, window: DegreeWindow) -> Res<Value> {
    let (table, model) = hf_plus_nontorsion(g, k, window)?;
    let cmp = compare_kernels(g, k)?;
    Ok(json!({
        "table": table.to_json(),
        "model": {"genus": model.genus, "d": model.d, "ranks": ranks_json(&model.ranks())},
        "kernels": {
            "direct": ranks_json(&cmp.direct),
            "series": ranks_json(&cmp.series),
            "conjugate": ranks_json(&cmp.conjugate),
            "series_in_kernel": cmp.series_in_kernel,
            "agree": cmp.direct == cmp.series && cmp.direct == cmp.conjugate,
        },
    }))
}

fn graded_json(x: &GradedElement<Integer>) -> Value {
    let columns: std::collections::BTreeSet<i64> = x.terms().map(|(i, _, _)| i).collect();
    Value::Array(
        columns
            .into_iter()
            .map(|i| json!({"u_power": i, "form": x.part_at(i).to_json()}))
            .collect(),
    )
}

fn action_json(gamma: usize, r: &ActionResult) -> Value {
    json!({
        "gamma": gamma,
        "standard": graded_json(&r.standard),
        "corrections": r.corrections.iter().map(|c| json!({
            "ell": c.ell,
            "degree": c.degree,
            "location": c.location().map(|(grade, u)| json!({"grade": grade, "u_exponent": u})),
            "value": graded_json(&c.value),
        })).collect::<Vec<_>>(),
        "violations": r.violations,
    })
}

fn action(g: usize, k: i64, gamma: Option<usize>, xi: Option<&str>, u_power: i64) -> Res<Value> {
    let gammas: Vec<usize> = match gamma {
        Some(c) if c == 0 || c > 2 * g => {
            return Err(CliError::Usage(format!(
                "--gamma must lie in 1..={}",
                2 * g
            )))
        }
        Some(c) => vec![c],
        None => (1..=2 * g).collect(),
    };
    let Some(xi) = xi else {
        if gamma.is_some() {
            return Err(CliError::Usage(
                "--gamma needs --xi; a sweep covers every γ".into(),
            ));
        }
        let s = action_sweep(g, k)?;
        return Ok(json!({
            "genus": g,
            "spinc": k,
            "pairs": s.pairs,
            "nonzero": s.nonzero.iter().map(|(l, n)| json!({"ell": l, "count": n})).collect::<Vec<_>>(),
            "violations": s.violations,
        }));
    };
    let parsed: Value =
        serde_json::from_str(xi).map_err(|e| CliError::Usage(format!("--xi: {e}")))?;
    let form = Multivector::<Integer>::from_json(g, &parsed)?;
    let element = GradedElement::at(u_power, &form);
    let results = gammas
        .iter()
        .map(|&c| h1_action(g, k, c, &element).map(|r| action_json(c, &r)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "genus": g,
        "spinc": k,
        "xi": graded_json(&element),
        "results": results,
    }))
}

fn eg(g: usize, ring: Ring) -> Res<Value> {
    let h = eg_cohomology(g, ring)?;
    let cmp = cokernel_comparison(g)?;
    Ok(json!({
        "genus": g,
        "ring": ring.to_string(),
        "cohomology": h.groups.iter().enumerate().map(|(j, gp)| json!({"deg": j, "group": gp.to_json()})).collect::<Vec<_>>(),
        "dims": h.dims(),
        "cokernel_comparison": cmp.iter().map(|c| json!({
            "parity": c.parity,
            "omega_wedge": c.omega_wedge.to_json(),
            "exp_contract": c.exp_contract.to_json(),
            "agree": c.agrees(),
        })).collect::<Vec<_>>(),
    }))
}

fn snf(input: &std::path::Path) -> Res<Value> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", input.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
    let m = SparseMatrix::from_json(&v)?;
    Ok(json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "ring": m.to_json()["ring"],
        "rank": rank(&m)?,
        "cokernel": cokernel(&m)?.to_json(),
        "sha256": m.sha256(),
    }))
}
