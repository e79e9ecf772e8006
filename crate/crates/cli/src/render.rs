//! Plain-text and TSV views of the JSON results.

use std::fmt::Write;

use hf_core::floer::FloerTable;
use hf_core::linalg::GroupPresentation;
use serde_json::Value;

use crate::Command;

fn group(v: &Value) -> String {
    GroupPresentation::from_json(v)
        .map(|g| g.to_string())
        .unwrap_or_else(|_| v.to_string())
}

fn table(v: &Value) -> (String, String) {
    match FloerTable::from_json(v) {
        Ok(t) => (t.to_text(), t.to_tsv()),
        Err(e) => (format!("malformed table: {e}\n"), String::new()),
    }
}

fn ranks(v: &Value) -> String {
    let parts: Vec<String> = v
        .as_array()
        .into_iter()
        .flatten()
        .map(|e| format!("{}:{}", e["deg"], e["rank"]))
        .collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(" ")
    }
}

fn items(v: &Value) -> impl Iterator<Item = &Value> {
    v.as_array().into_iter().flatten()
}

pub fn render(command: &Command, v: &Value) -> (String, String) {
    let mut text = String::new();
    let mut tsv = String::new();
    match command {
        Command::Hat | Command::Plus { .. } | Command::Infinity => return table(v),
        Command::Nontorsion => {
            let (t, s) = table(&v["table"]);
            text = t;
            tsv = s;
            let k = &v["kernels"];
            let _ = writeln!(
                text,
                "model X(g, {}): {}",
                v["model"]["d"],
                ranks(&v["model"]["ranks"])
            );
            let _ = writeln!(text, "kernel by rank:   {}", ranks(&k["direct"]));
            let _ = writeln!(text, "kernel by series: {}", ranks(&k["series"]));
            let _ = writeln!(text, "conjugate:        {}", ranks(&k["conjugate"]));
            let _ = writeln!(text, "agree: {}", k["agree"]);
        }
        Command::Action { .. } if v.get("pairs").is_some() => {
            let _ = writeln!(text, "pairs (γ, ξ): {}", v["pairs"]);
            tsv.push_str("ell\tcount\n");
            for e in items(&v["nonzero"]) {
                let _ = writeln!(text, "nonzero ρ_{}: {}", e["ell"], e["count"]);
                let _ = writeln!(tsv, "{}\t{}", e["ell"], e["count"]);
            }
            let _ = writeln!(
                text,
                "violations: {}",
                v["violations"].as_array().map_or(0, Vec::len)
            );
        }
        Command::Action { .. } => {
            tsv.push_str("gamma\tell\tdegree\tgrade\tu_exponent\tterms\n");
            for r in items(&v["results"]) {
                let _ = writeln!(text, "γ = e{}:", r["gamma"]);
                for c in items(&r["corrections"]) {
                    let loc = &c["location"];
                    let terms: usize = items(&c["value"])
                        .map(|col| col["form"].as_array().map_or(0, Vec::len))
                        .sum();
                    let _ = writeln!(
                        text,
                        "  ρ_{} in degree {} at Λ^{} ⊗ U^{} ({terms} terms)",
                        c["ell"], c["degree"], loc["grade"], loc["u_exponent"]
                    );
                    let _ = writeln!(
                        tsv,
                        "{}\t{}\t{}\t{}\t{}\t{terms}",
                        r["gamma"], c["ell"], c["degree"], loc["grade"], loc["u_exponent"]
                    );
                }
                for msg in items(&r["violations"]) {
                    let _ = writeln!(text, "  violation: {}", msg.as_str().unwrap_or_default());
                }
            }
        }
        Command::Eg => {
            tsv.push_str("degree\tgroup\n");
            let _ = writeln!(
                text,
                "H^*(E_{}) over {}",
                v["genus"],
                v["ring"].as_str().unwrap_or_default()
            );
            for e in items(&v["cohomology"]) {
                let _ = writeln!(text, "  H^{} = {}", e["deg"], group(&e["group"]));
                let _ = writeln!(tsv, "{}\t{}", e["deg"], group(&e["group"]));
            }
            for c in items(&v["cokernel_comparison"]) {
                let _ = writeln!(
                    text,
                    "parity {}: coker(ω∧) = {}, coker((1 − e^{{−ω}})∠) = {}, agree {}",
                    c["parity"],
                    group(&c["omega_wedge"]),
                    group(&c["exp_contract"]),
                    c["agree"]
                );
            }
        }
        Command::Beta => {
            tsv.push_str("s\tdim\n");
            for (s, d) in items(&v["quotient_dims"]).enumerate() {
                let _ = writeln!(tsv, "{s}\t{d}");
            }
            let _ = writeln!(text, "β∘β = 0: {}", v["composites_vanish"]);
            let _ = writeln!(text, "dim Ker β_s / Im β_(s+3): {}", v["quotient_dims"]);
            let _ = writeln!(text, "total: {}", v["total"]);
        }
        Command::Slice { .. } => {
            let _ = writeln!(
                text,
                "{} × {} matrix over {}, {} nonzero entries",
                v["rows"],
                v["cols"],
                v["ring"].as_str().unwrap_or_default(),
                v["entries"].as_array().map_or(0, Vec::len)
            );
            tsv.push_str("row\tcol\tvalue\n");
            for e in items(&v["entries"]) {
                let _ = writeln!(
                    tsv,
                    "{}\t{}\t{}",
                    e[0],
                    e[1],
                    e[2].as_str().unwrap_or_default()
                );
            }
        }
        Command::Snf { .. } => {
            let _ = writeln!(text, "{} × {}, rank {}", v["rows"], v["cols"], v["rank"]);
            let _ = writeln!(text, "cokernel: {}", group(&v["cokernel"]));
            tsv = format!(
                "rows\tcols\trank\tcokernel\n{}\t{}\t{}\t{}\n",
                v["rows"],
                v["cols"],
                v["rank"],
                group(&v["cokernel"])
            );
        }
        Command::Verify { .. } => {
            tsv.push_str("id\tpass\tprovenance\texpected\tcomputed\n");
            let mut passed = 0;
            let mut total = 0;
            for c in items(&v["checks"]) {
                total += 1;
                let ok = c["pass"] == Value::Bool(true);
                passed += usize::from(ok);
                let _ = writeln!(
                    text,
                    "{} {} {}",
                    if ok { "PASS" } else { "FAIL" },
                    c["id"].as_str().unwrap_or_default(),
                    c["params"]
                );
                if !ok {
                    let _ = writeln!(
                        text,
                        "     expected {}",
                        c["expected"].as_str().unwrap_or_default()
                    );
                    let _ = writeln!(
                        text,
                        "     computed {}",
                        c["computed"].as_str().unwrap_or_default()
                    );
                    if let Some(h) = c.get("matrix_hash").and_then(Value::as_str) {
                        let _ = writeln!(text, "     matrix {h}");
                    }
                }
                let _ = writeln!(
                    tsv,
                    "{}\t{}\t{}\t{}\t{}",
                    c["id"].as_str().unwrap_or_default(),
                    ok,
                    c["provenance"].as_str().unwrap_or_default(),
                    c["expected"].as_str().unwrap_or_default(),
                    c["computed"].as_str().unwrap_or_default()
                );
            }
            let _ = writeln!(
                text,
                "{passed}/{total} checks passed in {:.1} s",
                v["timing"]["wall_seconds"].as_f64().unwrap_or(0.0)
            );
        }
    }
    (text, tsv)
}
