//! Aligned plain-text rendering of a [`RunReport`].

use std::fmt::Write;

use serde_json::Value;

use crate::run::RunReport;

fn matrix<T: ToString>(out: &mut String, rows: &[Vec<T>], indent: &str) {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for row in &cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{indent}{}", line.join(" "));
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(report: &RunReport) -> String {
    let mut out = String::new();
    let spec = &report.spec;
    let mut params = Vec::new();
    let c = &spec.catalog;
    for (k, v) in [("n", c.n), ("k", c.k), ("r", c.r)] {
        if let Some(v) = v {
            params.push(format!("{k}={v}"));
        }
    }
    if let Some(w) = c.weight {
        params.push(format!("weight={w}"));
    }
    let _ = writeln!(out, "{:<12} {}", "catalog", [c.id.clone()].into_iter().chain(params).collect::<Vec<_>>().join(" "));
    let g = &report.group;
    let gens = if g.generators.is_empty() { "none".to_string() } else { g.generators.join(", ") };
    let _ = writeln!(out, "{:<12} order {}, generators {gens}", "group", g.order);
    let e = &report.extension;
    let _ = writeln!(
        out,
        "{:<12} d = {}, extension order {}, class order {}",
        "extension", e.d, e.order, e.class_order
    );
    if let Some(ch) = &report.character {
        let _ = writeln!(out, "{:<12} dim {}, values [{}]", "character", ch.dim, ch.values.join(", "));
    }

    let _ = writeln!(out, "\nobjects");
    let lw = report.collection.objects.iter().map(|o| o.label.chars().count()).max().unwrap_or(1);
    for o in &report.collection.objects {
        let pad = lw - o.label.chars().count();
        let weight = o.weight.map_or("-".to_string(), |w| w.to_string());
        let _ = write!(out, "  {:>3}  {}{}  block {:>2}  weight {:>3}", o.index, o.label, " ".repeat(pad), o.block, weight);
        if let Some(k) = &o.kclass {
            let _ = write!(out, "  ch = ({}, {}, {})", k.rank, k.c1, k.ch2);
        }
        out.push('\n');
    }
    if let Some(gram) = &report.gram {
        let _ = writeln!(out, "\ngram (Euler pairing)");
        matrix(&mut out, gram, "  ");
    }

    let a = &report.action;
    let yes = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(
        out,
        "\naction       homomorphism {}, block-invariant {}, orbit-stabilizer {}{}",
        yes(a.homomorphism),
        yes(a.block_invariant),
        yes(a.orbit_stabilizer),
        a.kclass_preserved.map_or(String::new(), |k| format!(", K-classes preserved {}", yes(k)))
    );
    for o in &a.orbits {
        let _ = writeln!(
            out,
            "  block {:>2}  orbit {{{}}}  representative {}  stabilizer order {}",
            o.block,
            o.members.join(", "),
            o.representative,
            o.stabilizer_order
        );
    }
    for issue in &a.issues {
        let _ = writeln!(out, "  issue: {issue}");
    }

    if let Some(eq) = &report.equivariant {
        let sizes: Vec<String> = eq.per_block.iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "\nequivariant  {}, total {}, per block ({})",
            eq.provenance,
            eq.total,
            sizes.join(", ")
        );
        let lw = eq.objects.iter().map(|o| o.label.chars().count()).max().unwrap_or(1);
        for o in &eq.objects {
            let pad = lw - o.label.chars().count();
            let _ = writeln!(
                out,
                "  {:>3}  {}{}  block {:>2}  dim {:>2}  weight {}",
                o.index,
                o.label,
                " ".repeat(pad),
                o.block,
                o.irrep_dim,
                o.weight
            );
        }
    }
    if let Some(grid) = &report.grid {
        for (r, layer) in grid.dims.iter().enumerate() {
            let _ = writeln!(out, "\nHom^{r}");
            let rows: Vec<Vec<String>> = layer.iter().map(|row| row.iter().map(cell).collect()).collect();
            matrix(&mut out, &rows, "  ");
        }
        let _ = writeln!(
            out,
            "  pattern violations {}, undetermined entries {}",
            grid.violations.len(),
            grid.unknown
        );
    }

    let v = &report.verdicts;
    let _ = writeln!(
        out,
        "\nverdicts     exceptional {}, action {}, grid {}",
        v.exceptional.as_str(),
        v.action.as_str(),
        v.grid.as_str()
    );
    let _ = writeln!(out, "result       {}", if report.passed { "PASS" } else { "FAIL" });
    let _ = writeln!(out, "time         {:.1} ms", report.timing.total_ms);
    out
}
