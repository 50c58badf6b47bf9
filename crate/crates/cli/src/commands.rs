use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use hyperturan::canon::DEFAULT_CANON_BOUND;
use hyperturan::constructs::{self, balanced_parts, ConstructionKind, ConstructionSpec, FillMode};
use hyperturan::embed::{count_embeddings, find_disjoint_copies, find_embedding};
use hyperturan::formulas::{self, e_turan, f_sim_formula, g_count, turan_plus_count};
use hyperturan::patterns::{k_tss, Pattern};
use hyperturan::solver::{self, ExtremalMode, SearchReport};
use hyperturan::stability::{self, Part};

use crate::exprs::{parse_host, parse_pattern};
use crate::{
    CliError, Command, ConstructArgs, ContainArgs, DesignArgs, EmbedArgs, ExArgs, ExbipArgs, FormulaArgs, Reply,
    StabilityArgs, EXIT_FAIL, EXIT_OK,
};

type CmdResult = Result<Reply, CliError>;

fn ok(json: Value, text: String) -> CmdResult {
    Ok(Reply {
        json,
        text,
        exit: EXIT_OK,
    })
}

fn need(v: Option<usize>, name: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{name}")))
}

pub(crate) fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Construct(a) => construct(a),
        Command::Formula(a) => formula(a),
        Command::Free(a) => free(a),
        Command::Embed(a) => embed(a),
        Command::Ex(a) => ex(a),
        Command::Exbip(a) => exbip(a),
        Command::Design(a) => design(a),
        Command::Saturate(a) => saturate(a),
        Command::Stability(a) => stability_cmd(a),
        Command::Verify(a) => crate::verify::command(a),
    }
}

fn params_json(p: &Pattern) -> Value {
    let mut m = Map::new();
    for (k, v) in p.params() {
        m.insert((*k).to_string(), json!(v));
    }
    Value::Object(m)
}

fn construct(a: &ConstructArgs) -> CmdResult {
    if a.kind == "pattern" {
        let spec = a
            .spec
            .as_deref()
            .ok_or_else(|| CliError::Usage("construct pattern needs a pattern expression".into()))?;
        let p = parse_pattern(spec)?;
        let h3 = p.graph().to_h3();
        let text = if a.describe {
            format!("# {}\n{h3}", p.describe())
        } else {
            h3.clone()
        };
        return ok(
            json!({
                "pattern": p.to_string(),
                "family": format!("{:?}", p.family()),
                "params": params_json(&p),
                "vertices": p.vertex_count(),
                "edges": p.edge_count(),
                "describe": p.describe(),
                "h3": h3,
            }),
            text,
        );
    }
    let kind = match a.kind.as_str() {
        "turan" => ConstructionKind::TuranPartite,
        "turan-plus" => ConstructionKind::TuranPlus,
        "g" => ConstructionKind::GConstruction,
        "fsim-extremal" => ConstructionKind::FsimExtremal,
        "ktss-free" => ConstructionKind::KtssFreeEmbedded,
        other => return Err(CliError::Usage(format!("unknown construction '{other}'"))),
    };
    let spec = ConstructionSpec {
        kind,
        n: need(a.n, "n")?,
        k: a.k,
        t: a.t,
        m: a.m,
        s: a.s,
    };
    let c = constructs::build(&spec, a.greedy)?;
    let formula_edges = predicted_edges(&spec, c.mode)?;
    ok(
        json!({
            "kind": a.kind,
            "header": c.header(),
            "mode": c.mode,
            "n": spec.n,
            "k": spec.k,
            "t": spec.t,
            "m": spec.m,
            "s": spec.s,
            "edges": c.graph.edge_count(),
            "formula_edges": formula_edges,
            "h3": c.graph.to_h3(),
        }),
        c.to_h3_with_header(),
    )
}

/// The closed-form (or solver-backed) edge count the construction should hit.
fn predicted_edges(spec: &ConstructionSpec, mode: FillMode) -> Result<Option<u64>, CliError> {
    let n = spec.n;
    let t = spec.t.unwrap_or(0);
    Ok(match spec.kind {
        ConstructionKind::TuranPartite => match spec.k.unwrap_or(3) {
            3 => Some(e_turan(n, 3)?),
            _ => None,
        },
        ConstructionKind::TuranPlus if mode == FillMode::Exact => Some(turan_plus_count(n, t)?),
        ConstructionKind::GConstruction => Some(g_count(t, spec.m.unwrap_or(0), n)?),
        ConstructionKind::FsimExtremal => Some(f_sim_formula(n, t)?.0),
        ConstructionKind::KtssFreeEmbedded if mode == FillMode::Exact => {
            let p = k_tss(t, spec.s.unwrap_or(0))?;
            let mut total = e_turan(n, 3)?;
            for size in balanced_parts(n, 3) {
                total += solver::solve_ex(size, &p)?.optimum;
            }
            Some(total)
        }
        _ => None,
    })
}

fn formula(a: &FormulaArgs) -> CmdResult {
    let name = a.name.as_str();
    let scalar = |value: u64| ok(json!({ "name": name, "value": value }), format!("{name} = {value}\n"));
    match name {
        "e-turan" => scalar(e_turan(need(a.n, "n")?, a.k.unwrap_or(3))?),
        "g-count" => scalar(g_count(need(a.t, "t")?, need(a.m, "m")?, need(a.n, "n")?)?),
        "turan-plus-count" => scalar(turan_plus_count(need(a.n, "n")?, need(a.t, "t")?)?),
        "f-sim" => {
            let (value, (x, y, z)) = f_sim_formula(need(a.n, "n")?, need(a.t, "t")?)?;
            ok(
                json!({ "name": name, "value": value, "parts": [x, y, z] }),
                format!("{name} = {value} at parts ({x},{y},{z})\n"),
            )
        }
        "f-sim-scan" => {
            // n - t ranges over 3..=max; report every n - t whose maximiser is unbalanced
            let t = need(a.t, "t")?;
            let mut unbalanced = Vec::new();
            for total in 3..=a.max {
                let (_, (x, _, z)) = f_sim_formula(total + t, t)?;
                if x - z > 1 {
                    unbalanced.push(total);
                }
            }
            let text = format!(
                "t = {t}, n - t in 3..={}: unbalanced maximisers at {unbalanced:?}\n",
                a.max
            );
            ok(
                json!({ "name": name, "t": t, "from": 3, "to": a.max, "unbalanced": unbalanced }),
                text,
            )
        }
        "f5sk-bounds" => {
            let r = formulas::f5sk_bounds(need(a.n, "n")?, need(a.t, "t")?, need(a.s, "s")?)?;
            let mut text = format!("n={} t={} s={}\nlower = {}\n", r.n, r.t, r.s, opt(r.lower));
            for (label, terms) in [("floor", &r.upper_terms), ("ceil", &r.upper_terms_ceil)] {
                let _ = writeln!(text, "upper terms ({label}(n/3)):");
                for term in terms.iter() {
                    let _ = writeln!(text, "  {:<28} {:>10}  {:?}", term.name, opt(term.value), term.status);
                }
            }
            let _ = writeln!(text, "note: {}", r.note);
            let mut v = serde_json::to_value(&r).expect("report serializes");
            v["name"] = json!(name);
            v["upper_available_sum"] = json!(r.upper_available_sum());
            ok(v, text)
        }
        other => Err(CliError::Usage(format!("unknown formula '{other}'"))),
    }
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "unavailable".to_string(), |x| x.to_string())
}

fn free(a: &ContainArgs) -> CmdResult {
    let host = parse_host(&a.host)?;
    let p = parse_pattern(&a.pattern)?;
    match find_embedding(&host, &p) {
        None => ok(
            json!({ "free": true, "pattern": p.to_string(), "witness": null, "map": null }),
            format!("free: host avoids {p}\n"),
        ),
        Some(e) => Ok(Reply {
            json: json!({ "free": false, "pattern": p.to_string(), "witness": e.to_map_text(), "map": e.map }),
            text: format!("contains {p}:\n{}", e.to_map_text()),
            exit: EXIT_FAIL,
        }),
    }
}

fn embed(a: &EmbedArgs) -> CmdResult {
    let host = parse_host(&a.host)?;
    let p = parse_pattern(&a.pattern)?;
    if let Some(k) = a.disjoint {
        let found = find_disjoint_copies(&host, &p, k, a.copy_cap)?;
        let copies: Vec<Vec<usize>> = found.iter().flatten().map(|e| e.map.clone()).collect();
        let mut text = match &found {
            Some(_) => format!("{k} disjoint copies of {p}:\n"),
            None => format!("no {k} disjoint copies of {p}\n"),
        };
        for c in &copies {
            let _ = writeln!(text, "  {c:?}");
        }
        return ok(
            json!({ "pattern": p.to_string(), "disjoint": k, "found": found.is_some(), "copies": copies }),
            text,
        );
    }
    if a.count {
        let count = count_embeddings(&host, &p, a.cap);
        let capped = a.cap != u64::MAX && count >= a.cap;
        let (auts, copies) = if p.vertex_count() <= DEFAULT_CANON_BOUND && !capped {
            let auts = count_embeddings(p.graph(), &p, u64::MAX);
            (Some(auts), Some(count / auts))
        } else {
            (None, None)
        };
        let text = format!(
            "{count} embeddings{}{}\n",
            if capped { " (capped)" } else { "" },
            copies.map_or(String::new(), |c| format!(
                ", {c} copies up to {} automorphisms",
                auts.unwrap()
            ))
        );
        return ok(
            json!({ "pattern": p.to_string(), "count": count, "capped": capped, "automorphisms": auts, "copies": copies }),
            text,
        );
    }
    let e = find_embedding(&host, &p);
    let text = match &e {
        Some(e) => e.to_map_text(),
        None => format!("no embedding of {p}\n"),
    };
    ok(
        json!({
            "pattern": p.to_string(),
            "found": e.is_some(),
            "map": e.as_ref().map(|e| e.map.clone()),
            "witness": e.as_ref().map(|e| e.to_map_text()),
        }),
        text,
    )
}

fn report_json(r: &SearchReport) -> Value {
    let mut v = json!({
        "optimum": r.optimum,
        "witness": r.witness.to_h3(),
        "nodes": r.nodes_explored,
        "millis": r.time.as_millis() as u64,
        "exact": r.exact,
    });
    if let Some(c) = r.num_extremal_classes {
        v["classes"] = json!(c);
    }
    v
}

fn report_text(what: &str, r: &SearchReport) -> String {
    let mut s = format!("{what} = {}\n", r.optimum);
    if let Some(c) = r.num_extremal_classes {
        let _ = writeln!(s, "extremal classes: {c}");
    }
    let _ = writeln!(s, "nodes: {}, time: {:?}", r.nodes_explored, r.time);
    s.push_str(&r.witness.to_h3());
    s
}

fn ex(a: &ExArgs) -> CmdResult {
    let p = parse_pattern(&a.pattern)?;
    let r = if a.enumerate {
        solver::enumerate_extremal(a.n, &ExtremalMode::TuranPattern(p.clone()))?
    } else {
        solver::solve_ex(a.n, &p)?
    };
    ok(report_json(&r), report_text(&format!("ex3({}, {p})", a.n), &r))
}

fn exbip(a: &ExbipArgs) -> CmdResult {
    let r = solver::solve_ex_bip(a.ma, a.nb, a.t, a.s)?;
    ok(
        report_json(&r),
        report_text(&format!("ex_bip({},{}, K_{{{},{},{}}})", a.ma, a.nb, a.t, a.s, a.s), &r),
    )
}

fn design(a: &DesignArgs) -> CmdResult {
    let r = if a.enumerate {
        solver::enumerate_extremal(a.n, &ExtremalMode::Design(a.t))?
    } else {
        solver::solve_max_design(a.n, a.t)?
    };
    ok(report_json(&r), report_text(&format!("D({},3,{},2)", a.n, a.t), &r))
}

fn saturate(a: &ContainArgs) -> CmdResult {
    let host = parse_host(&a.host)?;
    let p = parse_pattern(&a.pattern)?;
    let free = solver::saturation_check(&host, &p);
    let saturated = free.is_empty();
    let mut text = if saturated {
        format!("saturated: every non-edge creates {p}\n")
    } else {
        format!("{} non-edges keep the host {p}-free:\n", free.len())
    };
    for [x, y, z] in &free {
        let _ = writeln!(text, "{x} {y} {z}");
    }
    Ok(Reply {
        json: json!({
            "pattern": p.to_string(),
            "non_edges": host.non_edges().len(),
            "saturated": saturated,
            "free_non_edges": free,
        }),
        text,
        exit: if saturated { EXIT_OK } else { EXIT_FAIL },
    })
}

fn stability_cmd(a: &StabilityArgs) -> CmdResult {
    let host = parse_host(&a.host)?;
    let delta = match (a.delta, a.preset_t, a.preset_m) {
        (Some(d), _, _) => d,
        (None, Some(t), _) => stability::delta_preset_t(t),
        (None, None, Some(m)) => stability::delta_preset_m(m),
        (None, None, None) => 0.1,
    };
    let eps = if a.coupled {
        stability::eps_coupled(delta)
    } else {
        a.eps.unwrap_or(0.001)
    };
    let part = stability::best_tripartition(&host, a.restarts, a.seed)?;
    let report = stability::stability_report(&host, &part, delta, eps)?;
    let letters: String = part
        .assignment
        .iter()
        .map(|p| match p {
            Part::A => 'A',
            Part::B => 'B',
            Part::C => 'C',
        })
        .collect();
    let mut text = format!(
        "parts {:?}  good {}  missing {}  extra {}\nassignment {letters}\n",
        report.part_sizes, part.good, part.missing, part.extra
    );
    let _ = writeln!(
        text,
        "delta {delta}  eps {eps}\nA' {:?}  B' {:?}  C' {:?}\nimproper pairs {}\n|X| = {} vs 1.5 delta^2 n = {:.4}: {}",
        report.a_prime,
        report.b_prime,
        report.c_prime,
        report.improper_pairs,
        report.x_size,
        report.x_limit,
        if report.x_within_limit { "holds" } else { "fails" }
    );
    for w in &report.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    ok(
        json!({
            "assignment": letters,
            "part_sizes": report.part_sizes,
            "good": part.good,
            "missing": part.missing,
            "extra": part.extra,
            "restarts": a.restarts,
            "seed": a.seed,
            "delta": delta,
            "eps": eps,
            "report": report,
        }),
        text,
    )
}
