//! Pattern and host expressions accepted on the command line.
//!
//! Patterns: `f5`, `f5-blow:i,t`, `f5s:m`, `f5sk:m,t,s`, `fsim:t`, `ktss:t,s`,
//! `sunflower:t`, `disjoint:k:<pattern>`, `blow:m1,..,mv:<pattern>`, or a path
//! to an H3 file.
//!
//! Hosts: an H3 file path or `@kind:params` with kind one of `turan:n[,k]`,
//! `turan-plus:n,t`, `turan-plus-cap:n,t,cap`, `g:t,m,n`, `fsim-extremal:n,t`,
//! `ktss-free:n,t,s`, `empty:n`, `complete:n`, `pattern:<pattern>`.

use std::fs;

use hyperturan::constructs::{
    f_sim_extremal, g_construction, ktss_free_embedded, turan_partite, turan_plus, turan_plus_capacity,
};
use hyperturan::patterns::{self, Pattern};
use hyperturan::Hypergraph3;

use crate::CliError;

fn numbers(s: &str, want: &[&str], what: &str) -> Result<Vec<usize>, CliError> {
    let vals: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("{what}: expected integers {}, got '{s}'", want.join(","))))?;
    if vals.len() != want.len() {
        return Err(CliError::Usage(format!(
            "{what}: expected {} parameters ({}), got {}",
            want.len(),
            want.join(","),
            vals.len()
        )));
    }
    Ok(vals)
}

pub fn read_h3(path: &str) -> Result<Hypergraph3, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    Ok(Hypergraph3::from_h3(&text)?)
}

pub fn parse_pattern(spec: &str) -> Result<Pattern, CliError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let p = match name {
        "f5" if rest.is_empty() => patterns::f5(),
        "f5-blow" => {
            let v = numbers(rest, &["i", "t"], name)?;
            patterns::f5_blow_vertex(v[0], v[1])?
        }
        "f5s" => patterns::f5_s(numbers(rest, &["m"], name)?[0])?,
        "f5sk" => {
            let v = numbers(rest, &["m", "t", "s"], name)?;
            patterns::f5_s_k(v[0], v[1], v[2])?
        }
        "fsim" => patterns::f_sim(numbers(rest, &["t"], name)?[0])?,
        "ktss" => {
            let v = numbers(rest, &["t", "s"], name)?;
            patterns::k_tss(v[0], v[1])?
        }
        "sunflower" => patterns::sunflower(numbers(rest, &["t"], name)?[0])?,
        "disjoint" => {
            let (k, inner) = rest
                .split_once(':')
                .ok_or_else(|| CliError::Usage("disjoint needs k:<pattern>".into()))?;
            let k = numbers(k, &["k"], name)?[0];
            patterns::disjoint_union(&parse_pattern(inner)?, k)?
        }
        "blow" => {
            let (mult, inner) = rest
                .split_once(':')
                .ok_or_else(|| CliError::Usage("blow needs m1,..,mv:<pattern>".into()))?;
            let mult: Vec<usize> = mult
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Usage(format!("blow: bad multiplicities '{mult}'")))?;
            patterns::blow_up(&parse_pattern(inner)?, &mult)?
        }
        _ if fs::metadata(spec).is_ok() => Pattern::custom(read_h3(spec)?)?,
        _ => return Err(CliError::Usage(format!("unknown pattern '{spec}'"))),
    };
    Ok(p)
}

pub fn parse_host(spec: &str) -> Result<Hypergraph3, CliError> {
    let Some(expr) = spec.strip_prefix('@') else {
        return read_h3(spec);
    };
    let (kind, rest) = expr.split_once(':').unwrap_or((expr, ""));
    let h = match kind {
        "turan" => {
            let v: Vec<usize> = if rest.contains(',') {
                numbers(rest, &["n", "k"], kind)?
            } else {
                vec![numbers(rest, &["n"], kind)?[0], 3]
            };
            turan_partite(v[0], v[1])?
        }
        "turan-plus" => {
            let v = numbers(rest, &["n", "t"], kind)?;
            turan_plus(v[0], v[1])?
        }
        "turan-plus-cap" => {
            let v = numbers(rest, &["n", "t", "cap"], kind)?;
            turan_plus_capacity(v[0], v[1], v[2], false)?.0
        }
        "g" => {
            let v = numbers(rest, &["t", "m", "n"], kind)?;
            g_construction(v[0], v[1], v[2])?
        }
        "fsim-extremal" => {
            let v = numbers(rest, &["n", "t"], kind)?;
            f_sim_extremal(v[0], v[1])?
        }
        "ktss-free" => {
            let v = numbers(rest, &["n", "t", "s"], kind)?;
            ktss_free_embedded(v[0], v[1], v[2])?
        }
        "empty" => Hypergraph3::empty(numbers(rest, &["n"], kind)?[0]),
        "complete" => Hypergraph3::complete(numbers(rest, &["n"], kind)?[0]),
        "pattern" => parse_pattern(rest)?.graph().clone(),
        _ => return Err(CliError::Usage(format!("unknown host expression '{spec}'"))),
    };
    Ok(h)
}
