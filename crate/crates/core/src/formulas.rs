//! Closed-form edge counts and bound evaluators.

use serde::Serialize;

use crate::constructs::balanced_parts;
use crate::error::{invalid, Error, Result};
use crate::hgraph::{binom2, binom3};
use crate::patterns::k_tss;
use crate::solver::{self, SolverLimits};

/// Edge count of T_3(n,3).
pub fn e_turan(n: usize, k: usize) -> Result<u64> {
    if k != 3 {
        return Err(invalid(format!("only k = 3 is supported, got {k}")));
    }
    Ok((n / 3 * ((n + 1) / 3) * n.div_ceil(3)) as u64)
}

/// `abc + t(C(a,2)+C(b,2)+C(c,2))` for one composition.
pub fn f_sim_value(t: usize, a: usize, b: usize, c: usize) -> u64 {
    (a * b * c + t * (binom2(a) + binom2(b) + binom2(c))) as u64
}

/// Maximum of `abc + t(C(a,2)+C(b,2)+C(c,2))` over positive compositions
/// `a+b+c = n-t`, plus `C(t,3)`.
///
/// Every composition is visited. The reported maximiser satisfies
/// `a >= b >= c`; among ties the one with the smallest `a` (then smallest
/// `b`) wins, i.e. the most balanced maximiser.
pub fn f_sim_formula(n: usize, t: usize) -> Result<(u64, (usize, usize, usize))> {
    if n < t + 3 {
        return Err(invalid(format!("needs n >= t + 3, got n={n}, t={t}")));
    }
    let total = n - t;
    let mut best: Option<(u64, (usize, usize, usize))> = None;
    for a in 1..=total - 2 {
        for b in 1..=total - 1 - a {
            let c = total - a - b;
            let v = f_sim_value(t, a, b, c);
            let mut key = [a, b, c];
            key.sort_unstable_by(|x, y| y.cmp(x));
            let cand = (v, (key[0], key[1], key[2]));
            best = match best {
                None => Some(cand),
                Some(cur) if v > cur.0 || (v == cur.0 && cand.1 < cur.1) => Some(cand),
                keep => keep,
            };
        }
    }
    let (v, parts) = best.expect("n - t >= 3 admits a composition");
    Ok((v + binom3(t) as u64, parts))
}

/// Edge count of G(t,m,n).
pub fn g_count(t: usize, m: usize, n: usize) -> Result<u64> {
    if m < 2 {
        return Err(invalid(format!("needs m >= 2, got {m}")));
    }
    if n < t + 6 {
        return Err(invalid(format!("needs n >= t + 6, got t={t}, n={n}")));
    }
    Ok(e_turan(n - t, 3)? + (binom3(n) - binom3(n - t)) as u64)
}

/// Edge count of T_3(n,3)^{t+} with exact packings in every part.
pub fn turan_plus_count(n: usize, t: usize) -> Result<u64> {
    if t < 2 {
        return Err(invalid(format!("needs t >= 2, got {t}")));
    }
    let limits = SolverLimits::default();
    let mut total = e_turan(n, 3)?;
    for s in balanced_parts(n, 3) {
        if s > limits.design_max_n {
            return Err(Error::BoundExceeded {
                what: "part size for an exact design",
                value: s,
                limit: limits.design_max_n,
            });
        }
        total += solver::solve_max_design(s, t)?.optimum;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermStatus {
    Exact,
    Solver,
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundTerm {
    pub name: String,
    pub value: Option<u64>,
    pub status: TermStatus,
}

impl BoundTerm {
    fn exact(name: &str, v: u64) -> Self {
        BoundTerm {
            name: name.into(),
            value: Some(v),
            status: TermStatus::Exact,
        }
    }

    fn solver(name: String, v: Option<u64>) -> Self {
        BoundTerm {
            name,
            status: if v.is_some() {
                TermStatus::Solver
            } else {
                TermStatus::Unavailable
            },
            value: v,
        }
    }
}

/// Term-by-term evaluation of the lower bound and the explicit upper-bound
/// terms for forbidding F5^S(m,t,K_{s,s}).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub t: usize,
    pub s: usize,
    /// `e(T_3(n,3)) + 3 ex_3(floor(n/3), K_{t,s,s})`; `None` when the solver term is out of bounds.
    pub lower: Option<u64>,
    /// Upper-bound terms evaluated at floor(n/3).
    pub upper_terms: Vec<BoundTerm>,
    /// The same terms evaluated at ceil(n/3).
    pub upper_terms_ceil: Vec<BoundTerm>,
    pub note: String,
}

impl BoundReport {
    /// Sum of the available terms of `upper_terms`.
    pub fn upper_available_sum(&self) -> u64 {
        self.upper_terms.iter().filter_map(|t| t.value).sum()
    }
}

pub fn f5sk_bounds(n: usize, t: usize, s: usize) -> Result<BoundReport> {
    f5sk_bounds_with(n, t, s, &SolverLimits::default())
}

pub fn f5sk_bounds_with(n: usize, t: usize, s: usize, limits: &SolverLimits) -> Result<BoundReport> {
    let pattern = k_tss(t, s)?;
    let et = e_turan(n, 3)?;
    let ex = |x: usize| -> Option<u64> { solver::solve_ex_with(x, &pattern, limits).ok().map(|r| r.optimum) };
    let bip = |x: usize| -> Option<u64> { solver::solve_ex_bip_with(x, x, t, s, limits).ok().map(|r| r.optimum) };
    let terms = |x: usize, tag: &str| {
        vec![
            BoundTerm::exact("e(T3(n,3))", et),
            BoundTerm::solver(format!("6*ex_bip({tag},{tag},K_tss)"), bip(x).map(|v| 6 * v)),
            BoundTerm::solver(format!("3*ex3({tag},K_tss)"), ex(x).map(|v| 3 * v)),
            BoundTerm {
                name: "o(n^(3-1/s^2))".into(),
                value: None,
                status: TermStatus::Unavailable,
            },
        ]
    };
    let lo = n / 3;
    let hi = n.div_ceil(3);
    let lower = ex(lo).map(|v| et + 3 * v);
    Ok(BoundReport {
        n,
        t,
        s,
        lower,
        upper_terms: terms(lo, "floor(n/3)"),
        upper_terms_ceil: terms(hi, "ceil(n/3)"),
        note: "asymptotic error term not evaluated; solver terms are exact small-n optima".into(),
    })
}
