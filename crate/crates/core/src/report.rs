//! Serializable reports. Rationals are written as exact strings.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::algebra::{Point, VarTable, Q};
use crate::error::Result;
use crate::markov::{ergodicity, to_f64, MarkovChainSpec, Prob};
use crate::mixing::MixingReport;
use crate::pipeline::{Mode, Options, PathCheck, StationaryResult, Verification};

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorSummary {
    pub label: String,
    pub variable: String,
    pub prob: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErgodicitySummary {
    pub irreducible: bool,
    pub closed_classes: usize,
    pub period: usize,
    pub ergodic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSizes {
    pub semigroup: usize,
    pub ideal: usize,
    pub kr: usize,
    pub mc: usize,
    pub first_hit: usize,
    pub terminals: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TerminalReport {
    pub word: String,
    pub element: String,
    /// General case: `[u]_S` for the terminal `u□`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// `None` when the rendering exceeds the size limit.
    pub kleene: Option<String>,
    pub kleene_size: u64,
    pub psi: String,
    /// `lim_{x_□→0}`, general case only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementReport {
    pub element: String,
    /// Image of the first state, where this element's mass is pushed.
    pub state: String,
    pub psi: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub point: BTreeMap<String, String>,
    pub symbolic: Vec<String>,
    pub oracle: Option<Vec<String>>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub normalization: bool,
    pub points: Vec<PointReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub point: BTreeMap<String, String>,
    pub per_element: Vec<String>,
    pub states: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub states: Vec<String>,
    pub generators: Vec<GeneratorSummary>,
    pub ergodicity: ErgodicitySummary,
    pub mode: String,
    pub ideal: Vec<String>,
    pub ideal_is_left_zero: bool,
    pub sizes: GraphSizes,
    pub constraint: String,
    pub eliminated: Option<String>,
    pub terminals: Vec<TerminalReport>,
    pub stationary: Vec<ElementReport>,
    pub residual: String,
    pub verification: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericReport>,
}

pub fn point_map(vars: &VarTable, values: &[Q]) -> BTreeMap<String, String> {
    values
        .iter()
        .enumerate()
        .map(|(v, x)| (vars.name(v), x.to_string()))
        .collect()
}

fn point_values(point: &Point, n: usize) -> Vec<Q> {
    (0..n).map(|v| point.get(&v).cloned().unwrap_or_default()).collect()
}

fn strings(values: &[Q]) -> Vec<String> {
    values.iter().map(Q::to_string).collect()
}

pub fn analysis_report(
    spec: &MarkovChainSpec,
    result: &StationaryResult,
    verification: &Verification,
    opts: &Options,
    eval: Option<&Point>,
) -> Result<AnalysisReport> {
    let vars = &result.vars;
    let n = result.generator_count();
    let labels: Vec<String> = (0..vars.len()).map(|v| vars.label(v).to_string()).collect();
    let generators = spec
        .active()
        .iter()
        .enumerate()
        .map(|(v, g)| GeneratorSummary {
            label: g.label.clone(),
            variable: vars.name(v),
            prob: match &g.prob {
                Prob::Numeric(p) => p.to_string(),
                Prob::Symbolic => "sym".into(),
            },
        })
        .collect();
    let erg = ergodicity(spec);
    let s = &result.semigroup;
    let fh = &result.first_hit;
    let terminals = fh
        .terminals
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let kleene = t.kleene.render(&labels, opts.max_render).ok();
            let group = match result.mode {
                Mode::LeftZero => None,
                Mode::General => Some(s.name(s.eval_word(&t.word[..t.word.len() - 1])).to_string()),
            };
            TerminalReport {
                word: t.name.clone(),
                element: result.expansion.semigroup.name(t.element).to_string(),
                group,
                kleene,
                kleene_size: t.kleene.tree_size(),
                psi: t.psi.render(vars),
                limit: result.limits.get(i).map(|l| l.render(vars)),
            }
        })
        .collect();
    let stationary = result
        .per_element
        .iter()
        .map(|e| {
            let state = s
                .transformation(e.element)
                .map(|t| spec.states[t.apply(0)].clone())
                .unwrap_or_default();
            ElementReport {
                element: e.name.clone(),
                state,
                psi: e.psi.render(vars),
            }
        })
        .collect();
    let sum = (0..n).map(|v| vars.name(v)).collect::<Vec<_>>().join(" + ");
    let constraint = format!("{sum} = 1");
    let points = verification
        .checks
        .iter()
        .map(|c| PointReport {
            point: point_map(vars, &c.point),
            symbolic: strings(&c.symbolic),
            oracle: c.oracle.as_deref().map(strings),
            passed: c.passed,
            detail: c.detail.clone(),
        })
        .collect();
    let numeric = match eval {
        Some(p) => Some(NumericReport {
            point: point_map(vars, &point_values(p, n)),
            per_element: strings(&result.element_values(p)?),
            states: strings(&result.state_values(p)?),
        }),
        None => None,
    };
    Ok(AnalysisReport {
        states: spec.states.clone(),
        generators,
        ergodicity: ErgodicitySummary {
            irreducible: erg.irreducible,
            closed_classes: erg.closed_classes,
            period: erg.period,
            ergodic: erg.is_ergodic_on_closed_class(),
        },
        mode: match result.mode {
            Mode::LeftZero => "left_zero",
            Mode::General => "general",
        }
        .into(),
        ideal: result.ideal.iter().map(|&w| s.name(w).to_string()).collect(),
        ideal_is_left_zero: result.is_left_zero,
        sizes: GraphSizes {
            semigroup: result.expansion.semigroup.len(),
            ideal: result.ideal.len(),
            kr: result.expansion.kr.vertex_count(),
            mc: result.expansion.mc.vertex_count(),
            first_hit: fh.graph.vertex_count(),
            terminals: fh.terminals.len(),
        },
        constraint,
        eliminated: result.elim.map(|v| vars.name(v)),
        terminals,
        stationary,
        residual: result.residual.render(vars),
        verification: VerificationReport {
            passed: verification.passed(),
            normalization: verification.normalization,
            points,
        },
        numeric,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PathCheckReport {
    pub word: String,
    pub maxlen: usize,
    pub counts: Vec<String>,
    pub kleene_matches_loop_graph: bool,
    pub loop_graph_matches_expansion: bool,
    pub series_matches: bool,
}

impl From<&PathCheck> for PathCheckReport {
    fn from(c: &PathCheck) -> Self {
        PathCheckReport {
            word: c.name.clone(),
            maxlen: c.maxlen,
            counts: c.counts.iter().map(u128::to_string).collect(),
            kleene_matches_loop_graph: c.kleene_matches_loop_graph,
            loop_graph_matches_expansion: c.loop_graph_matches_expansion,
            series_matches: c.series_matches,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub oracle: VerificationReport,
    pub paths: Vec<PathCheckReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TailRow {
    pub t: usize,
    /// `Pr(τ ≥ t)`.
    pub tail: String,
    pub tail_f64: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TvRowReport {
    pub t: usize,
    pub tv: String,
    /// `Pr(τ > t)`.
    pub bound: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionalReport {
    pub element: String,
    pub expected_tau: String,
    pub value: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReportJson {
    pub point: BTreeMap<String, String>,
    pub tail: Vec<TailRow>,
    pub expected_tau: String,
    pub expected_tau_value: String,
    pub conditional: Vec<ConditionalReport>,
    pub epsilon: String,
    pub tmix_bound: u64,
    /// Present when `K(S)` is left zero.
    pub asst: Option<Vec<TvRowReport>>,
}

pub fn mixing_json(m: &MixingReport, vars: &VarTable, point: &Point, n: usize) -> MixingReportJson {
    MixingReportJson {
        point: point_map(vars, &point_values(point, n)),
        tail: m
            .tail
            .iter()
            .enumerate()
            .map(|(t, x)| TailRow {
                t,
                tail: x.to_string(),
                tail_f64: to_f64(x),
            })
            .collect(),
        expected_tau: m.expected_tau.render(vars),
        expected_tau_value: m.expected_value.to_string(),
        conditional: m
            .per_element
            .iter()
            .map(|c| ConditionalReport {
                element: c.name.clone(),
                expected_tau: c.expected.render(vars),
                value: c.value.as_ref().map(Q::to_string),
            })
            .collect(),
        epsilon: m.epsilon.to_string(),
        tmix_bound: m.tmix_bound,
        asst: m.tv_rows.as_ref().map(|rows| {
            rows.iter()
                .map(|r| TvRowReport {
                    t: r.t,
                    tv: r.tv.to_string(),
                    bound: r.tail.to_string(),
                    holds: r.holds,
                })
                .collect()
        }),
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(String::as_str).collect(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

/// Aligned-column rendering of a mixing report.
pub fn mixing_text(m: &MixingReportJson) -> String {
    let mut out = String::new();
    let point: Vec<String> = m.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(out, "point: {}", point.join(", "));
    let rows: Vec<Vec<String>> = m
        .tail
        .iter()
        .map(|r| vec![r.t.to_string(), r.tail.clone(), format!("{:.6}", r.tail_f64)])
        .collect();
    out.push_str(&table(&["t", "Pr(tau>=t)", "float"], &rows));
    let _ = writeln!(out, "E[tau] = {} = {}", m.expected_tau, m.expected_tau_value);
    for c in &m.conditional {
        match &c.value {
            Some(v) => {
                let _ = writeln!(out, "E[tau | hit {}] = {v}", c.element);
            }
            None => {
                let _ = writeln!(out, "E[tau | hit {}]: never hit first", c.element);
            }
        }
    }
    let _ = writeln!(out, "t_mix ≤ {} (epsilon = {})", m.tmix_bound, m.epsilon);
    match &m.asst {
        Some(rows) => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.t.to_string(), r.tv.clone(), r.bound.clone(), r.holds.to_string()])
                .collect();
            out.push_str(&table(&["t", "TV", "Pr(tau>t)", "holds"], &rows));
        }
        None => {
            let _ = writeln!(out, "K(S) is not left zero; TV bound table skipped");
        }
    }
    out
}
