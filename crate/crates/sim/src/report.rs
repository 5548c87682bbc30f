//! Result rows and their CSV, JSON and table renderings.
//!
//! Column sets are fixed:
//!
//! * compare/run CSV: `config_id,protocol,V,PR,A,ADV,c_spec,c_any,std,min,max`
//! * plot CSV: `series,protocol,A,ADV,c_spec,c_any`
//! * sweep CSV: `config_id,protocol,alpha,beta,c_spec,c_any,std,min,max`

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Protocol};
use crate::experiment::{run_experiment, ExperimentResult};
use crate::SimError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub config_id: String,
    pub protocol: Protocol,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "PR")]
    pub pr: usize,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "ADV")]
    pub adv: f64,
    pub c_spec: f64,
    pub c_any: f64,
    pub std: f64,
    pub min: usize,
    pub max: usize,
}

impl From<&ExperimentResult> for ResultRow {
    fn from(r: &ExperimentResult) -> Self {
        let c = &r.config;
        Self {
            config_id: c.id.clone(),
            protocol: c.protocol,
            v: c.n_users,
            pr: c.n_propositions,
            a: c.accuracy,
            adv: c.adversarial_pct,
            c_spec: r.metrics.c_spec,
            c_any: r.metrics.c_any,
            std: r.metrics.std,
            min: r.metrics.min,
            max: r.metrics.max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub series: String,
    pub protocol: Protocol,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "ADV")]
    pub adv: f64,
    pub c_spec: f64,
    pub c_any: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub config_id: String,
    pub protocol: Protocol,
    pub alpha: f64,
    pub beta: f64,
    pub c_spec: f64,
    pub c_any: f64,
    pub std: f64,
    pub min: usize,
    pub max: usize,
}

/// Runs each config under both protocols, deepthought first.
pub fn compare(configs: &[ExperimentConfig], jobs: Option<usize>) -> Result<Vec<ResultRow>, SimError> {
    let mut rows = Vec::with_capacity(2 * configs.len());
    for c in configs {
        for protocol in [Protocol::Deepthought, Protocol::Astraea] {
            rows.push(ResultRow::from(&run_experiment(&c.clone().with_protocol(protocol), jobs)?));
        }
    }
    Ok(rows)
}

/// One series per (protocol, accuracy), points ordered by ADV.
pub fn plot_rows(rows: &[ResultRow]) -> Vec<PlotRow> {
    let mut out: Vec<PlotRow> = rows
        .iter()
        .map(|r| PlotRow {
            series: format!("{}-A{}", r.protocol, r.a),
            protocol: r.protocol,
            a: r.a,
            adv: r.adv,
            c_spec: r.c_spec,
            c_any: r.c_any,
        })
        .collect();
    out.sort_by(|x, y| {
        (x.protocol.label(), x.a, x.adv)
            .partial_cmp(&(y.protocol.label(), y.a, y.adv))
            .expect("percentages are finite")
    });
    out
}

/// Re-runs `config` for every (alpha, beta) pair on the grid.
pub fn sweep(config: &ExperimentConfig, alphas: &[f64], betas: &[f64], jobs: Option<usize>) -> Result<Vec<SweepRow>, SimError> {
    let mut rows = Vec::with_capacity(alphas.len() * betas.len());
    for &alpha in alphas {
        for &beta in betas {
            let mut c = config.clone();
            c.protocol_params.alpha = alpha;
            c.protocol_params.beta = beta;
            let m = run_experiment(&c, jobs)?.metrics;
            rows.push(SweepRow {
                config_id: c.id.clone(),
                protocol: c.protocol,
                alpha,
                beta,
                c_spec: m.c_spec,
                c_any: m.c_any,
                std: m.std,
                min: m.min,
                max: m.max,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<(), SimError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| SimError::Io {
        path: "<csv>".into(),
        source,
    })
}

pub fn csv_string<T: Serialize>(rows: &[T]) -> Result<String, SimError> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn json_string<T: Serialize>(rows: &[T]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows always serialize");
    s.push('\n');
    s
}

/// Fixed-width table with result columns in the order
/// `# V PR A ADV Approach C-SPEC C-ANY STD MIN MAX`.
pub fn render_table(rows: &[ResultRow]) -> String {
    let mut s = format!(
        "{:<6} {:>4} {:>5} {:>6} {:>6}  {:<12} {:>7} {:>7} {:>7} {:>4} {:>4}\n",
        "#", "V", "PR", "A", "ADV", "Approach", "C-SPEC", "C-ANY", "STD", "MIN", "MAX"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<6} {:>4} {:>5} {:>6} {:>6}  {:<12} {:>7.2} {:>7.2} {:>7.2} {:>4} {:>4}",
            r.config_id, r.v, r.pr, r.a, r.adv, r.protocol.label(), r.c_spec, r.c_any, r.std, r.min, r.max
        );
    }
    s
}
