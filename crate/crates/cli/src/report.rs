use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Map, Value};
use zeta_reciprocity::moments::{CorollaryReport, MomentReport};
use zeta_reciprocity::oracles::IntermediateLedger;

use crate::RunConfig;

pub const THEOREM_COLUMNS: &[&str] = &[
    "p",
    "q",
    "T",
    "lhs",
    "main",
    "dual",
    "dual_imag_residual",
    "residual",
    "bound_scale",
    "normalized_residual",
    "quadrature_error_estimate",
];

pub const COROLLARY_COLUMNS: &[&str] = &[
    "p",
    "q",
    "T",
    "d_pq",
    "d_qp",
    "difference",
    "imag_residual",
    "bound_scale",
    "normalized_difference",
    "quadrature_error_estimate",
];

pub const LEDGER_COLUMNS: &[&str] = &[
    "p",
    "q",
    "T",
    "f0_direct_re",
    "f0_direct_im",
    "pole_correction_re",
    "pole_correction_im",
    "f1_0",
    "f2_0_exact",
    "f2_0_cos_sum",
    "f3_0",
    "decomposition_residual",
    "approx_gap",
    "decomposition_budget",
];

const INVARIANT_COLUMNS: &[&str] = &["name", "value", "bound", "pass"];

/// Shortest decimal string that parses back to the same `f64`.
pub fn real(x: f64) -> String {
    format!("{x:?}")
}

pub fn theorem_row(r: &MomentReport) -> Vec<String> {
    let mut row = vec![r.p.to_string(), r.q.to_string()];
    row.extend(
        [
            r.big_t,
            r.lhs,
            r.main,
            r.dual,
            r.dual_imag_residual,
            r.residual,
            r.bound_scale,
            r.normalized_residual,
            r.quadrature_error_estimate,
        ]
        .map(real),
    );
    row
}

pub fn corollary_row(r: &CorollaryReport) -> Vec<String> {
    let mut row = vec![r.p.to_string(), r.q.to_string()];
    row.extend(
        [
            r.big_t,
            r.d_pq,
            r.d_qp,
            r.difference,
            r.imag_residual,
            r.bound_scale,
            r.normalized_difference,
            r.quadrature_error_estimate,
        ]
        .map(real),
    );
    row
}

pub fn ledger_row(l: &IntermediateLedger) -> Vec<String> {
    let mut row = vec![l.p.to_string(), l.q.to_string()];
    row.extend(
        [
            l.big_t,
            l.f0_direct_re,
            l.f0_direct_im,
            l.pole_correction_re,
            l.pole_correction_im,
            l.f1_0,
            l.f2_0_exact,
            l.f2_0_cos_sum,
            l.f3_0,
            l.decomposition_residual,
            l.approx_gap,
            l.decomposition_budget,
        ]
        .map(real),
    );
    row
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariant {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    config: Value,
    plan: Value,
    results: Vec<Value>,
    invariants: Vec<Invariant>,
    columns: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(config: &RunConfig) -> Report {
        Report {
            config: serde_json::to_value(config).expect("config serializes"),
            plan: serde_json::to_value(config.plan).expect("plan serializes"),
            results: Vec::new(),
            invariants: Vec::new(),
            columns: INVARIANT_COLUMNS,
            rows: Vec::new(),
        }
    }

    /// Records `value <= bound`; NaN fails.
    pub fn check(&mut self, name: impl Into<String>, value: f64, bound: f64) -> bool {
        let pass = value <= bound;
        self.invariants.push(Invariant {
            name: name.into(),
            value,
            bound,
            pass,
        });
        pass
    }

    pub fn add_result<T: Serialize>(&mut self, result: &T) {
        self.results.push(serde_json::to_value(result).expect("result serializes"));
    }

    pub fn set_rows(&mut self, rows: Vec<Vec<String>>, columns: &'static [&'static str]) {
        self.rows = rows;
        self.columns = columns;
    }

    pub fn results(&self) -> &[Value] {
        &self.results
    }

    pub fn invariants(&self) -> &[Invariant] {
        &self.invariants
    }

    pub fn failures(&self) -> Vec<&str> {
        self.invariants
            .iter()
            .filter(|i| !i.pass)
            .map(|i| i.name.as_str())
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.invariants.iter().all(|i| i.pass)
    }

    /// JSON with every float written as a round-trip string. Only the
    /// `metadata` object varies between identical runs.
    pub fn to_json(&self) -> String {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let doc = json!({
            "config": stringify(self.config.clone()),
            "plan": stringify(self.plan.clone()),
            "results": stringify(Value::Array(self.results.clone())),
            "invariants": stringify(serde_json::to_value(&self.invariants).expect("serializes")),
            "failures": self.failures(),
            "pass": self.passed(),
            "metadata": {
                "timestamp_unix": timestamp,
                "version": env!("CARGO_PKG_VERSION"),
            },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> std::io::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns)?;
        if self.rows.is_empty() {
            for i in &self.invariants {
                w.write_record([i.name.clone(), real(i.value), real(i.bound), i.pass.to_string()])?;
            }
        } else {
            for row in &self.rows {
                w.write_record(row)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn table(&self) -> String {
        let width = self.invariants.iter().map(|i| i.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for i in &self.invariants {
            out.push_str(&format!(
                "{} {:<width$}  {:>12.3e} <= {:.1e}\n",
                if i.pass { "PASS" } else { "FAIL" },
                i.name,
                i.value,
                i.bound,
            ));
        }
        let failed = self.failures().len();
        out.push_str(&format!("{} checks, {} failed\n", self.invariants.len(), failed));
        out
    }
}

/// Replaces every non-integer JSON number with its round-trip string.
fn stringify(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => Value::String(real(n.as_f64().expect("f64"))),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, stringify(v))).collect::<Map<_, _>>()),
        other => other,
    }
}
