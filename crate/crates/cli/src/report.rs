//! Versioned, human-diffable report documents and CSV row emission.
//!
//! Numeric fields print with full precision (`{:.17e}`) so that re-running an
//! identical configuration reproduces the text bit-for-bit; wall-clock timing
//! lives in its own trailing section to keep the numeric body comparable.

use gkp_core::bounds::BoundReport;
use gkp_core::protocols::ProtocolReport;
use std::fmt::Write as _;

pub struct Report {
    sections: Vec<(String, Vec<(String, String)>)>,
    bounds: Vec<BoundReport>,
    timing_ms: Option<u128>,
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.17e}")
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        "nan".to_string()
    }
}

impl Report {
    pub fn new() -> Report {
        Report { sections: Vec::new(), bounds: Vec::new(), timing_ms: None }
    }

    pub fn section(&mut self, name: &str) -> &mut Vec<(String, String)> {
        self.sections.push((name.to_string(), Vec::new()));
        &mut self.sections.last_mut().unwrap().1
    }

    pub fn kv(fields: &mut Vec<(String, String)>, key: &str, value: impl ToString) {
        fields.push((key.to_string(), value.to_string()));
    }

    pub fn kvf(fields: &mut Vec<(String, String)>, key: &str, value: f64) {
        fields.push((key.to_string(), fmt_f64(value)));
    }

    pub fn push_bound(&mut self, b: BoundReport) {
        self.bounds.push(b);
    }

    pub fn extend_bounds(&mut self, bs: impl IntoIterator<Item = BoundReport>) {
        self.bounds.extend(bs);
    }

    pub fn bounds(&self) -> &[BoundReport] {
        &self.bounds
    }

    pub fn any_violated(&self) -> bool {
        self.bounds.iter().any(|b| !b.is_ok())
    }

    pub fn set_timing(&mut self, ms: u128) {
        self.timing_ms = Some(ms);
    }

    pub fn protocol_section(&mut self, r: &ProtocolReport) {
        let f = self.section("protocol");
        if let Some(k) = r.kappa {
            Report::kvf(f, "kappa", k);
        }
        Report::kvf(f, "delta", r.delta);
        if let Some(n) = r.rounds {
            Report::kv(f, "rounds", n);
        }
        if let Some(l) = r.peaks {
            Report::kv(f, "peaks", l);
        }
        if let Some(p) = r.p_acc {
            Report::kvf(f, "p_acc", p);
        }
        Report::kvf(f, "fidelity", r.fidelity_to_target);
        Report::kvf(f, "trace_distance_upper", r.trace_distance_upper());
        Report::kvf(f, "trace_distance_lower", r.trace_distance_lower());
        if let Some(d) = r.delta_p {
            Report::kvf(f, "delta_p", d);
        }
        if let Some(d) = r.delta_q {
            Report::kvf(f, "delta_q", d);
        }
        if let Some(w) = r.qubit_plus_weight {
            Report::kvf(f, "qubit_plus_weight", w);
        }
        Report::kv(f, "op_preps", r.op_count.preps);
        Report::kv(f, "op_unitaries", r.op_count.unitaries);
        Report::kv(f, "op_measurements", r.op_count.measurements);
        Report::kv(f, "op_t2_budget", r.op_count.correction_budget);
        Report::kv(f, "op_total", r.op_count.total);
        if let Some(c) = r.correction_compiled_max {
            Report::kv(f, "correction_compiled_max", c);
        }
        Report::kv(f, "backend", r.backend);
    }

    pub fn render(&self) -> String {
        let mut out = String::from("gkpprep report v1\n");
        for (name, fields) in &self.sections {
            let _ = writeln!(out, "\n[{name}]");
            for (k, v) in fields {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        if !self.bounds.is_empty() {
            out.push_str("\n[bounds]\n");
            out.push_str("verdict | name | measured | rhs | params\n");
            for b in &self.bounds {
                let measured =
                    b.measured_lhs.map(fmt_f64).unwrap_or_else(|| "-".to_string());
                let _ = writeln!(
                    out,
                    "{} | {} | {} | {} | {}",
                    b.verdict,
                    b.name,
                    measured,
                    fmt_f64(b.paper_rhs),
                    b.parameters
                );
            }
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "\n[timing]\nruntime_ms = {ms}");
        }
        out
    }

    /// CSV rows for the bounds table: `suite,params,measured,paper_rhs,verdict`.
    pub fn bounds_csv(&self) -> String {
        let mut out = String::from("suite,params,measured,paper_rhs,verdict\n");
        for b in &self.bounds {
            let measured = b.measured_lhs.map(fmt_f64).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                b.name,
                b.parameters.replace(',', ";"),
                measured,
                fmt_f64(b.paper_rhs),
                b.verdict
            );
        }
        out
    }
}
