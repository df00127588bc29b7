//! CSV outputs.
//!
//! Every file has a fixed header, even when it has no rows, LF line endings,
//! and numbers in the shortest form that parses back to the same `f64`.

use tsbandit::simulator::DiagnosticsSummary;
use tsbandit::RegretSummary;

pub const REGRET_HEADER: [&str; 7] = [
    "experiment_id",
    "policy",
    "T_checkpoint",
    "mean_regret",
    "stderr",
    "runs",
    "seed",
];
pub const BOUNDS_HEADER: [&str; 4] = ["bound_kind", "T", "value", "label"];
pub const VERIFY_HEADER: [&str; 4] = ["check_name", "status", "observed", "threshold"];
pub const DIAGNOSTICS_HEADER: [&str; 4] = ["experiment_id", "metric", "arm", "value"];

/// Shortest round-trip decimal; non-finite values print as `NaN`, `inf`, `-inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        // `{:?}` switches to exponent form for very large and very small
        // magnitudes, where `{}` would spell out hundreds of digits.
        format!("{x:?}")
    }
}

/// Standard error column: `NaN` when undefined (a single run).
pub fn fmt_stderr(se: Option<f64>) -> String {
    fmt_f64(se.unwrap_or(f64::NAN))
}

/// An in-memory CSV table.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header).expect("writing to memory");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("writing to memory");
    }

    pub fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("writing to memory");
        String::from_utf8(bytes).expect("all fields are UTF-8")
    }
}

/// Appends one row per checkpoint of `summary`.
pub fn regret_rows(table: &mut Table, experiment_id: &str, policy: &str, seed: u64, summary: &RegretSummary) {
    for c in &summary.checkpoints {
        table.row([
            experiment_id.to_string(),
            policy.to_string(),
            c.t.to_string(),
            fmt_f64(c.mean_regret),
            fmt_stderr(c.stderr),
            summary.runs.to_string(),
            seed.to_string(),
        ]);
    }
}

pub fn regret_csv(experiment_id: &str, policy: &str, seed: u64, summary: &RegretSummary) -> String {
    let mut table = Table::new(&REGRET_HEADER);
    regret_rows(&mut table, experiment_id, policy, seed, summary);
    table.finish()
}

/// Long-format diagnostics: one `(metric, arm, value)` per row; `arm` is empty
/// for run-level metrics.
pub fn diagnostics_csv(experiment_id: &str, d: &DiagnosticsSummary) -> String {
    let mut table = Table::new(&DIAGNOSTICS_HEADER);
    let mut put = |metric: &str, arm: Option<usize>, value: String| {
        table.row([
            experiment_id.to_string(),
            metric.to_string(),
            arm.map(|a| a.to_string()).unwrap_or_default(),
            value,
        ]);
    };
    put("runs", None, d.runs.to_string());
    put("horizon", None, d.horizon.to_string());
    for (arm, l) in d.saturation_threshold.iter().enumerate() {
        put(
            "saturation_threshold",
            Some(arm),
            l.map(|v| v.to_string()).unwrap_or_else(|| "NaN".into()),
        );
    }
    for (arm, n) in d.saturated_runs.iter().enumerate() {
        put("saturated_runs", Some(arm), n.to_string());
    }
    for (arm, t) in d.mean_saturation_time.iter().enumerate() {
        put("mean_saturation_time", Some(arm), fmt_f64(t.unwrap_or(f64::NAN)));
    }
    if let Some(v) = &d.e2_violations_per_step {
        put("e2_violation_total", None, v.iter().sum::<u64>().to_string());
        put(
            "e2_max_step_frequency",
            None,
            fmt_f64(d.max_e2_frequency().unwrap_or(f64::NAN)),
        );
    }
    if let Some(v) = &d.e_violations_per_step {
        put("e_violation_total", None, v.iter().sum::<u64>().to_string());
        put(
            "e_max_step_frequency",
            None,
            fmt_f64(d.max_e_frequency().unwrap_or(f64::NAN)),
        );
    }
    put(
        "mean_optimal_gap",
        None,
        fmt_f64(d.mean_optimal_gap.unwrap_or(f64::NAN)),
    );
    put("optimal_gap_count", None, d.optimal_gap_count.to_string());
    table.finish()
}
