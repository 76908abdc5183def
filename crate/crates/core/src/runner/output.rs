//! CSV and JSON rendering of run results.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::{check_row_identities, Column, Format, Row, RunError, RunOutput, SweepResult};

pub fn values(row: &Row, col: Column) -> Vec<f64> {
    let r = &row.record;
    match col {
        Column::F => vec![r.fidelity],
        Column::Alpha => vec![r.alpha],
        Column::Q => vec![r.discord],
        Column::CC => vec![r.classical],
        Column::REE => vec![r.ree],
        Column::Concurrence => vec![r.concurrence],
        Column::MI => vec![r.mutual_information],
        Column::Lambdas => r.lambdas.to_vec(),
    }
}

pub fn header_line(cols: &[Column]) -> String {
    std::iter::once("n")
        .chain(cols.iter().flat_map(|c| c.headers().iter().copied()))
        .collect::<Vec<_>>()
        .join(",")
}

/// `# key: value` lines preceding the CSV body.
pub fn metadata_lines(out: &RunOutput) -> Vec<String> {
    let mut lines = vec![
        format!("# qkt-discord {}", env!("CARGO_PKG_VERSION")),
        format!("# config: {}", out.config.to_json()),
    ];
    if let Some(seed) = out.config.seed() {
        lines.push(format!("# seed: {seed}"));
    }
    lines.extend(out.notes.iter().map(|n| format!("# {n}")));
    lines
}

/// Header and data rows only; metadata is excluded so bodies can be compared.
pub fn csv_body(out: &RunOutput) -> String {
    let cols = out.config.columns();
    let mut s = header_line(&cols);
    s.push('\n');
    for row in &out.rows {
        write!(s, "{}", row.n).unwrap();
        for col in &cols {
            for v in values(row, *col) {
                write!(s, ",{v:.14e}").unwrap();
            }
        }
        s.push('\n');
    }
    s
}

pub fn to_csv(out: &RunOutput) -> String {
    let mut s = metadata_lines(out).join("\n");
    s.push('\n');
    s.push_str(&csv_body(out));
    s
}

pub fn to_json(out: &RunOutput) -> String {
    let cols = out.config.columns();
    let rows: Vec<Value> = out
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            obj.insert("n".into(), json!(row.n));
            for col in &cols {
                for (name, v) in col.headers().iter().zip(values(row, *col)) {
                    obj.insert((*name).into(), json!(v));
                }
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": out.config,
        "seed": out.config.seed(),
        "notes": out.notes,
        "rows": rows,
    });
    serde_json::to_string_pretty(&doc).expect("rows serialize")
}

/// Renders in the configured format after re-checking `CC = MI − Q`.
pub fn render(out: &RunOutput) -> Result<String, RunError> {
    check_row_identities(&out.rows)?;
    Ok(match out.config.format {
        Format::Csv => to_csv(out),
        Format::Json => to_json(out),
    })
}

/// Writes to the configured path, or returns the text for stdout.
pub fn emit(out: &RunOutput) -> Result<Option<String>, RunError> {
    let text = render(out)?;
    match &out.config.output {
        Some(path) => super::write_atomic(path, &text).map(|_| None),
        None => Ok(Some(text)),
    }
}

pub fn sweep_summary_csv(res: &SweepResult) -> String {
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.14e}")).unwrap_or_default();
    let mut s = format!(
        "{},final_mean_F,revival_period,k_estimate,sudden_change_time,oracle_max_discrepancy\n",
        res.axis
    );
    for r in &res.summary {
        writeln!(
            s,
            "{:.14e},{:.14e},{},{},{},{}",
            r.value,
            r.final_mean_fidelity,
            opt(r.revival_period),
            opt(r.k_estimate),
            opt(r.sudden_change_time),
            opt(r.oracle_max_discrepancy)
        )
        .unwrap();
    }
    s
}

pub fn sweep_summary_json(res: &SweepResult) -> String {
    serde_json::to_string_pretty(&json!({ "axis": res.axis, "runs": res.summary }))
        .expect("summary serializes")
}
