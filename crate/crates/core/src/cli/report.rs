use serde::Serialize;
use serde_json::Value;

use super::{EXIT_FAIL, EXIT_PASS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Skipped,
}

/// One grid point. `status` is `pass` exactly when `lhs == rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub command: String,
    pub params: Value,
    pub status: Status,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub certificate: Option<String>,
    pub elapsed_ms: u64,
    /// Skip reason or error text.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

pub(crate) fn to_json(reports: &[VerifyReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

pub(crate) fn to_text(reports: &[VerifyReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let params = match &r.params {
            Value::Object(map) => map
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" "),
            other => other.to_string(),
        };
        let status = serde_json::to_value(r.status).expect("status serializes");
        let mut line = format!(
            "{} {params} {}",
            r.command,
            status.as_str().unwrap_or_default()
        );
        if let (Some(l), Some(rh)) = (&r.lhs, &r.rhs) {
            line += &format!(" lhs={l} rhs={rh}");
        }
        if let Some(c) = &r.certificate {
            line += &format!(" certificate={c}");
        }
        if let Some(m) = &r.message {
            line += &format!(" ({m})");
        }
        line += &format!(" {}ms\n", r.elapsed_ms);
        out += &line;
    }
    out
}

/// 1 if any point failed or errored, else 0.
pub(crate) fn exit_code(reports: &[VerifyReport]) -> i32 {
    if reports
        .iter()
        .any(|r| matches!(r.status, Status::Fail | Status::Error))
    {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}
