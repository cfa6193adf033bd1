use serde_json::Value;

/// Result of one job. Code 0 is success, 1 a refusal or failed check.
pub struct Outcome {
    pub code: u8,
    pub report: Value,
    /// Text-mode output replacing the rendered report (generated files).
    pub raw: Option<String>,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Outcome { code: 0, report, raw: None }
    }

    pub fn check(passed: bool, report: Value) -> Self {
        Outcome { code: if passed { 0 } else { 1 }, report, raw: None }
    }
}

/// One `key: value` line per field; nested values are printed as compact JSON.
pub fn render_text(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let mut out = String::new();
            for (k, x) in map {
                out.push_str(k);
                out.push_str(": ");
                out.push_str(&scalar(x));
                out.push('\n');
            }
            out
        }
        other => format!("{}\n", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}
