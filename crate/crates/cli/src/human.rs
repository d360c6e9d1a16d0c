//! Text rendering of reports: one `key  value` row per leaf, keys as dotted paths.

use serde_json::Value;

pub fn render(report: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn is_scalar_row(v: &Value) -> bool {
    match v {
        Value::Array(items) => {
            items.iter().all(|i| matches!(i, Value::Number(_) | Value::Bool(_) | Value::String(_) | Value::Null))
        }
        _ => false,
    }
}

/// A complex number `[re, im]` or a list of them, printed compactly.
fn complex_list(v: &Value) -> Option<String> {
    let pair = |p: &Value| -> Option<String> {
        let a = p.as_array()?;
        match a.as_slice() {
            [re, im] => {
                let (re, im) = (re.as_f64()?, im.as_f64()?);
                Some(if im == 0.0 { format!("{re:.6e}") } else { format!("{re:.6e}{im:+.6e}i") })
            }
            _ => None,
        }
    };
    let items = v.as_array()?;
    if items.is_empty() {
        return None;
    }
    let parts = items.iter().map(pair).collect::<Option<Vec<_>>>()?;
    Some(format!("[{}]", parts.join(", ")))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:.6e}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&key(k), child, rows);
            }
        }
        Value::Array(_) if is_scalar_row(v) => {
            let items: Vec<String> = v.as_array().into_iter().flatten().map(scalar).collect();
            rows.push((prefix.to_string(), format!("[{}]", items.join(", "))));
        }
        Value::Array(items) => {
            if let Some(s) = complex_list(v) {
                rows.push((prefix.to_string(), s));
            } else {
                for (i, child) in items.iter().enumerate() {
                    flatten(&format!("{prefix}[{i}]"), child, rows);
                }
            }
        }
        _ => rows.push((prefix.to_string(), scalar(v))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_nested_objects() {
        let text = render(&json!({"a": {"b": 1, "c": [[1.0, 0.0], [2.0, -1.0]]}, "ok": true}));
        assert!(text.contains("a.b"));
        assert!(text.contains("[1.000000e0, 2.000000e0-1.000000e0i]"), "{text}");
        assert!(text.lines().any(|l| l.starts_with("ok") && l.ends_with("true")));
    }
}
