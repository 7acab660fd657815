//! Rendering: a JSON envelope with canonicalized floats, aligned text
//! tables, and RFC 4180 CSV.

use qhydrogen::CONSTANTS_VERSION;
use serde_json::Value;

/// How results are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Rounds to 15 significant digits so JSON output is stable across runs and
/// platforms while keeping every digit that f64 arithmetic can promise.
pub fn canonical_f64(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn canonicalize_floats(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if !n.is_i64() && !n.is_u64() {
                if let Some(x) = n.as_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(canonical_f64(x)) {
                        *n = rounded;
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize_floats),
        Value::Object(map) => map.values_mut().for_each(canonicalize_floats),
        _ => {}
    }
}

/// The full JSON document for one invocation: a manifest describing the run
/// plus the result payload. Keys come out sorted and floats canonicalized,
/// so identical invocations produce identical bytes.
pub fn json_envelope(command: &str, parameters: Value, result: Value) -> String {
    let mut root = serde_json::json!({
        "manifest": {
            "command": command,
            "constants_version": CONSTANTS_VERSION,
            "parameters": parameters,
            "tool_version": env!("CARGO_PKG_VERSION"),
        },
        "result": result,
    });
    canonicalize_floats(&mut root);
    let mut text = serde_json::to_string_pretty(&root).expect("serializable output");
    text.push('\n');
    text
}

/// Shortest decimal form of the canonicalized value; switches to exponent
/// notation where plain decimals would be all padding. Used by CSV and
/// tables.
pub fn fmt_num(x: f64) -> String {
    let x = canonical_f64(x);
    if x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e7) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Left-aligned columns separated by two spaces, with a dashed rule under
/// the header.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let render = |cells: &[String]| -> String {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i + 1 == cells.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<width$}", width = widths[i]));
            }
        }
        line.trim_end().to_string()
    };
    let head: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let mut out = render(&head);
    out.push('\n');
    out.push_str(&render(&rule));
    out.push('\n');
    for row in rows {
        out.push_str(&render(row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_to_fifteen_digits() {
        assert_eq!(canonical_f64(0.1 + 0.2), 0.3);
        assert_eq!(canonical_f64(1.0), 1.0);
        assert_eq!(canonical_f64(0.0), 0.0);
        assert_eq!(canonical_f64(-109677.58340280321), -109677.583402803);
    }

    #[test]
    fn numbers_render_readably() {
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(-109677.5834028032), "-109677.583402803");
        assert_eq!(fmt_num(1.8e-12), "1.8e-12");
        assert_eq!(fmt_num(1e-9), "1e-9");
        assert_eq!(fmt_num(0.0), "0");
    }

    #[test]
    fn envelope_is_reproducible_and_sorted() {
        let params = serde_json::json!({"q": 1.004, "z": 1});
        let one = json_envelope(
            "split",
            params.clone(),
            serde_json::json!({"b": 2.0, "a": 1}),
        );
        let two = json_envelope("split", params, serde_json::json!({"b": 2.0, "a": 1}));
        assert_eq!(one, two);
        let a = one.find("\"a\"").unwrap();
        let b = one.find("\"b\"").unwrap();
        assert!(a < b);
        assert!(one.find("\"manifest\"").unwrap() < one.find("\"result\"").unwrap());
    }

    #[test]
    fn csv_escapes_embedded_commas() {
        let rows = vec![vec!["a,b".to_string(), "plain".to_string()]];
        let text = csv_table(&["x", "y"], &rows);
        assert_eq!(text, "x,y\n\"a,b\",plain\n");
    }

    #[test]
    fn table_columns_align() {
        let rows = vec![
            vec!["2j=0".to_string(), "1".to_string()],
            vec!["2j=10".to_string(), "121".to_string()],
        ];
        let text = text_table(&["label", "mult"], &rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "label  mult");
        assert_eq!(lines[1], "-----  ----");
        assert_eq!(lines[2], "2j=0   1");
        assert_eq!(lines[3], "2j=10  121");
    }
}
