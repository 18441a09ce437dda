use serde_json::Value;

/// Indented `key: value` lines; scalars and arrays of scalars stay on one line.
pub fn text(v: &Value) -> String {
    let mut out = Vec::new();
    block(v, 0, &mut out);
    out.join("\n")
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.is_empty(),
        Value::Array(a) => a.iter().all(|x| !x.is_object()),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn block(v: &Value, depth: usize, out: &mut Vec<String>) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_flat(x) {
                    out.push(format!("{pad}{k}: {}", inline(x)));
                } else {
                    out.push(format!("{pad}{k}:"));
                    block(x, depth + 1, out);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    out.push(format!("{pad}- {}", inline(x)));
                } else {
                    out.push(format!("{pad}-"));
                    block(x, depth + 1, out);
                }
            }
        }
        other => out.push(format!("{pad}{}", inline(other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nested_objects_indent() {
        let v = json!({"a": 1, "b": {"c": [1, 2], "d": "x"}, "e": [{"f": true}]});
        assert_eq!(text(&v), "a: 1\nb:\n  c: [1,2]\n  d: x\ne:\n  -\n    f: true");
    }
}
