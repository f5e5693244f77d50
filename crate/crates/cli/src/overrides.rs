//! `--set key=value` overrides: dotted paths into the scenario's JSON
//! representation, applied before deserialization so any field can be
//! tweaked from the command line (e.g. `graph.d_roll=5`, `sim.seed=3`).

use serde_json::Value;

/// Apply one `path.to.field=value` override in place. Path segments that
/// parse as integers index into arrays; the value is parsed as JSON when
/// possible and kept as a string otherwise.
pub fn apply(root: &mut Value, spec: &str) -> Result<(), String> {
    let Some((path, raw)) = spec.split_once('=') else {
        return Err(format!("--set expects key=value, got `{spec}`"));
    };
    let value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));

    let segments: Vec<&str> = path.split('.').collect();
    let (last, parents) = segments.split_last().expect("split produces one segment");
    let mut cur = root;
    for (i, seg) in parents.iter().enumerate() {
        cur = descend(cur, seg)
            .ok_or_else(|| format!("`{}` not found in scenario", segments[..=i].join(".")))?;
    }
    match cur {
        Value::Object(map) => {
            map.insert(last.to_string(), value);
            Ok(())
        }
        Value::Array(arr) => {
            let idx: usize = last
                .parse()
                .map_err(|_| format!("`{last}` is not an array index"))?;
            if idx >= arr.len() {
                return Err(format!("index {idx} out of bounds in `{path}`"));
            }
            arr[idx] = value;
            Ok(())
        }
        _ => Err(format!("`{}` is not an object or array", parents.join("."))),
    }
}

fn descend<'a>(v: &'a mut Value, seg: &str) -> Option<&'a mut Value> {
    match v {
        Value::Object(map) => map.get_mut(seg),
        Value::Array(arr) => arr.get_mut(seg.parse::<usize>().ok()?),
        _ => None,
    }
}
