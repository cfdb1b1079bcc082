//! Every JSON document the CLI emits validates against the schema files
//! shipped in `schemas/`. The checker below implements the subset of JSON
//! Schema those files use (types, const/enum, required/properties,
//! additionalProperties, items with bounds, numeric bounds, oneOf, $ref
//! into #/definitions).

use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn validate(schema: &Value, root: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
    let schema = match schema.get("$ref").and_then(Value::as_str) {
        Some(r) => {
            let key = r.trim_start_matches("#/definitions/");
            &root["definitions"][key]
        }
        None => schema,
    };
    let obj = match schema.as_object() {
        Some(o) => o,
        None => return,
    };

    if let Some(one_of) = obj.get("oneOf").and_then(Value::as_array) {
        let matches = one_of
            .iter()
            .filter(|branch| {
                let mut branch_errors = Vec::new();
                validate(branch, root, value, path, &mut branch_errors);
                branch_errors.is_empty()
            })
            .count();
        if matches != 1 {
            errors.push(format!("{path}: matched {matches} oneOf branches, expected 1"));
        }
        return;
    }

    if let Some(types) = obj.get("type") {
        let allowed: Vec<&str> = match types {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let actual = match value {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(n) => {
                if n.is_u64() || n.is_i64() {
                    "integer"
                } else {
                    "number"
                }
            }
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        let ok = allowed
            .iter()
            .any(|t| *t == actual || (*t == "number" && actual == "integer"));
        if !ok {
            errors.push(format!("{path}: type {actual} not in {allowed:?}"));
            return;
        }
    }

    if let Some(c) = obj.get("const") {
        if value != c {
            errors.push(format!("{path}: expected const {c}, found {value}"));
        }
    }
    if let Some(options) = obj.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            errors.push(format!("{path}: {value} not in enum"));
        }
    }
    if let Some(n) = value.as_f64() {
        if let Some(min) = obj.get("minimum").and_then(Value::as_f64) {
            if n < min {
                errors.push(format!("{path}: {n} below minimum {min}"));
            }
        }
        if let Some(max) = obj.get("maximum").and_then(Value::as_f64) {
            if n > max {
                errors.push(format!("{path}: {n} above maximum {max}"));
            }
        }
        if let Some(xmin) = obj.get("exclusiveMinimum").and_then(Value::as_f64) {
            if n <= xmin {
                errors.push(format!("{path}: {n} not above {xmin}"));
            }
        }
    }

    if let Some(map) = value.as_object() {
        for req in obj
            .get("required")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
            .filter_map(Value::as_str)
        {
            if !map.contains_key(req) {
                errors.push(format!("{path}: missing required field {req}"));
            }
        }
        let props = obj.get("properties").and_then(Value::as_object);
        if let Some(props) = props {
            for (key, sub) in map {
                match props.get(key) {
                    Some(sub_schema) => {
                        validate(sub_schema, root, sub, &format!("{path}.{key}"), errors)
                    }
                    None => {
                        if obj.get("additionalProperties") == Some(&Value::Bool(false)) {
                            errors.push(format!("{path}: unexpected field {key}"));
                        }
                    }
                }
            }
        }
    }

    if let Some(arr) = value.as_array() {
        if let Some(min) = obj.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < min {
                errors.push(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(max) = obj.get("maxItems").and_then(Value::as_u64) {
            if (arr.len() as u64) > max {
                errors.push(format!("{path}: more than {max} items"));
            }
        }
        if let Some(item_schema) = obj.get("items") {
            for (i, item) in arr.iter().enumerate() {
                validate(item_schema, root, item, &format!("{path}[{i}]"), errors);
            }
        }
    }
}

fn assert_valid(schema_file: &str, doc: &Value) {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(schema_file);
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(&schema_path).unwrap()).unwrap();
    let mut errors = Vec::new();
    validate(&schema, &schema, doc, "$", &mut errors);
    assert!(
        errors.is_empty(),
        "{schema_file} violations:\n  {}",
        errors.join("\n  ")
    );
}

fn run_json(args: &[&str], dir: &Path) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_cvpol"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "non-JSON output from {args:?}: {e}\nstdout: {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn emitted_documents_conform_to_the_shipped_schemas() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    // Produce the full artifact set.
    let out = Command::new(env!("CARGO_BIN_EXE_cvpol"))
        .args(["replicate", "--out", "."])
        .current_dir(dir)
        .output()
        .unwrap();
    assert!(out.status.success());

    let load = |name: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
    };
    assert_valid("state.schema.json", &load("state_xy.json"));
    assert_valid("state.schema.json", &load("state_pm45.json"));
    assert_valid("entanglement_report.schema.json", &load("report.json"));
    assert_valid("stokes_report.schema.json", &load("stokes_report.json"));

    // Scan artifacts and summaries.
    std::fs::write(
        dir.join("scan.json"),
        r#"{ "scan_bins": 5, "samples_per_bin": 200, "seed": 11 }"#,
    )
    .unwrap();
    let summary = run_json(
        &["scan", "--config", "scan.json", "--out", "run", "--format", "json"],
        dir,
    );
    assert_valid("scan_summary.schema.json", &summary);
    assert_valid("trace_meta.schema.json", &load("run/trace_meta.json"));
    assert_valid("state.schema.json", &load("run/scan_state.json"));

    let analyze = run_json(&["analyze", "run/trace.csv", "--format", "json"], dir);
    assert_valid("scan_summary.schema.json", &analyze);

    // Stokes summary straight from the CLI.
    let stokes = run_json(&["stokes", "--format", "json"], dir);
    assert_valid("stokes_report.schema.json", &stokes);

    // The default configuration document itself.
    let cfg_doc: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("scan.json")).unwrap(),
    )
    .unwrap();
    assert_valid("scenario_config.schema.json", &cfg_doc);
}
