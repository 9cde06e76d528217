use std::path::Path;
use std::process::{Command, Output};

use nacoalg::coalgebra::parse_spec_json;
use nacoalg::constructions::builtin;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nacoalg")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--json", "--deterministic"]);
    let out = run(&full);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (code(&out), v)
}

fn schema() -> Value {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("report.schema.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Validates the subset of JSON Schema used by the report schema.
fn validate(root: &Value, schema: &Value, v: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").ok_or_else(|| format!("unsupported $ref {r}"))?;
        return validate(root, &root["$defs"][name], v, path);
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let Some(t) = schema.get("type").and_then(Value::as_str) {
        let ok = match t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "integer" => v.is_u64() || v.is_i64(),
            "boolean" => v.is_boolean(),
            other => return Err(format!("unsupported type {other}")),
        };
        if !ok {
            return Err(format!("{path}: expected {t}, got {v}"));
        }
    }
    if let Some(obj) = v.as_object() {
        let props = schema.get("properties").and_then(Value::as_object);
        for req in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = req.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing {key}"));
            }
        }
        for (k, x) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(s) => validate(root, s, x, &format!("{path}.{k}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected property {k}"));
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            validate(root, items, x, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn assert_valid(v: &Value) {
    let s = schema();
    validate(&s, &s, v, "$").unwrap();
}

#[test]
fn validator_rejects_bad_reports() {
    let s = schema();
    let (_, mut v) = json(&["list-examples"]);
    validate(&s, &s, &v, "$").unwrap();
    v["outcome"] = Value::from("maybe");
    assert!(validate(&s, &s, &v, "$").is_err());
    v["outcome"] = Value::from("info");
    v["surprise"] = Value::from(1);
    assert!(validate(&s, &s, &v, "$").is_err());
}

#[test]
fn exit_codes() {
    let (c, v) = json(&["check", "--example", "example1", "--checks", "coassoc,cocomm,coderivation", "--max-index", "20"]);
    assert_eq!((c, v["outcome"].as_str()), (0, Some("pass")));
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
    assert_valid(&v);

    let (c, v) = json(&["check", "--example", "example2", "--checks", "cocomm", "--max-index", "5"]);
    assert_eq!((c, v["outcome"].as_str()), (1, Some("fail")));
    assert!(!v["checks"][0]["witnesses"].as_array().unwrap().is_empty());
    assert_valid(&v);

    let (c, v) = json(&["check", "--example", "example99", "--checks", "coassoc"]);
    assert_eq!((c, v["outcome"].as_str()), (2, Some("error")));
    assert_valid(&v);

    let (c, v) = json(&["closure", "--example", "example2", "--generators", "f:1", "--max-steps", "10"]);
    assert_eq!((c, v["outcome"].as_str()), (3, Some("budget-exceeded")));
    assert_eq!(v["closure"]["dims"][1], 3);
    assert_valid(&v);

    let (c, v) = json(&["closure", "--example", "example1", "--generators", "e:0"]);
    assert_eq!((c, v["closure"]["dimension"].as_u64()), (0, Some(1)));
    assert_valid(&v);

    assert_eq!(code(&run(&["check", "--bogus-flag"])), 2);
}

#[test]
fn suggestions_for_misspelled_names() {
    let (c, v) = json(&["check", "--example", "example1", "--checks", "coasoc"]);
    assert_eq!(c, 2);
    assert!(v["error"].as_str().unwrap().contains("did you mean `coassoc`"), "{v}");
    let (_, v) = json(&["check", "--example", "exmaple1", "--checks", "coassoc"]);
    assert!(v["error"].as_str().unwrap().contains("did you mean `example1`"), "{v}");
}

#[test]
fn deterministic_output_is_byte_identical() {
    let args = ["closure", "simplicity", "--example", "example5", "--horizon", "12", "--seed", "3", "--json", "--deterministic"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.get("timing_ms").is_none());
    assert_eq!(v["seeds"], serde_json::json!([3]));
    assert_valid(&v);
}

#[test]
fn constructions_reproduce_the_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("gelfand-dorfman", "example1", "example2", None),
        ("antisymmetrize", "example2", "example3", None),
        ("antisymmetrize", "example5", "example6", Some(30)),
        ("kantor", "example4", "example8", Some(30)),
    ];
    for (construction, from, expected, horizon) in cases {
        let out = dir.path().join(format!("{construction}-{from}.json"));
        let (c, v) = json(&["construct", construction, "--example", from, "-o", out.to_str().unwrap()]);
        assert_eq!(c, 0, "{v}");
        assert_valid(&v);
        let built = parse_spec_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let want = builtin(expected).unwrap();
        match horizon {
            None => assert!(built.same_rules(&want), "{construction}({from})"),
            Some(n) => assert!(built.agree_on(&want, n), "{construction}({from})"),
        }
    }

    let out = dir.path().join("gd.json");
    let (c, v) = json(&["construct", "graded-dual", "--algebra", "fx-diff-algebra", "--horizon", "20", "-o", out.to_str().unwrap()]);
    assert_eq!(c, 0, "{v}");
    assert_eq!(v["spec"]["kind"], "algebra");
    let built = parse_spec_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let ex4 = builtin("example4").unwrap();
    // d is undefined on the top kept degree, so only the comultiplication is compared
    for l in built.labels_up_to(20) {
        assert_eq!(built.delta(&l).unwrap(), ex4.delta(&l).unwrap(), "{l}");
    }
}

#[test]
fn export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["example1", "example3", "example7", "example9"] {
        let out = dir.path().join(format!("{name}.json"));
        assert_eq!(code(&run(&["export", "--example", name, "-o", out.to_str().unwrap()])), 0);
        let back = parse_spec_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let orig = builtin(name).unwrap();
        assert!(back.agree_on(&orig, 30), "{name}");
        for l in orig.labels_up_to(30) {
            assert_eq!(back.delta(&l).unwrap(), orig.delta(&l).unwrap(), "{name} {l}");
        }

        let (c, v) = json(&["check", "--spec", out.to_str().unwrap(), "--checks", "shift-bound", "--max-index", "10"]);
        assert_eq!(c, 0, "{v}");
        assert_eq!(v["spec"]["kind"], "file");
        assert_eq!(v["spec"]["sha256"].as_str().unwrap().len(), 64);
        assert_valid(&v);
    }
}

#[test]
fn list_examples() {
    let (c, v) = json(&["list-examples"]);
    assert_eq!(c, 0);
    let names: Vec<&str> = v["examples"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for n in ["example1", "example5", "example9", "fx-diff-algebra"] {
        assert!(names.contains(&n), "{n}");
    }
    assert_valid(&v);
}

#[test]
fn dual_commands() {
    let (c, v) = json(&["dual", "product", "--example", "example1", "--left", "f:1", "--right", "e:0"]);
    assert_eq!(c, 0);
    assert_eq!(v["products"][0]["product"], "ξ[f:1]");
    assert_valid(&v);

    let (c, v) = json(&["dual", "identity", "--example", "example9", "--identity", "right-alternativity-linearized", "--bound", "6"]);
    assert_eq!((c, v["outcome"].as_str()), (0, Some("pass")), "{v}");
    assert_valid(&v);

    let (c, v) = json(&["dual", "grassmann", "--example", "example7", "--seed", "7", "--samples", "5"]);
    assert_eq!(c, 0, "{v}");
    assert_eq!(v["seeds"], serde_json::json!([7]));
    assert_valid(&v);
}

#[test]
fn text_output_names_the_verdict() {
    let out = run(&["check", "--example", "example1", "--checks", "coassoc", "--max-index", "10"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("coassoc"), "{text}");
    assert!(text.contains("result: pass"), "{text}");
    assert!(text.contains("verified on"), "{text}");
}
