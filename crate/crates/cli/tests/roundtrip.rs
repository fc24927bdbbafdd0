//! Reports parse back to the identical value, and text output shows the same numbers.

use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_implreg");

fn run(args: &[&str]) -> String {
    let o = Command::new(BIN).args(args).output().unwrap();
    String::from_utf8(o.stdout).unwrap()
}

fn golden_csv() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/noisy_circle.csv").to_string()
}

fn floats(v: &Value, out: &mut Vec<f64>) {
    match v {
        Value::Number(n) => out.push(n.as_f64().unwrap()),
        Value::Array(a) => a.iter().for_each(|x| floats(x, out)),
        Value::Object(o) => o.values().for_each(|x| floats(x, out)),
        _ => {}
    }
}

#[test]
fn json_parses_back_to_same_value() {
    let csv = golden_csv();
    for model in ["nonresponse", "rotation:y", "standard", "univariate"] {
        let text = run(&["fit", "--input", &csv, "--model", model, "--output", "json"]);
        let v: Value = serde_json::from_str(&text).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v, "{model}");
    }
    let text = run(&["diagnose", "--input", &csv, "--terms", "x,y", "--output", "json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
    assert!(v["pinwheel"].is_object() && v["separation"].is_object());
}

#[test]
fn floats_survive_text_round_trip() {
    let csv = golden_csv();
    let text = run(&["diagnose", "--input", &csv, "--output", "json"]);
    let mut xs = Vec::new();
    floats(&serde_json::from_str(&text).unwrap(), &mut xs);
    assert!(xs.len() > 20);
    for x in xs {
        assert_eq!(x.to_string().parse::<f64>().unwrap(), x);
    }
}

#[test]
fn text_matches_json_after_rounding() {
    let csv = golden_csv();
    let v: Value =
        serde_json::from_str(&run(&["diagnose", "--input", &csv, "--output", "json"])).unwrap();
    let text = run(&["diagnose", "--input", &csv]);
    let a = &v["separation"]["angles"];
    for k in ["theta_t", "theta_m", "theta_e"] {
        let shown = format!("{:.4}", a[k].as_f64().unwrap());
        assert!(text.contains(&shown), "{k} {shown} missing from\n{text}");
    }
    let r2 = format!("{:.6}", v["r_squared"]["value"].as_f64().unwrap());
    assert!(text.contains(&format!("R^2: {r2}")));
    for c in v["coefficients"].as_array().unwrap() {
        assert!(text.contains(&format!("{:.8}", c["estimate"].as_f64().unwrap())));
    }
}
