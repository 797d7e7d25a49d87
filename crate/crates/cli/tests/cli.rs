use std::path::PathBuf;
use std::process::{Command, Output};

use bklr::parse::{element_text, json_terms, parse_any};
use bklr::Config;
use bklr_core::basisrewrite::Engine;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn bklr(cfg: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bklr"))
        .arg("--config")
        .arg(config(cfg))
        .args(args)
        .output()
        .expect("run bklr")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn qint() {
    let out = bklr("sl2.json", &["qint", "--n", "2", "--i", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["terms"], serde_json::json!([[-1, 1], [1, 1]]));
    let out = bklr("sl2.json", &["qint", "--n", "-2", "--i", "1"]);
    assert_eq!(report(&out)["results"]["terms"], serde_json::json!([[-1, -1], [1, -1]]));
}

#[test]
fn signed_gdim_renders() {
    let out = bklr("sl2.json", &["gdim", "--nu", "1:1", "--i", "1", "--j", "1", "--signed"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"]["rational"], "(1-l1^2)/(1-q^2)");
}

#[test]
fn relations_report_families() {
    let out = bklr("sl2.json", &["verify-relations", "--max-strands", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["ok"], true);
    assert_eq!(r["results"]["relations_checked"], 8);
}

#[test]
fn input_errors_exit_two() {
    let out = bklr("sl2.json", &["normal-form", "--element", "idem(1); tau(1)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:10"));
    let out = bklr("sl2.json", &["normal-form", "--element", "idem(1);\n  zap(1)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2:3"));
    let out = bklr("missing.json", &["validate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bklr("sl2.json", &["qint", "--n", "2", "--i", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parabolic_commands_need_a_parabolic() {
    let dir = std::env::temp_dir().join(format!("bklr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("borel.json");
    std::fs::write(&path, r#"{"cartan": "sl2"}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_bklr"))
        .args(["--config", path.to_str().unwrap(), "d", "--element", "idem(1)"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_bklr"))
            .env("BKLR_THREADS", threads)
            .args(["--config", config("a2.json").to_str().unwrap(), "verify-shapovalov", "--height", "2"])
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("1");
    let c = run("3");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn differential_of_tight_dot() {
    let out = bklr("sl2.json", &["d", "--element", "idem(1); fdot(1)"]);
    assert_eq!(report(&out)["results"]["text"], "[idem(1); x(1); x(1)]");
}

fn random_text(rng: &mut ChaCha8Rng) -> String {
    let m = rng.gen_range(1..=3);
    let labels: Vec<String> = (0..m).map(|_| rng.gen_range(1..=2).to_string()).collect();
    let mut s = format!("idem({})", labels.join(","));
    for _ in 0..rng.gen_range(0..=5) {
        match rng.gen_range(0..4) {
            0 => s += &format!("; x({})", rng.gen_range(1..=m)),
            1 if m > 1 => s += &format!("; tau({})", rng.gen_range(1..m)),
            2 => s += &format!("; fdot({},{},{})", rng.gen_range(1..=2), rng.gen_range(0..=1), rng.gen_range(1..=m)),
            _ => s += &format!("; fdot({})", rng.gen_range(1..=m)),
        }
    }
    s
}

#[test]
fn normal_forms_round_trip() {
    let cfg = Config::load(&config("a2.json")).unwrap();
    let d = &cfg.datum;
    let mut eng = Engine::new(d, &cfg.scalars);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut nonzero = 0;
    for _ in 0..60 {
        let text = random_text(&mut rng);
        let words = match parse_any(d, &text) {
            Ok(w) => w,
            Err(_) => continue,
        };
        let e = eng.normal_form_combination(&words).unwrap();
        if e.is_zero() {
            continue;
        }
        nonzero += 1;
        let printed = element_text(d, &e);
        let back = eng.normal_form_combination(&parse_any(d, &printed).unwrap()).unwrap();
        assert_eq!(back, e, "{text} -> {printed}");
        let js = serde_json::to_string(&json_terms(d, &e)).unwrap();
        let back = eng.normal_form_combination(&parse_any(d, &js).unwrap()).unwrap();
        assert_eq!(back, e, "{text} -> {js}");
    }
    assert!(nonzero > 20);
}

#[test]
fn normal_form_command_round_trips() {
    let out = bklr("a2.json", &["normal-form", "--element", "idem(1,2); x(1); tau(1); tau(1)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = report(&out)["results"]["text"].as_str().unwrap().to_string();
    let again = bklr("a2.json", &["normal-form", "--element", &text]);
    assert_eq!(report(&again)["results"], report(&out)["results"]);
}
