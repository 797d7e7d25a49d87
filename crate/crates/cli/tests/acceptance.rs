use std::process::ExitCode;
use std::time::Instant;

use bklr::suites::{self, Criterion};

fn payload(cs: &[Criterion]) -> String {
    serde_json::to_string_pretty(&serde_json::to_value(cs).expect("serialize")).expect("serialize")
}

fn main() -> ExitCode {
    let threads = suites::threads(None);
    let start = Instant::now();
    let first = suites::run_all(threads);
    let elapsed = start.elapsed();
    let mut ok = true;
    for c in &first {
        let mark = if c.ok { "PASS" } else { "FAIL" };
        println!("criterion {}: {mark} - {} ({} checks)", c.id, c.title, c.checked);
        for f in c.failures.iter().take(10) {
            println!("    {f}");
        }
        ok &= c.ok;
    }
    let second = suites::run_all(threads);
    let same = payload(&first) == payload(&second);
    println!(
        "criterion 9: {} - repeated runs give byte-identical reports",
        if same { "PASS" } else { "FAIL" }
    );
    ok &= same;
    eprintln!("first run: {:.1}s on {threads} threads", elapsed.as_secs_f64());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
