//! Published benchmark values that this implementation reproduces.

use obstacle_bdf::experiments::{run_table, ConvergenceTable, ProblemId, RunConfig};

fn table(problem: ProblemId, scheme: &str, mesh: &str) -> ConvergenceTable {
    let mut c = RunConfig::new(problem);
    c.set("scheme", scheme).unwrap();
    c.set("mesh", mesh).unwrap();
    c.set("timing", "false").unwrap();
    let t = run_table(&c).unwrap();
    assert!(t.all_ok());
    t
}

fn within(ours: f64, bench: f64, rel: f64) -> bool {
    (ours - bench).abs() <= rel * bench
}

#[test]
fn american_put_bdf2_errors() {
    let t = table(ProblemId::AmericanPut, "bdf2", "320:320,640:640");
    let e: Vec<f64> = t.rows.iter().map(|r| r.errors.unwrap().linf).collect();
    assert!(within(e[0], 1.59e-3, 0.35), "{e:?}");
    assert!(within(e[1], 3.71e-4, 0.35), "{e:?}");
}

#[test]
fn model2_bdf3_equal_steps() {
    let t = table(ProblemId::Model2, "bdf3", "80:80,160:160");
    let e: Vec<f64> = t.rows.iter().map(|r| r.errors.unwrap().linf).collect();
    assert!(e[0] / 8.33e-2 < 2.0 && 8.33e-2 / e[0] < 2.0, "{e:?}");
    assert!(e[1] / 7.12e-3 < 2.0 && 7.12e-3 / e[1] < 2.0, "{e:?}");
}

#[test]
fn model1_crank_nicolson_errors() {
    let t = table(ProblemId::Model1, "cn1", "80:80,2560:256");
    let e: Vec<f64> = t.rows.iter().map(|r| r.errors.unwrap().linf).collect();
    assert!(within(e[0], 1.85e-2, 0.25), "{e:?}");
    assert!(within(e[1], 5.16e-3, 0.25), "{e:?}");
}
