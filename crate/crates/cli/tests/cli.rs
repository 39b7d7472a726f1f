use std::fs;
use std::process::{Command, Output};

fn ness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ness")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn steady_two_level_matches_closed_form() {
    let v = json(&ness(&["steady", "--preset", "fig2", "--t1", "1", "--t2", "1"]));
    assert_eq!(v["model"], "two-level");
    assert_eq!(v["dim"], 2);
    let excited = v["rho"][3][0].as_f64().unwrap();
    let exact = ness_core::two_level_closed_form(&ness_core::presets::two_level_params()).unwrap();
    assert!((excited - exact.matrix()[(1, 1)].re).abs() < 1e-12);
    assert!((excited - 0.44224).abs() < 1e-5);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn zero_temperature_oscillator_sits_in_vacuum() {
    let v = json(&ness(&[
        "steady", "--model", "oscillator", "--cutoff", "2", "--omega", "1", "--gamma", "0.2", "--big-gamma", "0", "--t1",
        "0", "--t2", "1",
    ]));
    let rho: Vec<f64> = v["rho"].as_array().unwrap().iter().flat_map(|z| z.as_array().unwrap().iter().map(|x| x.as_f64().unwrap())).collect();
    let expected = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    for (a, b) in rho.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12, "{rho:?}");
    }
    assert_eq!(v["S"].as_f64().unwrap(), 0.0);
}

#[test]
fn missing_parameter_is_a_usage_error() {
    let out = ness(&["steady", "--model", "two-level", "--omega", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--gamma"));
}

#[test]
fn unknown_config_key_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(&path, "# two-level run\nmodel = two-level\nomga = 1\n").unwrap();
    let out = ness(&["steady", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 3") && err.contains("omga"), "{err}");
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(&path, "preset = fig2\nt1 = 5\nt2 = 5\n").unwrap();
    let v = json(&ness(&["steady", "--config", path.to_str().unwrap(), "--t1", "1", "--t2", "1"]));
    assert!((v["rho"][3][0].as_f64().unwrap() - 0.44224).abs() < 1e-5);
}

#[test]
fn degenerate_generator_exits_with_solver_code() {
    let out = ness(&["steady", "--preset", "fig6d", "--j", "0", "--t1", "1", "--t2", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("NonUniqueSteadyState"));
}

#[test]
fn sweep_output_does_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "2", "0"] {
        let path = dir.path().join(format!("w{workers}.csv"));
        let out = ness(&[
            "sweep", "--preset", "fig3", "--axis1", "T1:0.1:2:6", "--axis2", "J:0:1:4", "--outputs", "U,S,C_T1,F_T2",
            "--workers", workers, "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        outputs.push(fs::read(&path).unwrap());
    }
    assert!(outputs.iter().all(|o| o == &outputs[0]));
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert_eq!(text.lines().count(), 25);
    assert!(text.starts_with("model,T1,T2,J,U,S,C_T1,C_T2,F_gibbs_T1,F_gibbs_T2\n"));
}

#[test]
fn sweep_with_every_point_failing_exits_with_solver_code() {
    let out = ness(&["sweep", "--preset", "fig6d", "--j", "0", "--axis1", "T1:0.1:1:3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr(&out).matches("warning:").count(), 3);
}

#[test]
fn populations_are_normalized() {
    let v = json(&ness(&["populations", "--preset", "fig7", "--t1", "0.5", "--t2", "2"]));
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    let total: f64 = levels.iter().map(|l| l["population"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-10);
    let energies: Vec<f64> = levels.iter().map(|l| l["energy"].as_f64().unwrap()).collect();
    assert!(energies.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn truncated_oscillator_warns() {
    let out = ness(&["steady", "--preset", "fig5", "--cutoff", "30", "--t1", "2.4", "--t2", "2.4"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("increase --cutoff"));
}

#[test]
fn presets_lists_every_name() {
    let out = ness(&["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["fig2", "fig3", "fig4a", "fig4b", "fig5", "fig6a", "fig6b", "fig6c", "fig6d", "fig7"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
