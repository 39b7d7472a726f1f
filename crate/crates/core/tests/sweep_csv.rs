mod common;

use common::temp;
use ness_core::models::CoupledQubitsParams;
use ness_core::presets::{coupled_qubits_params, preset};
use ness_core::sweep::{evaluate_point, run_sweep, write_csv, Axis, AxisName, Execution, OutputSet, SweepSpec};
use ness_core::ModelParams;

fn csv_of(spec: &SweepSpec, execution: Execution) -> String {
    let records = run_sweep(spec, execution).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, spec, &records).unwrap();
    String::from_utf8(buf).unwrap()
}

fn column(header: &str, name: &str) -> usize {
    header.split(',').position(|c| c == name).unwrap()
}

#[test]
fn fig2_grid_has_one_row_per_point() {
    let spec = preset("fig2").unwrap().sweep_spec().unwrap();
    let text = csv_of(&spec, Execution::with_workers(0));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2501);
    assert_eq!(lines[0], "model,T1,T2,J,U,S,C_T1,C_T2,F_gibbs_T1,F_gibbs_T2");
    assert!(lines[1].starts_with("two-level,0.05,0.05,0,"));
    assert!(lines[2500].starts_with("two-level,10,10,0,"));
    let s = column(lines[0], "S");
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        let entropy: f64 = fields[s].parse().unwrap();
        assert!((0.0..=2f64.ln()).contains(&entropy));
    }
}

#[test]
fn thermalized_oscillator_has_unit_fidelity() {
    let spec = preset("fig6c").unwrap().sweep_spec().unwrap();
    let text = csv_of(&spec, Execution::with_workers(0));
    let mut lines = text.lines();
    let f = column(lines.next().unwrap(), "F_gibbs_T1");
    let mut rows = 0;
    for line in lines {
        let value: f64 = line.split(',').nth(f).unwrap().parse().unwrap();
        assert!(value >= 1.0 - 1e-6, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 40);
}

#[test]
fn eigenbasis_populations_are_normalized() {
    let spec = preset("fig7").unwrap().sweep_spec().unwrap();
    let text = csv_of(&spec, Execution::with_workers(0));
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.ends_with(",p1,p2,p3,p4"));
    let p1 = column(header, "p1");
    for line in lines {
        let total: f64 = line.split(',').skip(p1).map(|x| x.parse::<f64>().unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-10, "{line}");
    }
}

#[test]
fn output_is_identical_across_runs_and_worker_counts() {
    let spec = SweepSpec::new(
        preset("fig4a").unwrap().params,
        Axis::new(AxisName::T1, 0.05, 3.0, 7).unwrap(),
        Some(Axis::new(AxisName::J, 0.0, 1.0, 5).unwrap()),
        OutputSet::all(),
    )
    .unwrap();
    let reference = csv_of(&spec, Execution::Sequential);
    assert_eq!(reference, csv_of(&spec, Execution::Sequential));
    for workers in [0, 2, 3, 8] {
        assert_eq!(reference, csv_of(&spec, Execution::with_workers(workers)), "{workers} workers");
    }
    assert!(!reference.contains('\r'));
    assert!(reference.is_ascii());
}

#[test]
fn degenerate_points_leave_empty_fields() {
    // J = 0 and Γ = 0 leave the second qubit untouched by any bath.
    let params = ModelParams::CoupledQubits(CoupledQubitsParams { big_gamma: 0.0, ..coupled_qubits_params() });
    let spec = SweepSpec::new(
        params,
        Axis::new(AxisName::J, 0.0, 0.4, 3).unwrap(),
        None,
        "U,S,populations".parse().unwrap(),
    )
    .unwrap();
    let records = run_sweep(&spec, Execution::Sequential).unwrap();
    assert!(!records[0].is_ok());
    assert!(records[1].is_ok() && records[2].is_ok());
    let mut buf = Vec::new();
    write_csv(&mut buf, &spec, &records).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let first = text.lines().nth(1).unwrap();
    assert_eq!(first, "coupled-qubits,1,1,0,,,,,,,,,,");
}

#[test]
fn oscillator_records_carry_the_tail_population() {
    let p = preset("fig5").unwrap().params.with_temperatures(temp(2.0), temp(2.0));
    let rec = evaluate_point(&p, "U".parse().unwrap());
    let top = rec.top_population.unwrap();
    assert!(top > 0.0 && top < 1e-8);
    assert!(evaluate_point(&preset("fig2").unwrap().params, "U".parse().unwrap()).top_population.is_none());
}
