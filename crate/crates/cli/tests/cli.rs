//! End-to-end tests of the command-line surface: exit codes, diagnostics,
//! output schema, and byte-level determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nvpl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nvpl"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nvpl_cli_{tag}_{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn run_produces_csv_and_json() {
    let dir = tempdir("run");
    fs::write(
        dir.join("s1.seq"),
        "sequence s1 {\n  pulse minus pi/2 phase 0\n  cpulse plus detuning 250kHz rabi 500kHz \
         cycles 1\n  pulse minus pi/2 phase 0\n}\n",
    )
    .unwrap();
    let out = nvpl(&["run", "s1.seq", "--output", "out"], &dir);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = fs::read_to_string(dir.join("out.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "t_s,c_plus1_re,c_plus1_im,c_0_re,c_0_im,c_minus1_re,c_minus1_im,bloch_x_plus,\
         bloch_y_plus,bloch_z_plus,bloch_x_minus,bloch_y_minus,bloch_z_minus,segment_label"
    );
    assert!(csv.lines().count() > 1000); // 1 ns sampling over ~1.8 us

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out.json")).unwrap()).unwrap();
    let pop = json["population0"].as_f64().unwrap();
    // single cone at delta/rabi = 0.5: sin^2(phi_aa / 2)
    let w = (250e3f64 * 250e3 + 500e3 * 500e3).sqrt();
    let phi = std::f64::consts::PI * (1.0 + 250e3 / w);
    assert!((pop - (phi / 2.0).sin().powi(2)).abs() < 1e-9);
    let aa = json["segments"][0]["decomposition"]["phi_aa"]
        .as_f64()
        .unwrap();
    assert!((aa - phi).abs() < 1e-6);
}

#[test]
fn run_is_byte_deterministic() {
    let dir = tempdir("det");
    fs::write(
        dir.join("s.seq"),
        "sequence s {\n  pulse minus pi/2 phase 0\n  cpulse minus detuning 200kHz rabi 500kHz \
         cycles 1 phase 0.4\n  pulse minus pi/2 phase 0\n}\n",
    )
    .unwrap();
    let args = ["run", "s.seq", "--shots", "400", "--seed", "11"];
    assert!(nvpl(&[&args[..], &["--output", "a"][..]].concat(), &dir)
        .status
        .success());
    assert!(nvpl(&[&args[..], &["--output", "b"][..]].concat(), &dir)
        .status
        .success());
    assert_eq!(
        fs::read(dir.join("a.csv")).unwrap(),
        fs::read(dir.join("b.csv")).unwrap()
    );
    assert_eq!(
        fs::read(dir.join("a.json")).unwrap(),
        fs::read(dir.join("b.json")).unwrap()
    );
}

#[test]
fn parse_errors_exit_nonzero_with_spans() {
    let dir = tempdir("err");
    fs::write(
        dir.join("bad.seq"),
        "sequence s {\n  cpulse plus detuning 250 rabi 500kHz cycles 1\n}\n",
    )
    .unwrap();
    let out = nvpl(&["run", "bad.seq"], &dir);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("missing frequency unit"), "{stderr}");
    assert!(stderr.contains("2:"), "span line missing: {stderr}");
}

#[test]
fn sweep_schema_and_eta_independence() {
    let dir = tempdir("sweep");
    let out = nvpl(
        &[
            "sweep", "seq4", "--grid", "0:1:5", "--delta", "250e3", "--output", "s4",
        ],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.join("s4.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "parameter,population0,phi_total,phi_dyn,phi_aa,solid_angle"
    );
    let pops: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(pops.len(), 5);
    let spread = pops.iter().fold(0.0f64, |m, p| m.max((p - pops[0]).abs()));
    assert!(spread < 1e-9, "{spread}");
}

#[test]
fn sweep_free_fringes_fit_period() {
    let dir = tempdir("fringe");
    let out = nvpl(
        &[
            "sweep",
            "free_fringes",
            "--grid",
            "0:10e-6:81",
            "--delta",
            "250e3",
            "--output",
            "ff",
        ],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("ff.json")).unwrap()).unwrap();
    let period = json["fit"]["period_s"].as_f64().unwrap();
    assert!((period * 250e3 - 1.0).abs() < 1e-3, "{period}");
}

#[test]
fn exported_builders_rerun_through_the_cli() {
    let dir = tempdir("export");
    assert!(nvpl(&["export-builders", "--output", "seqs"], &dir)
        .status
        .success());
    for name in ["nested_se", "seq1", "seq2", "seq3", "seq4"] {
        let path = dir.join("seqs").join(format!("{name}.seq"));
        assert!(path.exists(), "{name}.seq missing");
        let out = nvpl(
            &[
                "run",
                path.to_str().unwrap(),
                "--output",
                &format!("rerun_{name}"),
            ],
            &dir,
        );
        assert!(
            out.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn empty_sequence_is_a_single_bright_sample() {
    let dir = tempdir("empty");
    fs::write(dir.join("e.seq"), "sequence e { }\n").unwrap();
    let out = nvpl(&["run", "e.seq", "--output", "e"], &dir);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.join("e.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2); // header + one sample
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("e.json")).unwrap()).unwrap();
    assert_eq!(json["final_populations"]["zero"].as_f64().unwrap(), 1.0);
    assert_eq!(json["final_populations"]["plus1"].as_f64().unwrap(), 0.0);
}

#[test]
fn verify_exits_nonzero_while_criterion_4_is_red() {
    let dir = tempdir("verify");
    let out = nvpl(&["verify", "--output", "report"], &dir);
    // criterion 4's population form is a documented upstream inconsistency;
    // the suite reports it and the command signals failure
    assert!(!out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[FAIL] criterion  4"), "{stdout}");
    for i in [1, 2, 3, 5, 6, 7, 8, 9, 10, 11] {
        assert!(
            stdout.contains(&format!("[PASS] criterion {i:>2}")),
            "criterion {i} not passing:\n{stdout}"
        );
    }
}

#[test]
fn unknown_builder_rejected() {
    let dir = tempdir("unknown");
    let out = nvpl(&["sweep", "nope", "--grid", "0:1:3"], &dir);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown builder"));
}
