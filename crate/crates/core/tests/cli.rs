use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str], config: &str) -> (Output, PathBuf) {
    let cfg = dir.join(format!("config{}.json", args.join("_").replace('-', "")));
    std::fs::write(&cfg, config).unwrap();
    let out = dir.join(format!("out_{}", args.join("_")));
    let output = Command::new(env!("CARGO_BIN_EXE_pt-ssh-lab"))
        .args(&args[..1])
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(&args[1..])
        .output()
        .unwrap();
    (output, out)
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn empty_config_names_the_missing_field() {
    let dir = TempDir::new().unwrap();
    let (out, _) = run(dir.path(), &["spectrum"], "");
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("missing field `model`"), "{stderr}");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let (out, _) = run(dir.path(), &["spectrum"], r#"{"model":{"variant":"ssh_a","n_cells":4},"bogus":1}"#);
    assert_eq!(out.status.code(), Some(1));
    let (out, _) = run(
        dir.path(),
        &["fit-decay"],
        r#"{"model":{"variant":"ssh_c","n_cells":36,"delta":0.5,"gamma":1.0,"alpha_prime":"b"},"n_values":[1,2,3,4]}"#,
    );
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    // output path blocked by a regular file
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "x").unwrap();
    let cfg = dir.path().join("ok.json");
    std::fs::write(&cfg, r#"{"model":{"variant":"ssh_a","n_cells":4}}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pt-ssh-lab"))
        .args(["spectrum", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(blocker.join("sub"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let out = Command::new(env!("CARGO_BIN_EXE_pt-ssh-lab")).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_pt-ssh-lab")).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn theta_sweep_has_two_zero_modes_in_the_nontrivial_window() {
    let dir = TempDir::new().unwrap();
    let (out, root) = run(
        dir.path(),
        &["spectrum"],
        r#"{"model":{"variant":"ssh_a","n_cells":100,"delta":0.5},"sweep":{"param":"theta","from":-3.141592653589793,"to":3.141592653589793,"steps":201}}"#,
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(root.join("spectrum.csv")).unwrap();
    assert!(text.starts_with("theta,index,re_e,im_e,ipr,peak_site,boundary_weight,class\n"));
    let table = rows(&root.join("spectrum.csv"));
    assert_eq!(table.len(), 201 * 200);
    for block in table.chunks(200) {
        let theta = num(&block[0][0]);
        let zeros = block.iter().filter(|r| num(&r[2]).hypot(num(&r[3])) < 1e-8).count();
        // the edge pair splits by ~ξ^N, so near |θ| = π/2 the chain is too short
        let xi = (1.0 - 0.5 * theta.cos()) / (1.0 + 0.5 * theta.cos());
        if theta.cos() > 0.0 && xi.powi(100) < 1e-10 {
            assert_eq!(zeros, 2, "theta = {theta}");
        } else if theta.cos() < 0.0 {
            assert_eq!(zeros, 0, "theta = {theta}");
        }
    }
}

#[test]
fn imaginary_parts_only_inside_broken_windows() {
    let dir = TempDir::new().unwrap();
    let (out, root) = run(
        dir.path(),
        &["spectrum"],
        r#"{"model":{"variant":"ssh_c","n_cells":50,"delta":0.5,"gamma":0.6,"alpha_prime":"b"},"sweep":{"param":"theta","from":-3.141592653589793,"to":3.141592653589793,"steps":41}}"#,
    );
    assert!(out.status.success());
    let table = rows(&root.join("spectrum.csv"));
    let broken = |theta: f64| {
        table
            .iter()
            .filter(|r| (num(&r[0]) - theta).abs() < 1e-12)
            .any(|r| num(&r[3]).abs() > 1e-8)
    };
    // the unbroken windows have shrunk to a band around |θ| = π/2
    let pi = std::f64::consts::PI;
    for k in 0..=40 {
        let theta = -pi + pi * k as f64 / 20.0;
        let t = theta.abs() / pi;
        if (0.3..=0.7).contains(&t) {
            assert!(!broken(theta), "theta = {theta}");
        } else if t <= 0.2 || t >= 0.8 {
            assert!(broken(theta), "theta = {theta}");
        }
    }
}

#[test]
fn edge_profiles_live_on_one_sublattice() {
    let dir = TempDir::new().unwrap();
    let (out, root) = run(
        dir.path(),
        &["profile"],
        r#"{"model":{"variant":"ssh_a","n_cells":100,"delta":0.5,"theta":0.0},"mode":{"class":"edge"}}"#,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut files: Vec<PathBuf> = std::fs::read_dir(&root).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 2);
    let mut left_seen = false;
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        assert!(text.starts_with("site,n_density\n"));
        let density: Vec<(usize, f64)> = rows(&f).iter().map(|r| (r[0].parse().unwrap(), num(&r[1]))).collect();
        let total: f64 = density.iter().map(|d| d.1).sum();
        assert!((total - 1.0).abs() <= 1e-10);
        if density[0].1 > 0.5 {
            left_seen = true;
            // left edge mode: A sublattice only, i.e. odd flat indices
            assert!(density.iter().filter(|(s, _)| s % 2 == 0).all(|(_, d)| *d <= 1e-20));
        }
    }
    assert!(left_seen);
}

#[test]
fn bound_profiles_follow_the_defects() {
    let dir = TempDir::new().unwrap();
    let (out, root) = run(
        dir.path(),
        &["profile"],
        r#"{"model":{"variant":"ssh_c","n_cells":50,"delta":0.5,"theta":0.0,"gamma":3.0,"n":15,"alpha_prime":"b"},"mode":{"class":"bound"}}"#,
    );
    assert!(out.status.success());
    let files: Vec<PathBuf> = std::fs::read_dir(&root).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 4);
    for f in files {
        let density: Vec<f64> = rows(&f).iter().map(|r| num(&r[1])).collect();
        let peak = (0..density.len()).max_by(|&a, &b| density[a].total_cmp(&density[b])).unwrap();
        let cell = peak / 2 + 1;
        assert!(cell.abs_diff(15) <= 1 || cell.abs_diff(36) <= 1, "peak cell {cell}");
    }
}

#[test]
fn recovery_reports_invalid_cells() {
    let dir = TempDir::new().unwrap();
    // trivial regime: no edge pair exists, every cell is invalid
    let (out, root) = run(
        dir.path(),
        &["recovery"],
        r#"{"model":{"variant":"ssh_c","n_cells":4,"delta":0.5,"theta":2.5},"n_cells":{"from":4,"to":6,"steps":2},"gamma":{"from":0.0,"to":1.0,"steps":2}}"#,
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(root.join("recovery.csv")).unwrap();
    assert!(text.starts_with("n_cells,gamma,re_split,im_split\n"));
    assert!(text.contains(",nan,nan"));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(root.join("recovery_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["warnings"], 4);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"model":{"variant":"ssh_c","n_cells":20,"delta":0.5},"theta":{"from":-3.0,"to":3.0,"steps":9},"gamma":{"from":0.0,"to":2.0,"steps":6}}"#;
    let read = |root: &Path| {
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(root)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    let (a, ra) = run(dir.path(), &["phase-diagram", "--svg", "--threads", "1"], config);
    let (b, rb) = run(dir.path(), &["phase-diagram", "--svg", "--threads", "3"], config);
    let (c, rc) = run(dir.path(), &["phase-diagram", "--svg", "--threads", "8"], config);
    assert!(a.status.success() && b.status.success() && c.status.success());
    assert_eq!(read(&ra), read(&rb));
    assert_eq!(read(&rb), read(&rc));
    let svg = std::fs::read_to_string(ra.join("phase_diagram.svg")).unwrap();
    assert_eq!(svg.matches("<rect").count(), 2 + 9 * 6 + 7);
}

#[test]
fn phase_diagram_is_mirror_symmetric_in_theta() {
    let dir = TempDir::new().unwrap();
    let (out, root) = run(
        dir.path(),
        &["phase-diagram"],
        r#"{"model":{"variant":"ssh_c","n_cells":24,"delta":0.5},"theta":{"from":-3.141592653589793,"to":3.141592653589793,"steps":21},"gamma":{"from":0.0,"to":2.0,"steps":5}}"#,
    );
    assert!(out.status.success());
    let table = rows(&root.join("phase_diagram.csv"));
    assert_eq!(table.len(), 21 * 5);
    for i in 0..21 {
        for j in 0..5 {
            let a = &table[i * 5 + j];
            let b = &table[(20 - i) * 5 + j];
            assert_eq!(a[2], b[2], "theta {} vs {}", a[0], b[0]);
            assert_eq!(a[3], b[3]);
        }
    }
}
