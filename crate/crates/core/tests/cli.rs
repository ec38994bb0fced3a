use std::path::Path;
use std::process::{Command, Output};

fn qdba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdba-sim")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("exp.cfg");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "n = 3\nt = 1\nm = 16\nprofile = logical\np0 = 1\nruns = 2\nshots = 5\n");
    let out = dir.path().join("out");
    let o = qdba(&["run", "--config", &cfg, "--seed", "3", "--out", out.to_str().unwrap(), "--per-shot"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let metrics = std::fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert_eq!(metrics.lines().count(), 2);
    assert!(metrics.starts_with("profile,n,t,m,p0,px,py,pz,alpha_db_per_km,length_km,t1_s,t2_s,transit_s,commander_loyal,shots,lieutenant_error_rate,shot_error_rate,abort_rate,wrong_value_rate\n"));
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"seed\": 3"));
    assert!(manifest.contains(env!("CARGO_PKG_VERSION")));
    // One row per lieutenant, traitor included.
    assert_eq!(std::fs::read_to_string(out.join("shots.csv")).unwrap().lines().count(), 1 + 10 * 2);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["n = 11\nt = 11\nm = 4\n", "n = 3\nm = 4\nwat = 1\n", "profile = superconducting\nn = 3\nm = 4\nt1_s = 1\nt2_s = 3\ntransit_s = 0\n"] {
        let cfg = write_config(dir.path(), text);
        let o = qdba(&["run", "--config", &cfg]);
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("config error"));
    }
    let o = qdba(&["run", "--config", "/nonexistent/exp.cfg"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qdba(&["sweep", "--param", "m=0", "--set", "n=3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "n = 3\nm = 4\nruns = 1\nshots = 1\n");
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = qdba(&["run", "--config", &cfg, "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ternary_emits_the_grid() {
    let o = qdba(&["ternary", "--p0", "0.975", "--resolution", "13", "--set", "shots=1", "--set", "runs=1", "--set", "m=16"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rows = text.lines();
    let header: Vec<_> = rows.next().unwrap().split(',').collect();
    let (px, pz) = (header.iter().position(|&h| h == "px").unwrap(), header.iter().position(|&h| h == "pz").unwrap());
    let rows: Vec<Vec<&str>> = rows.map(|r| r.split(',').collect()).collect();
    assert_eq!(rows.len(), 105);
    assert_eq!(rows[0][pz], "0.025");
    assert_eq!(rows[104][px], "0.025");
}

#[test]
fn sweep_expands_ranges() {
    let o = qdba(&["sweep", "--param", "m=16:64:16", "--param", "n=4", "--set", "shots=2", "--set", "runs=1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let ms: Vec<_> = text.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().to_string()).collect();
    assert_eq!(ms, ["16", "32", "48", "64"]);
}

#[test]
fn worker_count_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "n = 4\nt = 0,1\nm = 24\npx = 0, 0.02\npz = 0.01\nruns = 2\nshots = 4\nseed = 11\n");
    let mut bytes = Vec::new();
    for w in ["1", "3"] {
        let out = dir.path().join(format!("w{w}"));
        let o = qdba(&["run", "--config", &cfg, "--workers", w, "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        bytes.push((std::fs::read(out.join("metrics.csv")).unwrap(), std::fs::read(out.join("manifest.json")).unwrap()));
    }
    assert_eq!(bytes[0], bytes[1]);
}
