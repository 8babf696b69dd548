use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn orlicz(config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz"))
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// The number after `name = ` on stdout.
fn printed(out: &Output, name: &str) -> f64 {
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text
        .lines()
        .find(|l| l.starts_with(&format!("{name} = ")))
        .unwrap_or_else(|| panic!("no '{name}' in {text}"));
    line.split_whitespace().nth(2).unwrap().parse().unwrap()
}

fn sweep_rows(dir: &Path) -> Vec<Vec<f64>> {
    let mut r = csv::Reader::from_path(dir.join("sweep.csv")).unwrap();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            [0, 2, 3, 4]
                .iter()
                .map(|&i| rec[i].parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

#[test]
fn compute_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("compute-ball-volume.toml", "volume", 4.0 * PI / 3.0),
        ("compute-dual-mixed.toml", "dual-mixed", 8.0 * PI),
        ("compute-square-vrad.toml", "vrad", (4.0 / PI).sqrt()),
    ];
    for (file, name, expected) in cases {
        let out = orlicz(&configs().join(file), &dir.path().join(name), &[]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = printed(&out, name);
        assert!(
            (v - expected).abs() < 1e-4 * expected,
            "{name}: {v} vs {expected}"
        );
        assert!(dir.path().join(name).join("record.toml").exists());
        assert!(dir.path().join(name).join("manifest.toml").exists());
    }
}

#[test]
fn estimate_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = orlicz(
        &configs().join("estimate-geominimal-ball.toml"),
        &dir.path().join("g"),
        &[],
    );
    assert!(out.status.success());
    assert!((printed(&out, "value") - 2.0 * PI).abs() < 1e-2 * 2.0 * PI);
    assert!(String::from_utf8_lossy(&out.stdout).contains("converged = true"));
    let trace = std::fs::read_to_string(dir.path().join("g/trace.csv")).unwrap();
    assert!(trace.starts_with("evaluation,restart,objective,step"));
    let cand = std::fs::read_to_string(dir.path().join("g/candidate.csv")).unwrap();
    assert_eq!(cand.lines().count(), 257);

    // Constant φ ≡ 2: 2·n|K| with no evaluations.
    let out = orlicz(
        &configs().join("estimate-constant.toml"),
        &dir.path().join("c"),
        &[],
    );
    assert!(out.status.success());
    let v = printed(&out, "value");
    let vol_cfg = write(
        dir.path(),
        "vol.toml",
        "command = \"compute\"\n[bodies.star]\nkind = \"random\"\nseed = 11\nroughness = 0.3\nsymmetric = true\n\
         [compute]\nfunctional = \"volume\"\nk = \"star\"\n",
    );
    let vol = printed(&orlicz(&vol_cfg, &dir.path().join("v"), &[]), "volume");
    assert!((v - 4.0 * vol).abs() < 1e-9 * v);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("method = closed") && text.contains("evaluations = 0"),
        "{text}"
    );
}

#[test]
fn contradicting_sense_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "command = \"estimate\"\n[bodies.disk]\nkind = \"ball\"\n[functions.inv]\nkind = \"power\"\np = -1.0\n\
         [estimate]\ntarget = \"affine\"\nsense = \"sup\"\nphi = \"inv\"\nk = \"disk\"\n",
    );
    let out = orlicz(&cfg, &dir.path().join("o"), &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = orlicz(
        &configs().join("verify-all.toml"),
        &dir.path().join("a"),
        &["--checks", "no-such-check"],
    );
    assert_eq!(unknown.status.code(), Some(2));
    let empty = write(
        dir.path(),
        "empty.toml",
        "command = \"sweep\"\n[sweep]\nparameter = \"p\"\nvalues = []\nquantity = \"sp-ratio\"\nk = \"x\"\n",
    );
    assert_eq!(
        orlicz(&empty, &dir.path().join("b"), &[]).status.code(),
        Some(2)
    );
    let malformed = write(
        dir.path(),
        "bad.toml",
        "command = \"compute\"\n[grid]\ndimension = \"two\"\n",
    );
    let out = orlicz(&malformed, &dir.path().join("c"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn verify_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = orlicz(
        &configs().join("verify-all.toml"),
        dir.path(),
        &[
            "--checks",
            "dual-orlicz-minkowski,7",
            "--trials",
            "12",
            "--seed",
            "1",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let mut r = csv::Reader::from_path(dir.path().join("trials.csv")).unwrap();
    let headers: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        ["check", "seed", "trial", "case", "lhs", "rhs", "margin", "verdict"]
    );
    assert_eq!(r.records().count(), 24);
    let summary = std::fs::read_to_string(dir.path().join("summary.toml")).unwrap();
    assert!(summary.contains("passed = 2"));
}

#[test]
fn sweeps_follow_the_expected_trends() {
    let dir = tempfile::tempdir().unwrap();

    let out = orlicz(
        &configs().join("sweep-sp-ratio.toml"),
        &dir.path().join("p"),
        &[],
    );
    assert!(out.status.success());
    for row in sweep_rows(&dir.path().join("p")) {
        let (p, ratio, reference) = (row[0], row[1], row[3]);
        // ≥ for p < 0, ≤ for 0 < p < 2.
        if p < 0.0 {
            assert!(ratio >= reference, "p={p}");
        } else {
            assert!(ratio <= reference, "p={p}");
        }
    }

    let out = orlicz(
        &configs().join("sweep-resolution.toml"),
        &dir.path().join("r"),
        &[],
    );
    assert!(out.status.success());
    let errors: Vec<f64> = sweep_rows(&dir.path().join("r"))
        .iter()
        .map(|r| (r[1] - r[3]).abs())
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");

    let out = orlicz(
        &configs().join("sweep-roughness.toml"),
        &dir.path().join("s"),
        &[],
    );
    assert!(out.status.success());
    for row in sweep_rows(&dir.path().join("s")) {
        assert!(row[1] <= 1.0 + 1e-3);
    }
}
