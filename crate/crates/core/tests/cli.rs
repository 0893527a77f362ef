use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn flldp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flldp"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn generate_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let gen = flldp(
        &[
            "generate",
            "--process",
            "poisson",
            "--n",
            "150",
            "--clients",
            "const:2",
            "--seed",
            "4",
            "--out",
            "inst.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&gen), 0, "{}", String::from_utf8_lossy(&gen.stderr));

    let inst: Value =
        serde_json::from_slice(&fs::read(dir.path().join("inst.json")).unwrap()).unwrap();
    assert_eq!(inst["version"], 1);
    assert_eq!(inst["metric"]["kind"], "euclidean-2d");
    let n = inst["clients"].as_array().unwrap().len();
    assert!(inst["clients"].as_array().unwrap().iter().all(|c| c == 2));

    for algo in ["optimal", "margin", "reconnection"] {
        let out = flldp(
            &[
                "solve",
                "--instance",
                "inst.json",
                "--algo",
                algo,
                "--seed",
                "1",
                "--out",
                "sol.json",
            ],
            dir.path(),
        );
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let sol: Value =
            serde_json::from_slice(&fs::read(dir.path().join("sol.json")).unwrap()).unwrap();
        let assignment = sol["assignment"].as_array().unwrap();
        assert_eq!(assignment.len(), n);
        let caps = sol["capacities"].as_object().unwrap();
        for h in assignment {
            assert!(caps.contains_key(&h.as_u64().unwrap().to_string()));
        }
        if algo == "optimal" {
            assert!(sol.get("trace").is_none());
            continue;
        }
        let trace = sol["trace"].as_array().unwrap();
        assert_eq!(trace.len(), caps.len());
        let connected: u64 = trace.iter().map(|t| t["connected"].as_u64().unwrap()).sum();
        assert_eq!(connected as usize, n);
    }
}

#[test]
fn generate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        assert_eq!(
            code(&flldp(
                &["generate", "--n", "200", "--seed", "9", "--out", name],
                dir.path()
            )),
            0
        );
    }
    assert_eq!(
        fs::read(dir.path().join("a.json")).unwrap(),
        fs::read(dir.path().join("b.json")).unwrap()
    );
}

#[test]
fn oracle_and_density() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("tiny.json"),
        r#"{"version":1,"metric":{"kind":"matrix","distances":[[0,1],[1,0]]},"facility_costs":[1,5],"clients":[1,2]}"#,
    )
    .unwrap();
    let out = flldp(&["oracle", "--instance", "tiny.json"], dir.path());
    assert_eq!(code(&out), 0);
    let cost: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cost["total"], 5.0);

    let out = flldp(
        &[
            "check-density",
            "--instance",
            "tiny.json",
            "--delta",
            "1",
            "--gamma",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("2 of 2"));
}

#[test]
fn sweep_from_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/realworld_standin.csv");
    let out = flldp(
        &[
            "sweep",
            "--kind",
            "delta",
            "--grid",
            "0,0.1,0.1",
            "--trials",
            "2",
            "--realworld",
            table.to_str().unwrap(),
            "--algos",
            "optimal,reconnection",
            "--out",
            "rw.csv",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("rw.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert!(lines[1..]
        .iter()
        .all(|l| l.split(',').nth(5) == Some("431")));
}

#[test]
fn timing_column_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--trials", "1", "--n", "100", "--algos", "optimal"];
    assert_eq!(
        code(&flldp(
            &[&args[..], &["--out", "plain.csv"]].concat(),
            dir.path()
        )),
        0
    );
    assert_eq!(
        code(&flldp(
            &[&args[..], &["--timing", "--out", "timed.csv"]].concat(),
            dir.path()
        )),
        0
    );
    let last = |name: &str| {
        let s = fs::read_to_string(dir.path().join(name)).unwrap();
        s.lines()
            .nth(1)
            .unwrap()
            .rsplit(',')
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(last("plain.csv"), "");
    assert!(last("timed.csv").parse::<f64>().unwrap() >= 0.0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&flldp(&["solve"], d)), 2);
    assert_eq!(code(&flldp(&["generate", "--process", "hexagonal"], d)), 2);
    assert_eq!(code(&flldp(&["generate", "--gamma", "0.5"], d)), 2);
    assert_eq!(
        code(&flldp(&["sweep", "--grid", "1,0,0.1", "--out", "x.csv"], d)),
        2
    );
    assert_eq!(code(&flldp(&["solve", "--instance", "missing.json"], d)), 3);

    fs::write(d.join("garbage.json"), "{not json").unwrap();
    assert_eq!(
        code(&flldp(&["oracle", "--instance", "garbage.json"], d)),
        3
    );

    let out = flldp(
        &[
            "generate",
            "--n",
            "50",
            "--clients",
            "bern:1,gauss:-50,1,0,8",
            "--out",
            "g.json",
        ],
        d,
    );
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&flldp(&["--help"], d)), 0);
}
