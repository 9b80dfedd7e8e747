mod common;

use std::io::Write;
use std::process::{Command, Stdio};

use kmn_sandpile::cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use kmn_sandpile::Configuration;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXAMPLE: &str = r#"{"m":7,"n":5,"a":[0,0,0,3,3,3],"sink":21,"b":[0,0,0,3,3]}"#;

fn kmn(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["kmn"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn rank_of_running_example() {
    let (code, out, _) = kmn(&["rank", "-i", "-"], EXAMPLE);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("rank: 12\n"), "{out}");
    assert!(out.contains("r-vector: 1 -2 -2 1 -2"));

    let (code, out, _) = kmn(&["rank", "-i", EXAMPLE, "--format", "json", "--proof", "--check"], "");
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rank"], 12);
    let f: Configuration = serde_json::from_value(v["proof"]["f"].clone()).unwrap();
    assert_eq!(f.degree().unwrap(), 13);
}

#[test]
fn missing_sink_is_a_usage_error() {
    let (code, _, err) = kmn(&["rank"], r#"{"m":2,"n":2,"a":[0],"b":[0,0]}"#);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("sink"), "{err}");
}

#[test]
fn malformed_input_and_flags() {
    assert_eq!(kmn(&["rank"], "{not json").0, EXIT_USAGE);
    assert_eq!(kmn(&["rank", "--format", "svg"], EXAMPLE).0, EXIT_USAGE);
    assert_eq!(kmn(&["nonsense"], "").0, EXIT_USAGE);
    assert_eq!(kmn(&["rank", "-i", "/no/such/file.json"], "").0, EXIT_USAGE);
    assert_eq!(kmn(&["--help"], "").0, EXIT_OK);
}

#[test]
fn overflow_is_a_domain_error() {
    let huge = format!(r#"{{"m":2,"n":2,"a":[{}],"sink":{},"b":[0,0]}}"#, i64::MAX, i64::MAX);
    let (code, _, err) = kmn(&["rank"], &huge);
    assert_eq!(code, EXIT_DOMAIN, "{err}");
}

#[test]
fn check_agrees_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let m = 1 + (rand::Rng::gen_range(&mut rng, 0..6));
        let n = 1 + (rand::Rng::gen_range(&mut rng, 0..6));
        let u = common::random_config(&mut rng, common::shape(m, n), -10, 30);
        let (code, _, err) = kmn(&["rank", "--check", "-i", &u.to_string()], "");
        assert_eq!(code, EXIT_OK, "{u}: {err}");
    }
}

#[test]
fn park_output_round_trips() {
    let input = "<0,1,2,3,3,3;5|2,4,4,6,6>";
    let (code, out, _) = kmn(&["park", "-i", input, "--format", "json"], "");
    assert_eq!(code, EXIT_OK);
    let parked: Configuration = serde_json::from_str(&out).unwrap();
    let (code, again, _) = kmn(&["park", "--format", "json"], &out);
    assert_eq!(code, EXIT_OK);
    assert_eq!(serde_json::from_str::<Configuration>(&again).unwrap(), parked);
    let original: Configuration = input.parse().unwrap();
    assert_eq!(parked.degree().unwrap(), original.degree().unwrap());
}

#[test]
fn sort_and_rvector() {
    let (code, out, _) = kmn(&["sort", "-i", "<2,0,2,2,0,0;3|4,4,0,0,4>"], "");
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "<0,0,0,2,2,2;3|0,0,4,4,4>\n");
    let (code, out, _) = kmn(&["rvector", "-i", "<0,0,0,3,3,3;*|0,0,0,3,3>"], "");
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "1 -2 -2 1 -2\n");
    let (code, out, _) = kmn(&["rvector", "--format", "json"], EXAMPLE);
    assert_eq!(code, EXIT_OK);
    assert_eq!(serde_json::from_str::<Vec<i64>>(&out).unwrap(), vec![1, -2, -2, 1, -2]);
}

#[test]
fn render_formats() {
    let (code, svg, _) = kmn(&["render", "--kind", "cylindric", "--format", "svg"], EXAMPLE);
    assert_eq!(code, EXIT_OK);
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches(r#"class="right""#).count(), 13);
    let (code, text, _) = kmn(&["render", "-i", "<0;*|0,0>"], "");
    assert_eq!(code, EXIT_OK);
    assert_eq!(text, "+----+BBBB+\n|    B    |\n+RRRR+----+\nR####G    |\n+GGGG+----+\n");
    let (_, again, _) = kmn(&["render", "-i", "<0;*|0,0>"], "");
    assert_eq!(again, text);
}

#[test]
fn enumerate_tables() {
    let (code, csv, _) = kmn(&["enumerate", "-m", "5", "-n", "3", "--table", "xy"], "");
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "ypara\\xpara,0,1,2,3,4,5,6,7,8,9,10");
    assert_eq!(lines[11], "0,15,35,57,75,89,97,102,104,105,105,105");
    let (code, csv, _) =
        kmn(&["enumerate", "-m", "5", "-n", "3", "--table", "degree-rank", "--dmin", "-3", "--dmax", "17"], "");
    assert_eq!(code, EXIT_OK);
    assert!(csv.lines().any(|l| l == "0,,,,1,3,8,15,27,39,49,48,35,,,,,,,,,"), "{csv}");
    let (code, json, _) = kmn(&["enumerate", "-m", "5", "-n", "3", "--format", "json"], "");
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["configurations"], 105);
    let (code, dump, _) = kmn(&["enumerate", "-m", "2", "-n", "2", "--format", "text", "--xymax", "2"], "");
    assert_eq!(code, EXIT_OK);
    assert!(dump.starts_with("x^0 y^0 w^0 h^0: "), "{dump}");
}

#[test]
fn verify_gf_passes() {
    let (code, out, _) = kmn(&["verify-gf", "--wmax", "4", "--hmax", "4", "--xymax", "6"], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("PASS"), "{out}");
    assert_eq!(kmn(&["verify-gf", "--wmax", "0"], "").0, EXIT_USAGE);
}

#[test]
fn bench_is_deterministic_in_shape() {
    let (code, out, _) = kmn(&["bench", "--sizes", "2000,4000", "--runs", "3", "--format", "csv"], "");
    assert!(code == EXIT_OK || code == EXIT_DOMAIN);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "m,n,m_plus_n,median_seconds,ratio");
    assert!(lines[1].starts_with("1000,1000,2000,"));
    assert_eq!(kmn(&["bench", "--sizes", "abc"], "").0, EXIT_USAGE);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kmn");
    let mut child = Command::new(bin)
        .args(["rank", "-i", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(EXAMPLE.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("rank: 12"));

    let status = Command::new(bin).arg("bogus").stderr(Stdio::null()).status().unwrap();
    assert_eq!(status.code(), Some(2));
}
