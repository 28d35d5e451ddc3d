mod common;

use std::fs;

use common::{fixture, query, sis, sis_with_env, KNOWN};

fn mutated_fixture(dir: &tempfile::TempDir) -> String {
    let text = fs::read_to_string(fixture()).unwrap();
    let path = dir.path().join("mutated.ttl");
    fs::write(&path, text.replace("DINEN61360:value 0.2 .", "DINEN61360:value 0.1 .")).unwrap();
    path.to_string_lossy().into_owned()
}

fn plan_args<'a>(extra: &[&'a str], file: &'a str) -> Vec<&'a str> {
    let mut args = vec!["plan", "--goal", "ex:LocalFillTime", "--known", KNOWN];
    args.extend_from_slice(extra);
    args.push(file);
    args
}

#[test]
fn validate_fixture_is_clean() {
    let r = sis(&["validate", &fixture()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("0 errors"));
}

#[test]
fn validate_reports_broken_influence_sum() {
    let dir = tempfile::tempdir().unwrap();
    let r = sis(&["validate", &mutated_fixture(&dir)]);
    assert_eq!(r.code, 1);
    let v3: Vec<_> = r.stdout.lines().filter(|l| l.starts_with("V3 ")).collect();
    assert_eq!(v3.len(), 1, "{}", r.stdout);
    assert!(v3[0].contains("sum to 0.9"));
    assert!(r.stdout.contains("1 error,"));
}

#[test]
fn parse_errors_carry_file_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.ttl");
    fs::write(&path, "@prefix ex: <http://e.org/> .\nex:a ex:b ex:c ;\n  ex:d .\n").unwrap();
    let r = sis(&["validate", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    let expected = format!("{}:3:", path.display());
    assert!(r.stderr.contains(&expected), "{}", r.stderr);
}

#[test]
fn missing_file_is_a_usage_error() {
    let r = sis(&["validate", "/nonexistent/file.ttl"]);
    assert_eq!(r.code, 2);
}

#[test]
fn simulations_for_output_query_returns_two_rows() {
    let r = sis(&["query", &query("simulations-for-output.rq"), &fixture()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<_> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 3, "{}", r.stdout);
    assert!(lines[1].contains("ex:InfiltrationSimulationDL"));
    assert!(lines[2].contains("ex:InfiltrationSimulationTPDL"));
}

#[test]
fn inputs_query_returns_three_rows() {
    let r = sis(&["query", &query("inputs.rq"), &fixture()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().count(), 4, "{}", r.stdout);
}

#[test]
fn optional_is_rejected() {
    let r = sis(&["query", &query("optional-unsupported.rq"), &fixture()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("unsupported: OPTIONAL"), "{}", r.stderr);
}

#[test]
fn inspection_commands() {
    let f = fixture();
    let r = sis(&["capabilities", "--output", "ex:LocalFillTime", &f]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().count(), 3);

    let r = sis(&["criteria", "--sim", "ex:InfiltrationSimulationTPDL", &f]);
    assert!(r.stdout.contains("ex:ResultAccuracy  0.8"), "{}", r.stdout);

    let r = sis(&["influences", "--sim", "ex:InfiltrationSimulationDL", &f]);
    let values: Vec<&str> = r
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    assert_eq!(values, ["0.4", "0.2", "0.4"]);

    let r = sis(&["inputs", "--sim", "ex:Geometry", &f]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not a simulation"));
}

#[test]
fn plan_lists_draping_first() {
    let f = fixture();
    let r = sis(&plan_args(&[], &f));
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("goal ex:LocalFillTime: 2 plans, 2 feasible"));
    let firsts: Vec<_> = r.stdout.lines().filter(|l| l.trim_start().starts_with("1. ")).collect();
    assert_eq!(firsts.len(), 2);
    assert!(firsts.iter().all(|l| l.contains("ex:KinematicDraping")));
}

#[test]
fn requirement_marks_dl_infeasible() {
    let f = fixture();
    let r = sis(&plan_args(&["--require", "ex:ResultAccuracy>=0.8"], &f));
    assert_eq!(r.code, 0);
    let headers: Vec<_> = r.stdout.lines().filter(|l| l.starts_with("plan ")).collect();
    assert!(headers[0].contains("feasible"));
    let first_block = r.stdout.split("\nplan 2").next().unwrap();
    assert!(first_block.contains("ex:InfiltrationSimulationTPDL"));
    assert!(headers[1].contains("infeasible: ex:ResultAccuracy 0.7 at ex:InfiltrationSimulationDL"));

    let r = sis(&plan_args(&["--require", "ex:ResultAccuracy>=0.9"], &f));
    assert_eq!(r.code, 1, "nothing is feasible");
}

#[test]
fn known_goal_gives_the_empty_plan() {
    let r = sis(&["plan", "--goal", "ex:Geometry", "--known", "ex:Geometry", &fixture()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("nothing to run"));
}

#[test]
fn unreachable_goal_explains_the_chain() {
    let r = sis(&["plan", "--goal", "ex:LocalFillTime", &fixture()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("is unreachable"));
    assert!(r.stdout.contains("ex:LocalFillTime requires"), "{}", r.stdout);
}

#[test]
fn bad_flags_are_usage_errors() {
    let f = fixture();
    for extra in [
        ["--require", "ex:ResultAccuracy=0.8"],
        ["--weight", "ex:ResultAccuracy=-1"],
        ["--weight", "nope:X=1"],
    ] {
        let r = sis(&plan_args(&extra, &f));
        assert_eq!(r.code, 2, "{extra:?}: {}", r.stderr);
    }
    let r = sis(&["validate", "--format", "dot", &f]);
    assert_eq!(r.code, 2);
    let r = sis(&["plan", "--goal", "ex:LocalFillTime"]);
    assert_eq!(r.code, 2, "an input file is required");
}

#[test]
fn whatif_feasible_counts_drop_at_point_eight() {
    let f = fixture();
    let r = sis(&[
        "whatif",
        "--goal",
        "ex:LocalFillTime",
        "--known",
        KNOWN,
        "--sweep",
        "ex:ResultAccuracy=0.6:0.9:0.1",
        &f,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let counts: Vec<&str> = r
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(2).unwrap())
        .collect();
    assert_eq!(counts, ["2", "2", "1", "0"]);
}

#[test]
fn whatif_edge_cases() {
    let f = fixture();
    let base = ["whatif", "--goal", "ex:LocalFillTime", "--known", KNOWN];
    let run = |sweep: &str| {
        let mut args = base.to_vec();
        args.extend(["--sweep", sweep, &f]);
        sis(&args)
    };
    let r = run("ex:ResultAccuracy=0.9:0.6:0.1");
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().count(), 1, "header only");

    let r = run("ex:Maturity=0.1:0.3:0.1");
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("warning"));
    let rows: Vec<_> = r
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().skip(2).collect::<Vec<_>>())
        .collect();
    assert!(rows.windows(2).all(|w| w[0] == w[1]), "{}", r.stdout);

    assert_eq!(run("ex:ResultAccuracy=0.1:0.3:0").code, 2);
    assert_eq!(run("ex:ResultAccuracy=0.1:0.3").code, 2);
}

#[test]
fn files_merge_and_prefix_conflicts_fail() {
    let dir = tempfile::tempdir().unwrap();
    let extra = dir.path().join("extra.ttl");
    fs::write(
        &extra,
        "@prefix ex: <http://www.hsu-hh.de/aut/ontologies/sis-example#> .\n\
         @prefix VDI3633: <http://www.w3id.org/hsu-aut/VDI3633#> .\n\
         ex:Extra a VDI3633:Data .\n",
    )
    .unwrap();
    let r = sis(&["validate", &fixture(), extra.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);

    let clash = dir.path().join("clash.ttl");
    fs::write(&clash, "@prefix ex: <http://other.org/> .\nex:a ex:b ex:c .\n").unwrap();
    let r = sis(&["validate", &fixture(), clash.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("prefix 'ex'"), "{}", r.stderr);
}

#[test]
fn prefixes_from_environment_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let defaults = dir.path().join("prefixes.ttl");
    fs::write(
        &defaults,
        "@prefix rtm: <http://www.hsu-hh.de/aut/ontologies/sis-example#> .\n",
    )
    .unwrap();
    let f = fixture();
    let args = ["capabilities", "--output", "rtm:LocalFillTime", f.as_str()];
    assert_eq!(sis(&args).code, 2);
    let r = sis_with_env(&args, &[("SIS_PREFIXES", defaults.to_str().unwrap())]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().count(), 3);

    let r = sis(&[
        "capabilities",
        "--prefix",
        "m=http://www.hsu-hh.de/aut/ontologies/sis-example#",
        "--output",
        "m:LocalFillTime",
        &f,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plans.dot");
    let f = fixture();
    let r = sis(&plan_args(&["--format", "dot", "--out", path.to_str().unwrap()], &f));
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let dot = fs::read_to_string(path).unwrap();
    assert_eq!(dot.matches("digraph ").count(), 2);
}
