use melonforge::cli::{run_args, EXIT_BUDGET, EXIT_USAGE};
use melonforge::reduction::insert_melon;
use melonforge::{ColoredGraph, GraphRecord, Root};

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run_args(args.iter().copied());
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn count_by_degree() {
    assert_eq!(ok(&["count", "--dim", "3", "--k", "2", "--by-degree"]), "0: 4\n1: 3\ntotal: 7\n");
}

#[test]
fn lp_two_optima() {
    assert_eq!(ok(&["lp", "--dim", "6", "--degree", "12"]), "beta = 5\n(x, y) = (0, 2)\n(x, y) = (3, 0)\n");
    assert_eq!(ok(&["lp", "--dim", "7", "--degree", "1"]), "infeasible\n");
}

#[test]
fn series_with_closed_form() {
    let out = ok(&["series", "--dim", "3", "--degree", "1", "--order", "4", "--closed-form"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "3z^2 + 36z^3 + 366z^4 + O(z^5)");
    assert_eq!(lines[1], "closed form: 3z^2 + 36z^3 + 363z^4 + O(z^5)");
    assert_eq!(lines[2], "differs at: [4]");
}

#[test]
fn exit_codes() {
    let (code, _, err) = run_args(["count", "--dim", "3", "--k", "5", "--budget", "100"]);
    assert_eq!(code, EXIT_BUDGET, "{err}");
    assert_eq!(run_args(["count", "--dim", "3"]).0, EXIT_USAGE);
    assert_eq!(run_args(["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run_args(["double-scaling", "--dim", "7", "--N", "10", "--z", "0.01"]).0, EXIT_USAGE);
    assert_eq!(run_args(["series", "--dim", "3", "--degree", "2", "--order", "3", "--closed-form"]).0, EXIT_USAGE);
}

#[test]
fn json_lines_are_records() {
    let out = ok(&["--format", "json", "count", "--dim", "3", "--k", "3", "--by-degree"]);
    let mut total = 0u64;
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        match v["kind"].as_str().unwrap() {
            "count" => total += v["count"].as_str().unwrap().parse::<u64>().unwrap(),
            "total" => assert_eq!(v["count"], "97"),
            other => panic!("unexpected record {other}"),
        }
    }
    assert_eq!(total, 97);
    let schemes = ok(&["--format", "json", "schemes", "--dim", "3", "--degree", "1", "--k-max", "3"]);
    assert!(schemes.lines().any(|l| l.contains("\"kind\":\"scheme\"")));
}

#[test]
fn deterministic_and_worker_independent() {
    let runs = [
        vec!["--workers", "1", "count", "--dim", "4", "--k", "3", "--by-degree"],
        vec!["--workers", "4", "count", "--dim", "4", "--k", "3", "--by-degree"],
    ];
    assert_eq!(ok(&runs[0]), ok(&runs[1]));
    let s1 = ok(&["--workers", "1", "schemes", "--dim", "3", "--degree", "1", "--k-max", "4"]);
    let s4 = ok(&["--workers", "3", "schemes", "--dim", "3", "--degree", "1", "--k-max", "4"]);
    assert_eq!(s1, s4);
    assert_eq!(s1, ok(&["--workers", "1", "schemes", "--dim", "3", "--degree", "1", "--k-max", "4"]));
}

#[test]
fn check_passes() {
    let out = ok(&["check", "--dim", "3", "--k-max", "3"]);
    assert!(out.lines().all(|l| l.ends_with(" 0 violations")), "{out}");
}

#[test]
fn reduce_file() {
    let dir = std::env::temp_dir().join(format!("melonforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut g = ColoredGraph::square(3, 1);
    g = insert_melon(&g, Root::new(0, 1), false);
    g = insert_melon(&g, Root::new(2, 3), true);
    let input = dir.join("g.json");
    let output = dir.join("core.json");
    std::fs::write(&input, serde_json::to_string(&GraphRecord::from(&g)).unwrap()).unwrap();
    let out = ok(&["reduce", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert!(out.contains("degree: 1\n") && out.contains("core k: 2\n") && out.contains("melonic: false\n"), "{out}");
    let core: GraphRecord = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(core.validate().unwrap().degree(), 1);
    std::fs::write(&input, "{\"dim\": 3}").unwrap();
    assert_eq!(run_args(["reduce", "--input", input.to_str().unwrap()]).0, EXIT_USAGE);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn double_scaling_report() {
    let out = ok(&["double-scaling", "--dim", "3", "--N", "1000", "--z", "0.05"]);
    assert!(out.contains("z1: 3455757/32768000"), "{out}");
}
