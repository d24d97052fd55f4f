use kgen::cli::{run_with, EXIT_CONFIG, EXIT_FAIL, EXIT_GUARD, EXIT_PASS};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kgen").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf-8 stdout"),
        String::from_utf8(err).expect("utf-8 stderr"),
    )
}

fn run_bytes(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kgen").chain(args.iter().copied());
    (run_with(argv, &mut out, &mut err), out)
}

/// Product in `GF(2^8)` modulo `x^8 + x^4 + x^3 + x + 1`.
fn gf256_mul(a: u64, b: u64) -> u64 {
    let mut z = 0u64;
    for i in 0..8 {
        if (b >> i) & 1 == 1 {
            z ^= a << i;
        }
    }
    for bit in (8..16).rev() {
        if (z >> bit) & 1 == 1 {
            z ^= 0x11b << (bit - 8);
        }
    }
    z
}

#[test]
fn gen_hex_matches_golden() {
    let (code, out, _) = run(&[
        "gen", "--field", "gfp:5", "--kind", "horner", "--k", "2", "--seed", "01,02", "--count",
        "5", "--header",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, include_str!("golden/gen_gfp5_horner.hex"));
    // 1 + 2x at x = 0..4 over GF(5)
    let values: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(values, ["01", "03", "00", "02", "04"]);
}

#[test]
fn gen_csv_matches_golden_and_pointwise_oracle() {
    let (code, out, _) = run(&[
        "gen",
        "--field",
        "gf2w:8",
        "--kind",
        "fft-batch",
        "--k",
        "4",
        "--seed",
        "01,02,03,04",
        "--count",
        "6",
        "--format",
        "csv",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, include_str!("golden/gen_gf256_fft.csv"));
    // Batch 0 covers points 0..4, batch 1 the coset shifted by 4.
    let coeffs = [1u64, 2, 3, 4];
    for (n, line) in out.lines().skip(1).enumerate() {
        let x = n as u64;
        let expected = coeffs.iter().rev().fold(0, |acc, &a| gf256_mul(acc, x) ^ a);
        assert_eq!(line, format!("{n},{expected}"));
    }
}

#[test]
fn gen_bin_is_little_endian_minimal_width() {
    let (code, out) = run_bytes(&[
        "gen",
        "--field",
        "gfp:257",
        "--kind",
        "horner",
        "--k",
        "2",
        "--seed",
        "0001,0002",
        "--count",
        "3",
        "--format",
        "bin",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, [1, 0, 3, 0, 5, 0]);
}

#[test]
fn gen_is_deterministic_across_runs_and_outputs() {
    let args = [
        "gen",
        "--field",
        "gf2w:16",
        "--kind",
        "expander",
        "--k",
        "4",
        "--c",
        "4",
        "--table-size",
        "64",
        "--d",
        "4",
        "--inner",
        "table",
        "--graph-key",
        "7",
        "--count",
        "256",
        "--format",
        "bin",
    ];
    let seed: Vec<String> = (1..=64).map(|i| format!("{:04x}", i * 977)).collect();
    let seed = seed.join(",");
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--seed", &seed]);
    let (code_a, a) = run_bytes(&full);
    let (code_b, b) = run_bytes(&full);
    assert_eq!((code_a, code_b), (EXIT_PASS, EXIT_PASS));
    assert_eq!(a.len(), 512);
    assert_eq!(a, b);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("values.bin");
    full.extend(["--out", path.to_str().unwrap()]);
    let (code, stdout) = run_bytes(&full);
    assert_eq!(code, EXIT_PASS);
    assert!(stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a);
}

#[test]
fn entropy_header_replays() {
    let (code, out, _) = run(&[
        "gen",
        "--field",
        "gf2w:32",
        "--kind",
        "horner",
        "--k",
        "3",
        "--entropy",
        "--count",
        "8",
    ]);
    assert_eq!(code, EXIT_PASS);
    let header = out.lines().next().unwrap();
    let seed = header.rsplit_once("seed=").unwrap().1;
    let (code, replay, _) = run(&[
        "gen", "--field", "gf2w:32", "--kind", "horner", "--k", "3", "--seed", seed, "--count",
        "8", "--header",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(replay, out);
}

#[test]
fn gen_past_the_period_writes_what_exists_then_fails() {
    let (code, out, err) = run(&[
        "gen", "--field", "gfp:5", "--kind", "horner", "--k", "2", "--seed", "01,02", "--count",
        "9",
    ]);
    assert_eq!(code, EXIT_CONFIG);
    assert_eq!(out.lines().count(), 5);
    assert!(err.contains("kgen:"));
}

#[test]
fn invalid_configurations_exit_2() {
    for args in [
        &[
            "gen",
            "--field",
            "gfp:257",
            "--kind",
            "fft-batch",
            "--k",
            "10",
            "--entropy",
        ][..],
        &["gen", "--field", "gfp:9", "--entropy"],
        &["gen", "--field", "gfp:5", "--k", "2", "--seed", "01"],
        &["gen", "--field", "gfp:5", "--k", "2"],
        &["verify", "--kind", "nonsense"],
    ] {
        assert_eq!(run(args).0, EXIT_CONFIG, "{args:?}");
    }
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = run(&["verify", "--field", "gfp:5", "--kind", "horner", "--k", "3"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("\"verdict\":\"exact-pass\""));

    let (code, out, _) = run(&[
        "verify",
        "--field",
        "gfp:3",
        "--kind",
        "horner",
        "--k",
        "3",
        "--seedlen",
        "2",
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("\"verdict\":\"exact-fail\""));

    let (code, _, err) = run(&[
        "verify", "--field", "gf2w:64", "--kind", "horner", "--k", "2", "--method", "seed",
    ]);
    assert_eq!(code, EXIT_GUARD);
    assert!(err.contains("kgen:"));
}

#[test]
fn verify_screen_passes_on_a_wide_field() {
    let (code, out, _) = run(&[
        "verify",
        "--field",
        "gf2w:64",
        "--kind",
        "fft-batch",
        "--k",
        "4",
        "--method",
        "screen",
        "--trials",
        "20000",
    ]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.contains("\"verdict\":\"screen-pass\""));
}

#[test]
fn search_matches_golden_and_flags_infeasible() {
    let (code, out, _) = run(&[
        "search", "--k", "32", "--delta", "1e-7", "--c", "64", "--d", "8",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, include_str!("golden/search_k32.csv"));

    let (code, out, _) = run(&[
        "search",
        "--k",
        "1024",
        "--delta",
        "1e-30",
        "--c",
        "4",
        "--d",
        "4",
        "--max-log2-m",
        "8",
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.lines().nth(1).unwrap().starts_with("1024,0,"));
}

#[test]
fn loadbalance_matches_golden() {
    let (code, out, err) = run(&[
        "loadbalance",
        "--m",
        "2",
        "--b",
        "4",
        "--eps",
        "0.5",
        "--runs",
        "3",
        "--workload",
        "burst",
        "--tasks",
        "4",
        "--seed",
        "1",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, include_str!("golden/loadbalance_burst.csv"));
    assert!(err.contains("overflows=0"));
}

#[test]
fn single_machine_never_overflows_when_capacity_covers_all_tasks() {
    let (code, out, err) = run(&[
        "loadbalance",
        "--m",
        "1",
        "--b",
        "8",
        "--eps",
        "0.5",
        "--runs",
        "50",
        "--workload",
        "burst",
        "--tasks",
        "4",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert!(err.contains("overflows=0"), "{err}");
    assert!(out
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(3) == Some("0")));
}

#[test]
fn loadbalance_rejects_overloaded_workloads_with_the_time() {
    let (code, _, err) = run(&[
        "loadbalance",
        "--m",
        "2",
        "--b",
        "2",
        "--eps",
        "0.5",
        "--runs",
        "1",
        "--workload",
        "burst",
        "--tasks",
        "4",
    ]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("time"), "{err}");
}

#[test]
fn bench_emits_one_row_per_kind_and_k() {
    let (code, out, _) = run(&[
        "bench",
        "--kinds",
        "horner,fft-batch",
        "--k",
        "16,32",
        "--reps",
        "1",
        "--batch",
        "256",
    ]);
    assert_eq!(code, EXIT_PASS);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "kind,k,c,d,log2_m,ns_per_value,fft_ns,lookup_ns");
    assert_eq!(lines.len(), 5);
    for line in &lines[1..] {
        let ns: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!(ns > 0.0);
    }
}
