use fedosov_cli::{parse_config, run, Command, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};
use fedosov_core::fedosov::bidiff_table;
use fedosov_core::ring::{parse_polynomial, parse_series, VarSpace};
use fedosov_core::samples;
use fedosov_core::weyl::parse_weyl;
use fedosov_core::FedosovContext;
use std::io::Write;
use std::path::PathBuf;
use std::process::Command as Process;

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn config_text(name: &str) -> String {
    std::fs::read_to_string(config_path(name)).unwrap()
}

/// Runs the binary; returns exit code, stdout and stderr.
fn fedosov(config: &std::path::Path, args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_fedosov"))
        .arg("--config")
        .arg(config)
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn temp_config(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn star_on_the_flat_model() {
    let (code, out, err) = fedosov(&config_path("flat.cfg"), &["star", "--f", "x2", "--g", "x1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "x1*x2 - lam\n");
    assert_eq!(err, "exact through lam^4\n");
}

#[test]
fn act_on_the_flat_model() {
    let (code, out, _) = fedosov(&config_path("flat.cfg"), &["act", "--f", "x2", "--m", "x1^2", "--leaf", "0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(parse_series(out.trim(), &VarSpace::new(1)).unwrap(), parse_series("-2*lam*x1", &VarSpace::new(1)).unwrap());
    let (code, _, err) = fedosov(&config_path("flat.cfg"), &["act", "--f", "x1", "--m", "x2"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("leaf"), "{err}");
}

#[test]
fn validate_curved_sample() {
    let (code, out, _) = fedosov(&config_path("curved.cfg"), &["validate"]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.contains("FAIL"));
    assert!(out.lines().filter(|l| l.contains(": PASS")).count() >= 8, "{out}");
}

#[test]
fn validate_reports_a_broken_connection() {
    let text = format!("{}gamma 2 1 1 = 1\n", config_text("flat.cfg"));
    let f = temp_config(&text);
    let (code, out, _) = fedosov(f.path(), &["validate"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(out.contains("self_parallel_L: FAIL"), "{out}");
    let (code, _, err) = fedosov(f.path(), &["star", "--f", "x1", "--g", "x2"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("validation failed"), "{err}");
}

#[test]
fn check_on_the_flat_model() {
    let (code, out, _) = fedosov(&config_path("flat.cfg"), &["check", "--leaf", "0"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(!out.contains("FAIL"));
    for needle in [
        "convention: NOTE delta:+ curvature:- connection:- square:- torsion:+ torsion_at:every lift:+",
        "wick.separation_of_variables: PASS",
        "adapted[x2=0].left_ideal_corpus: PASS",
        "adapted[x2=0].right_ideal_probe: PASS",
        "fedosov.d_squared: PASS",
    ] {
        assert!(out.contains(needle), "missing `{needle}` in\n{out}");
    }
}

#[test]
fn input_errors_exit_with_two() {
    let missing = temp_config("nu = 1\ntrunc = 8\nomega 1 2 = 1\n");
    let (code, out, err) = fedosov(missing.path(), &["validate"]);
    assert_eq!((code, out.as_str()), (EXIT_INPUT, ""));
    assert!(err.contains("omega_inv"), "{err}");

    let range = temp_config(&format!("{}gamma 1 1 3 = x2\n", config_text("flat.cfg")));
    let (code, _, err) = fedosov(range.path(), &["validate"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 6") && err.contains("out of range"), "{err}");

    let (code, _, err) = fedosov(&config_path("flat.cfg"), &["star", "--f", "x3", "--g", "1"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("x3"), "{err}");

    let (code, _, err) = fedosov(&config_path("flat.cfg"), &["bidiff", "--max-lambda", "5"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("trunc >= 10"), "{err}");

    let (code, _, _) = fedosov(&config_path("nope.cfg"), &["validate"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn output_is_deterministic() {
    let cases: [&[&str]; 4] = [
        &["star", "--f", "x1^2*x2 + 1/3*x2", "--g", "x1*x2^2"],
        &["r-element"],
        &["bidiff", "--max-deriv", "2", "--max-lambda", "2"],
        &["check", "--leaf", "1/2"],
    ];
    for args in cases {
        let a = fedosov(&config_path("curved.cfg"), args);
        let b = fedosov(&config_path("curved.cfg"), args);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn outputs_round_trip() {
    let text = config_text("curved.cfg");
    let space = VarSpace::new(1);
    let ctx = FedosovContext::new(samples::curved(), 6).unwrap();

    let star = run(&text, &Command::Star { f: "x1^2 + x2".into(), g: "x1*x2".into() });
    let expect = ctx.star_poly(&parse_polynomial("x1^2 + x2", &space).unwrap(), &parse_polynomial("x1*x2", &space).unwrap());
    assert_eq!(parse_series(star.stdout.trim(), &space).unwrap(), expect.unwrap().value);

    let lift = run(&text, &Command::Lift { f: "x1*x2".into() });
    let expect = ctx.lift(&parse_series("x1*x2", &space).unwrap()).unwrap();
    assert_eq!(parse_weyl(lift.stdout.trim(), 1, 6).unwrap(), expect);

    let r = run(&text, &Command::RElement);
    assert_eq!(parse_weyl(r.stdout.trim(), 1, 6).unwrap(), *ctx.r());

    let table = run(&text, &Command::Bidiff { max_deriv: 2, max_lambda: 2 });
    let expect = bidiff_table(&ctx, 2, 2).unwrap();
    let mut count = 0;
    for line in table.stdout.lines() {
        let parts: Vec<&str> = line.split(" | ").collect();
        assert_eq!(parts.len(), 4, "{line}");
        let k: u32 = parts[0].parse().unwrap();
        let idx = |s: &str| {
            let mut e = vec![0u16; 2];
            if s != "-" {
                for l in s.split(',') {
                    e[l.parse::<usize>().unwrap() - 1] += 1;
                }
            }
            e
        };
        let value = parse_polynomial(parts[3], &space).unwrap();
        assert_eq!(expect.get(k, &idx(parts[1]), &idx(parts[2])), value, "{line}");
        count += 1;
    }
    assert_eq!(count, expect.len());
}

#[test]
fn config_files_match_the_reference_samples() {
    let pairs = [
        ("flat.cfg", samples::flat(1)),
        ("curved.cfg", samples::curved()),
        ("curved_torsion.cfg", samples::curved_torsion()),
        ("nu2_parallel.cfg", samples::nu2_parallel()),
    ];
    for (name, sample) in pairs {
        let config = parse_config(&config_text(name)).unwrap();
        let g = config.geometry().unwrap().validated().unwrap();
        let d = g.dim();
        for k in 0..d {
            for i in 0..d {
                assert_eq!(g.symplectic().omega(k, i), sample.symplectic().omega(k, i), "{name}");
                assert_eq!(g.symplectic().omega_inv(k, i), sample.symplectic().omega_inv(k, i), "{name}");
                for j in 0..d {
                    assert_eq!(g.gamma(k, i, j), sample.gamma(k, i, j), "{name} gamma {k} {i} {j}");
                }
            }
        }
    }
}
