use std::process::Command;

use cr_moduli::cli::{run, EXIT_MATH, EXIT_OK, EXIT_USAGE};
use cr_moduli::moduli::InvariantReport;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["cr-moduli"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary(args: &[&str], env: &[(&str, &str)]) -> std::process::Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cr-moduli"));
    c.args(args).env_remove("CR_MODULI_SEED");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

#[test]
fn invariant_json_example() {
    let (code, out, _) = call(&["invariant", "--builtin", "m14", "--a", "1+1i", "--b", "2", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "{\"class\":\"generic\",\"invariant\":\"1/2\"}\n");
}

#[test]
fn equiv_example() {
    let (code, out, _) = call(&["equiv", "--m1", "a=1,b=2", "--m2", "a=2,b=4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next(), Some("Equivalent"));
    let (_, out, _) = call(&["equiv", "--m1", "a=1,b=2", "--m2", "a=1,b=4", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "NotEquivalent");
    for k in ["class1", "class2", "invariant1", "invariant2", "witness_chain"] {
        assert!(v.get(k).is_some(), "{k}");
    }
}

#[test]
fn degenerate_model_exits_with_math_failure() {
    let (code, out, err) = call(&["invariant", "--a", "0", "--b", "0"]);
    assert_eq!(code, EXIT_MATH);
    assert!(out.is_empty());
    assert!(err.starts_with("error[degenerate-model]"), "{err}");
    let o = binary(&["invariant", "--a", "0", "--b", "0"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        &["invariant", "--a", "1", "--nope"][..],
        &["invariant", "--a", "1+"],
        &["invariant", "--builtin", "m15"],
        &["invariant", "--b", "i"],
        &["equiv", "--m1", "a=1", "--m2", "a=1,b=1"],
        &["equiv", "--m1", "a=1,c=2", "--m2", "a=1,b=1"],
        &["cartan", "--branch", "2"],
        &["frame", "--model", "/nonexistent/model.txt"],
        &["oracle", "--format", "latex", "--samples", "1", "--a", "1", "--b", "1"],
        &[],
    ] {
        let (code, _, err) = call(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {err}");
    }
    assert_eq!(binary(&["frobnicate"], &[]).status.code(), Some(1));
    assert_eq!(binary(&["--help"], &[]).status.code(), Some(0));
}

#[test]
fn report_json_round_trips() {
    for (a, b) in [("1+1i", "2"), ("3", "0"), ("0", "7"), ("1/2-3/4i", "-5/3")] {
        let (code, out, _) = call(&["invariant", "--a", a, "--b", b, "--pipeline", "both", "--trail", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        let rep = InvariantReport::from_json(&v).unwrap();
        assert_eq!(rep.to_json(), v);
        assert_eq!(format!("{}\n", rep.to_json()), out);
    }
}

#[test]
fn branches_agree() {
    let (code, out, _) = call(&["invariant", "--a", "2-i", "--b", "3", "--branch", "both"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "class generic, R = 5/9\n");
    let (code, out, _) = call(&["cartan", "--a", "2-i", "--b", "3", "--branch", "-1", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["branch"], -1);
    assert_eq!(v["invariants"]["R"], "5/9");
    let (_, out, _) = call(&["cartan", "--a", "2-i", "--b", "3", "--branch", "both", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["branches"].as_array().unwrap().len(), 2);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let args = ["oracle", "--a", "1+1i", "--b", "2", "--samples", "4", "--seed", "17", "--format", "json"];
    let first = binary(&args, &[]);
    let second = binary(&args, &[]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let cartan = ["cartan", "--format", "json"];
    assert_eq!(binary(&cartan, &[]).stdout, binary(&cartan, &[]).stdout);
}

#[test]
fn seed_comes_from_the_environment_unless_given() {
    let args = ["oracle", "--a", "1+1i", "--b", "2", "--samples", "3", "--format", "json"];
    let seed = |o: &std::process::Output| serde_json::from_slice::<Value>(&o.stdout).unwrap()["seed"].as_u64().unwrap();
    assert_eq!(seed(&binary(&args, &[])), 0);
    let env = binary(&args, &[("CR_MODULI_SEED", "42")]);
    assert_eq!(seed(&env), 42);
    let mut explicit = args.to_vec();
    explicit.extend(["--seed", "42"]);
    assert_eq!(binary(&explicit, &[]).stdout, env.stdout);
    let last = explicit.len() - 1;
    explicit[last] = "5";
    assert_eq!(seed(&binary(&explicit, &[("CR_MODULI_SEED", "42")])), 5);
}

#[test]
fn model_files_and_output_paths() {
    let dir = std::env::temp_dir().join(format!("cr-moduli-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let model = dir.join("m.crm");
    std::fs::write(
        &model,
        "model M type (1,4)  # the family at a = 2i, b = 1\n\
         Xi1: w1 - conj(w1) = 2i*z*conj(z)\n\
         Xi2: w2 - conj(w2) = 2i*(z^2*conj(z) + z*conj(z)^2)\n\
         Xi3: w3 - conj(w3) = 2*(z^2*conj(z) - z*conj(z)^2)\n\
         Xi4: w4 - conj(w4) = 2i*(2i*z^3*conj(z) - 2i*z*conj(z)^3 + z^2*conj(z)^2)\n",
    )
    .unwrap();
    let out_path = dir.join("report.json");
    let (code, out, err) = call(&["invariant", "--model", model.to_str().unwrap(), "--format", "json", "--output", out_path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), "{\"class\":\"generic\",\"invariant\":\"4\"}\n");
    let (code, out, _) = call(&["equiv", "--m1", model.to_str().unwrap(), "--m2", "a=2,b=1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("Equivalent"));
    let (_, out, _) = call(&["invariant", "--model", model.to_str().unwrap(), "--a", "1"]);
    assert!(out.is_empty());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn the_other_subcommands_render() {
    let (_, frame, _) = call(&["frame"]);
    assert_eq!(frame.lines().next(), Some("L = d/dz + i*conj(z)*d/du1 + (2*i*z*conj(z) + i*conj(z)^2)*d/du2 + (2*z*conj(z) - conj(z)^2)*d/du3 + (3*i*a*z^2*conj(z) + i*conj(a)*conj(z)^3 + 2*i*b*z*conj(z)^2)*d/du4"));
    let (_, table, _) = call(&["table"]);
    assert!(table.contains("[L, Sbar] = 2/3*b*U"));
    let (_, cof, _) = call(&["coframe", "--format", "json"]);
    let v: Value = serde_json::from_str(&cof).unwrap();
    assert_eq!(v["stage"], "base-coframe");
    let (_, tex, _) = call(&["coframe", "--format", "latex"]);
    assert!(tex.contains("d\\rho_{0} &= i\\, \\zeta_{0} \\wedge \\overline{\\zeta}_{0}"), "{tex}");
    let (_, lie, _) = call(&["lie", "--format", "json"]);
    let v: Value = serde_json::from_str(&lie).unwrap();
    assert_eq!(v["coefficient"], "9/4*r^2/b^2");
    let (code, lie, _) = call(&["lie", "--r", "1", "--b", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(!lie.contains("normalized"));
    let (code, inv, _) = call(&["invariant", "--format", "latex"]);
    assert_eq!(code, EXIT_OK);
    assert!(inv.starts_with("\\mathfrak{R} = \\frac{a \\bar{a}}{b^{2}}"), "{inv}");
    let (code, cartan, _) = call(&["cartan", "--a", "1", "--b", "1"]);
    assert_eq!(code, EXIT_OK);
    for stage in ["base-coframe", "structure", "absorbed", "reduced", "prolonged", "reform-1", "reform-2", "reform-3"] {
        assert!(cartan.contains(&format!("== {stage} ==")), "{stage}");
    }
}
