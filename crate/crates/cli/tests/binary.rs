use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

fn lpres(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lpres")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("presentations")
        .join(name)
        .display()
        .to_string()
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn success_exits_zero() {
    let (code, out, _) = lpres(&["abelian", &example("basilica.lp")]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "Z^2");
    let (code, out, _) = lpres(&["analyze", &example("basilica.lp"), "--subgroup", "U1"]);
    assert_eq!(code, 0);
    assert!(out.contains("recommended strategy: leaf-invariant"));
}

#[test]
fn input_errors_exit_one() {
    let bad = temp_file("# lpres v1\ngenerators: a b\nfixed: a c\n");
    let (code, _, err) = lpres(&["abelian", bad.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 3, column 10"), "{err}");
    let (code, _, err) = lpres(&["analyze", &example("basilica.lp"), "--subgroup", "Nope"]);
    assert_eq!(code, 1);
    assert!(err.contains("Nope"));
    let (code, _, _) = lpres(&["abelian", "/nonexistent/file.lp"]);
    assert_eq!(code, 1);
    let (code, _, _) = lpres(&["frobnicate"]);
    assert_eq!(code, 1);
    let (code, _, _) = lpres(&["present", &example("basilica.lp"), "-s", "U1", "--strategy", "bogus"]);
    assert_eq!(code, 1);
}

#[test]
fn exhausted_budgets_exit_two() {
    let (code, _, err) = lpres(&["verify", &example("grigorchuk.lp"), "-s", "D", "--depth", "0", "--max-cosets", "100"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = lpres(&["analyze", &example("grigorchuk.lp"), "-s", "D", "--max-cosets", "8"]);
    assert_eq!(code, 2);
}

#[test]
fn failed_verification_exits_two() {
    let f = temp_file("generators: a\nendo s: a -> a^2\niterated: a^4\nsubgroup H: a^2\n");
    let (code, out, _) = lpres(&["verify", f.path().to_str().unwrap(), "-s", "H", "--depth", "0"]);
    assert_eq!(code, 0, "{out}");
    let f = temp_file("generators: a b\nfixed: b^2, (a b)^3\nendo s: a -> a b\niterated: a^2\nsubgroup H: a\n");
    let (code, out, _) = lpres(&["verify", f.path().to_str().unwrap(), "-s", "H", "--depth", "0"]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("s(a^2)"), "{out}");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = lpres(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("lowindex"));
}

#[test]
fn presented_subgroups_reparse() {
    let (code, out, _) = lpres(&["present", &example("grigorchuk.lp"), "-s", "D"]);
    assert_eq!(code, 0);
    let f = temp_file(&out);
    let (code, out, err) = lpres(&["abelian", f.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.trim(), "(Z/2)^8");
}
