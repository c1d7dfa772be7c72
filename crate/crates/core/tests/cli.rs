use std::path::{Path, PathBuf};

use ksystem::cli::{run, EXIT_BUDGET, EXIT_INVALID, EXIT_NEGATIVE, EXIT_OK};
use ksystem::format::{parse_value, to_canonical_string};
use serde_json::{json, Value};
use tempfile::TempDir;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ksys(args: &[&str]) -> Out {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("ksys").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn gen(dir: &TempDir, args: &[&str], name: &str) -> PathBuf {
    let p = dir.path().join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path_str(&p)]);
    let r = ksys(&full);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    p
}

fn first_doc(s: &str) -> Value {
    parse_value(s.lines().next().unwrap()).unwrap()
}

#[test]
fn faces_of_cube() {
    let dir = TempDir::new().unwrap();
    let c3 = gen(&dir, &["cube", "3"], "c3.json");
    let r = ksys(&["faces", path_str(&c3), "-k", "2"]);
    assert_eq!(r.code, EXIT_OK);
    let doc = first_doc(&r.stdout);
    assert_eq!(doc["k"], 2);
    assert_eq!(doc["sets"].as_array().unwrap().len(), 6);
}

#[test]
fn certify_and_mutate() {
    let dir = TempDir::new().unwrap();
    let c3 = gen(&dir, &["cube", "3"], "c3.json");
    let faces = first_doc(&ksys(&["faces", path_str(&c3), "-k", "2"]).stdout);
    let aof = first_doc(&ksys(&["aof-geometric", path_str(&c3)]).stdout);
    let cert = json!({"k": 2, "orientation": aof, "sets": faces["sets"], "type": "faces"});
    let cert_path = write(&dir, "cert.json", &to_canonical_string(&cert));
    assert_eq!(
        ksys(&["certify", "faces", path_str(&c3), path_str(&cert_path)]).code,
        EXIT_OK
    );

    let mut fewer = cert.clone();
    fewer["sets"].as_array_mut().unwrap().pop();
    let fewer_path = write(&dir, "fewer.json", &to_canonical_string(&fewer));
    let r = ksys(&["certify", "faces", path_str(&c3), path_str(&fewer_path)]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.stdout.contains("REFUTED"));

    let aof_cert = json!({"orientation": aof, "sets": faces["sets"], "type": "aof"});
    let aof_path = write(&dir, "aof.json", &to_canonical_string(&aof_cert));
    assert_eq!(
        ksys(&["certify", "aof", path_str(&c3), path_str(&aof_path)]).code,
        EXIT_OK
    );
}

#[test]
fn h_vector_and_sums() {
    let dir = TempDir::new().unwrap();
    let c3 = gen(&dir, &["cube", "3"], "c3.json");
    let o = write(
        &dir,
        "o.json",
        ksys(&["aof-geometric", path_str(&c3)]).stdout.trim(),
    );
    let r = ksys(&["hvector", path_str(&c3), path_str(&o)]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout.trim(), "1 3 3 1");
    let h = write(&dir, "h.txt", &r.stdout);
    assert_eq!(ksys(&["hk", path_str(&h), "-k", "1"]).stdout.trim(), "12");
    assert_eq!(ksys(&["hk", path_str(&h), "-k", "all"]).stdout.trim(), "27");
    let arr = write(&dir, "h.json", "[1, 3, 3, 1]");
    assert_eq!(ksys(&["hk", path_str(&arr), "-k", "2"]).stdout.trim(), "6");
}

#[test]
fn hk_one_is_edge_count_for_any_orientation() {
    let dir = TempDir::new().unwrap();
    let c3 = gen(&dir, &["cube", "3"], "c3.json");
    let r = ksys(&["enum-orient", path_str(&c3)]);
    assert_eq!(r.code, EXIT_OK);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 1862);
    for line in lines.iter().step_by(97) {
        let o = write(&dir, "o.json", line);
        let h = write(
            &dir,
            "h.txt",
            &ksys(&["hvector", path_str(&c3), path_str(&o)]).stdout,
        );
        assert_eq!(ksys(&["hk", path_str(&h), "-k", "1"]).stdout.trim(), "12");
    }
}

#[test]
fn search_commands_on_fig1() {
    let dir = TempDir::new().unwrap();
    let f = gen(&dir, &["fig1"], "fig1.json");
    let r = ksys(&["min-hk", path_str(&f), "-k", "2", "--jobs", "2"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout.lines().next(), Some("8"));
    let witness = write(&dir, "w.json", r.stdout.lines().nth(1).unwrap());
    assert_eq!(
        ksys(&["is-aof", path_str(&f), path_str(&witness)]).code,
        EXIT_OK
    );

    let r = ksys(&["enum-ksystems", path_str(&f), "-k", "2"]);
    assert_eq!(r.stdout.lines().count(), 3);
    let r = ksys(&["max-ksystem", path_str(&f), "-k", "2"]);
    assert_eq!(first_doc(&r.stdout)["sets"].as_array().unwrap().len(), 8);

    let small = r.stdout.clone();
    let other = ksys(&["enum-ksystems", path_str(&f), "-k", "2"])
        .stdout
        .lines()
        .find(|l| parse_value(l).unwrap()["sets"].as_array().unwrap().len() == 6)
        .unwrap()
        .to_string();
    let cur = write(&dir, "cur.json", &other);
    let prop = write(&dir, "prop.json", &small);
    assert_eq!(
        ksys(&[
            "refute",
            "faces",
            path_str(&f),
            path_str(&cur),
            path_str(&prop)
        ])
        .code,
        EXIT_OK
    );
    assert_eq!(
        ksys(&[
            "refute",
            "faces",
            path_str(&f),
            path_str(&prop),
            path_str(&cur)
        ])
        .code,
        EXIT_NEGATIVE
    );
}

#[test]
fn facets_from_two_faces() {
    let dir = TempDir::new().unwrap();
    let c4 = gen(&dir, &["cube", "4"], "c4.json");
    let f2 = write(
        &dir,
        "f2.json",
        &ksys(&["faces", path_str(&c4), "-k", "2"]).stdout,
    );
    let r = ksys(&["facets-from-2faces", path_str(&c4), path_str(&f2)]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout, ksys(&["faces", path_str(&c4), "-k", "3"]).stdout);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        "{\"d\": 3, \"n\": 2, \"edges\": [[0, 0]]}",
    );
    let r = ksys(&["faces", path_str(&bad), "-k", "2"]);
    assert_eq!(r.code, EXIT_INVALID);
    assert!(r.stdout.is_empty());
    assert_eq!(r.stderr.lines().count(), 1);

    let missing = dir.path().join("missing.json");
    assert_eq!(
        ksys(&["faces", path_str(&missing), "-k", "2"]).code,
        EXIT_INVALID
    );

    let c3 = gen(&dir, &["cube", "3"], "c3.json");
    assert_eq!(
        ksys(&["enum-orient", path_str(&c3), "--budget", "100"]).code,
        EXIT_BUDGET
    );
    assert_eq!(
        ksys(&[
            "max-ksystem",
            path_str(&c3),
            "-k",
            "2",
            "--candidate-cap",
            "1"
        ])
        .code,
        EXIT_BUDGET
    );
    assert_eq!(
        ksys(&["faces", path_str(&c3), "-k", "9"]).code,
        EXIT_INVALID
    );
    assert_eq!(ksys(&["no-such-command"]).code, EXIT_INVALID);
}

#[test]
fn outputs_are_canonical() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, &["product", "cube:1", "simplex:2"], "prism.json");
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(
        to_canonical_string(&parse_value(&text).unwrap()),
        text.trim_end()
    );
    for args in [
        vec!["faces", path_str(&p), "-k", "2"],
        vec!["aof-geometric", path_str(&p)],
    ] {
        let out = ksys(&args).stdout;
        for line in out.lines() {
            assert_eq!(to_canonical_string(&parse_value(line).unwrap()), line);
        }
    }
}

#[test]
fn help_documents_schemas() {
    let r = ksys(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    for word in [
        "orientation",
        "set system",
        "certificate",
        "instance",
        "Exit codes",
    ] {
        assert!(r.stdout.contains(word), "{word}");
    }
}
