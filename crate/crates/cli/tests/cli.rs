use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn genlearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genlearn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn learn(curriculum: &str, net: &Path) -> Output {
    let o = genlearn(&[
        "learn",
        "--curriculum",
        curriculum,
        "--network",
        net.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    o
}

#[test]
fn learn_builtin_creates_categories() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.txt");
    learn("builtin:objects-and-kinds", &net);
    let text = fs::read_to_string(&net).unwrap();
    assert!(text.starts_with("conceptnet v1\n"));
    for c in ["animal", "food", "people"] {
        assert!(text.contains(&format!("node category {c}\n")), "{c}");
    }
}

#[test]
fn learn_empty_curriculum() {
    let dir = tempfile::tempdir().unwrap();
    let cur = dir.path().join("empty.cur");
    fs::write(&cur, "# nothing yet\n").unwrap();
    let net = dir.path().join("net.txt");
    learn(cur.to_str().unwrap(), &net);
    assert_eq!(fs::read_to_string(&net).unwrap(), "conceptnet v1\n");
}

#[test]
fn learn_malformed_file_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let cur = dir.path().join("bad.cur");
    fs::write(
        &cur,
        "instance\n  scene: entity e1 dog\n  say: a dog barks\n",
    )
    .unwrap();
    let net = dir.path().join("net.txt");
    let o = genlearn(&[
        "learn",
        "--curriculum",
        cur.to_str().unwrap(),
        "--network",
        net.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("line 3") && stderr(&o).contains("barks"),
        "{}",
        stderr(&o)
    );
    assert!(!net.exists());
}

#[test]
fn learn_missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.txt");
    let o = genlearn(&[
        "learn",
        "--curriculum",
        "/nonexistent/x.cur",
        "--network",
        net.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hand_written_curriculum_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cur = dir.path().join("two.cur");
    fs::write(
        &cur,
        "instance\n  scene: entity e1 mom ; entity e2 juice ; action drink agent=e1 patient=e2\n  say: Mom drinks juice\n\ninstance\n  scene:\n  say: moms drink juice\n",
    )
    .unwrap();
    let net = dir.path().join("net.txt");
    let o = genlearn(&[
        "learn",
        "--curriculum",
        cur.to_str().unwrap(),
        "--network",
        net.to_str().unwrap(),
        "--trace",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let journal = stdout(&o);
    assert_eq!(journal.lines().count(), 2, "{journal}");
    assert!(
        journal.contains("object/mom slot-1 action/drink"),
        "{journal}"
    );

    let m = genlearn(&["export", "--network", net.to_str().unwrap(), "matrix"]);
    let csv = stdout(&m);
    let header = csv.lines().next().unwrap();
    assert!(
        header.contains("drink⊕slot-1") && header.contains("drink⊕slot-2"),
        "{header}"
    );
}

#[test]
fn query_shows_generic_membership() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.txt");
    learn("builtin:standard", &net);
    let o = genlearn(&["query", "--network", net.to_str().unwrap(), "bird"]);
    assert!(o.status.success());
    assert!(
        stdout(&o).contains("-> category/animal\tis\t1.00000\tgeneric"),
        "{}",
        stdout(&o)
    );

    let o = genlearn(&["query", "--network", net.to_str().unwrap(), "griffin"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("griffin"));
}

#[test]
fn similar_values() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.txt");
    learn("builtin:objects-and-kinds", &net);
    let n = net.to_str().unwrap();
    let same = genlearn(&["similar", "--network", n, "dog", "dog"]);
    assert_eq!(stdout(&same), "1.000000\n");
    let cat = genlearn(&["similar", "--network", n, "mom", "people"]);
    assert_eq!(stdout(&cat), "1.000000\n");

    let dir2 = tempfile::tempdir().unwrap();
    let objs = dir2.path().join("objs.txt");
    learn("builtin:objects", &objs);
    let iso = genlearn(&[
        "similar",
        "--network",
        objs.to_str().unwrap(),
        "ball",
        "object/cup",
    ]);
    assert!(iso.status.success(), "{}", stderr(&iso));
    assert_eq!(stdout(&iso), "0.000000\n");
}

#[test]
fn run_task_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = genlearn(&["run-task", "1", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("PASS task 1\n"), "{}", stdout(&o));
    let csv = fs::read_to_string(dir.path().join("task1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(dir.path().join("task1.svg").exists());

    let o = genlearn(&["run-task", "3", "--out", out]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("task3.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);

    let o = genlearn(&["run-task", "4", "--out", out]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn run_task_2_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = genlearn(&[
            "run-task",
            "2",
            "--seed",
            "5",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    for f in ["task2.csv", "task2.svg"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap()
        );
    }
}

#[test]
fn export_clusters_and_empty() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.txt");
    learn("builtin:objects-and-actions", &net);
    let o = genlearn(&[
        "export",
        "--network",
        net.to_str().unwrap(),
        "clusters",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("clusters.txt")).unwrap();
    let order: Vec<&str> = text
        .lines()
        .skip(1)
        .take_while(|l| !l.starts_with('#'))
        .collect();
    let pos: Vec<usize> = ["water", "juice", "milk"]
        .iter()
        .map(|n| order.iter().position(|l| l == n).unwrap())
        .collect();
    assert_eq!(
        pos.iter().max().unwrap() - pos.iter().min().unwrap(),
        2,
        "{order:?}"
    );

    let empty = dir.path().join("empty.txt");
    learn("builtin:empty", &empty);
    let o = genlearn(&["export", "--network", empty.to_str().unwrap(), "matrix"]);
    assert_eq!(stdout(&o), "concept\n");
    let o = genlearn(&["export", "--network", empty.to_str().unwrap(), "clusters"]);
    assert_eq!(stdout(&o), "# leaf order\n# merge tree\n");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(genlearn(&[]).status.code(), Some(1));
    assert_eq!(genlearn(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(genlearn(&["--help"]).status.code(), Some(0));
    let o = genlearn(&[
        "learn",
        "--curriculum",
        "builtin:nope",
        "--network",
        "/tmp/x",
    ]);
    assert_eq!(o.status.code(), Some(1));
}
