use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn phero(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phero"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn frames_in(dir: &Path) -> usize {
    fs::read_dir(dir)
        .unwrap()
        .filter(|e| {
            let name = e.as_ref().unwrap().file_name();
            let name = name.to_string_lossy();
            name.starts_with("frame_") && name.ends_with(".ppm")
        })
        .count()
}

#[test]
fn help_succeeds() {
    assert_eq!(code(&phero(&["--help"])), 0);
}

#[test]
fn case1_run_then_render() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = out.to_str().unwrap();
    let r = phero(&[
        "run-case1",
        "--group",
        "g3",
        "--trials",
        "2",
        "--seed",
        "5",
        "--out",
        o,
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    for name in ["poses.csv", "events.csv", "histogram.csv", "config.txt"] {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    let hist = fs::read_to_string(out.join("histogram.csv")).unwrap();
    let total: usize = hist
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 2);
    assert_eq!(frames_in(&out), 0);

    let r = phero(&["render", "--log", o, "--stride", "400"]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    assert!(frames_in(&out) > 0);
}

#[test]
fn render_refuses_a_log_it_cannot_reproduce() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = out.to_str().unwrap();
    assert_eq!(
        code(&phero(&["run-case2", "--duration", "1", "--out", o])),
        0
    );
    let poses = out.join("poses.csv");
    let mut text = fs::read_to_string(&poses).unwrap();
    text.push_str("51,1.02,1,0,0,0\n");
    fs::write(&poses, text).unwrap();
    let r = phero(&["render", "--log", o, "--stride", "10"]);
    assert_eq!(code(&r), 1);
    assert_eq!(frames_in(&out), 0);
}

#[test]
fn config_file_values_are_used() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.txt");
    fs::write(
        &cfg,
        "[sim]\nseed = 3\n[case2]\nfollowers = 2\nduration = 0.5\n",
    )
    .unwrap();
    let out = tmp.path().join("run");
    let r = phero(&[
        "run-case2",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let poses = fs::read_to_string(out.join("poses.csv")).unwrap();
    // leader, two followers and the predator for 25 ticks
    assert_eq!(poses.lines().count(), 1 + 4 * 25);
    let echoed = fs::read_to_string(out.join("config.txt")).unwrap();
    assert!(echoed.contains("seed = 3"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = out.to_str().unwrap();
    assert_eq!(code(&phero(&["run-case1", "--group", "g4", "--out", o])), 2);
    assert_eq!(code(&phero(&["run-case1", "--trials", "0", "--out", o])), 2);
    assert_eq!(
        code(&phero(&["run-case2", "--duration", "-3", "--out", o])),
        2
    );

    let cfg = tmp.path().join("bad.txt");
    fs::write(&cfg, "[sim]\nseed = 1\nwarp = 9\n").unwrap();
    let r = phero(&["run-case2", "--config", cfg.to_str().unwrap(), "--out", o]);
    assert_eq!(code(&r), 2);
    assert!(String::from_utf8_lossy(&r.stderr).contains("line 3"));

    let missing = tmp.path().join("nothing");
    assert_eq!(
        code(&phero(&[
            "render",
            "--log",
            missing.to_str().unwrap(),
            "--stride",
            "5"
        ])),
        2
    );
    assert!(!out.exists());
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("run");
    let r = phero(&[
        "run-case2",
        "--duration",
        "0.2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 1);
}
