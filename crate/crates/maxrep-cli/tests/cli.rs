use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn maxrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxrep")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("maxrep-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn echo_block(stdout: &[u8]) -> String {
    let text = String::from_utf8(stdout.to_vec()).unwrap();
    let end = text.find("\n\n").expect("echo block ends with a blank line");
    text[..=end].to_string()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn config_echo_round_trips() {
    let dir = scratch("echo");
    let first = maxrep(&["entropy", "--preset", "modular", "--L", "12", "--window", "1.5:4.25", "--seed", "17"]);
    assert_eq!(first.status.code(), Some(0));
    let echo = echo_block(&first.stdout);
    assert!(echo.contains("preset=modular\n") && echo.contains("window=1.5:4.25\n"));
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, &echo).unwrap();
    let second = maxrep(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(echo_block(&second.stdout), echo);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn handwritten_config_is_echoed_verbatim() {
    let dir = scratch("verbatim");
    let text = "subcommand=gromov\nn=3\npreset=modular\nrep=rho_d\np1=\np2=\nL=10\nR=2\nfunctional=alpha,omega_hat,dX\nwindow=auto\nseed=5\ntol=1e-9\ntrials=20\nsize=5\ncount=64\nout=\n";
    let cfg = dir.join("gromov.cfg");
    std::fs::write(&cfg, text).unwrap();
    let run = maxrep(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(echo_block(&run.stdout), text);
}

#[test]
fn flags_override_config_file() {
    let dir = scratch("override");
    let cfg = dir.join("c.cfg");
    std::fs::write(&cfg, "# battery\nsubcommand=identities\nn=2\ntrials=5\n").unwrap();
    let run = maxrep(&["--config", cfg.to_str().unwrap(), "--n", "3"]);
    assert_eq!(run.status.code(), Some(0));
    let echo = echo_block(&run.stdout);
    assert!(echo.starts_with("subcommand=identities\nn=3\n"));
    assert!(echo.contains("trials=5\n"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = scratch("rerun");
    for args in [
        vec!["identities", "--n", "3", "--trials", "50"],
        vec!["positivity", "--n", "2", "--size", "6", "--trials", "30"],
        vec!["gromov", "--n", "3", "--trials", "50"],
        vec!["entropy", "--preset", "modular", "--n", "2", "--L", "12", "--window", "1:4"],
        vec!["shadow", "--L", "8"],
        vec!["limitcurve", "--n", "2", "--count", "24"],
    ] {
        let mut csvs = Vec::new();
        for k in 0..2 {
            let out = dir.join(format!("{}-{k}.csv", args[0]));
            let mut full = args.clone();
            full.extend(["--out", out.to_str().unwrap()]);
            let run = maxrep(&full);
            assert_eq!(run.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&run.stderr));
            csvs.push(read(&out));
        }
        assert_eq!(csvs[0], csvs[1], "{args:?}");
        assert!(csvs[0].ends_with('\n'));
    }
}

#[test]
fn entropy_csv_layout() {
    let dir = scratch("layout");
    let out = dir.join("e.csv");
    let run = maxrep(&["entropy", "--L", "6", "--window", "0:1", "--out", out.to_str().unwrap()]);
    // A ball this small cannot fill the window, so only the CSV layout is checked.
    assert_eq!(run.status.code(), Some(1));
    let run = maxrep(&["entropy", "--L", "12", "--window", "1:4", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let csv = read(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("word,wordlen,disp,alpha,omega_hat,dX"));
    assert_eq!(lines.next(), Some("e,0,0,0,0,0"));
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 6);
        for c in &cells[2..] {
            let digits = c.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
            assert!(digits.trim_start_matches('0').len() <= 12, "{c}");
        }
    }
    let summary = read(&PathBuf::from(format!("{}.summary.txt", out.display())));
    assert!(summary.starts_with("subcommand=entropy\n"));
    assert!(summary.contains("delta_hat"));
}

#[test]
fn exit_codes() {
    assert_eq!(maxrep(&["identities", "--trials", "3"]).status.code(), Some(0));
    assert_eq!(maxrep(&[]).status.code(), Some(2));
    assert_eq!(maxrep(&["dance"]).status.code(), Some(2));
    assert_eq!(maxrep(&["entropy", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(maxrep(&["entropy", "--preset", "fricke:3,3,4"]).status.code(), Some(2));
    assert_eq!(maxrep(&["entropy", "--window", "3:1"]).status.code(), Some(2));
    assert_eq!(maxrep(&["entropy", "--functional", "gamma"]).status.code(), Some(2));
    assert_eq!(maxrep(&["shadow", "--preset", "schottky:6"]).status.code(), Some(2));
    assert_eq!(maxrep(&["manhattan", "--p1", "fricke:3,3,3"]).status.code(), Some(2));
    assert_eq!(maxrep(&["entropy", "--preset", "fricke:3,3,3", "--L", "20"]).status.code(), Some(3));
    assert_eq!(maxrep(&["entropy", "--L", "40"]).status.code(), Some(3));
    assert_eq!(maxrep(&["identities", "--tol", "1e-30", "--trials", "5"]).status.code(), Some(1));
    let dir = scratch("codes");
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "subcommand=identities\ncolour=blue\n").unwrap();
    let run = maxrep(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("unknown key 'colour'"));
}
