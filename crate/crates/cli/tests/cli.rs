use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use antilearn::read_dataset_csv;
use antilearn::report::{parse_rows, read_rows};
use antilearn_core::data::hadamard::{hadamard_dataset, sylvester_hadamard};
use antilearn_core::data::xor::{pyramid_xor_dataset, random_xor_dataset};
use tempfile::TempDir;

fn antilearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antilearn"))
        .args(args)
        .output()
        .expect("spawn antilearn")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn gen_pyramid_matches_generator() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "pyramid-xor.csv");
    let out = antilearn(&["gen", "--dataset", "pyramid-xor", "--out", &file]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("256 rows"));

    let text = fs::read_to_string(&file).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 257);
    assert_eq!(lines[0], "a,b,c,d,e,f,g,h,out");
    assert_eq!(lines[2], "0,0,0,0,0,0,0,1,TRUE");
    assert_eq!(
        read_dataset_csv(Path::new(&file)).unwrap(),
        pyramid_xor_dataset()
    );
}

#[test]
fn gen_random_and_hadamard_reread_equal() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "random-xor.csv");
    assert!(
        antilearn(&["gen", "--dataset", "random-xor", "--out", &file])
            .status
            .success()
    );
    assert_eq!(
        read_dataset_csv(Path::new(&file)).unwrap(),
        random_xor_dataset()
    );

    let file = path(&dir, "hadamard-256.csv");
    assert!(antilearn(&["gen", "--dataset", "hadamard", "--out", &file])
        .status
        .success());
    assert_eq!(
        read_dataset_csv(Path::new(&file)).unwrap(),
        hadamard_dataset(8).unwrap()
    );
}

#[test]
fn gen_hadamard_order_four_with_image() {
    let dir = TempDir::new().unwrap();
    let (csv, pgm) = (path(&dir, "h.csv"), path(&dir, "h.pgm"));
    let out = antilearn(&[
        "gen",
        "--dataset",
        "hadamard",
        "--order",
        "4",
        "--out",
        &csv,
        "--pgm",
        &pgm,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let h = sylvester_hadamard(2).unwrap();
    let text = fs::read_to_string(&csv).unwrap();
    let data: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(data.len(), 4);
    for (i, line) in data.iter().enumerate() {
        let last: i8 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(last, h.get(i, 3));
    }
    let image = fs::read_to_string(&pgm).unwrap();
    assert!(image.starts_with("P2\n4 4\n255\n"));
    assert_eq!(image.lines().nth(6).unwrap(), "255 0 0 255");
}

#[test]
fn gen_custom_expression() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "c.csv");
    let out = antilearn(&[
        "gen",
        "--dataset",
        "custom-xor",
        "--expr",
        "xor(a, h)",
        "--out",
        &file,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let ds = read_dataset_csv(Path::new(&file)).unwrap();
    assert_eq!(ds.label(1), 1);
    assert_eq!(ds.label(129), 0);

    let out = antilearn(&[
        "gen",
        "--dataset",
        "custom-xor",
        "--expr",
        "xor(a,q)",
        "--out",
        &file,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "x.csv");
    let out = antilearn(&["gen", "--dataset", "nonsense", "--out", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Usage"), "{}", stderr(&out));
    for order in ["12", "1", "8192"] {
        let out = antilearn(&[
            "gen",
            "--dataset",
            "hadamard",
            "--order",
            order,
            "--out",
            &file,
        ]);
        assert_eq!(out.status.code(), Some(2), "order {order}");
    }
    let out = antilearn(&[
        "gen",
        "--dataset",
        "pyramid-xor",
        "--out",
        &file,
        "--pgm",
        &file,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new(&file).exists());
}

#[test]
fn help_on_every_subcommand() {
    for sub in ["gen", "grid", "report"] {
        let out = antilearn(&[sub, "--help"]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
    }
}

#[test]
fn nb_loocv_grid_is_zero_and_inverts_to_one() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "r.csv");
    let out = antilearn(&[
        "grid",
        "--classifiers",
        "nb",
        "--folds",
        "256",
        "--out",
        &file,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        stderr(&out).lines().filter(|l| l.starts_with('[')).count(),
        3
    );
    let rows = read_rows(Path::new(&file)).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows
        .iter()
        .all(|r| r.mean_val_acc == Some(0.0) && !r.inverted));
    assert!(fs::read_to_string(&file)
        .unwrap()
        .lines()
        .skip(1)
        .all(|l| l.ends_with(",0.0000")));

    let out = antilearn(&[
        "grid",
        "--classifiers",
        "nb",
        "--folds",
        "256",
        "--invert",
        "--out",
        &file,
    ]);
    assert!(out.status.success());
    let rows = read_rows(Path::new(&file)).unwrap();
    assert!(rows
        .iter()
        .all(|r| r.mean_val_acc == Some(1.0) && r.inverted));
}

#[test]
fn oversized_fold_count_stops_before_training() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "r.csv");
    let out = antilearn(&["grid", "--folds", "4,512", "--out", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!stderr(&out).contains("k=4"), "{}", stderr(&out));
    assert!(!Path::new(&file).exists());
}

#[test]
fn outputs_are_byte_identical_across_runs_and_threads() {
    let dir = TempDir::new().unwrap();
    let mut reports = Vec::new();
    let mut series = Vec::new();
    for (i, threads) in ["1", "3", "1"].iter().enumerate() {
        let file = path(&dir, &format!("r{i}.csv"));
        let long = path(&dir, &format!("l{i}.csv"));
        let sdir = path(&dir, &format!("s{i}"));
        let out = antilearn(&[
            "grid",
            "--classifiers",
            "nb,svm",
            "--folds",
            "4,16",
            "--seed",
            "9",
            "--threads",
            threads,
            "--out",
            &file,
            "--long-out",
            &long,
            "--series-out",
            &sdir,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        reports.push((fs::read(&file).unwrap(), fs::read(&long).unwrap()));
        series.push(fs::read(Path::new(&sdir).join("svm.tsv")).unwrap());
    }
    assert!(reports.windows(2).all(|w| w[0] == w[1]));
    assert!(series.windows(2).all(|w| w[0] == w[1]));
    // 3 datasets x 2 classifiers x (4 + 16) folds, plus the header.
    assert_eq!(
        reports[0].1.iter().filter(|&&b| b == b'\n').count(),
        1 + 3 * 2 * 20
    );
}

#[test]
fn series_files_hold_one_curve_per_dataset() {
    let dir = TempDir::new().unwrap();
    let sdir = path(&dir, "series");
    let out = antilearn(&[
        "grid",
        "--classifiers",
        "nb",
        "--folds",
        "8,4,32",
        "--series-out",
        &sdir,
        "--out",
        &path(&dir, "r.csv"),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(Path::new(&sdir).join("nb.tsv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "folds\tdataset\tval_acc");
    assert_eq!(lines.len(), 1 + 9);
    let pyramid: Vec<&str> = lines[1..]
        .iter()
        .filter(|l| l.contains("\tpyramid-xor\t"))
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(pyramid, ["4", "8", "32"]);
    assert!(!Path::new(&sdir).join("svm.tsv").exists());
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = TempDir::new().unwrap();
    let conf = path(&dir, "run.conf");
    let file = path(&dir, "r.csv");
    fs::write(
        &conf,
        "# small run\nseed = 5\nclassifiers = nb\nfolds = 4\ndatasets = random-xor\n",
    )
    .unwrap();
    let out = antilearn(&["grid", "--config", &conf, "--folds", "8", "--out", &file]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = read_rows(Path::new(&file)).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].dataset.as_str(), rows[0].folds), ("random-xor", 8));

    fs::write(&conf, "seed = 5\nshuffle = twice\n").unwrap();
    let out = antilearn(&["grid", "--config", &conf]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("run.conf:2"), "{}", stderr(&out));
}

#[test]
fn grid_over_a_dataset_file() {
    let dir = TempDir::new().unwrap();
    let data = path(&dir, "h16.csv");
    assert!(antilearn(&[
        "gen",
        "--dataset",
        "hadamard",
        "--order",
        "16",
        "--out",
        &data
    ])
    .status
    .success());
    let file = path(&dir, "r.csv");
    let out = antilearn(&[
        "grid",
        "--datasets",
        &data,
        "--classifiers",
        "nb",
        "--folds",
        "4,16",
        "--out",
        &file,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = read_rows(Path::new(&file)).unwrap();
    assert_eq!(rows[0].dataset, "h16");
    assert_eq!(rows.len(), 2);

    let out = antilearn(&[
        "grid",
        "--datasets",
        &data,
        "--classifiers",
        "nb",
        "--folds",
        "32",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_renders_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "r.csv");
    let out = antilearn(&[
        "grid",
        "--classifiers",
        "nb",
        "--folds",
        "64,256",
        "--out",
        &file,
    ]);
    assert!(out.status.success());

    let md = antilearn(&["report", "--in", &file]);
    assert!(md.status.success());
    let md = String::from_utf8(md.stdout).unwrap();
    assert!(
        md.contains("| folds | pyramid-xor | random-xor | hadamard-256 |"),
        "{md}"
    );
    let loocv = md.lines().find(|l| l.starts_with("| 256")).unwrap();
    assert_eq!(loocv.matches("0.0000").count(), 3);
    let widths: Vec<usize> = md
        .lines()
        .filter(|l| l.starts_with('|'))
        .map(str::len)
        .collect();
    assert!(widths.windows(2).all(|w| w[0] == w[1]));

    let csv = antilearn(&["report", "--in", &file, "--format", "csv"]);
    assert!(csv.status.success());
    assert_eq!(
        parse_rows(&csv.stdout).unwrap(),
        read_rows(Path::new(&file)).unwrap()
    );
}

#[test]
fn malformed_report_exits_one_with_line() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "bad.csv");
    fs::write(
        &file,
        "dataset,algorithm,folds,inverted,mean_train_acc,mean_val_acc\nx,nb,4,false,0.5,0.5\nx,nb,four,false,0.5,0.5\n",
    )
    .unwrap();
    let out = antilearn(&["report", "--in", &file]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bad.csv:3"), "{}", stderr(&out));

    let out = antilearn(&["report", "--in", &path(&dir, "missing.csv")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn failing_cells_are_reported_and_exit_one() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "r.csv");
    let out = antilearn(&[
        "grid",
        "--datasets",
        "pyramid-xor",
        "--classifiers",
        "nb,svm",
        "--folds",
        "4",
        "--svm-max-passes",
        "1",
        "--out",
        &file,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("svm k=4: error"), "{}", stderr(&out));
    let rows = read_rows(Path::new(&file)).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].mean_val_acc.is_some());
    assert_eq!(rows[1].mean_val_acc, None);
}
