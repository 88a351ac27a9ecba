//! Drives the `axisym` command line in-process: generate data, test it, and run
//! a small study. Equivalent shell commands are printed alongside.
//!
//! ```bash
//! cargo run --release -p axisym --example command_line
//! ```

use axisym::cli::run;

fn main() {
    let dir = std::env::temp_dir().join("axisym-cli-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let data = dir.join("data.csv");
    let report = dir.join("report.json");
    let data_s = data.to_string_lossy().into_owned();
    let report_s = report.to_string_lossy().into_owned();

    let commands: Vec<Vec<&str>> = vec![
        vec![
            "axisym",
            "gen",
            "--kind",
            "rotated_gaussian",
            "--angle",
            "0.3",
            "--n",
            "600",
            "--seed",
            "1",
            "--header",
            "--output",
            &data_s,
        ],
        vec![
            "axisym",
            "test",
            "--input",
            &data_s,
            "--alpha",
            "0.05",
            "--bootstrap",
            "199",
            "--seed",
            "42",
            "--output",
            &report_s,
        ],
        vec![
            "axisym",
            "test",
            "--input",
            &data_s,
            "--bootstrap",
            "99",
            "--h",
            "0.6,0.8",
            "--output",
            &report_s,
        ],
        vec![
            "axisym",
            "simulate",
            "--kind",
            "skew_product",
            "--n",
            "150,300",
            "--reps",
            "20",
            "--bootstrap",
            "99",
            "--seed",
            "7",
        ],
    ];
    for args in commands {
        println!("$ {}", args.join(" "));
        let code = run(args);
        println!("(exit {code})\n");
    }
}
