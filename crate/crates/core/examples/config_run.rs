//! Config-driven runs: the same task pipeline the binary uses, fed from an
//! inline TOML document and from the shipped default.

use rindler_gauss::cli::{run, RunConfig, RunOptions, Task};

const SPECFUN: &str = r#"
task = "specfun"

[specfun]
nu = [0.0, 1.0, 4.0]
x = { start = 0.5, stop = 2.0, count = 4 }
"#;

fn main() -> rindler_gauss::Result<()> {
    let options = RunOptions::default();

    let inline = RunConfig::parse(SPECFUN, ".")?;
    print!("{}", run(Task::Specfun, &inline, &options)?.text);

    let output = run(Task::Check, &RunConfig::default_config(), &options)?;
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", output.text);
    println!("all checks passed: {}", output.passed);
    Ok(())
}
