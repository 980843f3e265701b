use serde::Serialize;

use secmux::verify::{run_suite, Suite, SuiteReport, VerifyConfig};
use secmux::Execution;

use crate::config::RunConfig;
use crate::output::OutputDir;
use crate::Failure;

#[derive(Debug, Serialize)]
struct SuiteOutcome {
    suite: Suite,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<SuiteReport>,
    /// Set when the suite could not run to completion.
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    schema: u32,
    workflow: &'static str,
    execution: Execution,
    config: VerifyConfig,
    passed: bool,
    suites: Vec<SuiteOutcome>,
}

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let mut vcfg = cfg.verify.clone();
    vcfg.seed = cfg.seed;
    let mut suites: Vec<Suite> = Vec::new();
    for s in &cfg.suites {
        if !suites.contains(s) {
            suites.push(*s);
        }
    }

    let outcomes: Vec<SuiteOutcome> = suites
        .iter()
        .map(|&suite| match run_suite(suite, &vcfg, cfg.execution) {
            Ok(r) => SuiteOutcome { suite, passed: r.passed, report: Some(r), error: None },
            Err(e) => SuiteOutcome { suite, passed: false, report: None, error: Some(e.to_string()) },
        })
        .collect();
    let passed = outcomes.iter().all(|o| o.passed);
    let report = VerifyReport {
        schema: crate::config::SCHEMA_VERSION,
        workflow: "verify",
        execution: cfg.execution,
        config: vcfg,
        passed,
        suites: outcomes,
    };

    for o in &report.suites {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        match (&o.report, &o.error) {
            (Some(r), _) => {
                println!(
                    "{tag} {}: {} cases, {} failures, worst margin {:.3e}",
                    o.suite, r.cases, r.failures, r.worst_margin
                );
                for note in &r.notes {
                    println!("     {note}");
                }
            }
            (None, Some(e)) => println!("{tag} {}: {e}", o.suite),
            (None, None) => println!("{tag} {}", o.suite),
        }
    }

    let out = OutputDir::create(&cfg.out_dir()).map_err(Failure::Config)?;
    out.write_json("report.json", &report).map_err(Failure::Config)?;
    println!("wrote {}", out.path("report.json").display());
    if passed {
        Ok(())
    } else {
        let failed = report.suites.iter().filter(|o| !o.passed).count();
        Err(Failure::Verification(format!("{failed} suite(s) failed")))
    }
}
