//! The ten acceptance criteria, run as one seeded suite at the required sizes.
//!
//! Each criterion is a set of suite properties together with the tolerance
//! and the minimum instance count it must be checked at. The suite reports
//! the tolerance it actually applied, so a loosened pin shows up as FAIL.

use nclp_cli::config::DEFAULT_REAL_PARTS;
use nclp_cli::{run_suite, SuiteConfig, SuiteReport};

const TRIALS: usize = 2000;
const TIME_LIMIT_SECONDS: f64 = 60.0;

struct Criterion {
    number: u8,
    title: &'static str,
    min_instances: usize,
    /// (property, required tolerance)
    properties: &'static [(&'static str, f64)],
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        number: 1,
        title: "Hölder-Kosaki inequality",
        min_instances: 2000,
        properties: &[("holder_kosaki", 1e-9)],
    },
    Criterion {
        number: 2,
        title: "Hölder equality witness",
        min_instances: 500,
        properties: &[("holder_witness", 1e-8)],
    },
    Criterion {
        number: 3,
        title: "tensor isometry certificate",
        min_instances: 1000,
        properties: &[("tensor_isometry", 1e-8), ("comultiply_roundtrip", 1e-9)],
    },
    Criterion {
        number: 4,
        title: "Douglas division",
        min_instances: 1000,
        properties: &[("douglas_division", 1e-9), ("douglas_unsolvable", 1e-9)],
    },
    Criterion {
        number: 5,
        title: "graded polar decomposition",
        min_instances: 1000,
        properties: &[("polar", 1e-9)],
    },
    Criterion {
        number: 6,
        title: "cyclic generator and membership",
        min_instances: 500,
        properties: &[("cyclic_generator", 1e-8)],
    },
    Criterion {
        number: 7,
        title: "internal hom",
        min_instances: 300,
        properties: &[("hom_roundtrip", 1e-10), ("hom_norm_real", 1e-8), ("hom_norm_imaginary", 1e-6)],
    },
    Criterion {
        number: 8,
        title: "modular structure",
        min_instances: 500,
        properties: &[("modular_structure", 1e-9)],
    },
    Criterion {
        number: 9,
        title: "commutative oracle",
        min_instances: 2000,
        properties: &[("commutative_oracle", 1e-12)],
    },
    Criterion {
        number: 10,
        title: "quasinorm laws",
        min_instances: 2000,
        properties: &[("quasinorm_laws", 1e-9)],
    },
];

fn evaluate(c: &Criterion, report: &SuiteReport) -> Result<String, String> {
    let mut notes = Vec::new();
    for &(name, required) in c.properties {
        let p = report.property(name).ok_or_else(|| format!("{name}: not in report"))?;
        if p.criterion != Some(c.number) {
            return Err(format!("{name}: tagged with criterion {:?}", p.criterion));
        }
        if p.tolerance > required {
            return Err(format!("{name}: applied tolerance {:e} looser than {:e}", p.tolerance, required));
        }
        if p.trials < c.min_instances {
            return Err(format!("{name}: {} trials < {}", p.trials, c.min_instances));
        }
        if p.failed > 0 {
            return Err(format!(
                "{name}: {} of {} failed, worst {:e} at trial {:?}{}",
                p.failed,
                p.trials,
                p.worst_residual,
                p.worst_trial,
                p.first_error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
            ));
        }
        notes.push(format!("{name} worst {:.2e} <= {:e}", p.worst_residual, p.tolerance));
    }
    Ok(notes.join("; "))
}

#[test]
fn acceptance_criteria() {
    let config = SuiteConfig {
        trials: TRIALS,
        ..SuiteConfig::default()
    };
    // the sampling domain of criterion 1
    assert_eq!(config.block_shapes, vec![vec![1], vec![2], vec![1, 1], vec![3], vec![2, 2]]);
    assert_eq!(DEFAULT_REAL_PARTS, [0.0, 1.0 / 3.0, 0.5, 1.0, 1.5]);
    assert_eq!(config.imaginary_spread, 2.0);

    let report = run_suite(&config).expect("suite runs");
    let mut failures = 0;
    for c in &CRITERIA {
        match evaluate(c, &report) {
            Ok(notes) => println!("PASS criterion {:>2} ({}): {notes}", c.number, c.title),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {:>2} ({}): {why}", c.number, c.title);
            }
        }
    }
    let fast = report.duration_seconds < TIME_LIMIT_SECONDS;
    println!(
        "{} suite time {:.1}s for {} properties x {} trials (limit {TIME_LIMIT_SECONDS}s)",
        if fast { "PASS" } else { "FAIL" },
        report.duration_seconds,
        report.properties.len(),
        report.trials
    );
    assert!(fast, "suite exceeded the time limit");
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
