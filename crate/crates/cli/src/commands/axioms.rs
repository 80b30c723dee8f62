use modspace::modular::{
    canonical_modular, check_axioms, AxiomMode, AxiomReport, AxiomVerdict, CanonicalKind, Violation,
};
use modspace::{AcFunction, GvModular, PhiFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{AxiomsArgs, Format, ModeChoice, ModularChoice};
use crate::output::{self, check_grid, check_power_of_two, usage, CliResult, SCHEMA};

fn euclid(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Planar points on the lattice `0.25·Z²`, so distinct points stay at least
/// `0.25` apart and stay distinguishable on the default grid.
fn lattice_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<[f64; 2]> {
    (0..count)
        .map(|_| {
            [
                0.25 * rng.gen_range(-40..=40) as f64,
                0.25 * rng.gen_range(-40..=40) as f64,
            ]
        })
        .collect()
}

fn gv_points(rng: &mut ChaCha8Rng, count: usize, n: usize) -> CliResult<Vec<AcFunction>> {
    (0..count)
        .map(|_| {
            let d = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            AcFunction::from_samples(0.0, 1.0, 0.0, d).map_err(Into::into)
        })
        .collect()
}

#[derive(Serialize)]
struct Row {
    axiom: &'static str,
    verdict: AxiomVerdict,
    /// Recorded witnesses; capped per axiom.
    witnesses: usize,
}

#[derive(Serialize)]
struct Doc<'a> {
    schema: u32,
    command: &'static str,
    modular: String,
    phi: Option<String>,
    seed: u64,
    points: usize,
    lambdas: &'a [f64],
    passed: bool,
    mode: AxiomMode,
    checked: usize,
    verdicts: Vec<Row>,
    violations: &'a [Violation],
}

fn rows(report: &AxiomReport) -> Vec<Row> {
    report
        .verdicts
        .iter()
        .map(|&(axiom, verdict)| Row {
            axiom: axiom.label(),
            verdict,
            witnesses: report.violations_of(axiom).count(),
        })
        .collect()
}

fn modular_name(choice: ModularChoice) -> &'static str {
    match choice {
        ModularChoice::Velocity => "velocity",
        ModularChoice::Constant => "constant",
        ModularChoice::Threshold => "threshold",
        ModularChoice::GvphiExp => "gvphi-exp",
        ModularChoice::Gvphi => "gvphi",
    }
}

fn mode_name(mode: ModeChoice) -> &'static str {
    match mode {
        ModeChoice::Pseudomodular => "pseudomodular",
        ModeChoice::Modular => "modular",
        ModeChoice::Strict => "strict",
        ModeChoice::Convex => "convex",
    }
}

pub fn run(a: &AxiomsArgs) -> CliResult<bool> {
    if a.points == 0 {
        return Err(usage("--points must be at least 1"));
    }
    check_grid("lambda", &a.lambda, true)?;
    check_power_of_two("grid", a.grid)?;
    let mode = match a.mode {
        ModeChoice::Pseudomodular => AxiomMode::Pseudomodular,
        ModeChoice::Modular => AxiomMode::Modular,
        ModeChoice::Strict => AxiomMode::Strict,
        ModeChoice::Convex => AxiomMode::Convex,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (report, phi) = match a.modular {
        ModularChoice::Velocity | ModularChoice::Constant | ModularChoice::Threshold => {
            let kind = match a.modular {
                ModularChoice::Velocity => CanonicalKind::Velocity,
                ModularChoice::Constant => CanonicalKind::Constant,
                _ => CanonicalKind::Threshold,
            };
            let m = canonical_modular(euclid, kind, [0.0; 2]);
            (
                check_axioms(&m, &lattice_points(&mut rng, a.points), &a.lambda, mode)?,
                None,
            )
        }
        ModularChoice::GvphiExp | ModularChoice::Gvphi => {
            let phi = if a.modular == ModularChoice::GvphiExp {
                PhiFunction::ExpMinusOne
            } else {
                a.phi
            };
            let m = GvModular::anchored_at_zero(phi, 0.0, 1.0, a.grid)?;
            let points = gv_points(&mut rng, a.points, a.grid)?;
            (check_axioms(&m, &points, &a.lambda, mode)?, Some(phi.to_string()))
        }
    };

    let passed = report.passed();
    let body = match a.output.format {
        Format::Csv => output::csv(&rows(&report))?,
        Format::Json => output::json(&Doc {
            schema: SCHEMA,
            command: "axioms",
            modular: modular_name(a.modular).to_string(),
            phi,
            seed: a.seed,
            points: a.points,
            lambdas: &a.lambda,
            passed,
            mode,
            checked: report.checked,
            verdicts: rows(&report),
            violations: &report.violations,
        })?,
    };
    output::emit(&a.output, &body)?;

    let failed: Vec<&str> = report
        .verdicts
        .iter()
        .filter(|(_, v)| *v == AxiomVerdict::Fail)
        .map(|(ax, _)| ax.label())
        .collect();
    eprintln!(
        "axioms {} ({} mode): {} over {} checks{}",
        modular_name(a.modular),
        mode_name(a.mode),
        if passed { "pass" } else { "FAIL" },
        report.checked,
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failed: {}", failed.join(", "))
        }
    );
    Ok(passed)
}
