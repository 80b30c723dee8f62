use modspace::gv::example_x_beta;
use modspace::modular::BisectOptions;
use modspace::sequences::{
    delta2_probe, lambda_profile, metric_vs_modular_convergence, ConvergenceVerdicts, Delta2Probe, LambdaProfile,
};
use modspace::{GvModular, PhiFunction};
use serde::Serialize;

use crate::args::{Format, ProfileArgs};
use crate::output::{self, check_grid, check_positive, check_power_of_two, usage, CliResult, SCHEMA};

/// Bisection tolerance of the metric verdict.
const METRIC_TOL: f64 = 1e-6;

#[derive(Serialize)]
struct Doc<'a> {
    schema: u32,
    command: &'static str,
    betas: &'a [f64],
    grid: usize,
    tol: f64,
    tail: usize,
    lambda0: f64,
    profile: &'a LambdaProfile,
    delta2: Delta2Probe,
    convergence: ConvergenceVerdicts,
}

pub fn run(a: &ProfileArgs) -> CliResult<bool> {
    check_grid("beta", &a.beta, false)?;
    if a.beta.iter().any(|&b| b > 1.0) {
        return Err(usage("--beta values must lie in (0, 1]"));
    }
    check_grid("lambda", &a.lambda, true)?;
    check_positive("lambda0", a.lambda0)?;
    check_positive("tol", a.tol)?;
    check_power_of_two("grid", a.grid)?;
    if a.tail == 0 || a.tail > a.beta.len() {
        return Err(usage(format!("--tail must lie in 1..={}", a.beta.len())));
    }

    let base = example_x_beta(0.0, a.grid)?;
    let seq = a
        .beta
        .iter()
        .map(|&b| example_x_beta(b, a.grid))
        .collect::<modspace::Result<Vec<_>>>()?;
    let m = GvModular::new(PhiFunction::ExpMinusOne, base.clone());
    let profile = lambda_profile(&m, &seq, &base, &a.lambda);
    let delta2 = delta2_probe(&m, &seq, &base, a.lambda0, a.tol, a.tail);
    let convergence = metric_vs_modular_convergence(
        &m,
        &seq,
        &base,
        &a.lambda,
        a.tol,
        a.tail,
        BisectOptions::with_tol(METRIC_TOL),
    );

    let body = match a.output.format {
        Format::Csv => profile.to_csv(),
        Format::Json => output::json(&Doc {
            schema: SCHEMA,
            command: "profile",
            betas: &a.beta,
            grid: a.grid,
            tol: a.tol,
            tail: a.tail,
            lambda0: a.lambda0,
            profile: &profile,
            delta2,
            convergence,
        })?,
    };
    output::emit(&a.output, &body)?;

    eprintln!(
        "profile: modular convergence {}, metric convergence {}, convergence at every lambda {}, delta2 {}",
        convergence.modular_converges,
        convergence.metric_converges,
        convergence.all_lambda_converges,
        if delta2.refutes() { "refuted" } else { "not refuted" }
    );
    Ok(true)
}
