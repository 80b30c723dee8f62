use modspace::ode::{solve_ivp, RegistryProblem, Segment};
use serde::Serialize;

use crate::args::{Format, OdeArgs};
use crate::output::{self, check_positive, check_power_of_two, usage, CliResult, SCHEMA};

#[derive(Serialize)]
struct Summary {
    segments: usize,
    iterations: usize,
    /// `max |x(t_i) − exact(t_i)|` over the nodes.
    max_error: f64,
    /// Node residual of the integral equation.
    residual: f64,
    residual_bound: f64,
}

#[derive(Serialize)]
struct Doc<'a> {
    schema: u32,
    command: &'static str,
    problem: &'static str,
    t_end: f64,
    safety: f64,
    grid: usize,
    tol: f64,
    summary: &'a Summary,
    segments: &'a [Segment],
    nodes: Option<Vec<(f64, f64)>>,
}

pub fn run(a: &OdeArgs) -> CliResult<bool> {
    let problem = RegistryProblem::from_name(&a.problem).map_err(|_| {
        usage(format!(
            "unknown problem {:?}; expected decay, constant, cosine or logistic",
            a.problem
        ))
    })?;
    let t_end = a.t_end.unwrap_or_else(|| problem.default_end());
    check_positive("T", t_end)?;
    check_positive("tol", a.tol)?;
    check_power_of_two("grid", a.grid)?;
    if !(a.safety > 0.0 && a.safety < 1.0) {
        return Err(usage(format!("--safety must lie in (0, 1), got {}", a.safety)));
    }

    let p = problem.problem(t_end)?;
    let sol = solve_ivp(&p, a.tol, a.grid, a.safety)?;
    let summary = Summary {
        segments: sol.segments.len(),
        iterations: sol.total_iterations(),
        max_error: sol.max_error(|t| problem.exact(t)),
        residual: sol.residual(&p),
        residual_bound: a.tol * t_end,
    };

    let doc = |nodes| Doc {
        schema: SCHEMA,
        command: "ode",
        problem: problem.name(),
        t_end,
        safety: a.safety,
        grid: a.grid,
        tol: a.tol,
        summary: &summary,
        segments: &sol.segments,
        nodes,
    };
    let body = match a.output.format {
        Format::Csv => sol.to_csv(),
        Format::Json => output::json(&doc(Some(sol.nodes())))?,
    };
    output::emit(&a.output, &body)?;
    if let Some(path) = &a.trace {
        output::write_to(Some(path), &output::json(&doc(None))?)?;
    }

    eprintln!(
        "ode {}: {} segments, {} iterations, max error {:.3e}, residual {:.3e}",
        problem.name(),
        summary.segments,
        summary.iterations,
        summary.max_error,
        summary.residual
    );
    Ok(true)
}
