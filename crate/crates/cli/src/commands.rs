use std::fmt::Write as _;
use std::time::Instant;

use quadtrace_core::chebyshev::interpolate;
use quadtrace_core::{
    estimate_interval, load_matrix_market, random_symmetric, Evaluator, Execution, Interval,
    LoadedMatrix, PolynomialCoefficients, PowerIteration, ScaledOperator, SpectralInterval,
    SymmetricOperator,
};

use crate::args::{
    EstimateArgs, ExecutionArgs, InterpolateArgs, IntervalSource, MatrixArgs, MatvecCountArgs,
    OutputArgs, ReproduceArgs,
};
use crate::error::{CliError, Result};
use crate::functions::FunctionSpec;
use crate::paired::run_paired;
use crate::report::{
    self, BenchResult, EvaluatorTiming, ExactTraces, MatrixConfig, RunConfig, Timing,
};

/// Points in the residual grid printed by `interpolate`.
pub const RESIDUAL_GRID: usize = 1000;

pub const FULL_SCALE_DIM: usize = 5000;
pub const MIN_DESK_DIM: usize = 50;

pub struct Interpolated {
    pub coeffs: PolynomialCoefficients,
    /// `max |p(x) - f(x)|` over an equispaced grid.
    pub residual: f64,
}

pub fn interpolate_function(args: &InterpolateArgs) -> Result<Interpolated> {
    if args.degree == 0 {
        return Err(CliError::Usage(
            "interpolation degree must be at least 1".into(),
        ));
    }
    let interval = Interval::new(args.interval.lo, args.interval.hi)?;
    let coeffs = interpolate(|x| args.function.eval(x), args.degree, interval)?;
    let residual = (0..RESIDUAL_GRID)
        .map(|k| {
            let x = interval.lo()
                + (interval.hi() - interval.lo()) * k as f64 / (RESIDUAL_GRID - 1) as f64;
            (coeffs.eval(x) - args.function.eval(x)).abs()
        })
        .fold(0.0, f64::max);
    Ok(Interpolated { coeffs, residual })
}

pub fn matvec_count(args: &MatvecCountArgs) -> String {
    let evaluators = if args.evaluators.is_empty() {
        Evaluator::ALL.to_vec()
    } else {
        args.evaluators.clone()
    };
    let mut out = String::new();
    for e in evaluators {
        let _ = writeln!(
            out,
            "{:<20} n={:<4} matvecs={:<5} ({})",
            e.name(),
            args.degree,
            e.matvec_count(args.degree),
            e.matvec_formula()
        );
    }
    out
}

fn load_operator(args: &MatrixArgs) -> Result<(LoadedMatrix, MatrixConfig)> {
    match (&args.matrix, args.synthetic) {
        (Some(path), None) => Ok((
            load_matrix_market(path)?,
            MatrixConfig::File { path: path.clone() },
        )),
        (None, Some(0)) => Err(CliError::Usage(
            "--synthetic dimension must be positive".into(),
        )),
        (None, Some(d)) => Ok((
            LoadedMatrix::Dense(random_symmetric(d, args.matrix_seed)),
            MatrixConfig::Synthetic {
                seed: args.matrix_seed,
            },
        )),
        _ => Err(CliError::Usage(
            "give exactly one of --matrix or --synthetic".into(),
        )),
    }
}

/// Runs `f` with the requested execution mode; returns its result, the mode
/// and the number of threads used.
fn with_execution<T>(
    args: &ExecutionArgs,
    f: impl FnOnce(Execution) -> Result<T> + Send,
) -> Result<(T, Execution, usize)>
where
    T: Send,
{
    if args.serial {
        return Ok((f(Execution::Serial)?, Execution::Serial, 1));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Resources(format!("cannot start thread pool: {e}")))?;
    let threads = pool.current_num_threads();
    let value = pool.install(|| f(Execution::Parallel))?;
    Ok((value, Execution::Parallel, threads))
}

pub fn estimate(args: &EstimateArgs) -> Result<BenchResult> {
    run_estimate("estimate", args)
}

fn run_estimate(command: &str, args: &EstimateArgs) -> Result<BenchResult> {
    let started = Instant::now();
    if args.probes == 0 {
        return Err(CliError::Usage("--probes must be at least 1".into()));
    }
    if args.evaluators.is_empty() {
        return Err(CliError::Usage(
            "--evaluators must name at least one evaluator".into(),
        ));
    }
    if args.normalize && args.coeffs.is_some() {
        return Err(CliError::Usage(
            "--normalize only applies with --function".into(),
        ));
    }
    if !(args.margin.is_finite() && args.margin >= 0.0) {
        return Err(CliError::Usage(
            "--margin must be a non-negative number".into(),
        ));
    }

    let (op, matrix) = load_operator(&args.matrix)?;
    let file_coeffs = args
        .coeffs
        .as_ref()
        .map(PolynomialCoefficients::load)
        .transpose()?;

    let needs_eigenvalues =
        args.exact_trace || (file_coeffs.is_none() && args.interval == IntervalSource::Exact);
    let eigenvalues = if needs_eigenvalues {
        Some(op.to_dense().eigenvalues()?)
    } else {
        None
    };

    let spectral_interval = match (&file_coeffs, args.interval) {
        (Some(c), _) => {
            let iv = c.interval();
            SpectralInterval::with_margin(iv.lo(), iv.hi(), 0.0, true)?
        }
        (None, IntervalSource::Exact) => {
            let ev = eigenvalues.as_deref().expect("eigenvalues computed above");
            SpectralInterval::with_margin(ev[0], ev[ev.len() - 1], 0.0, true)?
        }
        (None, IntervalSource::Power) => estimate_interval(
            &op,
            &PowerIteration {
                iters: args.power_iters.max(1),
                tol: args.power_tol,
                seed: args.seed,
                margin: args.margin,
            },
        )?,
        (None, IntervalSource::User(b)) => SpectralInterval::with_margin(b.lo, b.hi, 0.0, true)?,
    };

    let coeffs = match (&file_coeffs, &args.function) {
        (Some(c), _) => c.clone(),
        (None, Some(f)) => {
            let domain = if args.normalize {
                Interval::CANONICAL
            } else {
                spectral_interval.interval()
            };
            polynomial_for(f, args.degree, domain)?
        }
        (None, None) => {
            return Err(CliError::Usage("give --function or --coeffs".into()));
        }
    };

    let exact = eigenvalues.as_ref().filter(|_| args.exact_trace).map(|ev| {
        let xs: Vec<f64> = ev
            .iter()
            .map(|&l| {
                if args.normalize {
                    spectral_interval.map(l)
                } else {
                    l
                }
            })
            .collect();
        ExactTraces {
            trace_f: args
                .function
                .as_ref()
                .map(|f| xs.iter().map(|&x| f.eval(x)).sum()),
            trace_p: xs.iter().map(|&x| coeffs.eval(x)).sum(),
        }
    });

    let scaled = ScaledOperator::new(&op, spectral_interval);
    let (paired, execution, threads) = with_execution(&args.execution, |exec| {
        run_paired(
            &scaled,
            &coeffs,
            &args.evaluators,
            args.probes,
            args.seed,
            args.terms,
            exec,
        )
    })?;

    let timing = Timing {
        execution: match execution {
            Execution::Serial => "serial".into(),
            Execution::Parallel => "parallel".into(),
        },
        threads,
        evaluators: paired
            .runs
            .iter()
            .map(|r| EvaluatorTiming {
                evaluator: r.evaluator,
                wall_seconds: r.wall_seconds,
            })
            .collect(),
        total_seconds: started.elapsed().as_secs_f64(),
    };
    let config = RunConfig {
        matrix,
        dim: op.dim(),
        function: if file_coeffs.is_some() {
            None
        } else {
            args.function.clone()
        },
        coefficients_file: args.coeffs.clone(),
        degree: coeffs.degree(),
        probes: args.probes,
        probe_seed: args.seed,
        evaluators: args.evaluators.clone(),
        interval_source: args.interval,
        normalize: args.normalize,
        terms: args.terms,
    };
    Ok(BenchResult::new(
        command,
        config,
        spectral_interval,
        exact,
        paired,
        timing,
    ))
}

fn polynomial_for(
    f: &FunctionSpec,
    degree: usize,
    domain: Interval,
) -> Result<PolynomialCoefficients> {
    if degree == 0 {
        let mid = domain.from_canonical(0.0);
        let value = f.eval(mid);
        if !value.is_finite() {
            return Err(quadtrace_core::Error::NonFiniteSample { node: mid, value }.into());
        }
        return Ok(PolynomialCoefficients::chebyshev(vec![value])?.with_interval(domain));
    }
    Ok(interpolate(|x| f.eval(x), degree, domain)?)
}

/// The estimate configuration a `reproduce` run uses.
pub fn reproduce_config(args: &ReproduceArgs) -> Result<EstimateArgs> {
    let dim = if args.full { FULL_SCALE_DIM } else { args.desk };
    if dim < MIN_DESK_DIM {
        return Err(CliError::Usage(format!(
            "desk dimension must be at least {MIN_DESK_DIM}"
        )));
    }
    Ok(EstimateArgs {
        matrix: MatrixArgs {
            matrix: None,
            synthetic: Some(dim),
            matrix_seed: args.matrix_seed,
        },
        function: Some(FunctionSpec::ExpScaled(10.0)),
        coeffs: None,
        degree: 20,
        probes: args.probes,
        seed: args.seed,
        evaluators: vec![Evaluator::OneSidedChebyshev, Evaluator::TwoSidedChebyshev],
        interval: IntervalSource::Exact,
        power_iters: 500,
        power_tol: 1e-8,
        margin: 0.0,
        normalize: true,
        terms: true,
        exact_trace: true,
        output: args.output.clone(),
        execution: args.execution.clone(),
    })
}

pub fn reproduce(args: &ReproduceArgs) -> Result<BenchResult> {
    let config = reproduce_config(args)?;
    let dim = config.matrix.synthetic.unwrap_or_default();
    // The matrix, its nalgebra copy and the eigensolver workspace.
    let mut probe: Vec<f64> = Vec::new();
    if probe.try_reserve_exact(3 * dim * dim).is_err() {
        return Err(CliError::Resources(format!(
            "not enough memory for a dense {dim} x {dim} run; try `reproduce --desk 200`"
        )));
    }
    drop(probe);
    run_estimate("reproduce", &config)
}

pub fn reproduce_summary(result: &BenchResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dimension                     {}", result.config.dim);
    let _ = writeln!(
        out,
        "function / degree / probes    {} / {} / {}",
        result
            .config
            .function
            .as_ref()
            .map_or("-".to_string(), |f| f.to_string()),
        result.config.degree,
        result.config.probes
    );
    if let Some(exact) = &result.exact {
        if let Some(tf) = exact.trace_f {
            let _ = writeln!(out, "exact trace f(A)              {tf:.6e}");
        }
        let _ = writeln!(out, "exact trace p(A)              {:.6e}", exact.trace_p);
    }
    for (run, t) in result.evaluators.iter().zip(&result.timing.evaluators) {
        let _ = writeln!(
            out,
            "{:<30}{:.6e}  ({} matvecs, {:.3} s)",
            format!("{} estimate", run.evaluator),
            run.estimate.mean,
            run.total_matvecs,
            t.wall_seconds
        );
    }
    for c in &result.comparisons {
        let _ = writeln!(out, "{} vs {}", c.first, c.second);
        let _ = writeln!(
            out,
            "  aggregate rel. difference   {:.2e}",
            c.aggregate_rel_diff
        );
        let _ = writeln!(
            out,
            "  max per-probe rel. diff.    {:.2e}",
            c.max_per_probe_rel_diff
        );
        if let Some(t) = &c.per_term {
            let _ = writeln!(
                out,
                "  max per-term rel. diff.     {:.2e}",
                t.max_rel_diff_large
            );
            let _ = writeln!(
                out,
                "  max small-term diff.        {:.2e} of largest term",
                t.max_abs_diff_small_scaled
            );
        }
    }
    let _ = writeln!(
        out,
        "paired probes                 {}",
        result.paired_probes
    );
    out
}

/// Writes the result in the requested format (stdout when no path) and the
/// optional CSV table. Nothing is written unless the run succeeded.
pub fn write_result(result: &BenchResult, output: &OutputArgs) -> Result<()> {
    let body = result.render(output.format);
    match &output.out {
        Some(path) => report::write_file(path, &body)?,
        None => print!("{body}"),
    }
    if let Some(path) = &output.csv {
        report::write_file(path, &result.to_csv())?;
    }
    Ok(())
}
