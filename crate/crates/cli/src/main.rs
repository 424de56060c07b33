//! `triband`: reports on the spectrum, resolvent and finite sections of
//! U(s,r,s).
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid parameters,
//! 3 resolvent undefined, 4 verification failure.

mod literal;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use triband_core::eigen::{finite_section_eigenvalues, pseudospectrum_grid, Region};
use triband_core::resolvent::{dense_solve_oracle, ResolventKernel, NEAR_SEGMENT_MARGIN};
use triband_core::spectrum::DEFAULT_TOL;
use triband_core::verify::{self, Preset};
use triband_core::{
    classify_lambda, fine_spectrum_report, segment_membership, Error, Execution, FiniteSequence, SpaceKind, SpaceSpec,
    SpectralClass, TriBandParams,
};

use literal::{parse_complex, parse_complex_list, parse_real_literal};
use report::*;

#[derive(Debug, Parser)]
#[command(
    name = "triband",
    version,
    about = "Spectral reports for the tridiagonal Toeplitz operator U(s,r,s)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fine spectrum on l_p or bv_p.
    Spectrum {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, value_enum, default_value_t = Space::Lp)]
        space: Space,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        p: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Classify a point by the characteristic-root dichotomy.
    Classify {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Unit-circle tolerance on |alpha1|.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Apply the resolvent to a finite right-hand side.
    Resolve {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Comma-separated complex entries y_0, y_1, ...
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Number of output coordinates.
        #[arg(long)]
        k: usize,
        /// Cross-check against a dense solve of the order-N truncation.
        #[arg(long)]
        oracle: Option<usize>,
        /// Accept points arbitrarily close to the spectrum.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalues of the order-N truncation.
    Eigs {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Grid of 1/sigma_min(U_N - lambda I) over a rectangle.
    Pseudospec {
        #[command(flatten)]
        op: OperatorArgs,
        /// re_min,re_max,im_min,im_max
        #[arg(long, allow_hyphen_values = true)]
        region: String,
        /// Grid points along the real axis (and the imaginary axis unless --res-im is given).
        #[arg(long)]
        res: usize,
        #[arg(long)]
        res_im: Option<usize>,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the seeded self-check suite.
    Verify {
        #[arg(long, default_value = "paper")]
        preset: Preset,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct OperatorArgs {
    /// Diagonal entry, e.g. `1`, `0.5-2i`.
    #[arg(long, allow_hyphen_values = true)]
    r: String,
    /// Off-diagonal entry.
    #[arg(long, allow_hyphen_values = true)]
    s: String,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    Lp,
    Bvp,
}

enum Failure {
    Invalid(String),
    ResolventUndefined(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::ResolventUndefined(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::ResolventUndefined(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResolventUndefined { .. } | Error::SingularTruncation { .. } => {
                Failure::ResolventUndefined(e.to_string())
            }
            other => Failure::Invalid(other.to_string()),
        }
    }
}

struct Outcome {
    body: String,
    verification_failed: bool,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self {
            body,
            verification_failed: false,
        }
    }
}

fn parse_operator(args: &OperatorArgs) -> Result<(ParsedOperator, TriBandParams), Failure> {
    let r = parse_complex(&args.r).map_err(Failure::Invalid)?;
    let s = parse_complex(&args.s).map_err(Failure::Invalid)?;
    let op = TriBandParams::new(r.value, s.value)?;
    if op.is_degenerate() {
        return Err(Error::DegenerateOperator.into());
    }
    Ok((ParsedOperator::new(r.value, s.value), op))
}

fn render<I: Serialize, R: Serialize>(
    format: Format,
    envelope: Envelope<I, R>,
    csv: impl FnOnce() -> String,
) -> String {
    match format {
        Format::Json => envelope.to_json(),
        Format::Csv => csv(),
    }
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Spectrum { op, space, p, out } => {
            let (parsed, params) = parse_operator(op)?;
            let p_lit = parse_real_literal(p).map_err(Failure::Invalid)?;
            let kind = match space {
                Space::Lp => SpaceKind::SequenceLp,
                Space::Bvp => SpaceKind::SequenceBVp,
            };
            let spec = SpaceSpec::new(kind, p_lit.value)?;
            let rep = fine_spectrum_report(&params, spec)?;
            let space_name = match space {
                Space::Lp => "lp",
                Space::Bvp => "bvp",
            };
            #[derive(Serialize)]
            struct Input<'a> {
                r: &'a str,
                s: &'a str,
                space: &'a str,
                p: &'a str,
            }
            let result = SpectrumResult {
                space: space_name.into(),
                p: num(p_lit.value),
                spectrum: rep.spectrum.into(),
                point: rep.point.into(),
                residual: rep.residual.into(),
                continuous: rep.continuous.into(),
                resolvent_set: rep.resolvent_set.into(),
                adjoint_point: rep.adjoint_point.into(),
            };
            let envelope = Envelope::new(
                "spectrum",
                Input {
                    r: &op.r,
                    s: &op.s,
                    space: space_name,
                    p,
                },
                result,
            )
            .with_operator(parsed);
            Ok(Outcome::ok(render(
                out.format.unwrap_or(Format::Json),
                envelope,
                || {
                    spectrum_csv(&[
                        ("spectrum", rep.spectrum),
                        ("point", rep.point),
                        ("residual", rep.residual),
                        ("continuous", rep.continuous),
                        ("resolvent_set", rep.resolvent_set),
                        ("adjoint_point", rep.adjoint_point),
                    ])
                },
            )))
        }
        Command::Classify { op, lambda, tol, out } => {
            let (parsed, params) = parse_operator(op)?;
            let lam = parse_complex(lambda).map_err(Failure::Invalid)?;
            if !tol.is_finite() || *tol < 0.0 {
                return Err(Failure::Invalid(format!(
                    "tolerance must be a finite non-negative number, got {tol}"
                )));
            }
            let c = classify_lambda(&params, lam.value, *tol)?;
            let on_segment = segment_membership(&params, lam.value, *tol)?;
            let result = ClassifyResult {
                class: match c.class {
                    SpectralClass::ResolventSet => "ResolventSet",
                    SpectralClass::ContinuousSpectrum => "ContinuousSpectrum",
                },
                on_segment,
                endpoint: c.roots.is_double_root,
                ratio_q: c.roots.ratio_q.into(),
                alpha1: c.roots.alpha1.into(),
                alpha2: c.roots.alpha2.into(),
                alpha1_abs: num(c.alpha1_abs),
                double_root: c.roots.is_double_root,
                distance_to_segment: num(c.distance_to_segment),
            };
            #[derive(Serialize)]
            struct Input<'a> {
                r: &'a str,
                s: &'a str,
                lambda: &'a str,
            }
            let csv = classify_csv(&result);
            let envelope = Envelope::new(
                "classify",
                Input {
                    r: &op.r,
                    s: &op.s,
                    lambda,
                },
                result,
            )
            .with_operator(parsed);
            Ok(Outcome::ok(render(
                out.format.unwrap_or(Format::Json),
                envelope,
                || csv,
            )))
        }
        Command::Resolve {
            op,
            lambda,
            y,
            k,
            oracle,
            force,
            out,
        } => {
            let (parsed, params) = parse_operator(op)?;
            let lam = parse_complex(lambda).map_err(Failure::Invalid)?;
            let entries = parse_complex_list(y).map_err(Failure::Invalid)?;
            let y_seq = FiniteSequence::new(entries)?;
            if let Some(order) = oracle {
                if *order < *k {
                    return Err(Failure::Invalid(format!("--oracle {order} must be at least --k {k}")));
                }
            }
            let margin = if *force { 0.0 } else { NEAR_SEGMENT_MARGIN };
            let kernel = ResolventKernel::with_margin(&params, lam.value, margin)?;
            let x = kernel.apply(&y_seq, *k);
            let oracle_x = match oracle {
                Some(order) => Some(dense_solve_oracle(&params, lam.value, &y_seq, *order)?.entries()[..*k].to_vec()),
                None => None,
            };
            let rows: Vec<ResolveRow> = x
                .iter()
                .enumerate()
                .map(|(i, xi)| ResolveRow {
                    k: i,
                    x: (*xi).into(),
                    oracle: oracle_x.as_ref().map(|o| o[i].into()),
                    diff: oracle_x.as_ref().map(|o| num((xi - o[i]).norm())),
                })
                .collect();
            let max_diff = oracle_x
                .as_ref()
                .map(|o| num(x.iter().zip(o).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)));
            #[derive(Serialize)]
            struct Input<'a> {
                r: &'a str,
                s: &'a str,
                lambda: &'a str,
                y: &'a str,
                k: usize,
                #[serde(skip_serializing_if = "Option::is_none")]
                oracle: Option<usize>,
            }
            let result = ResolveResult {
                alpha1: kernel.alpha1().into(),
                forced: *force,
                max_diff,
                rows,
            };
            let envelope = Envelope::new(
                "resolve",
                Input {
                    r: &op.r,
                    s: &op.s,
                    lambda,
                    y,
                    k: *k,
                    oracle: *oracle,
                },
                result,
            )
            .with_operator(parsed);
            Ok(Outcome::ok(render(out.format.unwrap_or(Format::Csv), envelope, || {
                resolve_csv(x.entries(), oracle_x.as_deref())
            })))
        }
        Command::Eigs { op, n, out } => {
            let (parsed, params) = parse_operator(op)?;
            let values = finite_section_eigenvalues(&params, *n)?;
            #[derive(Serialize)]
            struct Input<'a> {
                r: &'a str,
                s: &'a str,
                n: usize,
            }
            let result = EigsResult {
                order: *n,
                method: if params.is_real() {
                    "sturm_bisection"
                } else {
                    "closed_form"
                },
                eigenvalues: values.iter().map(|&z| z.into()).collect(),
            };
            let envelope = Envelope::new(
                "eigs",
                Input {
                    r: &op.r,
                    s: &op.s,
                    n: *n,
                },
                result,
            )
            .with_operator(parsed);
            Ok(Outcome::ok(render(
                out.format.unwrap_or(Format::Json),
                envelope,
                || eigs_csv(&values),
            )))
        }
        Command::Pseudospec {
            op,
            region,
            res,
            res_im,
            n,
            out,
        } => {
            let (parsed, params) = parse_operator(op)?;
            let bounds: Vec<f64> = region
                .split(',')
                .map(|v| parse_real_literal(v).map(|l| l.value))
                .collect::<Result<_, _>>()
                .map_err(Failure::Invalid)?;
            let [re_min, re_max, im_min, im_max] = bounds[..] else {
                return Err(Failure::Invalid(format!(
                    "--region needs four numbers re_min,re_max,im_min,im_max, got '{region}'"
                )));
            };
            let im_points = res_im.unwrap_or(*res);
            if *res == 0 || im_points == 0 {
                return Err(Failure::Invalid("grid resolution must be at least 1".into()));
            }
            let grid = pseudospectrum_grid(
                &params,
                Region::new(re_min, re_max, im_min, im_max)?,
                *res,
                im_points,
                *n,
            )?;
            let rows: Vec<(Complex64, f64)> = grid.points.iter().map(|g| (g.lambda, g.value)).collect();
            match out.format.unwrap_or(Format::Csv) {
                Format::Csv => Ok(Outcome::ok(pseudospec_csv(&rows))),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Input<'a> {
                        r: &'a str,
                        s: &'a str,
                        region: &'a str,
                        res: usize,
                        res_im: usize,
                        n: usize,
                    }
                    let result = PseudospecResult {
                        order: *n,
                        re_points: grid.re_points,
                        im_points: grid.im_points,
                        points: rows
                            .iter()
                            .map(|(z, v)| GridRow {
                                lambda_re: num(z.re),
                                lambda_im: num(z.im),
                                value: v.is_finite().then(|| num(*v)),
                            })
                            .collect(),
                    };
                    let input = Input {
                        r: &op.r,
                        s: &op.s,
                        region,
                        res: *res,
                        res_im: im_points,
                        n: *n,
                    };
                    Ok(Outcome::ok(
                        Envelope::new("pseudospec", input, result)
                            .with_operator(parsed)
                            .to_json(),
                    ))
                }
            }
        }
        Command::Verify { preset, out } => {
            let outcomes = verify::run(*preset, Execution::default());
            let failed = outcomes.iter().any(|o| !o.passed);
            let body = match out.format {
                None => verify_table(&outcomes),
                Some(Format::Csv) => verify_csv(&outcomes),
                Some(Format::Json) => {
                    #[derive(Serialize)]
                    struct Input {
                        preset: &'static str,
                    }
                    let result = VerifyResult {
                        passed: outcomes.iter().filter(|o| o.passed).count(),
                        total: outcomes.len(),
                        criteria: outcomes.iter().map(VerifyRow::from).collect(),
                    };
                    Envelope::new("verify", Input { preset: "paper" }, result).to_json()
                }
            };
            Ok(Outcome {
                body,
                verification_failed: failed,
            })
        }
    }
}

fn output_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Spectrum { out, .. }
        | Command::Classify { out, .. }
        | Command::Resolve { out, .. }
        | Command::Eigs { out, .. }
        | Command::Pseudospec { out, .. }
        | Command::Verify { out, .. } => out.output.as_ref(),
    }
}

fn emit(path: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()) {
                // a closed downstream pipe is not an error for a report writer
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Failure::Io(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|outcome| {
        emit(output_path(&cli.command), &outcome.body)?;
        Ok(outcome.verification_failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(4),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
