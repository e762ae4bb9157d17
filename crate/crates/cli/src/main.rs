use std::io::{self, Write};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use debruijn_core::asymptotics::convergence_report;
use debruijn_core::egf::{closed_form, corollary1_total, edge_series, seidel_ratio_holds, theorem1_f};
use debruijn_core::oracle::{self, ORACLE_CAP};
use debruijn_core::spectral::{discretize, eigenfunction, find_lambda, SpectralProblem, ROOT_TOL};
use debruijn_core::{build_debruijn, build_named, build_signed, ExactTriangle, Side, SystemName, UpDownPeriod};
use num_bigint::BigInt;
use serde_json::{json, Value};

/// Periodic de Bruijn triangles: counts, generating functions and spectral
/// asymptotics.
#[derive(Parser, Debug)]
#[command(name = "debruijn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Det,
    Operator,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rows of the de Bruijn triangle of a period.
    Triangle {
        #[arg(long)]
        period: UpDownPeriod,
        #[arg(long)]
        rows: usize,
        /// Multiply row i by its sign so that every row is left-to-right.
        #[arg(long)]
        signed: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Permutations of length n with the period's shape, by last entry.
    Count {
        #[arg(long)]
        period: UpDownPeriod,
        #[arg(long)]
        n: usize,
        /// Enumerate permutations instead of using the triangle (n <= 10).
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Generating function of the left edge of the signed triangle, or of the
    /// total counts with --total. The period must end in 0.
    Egf {
        #[arg(long)]
        period: UpDownPeriod,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        total: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// First eigenvalue of the spectral problem.
    Lambda {
        #[arg(long)]
        period: UpDownPeriod,
        #[arg(long, default_value_t = ROOT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "det")]
        method: Method,
        /// Grid size for the discretized operator.
        #[arg(long, default_value_t = 400)]
        grid: usize,
    },
    /// Normalized first eigenfunction u_l sampled on [0, 1].
    Eigenfunction {
        #[arg(long)]
        period: UpDownPeriod,
        #[arg(long)]
        phase: usize,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Sup-norm distance between shape-normalized rows and u_l.
    Converge {
        #[arg(long)]
        period: UpDownPeriod,
        #[arg(long)]
        phase: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        rows: Vec<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Classical Seidel triangles and Arnold's pairs.
    Named {
        #[arg(long)]
        name: SystemName,
        #[arg(long)]
        rows: usize,
        /// Compare the edges with the published closed forms.
        #[arg(long)]
        check_gf: bool,
    },
    /// Oracle equivalence and closed-form checks as a pass/fail table.
    Selftest,
}

/// Domain failure: exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

/// Exact JSON number for an integer of any size.
fn big_number(x: &impl ToString) -> Value {
    Value::Number(serde_json::Number::from_str(&x.to_string()).expect("integers are valid JSON numbers"))
}

fn rows_json(t: &ExactTriangle) -> Value {
    Value::Array(
        t.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(big_number).collect()))
            .collect(),
    )
}

fn write_csv<R: AsRef<[String]>>(header: &[&str], records: impl IntoIterator<Item = R>) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(header)?;
    for r in records {
        w.write_record(r.as_ref())?;
    }
    w.flush()?;
    Ok(())
}

fn print_json(v: &Value) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn triangle_csv(t: &ExactTriangle) -> Vec<Vec<String>> {
    t.rows()
        .iter()
        .enumerate()
        .flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(move |(j, x)| vec![(i + 1).to_string(), (j + 1).to_string(), x.to_string()])
        })
        .collect()
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Triangle {
            period,
            rows,
            signed,
            format,
        } => {
            let t = if signed {
                build_signed(&period, rows)?
            } else {
                build_debruijn(&period, rows)?
            };
            match format {
                Format::Json => print_json(&json!({
                    "period": period.to_string(),
                    "signed": signed,
                    "rows": rows_json(&t),
                }))?,
                Format::Csv => write_csv(&["i", "j", "value"], triangle_csv(&t))?,
            }
        }
        Command::Count {
            period,
            n,
            oracle: brute,
            format,
        } => {
            if n == 0 {
                return Err(Failure("n must be at least 1".into()));
            }
            let by_last: Vec<String> = if brute {
                if n > ORACLE_CAP {
                    return Err(Failure(format!("--oracle is limited to n <= {ORACLE_CAP}")));
                }
                oracle::counts_by_last(&period, n)?.iter().map(u64::to_string).collect()
            } else {
                build_debruijn(&period, n)?.row(n).iter().map(|x| x.to_string()).collect()
            };
            let total: BigInt = by_last.iter().map(|s| s.parse::<BigInt>().unwrap()).sum();
            match format {
                Format::Json => print_json(&json!({
                    "by_last": by_last.iter().map(big_number).collect::<Vec<_>>(),
                    "total": big_number(&total),
                }))?,
                Format::Csv => write_csv(
                    &["j", "count"],
                    by_last.iter().enumerate().map(|(j, c)| vec![(j + 1).to_string(), c.clone()]),
                )?,
            }
        }
        Command::Egf {
            period,
            order,
            total,
            format,
        } => {
            let series = if total {
                corollary1_total(&period, order)?
            } else {
                theorem1_f(&period, order)?
            };
            match format {
                Format::Json => print_json(&json!({
                    "period": period.to_string(),
                    "kind": if total { "total" } else { "left-edge" },
                    "series": serde_json::to_value(&series)?,
                }))?,
                Format::Csv => write_csv(
                    &["k", "num", "den"],
                    series
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(k, c)| vec![k.to_string(), c.numer().to_string(), c.denom().to_string()]),
                )?,
            }
        }
        Command::Lambda {
            period,
            tol,
            method,
            grid,
        } => {
            let mut out = serde_json::Map::new();
            out.insert("period".into(), json!(period.to_string()));
            let det = match method {
                Method::Det | Method::Both => {
                    let l = find_lambda(&SpectralProblem::new(&period, 0)?, tol)?;
                    out.insert("lambda".into(), json!(l));
                    Some(l)
                }
                Method::Operator => None,
            };
            if method != Method::Det {
                let est = discretize(&period, grid)?.lambda_estimate(1e-13)?;
                out.insert("lambda_operator".into(), json!(est));
                out.insert("grid".into(), json!(grid));
                if let Some(l) = det {
                    out.insert("difference".into(), json!((est - l).abs()));
                }
            }
            print_json(&Value::Object(out))?;
        }
        Command::Eigenfunction {
            period,
            phase,
            samples,
            format,
        } => {
            let prob = SpectralProblem::new(&period, phase)?;
            let lambda = find_lambda(&prob, ROOT_TOL)?;
            let sol = eigenfunction(&prob, lambda, samples)?;
            match format {
                Format::Json => print_json(&json!({
                    "period": period.to_string(),
                    "phase": phase,
                    "lambda": sol.lambda,
                    "xi": [sol.xi.re, sol.xi.im],
                    "coeffs": sol.coeffs.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
                    "imag_residue": sol.imag_residue,
                    "null_residual": sol.null_residual,
                    "t": sol.grid,
                    "u": sol.samples,
                }))?,
                Format::Csv => write_csv(
                    &["t", "u"],
                    sol.grid.iter().zip(&sol.samples).map(|(t, u)| vec![t.to_string(), u.to_string()]),
                )?,
            }
        }
        Command::Converge {
            period,
            phase,
            rows,
            format,
        } => {
            let rep = convergence_report(&period, phase, &rows)?;
            match format {
                Format::Json => print_json(&json!({
                    "period": period.to_string(),
                    "phase": phase,
                    "lambda": rep.lambda,
                    "rows": rep.rows.iter().map(|r| json!({"row": r.row, "error": r.error})).collect::<Vec<_>>(),
                    "monotone": rep.is_monotone(),
                    "strictly_decreasing": rep.is_strictly_decreasing(),
                }))?,
                Format::Csv => write_csv(
                    &["row", "error"],
                    rep.rows.iter().map(|r| vec![r.row.to_string(), r.error.to_string()]),
                )?,
            }
        }
        Command::Named { name, rows, check_gf } => {
            let sys = build_named(name, rows)?;
            let mut triangles = serde_json::Map::new();
            for (label, t) in sys.triangles() {
                triangles.insert(label.into(), rows_json(t));
            }
            let mut out = json!({ "name": name.as_str(), "triangles": triangles });
            if check_gf {
                if rows < 2 {
                    return Err(Failure("--check-gf needs at least 2 rows".into()));
                }
                let order = rows - 1;
                let forms = closed_form(name, order)?;
                let mut checks = Vec::new();
                for ((label, t), (_, form)) in sys.triangles().into_iter().zip(forms.labelled()) {
                    let left = edge_series(t, Side::Left, order)?;
                    let right = edge_series(t, Side::Right, order)?;
                    checks.push(json!({
                        "triangle": label,
                        "left_edge_matches": left == form.left,
                        "right_edge_matches": right == form.right,
                        "seidel_ratio": seidel_ratio_holds(&left, &right),
                    }));
                }
                out["gf_check"] = json!({ "order": order, "checks": checks });
            }
            print_json(&out)?;
        }
        Command::Selftest => return selftest(),
    }
    Ok(ExitCode::SUCCESS)
}

fn selftest() -> Outcome {
    let mut table: Vec<(String, bool)> = Vec::new();
    for m in 2..=4usize {
        for mask in 0..1u32 << (m - 1) {
            let mut bits: Vec<u8> = (0..m - 1).map(|i| ((mask >> i) & 1) as u8).collect();
            bits.push(0);
            let q = UpDownPeriod::new(bits)?;
            let t = build_debruijn(&q, 8)?;
            let ok = (1..=8).all(|n| {
                let counts = oracle::counts_by_last(&q, n).expect("n within cap");
                t.row(n).iter().zip(&counts).all(|(a, &b)| *a == b.into()) && t.row(n).len() == counts.len()
            });
            table.push((format!("oracle {q}"), ok));
        }
    }
    let order = 14;
    for name in SystemName::ALL {
        let sys = build_named(name, order + 1)?;
        let forms = closed_form(name, order)?;
        for ((label, t), (_, form)) in sys.triangles().into_iter().zip(forms.labelled()) {
            let left = edge_series(t, Side::Left, order)?;
            let right = edge_series(t, Side::Right, order)?;
            table.push((format!("closed-form {name} {label}"), left == form.left && right == form.right));
        }
    }
    let mut out = io::stdout().lock();
    for (check, ok) in &table {
        writeln!(out, "{:<28} {}", check, if *ok { "PASS" } else { "FAIL" })?;
    }
    let failed = table.iter().filter(|(_, ok)| !ok).count();
    writeln!(out, "{} checks, {} failed", table.len(), failed)?;
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
