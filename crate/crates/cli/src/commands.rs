//! Subcommand bodies. Each builds the tables it needs, runs one library
//! operation and streams its records.

use std::io::Write;

use psix_core::extrema;
use psix_core::mertens::{self, DusartStatus};
use psix_core::squarefree;
use psix_core::{constants, Error, SieveTables};

use crate::config::{Command, Quantity};
use crate::emit::{emit, Cell};
use crate::{CliError, Format, Verdict};

/// Smallest table that still satisfies the library's preconditions.
fn tables_for(limit: u64) -> Result<SieveTables, CliError> {
    Ok(SieveTables::build(limit.max(2))?)
}

/// x itself, or step, 2·step, … up to x with x appended when missed.
fn grid(x: u64, step: Option<u64>) -> Result<Vec<u64>, CliError> {
    match step {
        None => Ok(vec![x]),
        Some(0) => Err(CliError::Usage("--step must be >= 1".into())),
        Some(s) => {
            let mut g: Vec<u64> = (s..=x).step_by(s as usize).collect();
            if g.last() != Some(&x) {
                g.push(x);
            }
            Ok(g)
        }
    }
}

fn ok_rows<I: IntoIterator<Item = Vec<Cell>>>(
    rows: I,
) -> impl Iterator<Item = Result<Vec<Cell>, CliError>> {
    rows.into_iter().map(Ok)
}

pub(crate) fn execute(
    command: &Command,
    format: Format,
    sink: &mut (dyn Write + Send),
) -> Result<Verdict, CliError> {
    let mut verdict = Verdict::Clean;
    match *command {
        Command::SieveInfo { limit } => {
            let t = SieveTables::build(limit)?;
            let theta = t.theta(limit as f64)?;
            emit(
                &["limit", "prime_count", "theta", "theta_over_limit"],
                ok_rows([vec![
                    limit.into(),
                    (t.primes().len() as u64).into(),
                    theta.into(),
                    (theta / limit as f64).into(),
                ]]),
                format,
                sink,
            )?;
        }

        Command::VerifyPsi { plimit } => {
            if plimit < 2 {
                return Err(Error::Domain("--plimit must be >= 2".into()).into());
            }
            let t = tables_for(plimit)?;
            let mut min = (f64::INFINITY, 0u64);
            let rows = extrema::primorial_stream(plimit, &t)?.map(|r| {
                if r.margin < min.0 {
                    min = (r.margin, r.k);
                }
                vec![
                    r.k.into(),
                    r.p_k.into(),
                    r.log_n.into(),
                    r.psi_ratio.into(),
                    r.loglog_n.into(),
                    r.threshold.into(),
                    r.margin.into(),
                ]
            });
            emit(
                &["k", "p_k", "log_N", "psi_ratio", "loglog_N", "threshold", "margin"],
                ok_rows(rows),
                format,
                sink,
            )?;
            eprintln!("min margin {:e} at k = {}", min.0, min.1);
            if !(min.0 > 0.0) {
                verdict = Verdict::Counterexample;
            }
        }

        Command::Squarefree { x, step } => {
            let g = grid(x, step)?;
            let t = tables_for(x.isqrt())?;
            let rows = g.into_iter().map(|x| {
                let s = squarefree::squarefree_residual(x, &t)?;
                Ok(vec![
                    x.into(),
                    (s.value as u64).into(),
                    s.main_term.into(),
                    s.residual.into(),
                    s.scaled_residual.into(),
                    s.with_scale(0.25).scaled_residual.into(),
                ])
            });
            emit(
                &["x", "Q", "main", "residual", "scaled_half", "scaled_quarter"],
                rows,
                format,
                sink,
            )?;
        }

        Command::Harmonic { x, step } => {
            let g = grid(x, step)?;
            let t = tables_for(x)?;
            let rows = squarefree::harmonic_sweep(&g, &t)?.into_iter().map(|s| {
                vec![(s.x as u64).into(), s.value.into(), s.main_term.into(), s.residual.into()]
            });
            emit(&["x", "sum", "main", "residual"], ok_rows(rows), format, sink)?;
        }

        Command::Mertens { x, step, quantity } => {
            let g: Vec<f64> = grid(x, step)?.into_iter().map(|v| v as f64).collect();
            let t = tables_for(x)?;
            let header: &[&str] = match quantity {
                Quantity::Sum => &["x", "sum", "main", "residual"],
                Quantity::Euler | Quantity::Psi => &["x", "value", "main", "residual"],
            };
            let rows = mertens::sweep(&g, &t)?.into_iter().map(|p| {
                let s = match quantity {
                    Quantity::Sum => p.prime_harmonic(),
                    Quantity::Euler => p.euler(),
                    Quantity::Psi => p.psi(),
                };
                vec![(s.x as u64).into(), s.value.into(), s.main_term.into(), s.residual.into()]
            });
            emit(header, ok_rows(rows), format, sink)?;
        }

        Command::Progression { x, q, a, step } => {
            let g = grid(x, step)?;
            let t = tables_for(x)?;
            let rows = g.into_iter().map(|x| {
                let s = mertens::prime_harmonic_progression(x as f64, q, a, &t)?;
                Ok(vec![q.into(), a.into(), x.into(), s.sum.into(), s.b_estimate.into()])
            });
            emit(&["q", "a", "x", "sum", "b_estimate"], rows, format, sink)?;
        }

        Command::Oscillation { x, step } => {
            let g: Vec<f64> = grid(x, step)?.into_iter().map(|v| v as f64).collect();
            let t = tables_for(x)?;
            let rows = mertens::sweep(&g, &t)?.into_iter().map(|p| {
                let e = p.euler();
                vec![
                    (p.x as u64).into(),
                    e.value.into(),
                    e.main_term.into(),
                    e.residual.into(),
                    p.oscillation_g().into(),
                ]
            });
            emit(&["x", "euler_product", "main", "residual", "g"], ok_rows(rows), format, sink)?;
        }

        Command::B1 { plimit } => {
            let t = tables_for(plimit)?;
            let (value, tail) = mertens::compute_b1(plimit, &t)?;
            let reference = constants::b1();
            emit(
                &["prime_limit", "value", "tail_bound", "reference", "error"],
                ok_rows([vec![
                    plimit.into(),
                    value.into(),
                    tail.into(),
                    reference.into(),
                    (value - reference).into(),
                ]]),
                format,
                sink,
            )?;
        }

        Command::Dusart { ref x } => {
            let t = tables_for(x.iter().copied().max().unwrap_or(2))?;
            let mut checks = Vec::with_capacity(x.len());
            for &v in x {
                checks.push(mertens::dusart_bound_check(v as f64, &t)?);
            }
            if checks.iter().any(|c| c.status == DusartStatus::Fails) {
                verdict = Verdict::Counterexample;
            }
            let rows = checks.into_iter().map(|c| {
                vec![
                    (c.x as u64).into(),
                    c.status.as_str().into(),
                    c.residual.into(),
                    c.bound.into(),
                    c.slack.into(),
                    c.rh_bound.into(),
                ]
            });
            emit(
                &["x", "status", "residual", "bound", "slack", "rh_bound"],
                ok_rows(rows),
                format,
                sink,
            )?;
        }

        Command::Jumps { kmax } => {
            let t = table_with_primes(kmax + 1)?;
            let rows = extrema::jump_deltas(kmax, &t)?.into_iter().map(|j| {
                vec![
                    j.k.into(),
                    j.p_k.into(),
                    j.p_next.into(),
                    j.difference.into(),
                    j.ratio.into(),
                    j.relative_gap().into(),
                ]
            });
            emit(
                &["k", "p_k", "p_next", "delta_diff", "delta_ratio", "rel_gap"],
                ok_rows(rows),
                format,
                sink,
            )?;
        }

        Command::Extremes { x } => {
            let t = tables_for(x)?;
            let e = extrema::psi_ratio_extremes(x, &t)?;
            emit(
                &["x", "max_n", "max_ratio", "min_n", "min_ratio"],
                ok_rows([vec![
                    x.into(),
                    e.max_n.into(),
                    e.max_ratio.into(),
                    e.min_n.into(),
                    e.min_ratio.into(),
                ]]),
                format,
                sink,
            )?;
        }

        Command::Classify { x, step, records } => {
            let t = tables_for(x)?;
            if records {
                let rows = extrema::class_records(x, &t)?.map(|r| {
                    vec![
                        r.n.into(),
                        r.psi_over_n.into(),
                        r.threshold.into(),
                        r.label.as_str().into(),
                    ]
                });
                emit(&["n", "psi_over_n", "threshold", "label"], ok_rows(rows), format, sink)?;
            } else {
                let rows = grid(x, step)?.into_iter().map(|x| {
                    let c = extrema::classify_range(x, &t)?;
                    Ok(vec![c.x.into(), c.above.into(), c.below.into(), c.x_over_logx.into()])
                });
                emit(&["x", "above", "below", "x_over_logx"], rows, format, sink)?;
            }
        }

        Command::DistTail { x, ref t } => {
            let tables = tables_for(x)?;
            let rows = extrema::distribution_tail(x, t, &tables)?
                .into_iter()
                .map(|(t, f)| vec![t.into(), f.into()]);
            emit(&["t", "fraction"], ok_rows(rows), format, sink)?;
        }

        Command::LoglogGap { kmax } => {
            let t = table_with_primes(kmax)?;
            let rows = (2..=kmax).map(|k| {
                let gap = extrema::loglog_gap(k, &t)?;
                Ok(vec![k.into(), t.primes()[k as usize - 1].into(), gap.into()])
            });
            emit(&["k", "p_k", "gap"], rows, format, sink)?;
        }

        Command::GapCheck { plimit } => {
            let t = tables_for(plimit)?;
            let g = extrema::gap_exponent_check(plimit, &t)?;
            emit(
                &[
                    "p_limit",
                    "holds_everywhere",
                    "violations",
                    "worst_k",
                    "worst_p",
                    "worst_next",
                    "worst_ratio",
                ],
                ok_rows([vec![
                    plimit.into(),
                    g.holds_everywhere.into(),
                    g.violations.into(),
                    g.worst_k.into(),
                    g.worst_p.into(),
                    g.worst_next.into(),
                    g.worst_ratio.into(),
                ]]),
                format,
                sink,
            )?;
        }

        Command::TailSum { x } => {
            let t = tables_for(x.min(squarefree::MAX_TAIL_X + 1))?;
            let tail = squarefree::primorial_divisor_tail(x, &t)?;
            emit(
                &["x", "numerator", "denominator"],
                ok_rows([vec![x.into(), tail.num().into(), tail.den().into()]]),
                format,
                sink,
            )?;
        }

        Command::Constants => {
            let t = SieveTables::build(1_000_000)?;
            let checks = constants::crosscheck_constants(&t)?;
            let rows = constants::all().iter().map(|c| {
                let residual = checks
                    .iter()
                    .find(|x| x.name == c.name)
                    .map_or(Cell::Text(String::new()), |x| x.residual.into());
                vec![c.name.into(), c.decimal.into(), residual]
            });
            emit(&["name", "decimal", "residual"], ok_rows(rows), format, sink)?;
        }
    }
    Ok(verdict)
}

/// Tables holding at least `count` primes (p_n < n(ln n + ln ln n) for n ≥ 6).
fn table_with_primes(count: u64) -> Result<SieveTables, CliError> {
    if count == 0 {
        return Err(Error::Domain("k must be >= 1".into()).into());
    }
    let n = count.max(6) as f64;
    tables_for((n * (n.ln() + n.ln().ln())).ceil() as u64 + 1)
}
