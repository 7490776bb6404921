use std::fmt::Write as _;
use std::process::ExitCode;

use nlangle_core::difference_ops::{DifferenceOperator, ShiftMatrix};
use nlangle_core::pencil::{EigenvalueSet, PoissonPencilProblem, Window};
use nlangle_core::Error;
use num_complex::Complex64;
use serde_json::json;

use crate::error::CliError;
use crate::spec::Format;
use crate::{num, Ctx};

/// Paired closed-form and numeric values must agree to this distance.
const PAIR_TOL: f64 = 1e-8;

fn problem(ctx: &Ctx) -> Result<PoissonPencilProblem, CliError> {
    let g = ctx.spec.two_sector_geometry()?;
    let p = ctx.spec.pencil()?;
    Ok(PoissonPencilProblem::new(p.alpha, p.beta, g.first(), g.last())?)
}

pub fn eigs(ctx: &Ctx, re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<ExitCode, CliError> {
    let p = problem(ctx)?;
    let window = Window::new(re_min, re_max, im_min, im_max)?;
    let closed = p.eigenvalues_closed_form(im_min, im_max)?;
    let numeric = p.eigenvalues_numeric(&window)?;
    match closed.max_pair_distance(&numeric) {
        Some(d) if d <= PAIR_TOL => {}
        Some(d) => ctx.warn(&format!("closed-form and numeric eigenvalues differ by {}", num(d))),
        None => ctx.warn(&format!(
            "{} closed-form eigenvalues but {} numeric ones in the window",
            closed.len(),
            numeric.len()
        )),
    }
    let rows = |set: &EigenvalueSet| set.values.iter().map(move |z| (set.method.tag(), *z)).collect::<Vec<_>>();
    let all: Vec<(&str, Complex64)> = rows(&closed).into_iter().chain(rows(&numeric)).collect();
    let text = match ctx.format {
        Format::Csv => {
            let mut s = String::from("method,re,im\n");
            for (m, z) in &all {
                writeln!(s, "{m},{},{}", num(z.re), num(z.im)).unwrap();
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = all.iter().map(|(m, z)| json!({"method": m, "re": z.re, "im": z.im})).collect();
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
    };
    ctx.emit(&text, &file_name("eigenvalues", ctx.format, true))?;
    Ok(ExitCode::SUCCESS)
}

pub fn solvability(ctx: &Ctx, a: Option<f64>, l: Option<u32>) -> Result<ExitCode, CliError> {
    let fallback = ctx.spec.weights.as_ref();
    let a = a.or(fallback.map(|w| w.a)).ok_or_else(|| CliError::Spec("need --a or a [weights] section".into()))?;
    let l = l.or(fallback.map(|w| w.l)).ok_or_else(|| CliError::Spec("need --l or a [weights] section".into()))?;
    let report = problem(ctx)?.solvability_report(a, l)?;
    let c = &report.certificate;
    let verdict = if report.solvable() { "SOLVABLE" } else { "BLOCKED" };
    let text = match ctx.format {
        Format::Csv => {
            let mut s = String::new();
            writeln!(s, "a = {}", num(a)).unwrap();
            writeln!(s, "l = {l}").unwrap();
            writeln!(s, "h = a - l - 1 = {}", num(report.h())).unwrap();
            match c.nearest {
                Some(z) => {
                    writeln!(s, "nearest eigenvalue line: Im lambda = {}", num(z.im)).unwrap();
                    writeln!(s, "distance: {}", num(c.distance)).unwrap();
                }
                None => writeln!(s, "nearest eigenvalue line: none").unwrap(),
            }
            writeln!(s, "{verdict}").unwrap();
            s
        }
        Format::Json => {
            let v = json!({
                "a": a,
                "l": l,
                "h": report.h(),
                "nearest_line": c.nearest.map(|z| z.im),
                "distance": c.distance,
                "verdict": verdict,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
    };
    ctx.emit(&text, &file_name("solvability", ctx.format, false))?;
    Ok(if report.solvable() { ExitCode::SUCCESS } else { ExitCode::from(4) })
}

pub fn spectrum(ctx: &Ctx) -> Result<ExitCode, CliError> {
    let op = match &ctx.spec.difference {
        Some(d) => DifferenceOperator::new(ctx.spec.geometry()?, d.coefficients.clone())?,
        None => {
            let p = ctx.spec.pencil()?;
            DifferenceOperator::nonlocal_pair(ctx.spec.two_sector_geometry()?, p.alpha, p.beta)?
        }
    };
    let m = op.to_matrix();
    let eig = op.spectrum();
    let det = m.determinant();
    let inverse = match m.inverse() {
        Ok(inv) => Some(inv),
        Err(Error::SingularMatrix { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let definite = op.symmetric_part_positive_definite();
    let text = match ctx.format {
        Format::Csv => {
            let mut s = String::from("R1 =\n");
            write_matrix(&mut s, &m);
            let list: Vec<String> = eig.iter().map(|z| format!("{} {} {}i", num(z.re), if z.im < 0.0 { '-' } else { '+' }, num(z.im.abs()))).collect();
            writeln!(s, "eigenvalues: {}", list.join(", ")).unwrap();
            writeln!(s, "det = {}", num(det)).unwrap();
            match &inverse {
                Some(inv) => {
                    s.push_str("inverse =\n");
                    write_matrix(&mut s, inv);
                }
                None => s.push_str("inverse: SINGULAR\n"),
            }
            writeln!(s, "R1 + R1^T positive definite: {}", if definite { "yes" } else { "no" }).unwrap();
            s
        }
        Format::Json => {
            let v = json!({
                "matrix": rows(&m),
                "eigenvalues": eig.iter().map(|z| json!({"re": z.re, "im": z.im})).collect::<Vec<_>>(),
                "det": det,
                "inverse": inverse.as_ref().map(rows),
                "symmetric_part_positive_definite": definite,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
    };
    ctx.emit(&text, &file_name("spectrum", ctx.format, false))?;
    Ok(ExitCode::SUCCESS)
}

fn rows(m: &ShiftMatrix) -> Vec<Vec<f64>> {
    (0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect()).collect()
}

fn write_matrix(s: &mut String, m: &ShiftMatrix) {
    for row in rows(m) {
        let cells: Vec<String> = row.into_iter().map(num).collect();
        writeln!(s, "  [{}]", cells.join(", ")).unwrap();
    }
}

/// Default output file name: tables as `.csv`, reports as `.txt`, or `.json`.
pub fn file_name(stem: &str, format: Format, tabular: bool) -> String {
    match format {
        Format::Json => format!("{stem}.json"),
        Format::Csv if tabular => format!("{stem}.csv"),
        Format::Csv => format!("{stem}.txt"),
    }
}
