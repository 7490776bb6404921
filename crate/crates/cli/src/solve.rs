use std::process::ExitCode;
use std::sync::Arc;

use nlangle_core::geometry::{AngleGeometry, GridFunction, SectorGrid};
use nlangle_core::sector_solver::manufactured::{Bump, ManufacturedDd, ManufacturedPoisson};
use nlangle_core::sector_solver::{
    gamma2_mismatch, observed_order, solve_dd, solve_nonlocal_poisson, write_grid_csv, DDProblem, NonlocalPoissonProblem,
    RadialDataBox, Rhs, SolveResult,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::CliError;
use crate::expr::Expression;
use crate::{Ctx, Problem};

/// Residuals must stay below this multiple of `1 + ‖data‖`.
const RESIDUAL_CEILING: f64 = 1e-8;

#[derive(Debug, Serialize)]
struct Level {
    n_r: usize,
    n_phi: usize,
    equation_residual: f64,
    boundary_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    l2_error: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Summary {
    problem: &'static str,
    equation_residual: f64,
    boundary_residual: f64,
    n_unknowns: usize,
    regime_warning: bool,
    observed_order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    interpolated_boundary_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    boundary_order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma2_mismatch: Option<f64>,
    levels: Vec<Level>,
}

/// Problem at one resolution, plus the exact solution when manufactured.
struct Setup {
    solve: Box<dyn Fn(&SectorGrid) -> nlangle_core::Result<SolveResult>>,
    exact: Option<Arc<dyn Fn(f64, f64) -> f64>>,
    data_scale: Box<dyn Fn(&SectorGrid) -> f64>,
    geometry: AngleGeometry,
    r_min: f64,
    r_max: f64,
}

fn expression_rhs(src: &str) -> Result<Rhs, CliError> {
    let e = Expression::parse(src).map_err(CliError::Spec)?;
    Ok(Rhs::real(move |r, phi| e.eval(r, phi)))
}

fn boundary_data(src: &str, phi: f64) -> Result<RadialDataBox, CliError> {
    let e = Expression::parse(src).map_err(CliError::Spec)?;
    Ok(RadialDataBox::real(move |r| e.eval(r, phi)))
}

fn setup(ctx: &Ctx, problem: Problem) -> Result<Setup, CliError> {
    let geometry = ctx.spec.two_sector_geometry()?;
    let p = ctx.spec.pencil()?;
    let s = ctx.spec.solver()?;
    let (alpha, beta) = (p.alpha, p.beta);
    let (b1, b3) = (geometry.first(), geometry.last());
    let manufactured = s.rhs.trim() == "manufactured";
    let width = s.r_max - s.r_min;
    let bump = Bump { lo: s.r_min + 0.1 * width, hi: s.r_max - 0.1 * width };
    let (solve, exact, rhs_for_scale): (Box<dyn Fn(&SectorGrid) -> _>, Option<Arc<dyn Fn(f64, f64) -> f64>>, Rhs) = match problem {
        Problem::Dd => {
            let (rhs, exact): (Rhs, Option<Arc<dyn Fn(f64, f64) -> f64>>) = if manufactured {
                if (2.0 + alpha + beta).abs() < 1e-12 || (1.0 - alpha * beta).abs() < 1e-12 {
                    return Err(CliError::Spec("the manufactured solution needs alpha + beta != -2 and alpha * beta != 1".into()));
                }
                let m = ManufacturedDd::new(alpha, beta, b1, b3, bump);
                (Rhs::real(move |r, phi| m.rhs(r, phi)), Some(Arc::new(move |r, phi| m.w(r, phi))))
            } else {
                (expression_rhs(&s.rhs)?, None)
            };
            let dd = DDProblem::new(alpha, beta, geometry.clone(), rhs.clone(), s.r_min, s.r_max)?;
            (Box::new(move |g: &SectorGrid| solve_dd(&dd, g)), exact, rhs)
        }
        Problem::Nonlocal => {
            let (rhs, g1, g3, exact): (Rhs, RadialDataBox, RadialDataBox, Option<Arc<dyn Fn(f64, f64) -> f64>>) = if manufactured {
                let m = ManufacturedPoisson::new(alpha, beta, b1, b3, bump);
                (
                    Rhs::real(move |r, phi| m.rhs(r, phi)),
                    RadialDataBox::real(move |r| m.g1(r)),
                    RadialDataBox::real(move |r| m.g3(r)),
                    Some(Arc::new(move |r, phi| m.u(r, phi))),
                )
            } else {
                let b = ctx.spec.boundary()?;
                (expression_rhs(&s.rhs)?, boundary_data(&b.g1, b1)?, boundary_data(&b.g3, b3)?, None)
            };
            let nl = NonlocalPoissonProblem::new(alpha, beta, geometry.clone(), rhs.clone(), g1, g3, s.r_min, s.r_max)?;
            if !nl.in_solvable_regime() {
                ctx.warn("|alpha + beta| >= 2: outside the regime where unique solvability is known, solving anyway");
            }
            (Box::new(move |g: &SectorGrid| solve_nonlocal_poisson(&nl, g)), exact, rhs)
        }
    };
    let data_scale = Box::new(move |g: &SectorGrid| rhs_for_scale.sample(g).map(|f| f.l2_norm()).unwrap_or(f64::INFINITY));
    Ok(Setup { solve, exact, data_scale, geometry, r_min: s.r_min, r_max: s.r_max })
}

/// `log2(|u_0 - u_1| / |u_1 - u_2|)` on the nodes of the coarsest grid.
fn successive_difference_order(levels: &[GridFunction]) -> Option<f64> {
    let [u0, u1, u2] = levels else { return None };
    let g = u0.grid();
    let diff = |fine: &GridFunction, coarse: &GridFunction, f1: usize, f0: usize| {
        let mut m = 0.0f64;
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                m = m.max((fine.get(i * f1, j * f1) - coarse.get(i * f0, j * f0)).norm());
            }
        }
        m
    };
    let d1 = diff(u1, u0, 2, 1);
    let d2 = diff(u2, u1, 4, 2);
    (d1 > 0.0 && d2 > 0.0).then(|| (d1 / d2).log2())
}

fn l2_error(u: &GridFunction, exact: &dyn Fn(f64, f64) -> f64) -> Result<f64, CliError> {
    let e = GridFunction::from_fn(u.grid(), |r, phi| Complex64::new(exact(r, phi), 0.0));
    Ok(u.sub(&e)?.l2_norm())
}

pub fn run(ctx: &Ctx, problem: Problem, refine: u32) -> Result<ExitCode, CliError> {
    let s = ctx.spec.solver()?.clone();
    let setup = setup(ctx, problem)?;
    let mut levels = Vec::new();
    let mut solutions = Vec::new();
    let mut interp = Vec::new();
    let mut last = None;
    for k in 0..=refine {
        let f = 1usize << k;
        let grid = SectorGrid::new(setup.geometry.clone(), setup.r_min, setup.r_max, s.n_r * f, s.n_phi * f)?;
        let res = (setup.solve)(&grid)?;
        let ceiling = RESIDUAL_CEILING * (1.0 + (setup.data_scale)(&grid));
        if !(res.equation_residual <= ceiling) {
            return Err(CliError::Solver(format!("equation residual {:e} exceeds {:e} on the {}x{} grid", res.equation_residual, ceiling, grid.n_r(), grid.n_phi())));
        }
        let l2 = match &setup.exact {
            // the dd unknown is w, the nonlocal unknown is u
            Some(exact) => Some(l2_error(&res.solution, exact.as_ref())?),
            None => None,
        };
        levels.push(Level {
            n_r: grid.n_r(),
            n_phi: grid.n_phi(),
            equation_residual: res.equation_residual,
            boundary_residual: res.boundary_residual,
            l2_error: l2,
        });
        solutions.push(res.solution.clone());
        interp.push(res.interpolated_boundary_residual);
        last = Some((res, grid));
    }
    let (res, _) = last.expect("at least one level");
    let observed = match &setup.exact {
        Some(_) if levels.len() >= 2 => {
            let n = levels.len();
            match (levels[n - 2].l2_error, levels[n - 1].l2_error) {
                (Some(a), Some(b)) if a > 0.0 && b > 0.0 => Some(observed_order(a, b)),
                _ => None,
            }
        }
        Some(_) => None,
        None if solutions.len() >= 3 => successive_difference_order(&solutions[solutions.len() - 3..]),
        None => None,
    };
    let (interpolated, boundary_order, gamma2) = match problem {
        Problem::Dd => (None, None, None),
        Problem::Nonlocal => {
            let gap = res.auxiliary.as_ref().map(gamma2_mismatch).transpose()?;
            let n = interp.len();
            let order = (n >= 2 && interp[n - 2] > 0.0 && interp[n - 1] > 0.0).then(|| observed_order(interp[n - 2], interp[n - 1]));
            (Some(res.interpolated_boundary_residual), order, gap)
        }
    };
    let summary = Summary {
        problem: match problem {
            Problem::Dd => "dd",
            Problem::Nonlocal => "nonlocal",
        },
        equation_residual: res.equation_residual,
        boundary_residual: res.boundary_residual,
        n_unknowns: res.stats.unknowns,
        regime_warning: res.regime_warning,
        observed_order: observed,
        interpolated_boundary_residual: interpolated,
        boundary_order,
        gamma2_mismatch: gamma2,
        levels,
    };

    let grid_path = ctx.destination("solution.csv").unwrap_or_else(|| "solution.csv".into());
    let mut buf = Vec::new();
    write_grid_csv(&res.solution, &mut buf)?;
    ctx.write_file(&grid_path, &buf)?;
    let json = format!("{}\n", serde_json::to_string_pretty(&summary).unwrap());
    ctx.write_file(&grid_path.with_extension("json"), json.as_bytes())?;
    if !ctx.quiet {
        print!("{json}");
    }
    Ok(ExitCode::SUCCESS)
}
