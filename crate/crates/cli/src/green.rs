use std::fmt::Write as _;
use std::process::ExitCode;

use nlangle_core::green_check::{green_report, GreenConfig, GreenKind, GreenReport, GreenTestPair};
use num_complex::Complex64;
use serde_json::json;

use crate::error::CliError;
use crate::pencil::file_name;
use crate::spec::Format;
use crate::{num, Ctx};

/// A pair passes when its residual is below this multiple of its largest term.
const PASS_RATIO: f64 = 1e-6;

pub fn run(ctx: &Ctx, example: u8) -> Result<ExitCode, CliError> {
    let g = ctx.spec.two_sector_geometry()?;
    let alpha = ctx.spec.pencil()?.alpha;
    let a = g.angles();
    let (b1, b2, b3) = (a[0], a[1], a[2]);
    let kind = if example == 1 { GreenKind::Dirichlet } else { GreenKind::Neumann };
    let mut cfg = GreenConfig::new(b1, b2, b3, alpha, 1.0);
    if let Some(s) = &ctx.spec.green {
        cfg.chi12 = s.chi12.unwrap_or(cfg.chi12);
        cfg.order = s.order.unwrap_or(cfg.order);
        cfg.radial_panels = s.radial_panels.unwrap_or(cfg.radial_panels);
        cfg.angular_panels = s.angular_panels.unwrap_or(cfg.angular_panels);
    }
    let reports = GreenTestPair::library()
        .into_iter()
        .map(|(name, pair)| Ok((name, green_report(kind, &cfg, &pair)?)))
        .collect::<Result<Vec<(&str, GreenReport)>, CliError>>()?;
    let passes = |r: &GreenReport| r.residual < PASS_RATIO * r.max_term();
    let all_pass = reports.iter().all(|(_, r)| passes(r));
    let text = match ctx.format {
        Format::Csv => {
            let mut s = String::new();
            let label = if example == 1 { "Dirichlet" } else { "Neumann" };
            writeln!(s, "example {example} ({label}), alpha = {}, chi12 = {}, order = {}", num(alpha), num(cfg.chi12), cfg.order).unwrap();
            for (name, r) in &reports {
                writeln!(s, "pair {name}").unwrap();
                for (side, terms) in [("lhs", &r.lhs), ("rhs", &r.rhs)] {
                    for (term, v) in terms {
                        writeln!(s, "  {side} {term}: {} (|.| = {})", complex(*v), num(v.norm())).unwrap();
                    }
                }
                writeln!(s, "  residual = {}, max term = {}, {}", num(r.residual), num(r.max_term()), if passes(r) { "PASS" } else { "FAIL" })
                    .unwrap();
            }
            s
        }
        Format::Json => {
            let terms = |t: &[(&str, Complex64)]| {
                t.iter().map(|(n, v)| json!({"term": n, "re": v.re, "im": v.im, "abs": v.norm()})).collect::<Vec<_>>()
            };
            let v: Vec<_> = reports
                .iter()
                .map(|(name, r)| {
                    json!({
                        "pair": name,
                        "lhs": terms(&r.lhs),
                        "rhs": terms(&r.rhs),
                        "residual": r.residual,
                        "max_term": r.max_term(),
                        "pass": passes(r),
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&json!({"example": example, "pairs": v})).unwrap())
        }
    };
    ctx.emit(&text, &file_name("green", ctx.format, false))?;
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn complex(z: Complex64) -> String {
    format!("{} {} {}i", num(z.re), if z.im < 0.0 { '-' } else { '+' }, num(z.im.abs()))
}
