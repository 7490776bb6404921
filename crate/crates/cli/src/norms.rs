use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use nlangle_core::weighted_norms::{e_norm, h_norm, trace_ratio, Ray, WeightParams};
use serde_json::json;

use crate::error::CliError;
use crate::gridfile::read_grid;
use crate::pencil::file_name;
use crate::spec::Format;
use crate::{num, Ctx};

pub fn run(ctx: &Ctx, input: &Path) -> Result<ExitCode, CliError> {
    let geometry = ctx.spec.geometry()?;
    let w = ctx.spec.weights()?;
    let p = WeightParams::new(w.a, w.l)?;
    let u = read_grid(input, &geometry)?;
    let e = e_norm(&u, &p)?;
    let h = h_norm(&u, &p)?;
    // traces need 1 <= l <= 2
    let traces = if (1..=2).contains(&w.l) {
        Some((trace_ratio(&u, Ray::First, &p)?, trace_ratio(&u, Ray::Last, &p)?))
    } else {
        None
    };
    let text = match ctx.format {
        Format::Csv => {
            let mut s = String::new();
            writeln!(s, "a = {}", num(w.a)).unwrap();
            writeln!(s, "l = {}", w.l).unwrap();
            writeln!(s, "e_norm = {}", num(e)).unwrap();
            writeln!(s, "h_norm = {}", num(h)).unwrap();
            match traces {
                Some((first, last)) => {
                    writeln!(s, "trace_ratio_first = {}", num(first)).unwrap();
                    writeln!(s, "trace_ratio_last = {}", num(last)).unwrap();
                }
                None => s.push_str("trace ratios: not defined for l = 0\n"),
            }
            s
        }
        Format::Json => {
            let v = json!({
                "a": w.a,
                "l": w.l,
                "e_norm": e,
                "h_norm": h,
                "trace_ratio_first": traces.map(|t| t.0),
                "trace_ratio_last": traces.map(|t| t.1),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
    };
    ctx.emit(&text, &file_name("norms", ctx.format, false))?;
    Ok(ExitCode::SUCCESS)
}
