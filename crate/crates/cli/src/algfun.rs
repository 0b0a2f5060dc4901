use adelab::algfun;
use adelab::arith::fmt_rational;
use clap::Subcommand;
use serde_json::json;

use crate::input;
use crate::report::Report;
use crate::CliError;

#[derive(Subcommand, Debug)]
pub enum AlgfunCmd {
    /// Taylor series of the branch of P(z, y) = 0 through (z0, y0).
    Taylor {
        /// Polynomial in --vars, the last variable being y.
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "z,y")]
        vars: String,
        /// Comma-separated integer base point, one entry per z variable.
        #[arg(long, allow_hyphen_values = true)]
        z0: String,
        #[arg(long, allow_hyphen_values = true)]
        y0: i64,
        #[arg(long)]
        order: u32,
    },
    /// Denominators of binom(a, k) for k <= kmax.
    Binomring {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        kmax: u32,
    },
}

pub fn run(cmd: &AlgfunCmd) -> Result<Report, CliError> {
    match cmd {
        AlgfunCmd::Taylor {
            poly,
            vars,
            z0,
            y0,
            order,
        } => {
            let names: Vec<&str> = vars.split(',').map(str::trim).collect();
            let f = input::polynomial(poly, &names)?;
            let z0: Vec<i64> = z0
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("--z0 entries must be integers, got {s:?}")))
                })
                .collect::<Result<_, _>>()?;
            let cert = algfun::taylor_algebraic_multi(&f, &z0, *y0, *order)?;
            let zn = &names[..names.len() - 1];
            let terms: Vec<_> = cert
                .series
                .poly()
                .terms()
                .iter()
                .rev()
                .map(|(m, c)| json!({"n": m.exps(), "coeff": fmt_rational(c), "delta_exponent": cert.exponents.get(m.exps()).copied()}))
                .collect();
            let residual_zero = cert.residual().is_zero();
            let ok = residual_zero && cert.bounds_hold() && cert.power_bound_integral();
            Ok(Report::check(
                json!({
                    "poly": f.fmt_rational_with(&names),
                    "z0": z0, "y0": y0, "order": order,
                    "local_vars": zn,
                    "delta": cert.delta.to_string(),
                    "terms": terms,
                    "residual_zero": residual_zero,
                    "bounds_hold": cert.bounds_hold(),
                    "power_bound_integral": cert.power_bound_integral(),
                }),
                ok,
            ))
        }
        AlgfunCmd::Binomring { a, kmax } => {
            let a = input::rational(a)?;
            let r = algfun::binom_ring_denominators(&a, *kmax)?;
            Ok(Report::new(json!({
                "a": fmt_rational(&r.a),
                "kmax": kmax,
                "values": r.values.iter().map(fmt_rational).collect::<Vec<_>>(),
                "denominators": r.denominators.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "support": r.support,
            })))
        }
    }
}
