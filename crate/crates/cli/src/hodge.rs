use std::path::PathBuf;

use adelab::arith::fmt_rational;
use adelab::hodge::{self, DeformationIndexSet};
use clap::Subcommand;
use serde_json::json;

use crate::input;
use crate::report::Report;
use crate::CliError;

#[derive(Subcommand, Debug)]
pub enum HodgeCmd {
    /// Taylor series of the period over a deformation index set.
    Series {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        /// Exponents of x^β, n+2 entries; defaults to 0.
        #[arg(long)]
        beta: Option<String>,
        /// File with one comma-separated exponent vector per line.
        #[arg(long, conflicts_with = "alphas")]
        monomials: Option<PathBuf>,
        /// Inline exponent vectors separated by ';'.
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long)]
        trunc: u32,
    },
    /// Codimension of the Hodge locus component attached to m.
    Codim {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Cubic codimension table for n = 4..12.
    Table,
    /// Numeric comparison of the root-difference series with Newton roots.
    Balegh {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        beta: u32,
        /// Two root indices i1,i2.
        #[arg(long, default_value = "0,1")]
        branches: String,
        #[arg(long, default_value_t = 6)]
        trunc: u32,
        /// d rational parameters t_1..t_d.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

pub fn run(cmd: &HodgeCmd) -> Result<Report, CliError> {
    match cmd {
        HodgeCmd::Series {
            n,
            d,
            beta,
            monomials,
            alphas,
            trunc,
        } => {
            let set = match (monomials, alphas) {
                (Some(path), None) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    DeformationIndexSet::parse(*n, *d, &text)?
                }
                (None, Some(a)) => DeformationIndexSet::new(*n, *d, input::exponent_vectors(a)?)?,
                _ => return Err(CliError::Usage("give --monomials or --alphas".into())),
            };
            let beta = match beta {
                Some(b) => input::u32_list(b)?,
                None => vec![0; *n as usize + 2],
            };
            let s = hodge::period_series(*n, *d, &beta, &set, *trunc)?;
            let admissible = s.all_terms_admissible();
            let terms: Vec<_> = s
                .terms
                .iter()
                .map(|(a, c)| json!({"a": a, "coeff": fmt_rational(c)}))
                .collect();
            let dens: serde_json::Map<_, _> = hodge::denominator_report(&s)
                .into_iter()
                .map(|(deg, f)| (format!("{deg:03}"), json!(f)))
                .collect();
            Ok(Report::check(
                json!({
                    "n": n, "d": d, "beta": beta, "k": s.k, "trunc": trunc,
                    "alphas": set.alphas(),
                    "terms": terms,
                    "admissible": admissible,
                    "denominators": dens,
                }),
                admissible,
            ))
        }
        HodgeCmd::Codim { n, d, m } => {
            let c = hodge::codim_vz(*n, *d, *m)?;
            Ok(Report::new(json!({"n": n, "d": d, "m": m, "codim": c.to_string()})))
        }
        HodgeCmd::Table => {
            let rows: Vec<_> = hodge::table_repro()
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "dim_t": r.dim_t.to_string(),
                        "min_codim": r.min_codim.to_string(),
                        "L": r.l.to_string(),
                        "M": r.m.to_string(),
                    })
                })
                .collect();
            Ok(Report::new(json!({ "rows": rows })))
        }
        HodgeCmd::Balegh {
            d,
            beta,
            branches,
            trunc,
            t,
            tol,
        } => {
            let b = input::u32_list(branches)?;
            let [i1, i2] = b[..] else {
                return Err(CliError::Usage("--branches takes two indices".into()));
            };
            let tv = input::rational_list(t)?;
            let res = hodge::balegh_numeric_check(*d, *beta, (i1 as usize, i2 as usize), *trunc, &tv)?;
            let ok = res < *tol;
            Ok(Report::check(
                json!({
                    "d": d, "beta": beta, "branches": [i1, i2], "trunc": trunc,
                    "t": tv.iter().map(fmt_rational).collect::<Vec<_>>(),
                    "residual": format!("{res:.3e}"),
                    "tol": format!("{tol:.1e}"),
                    "within_tol": ok,
                }),
                ok,
            ))
        }
    }
}
