use adelab::arith::{is_prime, primes_between};
use adelab::elliptic::{self, WeierstrassCurve};
use clap::{Args, Subcommand};
use serde_json::json;

use crate::report::Report;
use crate::CliError;

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    t2: i64,
    #[arg(long, allow_hyphen_values = true)]
    t3: i64,
}

impl CurveArgs {
    fn curve(&self) -> Result<WeierstrassCurve, CliError> {
        Ok(WeierstrassCurve::numeric(self.p, self.t2, self.t3)?)
    }
}

#[derive(Subcommand, Debug)]
pub enum EcCmd {
    /// Hasse-Witt invariant of y² = 4x³ - t2 x - t3 two ways.
    Hw {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true, requires = "t3", conflicts_with = "symbolic")]
        t2: Option<i64>,
        #[arg(long, allow_hyphen_values = true, requires = "t2")]
        t3: Option<i64>,
        /// Work in F_p[t2, t3].
        #[arg(long)]
        symbolic: bool,
    },
    /// Point count and trace p + 1 - #E against the Hasse-Witt value.
    Count {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Power sums of x over affine points against the half-power coefficients.
    Powersum {
        #[command(flatten)]
        curve: CurveArgs,
        /// Defaults to (p-1)/2.
        #[arg(long)]
        jmax: Option<u64>,
    },
    /// c_{p-1} ≡ A and c_{p-2} ≡ B/12 in F_p[t2, t3].
    Abcheck {
        #[arg(long, value_delimiter = ',', conflicts_with = "pmax")]
        p: Vec<u64>,
        #[arg(long)]
        pmax: Option<u64>,
    },
    /// Reduce (2n-1) x^n dx/y modulo exact forms.
    Exactform {
        #[arg(long, required_unless_present = "p", conflicts_with = "p")]
        n: Option<u64>,
        /// Check the congruence at n = (p+1)/2.
        #[arg(long)]
        p: Option<u64>,
    },
}

fn signed(r: adelab::arith::Residue) -> String {
    r.signed().to_string()
}

pub fn run(cmd: &EcCmd) -> Result<Report, CliError> {
    match cmd {
        EcCmd::Hw { p, t2, t3, symbolic } => {
            if *symbolic {
                let c = WeierstrassCurve::symbolic(*p)?;
                let (a, b) = (c.hasse_witt(), c.hasse_witt_recursion());
                let agree = a == b;
                return Ok(Report::check(
                    json!({
                        "p": p,
                        "mode": "symbolic",
                        "coefficient": a.fmt_with(&["t2", "t3"]),
                        "recursion": b.fmt_with(&["t2", "t3"]),
                        "agree": agree,
                    }),
                    agree,
                ));
            }
            let (Some(t2), Some(t3)) = (t2, t3) else {
                return Err(CliError::Usage("give --t2 and --t3, or --symbolic".into()));
            };
            let c = WeierstrassCurve::numeric(*p, *t2, *t3)?;
            let a = c.hasse_witt_value()?;
            let b = c.hasse_witt_recursion().constant_term();
            let trace = *p as i64 + 1 - c.point_count()? as i64;
            let matches_trace = (trace - a.value() as i64).rem_euclid(*p as i64) == 0;
            Ok(Report::check(
                json!({
                    "p": p, "t2": t2, "t3": t3, "mode": "numeric",
                    "coefficient": a.value(),
                    "recursion": b.value(),
                    "agree": a == b,
                    "trace": trace,
                    "matches_trace": matches_trace,
                }),
                a == b && matches_trace,
            ))
        }
        EcCmd::Count { curve } => {
            let c = curve.curve()?;
            let n = c.point_count()?;
            let trace = curve.p as i64 + 1 - n as i64;
            let hw = c.hasse_witt_value()?;
            let matches = (trace - hw.value() as i64).rem_euclid(curve.p as i64) == 0;
            Ok(Report::check(
                json!({
                    "p": curve.p, "t2": curve.t2, "t3": curve.t3,
                    "count": n,
                    "trace": trace,
                    "hasse_witt": hw.value(),
                    "matches_trace": matches,
                }),
                matches,
            ))
        }
        EcCmd::Powersum { curve, jmax } => {
            let c = curve.curve()?;
            let j = jmax.unwrap_or((curve.p - 1) / 2);
            let sums = c.power_sums(j)?;
            let ok = sums.iter().all(|(l, r)| l == r);
            let rows: Vec<_> = sums
                .iter()
                .enumerate()
                .map(|(i, (l, r))| json!({"j": i + 1, "sum": signed(*l), "minus_c": signed(*r), "holds": l == r}))
                .collect();
            Ok(Report::check(
                json!({"p": curve.p, "t2": curve.t2, "t3": curve.t3, "jmax": j, "results": rows}),
                ok,
            ))
        }
        EcCmd::Abcheck { p, pmax } => {
            let ps = match pmax {
                Some(n) => primes_between(5, *n),
                None if p.is_empty() => return Err(CliError::Usage("give --p or --pmax".into())),
                None => p.clone(),
            };
            let mut ok = true;
            let mut results = Vec::new();
            for q in ps {
                let h = elliptic::ab_congruence_check(q)?;
                ok &= h;
                results.push(json!({"p": q, "holds": h}));
            }
            Ok(Report::check(json!({ "results": results }), ok))
        }
        EcCmd::Exactform { n, p } => {
            let n = match (n, p) {
                (_, Some(p)) => {
                    if *p < 5 || !is_prime(*p) {
                        return Err(CliError::Usage(format!("{p} is not a prime >= 5")));
                    }
                    p.div_ceil(2)
                }
                (Some(n), None) => *n,
                (None, None) => unreachable!("clap requires one of them"),
            };
            let f = elliptic::exact_form_reduce(n)?;
            let names = ["t2", "t3"];
            let mut out = json!({
                "n": n,
                "A0": f.a0.fmt_rational_with(&names),
                "A1": f.a1.fmt_rational_with(&names),
                "Q": f.q.fmt_rational_with(&["x", "t2", "t3"]),
                "valid": f.is_valid(),
            });
            let mut ok = f.is_valid();
            if let Some(p) = p {
                let h = elliptic::exact_form_congruence_check(*p)?;
                out["p"] = json!(p);
                out["congruence"] = json!(h);
                ok &= h;
            }
            Ok(Report::check(out, ok))
        }
    }
}
