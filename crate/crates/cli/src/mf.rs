use adelab::arith::{fmt_rational, is_prime, primes_between};
use adelab::modular;
use clap::Subcommand;
use serde_json::json;

use crate::report::Report;
use crate::CliError;

#[derive(Subcommand, Debug)]
pub enum MfCmd {
    /// q-expansion of the normalised Eisenstein series E_k.
    Eisenstein {
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = 10)]
        order: u32,
        /// Also write E_k as a polynomial in E4, E6.
        #[arg(long)]
        decompose: bool,
    },
    /// A and B as polynomials in t2, t3.
    Ab {
        #[arg(long)]
        p: u64,
        /// Keep E4, E6 unscaled instead of substituting 12 t2, -216 t3.
        #[arg(long)]
        isobaric: bool,
    },
    /// E_{p-1} ≡ 1 and E_{p+1} ≡ E_2 mod p coefficientwise.
    CheckEp {
        #[arg(long, value_delimiter = ',', conflicts_with = "pmax")]
        p: Vec<u64>,
        #[arg(long)]
        pmax: Option<u64>,
        #[arg(long, default_value_t = 30)]
        order: u32,
    },
    /// Denominator-clearing multiplier of E_k against |numerator(B_k/k)|.
    Numerator {
        #[arg(long, value_delimiter = ',', default_values_t = [4u32, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24])]
        weight: Vec<u32>,
    },
}

pub fn run(cmd: &MfCmd) -> Result<Report, CliError> {
    match cmd {
        MfCmd::Eisenstein {
            weight,
            order,
            decompose,
        } => {
            let e = modular::eisenstein_q(*weight, *order)?;
            let mut out = json!({
                "weight": weight,
                "order": order,
                "coeffs": e.coeffs().iter().map(fmt_rational).collect::<Vec<_>>(),
            });
            if *decompose {
                let iso = modular::isobaric_decompose(&e)?;
                out["isobaric"] = json!(iso.poly.fmt_rational_with(&["E4", "E6"]));
            }
            Ok(Report::new(out))
        }
        MfCmd::Ab { p, isobaric } => {
            let (a, b, names) = if *isobaric {
                let (a, b) = modular::ab_isobaric(*p)?;
                (a, b, ["E4", "E6"])
            } else {
                let (a, b) = modular::ab_polynomials(*p)?;
                (a, b, ["t2", "t3"])
            };
            Ok(Report::new(json!({
                "p": p,
                "isobaric": isobaric,
                "A": a.fmt_rational_with(&names),
                "B": b.fmt_rational_with(&names),
            })))
        }
        MfCmd::CheckEp { p, pmax, order } => {
            let ps = match pmax {
                Some(n) => primes_between(5, *n),
                None if p.is_empty() => return Err(CliError::Usage("give --p or --pmax".into())),
                None => p.clone(),
            };
            if let Some(bad) = ps.iter().find(|&&q| q < 5 || !is_prime(q)) {
                return Err(CliError::Usage(format!("{bad} is not a prime >= 5")));
            }
            let mut ok = true;
            let mut results = Vec::new();
            for q in ps {
                let h = modular::ep_congruence_check(q, *order)?;
                ok &= h;
                results.push(json!({"p": q, "holds": h}));
            }
            Ok(Report::check(json!({"order": order, "results": results}), ok))
        }
        MfCmd::Numerator { weight } => {
            let mut ok = true;
            let mut results = Vec::new();
            for &w in weight {
                let m = modular::numerator_multiplier(w)?;
                let e = modular::bernoulli_ratio_numerator(w);
                ok &= m == e;
                results.push(json!({
                    "weight": w,
                    "multiplier": m.to_string(),
                    "bernoulli_numerator": e.to_string(),
                    "agree": m == e,
                }));
            }
            Ok(Report::check(json!({ "results": results }), ok))
        }
    }
}
