use std::collections::BTreeMap;

use adelab::arith::{is_prime, Modulus, Residue, TruncSeries};
use adelab::par::Schedule;
use adelab::vfield::{self, CollinearityReport, Derivation};
use clap::Subcommand;
use serde_json::{json, Value};

use crate::input;
use crate::report::{Report, Row};
use crate::CliError;

#[derive(Subcommand, Debug)]
pub enum VfCmd {
    /// Collinearity of v and v^p modulo each prime.
    Pclosed {
        /// One of ramanujan-a, ramanujan-e, lorenz, modular4, limitcycle.
        #[arg(long)]
        catalog: String,
        #[arg(long)]
        params: Option<String>,
        #[arg(long, conflicts_with = "p")]
        pmax: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        /// Evaluate the minors at this point instead of symbolically.
        #[arg(long)]
        point: Option<String>,
    },
    /// v(B - t1 A) = 0 mod p for the Eisenstein-normalised Ramanujan field.
    Firstintegral {
        #[arg(long, value_delimiter = ',', default_values_t = [5u64, 7, 11, 13])]
        p: Vec<u64>,
    },
    /// The closed formula for v^p of the Ramanujan field.
    Bianchini {
        #[arg(long, value_delimiter = ',', default_values_t = [5u64, 7, 11])]
        p: Vec<u64>,
    },
    /// Linearizing coordinate of a(q) d/dq over F_p.
    Linearize {
        #[arg(long)]
        p: u64,
        /// Coefficients a_0, a_1, ... of a(q); a_0 = 0 and a_1 is the eigenvalue.
        #[arg(long)]
        a: String,
        #[arg(long)]
        order: u32,
    },
}

fn report_json(r: &CollinearityReport, names: &[&str]) -> Value {
    let w = r.witness.as_ref().map(|w| {
        let lead = w
            .minor
            .leading()
            .map(|(m, c)| adelab::arith::SparsePoly::monomial(*c, m.exps()).fmt_with(names))
            .unwrap_or_default();
        json!({"i": w.i, "j": w.j, "terms": w.minor.nterms(), "leading": lead})
    });
    json!({"p": r.p, "status": r.class.as_str(), "witness": w})
}

fn checked_primes(ps: &[u64], min: u64) -> Result<(), CliError> {
    match ps.iter().find(|&&p| p < min || !is_prime(p)) {
        Some(p) => Err(CliError::Usage(format!("{p} is not a prime >= {min}"))),
        None => Ok(()),
    }
}

fn per_prime(ps: &[u64], f: impl Fn(u64) -> Result<bool, CliError>) -> Result<Report, CliError> {
    let mut ok = true;
    let mut out = Vec::new();
    for &p in ps {
        let h = f(p)?;
        ok &= h;
        out.push(json!({"p": p, "holds": h}));
    }
    Ok(Report::check(json!({ "results": out }), ok))
}

pub fn run(cmd: &VfCmd) -> Result<Report, CliError> {
    match cmd {
        VfCmd::Pclosed {
            catalog,
            params,
            pmax,
            p,
            point,
        } => {
            let prm = input::params(params.as_deref())?;
            let v: Derivation<_> = vfield::catalog(catalog, &prm)?;
            let names = v.var_names();
            let pt = point.as_deref().map(input::rational_list).transpose()?;
            let reports = match (pmax, p) {
                (Some(pmax), None) if pt.is_none() => vfield::pclosed_scan(&v, *pmax, Schedule::Parallel)?,
                (Some(pmax), None) => adelab::arith::primes_up_to(*pmax)
                    .into_iter()
                    .map(|p| vfield::is_pclosed(&v, p, pt.as_deref()))
                    .collect::<Result<_, _>>()?,
                (None, Some(p)) => vec![vfield::is_pclosed(&v, *p, pt.as_deref())?],
                _ => return Err(CliError::Usage("give --pmax or --p".into())),
            };
            let rows = reports
                .iter()
                .map(|r| Row {
                    p: r.p,
                    status: r.class.as_str().into(),
                    m: None,
                    k: None,
                })
                .collect();
            let by = |c: &str| -> Vec<u64> {
                reports.iter().filter(|r| r.class.as_str() == c).map(|r| r.p).collect()
            };
            let params_map: BTreeMap<_, _> = prm;
            Ok(Report::new(json!({
                "catalog": catalog,
                "params": input::params_json(&params_map),
                "field": v.fmt_rational(),
                "vars": names,
                "ring": by("ring"),
                "collinear": by("collinear"),
                "not_collinear": by("not-collinear"),
                "entries": reports.iter().map(|r| report_json(r, &names)).collect::<Vec<_>>(),
            }))
            .with_rows(rows))
        }
        VfCmd::Firstintegral { p } => {
            checked_primes(p, 5)?;
            let v = vfield::catalog("ramanujan-e", &BTreeMap::new())?;
            let mut r = per_prime(p, |p| {
                let m = Modulus::prime(p).map_err(adelab::vfield::VfError::from)?;
                let f = vfield::ramanujan_first_integral(p)?;
                Ok(vfield::first_integral_check(&v.reduce(m)?, &f))
            })?;
            r.result["field"] = json!("ramanujan-e");
            r.result["integral"] = json!("B - t1*A");
            Ok(r)
        }
        VfCmd::Bianchini { p } => {
            checked_primes(p, 5)?;
            let mut r = per_prime(p, |p| Ok(vfield::bianchini_check(p)?))?;
            r.result["field"] = json!("ramanujan-a");
            Ok(r)
        }
        VfCmd::Linearize { p, a, order } => {
            if !is_prime(*p) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
            let m = Modulus::prime(*p).map_err(adelab::vfield::VfError::from)?;
            let coeffs: Vec<Residue> = input::rational_list(a)?
                .iter()
                .map(|c| m.reduce(c).ok_or_else(|| CliError::Usage(format!("{p} divides a denominator in --a"))))
                .collect::<Result<_, _>>()?;
            if coeffs.len() < 2 {
                return Err(CliError::Usage("--a needs at least a_0 and a_1".into()));
            }
            let lambda = coeffs[1];
            let series = TruncSeries::from_coeffs(&m, &coeffs, *order);
            let f = vfield::linearize_1d(&series, lambda, *order)?;
            let v = Derivation::from_components(vec![series.poly().clone()])?;
            let holds = v.apply_series(&f) == f.scale(&lambda);
            Ok(Report::check(
                json!({
                    "p": p,
                    "order": order,
                    "lambda": lambda.value(),
                    "f": f.coeffs().iter().map(|c| c.value()).collect::<Vec<_>>(),
                    "holds": holds,
                }),
                holds,
            ))
        }
    }
}
