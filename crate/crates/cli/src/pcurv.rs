use adelab::arith::{fmt_rational, is_prime, QPoly};
use adelab::ode::{self, Curvature, OdeSystem};
use adelab::par::Schedule;
use clap::{Args, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::input;
use crate::report::{Report, Row};
use crate::CliError;

#[derive(Subcommand, Debug)]
pub enum PcurvCmd {
    /// Classify every prime up to --pmax as ring, good or bad.
    Scan {
        #[command(flatten)]
        ode: OdeArgs,
        #[arg(long)]
        pmax: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Stop once more than this many bad primes were seen.
        #[arg(long)]
        maxbad: Option<usize>,
    },
    /// Test B_m ≡ 0 mod p^k at m = m_{p,k} for one prime.
    Test {
        #[command(flatten)]
        ode: OdeArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Exit 1 unless the outcome is this one.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Fraction of good primes among classified primes up to --pmax.
    Density {
        #[command(flatten)]
        ode: OdeArgs,
        #[arg(long)]
        pmax: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Zero,
    Nonzero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OdeKind {
    /// Lamé equation; params n, B, g2, g3.
    Lame,
    /// Gauss hypergeometric equation; params a, b, c.
    Hypergeometric,
    /// Rank-one system y' = sqrt(d) y; param d.
    Sqrt,
    /// Scalar equation from --coeffs.
    Scalar,
}

#[derive(Args, Debug)]
pub struct OdeArgs {
    #[arg(long, value_enum)]
    pub ode: OdeKind,
    /// Comma-separated key=value list, values integers or a/b.
    #[arg(long)]
    pub params: Option<String>,
    /// Coefficients c0;c1;...;cr of c_r y^(r) + ... + c0 y = 0 as polynomials in z.
    #[arg(long)]
    pub coeffs: Option<String>,
}

impl OdeArgs {
    pub fn build(&self) -> Result<(OdeSystem, serde_json::Value), CliError> {
        let p = input::params(self.params.as_deref())?;
        let allowed: &[&str] = match self.ode {
            OdeKind::Lame => &["n", "B", "g2", "g3"],
            OdeKind::Hypergeometric => &["a", "b", "c"],
            OdeKind::Sqrt => &["d"],
            OdeKind::Scalar => &[],
        };
        if let Some(k) = p.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(CliError::Usage(format!(
                "unknown parameter {k:?}; expected {}",
                if allowed.is_empty() { "none".to_string() } else { allowed.join(", ") }
            )));
        }
        let need = |k: &str| {
            p.get(k)
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("missing parameter {k}")))
        };
        let sys = match self.ode {
            OdeKind::Lame => OdeSystem::lame(&need("n")?, &need("B")?, &need("g2")?, &need("g3")?),
            OdeKind::Hypergeometric => OdeSystem::hypergeometric(&need("a")?, &need("b")?, &need("c")?),
            OdeKind::Sqrt => {
                let d = need("d")?;
                let d = d
                    .is_integer()
                    .then(|| d.to_integer().to_i64())
                    .flatten()
                    .ok_or_else(|| CliError::Usage("d must be a machine-size integer".into()))?;
                OdeSystem::rank_one_quadratic(d)?
            }
            OdeKind::Scalar => {
                let text = self
                    .coeffs
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("--ode scalar needs --coeffs".into()))?;
                let cs: Vec<QPoly> = text
                    .split(';')
                    .map(|c| input::polynomial(c, &["z"]))
                    .collect::<Result<_, _>>()?;
                OdeSystem::from_scalar(&cs)?
            }
        };
        let mut desc = serde_json::Map::new();
        desc.insert("kind".into(), json!(format!("{:?}", self.ode).to_lowercase()));
        desc.insert("params".into(), input::params_json(&p));
        if let Some(c) = &self.coeffs {
            desc.insert("coeffs".into(), json!(c));
        }
        Ok((sys, serde_json::Value::Object(desc)))
    }
}

fn status(c: Curvature) -> &'static str {
    match c {
        Curvature::RingPrime => "ring",
        Curvature::Zero => "zero",
        Curvature::NonZero => "nonzero",
    }
}

pub fn run(cmd: &PcurvCmd) -> Result<Report, CliError> {
    match cmd {
        PcurvCmd::Scan { ode, pmax, k, maxbad } => {
            let (sys, desc) = ode.build()?;
            let r = ode::bad_prime_scan_with(&sys, *pmax, *k, *maxbad, Schedule::Parallel)?;
            let rows: Vec<Row> = r
                .entries
                .iter()
                .map(|e| Row {
                    p: e.p,
                    status: e.class.as_str().into(),
                    m: Some(e.m),
                    k: Some(*k),
                })
                .collect();
            let entries: Vec<_> = r
                .entries
                .iter()
                .map(|e| json!({"p": e.p, "status": e.class.as_str(), "m": e.m}))
                .collect();
            Ok(Report::new(json!({
                "ode": desc,
                "pmax": pmax,
                "k": k,
                "ring": r.ring(),
                "good": r.good(),
                "bad": r.bad(),
                "truncated": r.truncated,
                "entries": entries,
            }))
            .with_rows(rows))
        }
        PcurvCmd::Test { ode, p, k, expect } => {
            if !is_prime(*p) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
            let (sys, desc) = ode.build()?;
            let c = ode::curvature_test(&sys, *p, *k)?;
            let ok = match expect {
                None => true,
                Some(Expect::Zero) => c == Curvature::Zero,
                Some(Expect::Nonzero) => c == Curvature::NonZero,
            };
            let m = ode::mpk(*p, *k);
            Ok(Report::check(
                json!({"ode": desc, "p": p, "k": k, "m": m, "status": status(c)}),
                ok,
            )
            .with_rows(vec![Row {
                p: *p,
                status: status(c).into(),
                m: Some(m),
                k: Some(*k),
            }]))
        }
        PcurvCmd::Density { ode, pmax } => {
            let (sys, desc) = ode.build()?;
            let r = ode::bad_prime_scan_with(&sys, *pmax, 1, None, Schedule::Parallel)?;
            let (good, bad) = (r.good().len(), r.bad().len());
            if good + bad == 0 {
                return Err(CliError::Usage("no classified primes in range".into()));
            }
            let d = adelab::arith::rat(good as i64, (good + bad) as i64);
            Ok(Report::new(json!({
                "ode": desc,
                "pmax": pmax,
                "good": good,
                "classified": good + bad,
                "density": fmt_rational(&d),
                "density_decimal": format!("{:.5}", d.to_f64().unwrap_or(f64::NAN)),
            })))
        }
    }
}
