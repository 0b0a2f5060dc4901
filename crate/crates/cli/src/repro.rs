use std::collections::BTreeMap;
use std::fmt::Write as _;

use adelab::arith::{primes_between, primes_up_to, rat, Q};
use adelab::elliptic::{self, WeierstrassCurve};
use adelab::hodge;
use adelab::ode::{self, OdeSystem};
use adelab::par::Schedule;
use adelab::vfield;
use serde_json::json;
use similar::TextDiff;

use crate::report::Report;
use crate::CliError;

pub struct Table {
    pub id: &'static str,
    pub golden: &'static str,
    compute: fn() -> Result<String, CliError>,
}

macro_rules! table {
    ($id:literal, $f:ident) => {
        Table {
            id: $id,
            golden: include_str!(concat!("../golden/", $id, ".txt")),
            compute: $f,
        }
    };
}

pub const TABLES: &[Table] = &[
    table!("lame-table4-badprimes", lame_table4),
    table!("lame-12-89", lame_12_89),
    table!("lame-5-87", lame_5_87),
    table!("hyp-half", hyp_half),
    table!("ramanujan-pclosed", ramanujan_pclosed),
    table!("modular4-pclosed", modular4_pclosed),
    table!("limitcycle-p3", limitcycle_p3),
    table!("ab-congruence-100", ab_congruence_100),
    table!("powersum-11", powersum_11),
    table!("cubic-codim-table", cubic_codim_table),
    table!("mpk-grid", mpk_grid),
];

pub fn find(id: &str) -> Result<&'static Table, CliError> {
    TABLES.iter().find(|t| t.id == id).ok_or_else(|| {
        let ids: Vec<_> = TABLES.iter().map(|t| t.id).collect();
        CliError::Usage(format!("unknown table {id:?}; known: {}", ids.join(", ")))
    })
}

/// Golden content without comment lines.
fn strip(s: &str) -> String {
    s.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{}\n", l.trim_end()))
        .collect()
}

impl Table {
    pub fn compute(&self) -> Result<String, CliError> {
        (self.compute)()
    }

    /// Golden header followed by freshly computed data, for regenerating the file.
    pub fn render(&self) -> Result<String, CliError> {
        let header: String = self
            .golden
            .lines()
            .take_while(|l| l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        Ok(header + &self.compute()?)
    }

    pub fn run(&self, golden: Option<&str>) -> Result<(Report, Option<String>), CliError> {
        let got = self.compute()?;
        let want = strip(golden.unwrap_or(self.golden));
        let matches = got == want;
        let diff = (!matches).then(|| {
            TextDiff::from_lines(&want, &got)
                .unified_diff()
                .context_radius(2)
                .header(&format!("golden/{}.txt", self.id), "computed")
                .to_string()
        });
        let report = Report::check(
            json!({
                "id": self.id,
                "lines": got.lines().count(),
                "matches": matches,
                "diff": diff,
            }),
            matches,
        );
        Ok((report, diff))
    }
}

fn set(v: &[u64]) -> String {
    let s: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("{{{}}}", s.join(","))
}

fn lame(n: Q, b: Q, g2: Q, g3: Q) -> OdeSystem {
    OdeSystem::lame(&n, &b, &g2, &g3)
}

fn fmt_q(q: &Q) -> String {
    adelab::arith::fmt_rational(q)
}

fn lame_lines(tuples: &[[Q; 4]], pmax: u64, ring: bool) -> Result<String, CliError> {
    let mut s = String::new();
    for t in tuples {
        let r = ode::bad_prime_scan_with(&lame(t[0].clone(), t[1].clone(), t[2].clone(), t[3].clone()), pmax, 1, None, Schedule::Parallel)?;
        let _ = write!(s, "{} {} {} {}", fmt_q(&t[0]), fmt_q(&t[1]), fmt_q(&t[2]), fmt_q(&t[3]));
        if ring {
            let _ = write!(s, " ring={}", set(&r.ring()));
        }
        let _ = writeln!(s, " bad={}", set(&r.bad()));
    }
    Ok(s)
}

fn i(n: i64) -> Q {
    rat(n, 1)
}

fn lame_table4() -> Result<String, CliError> {
    let t = [
        [rat(1, 4), i(0), i(0), i(1)],
        [rat(3, 4), rat(3, 8), i(-168), i(622)],
        [rat(1, 6), i(0), i(1), i(0)],
        [rat(5, 6), i(0), i(1), i(0)],
        [rat(1, 6), rat(1, 6), i(60), i(90)],
        [rat(1, 10), i(0), i(0), i(1)],
        [rat(3, 10), rat(3, 100), i(3), rat(5, 4)],
        [rat(7, 10), i(0), i(0), i(1)],
        [rat(7, 4), i(0), i(0), i(1)],
    ];
    lame_lines(&t, 100, true)
}

fn lame_12_89() -> Result<String, CliError> {
    lame_lines(&[[rat(12, 89), i(0), i(0), i(1)]], 150, false)
}

fn lame_5_87() -> Result<String, CliError> {
    lame_lines(&[[rat(5, 87), i(0), i(0), i(1)]], 150, false)
}

fn hyp_half() -> Result<String, CliError> {
    let r = ode::bad_prime_scan_with(
        &OdeSystem::hypergeometric(&rat(1, 2), &rat(1, 2), &i(1)),
        150,
        1,
        None,
        Schedule::Parallel,
    )?;
    Ok(r.entries.iter().map(|e| format!("{} {}\n", e.p, e.class.as_str())).collect())
}

fn pclosed_lines(name: &str, pmax: u64) -> Result<String, CliError> {
    let v = vfield::catalog(name, &BTreeMap::new())?;
    Ok(vfield::pclosed_scan(&v, pmax, Schedule::Parallel)?
        .iter()
        .map(|r| format!("{} {}\n", r.p, r.class.as_str()))
        .collect())
}

fn ramanujan_pclosed() -> Result<String, CliError> {
    pclosed_lines("ramanujan-e", 50)
}

fn modular4_pclosed() -> Result<String, CliError> {
    pclosed_lines("modular4", 50)
}

fn limitcycle_p3() -> Result<String, CliError> {
    pclosed_lines("limitcycle", 100)
}

fn ab_congruence_100() -> Result<String, CliError> {
    let ps = primes_between(5, 100);
    let res = adelab::par::map_ordered(Schedule::Parallel, &ps, |&p| elliptic::ab_congruence_check(p));
    let mut s = String::new();
    for (p, r) in ps.iter().zip(res) {
        let _ = writeln!(s, "{p} {}", r?);
    }
    Ok(s)
}

fn powersum_11() -> Result<String, CliError> {
    let p = 11;
    let mut s = String::new();
    let c = WeierstrassCurve::numeric(p, 1, 1)?;
    for (j, (l, r)) in c.power_sums((p - 1) / 2)?.iter().enumerate() {
        let _ = writeln!(s, "t2=1 t3=1 j={} sum={} -c={}", j + 1, l.value(), r.value());
    }
    let (mut total, mut hold) = (0, 0);
    for t2 in 0..p as i64 {
        for t3 in 0..p as i64 {
            let Ok(c) = WeierstrassCurve::numeric(p, t2, t3) else { continue };
            total += 1;
            if c.power_sum_check((p - 1) / 2)? {
                hold += 1;
            }
        }
    }
    let _ = writeln!(s, "nonsingular curves {total}, all j hold for {hold}");
    Ok(s)
}

fn cubic_codim_table() -> Result<String, CliError> {
    let mut s = String::from("n dimT L M min\n");
    for r in hodge::table_repro() {
        let _ = writeln!(s, "{} {} {} {} {}", r.n, r.dim_t, r.l, r.m, r.min_codim);
    }
    Ok(s)
}

fn mpk_grid() -> Result<String, CliError> {
    let mut s = String::from("p m1 m2\n");
    for p in primes_up_to(50) {
        let _ = writeln!(s, "{p} {} {}", ode::mpk(p, 1), ode::mpk(p, 2));
    }
    Ok(s)
}
