use std::collections::BTreeMap;

use adelab::arith::{fmt_rational, parse_rational, Monomial, QPoly, Q};
use num_traits::{One, Zero};

use crate::CliError;

pub fn rational(s: &str) -> Result<Q, CliError> {
    parse_rational(s).map_err(|_| CliError::Usage(format!("expected an integer or a/b, got {s:?}")))
}

/// `k=v,k=v` with rational values.
pub fn params(s: Option<&str>) -> Result<BTreeMap<String, Q>, CliError> {
    let mut out = BTreeMap::new();
    let Some(s) = s else { return Ok(out) };
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("parameter {item:?} is not key=value")))?;
        if out.insert(k.trim().to_string(), rational(v)?).is_some() {
            return Err(CliError::Usage(format!("parameter {k:?} given twice")));
        }
    }
    Ok(out)
}

pub fn rational_list(s: &str) -> Result<Vec<Q>, CliError> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(rational).collect()
}

pub fn u32_list(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| CliError::Usage(format!("expected a non-negative integer, got {x:?}"))))
        .collect()
}

/// `1,0,0,3;0,2,2,0` style exponent vectors.
pub fn exponent_vectors(s: &str) -> Result<Vec<Vec<u32>>, CliError> {
    s.split([';', '\n'])
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(u32_list)
        .collect()
}

pub fn params_json(p: &BTreeMap<String, Q>) -> serde_json::Value {
    serde_json::Value::Object(p.iter().map(|(k, v)| (k.clone(), fmt_rational(v).into())).collect())
}

/// Polynomial over Q in the given variables. Accepts +, -, *, ^ with
/// non-negative integer exponents, parentheses and rational literals a/b.
pub fn polynomial(text: &str, vars: &[&str]) -> Result<QPoly, CliError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        vars,
    };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(CliError::Usage(format!("trailing input in polynomial {text:?}")));
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, CliError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(CliError::Usage(format!("unexpected character {c:?} in polynomial")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, what: &str) -> Result<T, CliError> {
        Err(CliError::Usage(format!("polynomial: {what} at token {}", self.pos + 1)))
    }

    fn expr(&mut self) -> Result<QPoly, CliError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QPoly, CliError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QPoly, CliError> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u64 = n.parse().map_err(|_| CliError::Usage(format!("exponent {n} too large")))?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected an exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QPoly, CliError> {
        let n = self.vars.len();
        match self.peek().cloned() {
            Some(Tok::Num(a)) => {
                self.pos += 1;
                let mut q: Q = rational(&a)?;
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Num(b)) => {
                            self.pos += 1;
                            let d = rational(&b)?;
                            if d.is_zero() {
                                return self.err("zero denominator");
                            }
                            q /= d;
                        }
                        _ => return self.err("expected a denominator"),
                    }
                }
                Ok(QPoly::constant(q, n))
            }
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                match self.vars.iter().position(|x| *x == v) {
                    Some(i) => {
                        let mut e = vec![0; n];
                        e[i] = 1;
                        Ok(QPoly::from_terms(n, &(), [(Monomial::from_exps(&e), Q::one())]))
                    }
                    None => Err(CliError::Usage(format!(
                        "unknown variable {v:?}; expected one of {}",
                        self.vars.join(", ")
                    ))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let f = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(f)
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}
