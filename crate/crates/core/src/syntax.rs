//! Text syntax for loop-algebra elements.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*  |  '0'
//! term   := [coef '*'] atom ['*' bfactor]
//! atom   := 'D(' gauss,… ';' int,… ')'  |  't(' int,… ')'
//! coef   := number | '(' gauss ')'
//! bfactor:= '(' bpoly ')' | bmono
//! bmono  := [number | '(' gauss ')'] [var ['^' int]]       var ∈ {x, t}
//! ```
//!
//! Example: `D(1,0;0,1)*x + t(1,0)*1`. Output uses the same grammar, ordered
//! by key, so printing then parsing gives the element back.

use std::collections::BTreeMap;

use crate::coeffalg::{BElem, BKind, BRef};
use crate::error::{Error, Result};
use crate::loopalg::{Degree, Key, Kind, LoopElem};
use crate::scalar::GaussRat;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    pres: &'a BRef,
    rank: Option<usize>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.src[..self.pos].chars().count() + 1,
            message: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn starts_atom(&mut self) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        rest.starts_with("D(") || rest.starts_with("t(")
    }

    /// Reads raw text up to (not including) any of `stops`, tracking parens.
    fn take_until(&mut self, stops: &[char]) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0;
        while let Some(c) = self.peek_raw() {
            if depth == 0 && stops.contains(&c) {
                break;
            }
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            self.pos += c.len_utf8();
        }
        self.src[start..self.pos].trim()
    }

    fn gauss_text(&mut self, text: &str, at: usize) -> Result<GaussRat> {
        text.parse::<GaussRat>().map_err(|_| Error::Parse {
            column: self.src[..at].chars().count() + 1,
            message: format!("invalid number `{text}`"),
        })
    }

    fn int_list(&mut self) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        loop {
            let at = self.pos;
            let text = self.take_until(&[',', ')']);
            match text.parse::<i64>() {
                Ok(v) => out.push(v),
                Err(_) => {
                    self.pos = at;
                    self.skip_ws();
                    return self.err(format!("invalid integer `{text}`"));
                }
            }
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn check_rank(&mut self, n: usize) -> Result<()> {
        match self.rank {
            None => {
                self.rank = Some(n);
                Ok(())
            }
            Some(r) if r == n => Ok(()),
            Some(r) => self.err(format!("degree has length {n}, expected rank {r}")),
        }
    }

    /// Parses an unsigned number like `3`, `2/5`, `4i`, `i`.
    fn number(&mut self) -> Result<Option<GaussRat>> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = self.pos;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'/') {
            end += 1;
        }
        if end < bytes.len() && bytes[end] == b'i' {
            end += 1;
        }
        if end == start {
            return Ok(None);
        }
        self.pos = end;
        let text = &self.src[start..end];
        self.gauss_text(text, start).map(Some)
    }

    /// Coefficient: bare number or parenthesized Gaussian rational.
    fn coef(&mut self) -> Result<Option<GaussRat>> {
        if self.peek() == Some('(') {
            let save = self.pos;
            self.pos += 1;
            let at = self.pos;
            let text = self.take_until(&[')']);
            let v = self.gauss_text(text, at);
            if v.is_ok() && self.eat(')') {
                return v.map(Some);
            }
            self.pos = save;
            return Ok(None);
        }
        self.number()
    }

    fn atom(&mut self) -> Result<LoopElem> {
        self.skip_ws();
        if self.src[self.pos..].starts_with("D(") {
            self.pos += 2;
            let mut u = Vec::new();
            loop {
                let at = self.pos;
                let text = self.take_until(&[',', ';']);
                u.push(self.gauss_text(text, at)?);
                if self.eat(';') {
                    break;
                }
                self.expect(',')?;
            }
            let r = self.int_list()?;
            self.expect(')')?;
            if u.len() != r.len() {
                return self.err(format!(
                    "direction has {} components but degree has {}",
                    u.len(),
                    r.len()
                ));
            }
            self.check_rank(r.len())?;
            LoopElem::d(&u, Degree(r), BElem::one(self.pres))
        } else if self.src[self.pos..].starts_with("t(") {
            self.pos += 2;
            let r = self.int_list()?;
            self.expect(')')?;
            self.check_rank(r.len())?;
            Ok(LoopElem::t(Degree(r), BElem::one(self.pres)))
        } else {
            self.err("expected `D(` or `t(`")
        }
    }

    fn var_name(&self) -> char {
        match self.pres.kind() {
            BKind::Laurent => 't',
            _ => 'x',
        }
    }

    fn bmono(&mut self) -> Result<BElem> {
        let start = self.pos;
        let c = self.coef()?;
        let var = self.var_name();
        let mut exp = None;
        if self.peek() == Some(var) {
            self.pos += 1;
            let mut e = 1;
            if self.eat('^') {
                self.skip_ws();
                let s = self.pos;
                let bytes = self.src.as_bytes();
                let mut end = s;
                if end < bytes.len() && bytes[end] == b'-' {
                    end += 1;
                }
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                e = match self.src[s..end].parse() {
                    Ok(v) => v,
                    Err(_) => return self.err("invalid exponent"),
                };
                self.pos = end;
            }
            exp = Some(e);
        }
        if c.is_none() && exp.is_none() {
            self.pos = start;
            return self.err("expected a coefficient-algebra term");
        }
        let c = c.unwrap_or_else(GaussRat::one);
        let e = exp.unwrap_or(0);
        match BElem::from_poly(self.pres, BTreeMap::from([(e, c)])) {
            Ok(b) => Ok(b),
            Err(err) => {
                self.pos = start;
                self.err(err.to_string())
            }
        }
    }

    fn bpoly(&mut self) -> Result<BElem> {
        let mut acc = BElem::zero(self.pres);
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let m = self.bmono()?;
            acc = if neg { &acc - &m } else { &acc + &m };
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn bfactor(&mut self) -> Result<BElem> {
        if self.eat('(') {
            let b = self.bpoly()?;
            self.expect(')')?;
            Ok(b)
        } else {
            self.bmono()
        }
    }

    fn term(&mut self) -> Result<LoopElem> {
        let coef = if self.starts_atom() {
            None
        } else {
            let at = self.pos;
            match self.coef()? {
                Some(c) => {
                    self.expect('*')?;
                    Some(c)
                }
                None => {
                    self.pos = at;
                    return self.err("expected a term");
                }
            }
        };
        let mut x = self.atom()?;
        if self.eat('*') {
            let b = self.bfactor()?;
            x = x.mul_b(&b)?;
        }
        if let Some(c) = coef {
            x = x.scale(&c);
        }
        Ok(x)
    }

    fn expr(&mut self) -> Result<LoopElem> {
        self.skip_ws();
        if self.src[self.pos..].trim() == "0" {
            let Some(n) = self.rank else {
                return self.err("cannot infer the rank of `0`; supply a rank");
            };
            self.pos = self.src.len();
            return Ok(LoopElem::zero(n, self.pres));
        }
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc: Option<LoopElem> = None;
        loop {
            let mut t = self.term()?;
            if neg {
                t = t.scale(&GaussRat::from_int(-1));
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a.try_add(&t)?,
            });
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(acc.unwrap())
    }
}

/// Parses an element. `rank` pins the ambient rank; when `None` it is taken
/// from the first degree vector.
pub fn parse_elem(src: &str, rank: Option<usize>, pres: &BRef) -> Result<LoopElem> {
    let mut p = Parser {
        src,
        pos: 0,
        pres,
        rank,
    };
    p.expr()
}

/// Coefficient prefix: `""` for 1, `"-"` for −1, else `"c*"`.
fn coef_prefix(c: &GaussRat) -> String {
    if c.is_one() {
        String::new()
    } else if (-c).is_one() {
        "-".into()
    } else if c.needs_parens() {
        format!("({c})*")
    } else {
        format!("{c}*")
    }
}

fn b_suffix(b: &BElem) -> String {
    let rep = b.representative();
    let s = b.to_string();
    if rep.len() == 1 && rep.values().next().unwrap().is_one() {
        s
    } else {
        format!("({s})")
    }
}

fn ints(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// Canonical text form, terms ordered by degree then kind.
pub fn format_elem(x: &LoopElem) -> String {
    let n = x.rank();
    let mut parts: Vec<String> = Vec::new();
    let mut by_degree: BTreeMap<&Degree, Vec<(&Key, &BElem)>> = BTreeMap::new();
    for (k, b) in x.terms() {
        by_degree.entry(&k.degree).or_default().push((k, b));
    }
    for (r, entries) in by_degree {
        let rs = ints(&r.0);
        let mut d_entries = Vec::new();
        for (k, b) in entries {
            match k.kind {
                Kind::A => match b.as_scalar() {
                    Some(c) => parts.push(format!("{}t({rs})*1", coef_prefix(&c))),
                    None => parts.push(format!("t({rs})*{}", b_suffix(b))),
                },
                Kind::D(i) => d_entries.push((i, b)),
            }
        }
        if d_entries.is_empty() {
            continue;
        }
        let scalars: Option<Vec<(usize, GaussRat)>> = d_entries
            .iter()
            .map(|(i, b)| b.as_scalar().map(|c| (*i, c)))
            .collect();
        match scalars {
            Some(sc) => {
                let lead = sc[0].1.clone();
                let inv = lead.inv().expect("stored coefficients are nonzero");
                let mut u = vec![GaussRat::zero(); n];
                for (i, c) in sc {
                    u[i] = &c * &inv;
                }
                let us: Vec<String> = u.iter().map(GaussRat::to_string).collect();
                parts.push(format!("{}D({};{rs})*1", coef_prefix(&lead), us.join(",")));
            }
            None => {
                for (i, b) in d_entries {
                    let mut u = vec!["0"; n];
                    u[i] = "1";
                    parts.push(format!("D({};{rs})*{}", u.join(","), b_suffix(b)));
                }
            }
        }
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, p) in parts.into_iter().enumerate() {
        if idx == 0 {
            out.push_str(&p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&p);
        }
    }
    out
}
