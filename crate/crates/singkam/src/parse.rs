//! Human-readable polynomial expressions.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | number 'i' | 'i' | name | '(' expr ')'
//! name   := q<k> | p<k> | l<k> | t<k> | alpha<k> | golden | sqrt2
//! ```
//!
//! Products that would leave the caps are errors, not truncations.
//! [`print_poly`] writes each coefficient as a `(re+imi)` literal with
//! round-trip float formatting, and the parser reads such a literal back
//! bit for bit.

use singkam_core::{Caps, Monomial, TruncatedSeries, Var, VarKind, C64};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("term at {pos} exceeds the caps (degree {degree} > {deg_cap} or t-degree {t_degree} > {t_cap})")]
    CapOverflow {
        pos: usize,
        degree: u32,
        deg_cap: u32,
        t_degree: u32,
        t_cap: u32,
    },
    #[error("exponent {exp} at {pos} is too large")]
    ExponentOverflow { pos: usize, exp: u64 },
}

impl ParseError {
    /// Character offset into the input.
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownVariable { pos, .. }
            | ParseError::CapOverflow { pos, .. }
            | ParseError::ExponentOverflow { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let start = i;
        match ch {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' | '−' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::Open)),
            ')' => out.push((start, Tok::Close)),
            c if c.is_ascii_digit() || c == '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit: String = chars[start..i].iter().collect();
                let value: f64 = lit.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("bad number `{lit}`"),
                })?;
                let imaginary = i < chars.len()
                    && chars[i] == 'i'
                    && !chars.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric());
                if imaginary {
                    out.push((start, Tok::Imag(value)));
                    i += 1;
                } else {
                    out.push((start, Tok::Num(value)));
                }
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Name(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    caps: Caps,
    alpha: &'a [C64],
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError::Syntax {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<TruncatedSeries, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc += &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TruncatedSeries, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            let pos = self.pos();
            let rhs = self.unary()?;
            acc = self.product(&acc, &rhs, pos)?;
        }
        Ok(acc)
    }

    fn product(&self, a: &TruncatedSeries, b: &TruncatedSeries, pos: usize) -> Result<TruncatedSeries, ParseError> {
        let degree = a.max_degree().unwrap_or(0) + b.max_degree().unwrap_or(0);
        let t_degree = a.max_t_degree().unwrap_or(0) + b.max_t_degree().unwrap_or(0);
        if !a.is_zero() && !b.is_zero() && (degree > self.caps.deg_cap || t_degree > self.caps.t_cap) {
            return Err(ParseError::CapOverflow {
                pos,
                degree,
                deg_cap: self.caps.deg_cap,
                t_degree,
                t_cap: self.caps.t_cap,
            });
        }
        Ok(a * b)
    }

    fn unary(&mut self) -> Result<TruncatedSeries, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<TruncatedSeries, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.pos();
            let e = match self.bump() {
                Some(Tok::Num(x)) if x >= 0.0 && x.fract() == 0.0 => x,
                _ => {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: "exponent must be a non-negative integer".into(),
                    })
                }
            };
            if e > 255.0 {
                return Err(ParseError::ExponentOverflow { pos, exp: e as u64 });
            }
            let mut acc = TruncatedSeries::one(self.caps);
            for _ in 0..e as u32 {
                acc = self.product(&acc, &base, pos)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    /// `(re±imi)` read exactly; `None` leaves the cursor untouched.
    fn literal(&mut self) -> Option<C64> {
        let save = self.at;
        let sign = |p: &mut Self| match p.peek() {
            Some(Tok::Minus) => {
                p.bump();
                -1.0
            }
            Some(Tok::Plus) => {
                p.bump();
                1.0
            }
            _ => 1.0,
        };
        let attempt = (|| {
            if self.bump()? != Tok::Open {
                return None;
            }
            let s1 = sign(self);
            let Tok::Num(re) = self.bump()? else { return None };
            let s2 = match self.bump()? {
                Tok::Plus => 1.0,
                Tok::Minus => -1.0,
                _ => return None,
            };
            let s3 = sign(self);
            let Tok::Imag(im) = self.bump()? else { return None };
            if self.bump()? != Tok::Close {
                return None;
            }
            Some(C64::new(s1 * re, s2 * s3 * im))
        })();
        if attempt.is_none() {
            self.at = save;
        }
        attempt
    }

    fn atom(&mut self) -> Result<TruncatedSeries, ParseError> {
        if let Some(z) = self.literal() {
            return Ok(TruncatedSeries::constant(self.caps, z));
        }
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(x)) => Ok(TruncatedSeries::constant(self.caps, c(x))),
            Some(Tok::Imag(x)) => Ok(TruncatedSeries::constant(self.caps, C64::new(0.0, x))),
            Some(Tok::Open) => {
                let inner = self.expr()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Name(name)) => self.name(&name, pos),
            _ => Err(ParseError::Syntax {
                pos,
                msg: "expected a number, variable or `(`".into(),
            }),
        }
    }

    fn name(&self, name: &str, pos: usize) -> Result<TruncatedSeries, ParseError> {
        let unknown = || ParseError::UnknownVariable {
            pos,
            name: name.to_string(),
        };
        if let Some(z) = named_constant(name) {
            return Ok(TruncatedSeries::constant(self.caps, c(z)));
        }
        if name == "i" {
            return Ok(TruncatedSeries::constant(self.caps, C64::new(0.0, 1.0)));
        }
        let split = name.find(|ch: char| ch.is_ascii_digit()).ok_or_else(unknown)?;
        let (head, digits) = name.split_at(split);
        let index: usize = digits.parse().map_err(|_| unknown())?;
        if index == 0 {
            return Err(unknown());
        }
        let i = index - 1;
        if head == "alpha" {
            let a = self.alpha.get(i).ok_or_else(unknown)?;
            return Ok(TruncatedSeries::constant(self.caps, *a));
        }
        if i >= self.caps.n {
            return Err(unknown());
        }
        let kind = match head {
            "q" => VarKind::Q,
            "p" => VarKind::P,
            "l" => VarKind::Lambda,
            "t" => VarKind::T,
            _ => return Err(unknown()),
        };
        let v = Var::new(kind, i);
        let m = Monomial::var(v);
        if !self.caps.admits(&m) {
            return Err(ParseError::CapOverflow {
                pos,
                degree: m.degree(),
                deg_cap: self.caps.deg_cap,
                t_degree: m.t_degree(),
                t_cap: self.caps.t_cap,
            });
        }
        Ok(TruncatedSeries::var(self.caps, v))
    }
}

/// `golden` is `(1 + √5)/2`, `sqrt2` is `√2`.
pub fn named_constant(name: &str) -> Option<f64> {
    match name {
        "golden" => Some((1.0 + 5f64.sqrt()) / 2.0),
        "sqrt2" => Some(std::f64::consts::SQRT_2),
        _ => None,
    }
}

/// Parses an expression into a series with the given caps; `alphaI` expands
/// to `alpha[I − 1]`.
pub fn parse_poly(text: &str, caps: Caps, alpha: &[C64]) -> Result<TruncatedSeries, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.chars().count(),
        caps,
        alpha,
    };
    if p.peek().is_none() {
        return Err(ParseError::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(ParseError::Syntax {
            pos: p.pos(),
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(out)
}

/// Parses a constant expression (no variables) to a complex number.
pub fn parse_constant(text: &str) -> Result<C64, ParseError> {
    let caps = Caps::new(1, 0, 0).expect("constant caps");
    let f = parse_poly(text, caps, &[])?;
    Ok(f.coeff(&Monomial::ONE))
}

fn write_monomial(out: &mut String, m: &Monomial, n: usize) {
    for kind in [VarKind::Q, VarKind::P, VarKind::Lambda, VarKind::T] {
        for i in 0..n {
            let e = m.exp(Var::new(kind, i));
            if e == 0 {
                continue;
            }
            out.push('*');
            out.push_str(kind.prefix());
            out.push_str(&(i + 1).to_string());
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
}

/// Prints `f` in the grammar above; `parse_poly(print_poly(f)) == f`.
pub fn print_poly(f: &TruncatedSeries) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (m, v)) in f.iter().enumerate() {
        if idx > 0 {
            out.push_str(" + ");
        }
        out.push_str(&format!("({:?}{:+?}i)", v.re, v.im));
        write_monomial(&mut out, m, f.n());
    }
    out
}
