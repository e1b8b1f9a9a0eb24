//! Parser for curve equations such as `y^2 + (x+1)*y = 64x^5 - 8x^4 + 1`.
//!
//! Both sides are parsed as polynomials in `Z[x, y]`; the difference must
//! have the shape `y^2 + h(x) y - f(x)`.

use std::collections::BTreeMap;

use super::CurveError;

type Poly2 = BTreeMap<(u32, u32), i128>;

const MAX_EXPONENT: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Int(i128),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn err(msg: impl Into<String>) -> CurveError {
    CurveError::Parse(msg.into())
}

fn tokenize(s: &str) -> Result<Vec<Tok>, CurveError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..=i].iter().collect();
                let v = text
                    .parse::<i128>()
                    .map_err(|_| err(format!("integer literal too large: {text}")))?;
                out.push(Tok::Int(v));
            }
            'x' | 'X' => out.push(Tok::X),
            'y' | 'Y' => out.push(Tok::Y),
            '+' => out.push(Tok::Plus),
            '-' | '\u{2212}' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            other => return Err(err(format!("unexpected character {other:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

fn add_into(acc: &mut Poly2, other: &Poly2, sign: i128) -> Result<(), CurveError> {
    for (&k, &v) in other {
        let e = acc.entry(k).or_insert(0);
        *e = v
            .checked_mul(sign)
            .and_then(|t| e.checked_add(t))
            .ok_or_else(|| err("coefficient overflow"))?;
    }
    acc.retain(|_, v| *v != 0);
    Ok(())
}

fn mul(a: &Poly2, b: &Poly2) -> Result<Poly2, CurveError> {
    let mut out = Poly2::new();
    for (&(ax, ay), &av) in a {
        for (&(bx, by), &bv) in b {
            let (ex, ey) = (ax + bx, ay + by);
            if ex > MAX_EXPONENT || ey > MAX_EXPONENT {
                return Err(err("exponent too large"));
            }
            let t = av.checked_mul(bv).ok_or_else(|| err("coefficient overflow"))?;
            let e = out.entry((ex, ey)).or_insert(0);
            *e = e.checked_add(t).ok_or_else(|| err("coefficient overflow"))?;
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly2, CurveError> {
        let mut acc = Poly2::new();
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                sign = -1;
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            add_into(&mut acc, &t, sign)?;
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly2, CurveError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                }
                Some(Tok::Int(_) | Tok::X | Tok::Y | Tok::LParen) => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = mul(&acc, &f)?;
        }
    }

    fn factor(&mut self) -> Result<Poly2, CurveError> {
        let base = match self.next() {
            Some(Tok::Int(v)) => Poly2::from([((0, 0), v)]),
            Some(Tok::X) => Poly2::from([((1, 0), 1)]),
            Some(Tok::Y) => Poly2::from([((0, 1), 1)]),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(err("unbalanced parenthesis"));
                }
                e
            }
            Some(t) => return Err(err(format!("unexpected token {t:?}"))),
            None => return Err(err("unexpected end of input")),
        };
        if self.peek() == Some(Tok::Caret) {
            self.pos += 1;
            let Some(Tok::Int(n)) = self.next() else {
                return Err(err("exponent must be a nonnegative integer"));
            };
            if n as u32 > MAX_EXPONENT || n < 0 {
                return Err(err("exponent too large"));
            }
            let mut acc = Poly2::from([((0, 0), 1)]);
            for _ in 0..n {
                acc = mul(&acc, &base)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

fn parse_side(s: &str) -> Result<Poly2, CurveError> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
    };
    if p.toks.is_empty() {
        return Err(err("empty side of equation"));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err("trailing input"));
    }
    Ok(e)
}

/// Splits an equation into the `(f, h)` coefficient vectors of
/// `y^2 + h(x) y = f(x)`, lowest degree first.
pub(crate) fn parse_equation(text: &str) -> Result<([i64; 7], [i64; 4]), CurveError> {
    let (lhs, rhs) = text
        .split_once('=')
        .ok_or_else(|| err("missing '=' in equation"))?;
    let mut poly = parse_side(lhs)?;
    add_into(&mut poly, &parse_side(rhs)?, -1)?;

    let mut f = [0i64; 7];
    let mut h = [0i64; 4];
    let mut lead = 0;
    for (&(ex, ey), &c) in &poly {
        let word = |v: i128| i64::try_from(v).map_err(|_| err("coefficient exceeds 64 bits"));
        match ey {
            2 if ex == 0 => lead = c,
            1 if ex <= 3 => h[ex as usize] = word(c)?,
            0 if ex <= 6 => f[ex as usize] = word(-c)?,
            _ => {
                return Err(err(format!(
                    "term x^{ex} y^{ey} is not allowed in y^2 + h(x) y = f(x)"
                )))
            }
        }
    }
    if lead != 1 {
        return Err(err("the y^2 coefficient must be 1"));
    }
    Ok((f, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_term_shapes() {
        let (f, h) = parse_equation("y^2 + (x+1)y = 64x^5 - 8x^4 + 39x^3 + x^2 + 2x + 1").unwrap();
        assert_eq!(f, [1, 2, 1, 39, -8, 64, 0]);
        assert_eq!(h, [1, 1, 0, 0]);
        let (_, h) = parse_equation("y^2 + x^2 y = 13x^6").unwrap();
        assert_eq!(h, [0, 0, 1, 0]);
        let (_, h) = parse_equation("y^2 + y = -4x^5").unwrap();
        assert_eq!(h, [1, 0, 0, 0]);
        let (f, h) = parse_equation("y^2 - x*y - 3 = 2*x^5").unwrap();
        assert_eq!(h, [0, -1, 0, 0]);
        assert_eq!(f, [3, 0, 0, 0, 0, 2, 0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(parse_equation("y^3 + x^2 y = x^6").is_err());
        assert!(parse_equation("2y^2 = x^6").is_err());
        assert!(parse_equation("y^2 = x^7").is_err());
        assert!(parse_equation("y^2 = (x+1").is_err());
        assert!(parse_equation("y^2 x^6").is_err());
        assert!(parse_equation("y^2 = 3z").is_err());
    }
}
