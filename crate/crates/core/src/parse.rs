//! Text parser for polynomial expressions.
//!
//! Grammar: integer literals, variable identifiers, operators `+ - * ^`,
//! parentheses, unary minus; `^` binds tighter than `*` binds tighter than
//! `+`/`-`; whitespace is ignored. Exponents are non-negative integer
//! literals. Division by a nonzero constant is also accepted (same
//! precedence as `*`) so that printed rational coefficients like `1/2*x`
//! parse back; `display` followed by `parse` is the identity on canonical
//! forms.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::poly::{Poly, PolyRing};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_pos(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, start));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                Tok::Int(s.parse().unwrap())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                Tok::Ident(s)
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character `{}`", other as char),
                })
            }
        };
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    ring: &'a PolyRing,
    cur: Tok,
    cur_pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, ring: &'a PolyRing) -> Result<Self> {
        let mut lex = Lexer::new(src);
        let (cur, cur_pos) = lex.next()?;
        Ok(Parser {
            lex,
            ring,
            cur,
            cur_pos,
        })
    }

    fn bump(&mut self) -> Result<()> {
        let (t, p) = self.lex.next()?;
        self.cur = t;
        self.cur_pos = p;
        Ok(())
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.cur {
            Tok::Minus => {
                self.bump()?;
                self.ring.neg(&self.term()?)
            }
            Tok::Plus => {
                self.bump()?;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.cur {
                Tok::Plus => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Tok::Minus => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.cur {
                Tok::Star => {
                    self.bump()?;
                    let f = self.factor()?;
                    acc = self.ring.mul(&acc, &f)?;
                }
                Tok::Slash => {
                    let pos = self.cur_pos;
                    self.bump()?;
                    let f = self.factor()?;
                    if f.terms.len() != 1 || !f.terms[0].0.is_one() {
                        return Err(Error::Parse {
                            pos,
                            msg: "division only by a nonzero constant".into(),
                        });
                    }
                    let inv = f.terms[0].1.inv().map_err(|_| Error::Parse {
                        pos,
                        msg: "division by zero".into(),
                    })?;
                    acc = self.ring.scale(&acc, &inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.cur == Tok::Caret {
            self.bump()?;
            match std::mem::replace(&mut self.cur, Tok::End) {
                Tok::Int(n) => {
                    self.bump()?;
                    let e: u32 = n.try_into().map_err(|_| Error::Parse {
                        pos: self.cur_pos,
                        msg: "exponent out of range".into(),
                    })?;
                    self.ring.pow(&base, e)
                }
                other => {
                    let pos = self.cur_pos;
                    self.cur = other;
                    Err(Error::Parse {
                        pos,
                        msg: "expected integer exponent after `^`".into(),
                    })
                }
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let pos = self.cur_pos;
        match std::mem::replace(&mut self.cur, Tok::End) {
            Tok::Int(n) => {
                self.bump()?;
                Ok(self
                    .ring
                    .constant(FieldElem::from_bigint(self.ring.field, &n)))
            }
            Tok::Ident(name) => {
                self.bump()?;
                match self.ring.var_index(&name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(Error::UnknownVariable { name, pos }),
                }
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                if self.cur != Tok::RParen {
                    return Err(Error::Parse {
                        pos: self.cur_pos,
                        msg: "expected `)`".into(),
                    });
                }
                self.bump()?;
                Ok(e)
            }
            Tok::Minus => {
                self.bump()?;
                Ok(self.ring.neg(&self.atom()?))
            }
            other => {
                self.cur = other;
                Err(Error::Parse {
                    pos,
                    msg: "expected integer, variable, or `(`".into(),
                })
            }
        }
    }
}

impl PolyRing {
    /// Parse a polynomial expression into canonical form.
    pub fn parse(&self, src: &str) -> Result<Poly> {
        let mut p = Parser::new(src, self)?;
        let e = p.expr()?;
        if p.cur != Tok::End {
            let pos = p.lex.peek_pos().min(p.cur_pos);
            return Err(Error::Parse {
                pos,
                msg: "trailing input".into(),
            });
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTag;
    use crate::poly::WeightedDegree;

    fn ring() -> PolyRing {
        PolyRing::new(
            FieldTag::Q,
            vec!["x".into(), "y".into(), "z".into()],
            vec![3, 4, 5],
        )
    }

    #[test]
    fn parses_binomial() {
        let r = ring();
        let f = r.parse("y^2-x*z").unwrap();
        assert_eq!(r.display(&f), "y^2 - x*z");
    }

    #[test]
    fn parses_zero_and_constants() {
        let r = ring();
        assert!(r.parse("0").unwrap().is_zero());
        assert!(r.parse("x - x").unwrap().is_zero());
        assert_eq!(r.display(&r.parse("2*3").unwrap()), "6");
    }

    #[test]
    fn weighted_degree_of_parsed() {
        let r = ring();
        let f = r.parse("x^3-y*z").unwrap();
        assert_eq!(
            r.weighted_degree(&f).unwrap(),
            WeightedDegree::Homogeneous(9)
        );
    }

    #[test]
    fn unknown_variable_reported() {
        let r = ring();
        match r.parse("y^2-x*w").unwrap_err() {
            Error::UnknownVariable { name, pos } => {
                assert_eq!(name, "w");
                assert_eq!(pos, 6);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let r = ring();
        match r.parse("x +").unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 3),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn unary_minus_and_parens() {
        let r = ring();
        let f = r.parse("-(x - y)^2").unwrap();
        let g = r.neg(&r.pow(&r.sub(&r.var(0), &r.var(1)), 2).unwrap());
        assert_eq!(f, g);
    }

    #[test]
    fn parse_print_round_trip() {
        let r = ring();
        for src in ["y^2 - x*z", "x^3 - y*z", "x^2*y - z^2", "x", "1/2*x - 7/3"] {
            let f = r.parse(src).unwrap();
            let printed = r.display(&f);
            assert_eq!(r.parse(&printed).unwrap(), f);
        }
    }
}
