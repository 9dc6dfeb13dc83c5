use num_bigint::BigInt;
use thiserror::Error;

use super::RingElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ring element parse error at byte {position}: {message}")]
pub struct ParseRingError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

// expr    := ['+'|'-'] term (('+'|'-') term)*
// term    := power ('*' power)*
// power   := primary ['^' uint]
// primary := uint | 'L' | '[mu_' uint ']' | '(' expr ')'
pub(super) fn parse_ring_element(s: &str) -> Result<RingElement, ParseRingError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(r)
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseRingError {
        ParseRingError { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RingElement, ParseRingError> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            if self.eat(b'+') {
                acc += self.term()?;
            } else if self.eat(b'-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RingElement, ParseRingError> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<RingElement, ParseRingError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let e = self.uint()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<RingElement, ParseRingError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'L') => {
                self.pos += 1;
                Ok(RingElement::lefschetz())
            }
            Some(b'[') => {
                if !self.src[self.pos..].starts_with(b"[mu_") {
                    return Err(self.error("expected '[mu_'"));
                }
                self.pos += 4;
                let n = self.uint()?;
                if n == 0 {
                    return Err(self.error("root-of-unity order must be positive"));
                }
                if !self.eat(b']') {
                    return Err(self.error("expected ']'"));
                }
                Ok(RingElement::mu(n))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let c: BigInt = digits.parse().map_err(|_| self.error("bad integer"))?;
                Ok(RingElement::integer(c))
            }
            Some(_) => Err(self.error("expected integer, 'L', '[mu_n]' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<u64, ParseRingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseRingError { position: start, message: "integer out of range".into() })
    }
}
