//! Recursive-descent parser for the tangle expression language.
//!
//! ```text
//! expr := term ("+" term)*
//! term := "T[" frac "]" | "family(" int "," "p=" int ("," label "=" frac)* ")"
//!       | "connsum(" expr "," link ")"
//! link := "hopf" | "trefoil" | "unknot" | "b(" int "," int ")"
//! frac := int | int "/" int | "inf"
//! ```
//!
//! Whitespace is ignored between tokens and `#` starts a comment running
//! to the end of the line. [`parse_input`] additionally accepts a bare link.

use std::collections::BTreeMap;

use super::{BoundaryLabel, FamilyTangle, Fraction, LinkDesc, Section, TangleError, TangleExpr};

/// A parsed top-level input: a tangle expression or a closed link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DslItem {
    Tangle(TangleExpr),
    Link(LinkDesc),
}

pub fn parse_tangle(text: &str) -> Result<TangleExpr, TangleError> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_link(text: &str) -> Result<LinkDesc, TangleError> {
    let mut p = Parser::new(text);
    let l = p.link()?;
    p.finish()?;
    Ok(l)
}

pub fn parse_fraction(text: &str) -> Result<Fraction, TangleError> {
    let mut p = Parser::new(text);
    let f = p.frac()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_input(text: &str) -> Result<DslItem, TangleError> {
    let mut p = Parser::new(text);
    p.skip_ws();
    if p.starts_link() {
        let l = p.link()?;
        p.finish()?;
        Ok(DslItem::Link(l))
    } else {
        let e = p.expr()?;
        p.finish()?;
        Ok(DslItem::Tangle(e))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        loop {
            let r = self.rest();
            let trimmed = r.trim_start();
            self.pos += r.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TangleError> {
        Err(TangleError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(word)
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.peek_word(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), TangleError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    fn finish(&mut self) -> Result<(), TangleError> {
        self.skip_ws();
        if self.pos < self.src.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn int(&mut self) -> Result<i64, TangleError> {
        self.skip_ws();
        let r = self.rest();
        let sign = usize::from(r.starts_with('-') || r.starts_with('+'));
        let digits = r[sign..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err("expected an integer");
        }
        let text = &r[..sign + digits];
        let v = text.parse::<i64>().or_else(|_| self.err("integer out of range"))?;
        self.pos += text.len();
        Ok(v)
    }

    fn frac(&mut self) -> Result<Fraction, TangleError> {
        if self.eat("inf") {
            return Ok(Fraction::INFINITY);
        }
        let start = self.pos;
        let num = self.int()?;
        if !self.eat("/") {
            return Ok(Fraction::integer(num));
        }
        self.skip_ws();
        if !self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            return self.err("expected a positive denominator");
        }
        let den = self.int()?;
        if den == 0 {
            self.pos = start;
            return self.err("zero denominator; write `inf`");
        }
        Fraction::new(num, den).map_err(|_| {
            TangleError::Invariant(format!("{num}/{den} is not in lowest terms"))
        })
    }

    fn starts_link(&mut self) -> bool {
        ["hopf", "trefoil", "unknot", "b("]
            .iter()
            .any(|w| self.peek_word(w))
    }

    fn link(&mut self) -> Result<LinkDesc, TangleError> {
        if self.eat("hopf") {
            return Ok(LinkDesc::HOPF);
        }
        if self.eat("trefoil") {
            return Ok(LinkDesc::TREFOIL);
        }
        if self.eat("unknot") {
            return Ok(LinkDesc::Unknot);
        }
        if self.eat("b") {
            self.expect("(")?;
            let p = self.int()?;
            self.expect(",")?;
            let q = self.int()?;
            self.expect(")")?;
            if p < 1 {
                return Err(TangleError::Invariant(format!("b({p},{q}) needs p ≥ 1")));
            }
            return LinkDesc::two_bridge(p, q);
        }
        self.err("expected a link: hopf, trefoil, unknot or b(p,q)")
    }

    fn expr(&mut self) -> Result<TangleExpr, TangleError> {
        let mut terms = vec![self.term()?];
        while self.eat("+") {
            terms.push(self.term()?);
        }
        if terms.len() == 1 {
            Ok(terms.pop().expect("one term"))
        } else {
            TangleExpr::sum(terms)
        }
    }

    fn term(&mut self) -> Result<TangleExpr, TangleError> {
        if self.eat("T") {
            self.expect("[")?;
            let f = self.frac()?;
            self.expect("]")?;
            return Ok(TangleExpr::Rational(f));
        }
        if self.eat("family") {
            return self.family();
        }
        if self.eat("connsum") {
            self.expect("(")?;
            let inner = self.expr()?;
            self.expect(",")?;
            let link = self.link()?;
            self.expect(")")?;
            return Ok(TangleExpr::conn_sum(inner, link));
        }
        self.err("expected `T[`, `family(` or `connsum(`")
    }

    fn family(&mut self) -> Result<TangleExpr, TangleError> {
        self.expect("(")?;
        let section = Section::from_number(self.int()?)?;
        self.expect(",")?;
        self.expect("p")?;
        self.expect("=")?;
        let p = self.int()?;
        let mut fills = BTreeMap::new();
        while self.eat(",") {
            let label = if self.eat("S0") {
                BoundaryLabel::S0
            } else if self.eat("S1") {
                BoundaryLabel::S1
            } else {
                return self.err("expected `S0` or `S1`");
            };
            self.expect("=")?;
            let f = self.frac()?;
            if fills.insert(label, f).is_some() {
                return Err(TangleError::Invariant(format!("{label} filled twice")));
            }
        }
        self.expect(")")?;
        Ok(TangleExpr::Family(FamilyTangle::new(section, p, fills)?))
    }
}
