//! The set grammar:
//!
//! ```text
//! set      := interval ("|" interval)*
//! interval := "(" bound "," bound ")"
//! bound    := decimal | "-inf" | "inf"
//! ```
//!
//! Whitespace is ignored everywhere. Offsets in errors are byte offsets into
//! the source text.

use frac_gauss_iso::{Error, GaussianSet, Result};

/// Source text together with the canonical set it denotes.
#[derive(Debug, Clone, PartialEq)]
pub struct SetExpression {
    pub source: String,
    pub set: GaussianSet,
}

impl std::str::FromStr for SetExpression {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_set(s)
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Parse {
            offset: self.pos,
            message,
        }
    }

    fn bound(&mut self) -> Result<(usize, f64)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')))
            .map_or(rest.len(), |(i, _)| i);
        let token = &rest[..len];
        let value = match token {
            "-inf" => f64::NEG_INFINITY,
            "inf" => f64::INFINITY,
            "" => return Err(self.error("expected a bound".into())),
            _ if token.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) => {
                token.parse::<f64>().map_err(|_| Error::Parse {
                    offset: start,
                    message: format!("`{token}` is not a decimal number"),
                })?
            }
            _ => {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("`{token}` is not a bound"),
                })
            }
        };
        self.pos += len;
        Ok((start, value))
    }
}

pub fn parse_set(text: &str) -> Result<SetExpression> {
    let mut cur = Cursor { text, pos: 0 };
    let mut intervals = Vec::new();
    loop {
        cur.expect('(')?;
        let (a_at, a) = cur.bound()?;
        cur.expect(',')?;
        let (_, b) = cur.bound()?;
        cur.expect(')')?;
        if !(a < b) || a == f64::INFINITY || b == f64::NEG_INFINITY {
            return Err(Error::Semantic {
                offset: a_at,
                message: format!("interval needs a < b, got ({a}, {b})"),
            });
        }
        intervals.push((a, b));
        match cur.peek() {
            None => break,
            Some('|') => cur.pos += 1,
            Some(c) => return Err(cur.error(format!("expected `|` or end of input, found `{c}`"))),
        }
    }
    Ok(SetExpression {
        source: text.to_string(),
        set: GaussianSet::new(intervals)?,
    })
}
