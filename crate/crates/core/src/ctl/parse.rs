//! Surface syntax for CTL formulas.
//!
//! ```text
//! or    := and (('|' | '∨') and)*
//! and   := unary (('&' | '∧') unary)*
//! unary := ('!' | '¬' | 'not') unary
//!        | ('EX' | 'EF' | 'EG' | 'AX' | 'AF' | 'AG') unary
//!        | ('E' | 'A') '[' or 'U' or ']'
//!        | 'true' | 'false'
//!        | 'at' '(' name ',' name ')'
//!        | '(' or ')'
//! name  := [A-Za-z0-9_']+
//! ```
//!
//! Binary operators associate to the right; `&` binds tighter than `|`.
//! Example: `EF EG (at(B,s1') & EF !at(B,s1'))`.

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct FormulaParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Not,
    And,
    Or,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormulaParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().enumerate().peekable();
    while let Some(&(col, c)) = chars.peek() {
        let col = col + 1;
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '!' | '¬' => Some(Tok::Not),
            '&' | '∧' => Some(Tok::And),
            '|' | '∨' => Some(Tok::Or),
            _ => None,
        };
        if let Some(t) = single {
            chars.next();
            out.push((col, t));
        } else if c.is_whitespace() {
            chars.next();
        } else if c.is_alphanumeric() || c == '_' || c == '\'' || c == '′' {
            let mut name = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_alphanumeric() || c == '_' || c == '\'' || c == '′' {
                    name.push(if c == '′' { '\'' } else { c });
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((col, if name == "not" { Tok::Not } else { Tok::Name(name) }));
        } else {
            return Err(FormulaParseError {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormulaParseError> {
        Err(FormulaParseError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FormulaParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn name(&mut self) -> Result<String, FormulaParseError> {
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a name"),
        }
    }

    fn or(&mut self) -> Result<Formula, FormulaParseError> {
        let lhs = self.and()?;
        if self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            return Ok(lhs.or(self.or()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, FormulaParseError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Tok::And) {
            self.pos += 1;
            return Ok(lhs.and(self.and()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FormulaParseError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of formula"),
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(self.unary()?.not()),
            Tok::LParen => {
                let f = self.or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Name(n) => match n.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                "EX" => Ok(self.unary()?.ex()),
                "EF" => Ok(self.unary()?.ef()),
                "EG" => Ok(self.unary()?.eg()),
                "AX" => Ok(self.unary()?.ax()),
                "AF" => Ok(self.unary()?.af()),
                "AG" => Ok(self.unary()?.ag()),
                "E" | "A" => {
                    self.expect(Tok::LBracket, "`[`")?;
                    let lhs = self.or()?;
                    if self.peek() != Some(&Tok::Name("U".into())) {
                        return self.err("expected `U`");
                    }
                    self.pos += 1;
                    let rhs = self.or()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    Ok(if n == "E" { lhs.eu(rhs) } else { lhs.au(rhs) })
                }
                "at" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let c = self.name()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let l = self.name()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Formula::at(c, l))
                }
                _ => {
                    self.pos -= 1;
                    self.err(format!("unknown operator `{n}`"))
                }
            },
            _ => {
                self.pos -= 1;
                self.err("expected a formula")
            }
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count() + 1,
    };
    let f = p.or()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}
