//! Hand-written lexer and recursive-descent parser for MIRELA text.
//!
//! ```text
//! spec    := IDENT ':' decl (';' decl)* '.'
//! decl    := IDENT '=' comp ( ('->' | '→') '(' idlist? ')' )?
//! comp    := 'Periodic' '(' N ',' N ')' '[' N ',' N ']'
//!          | 'Aperiodic' '(' N ')'
//!          | 'First' '(' slist ')'
//!          | 'Both' '(' IDENT ',' IDENT ')' '[' N ',' N ']'
//!          | 'Priority' '(' IDENT itv ',' IDENT itv ')'
//!          | 'Memory' '(' slist ')'
//!          | 'Rendering' '(' N ',' N ')' '(' IDENT itv ')'
//! slist   := IDENT itv? (',' IDENT itv?)*
//! itv     := '[' N ',' N ']'
//! ```
//!
//! Whitespace is free-form and `//` starts a line comment.

use std::collections::HashSet;

use super::ast::{Component, ComponentDecl, Interval, Position, Source, SpecAst};
use super::SpecError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u32),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    Colon,
    Equals,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(n) => format!("number `{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, SpecError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' {
            bump!();
            if chars.peek() == Some(&'/') {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
                continue;
            }
            return Err(SpecError::lexical(pos, "unexpected character `/`"));
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    bump!();
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    bump!();
                } else {
                    break;
                }
            }
            let n = s
                .parse::<u32>()
                .map_err(|_| SpecError::lexical(pos, format!("number `{s}` is too large")))?;
            out.push((Tok::Number(n), pos));
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '.' => Tok::Dot,
            ':' => Tok::Colon,
            '=' => Tok::Equals,
            '→' => Tok::Arrow,
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    out.push((Tok::Arrow, pos));
                    continue;
                }
                return Err(SpecError::lexical(pos, "expected `->`"));
            }
            other => {
                return Err(SpecError::lexical(
                    pos,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        bump!();
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Position { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> SpecError {
        SpecError::syntax(
            self.pos(),
            format!("expected {expected}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SpecError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self) -> Result<(String, Position), SpecError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok((s, pos))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn number(&mut self) -> Result<u32, SpecError> {
        match *self.peek() {
            Tok::Number(n) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.unexpected("number")),
        }
    }

    fn pair(&mut self, open: Tok, close: Tok) -> Result<Interval, SpecError> {
        let pos = self.pos();
        self.expect(open)?;
        let min = self.number()?;
        self.expect(Tok::Comma)?;
        let max = self.number()?;
        self.expect(close)?;
        if min > max {
            return Err(SpecError::syntax(
                pos,
                format!("interval lower bound {min} exceeds upper bound {max}"),
            ));
        }
        Ok(Interval { min, max })
    }

    fn interval(&mut self) -> Result<Interval, SpecError> {
        self.pair(Tok::LBracket, Tok::RBracket)
    }

    fn source(&mut self) -> Result<Source, SpecError> {
        let (id, _) = self.ident()?;
        let interval = if *self.peek() == Tok::LBracket {
            Some(self.interval()?)
        } else {
            None
        };
        Ok(Source { id, interval })
    }

    /// Comma-separated sources up to (not including) the closing `)`.
    fn sources(&mut self) -> Result<Vec<(Source, Position)>, SpecError> {
        let mut list = Vec::new();
        loop {
            let pos = self.pos();
            list.push((self.source()?, pos));
            if *self.peek() == Tok::Comma {
                self.advance();
            } else {
                break;
            }
        }
        Ok(list)
    }

    fn exact_sources(
        &mut self,
        keyword: &str,
        count: usize,
        kw_pos: Position,
    ) -> Result<Vec<(Source, Position)>, SpecError> {
        let list = self.sources()?;
        if list.len() != count {
            return Err(SpecError::arity(
                kw_pos,
                format!(
                    "{keyword} takes exactly {count} source{}, found {}",
                    if count == 1 { "" } else { "s" },
                    list.len()
                ),
            ));
        }
        Ok(list)
    }

    fn component(&mut self) -> Result<Component, SpecError> {
        let (keyword, kw_pos) = self.ident()?;
        let comp = match keyword.as_str() {
            "Periodic" => {
                let start = self.pair(Tok::LParen, Tok::RParen)?;
                let capture = self.interval()?;
                Component::Periodic { start, capture }
            }
            "Aperiodic" => {
                self.expect(Tok::LParen)?;
                let min_event = self.number()?;
                self.expect(Tok::RParen)?;
                Component::Aperiodic { min_event }
            }
            "First" | "Memory" => {
                self.expect(Tok::LParen)?;
                let sources = self.sources()?.into_iter().map(|(s, _)| s).collect();
                self.expect(Tok::RParen)?;
                if keyword == "First" {
                    Component::First { sources }
                } else {
                    Component::Memory { sources }
                }
            }
            "Both" => {
                self.expect(Tok::LParen)?;
                let list = self.exact_sources("Both", 2, kw_pos)?;
                self.expect(Tok::RParen)?;
                for (s, pos) in &list {
                    if s.interval.is_some() {
                        return Err(SpecError::arity(
                            *pos,
                            "Both sources carry no interval; the processing interval follows the source list",
                        ));
                    }
                }
                let work = self.interval()?;
                let mut it = list.into_iter().map(|(s, _)| s.id);
                let sources = [it.next().unwrap(), it.next().unwrap()];
                Component::Both { sources, work }
            }
            "Priority" => {
                self.expect(Tok::LParen)?;
                let list = self.exact_sources("Priority", 2, kw_pos)?;
                self.expect(Tok::RParen)?;
                let mut roles = Vec::with_capacity(2);
                for (s, pos) in list {
                    match s.interval {
                        Some(i) => roles.push((s.id, i)),
                        None => {
                            return Err(SpecError::arity(
                                pos,
                                format!("Priority source `{}` needs a processing interval", s.id),
                            ))
                        }
                    }
                }
                let (slave, slave_work) = roles.pop().unwrap();
                let (master, master_work) = roles.pop().unwrap();
                Component::Priority {
                    master,
                    master_work,
                    slave,
                    slave_work,
                }
            }
            "Rendering" => {
                let period = self.pair(Tok::LParen, Tok::RParen)?;
                self.expect(Tok::LParen)?;
                let list = self.exact_sources("Rendering", 1, kw_pos)?;
                self.expect(Tok::RParen)?;
                let (src, pos) = list.into_iter().next().unwrap();
                let access = src.interval.ok_or_else(|| {
                    SpecError::arity(pos, "Rendering memory access needs an interval")
                })?;
                Component::Rendering {
                    period,
                    memory: src.id,
                    access,
                }
            }
            other => {
                return Err(SpecError::syntax(
                    kw_pos,
                    format!("unknown component kind `{other}`"),
                ))
            }
        };
        Ok(comp)
    }

    fn decl(&mut self) -> Result<(ComponentDecl, Position), SpecError> {
        let (id, pos) = self.ident()?;
        self.expect(Tok::Equals)?;
        let component = self.component()?;
        let mut targets = Vec::new();
        if *self.peek() == Tok::Arrow {
            self.advance();
            self.expect(Tok::LParen)?;
            if *self.peek() != Tok::RParen {
                loop {
                    targets.push(self.ident()?.0);
                    if *self.peek() == Tok::Comma {
                        self.advance();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok((
            ComponentDecl {
                id,
                component,
                targets,
            },
            pos,
        ))
    }

    fn spec(&mut self) -> Result<SpecAst, SpecError> {
        let (name, _) = self.ident()?;
        self.expect(Tok::Colon)?;
        let mut decls = Vec::new();
        let mut positions = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let (decl, pos) = self.decl()?;
            if !seen.insert(decl.id.clone()) {
                return Err(SpecError::duplicate(pos, &decl.id));
            }
            decls.push(decl);
            positions.push(pos);
            match self.peek() {
                Tok::Semi => {
                    self.advance();
                }
                Tok::Dot => {
                    self.advance();
                    break;
                }
                _ => return Err(self.unexpected("`;` or `.`")),
            }
        }
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("end of input"));
        }
        Ok(SpecAst {
            name,
            decls,
            positions,
        })
    }
}

/// Parses MIRELA text into a syntax tree.
///
/// Shape rules that the grammar fixes per kind (number of sources, mandatory
/// intervals) are enforced here; cross-declaration rules are left to
/// [`resolve_targets`](super::resolve_targets).
pub fn parse(text: &str) -> Result<SpecAst, SpecError> {
    let toks = lex(text)?;
    Parser { toks, at: 0 }.spec()
}
