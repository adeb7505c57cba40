//! Tokenizer for MoveScript. `#` starts a line comment. The loop keywords
//! `while`, `for`, `if`, `def` are reserved-illegal: lexing one is already a
//! parse error carrying the disallowed-construct kind.

use super::{ParseError, ParseErrorKind, Span};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Star,
    Assign,
    Ge,
    Le,
    ApproxEq,
    NotApproxEq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpannedTok {
    pub tok: Tok,
    pub span: Span,
}

pub const RESERVED: [&str; 4] = ["while", "for", "if", "def"];

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn span(&self) -> Span {
        Span {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, span: Span, message: impl Into<String>) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Syntax,
            span,
            message: message.into(),
        }
    }

    fn lex_number(&mut self, span: Span) -> Result<SpannedTok, ParseError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.bump();
        }
        let mut saw_digit = false;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
            saw_digit = true;
        }
        if self.peek() == Some(b'.') {
            self.bump();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
                saw_digit = true;
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) && saw_digit {
            self.bump();
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.bump();
            }
            let mut saw_exp_digit = false;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
                saw_exp_digit = true;
            }
            if !saw_exp_digit {
                return Err(self.error(span, "malformed exponent"));
            }
        }
        if !saw_digit {
            return Err(self.error(span, "malformed number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(span, format!("malformed number `{text}`")))?;
        Ok(SpannedTok {
            tok: Tok::Number(value),
            span,
        })
    }
}

pub fn lex(src: &str) -> Result<Vec<SpannedTok>, ParseError> {
    let mut lx = Lexer::new(src);
    let mut out = Vec::new();
    loop {
        // skip whitespace and # comments
        loop {
            match lx.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    lx.bump();
                }
                Some(b'#') => {
                    while !matches!(lx.peek(), None | Some(b'\n')) {
                        lx.bump();
                    }
                }
                _ => break,
            }
        }
        let span = lx.span();
        let Some(c) = lx.peek() else {
            return Ok(out);
        };
        let tok = match c {
            b'(' => {
                lx.bump();
                Tok::LParen
            }
            b')' => {
                lx.bump();
                Tok::RParen
            }
            b'[' => {
                lx.bump();
                Tok::LBracket
            }
            b']' => {
                lx.bump();
                Tok::RBracket
            }
            b',' => {
                lx.bump();
                Tok::Comma
            }
            b';' => {
                lx.bump();
                Tok::Semi
            }
            b'*' => {
                lx.bump();
                Tok::Star
            }
            b'>' => {
                lx.bump();
                if lx.peek() == Some(b'=') {
                    lx.bump();
                    Tok::Ge
                } else {
                    return Err(lx.error(span, "expected `>=`"));
                }
            }
            b'<' => {
                lx.bump();
                if lx.peek() == Some(b'=') {
                    lx.bump();
                    Tok::Le
                } else {
                    return Err(lx.error(span, "expected `<=`"));
                }
            }
            b'~' => {
                lx.bump();
                if lx.peek() == Some(b'=') {
                    lx.bump();
                    Tok::ApproxEq
                } else {
                    return Err(lx.error(span, "expected `~=`"));
                }
            }
            b'!' => {
                lx.bump();
                if lx.peek() == Some(b'~') {
                    lx.bump();
                    if lx.peek() == Some(b'=') {
                        lx.bump();
                        Tok::NotApproxEq
                    } else {
                        return Err(lx.error(span, "expected `!~=`"));
                    }
                } else {
                    return Err(lx.error(span, "expected `!~=`"));
                }
            }
            b'=' => {
                lx.bump();
                Tok::Assign
            }
            b'-' | b'.' => {
                out.push(lx.lex_number(span)?);
                continue;
            }
            c if c.is_ascii_digit() => {
                out.push(lx.lex_number(span)?);
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = lx.pos;
                while matches!(lx.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    lx.bump();
                }
                let name = std::str::from_utf8(&lx.src[start..lx.pos])
                    .expect("ascii slice")
                    .to_string();
                if RESERVED.contains(&name.as_str()) {
                    return Err(ParseError {
                        kind: ParseErrorKind::DisallowedConstruct,
                        span,
                        message: format!("`{name}` is not part of the language: no loops or branches"),
                    });
                }
                Tok::Ident(name)
            }
            other => {
                return Err(lx.error(span, format!("unexpected character `{}`", other as char)));
            }
        };
        out.push(SpannedTok { tok, span });
    }
}
