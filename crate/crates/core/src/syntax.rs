//! Tokenizer shared by the Turtle reader and the query parser.
//!
//! Both grammars use the same terminals (IRI references, prefixed names,
//! literals, punctuation). The lexer is pull-based so a parser can stop at
//! the first construct it rejects without tokenizing the rest of the input.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseErrorKind {
    Lexical,
    Syntactic,
    UnknownPrefix,
}

/// A positioned parse failure. `line` and `column` are 1-based and point at
/// the first offending character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            column: pos.column,
            message: message.into(),
            kind,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    /// `<...>` content with escapes decoded; may still be relative.
    IriRef(String),
    PName {
        prefix: String,
        local: String,
    },
    BlankLabel(String),
    Var(String),
    Str(String),
    LangTag(String),
    AtPrefix,
    AtBase,
    Integer(String),
    Decimal(String),
    Double(String),
    /// Bare word: `a`, `true`, `PREFIX`, `SELECT`, `FILTER`, ...
    Word(String),
    Dot,
    Semicolon,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    DatatypeMark,
    Other(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::IriRef(i) => write!(f, "<{i}>"),
            Tok::PName { prefix, local } => write!(f, "{prefix}:{local}"),
            Tok::BlankLabel(l) => write!(f, "_:{l}"),
            Tok::Var(v) => write!(f, "?{v}"),
            Tok::Str(_) => f.write_str("string literal"),
            Tok::LangTag(l) => write!(f, "@{l}"),
            Tok::AtPrefix => f.write_str("@prefix"),
            Tok::AtBase => f.write_str("@base"),
            Tok::Integer(n) | Tok::Decimal(n) | Tok::Double(n) => f.write_str(n),
            Tok::Word(w) => f.write_str(w),
            Tok::Dot => f.write_str("'.'"),
            Tok::Semicolon => f.write_str("';'"),
            Tok::Comma => f.write_str("','"),
            Tok::LBracket => f.write_str("'['"),
            Tok::RBracket => f.write_str("']'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::DatatypeMark => f.write_str("'^^'"),
            Tok::Other(c) => write!(f, "'{c}'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub struct Lexer<'a> {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    column: usize,
    _src: std::marker::PhantomData<&'a str>,
}

fn is_pn_chars_base(c: char) -> bool {
    c.is_alphabetic() && c != '\u{D7}' && c != '\u{F7}'
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c)
        || c.is_ascii_digit()
        || c == '-'
        || c == '\u{B7}'
        || ('\u{300}'..='\u{36F}').contains(&c)
        || ('\u{203F}'..='\u{2040}').contains(&c)
        || (c.is_alphanumeric() && !c.is_ascii())
}

const LOCAL_ESCAPABLE: &str = "_~.-!$&'()*+,;=/?#@%";

/// True when `local` can be written after `prefix:` without escapes.
pub fn is_valid_local_name(local: &str) -> bool {
    let chars: Vec<char> = local.chars().collect();
    let Some((&first, _)) = chars.split_first() else {
        return true;
    };
    if !(is_pn_chars_u(first) || first == ':' || first.is_ascii_digit()) {
        return false;
    }
    if chars.last() == Some(&'.') {
        return false;
    }
    chars[1..].iter().all(|&c| is_pn_chars(c) || c == '.' || c == ':')
}

impl<'a> Lexer<'a> {
    pub fn new(input: &'a str) -> Self {
        Lexer {
            chars: input.chars().collect(),
            idx: 0,
            line: 1,
            column: 1,
            _src: std::marker::PhantomData,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.idx + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.idx).copied()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    pub fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn err(&self, pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError::new(ParseErrorKind::Lexical, pos, message)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    pub fn next_token(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let pos = self.pos();
        let Some(c) = self.peek() else {
            return Ok(Token { tok: Tok::Eof, pos });
        };
        let tok = match c {
            '<' => self.iri_ref()?,
            '"' | '\'' => Tok::Str(self.string_literal()?),
            '@' => self.at_word()?,
            '?' | '$' => {
                self.bump();
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                if name.is_empty() {
                    return Err(self.err(pos, "empty variable name"));
                }
                Tok::Var(name)
            }
            '_' if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.local_part()?;
                if label.is_empty() {
                    return Err(self.err(pos, "empty blank node label"));
                }
                Tok::BlankLabel(label)
            }
            '0'..='9' => self.number()?,
            '+' | '-' | '.'
                if self.peek_at(1).is_some_and(|d| d.is_ascii_digit())
                    || (c != '.'
                        && self.peek_at(1) == Some('.')
                        && self.peek_at(2).is_some_and(|d| d.is_ascii_digit())) =>
            {
                self.number()?
            }
            '^' if self.peek_at(1) == Some('^') => {
                self.bump();
                self.bump();
                Tok::DatatypeMark
            }
            '.' | ';' | ',' | '[' | ']' | '(' | ')' | '{' | '}' => {
                self.bump();
                match c {
                    '.' => Tok::Dot,
                    ';' => Tok::Semicolon,
                    ',' => Tok::Comma,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    _ => Tok::RBrace,
                }
            }
            c if is_pn_chars_base(c) || c == ':' => self.name()?,
            c if c.is_ascii_punctuation() => {
                self.bump();
                Tok::Other(c)
            }
            c => return Err(self.err(pos, format!("unexpected character {c:?}"))),
        };
        Ok(Token { tok, pos })
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    fn hex_escape(&mut self, digits: usize, pos: Pos) -> Result<char, ParseError> {
        let mut value = 0u32;
        for _ in 0..digits {
            let d = self
                .peek()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.err(self.pos(), "invalid hex digit in escape"))?;
            self.bump();
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| self.err(pos, format!("invalid code point U+{value:X}")))
    }

    fn iri_ref(&mut self) -> Result<Tok, ParseError> {
        let start = self.pos();
        self.bump();
        let mut out = String::new();
        loop {
            let here = self.pos();
            match self.bump() {
                None => return Err(self.err(start, "unterminated IRI")),
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => out.push(self.hex_escape(4, here)?),
                    Some('U') => out.push(self.hex_escape(8, here)?),
                    _ => return Err(self.err(here, "invalid escape in IRI")),
                },
                Some(c) if c.is_whitespace() || "<\"{}|^`".contains(c) || (c as u32) < 0x20 => {
                    return Err(self.err(here, format!("character {c:?} not allowed in IRI")))
                }
                Some(c) => out.push(c),
            }
        }
        Ok(Tok::IriRef(out))
    }

    fn string_literal(&mut self) -> Result<String, ParseError> {
        let start = self.pos();
        let quote = self.bump().unwrap();
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut out = String::new();
        loop {
            let here = self.pos();
            match self.bump() {
                None => return Err(self.err(start, "unterminated string literal")),
                Some(c) if c == quote => {
                    if !long {
                        break;
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        self.bump();
                        self.bump();
                        // """a"""" ends with the last three quotes
                        while self.peek() == Some(quote) {
                            out.push(quote);
                            self.bump();
                        }
                        break;
                    }
                    out.push(c);
                }
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4, here)?,
                        Some('U') => self.hex_escape(8, here)?,
                        _ => return Err(self.err(here, "invalid escape sequence")),
                    };
                    out.push(c);
                }
                Some('\n') | Some('\r') if !long => return Err(self.err(here, "line break in short string literal")),
                Some(c) => out.push(c),
            }
        }
        Ok(out)
    }

    fn at_word(&mut self) -> Result<Tok, ParseError> {
        let pos = self.pos();
        self.bump();
        let mut word = self.take_while(|c| c.is_ascii_alphabetic());
        if word.is_empty() {
            return Err(self.err(pos, "expected language tag or directive after '@'"));
        }
        match word.as_str() {
            "prefix" => return Ok(Tok::AtPrefix),
            "base" => return Ok(Tok::AtBase),
            _ => {}
        }
        while self.peek() == Some('-') && self.peek_at(1).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.bump();
            word.push('-');
            word.push_str(&self.take_while(|c| c.is_ascii_alphanumeric()));
        }
        Ok(Tok::LangTag(word))
    }

    fn number(&mut self) -> Result<Tok, ParseError> {
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            text.push(sign);
            self.bump();
        }
        text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        let mut kind = 0; // 0 integer, 1 decimal, 2 double
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            text.push('.');
            text.push_str(&self.take_while(|c| c.is_ascii_digit()));
            kind = 1;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let sign = matches!(self.peek_at(1), Some('+' | '-'));
            let digit_at = if sign { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                text.push(self.bump().unwrap());
                if sign {
                    text.push(self.bump().unwrap());
                }
                text.push_str(&self.take_while(|c| c.is_ascii_digit()));
                kind = 2;
            }
        }
        Ok(match kind {
            0 => Tok::Integer(text),
            1 => Tok::Decimal(text),
            _ => Tok::Double(text),
        })
    }

    /// PN_LOCAL (also used for blank node labels). Escapes are decoded;
    /// a trailing '.' is left for the statement terminator.
    fn local_part(&mut self) -> Result<String, ParseError> {
        let mut out = String::new();
        let mut first = true;
        while let Some(c) = self.peek() {
            let here = self.pos();
            if c == '.' && !first {
                // only part of the name if something name-like follows the dots
                let mut k = 0;
                while self.peek_at(k) == Some('.') {
                    k += 1;
                }
                let next = self.peek_at(k);
                if next.is_some_and(|n| is_pn_chars(n) || n == ':' || n == '%' || n == '\\') {
                    for _ in 0..k {
                        out.push('.');
                        self.bump();
                    }
                    continue;
                }
                break;
            }
            if c == '%' {
                self.bump();
                let a = self.bump().filter(|c| c.is_ascii_hexdigit());
                let b = self.bump().filter(|c| c.is_ascii_hexdigit());
                match (a, b) {
                    (Some(a), Some(b)) => {
                        out.push('%');
                        out.push(a);
                        out.push(b);
                    }
                    _ => return Err(self.err(here, "invalid percent escape in local name")),
                }
            } else if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if LOCAL_ESCAPABLE.contains(e) => out.push(e),
                    _ => return Err(self.err(here, "invalid escape in local name")),
                }
            } else if (first && (is_pn_chars_u(c) || c.is_ascii_digit() || c == ':'))
                || (!first && (is_pn_chars(c) || c == ':'))
            {
                out.push(c);
                self.bump();
            } else {
                break;
            }
            first = false;
        }
        Ok(out)
    }

    fn name(&mut self) -> Result<Tok, ParseError> {
        let mut prefix = String::new();
        if self.peek() != Some(':') {
            prefix.push(self.bump().unwrap());
            loop {
                match self.peek() {
                    Some(c) if is_pn_chars(c) => {
                        prefix.push(c);
                        self.bump();
                    }
                    Some('.') => {
                        let mut k = 0;
                        while self.peek_at(k) == Some('.') {
                            k += 1;
                        }
                        if self.peek_at(k).is_some_and(|n| is_pn_chars(n) || n == ':') {
                            for _ in 0..k {
                                prefix.push('.');
                                self.bump();
                            }
                        } else {
                            break;
                        }
                    }
                    _ => break,
                }
            }
        }
        if self.peek() == Some(':') {
            self.bump();
            let local = self.local_part()?;
            Ok(Tok::PName { prefix, local })
        } else {
            Ok(Tok::Word(prefix))
        }
    }
}
