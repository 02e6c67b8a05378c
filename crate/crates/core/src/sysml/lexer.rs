//! Tokenizer for the SysML v2 textual subset.

use std::sync::Arc;

use crate::parse_error::ParseError;
use crate::span::SourceSpan;

/// Words with meaning in the supported grammar. A name spelled like one of
/// these must be written quoted (`'view'`).
pub const KEYWORDS: &[&str] = &[
    "package", "metadata", "def", "enum", "attribute", "individual", "part", "ref", "item",
    "requirement", "require", "assume", "assert", "constraint", "concern", "stakeholder",
    "viewpoint", "view", "expose", "filter", "use", "case", "subject", "actor", "objective",
    "action", "perform", "state", "transition", "accept", "send", "assign", "first", "then",
    "decide", "doc", "comment", "in", "out", "inout", "frame", "satisfy", "refines", "entry",
    "do", "if", "else", "by", "and", "or", "not", "true", "false", "istype", "kind", "to",
];

/// SysML v2 keywords that are recognized but deliberately unsupported.
pub const UNSUPPORTED_KEYWORDS: &[&str] = &[
    "abstract", "alias", "allocate", "allocation", "analysis", "bind", "calc", "connect",
    "connection", "dependency", "event", "exhibit", "flow", "fork", "import", "include",
    "interface", "join", "library", "loop", "merge", "message", "occurrence", "port",
    "private", "protected", "public", "rendering", "snapshot", "specializes", "standard",
    "succession", "timeslice", "variant", "variation", "verification", "verify", "while",
];

pub fn is_reserved(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    /// Identifier or keyword (keywords are distinguished by the parser).
    Word(String),
    /// `'unrestricted name'`
    Quoted(String),
    Str(String),
    Int(u64),
    Real(f64),
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Quoted(q) => format!("name '{q}'"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Real(r) => format!("`{r:?}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

const SYMBOLS: &[&str] = &[
    ":>>", ":>", "::", ":=", ":", "==", "!=", "<=", ">=", "<", ">", "..", ".", ",", ";", "{",
    "}", "(", ")", "[", "]", "=", "+", "-", "*", "/", "@",
];

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn here(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

pub fn tokenize(src: &str, file: &Arc<str>) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        src,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    let span = |start: (u32, u32), end: (u32, u32)| SourceSpan::new(file.clone(), start, end);

    loop {
        // trivia
        loop {
            match cur.peek() {
                Some(c) if c.is_whitespace() => {
                    cur.bump();
                }
                Some('/') if cur.peek_at(1) == Some('/') => {
                    while let Some(c) = cur.peek() {
                        if c == '\n' {
                            break;
                        }
                        cur.bump();
                    }
                }
                Some('/') if cur.peek_at(1) == Some('*') => {
                    let start = cur.here();
                    cur.bump();
                    cur.bump();
                    loop {
                        match cur.peek() {
                            None => {
                                return Err(ParseError::new(
                                    span(start, cur.here()),
                                    vec!["`*/`".into()],
                                    "end of input",
                                    "unterminated block comment",
                                ))
                            }
                            Some('*') if cur.peek_at(1) == Some('/') => {
                                cur.bump();
                                cur.bump();
                                break;
                            }
                            _ => {
                                cur.bump();
                            }
                        }
                    }
                }
                _ => break,
            }
        }

        let start = cur.here();
        let Some(c) = cur.peek() else {
            out.push(Token {
                tok: Tok::Eof,
                span: span(start, start),
            });
            return Ok(out);
        };

        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let begin = cur.pos;
            while matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                cur.bump();
            }
            Tok::Word(src[begin..cur.pos].to_string())
        } else if c.is_ascii_digit() {
            lex_number(&mut cur, file)?
        } else if c == '"' || c == '\'' {
            let text = lex_quoted(&mut cur, c, file)?;
            if c == '"' {
                Tok::Str(text)
            } else {
                Tok::Quoted(text)
            }
        } else if let Some(sym) = SYMBOLS.iter().find(|s| src[cur.pos..].starts_with(**s)) {
            for _ in 0..sym.len() {
                cur.bump();
            }
            Tok::Sym(sym)
        } else {
            cur.bump();
            return Err(ParseError::new(
                span(start, cur.here()),
                vec![],
                c.to_string(),
                format!("unexpected character `{c}`"),
            ));
        };
        out.push(Token {
            tok,
            span: span(start, cur.here()),
        });
    }
}

fn lex_number(cur: &mut Cursor<'_>, file: &Arc<str>) -> Result<Tok, ParseError> {
    let start = cur.here();
    let begin = cur.pos;
    let mut is_real = false;
    while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        cur.bump();
    }
    if cur.peek() == Some('.') && matches!(cur.peek_at(1), Some(c) if c.is_ascii_digit()) {
        is_real = true;
        cur.bump();
        while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            cur.bump();
        }
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        let sign = matches!(cur.peek_at(1), Some('+' | '-'));
        let digit_at = if sign { 2 } else { 1 };
        if matches!(cur.peek_at(digit_at), Some(c) if c.is_ascii_digit()) {
            is_real = true;
            cur.bump();
            if sign {
                cur.bump();
            }
            while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                cur.bump();
            }
        }
    }
    let text = &cur.src[begin..cur.pos];
    let bad = |msg: &str| {
        ParseError::new(
            SourceSpan::new(file.clone(), start, cur.here()),
            vec!["number".into()],
            text.to_string(),
            format!("{msg} `{text}`"),
        )
    };
    if is_real {
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Tok::Real)
            .ok_or_else(|| bad("invalid real literal"))
    } else {
        text.parse::<u64>()
            .map(Tok::Int)
            .map_err(|_| bad("integer literal out of range"))
    }
}

fn lex_quoted(cur: &mut Cursor<'_>, quote: char, file: &Arc<str>) -> Result<String, ParseError> {
    let start = cur.here();
    cur.bump();
    let mut text = String::new();
    loop {
        match cur.bump() {
            None => {
                return Err(ParseError::new(
                    SourceSpan::new(file.clone(), start, cur.here()),
                    vec![format!("`{quote}`")],
                    "end of input",
                    if quote == '"' {
                        "unterminated string literal"
                    } else {
                        "unterminated quoted name"
                    },
                ))
            }
            Some('\\') => match cur.bump() {
                Some(c) => text.push(c),
                None => continue,
            },
            Some(c) if c == quote => return Ok(text),
            Some(c) => text.push(c),
        }
    }
}
