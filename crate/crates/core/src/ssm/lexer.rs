//! Tokenizer for the `.ssm` input language.

use std::sync::Arc;

use crate::parse_error::ParseError;
use crate::span::SourceSpan;

pub const KEYWORDS: &[&str] = &[
    "context",
    "individual",
    "part-def",
    "attribute",
    "ref",
    "root-definition",
    "customer",
    "actor",
    "owner",
    "transformation",
    "subject",
    "input",
    "output",
    "worldview",
    "environmental-constraint",
    "require",
    "assume",
    "assert",
    "refines",
    "conceptual-model",
    "activity",
    "by",
    "flow",
    "monitor",
    "controls",
];

const HYPHENATED: &[&str] = &["part-def", "root-definition", "environmental-constraint", "conceptual-model"];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Word(String),
    Str(String),
    Int(u64),
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
    /// Position of the first character inside a string literal's quotes.
    pub content_start: (u32, u32),
}

const SYMBOLS: &[&str] = &["->", "..", "{", "}", ":", ";", ",", "[", "]", "=", "*"];

pub fn tokenize(src: &str, file: &Arc<str>) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let (mut line, mut col) = (1u32, 1u32);
    let mut out = Vec::new();
    let span = |a: (u32, u32), b: (u32, u32)| SourceSpan::new(file.clone(), a, b);

    macro_rules! advance {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    loop {
        while i < chars.len() {
            if chars[i].is_whitespace() {
                advance!();
            } else if chars[i] == '#' {
                while i < chars.len() && chars[i] != '\n' {
                    advance!();
                }
            } else {
                break;
            }
        }
        let start = (line, col);
        if i >= chars.len() {
            out.push(Token {
                tok: Tok::Eof,
                span: span(start, start),
                content_start: start,
            });
            return Ok(out);
        }
        let c = chars[i];
        let mut content_start = start;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance!();
            }
            let mut word: String = chars[begin..i].iter().collect();
            // hyphenated keywords: extend only when the result is one
            while i + 1 < chars.len() && chars[i] == '-' && chars[i + 1].is_ascii_alphabetic() {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let candidate = format!("{word}-{}", chars[i + 1..j].iter().collect::<String>());
                if HYPHENATED.iter().any(|h| *h == candidate || h.starts_with(&format!("{candidate}-"))) {
                    while i < j {
                        advance!();
                    }
                    word = candidate;
                } else {
                    break;
                }
            }
            Tok::Word(word)
        } else if c.is_ascii_digit() {
            let begin = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance!();
            }
            let text: String = chars[begin..i].iter().collect();
            match text.parse::<u64>() {
                Ok(v) => Tok::Int(v),
                Err(_) => {
                    return Err(ParseError::new(
                        span(start, (line, col)),
                        vec!["integer".into()],
                        text.clone(),
                        format!("integer literal out of range `{text}`"),
                    ))
                }
            }
        } else if c == '"' {
            advance!();
            content_start = (line, col);
            let mut text = String::new();
            loop {
                if i >= chars.len() {
                    return Err(ParseError::new(
                        span(start, (line, col)),
                        vec!["`\"`".into()],
                        "end of input",
                        "unterminated string literal",
                    ));
                }
                let ch = chars[i];
                advance!();
                match ch {
                    '"' => break,
                    '\\' => {
                        if i >= chars.len() {
                            continue;
                        }
                        text.push(chars[i]);
                        advance!();
                    }
                    ch => text.push(ch),
                }
            }
            Tok::Str(text)
        } else if let Some(sym) = SYMBOLS.iter().find(|s| {
            let sc: Vec<char> = s.chars().collect();
            chars[i..].starts_with(&sc)
        }) {
            for _ in 0..sym.len() {
                advance!();
            }
            Tok::Sym(sym)
        } else {
            return Err(ParseError::new(
                span(start, (line, col + 1)),
                vec![],
                c.to_string(),
                format!("unexpected character `{c}`"),
            ));
        };
        out.push(Token {
            tok,
            span: span(start, (line, col)),
            content_start,
        });
    }
}
