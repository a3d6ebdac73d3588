//! Lossless tokenizer for MiniC.
//!
//! The token stream keeps whitespace and comments so that concatenating
//! all token texts reproduces the input byte for byte.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Ident,
    IntLit,
    FloatLit,
    StrLit,
    CharLit,
    Punct,
    Comment,
    Whitespace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based line of the first byte.
    pub line: u32,
    /// 1-based column of the first byte.
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lex error at {}:{}: {}", self.line, self.col, self.message)
    }
}

pub const KEYWORDS: &[&str] = &[
    "bool", "char", "short", "int", "long", "longlong", "float", "double", "string", "vec",
    "void", "typedef", "if", "else", "for", "while", "return", "true", "false", "input",
    "output", "setprec", "fixed", "syncio",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Multi-byte punctuators, longest first.
const PUNCT2: &[&str] = &[
    "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=",
];

const PUNCT1: &[u8] = b"{}()[];,<>=+-*/%!&.#";

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn err(&self, message: &str) -> LexError {
        LexError { line: self.line, col: self.col, message: String::from(message) }
    }
}

/// Tokenize MiniC source. The stream is lossless: whitespace and
/// comments appear as tokens and the concatenation of all token texts
/// equals the input.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor { src: source.as_bytes(), pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(b) = cur.peek() {
        let (line, col, start) = (cur.line, cur.col, cur.pos);
        let kind = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                while matches!(cur.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
                    cur.bump();
                }
                TokenKind::Whitespace
            }
            b'/' if cur.peek2() == Some(b'/') => {
                while let Some(c) = cur.peek() {
                    if c == b'\n' {
                        break;
                    }
                    cur.bump();
                }
                TokenKind::Comment
            }
            b'/' if cur.peek2() == Some(b'*') => {
                cur.bump();
                cur.bump();
                loop {
                    match cur.peek() {
                        None => return Err(cur.err("unterminated block comment")),
                        Some(b'*') if cur.peek2() == Some(b'/') => {
                            cur.bump();
                            cur.bump();
                            break;
                        }
                        _ => {
                            cur.bump();
                        }
                    }
                }
                TokenKind::Comment
            }
            b'"' => {
                cur.bump();
                loop {
                    match cur.peek() {
                        None | Some(b'\n') => return Err(cur.err("unterminated string literal")),
                        Some(b'\\') => {
                            cur.bump();
                            if cur.bump().is_none() {
                                return Err(cur.err("unterminated escape"));
                            }
                        }
                        Some(b'"') => {
                            cur.bump();
                            break;
                        }
                        _ => {
                            cur.bump();
                        }
                    }
                }
                TokenKind::StrLit
            }
            b'\'' => {
                cur.bump();
                match cur.peek() {
                    None | Some(b'\n') => return Err(cur.err("unterminated char literal")),
                    Some(b'\\') => {
                        cur.bump();
                        cur.bump();
                    }
                    _ => {
                        cur.bump();
                    }
                }
                if cur.peek() != Some(b'\'') {
                    return Err(cur.err("unterminated char literal"));
                }
                cur.bump();
                TokenKind::CharLit
            }
            b'0'..=b'9' => {
                let mut is_float = false;
                while matches!(cur.peek(), Some(b'0'..=b'9')) {
                    cur.bump();
                }
                if cur.peek() == Some(b'.') && matches!(cur.peek2(), Some(b'0'..=b'9')) {
                    is_float = true;
                    cur.bump();
                    while matches!(cur.peek(), Some(b'0'..=b'9')) {
                        cur.bump();
                    }
                }
                if matches!(cur.peek(), Some(b'e' | b'E')) {
                    let save = (cur.pos, cur.line, cur.col);
                    cur.bump();
                    if matches!(cur.peek(), Some(b'+' | b'-')) {
                        cur.bump();
                    }
                    if matches!(cur.peek(), Some(b'0'..=b'9')) {
                        is_float = true;
                        while matches!(cur.peek(), Some(b'0'..=b'9')) {
                            cur.bump();
                        }
                    } else {
                        (cur.pos, cur.line, cur.col) = save;
                    }
                }
                if is_float {
                    TokenKind::FloatLit
                } else {
                    TokenKind::IntLit
                }
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                while matches!(cur.peek(), Some(b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'_')) {
                    cur.bump();
                }
                let text = &source[start..cur.pos];
                if is_keyword(text) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Ident
                }
            }
            _ => {
                let two = &source.as_bytes()[cur.pos..(cur.pos + 2).min(source.len())];
                if two.len() == 2 && PUNCT2.iter().any(|p| p.as_bytes() == two) {
                    cur.bump();
                    cur.bump();
                    TokenKind::Punct
                } else if PUNCT1.contains(&b) {
                    cur.bump();
                    TokenKind::Punct
                } else {
                    return Err(cur.err("illegal character"));
                }
            }
        };
        out.push(Token { kind, text: String::from(&source[start..cur.pos]), line, col });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = "int foo(int a){\n  int b;\n  if (a < 2)      // base case\n    return 1;\n  b = foo(a - 1); // recursion\n  return a * b;\n}\n";

    #[test]
    fn empty_input_gives_empty_stream() {
        assert!(tokenize("").unwrap().is_empty());
    }

    #[test]
    fn lexem_counts_match_running_example() {
        let toks = tokenize(FIG2).unwrap();
        let count = |s: &str| toks.iter().filter(|t| t.text == s).count();
        assert_eq!(count("int"), 3);
        assert_eq!(count("foo"), 2);
    }

    #[test]
    fn stream_is_lossless() {
        let toks = tokenize(FIG2).unwrap();
        let joined: String = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(joined, FIG2);
    }

    #[test]
    fn illegal_character_reports_position() {
        let err = tokenize("int @").unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
    }

    #[test]
    fn lines_and_columns_are_one_based_and_monotone() {
        let toks = tokenize("int a;\n a = 1;\n").unwrap();
        assert_eq!((toks[0].line, toks[0].col), (1, 1));
        let mut prev = (0u32, 0u32);
        for t in &toks {
            assert!((t.line, t.col) > prev);
            prev = (t.line, t.col);
        }
    }

    #[test]
    fn comments_and_strings_lex() {
        let toks = tokenize("/* a\nb */ \"x\\n\" 'y' 3.5 1e9 12").unwrap();
        let kinds: Vec<TokenKind> = toks.iter().filter(|t| t.kind != TokenKind::Whitespace).map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            [
                TokenKind::Comment,
                TokenKind::StrLit,
                TokenKind::CharLit,
                TokenKind::FloatLit,
                TokenKind::FloatLit,
                TokenKind::IntLit,
            ]
        );
    }
}
