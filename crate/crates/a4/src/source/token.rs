use std::ops::Range;

/// Byte range into the original source text.
pub type Span = Range<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Literal,
    Punctuation,
    Comment,
    Whitespace,
}

impl TokenKind {
    /// Whitespace and comments carry no meaning for matching.
    pub fn is_trivia(self) -> bool {
        matches!(self, TokenKind::Comment | TokenKind::Whitespace)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn is_trivia(&self) -> bool {
        self.kind.is_trivia()
    }
}

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
    "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
    "volatile", "while", "true", "false", "null",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

pub const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
];

// Longest first. `>` is never fused so that nested generic closers stay separate.
const OPERATORS: &[&str] = &[
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "<<",
];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Splits `source` into a lossless token stream. Concatenating the token
/// texts reproduces the input exactly; bytes that fit no rule become
/// single-character punctuation.
pub fn tokenize(source: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < source.len() {
        let rest = &source[pos..];
        let (kind, len) = scan_one(rest);
        debug_assert!(len > 0);
        tokens.push(Token {
            kind,
            text: rest[..len].to_string(),
            span: pos..pos + len,
        });
        pos += len;
    }
    tokens
}

fn scan_one(rest: &str) -> (TokenKind, usize) {
    let mut chars = rest.chars();
    let c = chars.next().expect("non-empty");
    if c.is_whitespace() {
        let len = rest
            .char_indices()
            .find(|&(_, ch)| !ch.is_whitespace())
            .map_or(rest.len(), |(i, _)| i);
        return (TokenKind::Whitespace, len);
    }
    if rest.starts_with("//") {
        let len = rest.find('\n').unwrap_or(rest.len());
        return (TokenKind::Comment, len);
    }
    if rest.starts_with("/*") {
        let len = rest[2..].find("*/").map_or(rest.len(), |i| i + 4);
        return (TokenKind::Comment, len);
    }
    if rest.starts_with("\"\"\"") {
        let len = rest[3..].find("\"\"\"").map_or(rest.len(), |i| i + 6);
        return (TokenKind::Literal, len);
    }
    if c == '"' || c == '\'' {
        return (TokenKind::Literal, scan_quoted(rest, c));
    }
    if c.is_ascii_digit() || (c == '.' && chars.next().is_some_and(|d| d.is_ascii_digit())) {
        return (TokenKind::Literal, scan_number(rest));
    }
    if is_ident_start(c) {
        let len = rest
            .char_indices()
            .find(|&(_, ch)| !is_ident_continue(ch))
            .map_or(rest.len(), |(i, _)| i);
        let word = &rest[..len];
        let kind = match word {
            "true" | "false" | "null" => TokenKind::Literal,
            w if is_keyword(w) => TokenKind::Keyword,
            _ => TokenKind::Identifier,
        };
        return (kind, len);
    }
    for op in OPERATORS {
        if rest.starts_with(op) {
            return (TokenKind::Punctuation, op.len());
        }
    }
    (TokenKind::Punctuation, c.len_utf8())
}

fn scan_quoted(rest: &str, quote: char) -> usize {
    let mut escaped = false;
    for (i, ch) in rest.char_indices().skip(1) {
        if escaped {
            escaped = false;
            continue;
        }
        match ch {
            '\\' => escaped = true,
            '\n' => return i,
            c if c == quote => return i + 1,
            _ => {}
        }
    }
    rest.len()
}

fn scan_number(rest: &str) -> usize {
    let bytes = rest.as_bytes();
    let hex = rest.starts_with("0x") || rest.starts_with("0X");
    let mut i = if hex { 2 } else { 0 };
    while i < bytes.len() {
        let b = bytes[i];
        let next = bytes.get(i + 1).copied();
        let ok = match b {
            b'.' => {
                next.is_some_and(|n| n.is_ascii_digit())
                    || (!hex && !next.is_some_and(|n| n.is_ascii_alphabetic() || n == b'.'))
            }
            b'+' | b'-' => !hex && i > 0 && matches!(bytes[i - 1], b'e' | b'E'),
            _ => b.is_ascii_alphanumeric() || b == b'_',
        };
        if !ok {
            break;
        }
        i += 1;
    }
    i.max(1)
}

/// Indices of the non-trivia tokens, in order.
pub fn significant(tokens: &[Token]) -> Vec<usize> {
    tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_trivia())
        .map(|(i, _)| i)
        .collect()
}

/// Text of the non-trivia tokens of `text`, used for identity comparisons.
pub fn significant_texts(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| !t.is_trivia())
        .map(|t| t.text)
        .collect()
}
