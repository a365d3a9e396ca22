use super::{ParseError, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Identifier starting with a lowercase letter or underscore.
    Ident(String),
    /// Identifier starting with an uppercase letter.
    UIdent(String),
    Int(i64),
    Str(String),
    Lam,
    BigLam,
    Let,
    In,
    Case,
    With,
    Forall,
    True,
    False,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Lt,
    Gt,
    Colon,
    Semi,
    Dot,
    Eq,
    Arrow,
    Caret,
    Question,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::UIdent(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Lam => "lam",
            Tok::BigLam => "Lam",
            Tok::Let => "let",
            Tok::In => "in",
            Tok::Case => "case",
            Tok::With => "with",
            Tok::Forall => "forall",
            Tok::True => "true",
            Tok::False => "false",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Eq => "=",
            Tok::Arrow => "->",
            Tok::Caret => "^",
            Tok::Question => "?",
            _ => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'-' && bytes.get(i + 1) == Some(&b'-') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => single(&mut i, Tok::LParen),
            b')' => single(&mut i, Tok::RParen),
            b'[' => single(&mut i, Tok::LBrack),
            b']' => single(&mut i, Tok::RBrack),
            b'{' => single(&mut i, Tok::LBrace),
            b'}' => single(&mut i, Tok::RBrace),
            b'<' => single(&mut i, Tok::Lt),
            b'>' => single(&mut i, Tok::Gt),
            b':' => single(&mut i, Tok::Colon),
            b';' => single(&mut i, Tok::Semi),
            b'.' => single(&mut i, Tok::Dot),
            b'=' => single(&mut i, Tok::Eq),
            b'^' => single(&mut i, Tok::Caret),
            b'?' => single(&mut i, Tok::Question),
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'-' if bytes.get(i + 1).is_some_and(|d| d.is_ascii_digit()) => {
                i += 1;
                number(src, &mut i, start, true)?
            }
            b'0'..=b'9' => number(src, &mut i, start, false)?,
            b'"' => string(src, &mut i)?,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                keyword(&src[start..i])
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::new(
                    format!("unexpected character `{ch}`"),
                    Span::new(i, i + ch.len_utf8()),
                ));
            }
        };
        out.push(Token {
            tok,
            span: Span::new(start, i),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(src.len(), src.len()),
    });
    Ok(out)
}

fn single(i: &mut usize, t: Tok) -> Tok {
    *i += 1;
    t
}

fn number(src: &str, i: &mut usize, start: usize, neg: bool) -> Result<Tok, ParseError> {
    let bytes = src.as_bytes();
    while *i < bytes.len() && bytes[*i].is_ascii_digit() {
        *i += 1;
    }
    let digits = &src[if neg { start + 1 } else { start }..*i];
    let text = if neg {
        format!("-{digits}")
    } else {
        digits.to_string()
    };
    text.parse::<i64>()
        .map(Tok::Int)
        .map_err(|_| ParseError::new("integer literal out of range", Span::new(start, *i)))
}

fn string(src: &str, i: &mut usize) -> Result<Tok, ParseError> {
    let start = *i;
    *i += 1;
    let mut s = String::new();
    let mut chars = src[*i..].char_indices();
    while let Some((off, ch)) = chars.next() {
        match ch {
            '"' => {
                *i += off + 1;
                return Ok(Tok::Str(s));
            }
            '\\' => match chars.next() {
                Some((_, 'n')) => s.push('\n'),
                Some((_, 't')) => s.push('\t'),
                Some((_, c @ ('"' | '\\'))) => s.push(c),
                _ => {
                    return Err(ParseError::new(
                        "bad escape in string literal",
                        Span::new(*i + off, *i + off + 1),
                    ))
                }
            },
            c => s.push(c),
        }
    }
    Err(ParseError::new(
        "unterminated string literal",
        Span::new(start, src.len()),
    ))
}

fn keyword(word: &str) -> Tok {
    match word {
        "lam" => Tok::Lam,
        "Lam" => Tok::BigLam,
        "let" => Tok::Let,
        "in" => Tok::In,
        "case" => Tok::Case,
        "with" => Tok::With,
        "forall" => Tok::Forall,
        "true" => Tok::True,
        "false" => Tok::False,
        w if w.starts_with(|c: char| c.is_ascii_uppercase()) => Tok::UIdent(w.to_string()),
        w => Tok::Ident(w.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_comments_and_negatives() {
        assert_eq!(
            toks("x -> -3 -- trailing\n?"),
            vec![
                Tok::Ident("x".into()),
                Tok::Arrow,
                Tok::Int(-3),
                Tok::Question,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn strings_with_escapes() {
        assert_eq!(
            toks(r#""a\"b""#),
            vec![Tok::Str("a\"b".into()), Tok::Eof]
        );
        assert!(lex("\"open").is_err());
    }

    #[test]
    fn rejects_stray_characters() {
        let err = lex("x # y").unwrap_err();
        assert_eq!(err.span.start, 2);
    }
}
