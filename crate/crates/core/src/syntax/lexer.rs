use crate::diag::{DiagCode, Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Data,
    Where,
    Forall,
    Set,
    Unit,
    Colon,
    Arrow,
    Star,
    Plus,
    Dot,
    LParen,
    RParen,
    LBrace,
    RBrace,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Data => "`data`".into(),
            Tok::Where => "`where`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Set => "`Set`".into(),
            Tok::Unit => "`Unit`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let single = |tok: Tok, len: usize| Token {
            tok,
            span: Span::new(i, i + len),
        };
        match c {
            '-' => {
                it.next();
                match it.peek() {
                    Some(&(_, '-')) => {
                        // line comment
                        for (_, c) in it.by_ref() {
                            if c == '\n' {
                                break;
                            }
                        }
                    }
                    Some(&(_, '>')) => {
                        it.next();
                        out.push(single(Tok::Arrow, 2));
                    }
                    _ => {
                        return Err(Diagnostic::new(DiagCode::SyntaxError, "unexpected character `-`")
                            .at(Some(Span::new(i, i + 1))))
                    }
                }
            }
            '→' => {
                it.next();
                out.push(single(Tok::Arrow, c.len_utf8()));
            }
            '∀' => {
                it.next();
                out.push(single(Tok::Forall, c.len_utf8()));
            }
            '×' => {
                it.next();
                out.push(single(Tok::Star, c.len_utf8()));
            }
            ':' => {
                it.next();
                out.push(single(Tok::Colon, 1));
            }
            '*' => {
                it.next();
                out.push(single(Tok::Star, 1));
            }
            '+' => {
                it.next();
                out.push(single(Tok::Plus, 1));
            }
            '.' => {
                it.next();
                out.push(single(Tok::Dot, 1));
            }
            '(' => {
                it.next();
                out.push(single(Tok::LParen, 1));
            }
            ')' => {
                it.next();
                out.push(single(Tok::RParen, 1));
            }
            '{' => {
                it.next();
                out.push(single(Tok::LBrace, 1));
            }
            '}' => {
                it.next();
                out.push(single(Tok::RBrace, 1));
            }
            c if is_ident_char(c) => {
                let mut end = i;
                let mut text = String::new();
                while let Some(&(j, d)) = it.peek() {
                    if !is_ident_char(d) {
                        break;
                    }
                    text.push(d);
                    end = j + d.len_utf8();
                    it.next();
                }
                let tok = match text.as_str() {
                    "data" => Tok::Data,
                    "where" => Tok::Where,
                    "forall" => Tok::Forall,
                    "Set" => Tok::Set,
                    "Unit" => Tok::Unit,
                    _ => Tok::Ident(text),
                };
                out.push(Token {
                    tok,
                    span: Span::new(i, end),
                });
            }
            other => {
                return Err(
                    Diagnostic::new(DiagCode::SyntaxError, format!("unexpected character `{other}`"))
                        .at(Some(Span::new(i, i + other.len_utf8()))),
                )
            }
        }
    }
    Ok(out)
}
