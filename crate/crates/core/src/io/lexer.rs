use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const SYMBOLS: &[&str] =
    &["->", "!", "&", "|", "<", ">", "[", "]", "(", ")", ";", "+", "*", "^", "?", "{", "}", ":", ",", "=", "-"];

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, column: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *column = 1;
        } else {
            *column += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut column, c);
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                {
                    let c = chars[i];
                    advance(&mut i, &mut line, &mut column, c);
                }
            }
            continue;
        }
        let (l, col) = (line, column);
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                {
                    let c = chars[i];
                    advance(&mut i, &mut line, &mut column, c);
                }
            }
            out.push(Token { tok: Tok::Ident(s), line: l, column: col });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return Err(Error::Parse { line, column, message: format!("unexpected character '{c}'") });
        };
        for _ in 0..sym.len() {
            {
                let c = chars[i];
                advance(&mut i, &mut line, &mut column, c);
            }
        }
        out.push(Token { tok: Tok::Sym(sym), line: l, column: col });
    }
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}
