use super::{Axis, ParseError, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    /// `#boardsize`, `#blackactions`, ...
    Directive(String),
    /// `:action`, `:parameters`, ...
    Keyword(String),
    Ident(String),
    Param(Axis),
    Int(u64),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Directive(d) => format!("directive '{d}'"),
            TokenKind::Keyword(k) => format!("keyword '{k}'"),
            TokenKind::Ident(s) => format!("'{s}'"),
            TokenKind::Param(Axis::X) => "'?x'".into(),
            TokenKind::Param(Axis::Y) => "'?y'".into(),
            TokenKind::Int(v) => format!("integer {v}"),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::Comma => "','".into(),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut pos = 0;
    let mut line = 1;
    let mut column = 1;
    let mut line_has_token = false;

    while pos < chars.len() {
        let c = chars[pos];
        let span = Span { line, column };
        if c == '\n' {
            pos += 1;
            line += 1;
            column = 1;
            line_has_token = false;
            continue;
        }
        if c.is_whitespace() {
            pos += 1;
            column += 1;
            continue;
        }

        let start = pos;
        let kind = match c {
            '(' => {
                pos += 1;
                TokenKind::LParen
            }
            ')' => {
                pos += 1;
                TokenKind::RParen
            }
            ',' => {
                pos += 1;
                TokenKind::Comma
            }
            '+' => {
                pos += 1;
                TokenKind::Plus
            }
            '-' => {
                pos += 1;
                TokenKind::Minus
            }
            '#' | ':' => {
                pos += 1;
                while pos < chars.len() && is_word_char(chars[pos]) {
                    pos += 1;
                }
                let word: String = chars[start..pos].iter().collect();
                if word.len() == 1 {
                    return Err(ParseError::Syntax {
                        span,
                        message: format!("dangling '{c}'"),
                    });
                }
                if c == '#' {
                    if line_has_token {
                        return Err(ParseError::Syntax {
                            span,
                            message: format!("directive '{word}' must start a line"),
                        });
                    }
                    TokenKind::Directive(word)
                } else {
                    TokenKind::Keyword(word)
                }
            }
            '?' => {
                pos += 1;
                let axis = match chars.get(pos) {
                    Some('x') => Axis::X,
                    Some('y') => Axis::Y,
                    _ => {
                        return Err(ParseError::Syntax {
                            span,
                            message: "only the parameters ?x and ?y exist".into(),
                        })
                    }
                };
                pos += 1;
                if chars.get(pos).copied().is_some_and(is_word_char) {
                    return Err(ParseError::Syntax {
                        span,
                        message: "only the parameters ?x and ?y exist".into(),
                    });
                }
                TokenKind::Param(axis)
            }
            c if c.is_ascii_digit() => {
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits: String = chars[start..pos].iter().collect();
                let value = digits.parse::<u64>().map_err(|_| ParseError::Syntax {
                    span,
                    message: format!("integer '{digits}' is too large"),
                })?;
                if chars
                    .get(pos)
                    .copied()
                    .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                {
                    return Err(ParseError::Syntax {
                        span,
                        message: "identifiers may not start with a digit".into(),
                    });
                }
                TokenKind::Int(value)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                // Hyphens join words (`north-east`) but never a trailing number.
                loop {
                    while pos < chars.len() && is_word_char(chars[pos]) {
                        pos += 1;
                    }
                    let joins = chars.get(pos) == Some(&'-')
                        && chars
                            .get(pos + 1)
                            .is_some_and(|c| c.is_ascii_alphabetic() || *c == '_');
                    if joins {
                        pos += 1;
                    } else {
                        break;
                    }
                }
                TokenKind::Ident(chars[start..pos].iter().collect())
            }
            other => {
                return Err(ParseError::Syntax {
                    span,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        column += pos - start;
        line_has_token = true;
        tokens.push(Token { kind, span });
    }
    Ok(tokens)
}
