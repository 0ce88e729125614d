//! Tokenizer for Java-like sources. Comments are dropped, string literals are
//! unescaped, everything else is an identifier, number or single punctuation
//! character.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Str,
    Char,
    Number,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
}

impl Token {
    pub fn is_punct(&self, c: char) -> bool {
        self.kind == TokenKind::Punct && self.text.len() == c.len_utf8() && self.text.starts_with(c)
    }

    pub fn is_ident(&self, s: &str) -> bool {
        self.kind == TokenKind::Ident && self.text == s
    }

    pub fn ident(&self) -> Option<&str> {
        (self.kind == TokenKind::Ident).then_some(self.text.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct LexError {
    pub line: u32,
    pub message: String,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line: u32 = 1;
    let err = |line, message: &str| LexError {
        line,
        message: message.to_string(),
    };

    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                let start = line;
                i += 2;
                loop {
                    match chars.get(i) {
                        None => return Err(err(start, "unterminated block comment")),
                        Some('*') if chars.get(i + 1) == Some(&'/') => {
                            i += 2;
                            break;
                        }
                        Some('\n') => {
                            line += 1;
                            i += 1;
                        }
                        Some(_) => i += 1,
                    }
                }
            }
            '"' if chars.get(i + 1) == Some(&'"') && chars.get(i + 2) == Some(&'"') => {
                let start = line;
                i += 3;
                let mut text = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(err(start, "unterminated text block")),
                        Some('"') if chars.get(i + 1) == Some(&'"') && chars.get(i + 2) == Some(&'"') => {
                            i += 3;
                            break;
                        }
                        Some('\\') => {
                            if let Some(&n) = chars.get(i + 1) {
                                text.push(unescape(n));
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            if ch == '\n' {
                                line += 1;
                            }
                            text.push(ch);
                            i += 1;
                        }
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Str,
                    text: text.trim().to_string(),
                    line: start,
                });
            }
            '"' | '\'' => {
                let quote = c;
                i += 1;
                let mut text = String::new();
                loop {
                    match chars.get(i) {
                        None | Some('\n') => return Err(err(line, "unterminated literal")),
                        Some('\\') => {
                            if let Some(&n) = chars.get(i + 1) {
                                text.push(unescape(n));
                            }
                            i += 2;
                        }
                        Some(&ch) if ch == quote => {
                            i += 1;
                            break;
                        }
                        Some(&ch) => {
                            text.push(ch);
                            i += 1;
                        }
                    }
                }
                let kind = if quote == '"' {
                    TokenKind::Str
                } else {
                    TokenKind::Char
                };
                tokens.push(Token { kind, text, line });
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '.')
                {
                    // `1..` never occurs in Java, but `1.f` and `0x1F` do.
                    if chars[i] == '.' && !chars.get(i + 1).is_some_and(|n| n.is_ascii_digit()) {
                        break;
                    }
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Number,
                    text: chars[start..i].iter().collect(),
                    line,
                });
            }
            c if c.is_alphabetic() || c == '_' || c == '$' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$')
                {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident,
                    text: chars[start..i].iter().collect(),
                    line,
                });
            }
            c => {
                tokens.push(Token {
                    kind: TokenKind::Punct,
                    text: c.to_string(),
                    line,
                });
                i += 1;
            }
        }
    }
    Ok(tokens)
}

fn unescape(c: char) -> char {
    match c {
        'n' => '\n',
        't' => '\t',
        'r' => '\r',
        '0' => '\0',
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn comments_and_strings() {
        let toks = kinds("a /* \"x\" */ + \"b\\\"c\" // tail\n'd'");
        assert_eq!(
            toks,
            vec![
                (TokenKind::Ident, "a".into()),
                (TokenKind::Punct, "+".into()),
                (TokenKind::Str, "b\"c".into()),
                (TokenKind::Char, "d".into()),
            ]
        );
    }

    #[test]
    fn line_numbers_track_block_comments() {
        let toks = tokenize("/*\n\n*/ x\ny").unwrap();
        assert_eq!(toks[0].line, 3);
        assert_eq!(toks[1].line, 4);
    }

    #[test]
    fn numbers_and_generics() {
        let toks = kinds("1.5f 0x1F List<Map<K,V>> x");
        assert_eq!(toks[0].1, "1.5f");
        assert_eq!(toks[1].1, "0x1F");
        assert_eq!(toks.iter().filter(|t| t.1 == ">").count(), 2);
    }

    #[test]
    fn text_block() {
        let toks = kinds("String s = \"\"\"\n  hello\n  \"\"\";");
        assert_eq!(toks[3], (TokenKind::Str, "hello".into()));
    }

    #[test]
    fn unterminated_inputs_fail() {
        assert!(tokenize("\"abc").is_err());
        assert!(tokenize("/* never closed").is_err());
    }
}
