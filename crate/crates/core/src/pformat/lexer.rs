use crate::diagnostic::Location;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok<'a> {
    Word(&'a str),
    Str(String),
    /// A quoted value that hit the end of its line.
    Unterminated,
    Open,
    Close,
    Comma,
    Equals,
}

#[derive(Debug, Clone)]
pub(crate) struct Token<'a> {
    pub tok: Tok<'a>,
    pub loc: Location,
}

pub(crate) struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    col: usize,
    line_has_content: bool,
}

impl<'a> Lexer<'a> {
    pub fn new(text: &'a str) -> Self {
        Lexer {
            text,
            pos: 0,
            line: 1,
            col: 1,
            line_has_content: false,
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn advance(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
            self.line_has_content = false;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn loc(&self) -> Location {
        Location::new(self.line, self.col)
    }

    fn skip_line(&mut self) {
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.advance();
        }
    }

    pub fn tokenize(mut self) -> Vec<Token<'a>> {
        let mut tokens = Vec::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.advance();
                continue;
            }
            if c == '#' && !self.line_has_content {
                self.skip_line();
                continue;
            }
            self.line_has_content = true;
            let loc = self.loc();
            let tok = match c {
                '(' => {
                    self.advance();
                    Tok::Open
                }
                ')' => {
                    self.advance();
                    Tok::Close
                }
                ',' => {
                    self.advance();
                    Tok::Comma
                }
                '=' => {
                    self.advance();
                    Tok::Equals
                }
                '"' => self.string(),
                _ => {
                    let start = self.pos;
                    while let Some(c) = self.peek() {
                        if c.is_whitespace() || matches!(c, '(' | ')' | ',' | '=' | '"') {
                            break;
                        }
                        self.advance();
                    }
                    Tok::Word(&self.text[start..self.pos])
                }
            };
            tokens.push(Token { tok, loc });
        }
        tokens
    }

    fn string(&mut self) -> Tok<'a> {
        self.advance();
        let mut value = String::new();
        loop {
            match self.peek() {
                None | Some('\n') => return Tok::Unterminated,
                Some('"') => {
                    self.advance();
                    return Tok::Str(value);
                }
                Some('\\') => {
                    self.advance();
                    match self.peek() {
                        None | Some('\n') => return Tok::Unterminated,
                        Some(c) => {
                            self.advance();
                            value.push(c);
                        }
                    }
                }
                Some(c) => {
                    self.advance();
                    value.push(c);
                }
            }
        }
    }
}
