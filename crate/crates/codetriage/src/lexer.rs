//! Indentation-aware Python tokenizer.
//!
//! Total over arbitrary input: malformed code still tokenizes (unterminated
//! strings run to end of line, unknown bytes become operator tokens) so that
//! lint rules and feature extraction always have something to work with.
//! Every token carries the whitespace that preceded it, so the exact source
//! text can be reconstructed from the stream.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Identifier,
    Keyword,
    Number,
    String,
    Operator,
    Punctuation,
    Newline,
    Indent,
    Dedent,
    Comment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    /// Exact source text. Empty for dedents and the synthetic newline emitted
    /// at end of input; holds the full line indentation for indents.
    pub text: String,
    /// Whitespace (and line-continuation backslashes) between the previous
    /// token and this one, verbatim.
    pub leading_ws: String,
    /// 1-based source line of the first character.
    pub line: u32,
    /// 1-based source column of the first character, counted in chars.
    pub column: u32,
}

/// Output of [`tokenize`]. Dereferences to the token slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    /// Whitespace after the last token (e.g. a trailing blank line's indent).
    pub trailing_ws: String,
    /// Line of the first dedent that did not land on any enclosing
    /// indentation level, if one occurred.
    pub inconsistent_dedent: Option<u32>,
}

impl TokenStream {
    pub fn has_inconsistent_dedent(&self) -> bool {
        self.inconsistent_dedent.is_some()
    }

    /// Reassembles the exact source text the stream was produced from.
    pub fn source(&self) -> String {
        let mut out = String::new();
        for tok in &self.tokens {
            out.push_str(&tok.leading_ws);
            out.push_str(&tok.text);
        }
        out.push_str(&self.trailing_ws);
        out
    }
}

impl std::ops::Deref for TokenStream {
    type Target = [Token];

    fn deref(&self) -> &[Token] {
        &self.tokens
    }
}

const KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue",
    "def", "del", "elif", "else", "except", "finally", "for", "from", "global", "if", "import",
    "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try", "while",
    "with", "yield",
];

/// Tab stops every 8 columns, matching CPython's indentation arithmetic.
const TAB_WIDTH: usize = 8;

/// Longest-match operator and punctuation table, 3-char entries first.
const OPERATORS3: &[&str] = &["**=", "//=", ">>=", "<<=", "..."];
const OPERATORS2: &[&str] = &[
    "==", "!=", ">=", "<=", "->", ":=", "+=", "-=", "*=", "/=", "%=", "@=", "&=", "|=", "^=",
    "**", "//", "<<", ">>",
];

fn is_punctuation(text: &str) -> bool {
    matches!(text, "(" | ")" | "[" | "]" | "{" | "}" | ":" | "," | ";" | "." | "...")
}

pub fn tokenize(code: &str) -> TokenStream {
    Lexer::new(code).run()
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    column: u32,
    /// Pending whitespace to attach to the next token.
    ws: String,
    tokens: Vec<Token>,
    indents: Vec<usize>,
    bracket_depth: usize,
    at_line_start: bool,
    line_has_code: bool,
    inconsistent_dedent: Option<u32>,
}

impl Lexer {
    fn new(code: &str) -> Self {
        Lexer {
            chars: code.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            ws: String::new(),
            tokens: Vec::new(),
            indents: vec![0],
            bracket_depth: 0,
            at_line_start: true,
            line_has_code: false,
            inconsistent_dedent: None,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn advance(&mut self) -> char {
        let c = self.chars[self.pos];
        self.pos += 1;
        if c == '\n' || (c == '\r' && self.peek() != Some('\n')) {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        c
    }

    fn push_token(&mut self, kind: TokenKind, text: String, line: u32, column: u32) {
        let leading_ws = std::mem::take(&mut self.ws);
        if !matches!(
            kind,
            TokenKind::Newline | TokenKind::Indent | TokenKind::Dedent | TokenKind::Comment
        ) {
            self.line_has_code = true;
        }
        self.tokens.push(Token {
            kind,
            text,
            leading_ws,
            line,
            column,
        });
    }

    fn run(mut self) -> TokenStream {
        loop {
            if self.at_line_start && self.bracket_depth == 0 {
                self.handle_line_start();
            }
            let Some(c) = self.peek() else { break };
            match c {
                '\n' | '\r' => self.lex_newline(),
                ' ' | '\t' | '\x0c' => {
                    let c = self.advance();
                    self.ws.push(c);
                }
                '\\' if matches!(self.peek_at(1), Some('\n') | Some('\r')) => {
                    // Explicit line continuation: backslash and line break are
                    // plain whitespace, and the next line gets no indent logic.
                    let bs = self.advance();
                    self.ws.push(bs);
                    let nl = self.advance();
                    self.ws.push(nl);
                    if nl == '\r' && self.peek() == Some('\n') {
                        let lf = self.advance();
                        self.ws.push(lf);
                    }
                }
                '#' => self.lex_comment(),
                '"' | '\'' => self.lex_string(String::new(), self.line, self.column),
                c if c.is_ascii_digit() => self.lex_number(),
                '.' if matches!(self.peek_at(1), Some(d) if d.is_ascii_digit()) => {
                    self.lex_number()
                }
                c if c.is_alphabetic() || c == '_' => self.lex_word(),
                _ => self.lex_operator(),
            }
        }
        self.finish()
    }

    /// Measures the indentation of a fresh logical line and emits
    /// indent/dedent tokens against the indentation stack.
    fn handle_line_start(&mut self) {
        let start_line = self.line;
        let mut text = String::new();
        let mut width = 0usize;
        while let Some(c) = self.peek() {
            match c {
                ' ' => width += 1,
                '\t' => width = width - width % TAB_WIDTH + TAB_WIDTH,
                '\x0c' => width = 0,
                _ => break,
            }
            text.push(self.advance());
        }
        self.at_line_start = false;
        match self.peek() {
            // Blank and comment-only lines never change the indentation level.
            None | Some('\n') | Some('\r') | Some('#') => self.ws.push_str(&text),
            Some(_) => {
                let top = *self.indents.last().unwrap();
                if width > top {
                    self.indents.push(width);
                    self.push_token(TokenKind::Indent, text, start_line, 1);
                } else if width == top {
                    self.ws.push_str(&text);
                } else {
                    while *self.indents.last().unwrap() > width {
                        self.indents.pop();
                        self.push_token(TokenKind::Dedent, String::new(), start_line, 1);
                    }
                    if *self.indents.last().unwrap() != width {
                        // Dedent to a level that was never opened. Flag it and
                        // adopt the new level so later lines compare sanely.
                        if self.inconsistent_dedent.is_none() {
                            self.inconsistent_dedent = Some(start_line);
                        }
                        self.indents.push(width);
                    }
                    self.ws.push_str(&text);
                }
            }
        }
    }

    fn lex_newline(&mut self) {
        let (line, column) = (self.line, self.column);
        let mut text = String::new();
        let c = self.advance();
        text.push(c);
        if c == '\r' && self.peek() == Some('\n') {
            text.push(self.advance());
        }
        if self.bracket_depth > 0 {
            // Implicit line joining inside brackets.
            self.ws.push_str(&text);
        } else {
            self.push_token(TokenKind::Newline, text, line, column);
            self.line_has_code = false;
            self.at_line_start = true;
        }
    }

    fn lex_comment(&mut self) {
        let (line, column) = (self.line, self.column);
        let mut text = String::new();
        while let Some(c) = self.peek() {
            if c == '\n' || c == '\r' {
                break;
            }
            text.push(self.advance());
        }
        self.push_token(TokenKind::Comment, text, line, column);
    }

    fn lex_word(&mut self) {
        let (line, column) = (self.line, self.column);
        let mut text = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                text.push(self.advance());
            } else {
                break;
            }
        }
        if text.len() <= 2
            && text.chars().all(|c| matches!(c, 'r' | 'R' | 'b' | 'B' | 'u' | 'U' | 'f' | 'F'))
            && matches!(self.peek(), Some('"') | Some('\''))
        {
            self.lex_string(text, line, column);
            return;
        }
        let kind = if KEYWORDS.contains(&text.as_str()) {
            TokenKind::Keyword
        } else {
            TokenKind::Identifier
        };
        self.push_token(kind, text, line, column);
    }

    /// `prefix` holds any string prefix letters (r/b/u/f) already consumed.
    fn lex_string(&mut self, prefix: String, line: u32, column: u32) {
        let mut text = prefix;
        let quote = self.advance();
        text.push(quote);
        let triple = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if triple {
            text.push(self.advance());
            text.push(self.advance());
            loop {
                match self.peek() {
                    None => break,
                    Some('\\') => {
                        text.push(self.advance());
                        if self.peek().is_some() {
                            text.push(self.advance());
                        }
                    }
                    Some(c) if c == quote
                        && self.peek_at(1) == Some(quote)
                        && self.peek_at(2) == Some(quote) =>
                    {
                        text.push(self.advance());
                        text.push(self.advance());
                        text.push(self.advance());
                        break;
                    }
                    Some(_) => text.push(self.advance()),
                }
            }
        } else {
            loop {
                match self.peek() {
                    // Unterminated: stop at end of line or input, keeping
                    // what we have as the token text.
                    None | Some('\n') | Some('\r') => break,
                    Some('\\') => {
                        text.push(self.advance());
                        match self.peek() {
                            Some('\r') => {
                                text.push(self.advance());
                                if self.peek() == Some('\n') {
                                    text.push(self.advance());
                                }
                            }
                            Some(_) => text.push(self.advance()),
                            None => {}
                        }
                    }
                    Some(c) if c == quote => {
                        text.push(self.advance());
                        break;
                    }
                    Some(_) => text.push(self.advance()),
                }
            }
        }
        self.push_token(TokenKind::String, text, line, column);
    }

    fn lex_number(&mut self) {
        let (line, column) = (self.line, self.column);
        let mut text = String::new();
        text.push(self.advance());
        loop {
            let radix_literal = text.len() >= 2
                && text.starts_with('0')
                && matches!(
                    text.as_bytes()[1],
                    b'x' | b'X' | b'o' | b'O' | b'b' | b'B'
                );
            match self.peek() {
                Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '.' => {
                    text.push(self.advance());
                }
                Some('+') | Some('-')
                    if !radix_literal && matches!(text.chars().last(), Some('e') | Some('E')) =>
                {
                    text.push(self.advance());
                }
                _ => break,
            }
        }
        self.push_token(TokenKind::Number, text, line, column);
    }

    fn lex_operator(&mut self) {
        let (line, column) = (self.line, self.column);
        let window: String = (0..3).filter_map(|i| self.peek_at(i)).collect();
        let text = if let Some(op) = OPERATORS3.iter().find(|op| window.starts_with(**op)) {
            (0..3).for_each(|_| {
                self.advance();
            });
            (*op).to_string()
        } else if let Some(op) = OPERATORS2.iter().find(|op| window.starts_with(**op)) {
            (0..2).for_each(|_| {
                self.advance();
            });
            (*op).to_string()
        } else {
            self.advance().to_string()
        };
        match text.as_str() {
            "(" | "[" | "{" => self.bracket_depth += 1,
            ")" | "]" | "}" => self.bracket_depth = self.bracket_depth.saturating_sub(1),
            _ => {}
        }
        let kind = if is_punctuation(&text) {
            TokenKind::Punctuation
        } else {
            // Single-char fallback also covers bytes with no Python meaning,
            // which keeps the lexer total.
            TokenKind::Operator
        };
        self.push_token(kind, text, line, column);
    }

    fn finish(mut self) -> TokenStream {
        if self.line_has_code {
            let (line, column) = (self.line, self.column);
            self.push_token(TokenKind::Newline, String::new(), line, column);
        }
        while self.indents.len() > 1 {
            self.indents.pop();
            let (line, column) = (self.line, self.column);
            self.push_token(TokenKind::Dedent, String::new(), line, column);
        }
        let mut tokens = self.tokens;
        reclassify_py2_statements(&mut tokens);
        TokenStream {
            tokens,
            trailing_ws: self.ws,
            inconsistent_dedent: self.inconsistent_dedent,
        }
    }
}

/// `print` and `exec` are identifiers in Python 3 but statement keywords in
/// Python 2. They are kept as identifiers exactly when the next
/// non-comment token is an opening parenthesis (a call), otherwise
/// reclassified as keywords.
fn reclassify_py2_statements(tokens: &mut [Token]) {
    for i in 0..tokens.len() {
        if tokens[i].kind != TokenKind::Identifier {
            continue;
        }
        if tokens[i].text != "print" && tokens[i].text != "exec" {
            continue;
        }
        let next = tokens[i + 1..]
            .iter()
            .find(|t| t.kind != TokenKind::Comment);
        let is_call = matches!(
            next,
            Some(t) if t.kind == TokenKind::Punctuation && t.text == "("
        );
        if !is_call {
            tokens[i].kind = TokenKind::Keyword;
        }
    }
}
