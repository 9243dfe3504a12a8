//! Deterministic lint rules over the token stream.
//!
//! Rules come in two tiers. Definite rules identify conditions that are
//! unambiguous from the token stream alone; their category wins over the
//! classifier. Advisory rules are heuristics that annotate a verdict without
//! overriding it.

use crate::corpus::labels;
use crate::lexer::{Token, TokenKind, TokenStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    /// Certain from the tokens alone; overrides the classifier.
    Definite,
    /// Heuristic; annotates but never overrides.
    Advisory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub rule_id: &'static str,
    pub rule_name: &'static str,
    pub category: &'static str,
    pub certainty: Certainty,
    pub line: u32,
    pub message: String,
}

impl Finding {
    /// `<line>:<rule_id>:<category>:<message>`
    pub fn render(&self) -> String {
        format!(
            "{}:{}:{}:{}",
            self.line, self.rule_id, self.category, self.message
        )
    }
}

/// Runs every rule and returns the findings sorted by line, then rule id.
pub fn run_rules(ts: &TokenStream) -> Vec<Finding> {
    let mut findings = Vec::new();
    py2_print_statement(ts, &mut findings);
    py2_exec_statement(ts, &mut findings);
    return_in_loop_body(ts, &mut findings);
    open_literal_path(ts, &mut findings);
    indent_or_delimiter_imbalance(ts, &mut findings);
    eval_or_exec_call_on_input(ts, &mut findings);
    findings.sort_by(|a, b| (a.line, a.rule_id).cmp(&(b.line, b.rule_id)));
    findings
}

pub fn render_findings(findings: &[Finding]) -> String {
    let mut out = String::new();
    for f in findings {
        out.push_str(&f.render());
        out.push('\n');
    }
    out
}

/// Next token that is not a comment, starting at `from` (exclusive).
fn next_significant(tokens: &[Token], from: usize) -> Option<&Token> {
    tokens[from + 1..]
        .iter()
        .find(|t| t.kind != TokenKind::Comment)
}

/// R001: a Python 2 `print` statement. The lexer has already decided that
/// `print` not followed by `(` is the statement form.
fn py2_print_statement(ts: &TokenStream, findings: &mut Vec<Finding>) {
    for tok in ts.iter() {
        if tok.kind == TokenKind::Keyword && tok.text == "print" {
            findings.push(Finding {
                rule_id: "R001",
                rule_name: "PY2_PRINT_STATEMENT",
                category: labels::COMPATIBILITY_ISSUE,
                certainty: Certainty::Definite,
                line: tok.line,
                message: "Python 2 print statement".to_string(),
            });
        }
    }
}

/// R002: a Python 2 `exec` statement, i.e. the `exec` keyword directly
/// followed by a string literal.
fn py2_exec_statement(ts: &TokenStream, findings: &mut Vec<Finding>) {
    for (i, tok) in ts.iter().enumerate() {
        if tok.kind != TokenKind::Keyword || tok.text != "exec" {
            continue;
        }
        if matches!(next_significant(ts, i), Some(t) if t.kind == TokenKind::String) {
            findings.push(Finding {
                rule_id: "R002",
                rule_name: "PY2_EXEC_STATEMENT",
                category: labels::COMPATIBILITY_ISSUE,
                certainty: Certainty::Definite,
                line: tok.line,
                message: "Python 2 exec statement".to_string(),
            });
        }
    }
}

/// R003: `return` as a direct statement of a loop body, which usually cuts
/// the loop short on the first iteration. Only indentation-level loops
/// count; `for` inside brackets is a comprehension.
fn return_in_loop_body(ts: &TokenStream, findings: &mut Vec<Finding>) {
    let mut depth = 0usize;
    let mut bracket = 0usize;
    let mut loops: Vec<usize> = Vec::new();
    for tok in ts.iter() {
        match tok.kind {
            TokenKind::Indent => depth += 1,
            TokenKind::Dedent => {
                depth = depth.saturating_sub(1);
                while matches!(loops.last(), Some(&d) if d >= depth) {
                    loops.pop();
                }
            }
            TokenKind::Punctuation => match tok.text.as_str() {
                "(" | "[" | "{" => bracket += 1,
                ")" | "]" | "}" => bracket = bracket.saturating_sub(1),
                _ => {}
            },
            TokenKind::Keyword if bracket == 0 => match tok.text.as_str() {
                "for" | "while" => loops.push(depth),
                "return" => {
                    if matches!(loops.last(), Some(&d) if depth == d + 1) {
                        findings.push(Finding {
                            rule_id: "R003",
                            rule_name: "RETURN_IN_LOOP_BODY",
                            category: labels::PERFORMANCE_ISSUE,
                            certainty: Certainty::Advisory,
                            line: tok.line,
                            message: "return inside loop body".to_string(),
                        });
                    }
                }
                _ => {}
            },
            _ => {}
        }
    }
}

/// R004: `open()` called with a string-literal path, which fails at runtime
/// whenever the hardcoded file is absent.
fn open_literal_path(ts: &TokenStream, findings: &mut Vec<Finding>) {
    for (i, tok) in ts.iter().enumerate() {
        if tok.kind != TokenKind::Identifier || tok.text != "open" {
            continue;
        }
        let paren = ts
            .iter()
            .enumerate()
            .skip(i + 1)
            .find(|(_, t)| t.kind != TokenKind::Comment);
        let Some((j, paren_tok)) = paren else { continue };
        if paren_tok.kind != TokenKind::Punctuation || paren_tok.text != "(" {
            continue;
        }
        if matches!(next_significant(ts, j), Some(t) if t.kind == TokenKind::String) {
            findings.push(Finding {
                rule_id: "R004",
                rule_name: "OPEN_LITERAL_PATH",
                category: labels::RUNTIME_ERROR,
                certainty: Certainty::Advisory,
                line: tok.line,
                message: "open() with a hardcoded path".to_string(),
            });
        }
    }
}

/// R005: structural breakage visible to the lexer. Three causes, each its
/// own finding: delimiters that do not balance out by end of input, a
/// dedent that matches no open indentation level, and an indentation
/// increase after a line that does not end in a colon.
fn indent_or_delimiter_imbalance(ts: &TokenStream, findings: &mut Vec<Finding>) {
    let push = |findings: &mut Vec<Finding>, line: u32, message: &str| {
        findings.push(Finding {
            rule_id: "R005",
            rule_name: "INDENT_OR_DELIMITER_IMBALANCE",
            category: labels::SYNTAX_ERROR,
            certainty: Certainty::Definite,
            line,
            message: message.to_string(),
        });
    };

    let mut paren = 0i64;
    let mut square = 0i64;
    let mut curly = 0i64;
    let mut last_sig: Option<&Token> = None;
    for tok in ts.iter() {
        match tok.kind {
            TokenKind::Punctuation => match tok.text.as_str() {
                "(" => paren += 1,
                ")" => paren -= 1,
                "[" => square += 1,
                "]" => square -= 1,
                "{" => curly += 1,
                "}" => curly -= 1,
                _ => {}
            },
            TokenKind::Indent => {
                let after_colon = matches!(
                    last_sig,
                    Some(t) if t.kind == TokenKind::Punctuation && t.text == ":"
                );
                if !after_colon {
                    push(findings, tok.line, "unexpected indentation");
                }
            }
            _ => {}
        }
        if !matches!(
            tok.kind,
            TokenKind::Newline | TokenKind::Indent | TokenKind::Dedent | TokenKind::Comment
        ) {
            last_sig = Some(tok);
        }
    }
    if paren != 0 || square != 0 || curly != 0 {
        let line = ts.tokens.last().map_or(1, |t| t.line);
        push(findings, line, "unbalanced delimiters");
    }
    if let Some(line) = ts.inconsistent_dedent {
        push(findings, line, "inconsistent dedent");
    }
}

/// R006: `eval(...)` or `exec(...)` with `input` somewhere in the argument
/// list, i.e. evaluating whatever the user typed.
fn eval_or_exec_call_on_input(ts: &TokenStream, findings: &mut Vec<Finding>) {
    for (i, tok) in ts.iter().enumerate() {
        if tok.kind != TokenKind::Identifier || (tok.text != "eval" && tok.text != "exec") {
            continue;
        }
        let paren = ts
            .iter()
            .enumerate()
            .skip(i + 1)
            .find(|(_, t)| t.kind != TokenKind::Comment);
        let Some((j, paren_tok)) = paren else { continue };
        if paren_tok.kind != TokenKind::Punctuation || paren_tok.text != "(" {
            continue;
        }
        let mut depth = 1i64;
        let mut saw_input = false;
        for t in &ts[j + 1..] {
            match t.kind {
                TokenKind::Punctuation => match t.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                },
                TokenKind::Identifier if t.text == "input" => saw_input = true,
                _ => {}
            }
        }
        if saw_input {
            findings.push(Finding {
                rule_id: "R006",
                rule_name: "EVAL_OR_EXEC_CALL_ON_INPUT",
                category: labels::SECURITY_ISSUE,
                certainty: Certainty::Advisory,
                line: tok.line,
                message: format!("{}() on user input", tok.text),
            });
        }
    }
}
