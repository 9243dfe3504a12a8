//! Label-targeted mutation operators for synthetic corpus generation.
//!
//! Each operator takes working code and plants one specific defect, either
//! by rewriting something already present (converting a `print` call to the
//! Python 2 statement form, dropping a block colon) or by appending a short
//! fragment that exhibits the defect. Appended fragments reuse fixed
//! identifiers so each defect class has a stable token signature; only
//! function-name suffixes and numeric literals vary with the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::labels;
use crate::lexer::{tokenize, Token, TokenKind, TokenStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    Py2PrintStatement,
    Py2ExecStatement,
    QuadraticStringConcat,
    ReturnInsideLoopBody,
    OpenNonexistentFile,
    IndexPastEnd,
    DropTrailingColon,
    UnbalanceDelimiter,
    OffByOneRange,
    EvalOnInput,
    HardcodedCredential,
}

pub const ALL: &[Mutation] = &[
    Mutation::Py2PrintStatement,
    Mutation::Py2ExecStatement,
    Mutation::QuadraticStringConcat,
    Mutation::ReturnInsideLoopBody,
    Mutation::OpenNonexistentFile,
    Mutation::IndexPastEnd,
    Mutation::DropTrailingColon,
    Mutation::UnbalanceDelimiter,
    Mutation::OffByOneRange,
    Mutation::EvalOnInput,
    Mutation::HardcodedCredential,
];

impl Mutation {
    pub fn name(self) -> &'static str {
        match self {
            Mutation::Py2PrintStatement => "Py2PrintStatement",
            Mutation::Py2ExecStatement => "Py2ExecStatement",
            Mutation::QuadraticStringConcat => "QuadraticStringConcat",
            Mutation::ReturnInsideLoopBody => "ReturnInsideLoopBody",
            Mutation::OpenNonexistentFile => "OpenNonexistentFile",
            Mutation::IndexPastEnd => "IndexPastEnd",
            Mutation::DropTrailingColon => "DropTrailingColon",
            Mutation::UnbalanceDelimiter => "UnbalanceDelimiter",
            Mutation::OffByOneRange => "OffByOneRange",
            Mutation::EvalOnInput => "EvalOnInput",
            Mutation::HardcodedCredential => "HardcodedCredential",
        }
    }

    pub fn target_label(self) -> &'static str {
        match self {
            Mutation::Py2PrintStatement | Mutation::Py2ExecStatement => {
                labels::COMPATIBILITY_ISSUE
            }
            Mutation::QuadraticStringConcat | Mutation::ReturnInsideLoopBody => {
                labels::PERFORMANCE_ISSUE
            }
            Mutation::OpenNonexistentFile | Mutation::IndexPastEnd => labels::RUNTIME_ERROR,
            Mutation::DropTrailingColon | Mutation::UnbalanceDelimiter => labels::SYNTAX_ERROR,
            Mutation::OffByOneRange => labels::LOGIC_ERROR,
            Mutation::EvalOnInput | Mutation::HardcodedCredential => labels::SECURITY_ISSUE,
        }
    }

    /// Operators producing `label`, in a fixed order. Empty for labels no
    /// operator targets (including correct code, which is never mutated).
    pub fn operators_for(label: &str) -> &'static [Mutation] {
        match label {
            labels::COMPATIBILITY_ISSUE => {
                &[Mutation::Py2PrintStatement, Mutation::Py2ExecStatement]
            }
            labels::PERFORMANCE_ISSUE => {
                &[Mutation::QuadraticStringConcat, Mutation::ReturnInsideLoopBody]
            }
            labels::RUNTIME_ERROR => &[Mutation::OpenNonexistentFile, Mutation::IndexPastEnd],
            labels::SYNTAX_ERROR => {
                &[Mutation::DropTrailingColon, Mutation::UnbalanceDelimiter]
            }
            labels::LOGIC_ERROR => &[Mutation::OffByOneRange],
            labels::SECURITY_ISSUE => &[Mutation::EvalOnInput, Mutation::HardcodedCredential],
            _ => &[],
        }
    }

    /// Whether the operator can mutate code with this token stream. Most
    /// operators append and always apply; the rewriting ones need their
    /// target construct to exist.
    pub fn applies(self, stream: &TokenStream) -> bool {
        match self {
            Mutation::Py2PrintStatement => stream
                .iter()
                .any(|t| t.kind == TokenKind::Identifier && t.text == "print"),
            Mutation::DropTrailingColon => colon_before_indent(stream).is_some(),
            _ => true,
        }
    }

    /// Produces the mutated code. Deterministic in (`code`, `seed`); the
    /// result always differs textually from the input.
    pub fn apply(self, code: &str, seed: u64) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n: u32 = rng.random_range(100..1000);
        match self {
            Mutation::Py2PrintStatement => strip_print_parens(code),
            Mutation::Py2ExecStatement => append_block(
                code,
                &format!("exec 'print \"pass {n} complete\"'\n"),
            ),
            Mutation::QuadraticStringConcat => append_block(
                code,
                &format!(
                    "def build_report_{n}(entries_{n}):\n    \
                     report_{n} = ''\n    \
                     for entry_{n} in entries_{n}:\n        \
                     report_{n} = report_{n} + str(entry_{n}) + ', '\n    \
                     return ''.join({m} * [report_{n}])\n",
                    m = rng.random_range(2..30) * 1000,
                ),
            ),
            Mutation::ReturnInsideLoopBody => append_block(
                code,
                &format!(
                    "def scan_items_{n}(items_{n}):\n    \
                     for idx_{n} in range(1, len(items_{n})):\n        \
                     probe_{n} = items_{n}[idx_{n}]\n        \
                     spot_{n} = idx_{n} - 1\n        \
                     while spot_{n} >= 0 and probe_{n} < items_{n}[spot_{n}]:\n            \
                     items_{n}[spot_{n} + 1] = items_{n}[spot_{n}]\n            \
                     spot_{n} -= 1\n        \
                     items_{n}[spot_{n} + 1] = probe_{n}\n        \
                     return items_{n}\n",
                ),
            ),
            Mutation::OpenNonexistentFile => {
                if rng.random_bool(0.5) {
                    append_block(
                        code,
                        &format!(
                            "def load_settings_{n}(path):\n    \
                             with open(path, 'r') as handle:\n        \
                             return handle.read()\n\
                             print(load_settings_{n}('missing_{n}.txt'))\n",
                        ),
                    )
                } else {
                    append_block(
                        code,
                        &format!(
                            "contents = open('records_{n}.txt').read()\nprint(contents)\n"
                        ),
                    )
                }
            }
            Mutation::IndexPastEnd => append_block(
                code,
                &format!(
                    "samples = [{}, {}, {}]\nprint(samples[{}])\n",
                    rng.random_range(1..50),
                    rng.random_range(1..50),
                    rng.random_range(1..50),
                    rng.random_range(3..9),
                ),
            ),
            Mutation::DropTrailingColon => drop_block_colon(code),
            Mutation::UnbalanceDelimiter => {
                if rng.random_bool(0.5) {
                    append_block(code, &format!("pending = enqueue_request(backlog, {n}\n"))
                } else {
                    append_block(code, &format!("summary = merge_results(totals, {n}))\n"))
                }
            }
            Mutation::OffByOneRange => append_block(
                code,
                &format!(
                    "def average_window_{n}(readings, width):\n    \
                     total = 0\n    \
                     for pos in range(width + 1):\n        \
                     total = total + readings[pos]\n    \
                     return total / width\n",
                ),
            ),
            Mutation::EvalOnInput => append_block(
                code,
                &format!("formula = eval(input('formula {n}: '))\nprint(formula)\n"),
            ),
            Mutation::HardcodedCredential => append_block(
                code,
                &format!(
                    "api_token = 'tok-{n}-secret'\n\
                     admin_password = 'pass{n}word'\n\
                     print(api_token, admin_password)\n",
                ),
            ),
        }
    }
}

/// Appends `block` as fresh top-level lines, inserting a newline first if
/// the code does not already end with one.
fn append_block(code: &str, block: &str) -> String {
    let mut out = code.to_string();
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out.push_str(block);
    out
}

/// Index of the first `: <newline> <indent>` colon in the stream, skipping
/// comments, i.e. a block header whose body actually follows.
fn colon_before_indent(stream: &TokenStream) -> Option<usize> {
    let significant = |t: &Token| t.kind != TokenKind::Comment;
    for (i, tok) in stream.iter().enumerate() {
        if tok.kind != TokenKind::Punctuation || tok.text != ":" {
            continue;
        }
        let mut rest = stream[i + 1..].iter().filter(|t| significant(t));
        if matches!(rest.next(), Some(t) if t.kind == TokenKind::Newline)
            && matches!(rest.next(), Some(t) if t.kind == TokenKind::Indent)
        {
            return Some(i);
        }
    }
    None
}

/// Rebuilds the source from its tokens, dropping the text of the tokens in
/// `skip` (their leading whitespace is kept) and substituting `replace`.
fn rebuild_without(stream: &TokenStream, skip: &[usize], replace: &[(usize, &str)]) -> String {
    let mut out = String::new();
    for (i, tok) in stream.iter().enumerate() {
        out.push_str(&tok.leading_ws);
        if let Some((_, sub)) = replace.iter().find(|(j, _)| *j == i) {
            out.push_str(sub);
        } else if !skip.contains(&i) {
            out.push_str(&tok.text);
        }
    }
    out.push_str(&stream.trailing_ws);
    out
}

/// Converts the first `print(...)` call to the Python 2 statement form by
/// deleting the argument parentheses.
fn strip_print_parens(code: &str) -> String {
    let stream = tokenize(code);
    let print_at = stream
        .iter()
        .position(|t| t.kind == TokenKind::Identifier && t.text == "print")
        .expect("checked by applies");
    let open = stream
        .iter()
        .enumerate()
        .skip(print_at + 1)
        .find(|(_, t)| t.kind != TokenKind::Comment)
        .map(|(i, _)| i)
        .expect("a print identifier is always followed by its parenthesis");
    let mut depth = 0i64;
    let mut close = open;
    for (i, tok) in stream.iter().enumerate().skip(open) {
        if tok.kind == TokenKind::Punctuation {
            match tok.text.as_str() {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    depth -= 1;
                    if depth == 0 {
                        close = i;
                        break;
                    }
                }
                _ => {}
            }
        }
    }
    rebuild_without(&stream, &[close], &[(open, " ")])
}

/// Deletes the colon from the first block header that has an indented body.
fn drop_block_colon(code: &str) -> String {
    let stream = tokenize(code);
    let colon = colon_before_indent(&stream).expect("checked by applies");
    rebuild_without(&stream, &[colon], &[])
}
