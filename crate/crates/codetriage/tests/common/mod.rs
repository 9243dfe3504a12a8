//! Shared test support: a deterministic pool of small, clean Python
//! snippets used to drive corpus generation in the integration tests.
//!
//! The pool mixes import-centric scripts, arithmetic helpers, loops,
//! classes, and I/O-free utilities so every mutation operator finds
//! material to work with, and roughly six in ten snippets call
//! `print(...)`. Snippet text varies only in embedded constants and
//! name suffixes, so any fixed `count` yields the same pool.

#![allow(dead_code)]

use std::fs;
use std::path::Path;

use codetriage::corpus::{self, CodeSnippet, Dataset, LabelSet};

/// Builds `count` distinct clean snippets as `(file name, code)` pairs.
pub fn clean_pool(count: usize) -> Vec<(String, String)> {
    (0..count)
        .map(|i| (format!("clean_{i:04}.py"), snippet(i)))
        .collect()
}

/// Writes a pool to `dir` as individual `.py` files.
pub fn write_pool(dir: &Path, pool: &[(String, String)]) {
    for (name, code) in pool {
        fs::write(dir.join(name), code).unwrap();
    }
}

/// Clean pool as ready-made labeled snippets.
pub fn pool_snippets(count: usize) -> Vec<CodeSnippet> {
    clean_pool(count)
        .into_iter()
        .map(|(_, code)| CodeSnippet::new(code, corpus::labels::CORRECT_CODE))
        .collect()
}

/// Generates a balanced dataset from a synthesized pool.
pub fn pool_dataset(pool_size: usize, per_class: usize, seed: u64) -> Dataset {
    let labelset: LabelSet = corpus::default_labelset();
    corpus::generate_corpus(&pool_snippets(pool_size), per_class, &labelset, seed).unwrap()
}

fn snippet(i: usize) -> String {
    let v = i / FAMILIES;
    let a = 2 + 3 * v;
    let b = 5 + 7 * v;
    build(i % FAMILIES, v, a, b)
}

const FAMILIES: usize = 42;

fn build(family: usize, v: usize, a: usize, b: usize) -> String {
    match family {
        0 => format!(
            "import math\nimport sys\n\nvalue = math.sqrt({a})\nprint(value)\n"
        ),
        1 => format!(
            "import os.path\n\nbase = os.path.basename('run_{v}/result.txt')\nprint(base)\n"
        ),
        2 => format!(
            "from collections import OrderedDict\n\nroster = OrderedDict()\nroster['first_{v}'] = {a}\nprint(len(roster))\n"
        ),
        3 => format!(
            "def circle_area_{v}(radius):\n    return 3.14 * radius * radius\n\nprint(circle_area_{v}({a}))\n"
        ),
        4 => format!(
            "def rect_perimeter_{v}(length, height):\n    return 2 * length + 2 * height\n\nvalue = rect_perimeter_{v}({a}, {b})\n"
        ),
        5 => format!(
            "def sum_range_{v}(limit):\n    acc = 0\n    for k in range(limit):\n        acc = acc + k\n    return acc\n\nprint(sum_range_{v}({a}))\n"
        ),
        6 => format!(
            "def squares_{v}(limit):\n    out = []\n    for k in range(limit):\n        out.append(k * k)\n    return out\n"
        ),
        7 => format!(
            "config = {{'retries': {a}, 'delay': {b}}}\nprint(config['retries'])\n"
        ),
        8 => format!(
            "def greet_{v}(name):\n    return 'Hello, ' + name + '!'\n\nprint(greet_{v}('World'))\n"
        ),
        9 => format!(
            "def clamp_{v}(value, low, high):\n    if value < low:\n        return low\n    if value > high:\n        return high\n    return value\n"
        ),
        10 => format!(
            "def largest_{v}(values):\n    best = values[0]\n    for item_value in values[1:]:\n        if item_value > best:\n            best = item_value\n    return best\n\nprint(largest_{v}([{a}, {b}, 1]))\n"
        ),
        11 => format!(
            "class Counter_{v}:\n    def __init__(self):\n        self.count = 0\n\n    def bump(self):\n        self.count = self.count + 1\n        return self.count\n"
        ),
        12 => format!(
            "def safe_div_{v}(top, bottom):\n    try:\n        return top / bottom\n    except ZeroDivisionError:\n        return 0\n\nprint(safe_div_{v}({a}, {b}))\n"
        ),
        13 => format!(
            "pairs = [({a}, 'low'), ({b}, 'high')]\npairs.sort(key=lambda pair: pair[0])\nprint(pairs)\n"
        ),
        14 => format!(
            "left, right = {a}, {b}\nleft, right = right, left\nprint(left, right)\n"
        ),
        15 => format!(
            "def parity_{v}(value):\n    if value % 2 == 0:\n        return 'even'\n    return 'odd'\n\nprint(parity_{v}({a}))\n"
        ),
        16 => format!(
            "def describe_{v}():\n    \"\"\"Return a short label.\"\"\"\n    return 'variant {v}'\n"
        ),
        17 => format!(
            "# configuration values\nretry_limit = {a}  # attempts before giving up\nprint(retry_limit)\n"
        ),
        18 => format!(
            "def times_table_{v}(base):\n    return [base * k for k in range(1, 11)]\n\nprint(times_table_{v}({a}))\n"
        ),
        19 => format!(
            "def shout_{v}(text):\n    return text.upper() + '!'\n\nprint(shout_{v}('hey'))\n"
        ),
        20 => format!(
            "def first_word_{v}(text):\n    return text.strip().split(' ')[0]\n"
        ),
        21 => format!(
            "def spread_{v}(values):\n    return max(values) - min(values)\n\nprint(spread_{v}([{a}, {b}]))\n"
        ),
        22 => format!(
            "def label_lines_{v}(lines):\n    \"\"\"Number each line.\"\"\"\n    for num, line in enumerate(lines):\n        print(line + ': ' + str(num))\n"
        ),
        23 => format!(
            "def dot_product_{v}(xs, ys):\n    acc = 0\n    for x, y in zip(xs, ys):\n        acc = acc + x * y\n    return acc\n\nprint(dot_product_{v}([1, {a}], [2, {b}]))\n"
        ),
        24 => format!(
            "def in_bounds_{v}(x, y, size):\n    return 0 <= x < size and 0 <= y < size\n"
        ),
        25 => format!(
            "UNIT_PRICE = {a}\n\ndef line_cost_{v}(qty):\n    return UNIT_PRICE * qty\n\nprint(line_cost_{v}({b}))\n"
        ),
        26 => format!(
            "def fact_{v}(n):\n    if n <= 1:\n        return 1\n    return n * fact_{v}(n - 1)\n\nprint(fact_{v}({a}))\n"
        ),
        27 => format!(
            "def fib_{v}(n):\n    first, second = 0, 1\n    for _ in range(n):\n        first, second = second, first + second\n    return first\n"
        ),
        28 => format!(
            "tags = {{'alpha', 'beta'}}\ntags.add('gamma_{v}')\nprint(sorted(tags))\n"
        ),
        29 => format!(
            "def invert_{v}(mapping):\n    out = {{}}\n    for key in mapping:\n        out[mapping[key]] = key\n    return out\n"
        ),
        30 => format!(
            "def as_int_{v}(value):\n    if isinstance(value, int):\n        return value\n    return int(value)\n\nprint(as_int_{v}('{a}'))\n"
        ),
        31 => format!("print('run', {a}, 'of', {b})\n"),
        32 => format!(
            "import json\n\npayload = json.dumps({{'id': {a}}})\nprint(payload)\n"
        ),
        33 => format!(
            "import random\n\nrandom.seed({a})\nprint(random.randint(1, 6))\n"
        ),
        34 => format!(
            "def sign_{v}(value):\n    return 1 if value > 0 else -1\n"
        ),
        35 => format!(
            "names = ['ada_{v}', 'lin', 'rex']\nprint(sorted(names))\n"
        ),
        36 => format!(
            "def grade_{v}(score):\n    if score > 90:\n        return 'A'\n    elif score > 75:\n        return 'B'\n    else:\n        return 'C'\n\nprint(grade_{v}({a}))\n"
        ),
        37 => format!(
            "banner = '=' * {a}\npadding = {b} * [0]\nprint(banner, len(padding))\n"
        ),
        38 => format!(
            "def identity_{v}(value):\n    return value\n"
        ),
        39 => format!(
            "from math import pi\n\ndef circumference_{v}(radius):\n    return 2 * pi * radius\n\nprint(circumference_{v}({a}))\n"
        ),
        40 => format!(
            "import string\n\nletters = string.ascii_lowercase[:{n}]\nprint(letters)\n",
            n = 3 + v % 20,
        ),
        41 => format!(
            "def nth_odd_{v}(n):\n    return 2 * n - 1\n\nprint(nth_odd_{v}({a}))\n"
        ),
        _ => unreachable!("family index out of range"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_is_distinct_and_deterministic() {
        let pool = clean_pool(600);
        assert_eq!(pool.len(), 600);
        let mut codes: Vec<&str> = pool.iter().map(|(_, c)| c.as_str()).collect();
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), 600);
        assert_eq!(clean_pool(600), pool);
    }

    #[test]
    fn pool_snippets_are_clean_under_lint() {
        for (name, code) in clean_pool(84) {
            let findings = codetriage::lint::run_rules(&codetriage::lexer::tokenize(&code));
            assert!(findings.is_empty(), "{name} has findings: {findings:?}");
        }
    }

    #[test]
    fn most_snippets_call_print() {
        let pool = clean_pool(420);
        let with_print = pool.iter().filter(|(_, c)| c.contains("print(")).count();
        assert!(with_print * 10 >= pool.len() * 5, "{with_print}/420");
    }
}
