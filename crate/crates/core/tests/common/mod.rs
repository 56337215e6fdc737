//! Brute-force oracles: plain string rewriting and subword scans, sharing no
//! code with the library beyond rendering its tables to strings.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use shiftaut::LanguageTable;

pub const FIBONACCI: &[(char, &str)] = &[('0', "01"), ('1', "0")];
pub const THUE_MORSE: &[(char, &str)] = &[('0', "01"), ('1', "10")];
pub const ACB: &[(char, &str)] = &[('a', "acb"), ('b', "aba"), ('c', "aca")];

pub fn substitute(rules: &[(char, &str)], w: &str) -> String {
    let map: HashMap<char, &str> = rules.iter().copied().collect();
    w.chars().map(|c| map[&c]).collect()
}

/// Iterates from `start` until the word has at least `len` letters.
pub fn iterate_until(rules: &[(char, &str)], start: char, len: usize) -> String {
    let mut w = start.to_string();
    while w.len() < len {
        w = substitute(rules, &w);
    }
    w
}

/// Every factor of a language is a factor of some iterate of every letter, so
/// the subwords of one letter's long iterate give the whole language for a
/// primitive substitution once the iterate is long enough.
pub fn language(rules: &[(char, &str)], n_max: usize, len: usize) -> Vec<BTreeSet<String>> {
    let w = iterate_until(rules, rules[0].0, len);
    (1..=n_max).map(|n| subwords(&w, n)).collect()
}

pub fn subwords(text: &str, n: usize) -> BTreeSet<String> {
    let bytes = text.as_bytes();
    bytes
        .windows(n)
        .map(|w| String::from_utf8(w.to_vec()).unwrap())
        .collect()
}

/// Characteristic word `c(n) = ⌊(n+1)α⌋ − ⌊nα⌋`, `n ≥ 1`.
pub fn mechanical(alpha: f64, len: usize) -> String {
    (1..=len)
        .map(|n| {
            if ((n + 1) as f64 * alpha).floor() > (n as f64 * alpha).floor() {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Thue–Morse by binary digit-sum parity.
pub fn thue_morse_word(len: usize) -> String {
    (0..len as u64)
        .map(|i| if i.count_ones() % 2 == 0 { '0' } else { '1' })
        .collect()
}

/// Thue–Morse of length `2^e` with `0 ↦ 1001`, `1 ↦ 1101`.
pub fn morse_mirror(e: u32) -> String {
    thue_morse_word(1 << e)
        .chars()
        .map(|c| if c == '0' { "1001" } else { "1101" })
        .collect()
}

/// The mirror rule on a 4-letter window.
pub fn mirror_rule(w: &str) -> char {
    match w {
        "1001" => '1',
        "1101" => '0',
        _ => w.as_bytes()[1] as char,
    }
}

/// Applies a window rule along a word.
pub fn slide(w: &str, window: usize, rule: impl Fn(&str) -> char) -> String {
    (0..=w.len() - window)
        .map(|i| rule(&w[i..i + window]))
        .collect()
}

/// A library table's factor sets as strings.
pub fn table_words(table: &LanguageTable, n: usize) -> BTreeSet<String> {
    table.factors(n).iter().map(|w| table.render(w)).collect()
}

/// Left extension letters of `w` within a length-`|w|+1` factor set.
pub fn left_extensions(next: &BTreeSet<String>, w: &str, alphabet: &str) -> String {
    alphabet
        .chars()
        .filter(|a| next.contains(&format!("{a}{w}")))
        .collect()
}

/// Depth-`depth` prefixes of left-special factors of length `horizon`, with
/// the extension letters of the longest left-special word below each.
pub fn surviving_chains(
    sets: &[BTreeSet<String>],
    depth: usize,
    horizon: usize,
    alphabet: &str,
) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for w in &sets[horizon - 1] {
        let ext = left_extensions(&sets[horizon], w, alphabet);
        if ext.len() >= 2 {
            let prefix = w[..depth].to_string();
            match out.iter_mut().find(|(p, _)| *p == prefix) {
                Some(_) => {}
                None => out.push((prefix, ext)),
            }
        }
    }
    out.sort();
    out
}
