//! Sliding block codes over a factor language.
//!
//! A code with memory `m` and anticipation `a` reads windows of `m + 1 + a`
//! letters. Its rule is a total map on the window-length factors of one
//! [`LanguageTable`] and nothing else, so two codes induce the same map on the
//! shift exactly when their rules agree on every factor of the common padded
//! window.

use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::language::{build_language_from_sequence, LanguageTable};
use crate::substitution::catalog::thue_morse;
use crate::word::{Alphabet, Letter, Word};

/// Table depth used by [`morse_mirror_system`].
pub const MORSE_MIRROR_MAX_LENGTH: usize = 64;

#[derive(Clone, Debug)]
pub struct SlidingBlockCode {
    memory: usize,
    anticipation: usize,
    /// `rule[i]` is the output on `table.factors(window)[i]`.
    rule: Vec<Letter>,
    table: Arc<LanguageTable>,
}

impl PartialEq for SlidingBlockCode {
    fn eq(&self, other: &Self) -> bool {
        self.memory == other.memory
            && self.anticipation == other.anticipation
            && self.rule == other.rule
            && same_table(&self.table, &other.table)
    }
}

impl Eq for SlidingBlockCode {}

fn same_table(a: &Arc<LanguageTable>, b: &LanguageTable) -> bool {
    std::ptr::eq(Arc::as_ptr(a), b) || **a == *b
}

fn shallow(needed: usize, table: &LanguageTable) -> Error {
    Error::TableTooShallow {
        needed,
        available: table.max_length(),
    }
}

impl SlidingBlockCode {
    /// Builds a code from a rule table aligned with `table.factors(window)`.
    pub fn from_rule(
        table: &Arc<LanguageTable>,
        memory: usize,
        anticipation: usize,
        rule: Vec<Letter>,
    ) -> Result<Self> {
        let window = memory + 1 + anticipation;
        if window > table.max_length() {
            return Err(shallow(window, table));
        }
        if rule.len() != table.factors(window).len() {
            return Err(Error::InvalidArgument(format!(
                "rule has {} entries, the window has {} factors",
                rule.len(),
                table.factors(window).len()
            )));
        }
        table.alphabet().check(&rule)?;
        Ok(SlidingBlockCode {
            memory,
            anticipation,
            rule,
            table: Arc::clone(table),
        })
    }

    /// Builds a code by evaluating `f` on every window-length factor.
    pub fn from_fn(
        table: &Arc<LanguageTable>,
        memory: usize,
        anticipation: usize,
        mut f: impl FnMut(&[Letter]) -> Letter,
    ) -> Result<Self> {
        let window = memory + 1 + anticipation;
        if window > table.max_length() {
            return Err(shallow(window, table));
        }
        let rule = table.factors(window).iter().map(|w| f(w)).collect();
        Self::from_rule(table, memory, anticipation, rule)
    }

    /// The radius-0 code applying a letter map.
    pub fn letter_map(table: &Arc<LanguageTable>, map: &[Letter]) -> Result<Self> {
        if map.len() != table.alphabet().len() {
            return Err(Error::InvalidArgument(
                "letter map size differs from the alphabet".into(),
            ));
        }
        Self::from_fn(table, 0, 0, |w| map[w[0] as usize])
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    pub fn window(&self) -> usize {
        self.memory + 1 + self.anticipation
    }

    pub fn rule(&self) -> &[Letter] {
        &self.rule
    }

    pub fn table(&self) -> &Arc<LanguageTable> {
        &self.table
    }

    /// Output on one window, or `None` outside the domain.
    pub fn rule_for(&self, window: &[Letter]) -> Option<Letter> {
        if window.len() != self.window() {
            return None;
        }
        self.table.index_of(window).map(|i| self.rule[i])
    }

    /// Image of a finite word: letter `i` of the result is the rule applied to
    /// `w[i .. i + window]`.
    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        let window = self.window();
        if w.len() < window {
            return Err(Error::InvalidArgument(format!(
                "word of length {} is shorter than the window {window}",
                w.len()
            )));
        }
        w.windows(window)
            .map(|win| {
                self.rule_for(win)
                    .ok_or_else(|| Error::WindowNotInDomain(self.table.render(win)))
            })
            .collect()
    }

    /// Whether the output ignores the last window letter, i.e. the same map
    /// has a code with one less anticipation.
    pub fn ignores_last_letter(&self) -> bool {
        if self.anticipation == 0 {
            return false;
        }
        let window = self.window();
        let factors = self.table.factors(window);
        let mut seen: std::collections::HashMap<&[Letter], Letter> = Default::default();
        factors
            .iter()
            .zip(&self.rule)
            .all(|(w, &out)| *seen.entry(&w[..window - 1]).or_insert(out) == out)
    }

    /// `{memory, anticipation, rule: [[window_word, output_letter], …]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let alphabet = self.table.alphabet();
        let rule: Vec<serde_json::Value> = self
            .table
            .factors(self.window())
            .iter()
            .zip(&self.rule)
            .map(|(w, &out)| json!([alphabet.render(w), alphabet.symbol(out).to_string()]))
            .collect();
        json!({
            "memory": self.memory,
            "anticipation": self.anticipation,
            "rule": rule,
        })
    }

    /// Reads the JSON form against `table`; the rule must cover exactly the
    /// window-length factors.
    pub fn from_json(table: &Arc<LanguageTable>, value: &serde_json::Value) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Doc {
            memory: usize,
            anticipation: usize,
            rule: Vec<(String, String)>,
        }
        let doc: Doc = serde_json::from_value(value.clone())?;
        let window = doc.memory + 1 + doc.anticipation;
        if window > table.max_length() {
            return Err(shallow(window, table));
        }
        let alphabet = table.alphabet();
        let mut rule: Vec<Option<Letter>> = vec![None; table.factors(window).len()];
        for (w, out) in &doc.rule {
            let word = alphabet.parse(w)?;
            let idx = table
                .index_of(&word)
                .filter(|_| word.len() == window)
                .ok_or_else(|| Error::WindowNotInDomain(w.clone()))?;
            let letter = single_letter(alphabet, out)?;
            if rule[idx].replace(letter).is_some() {
                return Err(Error::Json(format!("window {w:?} listed twice")));
            }
        }
        let rule = rule
            .into_iter()
            .enumerate()
            .map(|(i, out)| {
                out.ok_or_else(|| {
                    Error::Json(format!(
                        "no output for window {:?}",
                        table.render(&table.factors(window)[i])
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rule(table, doc.memory, doc.anticipation, rule)
    }
}

fn single_letter(alphabet: &Alphabet, s: &str) -> Result<Letter> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => alphabet.letter(c),
        _ => Err(Error::Json(format!("output {s:?} is not a single symbol"))),
    }
}

/// σⁿ: memory 0, anticipation `n`, rule `w ↦ w[n]`.
pub fn shift_power(n: usize, table: &Arc<LanguageTable>) -> Result<SlidingBlockCode> {
    SlidingBlockCode::from_fn(table, 0, n, |w| w[n])
}

/// `outer ∘ inner`.
pub fn compose(outer: &SlidingBlockCode, inner: &SlidingBlockCode) -> Result<SlidingBlockCode> {
    if !same_table(&outer.table, &inner.table) {
        return Err(Error::TableMismatch);
    }
    let table = &inner.table;
    let memory = outer.memory + inner.memory;
    let anticipation = outer.anticipation + inner.anticipation;
    let window = memory + 1 + anticipation;
    if window > table.max_length() {
        return Err(shallow(window, table));
    }
    let rule = table
        .factors(window)
        .iter()
        .map(|w| {
            let mid = inner.apply(w)?;
            outer
                .rule_for(&mid)
                .ok_or_else(|| Error::WindowNotInDomain(table.render(&mid)))
        })
        .collect::<Result<Vec<_>>>()?;
    SlidingBlockCode::from_rule(table, memory, anticipation, rule)
}

/// `codeᵏ` for `k ≥ 1`.
pub fn power(code: &SlidingBlockCode, k: usize) -> Result<SlidingBlockCode> {
    if k == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let mut acc = code.clone();
    for _ in 1..k {
        acc = compose(code, &acc)?;
    }
    Ok(acc)
}

/// Exact equality of the induced maps on the shift of `table`.
pub fn equals(c1: &SlidingBlockCode, c2: &SlidingBlockCode, table: &LanguageTable) -> Result<bool> {
    if !same_table(&c1.table, table) || !same_table(&c2.table, table) {
        return Err(Error::TableMismatch);
    }
    let memory = c1.memory.max(c2.memory);
    let anticipation = c1.anticipation.max(c2.anticipation);
    let window = memory + 1 + anticipation;
    if window > table.max_length() {
        return Err(shallow(window, table));
    }
    let (o1, o2) = (memory - c1.memory, memory - c2.memory);
    for w in table.factors(window) {
        let a = c1.rule_for(&w[o1..o1 + c1.window()]);
        let b = c2.rule_for(&w[o2..o2 + c2.window()]);
        match (a, b) {
            (Some(a), Some(b)) if a == b => {}
            (Some(_), Some(_)) => return Ok(false),
            _ => unreachable!("subwords of factors are factors"),
        }
    }
    Ok(true)
}

/// Outcome of a depth-bounded endomorphism check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndomorphismReport {
    pub code: SlidingBlockCode,
    /// Images of all factors of length `n + window - 1` are factors, `n ≤ verified_depth`.
    pub verified_depth: usize,
    pub shift_power_equivalent: Option<usize>,
    /// `(k, n)` with `codeᵏ = σⁿ`, when searched for.
    pub root_relation: Option<(usize, usize)>,
}

impl EndomorphismReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "code": self.code.to_json(),
            "verified_depth": self.verified_depth,
            "shift_power_equivalent": self.shift_power_equivalent,
            "root_relation": self.root_relation,
        })
    }
}

/// Checks image containment for every `n ≤ depth`; a violation is returned as
/// [`Error::NotEndomorphism`] with the offending factor. Containment beyond
/// `depth` is not claimed.
pub fn verify_endomorphism(
    code: &SlidingBlockCode,
    table: &LanguageTable,
    depth: usize,
) -> Result<EndomorphismReport> {
    if !same_table(&code.table, table) {
        return Err(Error::TableMismatch);
    }
    let window = code.window();
    if depth < window {
        return Err(Error::OutOfRange {
            what: "depth",
            value: depth,
            min: window,
            max: usize::MAX,
        });
    }
    if depth + window - 1 > table.max_length() {
        return Err(shallow(depth + window - 1, table));
    }
    for n in 1..=depth {
        for f in table.factors(n + window - 1) {
            let image = code.apply(f)?;
            if !table.contains(&image) {
                return Err(Error::NotEndomorphism {
                    factor: table.render(f),
                    image: table.render(&image),
                });
            }
        }
    }
    let shift_power_equivalent = (0..=code.anticipation)
        .filter(|&n| code.memory + 1 + code.anticipation.max(n) <= table.max_length())
        .find(|&n| {
            shift_power(n, &code.table)
                .and_then(|s| equals(code, &s, table))
                .unwrap_or(false)
        });
    Ok(EndomorphismReport {
        code: code.clone(),
        verified_depth: depth,
        shift_power_equivalent,
        root_relation: None,
    })
}

/// Lexicographically least `(k, n)`, `1 ≤ k ≤ k_max`, `0 ≤ n ≤ n_max`, with
/// `codeᵏ = σⁿ`.
pub fn find_root_relation(
    code: &SlidingBlockCode,
    table: &LanguageTable,
    k_max: usize,
    n_max: usize,
) -> Result<Option<(usize, usize)>> {
    if !same_table(&code.table, table) {
        return Err(Error::TableMismatch);
    }
    if k_max == 0 {
        return Ok(None);
    }
    let needed = k_max * code.memory + 1 + (k_max * code.anticipation).max(n_max);
    if needed > table.max_length() {
        return Err(shallow(needed, table));
    }
    let shifts = (0..=n_max)
        .map(|n| shift_power(n, &code.table))
        .collect::<Result<Vec<_>>>()?;
    let mut current = code.clone();
    for k in 1..=k_max {
        if k > 1 {
            current = compose(code, &current)?;
        }
        for (n, shift) in shifts.iter().enumerate() {
            if equals(&current, shift, table)? {
                return Ok(Some((k, n)));
            }
        }
    }
    Ok(None)
}

/// Thue–Morse coded blockwise by `0 ↦ 1001`, `1 ↦ 1101`, with its language
/// (all four block phases occur in the subword scan) and the right-radius-3
/// rule `φ(xyzw) = 1` on 1001, `0` on 1101, `y` otherwise.
pub fn morse_mirror_system(
    depth_exponent: usize,
) -> Result<(Arc<LanguageTable>, SlidingBlockCode)> {
    morse_mirror_system_with_length(depth_exponent, MORSE_MIRROR_MAX_LENGTH)
}

/// The Thue–Morse prefix of length `2^depth_exponent` coded blockwise by
/// `0 ↦ 1001`, `1 ↦ 1101`.
pub fn morse_mirror_sequence(depth_exponent: usize) -> Result<Word> {
    if !(10..=24).contains(&depth_exponent) {
        return Err(Error::OutOfRange {
            what: "depth_exponent",
            value: depth_exponent,
            min: 10,
            max: 24,
        });
    }
    let tm = thue_morse().iterate(0, depth_exponent)?;
    let blocks: [[Letter; 4]; 2] = [[1, 0, 0, 1], [1, 1, 0, 1]];
    Ok(tm.iter().flat_map(|&l| blocks[l as usize]).collect())
}

pub fn morse_mirror_system_with_length(
    depth_exponent: usize,
    max_length: usize,
) -> Result<(Arc<LanguageTable>, SlidingBlockCode)> {
    let coded = morse_mirror_sequence(depth_exponent)?;
    let table = build_language_from_sequence(
        &Alphabet::binary(),
        &coded,
        max_length,
        format!("Thue-Morse prefix of length 2^{depth_exponent} coded by 0->1001, 1->1101"),
    )?;
    table.validate_minimal()?;
    let table = Arc::new(table);
    let phi = morse_mirror_code(&table)?;
    Ok((table, phi))
}

/// `φ(xyzw) = 1` on 1001, `0` on 1101, `y` otherwise, over a binary table.
pub fn morse_mirror_code(table: &Arc<LanguageTable>) -> Result<SlidingBlockCode> {
    if table.alphabet().len() != 2 {
        return Err(Error::InvalidArgument(
            "the mirror code needs a binary alphabet".into(),
        ));
    }
    SlidingBlockCode::from_fn(table, 0, 3, |w| match w {
        [1, 0, 0, 1] => 1,
        [1, 1, 0, 1] => 0,
        _ => w[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::build_language;
    use crate::substitution::catalog::*;
    use crate::substitution::Substitution;

    fn fib_table(n: usize) -> Arc<LanguageTable> {
        Arc::new(build_language(&fibonacci(), n).unwrap())
    }

    #[test]
    fn hedlund_rule_values() {
        let (table, phi) = morse_mirror_system(12).unwrap();
        let ab = table.alphabet();
        for (input, out) in [("1001", "1"), ("1101", "0"), ("0110", "1")] {
            let w = ab.parse(input).unwrap();
            assert!(table.contains(&w), "{input}");
            assert_eq!(ab.render(&phi.apply(&w).unwrap()), out);
        }
    }

    #[test]
    fn apply_outside_domain() {
        let table = fib_table(6);
        let id = shift_power(0, &table).unwrap();
        let s1 = shift_power(1, &table).unwrap();
        assert_eq!(
            s1.apply(&[1, 1, 0]).unwrap_err(),
            Error::WindowNotInDomain("11".into())
        );
        assert!(id.apply(&[]).is_err());
    }

    #[test]
    fn shift_powers_apply() {
        let table = fib_table(6);
        let ab = table.alphabet();
        let s1 = shift_power(1, &table).unwrap();
        assert_eq!(
            ab.render(&s1.apply(&ab.parse("0100").unwrap()).unwrap()),
            "100"
        );
        let id = shift_power(0, &table).unwrap();
        assert_eq!(id.window(), 1);
        assert!(matches!(
            shift_power(6, &table),
            Err(Error::TableTooShallow { .. })
        ));

        let abc = Substitution::from_rules([
            ('a', "abcde"),
            ('b', "bcdea"),
            ('c', "cdeab"),
            ('d', "deabc"),
            ('e', "eabcdd"),
        ])
        .unwrap();
        let t = Arc::new(build_language(&abc, 6).unwrap());
        let s2 = shift_power(2, &t).unwrap();
        let w = t.alphabet().parse("abcde").unwrap();
        assert_eq!(t.alphabet().render(&s2.apply(&w).unwrap()), "cde");
    }

    #[test]
    fn composition_laws() {
        let table = fib_table(10);
        let id = shift_power(0, &table).unwrap();
        let s1 = shift_power(1, &table).unwrap();
        let s2 = shift_power(2, &table).unwrap();
        assert!(equals(&compose(&id, &s2).unwrap(), &s2, &table).unwrap());
        assert!(equals(&compose(&s1, &s1).unwrap(), &s2, &table).unwrap());
        assert!(!equals(&s1, &s2, &table).unwrap());
        assert!(equals(&s1, &s1, &table).unwrap());
    }

    #[test]
    fn hedlund_square_is_shift_squared() {
        let (table, phi) = morse_mirror_system(12).unwrap();
        let square = compose(&phi, &phi).unwrap();
        assert!(equals(&square, &shift_power(2, &table).unwrap(), &table).unwrap());
        for n in 0..=6 {
            assert!(!equals(&phi, &shift_power(n, &table).unwrap(), &table).unwrap());
        }
        assert_eq!(
            find_root_relation(&phi, &table, 4, 6).unwrap(),
            Some((2, 2))
        );
        let report = verify_endomorphism(&phi, &table, 20).unwrap();
        assert_eq!(report.verified_depth, 20);
        assert_eq!(report.shift_power_equivalent, None);
    }

    #[test]
    fn thue_morse_exchange_is_involution() {
        let table = Arc::new(build_language(&thue_morse(), 12).unwrap());
        let swap = SlidingBlockCode::letter_map(&table, &[1, 0]).unwrap();
        verify_endomorphism(&swap, &table, 10).unwrap();
        assert_eq!(
            find_root_relation(&swap, &table, 3, 3).unwrap(),
            Some((2, 0))
        );
        let s3 = shift_power(3, &table).unwrap();
        assert_eq!(find_root_relation(&s3, &table, 3, 4).unwrap(), Some((1, 3)));
    }

    #[test]
    fn non_endomorphism_gives_witness() {
        let table = fib_table(12);
        // constant 1 sends 00 to 11, which is not a factor
        let ones = SlidingBlockCode::from_fn(&table, 0, 0, |_| 1).unwrap();
        match verify_endomorphism(&ones, &table, 5).unwrap_err() {
            Error::NotEndomorphism { factor, image } => {
                assert_eq!((factor.as_str(), image.as_str()), ("00", "11"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let s2 = shift_power(2, &table).unwrap();
        let report = verify_endomorphism(&s2, &table, 10).unwrap();
        assert_eq!(report.shift_power_equivalent, Some(2));
    }

    #[test]
    fn ignores_last_letter() {
        let table = fib_table(8);
        let padded = SlidingBlockCode::from_fn(&table, 0, 2, |w| w[1]).unwrap();
        assert!(padded.ignores_last_letter());
        assert!(!shift_power(2, &table).unwrap().ignores_last_letter());
        assert!(!shift_power(0, &table).unwrap().ignores_last_letter());
    }

    #[test]
    fn json_round_trip() {
        let (table, phi) = morse_mirror_system(10).unwrap();
        let json = phi.to_json();
        assert_eq!(json["memory"], 0);
        assert_eq!(json["anticipation"], 3);
        assert!(json["rule"]
            .as_array()
            .unwrap()
            .contains(&serde_json::json!(["1001", "1"])));
        assert_eq!(SlidingBlockCode::from_json(&table, &json).unwrap(), phi);

        let mut broken = json.clone();
        broken["rule"].as_array_mut().unwrap().pop();
        assert!(SlidingBlockCode::from_json(&table, &broken).is_err());
    }

    #[test]
    fn mismatched_tables() {
        let a = fib_table(6);
        let b = Arc::new(build_language(&thue_morse(), 6).unwrap());
        let ca = shift_power(1, &a).unwrap();
        let cb = shift_power(1, &b).unwrap();
        assert_eq!(compose(&ca, &cb).unwrap_err(), Error::TableMismatch);
        assert_eq!(equals(&ca, &ca, &b).unwrap_err(), Error::TableMismatch);
    }
}
