//! Factor languages and complexity functions.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::substitution::Substitution;
use crate::word::{Alphabet, Letter, Word};

/// Iteration cap for [`build_language`].
pub const DEFAULT_ITERATION_CAP: usize = 64;

/// How a [`LanguageTable`] was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Exact language of a primitive substitution, stabilized after `iterations`.
    Substitution { rules: String, iterations: usize },
    /// Characteristic Sturmian word from a continued fraction.
    Sturmian {
        quotients: Vec<u32>,
        repeat_last: bool,
        prefix_length: usize,
    },
    /// All subwords of an explicit finite sequence (a lower approximation).
    Prefix { length: usize, description: String },
}

/// Which side a one-letter extension is taken on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A special factor together with its full extension set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialWord {
    pub word: Word,
    pub extensions: Vec<Letter>,
}

/// `L̂ = max s(n)` over the probed range and `K = max{L̂, p(1)}`.
///
/// `l_hat` is only a lower bound for the supremum of `s` unless the caller
/// knows the difference function is bounded by it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CassaigneEstimate {
    pub l_hat: usize,
    pub k: usize,
    pub probe_depth: usize,
    pub empirical: bool,
}

/// Factor sets of a language for every length `1..=max_length`.
///
/// Each length keeps a canonically sorted list plus a hash index from word to
/// position in that list. Every `(n-1)`-subword of a stored `n`-factor is
/// itself stored; this is checked on construction.
#[derive(Clone, Debug)]
pub struct LanguageTable {
    alphabet: Alphabet,
    max_length: usize,
    factors: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, u32>>,
    provenance: Provenance,
}

impl PartialEq for LanguageTable {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.max_length == other.max_length
            && self.factors == other.factors
    }
}

impl Eq for LanguageTable {}

impl LanguageTable {
    /// Builds a table from raw factor sets (`sets[n-1]` holds length-`n` words),
    /// checking lengths, letters and subword consistency.
    pub fn from_factor_sets(
        alphabet: Alphabet,
        sets: Vec<Vec<Word>>,
        provenance: Provenance,
    ) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::OutOfRange {
                what: "max_length",
                value: 0,
                min: 1,
                max: usize::MAX,
            });
        }
        let max_length = sets.len();
        let mut factors = Vec::with_capacity(max_length);
        let mut index = Vec::with_capacity(max_length);
        for (i, mut set) in sets.into_iter().enumerate() {
            let n = i + 1;
            set.sort_unstable();
            set.dedup();
            for w in &set {
                if w.len() != n {
                    return Err(Error::Inconsistent(format!(
                        "word {:?} stored at length {n}",
                        alphabet.render(w)
                    )));
                }
                alphabet.check(w)?;
            }
            if set.is_empty() {
                return Err(Error::Inconsistent(format!("no factors of length {n}")));
            }
            let idx: HashMap<Word, u32> = set
                .iter()
                .enumerate()
                .map(|(j, w)| (w.clone(), j as u32))
                .collect();
            factors.push(set);
            index.push(idx);
        }
        let table = LanguageTable {
            alphabet,
            max_length,
            factors,
            index,
            provenance,
        };
        table.check_consistency()?;
        Ok(table)
    }

    fn check_consistency(&self) -> Result<()> {
        for n in 2..=self.max_length {
            for w in self.factors(n) {
                for sub in [&w[..n - 1], &w[1..]] {
                    if !self.contains(sub) {
                        return Err(Error::Inconsistent(format!(
                            "{:?} is stored but its subword {:?} is not",
                            self.render(w),
                            self.render(sub)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks the properties every table of an infinite minimal shift has:
    /// bi-extendability of each factor below `max_length`, and strict growth
    /// `p(n+1) > p(n)`.
    pub fn validate_minimal(&self) -> Result<()> {
        for n in 1..self.max_length {
            let longer = self.factors(n + 1);
            let prefixes: HashSet<&[Letter]> = longer.iter().map(|w| &w[..n]).collect();
            let suffixes: HashSet<&[Letter]> = longer.iter().map(|w| &w[1..]).collect();
            for w in self.factors(n) {
                if !prefixes.contains(w.as_slice()) {
                    return Err(Error::NotMinimal(format!(
                        "{:?} has no right extension",
                        self.render(w)
                    )));
                }
                if !suffixes.contains(w.as_slice()) {
                    return Err(Error::NotMinimal(format!(
                        "{:?} has no left extension",
                        self.render(w)
                    )));
                }
            }
            if longer.len() <= self.factors(n).len() {
                return Err(Error::NotMinimal(format!(
                    "p({}) = {} does not exceed p({n}) = {} (eventually periodic)",
                    n + 1,
                    longer.len(),
                    self.factors(n).len()
                )));
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Canonically ordered factors of length `n` (empty slice when out of range).
    pub fn factors(&self, n: usize) -> &[Word] {
        if n == 0 || n > self.max_length {
            return &[];
        }
        &self.factors[n - 1]
    }

    /// Position of `w` in `factors(w.len())`.
    pub fn index_of(&self, w: &[Letter]) -> Option<usize> {
        let n = w.len();
        if n == 0 || n > self.max_length {
            return None;
        }
        self.index[n - 1].get(w).map(|&i| i as usize)
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.index_of(w).is_some()
    }

    pub fn render(&self, w: &[Letter]) -> String {
        self.alphabet.render(w)
    }

    /// p(n).
    pub fn complexity(&self, n: usize) -> Result<usize> {
        self.check_length("n", n, self.max_length)?;
        Ok(self.factors(n).len())
    }

    /// s(n) = p(n+1) − p(n).
    pub fn complexity_diff(&self, n: usize) -> Result<i64> {
        self.check_length("n", n, self.max_length.saturating_sub(1))?;
        Ok(self.factors(n + 1).len() as i64 - self.factors(n).len() as i64)
    }

    fn check_length(&self, what: &'static str, n: usize, max: usize) -> Result<()> {
        if n == 0 || n > max {
            return Err(Error::OutOfRange {
                what,
                value: n,
                min: 1,
                max,
            });
        }
        Ok(())
    }

    fn extensions(&self, w: &[Letter], side: Side) -> Result<Vec<Letter>> {
        if !w.is_empty() && !self.contains(w) {
            return Err(Error::NotInLanguage(self.render(w)));
        }
        if w.len() >= self.max_length {
            return Err(Error::TableTooShallow {
                needed: w.len() + 1,
                available: self.max_length,
            });
        }
        let mut buf = Vec::with_capacity(w.len() + 1);
        Ok(self
            .alphabet
            .letters()
            .filter(|&a| {
                buf.clear();
                match side {
                    Side::Left => {
                        buf.push(a);
                        buf.extend_from_slice(w);
                    }
                    Side::Right => {
                        buf.extend_from_slice(w);
                        buf.push(a);
                    }
                }
                self.contains(&buf)
            })
            .collect())
    }

    /// `{a : a·w ∈ L}`.
    pub fn left_extensions(&self, w: &[Letter]) -> Result<Vec<Letter>> {
        self.extensions(w, Side::Left)
    }

    /// `{a : w·a ∈ L}`.
    pub fn right_extensions(&self, w: &[Letter]) -> Result<Vec<Letter>> {
        self.extensions(w, Side::Right)
    }

    /// All length-`n` factors with at least two extensions on `side`.
    pub fn special_words(&self, n: usize, side: Side) -> Result<Vec<SpecialWord>> {
        self.check_length("n", n, self.max_length.saturating_sub(1))?;
        let mut out = Vec::new();
        for w in self.factors(n) {
            let extensions = self.extensions(w, side)?;
            if extensions.len() >= 2 {
                out.push(SpecialWord {
                    word: w.clone(),
                    extensions,
                });
            }
        }
        Ok(out)
    }

    /// `L̂ = max_{1≤n≤probe_depth} s(n)` and `K = max{L̂, p(1)}`.
    pub fn cassaigne_k(&self, probe_depth: usize) -> Result<CassaigneEstimate> {
        self.check_length(
            "probe_depth",
            probe_depth,
            self.max_length.saturating_sub(1),
        )?;
        let mut l_hat = 0usize;
        for n in 1..=probe_depth {
            let s = self.complexity_diff(n)?;
            if s < 1 {
                return Err(Error::NotMinimal(format!("s({n}) = {s}")));
            }
            l_hat = l_hat.max(s as usize);
        }
        Ok(CassaigneEstimate {
            l_hat,
            k: l_hat.max(self.factors(1).len()),
            probe_depth,
            empirical: true,
        })
    }

    /// Serializes to the documented JSON layout.
    pub fn to_json(&self) -> serde_json::Value {
        let mut factors = serde_json::Map::new();
        for n in 1..=self.max_length {
            let words: Vec<serde_json::Value> = self
                .factors(n)
                .iter()
                .map(|w| serde_json::Value::String(self.render(w)))
                .collect();
            factors.insert(n.to_string(), serde_json::Value::Array(words));
        }
        serde_json::json!({
            "alphabet": self.alphabet,
            "max_length": self.max_length,
            "factors": factors,
            "provenance": self.provenance,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: TableDocument = serde_json::from_value(value.clone())?;
        let mut sets = Vec::with_capacity(doc.max_length);
        for n in 1..=doc.max_length {
            let words = doc
                .factors
                .get(&n.to_string())
                .ok_or_else(|| Error::Json(format!("missing factors for length {n}")))?;
            sets.push(
                words
                    .iter()
                    .map(|s| doc.alphabet.parse(s))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        if doc.factors.len() != doc.max_length {
            return Err(Error::Json("factor lengths do not match max_length".into()));
        }
        LanguageTable::from_factor_sets(doc.alphabet, sets, doc.provenance)
    }
}

#[derive(Deserialize)]
struct TableDocument {
    alphabet: Alphabet,
    max_length: usize,
    factors: BTreeMap<String, Vec<String>>,
    provenance: Provenance,
}

/// Distinct subwords of lengths `1..=n_max` over all `sources`, sorted.
pub(crate) fn harvest<'a>(
    sources: impl IntoIterator<Item = &'a [Letter]> + Clone,
    n_max: usize,
) -> Vec<Vec<Word>> {
    (1..=n_max)
        .map(|n| {
            let mut seen: HashSet<&[Letter]> = HashSet::new();
            for s in sources.clone() {
                if s.len() >= n {
                    seen.extend(s.windows(n));
                }
            }
            let mut words: Vec<Word> = seen.into_iter().map(Word::from).collect();
            words.sort_unstable();
            words
        })
        .collect()
}

/// Exact language of the primitive substitution `theta` up to length `n_max`.
pub fn build_language(theta: &Substitution, n_max: usize) -> Result<LanguageTable> {
    build_language_with_cap(theta, n_max, DEFAULT_ITERATION_CAP)
}

/// As [`build_language`], with an explicit iteration cap.
///
/// Iterates θ on every letter and harvests subwords until two consecutive
/// iterates give identical factor sets at every length `≤ n_max`, with every
/// iterate already longer than `n_max`. Past that point each further factor
/// set is determined by the previous one, so the table is exact.
pub fn build_language_with_cap(
    theta: &Substitution,
    n_max: usize,
    cap: usize,
) -> Result<LanguageTable> {
    if n_max == 0 {
        return Err(Error::OutOfRange {
            what: "n_max",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    if !theta.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let mut words: Vec<Word> = theta.images().to_vec();
    let mut previous: Option<Vec<Vec<Word>>> = None;
    for iteration in 1..=cap {
        let sets = harvest(words.iter().map(|w| w.as_slice()), n_max);
        let long_enough = words.iter().all(|w| w.len() > n_max);
        if long_enough && previous.as_ref() == Some(&sets) {
            let table = LanguageTable::from_factor_sets(
                theta.alphabet().clone(),
                sets,
                Provenance::Substitution {
                    rules: theta.to_rules_text(),
                    iterations: iteration,
                },
            )?;
            table.validate_minimal()?;
            return Ok(table);
        }
        previous = Some(sets);
        words = words
            .iter()
            .map(|w| theta.substitute_unchecked(w))
            .collect();
    }
    Err(Error::CapExceeded { cap })
}

/// All subwords of `prefix` of lengths `1..=n_max`.
///
/// The result is a lower approximation of the language of any shift the
/// prefix comes from; only subword consistency is checked. Call
/// [`LanguageTable::validate_minimal`] to require the minimal-shift properties.
pub fn build_language_from_sequence(
    alphabet: &Alphabet,
    prefix: &[Letter],
    n_max: usize,
    description: impl Into<String>,
) -> Result<LanguageTable> {
    if n_max == 0 {
        return Err(Error::OutOfRange {
            what: "n_max",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    if prefix.len() < n_max {
        return Err(Error::PrefixTooShort {
            length: prefix.len(),
            needed: n_max,
        });
    }
    alphabet.check(prefix)?;
    let sets = harvest(std::iter::once(prefix), n_max);
    LanguageTable::from_factor_sets(
        alphabet.clone(),
        sets,
        Provenance::Prefix {
            length: prefix.len(),
            description: description.into(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::catalog::*;

    fn rendered(table: &LanguageTable, n: usize) -> Vec<String> {
        table.factors(n).iter().map(|w| table.render(w)).collect()
    }

    #[test]
    fn fibonacci_factors() {
        let t = build_language(&fibonacci(), 3).unwrap();
        assert_eq!(rendered(&t, 1), ["0", "1"]);
        assert_eq!(rendered(&t, 2), ["00", "01", "10"]);
        assert_eq!(rendered(&t, 3), ["001", "010", "100", "101"]);
    }

    #[test]
    fn acb_letters() {
        let t = build_language(&acb(), 1).unwrap();
        assert_eq!(rendered(&t, 1), ["a", "b", "c"]);
        assert_eq!(t.complexity(1).unwrap(), 3);
    }

    #[test]
    fn thue_morse_complexity() {
        let t = build_language(&thue_morse(), 4).unwrap();
        let p: Vec<usize> = (1..=4).map(|n| t.complexity(n).unwrap()).collect();
        assert_eq!(p, [2, 4, 6, 10]);
        assert_eq!(t.complexity_diff(2).unwrap(), 2);
    }

    #[test]
    fn rejects_non_primitive_and_periodic() {
        let not = Substitution::from_rules([('a', "ab"), ('b', "b")]).unwrap();
        assert_eq!(build_language(&not, 3).unwrap_err(), Error::NotPrimitive);
        let periodic = Substitution::from_rules([('a', "ab"), ('b', "ab")]).unwrap();
        assert!(matches!(
            build_language(&periodic, 4).unwrap_err(),
            Error::NotMinimal(_)
        ));
    }

    #[test]
    fn cap_exceeded_is_reported() {
        assert_eq!(
            build_language_with_cap(&thue_morse(), 8, 2).unwrap_err(),
            Error::CapExceeded { cap: 2 }
        );
    }

    #[test]
    fn from_sequence() {
        let ab = Alphabet::binary();
        let t =
            build_language_from_sequence(&ab, &ab.parse("0100101").unwrap(), 2, "test").unwrap();
        assert_eq!(rendered(&t, 2), ["00", "01", "10"]);
        let a = Alphabet::new(['a']).unwrap();
        let t = build_language_from_sequence(&a, &a.parse("aaaa").unwrap(), 3, "test").unwrap();
        assert_eq!(rendered(&t, 3), ["aaa"]);
        assert!(t.validate_minimal().is_err());
        assert_eq!(
            build_language_from_sequence(&ab, &ab.parse("01").unwrap(), 3, "x").unwrap_err(),
            Error::PrefixTooShort {
                length: 2,
                needed: 3
            }
        );
    }

    #[test]
    fn extensions_and_special_words() {
        let t = build_language(&fibonacci(), 6).unwrap();
        assert_eq!(t.left_extensions(&[0]).unwrap(), vec![0, 1]);
        assert_eq!(t.left_extensions(&[1]).unwrap(), vec![0]);
        assert_eq!(t.right_extensions(&[1]).unwrap(), vec![0]);
        assert!(matches!(
            t.left_extensions(&[1, 1]).unwrap_err(),
            Error::NotInLanguage(_)
        ));
        for n in 1..6 {
            let ls = t.special_words(n, Side::Left).unwrap();
            assert_eq!(ls.len(), 1);
            assert_eq!(ls[0].extensions.len(), 2);
        }
        let tm = build_language(&thue_morse(), 6).unwrap();
        assert_eq!(tm.special_words(2, Side::Left).unwrap().len(), 2);
    }

    #[test]
    fn acb_left_special_letters() {
        let t = build_language(&acb(), 3).unwrap();
        let ls = t.special_words(1, Side::Left).unwrap();
        let shown: Vec<(String, String)> = ls
            .iter()
            .map(|s| (t.render(&s.word), t.render(&s.extensions)))
            .collect();
        // length-2 factors: aa ab ac ba ca cb
        assert_eq!(
            shown,
            [
                ("a".to_string(), "abc".to_string()),
                ("b".to_string(), "ac".to_string())
            ]
        );
    }

    #[test]
    fn complexity_out_of_range() {
        let t = build_language(&fibonacci(), 4).unwrap();
        assert!(t.complexity(0).is_err());
        assert!(t.complexity(5).is_err());
        assert!(t.complexity_diff(4).is_err());
    }

    #[test]
    fn cassaigne_constant() {
        let fib = build_language(&fibonacci(), 12).unwrap();
        let est = fib.cassaigne_k(10).unwrap();
        assert_eq!((est.l_hat, est.k), (1, 2));
        let tm = build_language(&thue_morse(), 11).unwrap();
        let est = tm.cassaigne_k(10).unwrap();
        assert_eq!((est.l_hat, est.k), (4, 4));
        let a = Alphabet::new(['a']).unwrap();
        let periodic = build_language_from_sequence(&a, &[0; 8], 4, "aaaa").unwrap();
        assert!(matches!(periodic.cassaigne_k(3), Err(Error::NotMinimal(_))));
    }

    #[test]
    fn json_round_trip() {
        let t = build_language(&acb(), 5).unwrap();
        let json = t.to_json();
        assert_eq!(json["factors"]["1"], serde_json::json!(["a", "b", "c"]));
        assert_eq!(json["provenance"]["kind"], "substitution");
        let back = LanguageTable::from_json(&json).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.provenance(), t.provenance());
    }

    #[test]
    fn inconsistent_sets_rejected() {
        let ab = Alphabet::binary();
        let sets = vec![vec![Word::from(vec![0])], vec![Word::from(vec![0, 1])]];
        assert!(matches!(
            LanguageTable::from_factor_sets(
                ab,
                sets,
                Provenance::Prefix {
                    length: 0,
                    description: String::new()
                }
            ),
            Err(Error::Inconsistent(_))
        ));
    }
}
