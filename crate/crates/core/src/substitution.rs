//! Substitutions (letter-to-word morphisms) and their iterates.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

/// A substitution θ: every letter maps to a nonempty word over the same alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::InvalidArgument(format!(
                "{} images given for an alphabet of {} letters",
                images.len(),
                alphabet.len()
            )));
        }
        for (letter, image) in alphabet.letters().zip(&images) {
            if image.is_empty() {
                return Err(Error::EmptyImage(alphabet.symbol(letter)));
            }
            alphabet.check(image)?;
        }
        Ok(Substitution { alphabet, images })
    }

    /// Builds a substitution from `(symbol, image)` pairs. The alphabet is the
    /// sorted set of left-hand symbols.
    pub fn from_rules<'a>(rules: impl IntoIterator<Item = (char, &'a str)>) -> Result<Self> {
        let mut rules: Vec<(char, &str)> = rules.into_iter().collect();
        rules.sort_by_key(|&(c, _)| c);
        let alphabet = Alphabet::new(rules.iter().map(|&(c, _)| c))?;
        let images = rules
            .iter()
            .map(|&(_, img)| alphabet.parse(img))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(alphabet, images)
    }

    /// Parses the rules format: one `a -> acb` rule per line, whitespace
    /// insensitive, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules: Vec<(usize, char, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("");
            let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
            if compact.is_empty() {
                continue;
            }
            let parse_err = |message: &str| Error::Parse {
                line: line_no,
                message: message.to_string(),
            };
            let (lhs, rhs) = compact
                .split_once("->")
                .ok_or_else(|| parse_err("expected `letter -> image`"))?;
            let mut lhs_chars = lhs.chars();
            let letter = match (lhs_chars.next(), lhs_chars.next()) {
                (Some(c), None) => c,
                _ => return Err(parse_err("left-hand side must be a single symbol")),
            };
            if rhs.is_empty() {
                return Err(parse_err("image is empty"));
            }
            if rhs.contains("->") {
                return Err(parse_err("more than one `->` on a line"));
            }
            if rules.iter().any(|(_, c, _)| *c == letter) {
                return Err(parse_err(&format!("duplicate rule for {letter:?}")));
            }
            rules.push((line_no, letter, rhs.to_string()));
        }
        if rules.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "no rules found".into(),
            });
        }
        let mut symbols: Vec<char> = rules.iter().map(|(_, c, _)| *c).collect();
        symbols.sort_unstable();
        let alphabet = Alphabet::new(symbols)?;
        let mut images = vec![Word::new(); alphabet.len()];
        for (line, letter, rhs) in &rules {
            let image = alphabet.parse(rhs).map_err(|e| Error::Parse {
                line: *line,
                message: e.to_string(),
            })?;
            images[alphabet.letter(*letter)? as usize] = image;
        }
        Substitution::new(alphabet, images)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, letter: Letter) -> &Word {
        &self.images[letter as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// θ(w₀)θ(w₁)…
    pub fn substitute(&self, w: &[Letter]) -> Result<Word> {
        self.alphabet.check(w)?;
        Ok(self.substitute_unchecked(w))
    }

    pub(crate) fn substitute_unchecked(&self, w: &[Letter]) -> Word {
        let len = w.iter().map(|&l| self.images[l as usize].len()).sum();
        let mut out = Vec::with_capacity(len);
        for &l in w {
            out.extend_from_slice(&self.images[l as usize]);
        }
        Word::from_letters(out)
    }

    /// θᵏ(letter); θ⁰(letter) is the one-letter word.
    pub fn iterate(&self, letter: Letter, k: usize) -> Result<Word> {
        self.iterate_word(&[letter], k)
    }

    pub fn iterate_word(&self, w: &[Letter], k: usize) -> Result<Word> {
        self.alphabet.check(w)?;
        let mut cur = Word::from(w);
        for _ in 0..k {
            cur = self.substitute_unchecked(&cur);
        }
        Ok(cur)
    }

    /// Incidence matrix: entry `[i][j]` counts letter `i` in θ(j).
    pub fn incidence_matrix(&self) -> Vec<Vec<u64>> {
        let k = self.alphabet.len();
        let mut m = vec![vec![0u64; k]; k];
        for (j, image) in self.images.iter().enumerate() {
            for &l in image.iter() {
                m[l as usize][j] += 1;
            }
        }
        m
    }

    /// Whether some power of the incidence matrix is entrywise positive.
    ///
    /// Powers are searched up to `(k-1)² + 1`, Wielandt's bound for primitive
    /// nonnegative matrices.
    pub fn is_primitive(&self) -> bool {
        let k = self.alphabet.len();
        let base: Vec<Vec<bool>> = self
            .incidence_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(|x| x > 0).collect())
            .collect();
        let mut power = base.clone();
        let limit = (k - 1) * (k - 1) + 1;
        for _ in 0..limit {
            if power.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            power = bool_product(&power, &base);
        }
        false
    }

    /// Last letter of θ^q(letter), computed without expanding the word.
    pub fn last_letter_of_power(&self, letter: Letter, q: usize) -> Letter {
        (0..q).fold(letter, |l, _| *self.images[l as usize].last().unwrap())
    }

    /// First letter of θ^q(letter).
    pub fn first_letter_of_power(&self, letter: Letter, q: usize) -> Letter {
        (0..q).fold(letter, |l, _| self.images[l as usize][0])
    }

    /// Prefix of length `len` of the θ^q-fixed point grown from `seed`, if
    /// θ^q(seed) starts with `seed` and the iterates grow.
    pub fn fixed_point_prefix(&self, seed: Letter, q: usize, len: usize) -> Option<Word> {
        if q == 0 || self.first_letter_of_power(seed, q) != seed {
            return None;
        }
        let mut cur = Word::from_letters(vec![seed]);
        while cur.len() < len {
            let next = self.iterate_word(&cur, q).ok()?;
            if next.len() <= cur.len() {
                return None;
            }
            cur = next;
        }
        cur.truncate(len);
        Some(cur)
    }

    /// The rules text format, letters in alphabet order.
    pub fn to_rules_text(&self) -> String {
        let mut out = String::new();
        for l in self.alphabet.letters() {
            out.push(self.alphabet.symbol(l));
            out.push_str(" -> ");
            out.push_str(&self.alphabet.render(&self.images[l as usize]));
            out.push('\n');
        }
        out
    }
}

impl FromStr for Substitution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Substitution::parse(s)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .alphabet
            .letters()
            .map(|l| {
                format!(
                    "{}->{}",
                    self.alphabet.symbol(l),
                    self.alphabet.render(&self.images[l as usize])
                )
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn bool_product(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let k = a.len();
    (0..k)
        .map(|i| (0..k).map(|j| (0..k).any(|t| a[i][t] && b[t][j])).collect())
        .collect()
}

/// Substitutions used throughout the examples and checks.
pub mod catalog {
    use super::Substitution;

    /// 0 → 01, 1 → 0.
    pub fn fibonacci() -> Substitution {
        Substitution::from_rules([('0', "01"), ('1', "0")]).unwrap()
    }

    /// 0 → 01, 1 → 10.
    pub fn thue_morse() -> Substitution {
        Substitution::from_rules([('0', "01"), ('1', "10")]).unwrap()
    }

    /// a → acb, b → aba, c → aca.
    pub fn acb() -> Substitution {
        Substitution::from_rules([('a', "acb"), ('b', "aba"), ('c', "aca")]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;

    fn render(theta: &Substitution, w: &Word) -> String {
        theta.alphabet().render(w)
    }

    #[test]
    fn substitute_examples() {
        let theta = acb();
        let a = theta.alphabet().parse("a").unwrap();
        assert_eq!(render(&theta, &theta.substitute(&a).unwrap()), "acb");
        assert!(theta.substitute(&[]).unwrap().is_empty());
        let ab = theta.alphabet().parse("ab").unwrap();
        assert_eq!(render(&theta, &theta.substitute(&ab).unwrap()), "acbaba");
        assert_eq!(theta.substitute(&[7]), Err(Error::UnknownLetter(7)));
    }

    #[test]
    fn iterate_examples() {
        let theta = acb();
        assert_eq!(render(&theta, &theta.iterate(0, 2).unwrap()), "acbacaaba");
        assert_eq!(render(&theta, &theta.iterate(1, 0).unwrap()), "b");
        let fib = fibonacci();
        assert_eq!(render(&fib, &fib.iterate(0, 3).unwrap()), "01001");
    }

    #[test]
    fn primitivity() {
        assert!(acb().is_primitive());
        assert!(fibonacci().is_primitive());
        assert!(thue_morse().is_primitive());
        let not = Substitution::from_rules([('a', "ab"), ('b', "b")]).unwrap();
        assert!(!not.is_primitive());
        // needs the full Wielandt exponent: cyclic-with-shortcut on 3 letters
        let slow = Substitution::from_rules([('a', "b"), ('b', "c"), ('c', "ab")]).unwrap();
        assert!(slow.is_primitive());
        let perm = Substitution::from_rules([('a', "b"), ('b', "a")]).unwrap();
        assert!(!perm.is_primitive());
    }

    #[test]
    fn parse_rules_format() {
        let theta: Substitution = "# acb example\n a -> a c b\n\nb->aba  # second\nc -> aca\n"
            .parse()
            .unwrap();
        assert_eq!(theta, acb());
        assert_eq!(Substitution::parse(&theta.to_rules_text()).unwrap(), theta);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Substitution::parse("a -> ab\nb ab\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Substitution::parse("a -> ab\nb -> \n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Substitution::parse("a -> ab\nb -> ax\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Substitution::parse("a -> ab\na -> b\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn power_letters_and_fixed_points() {
        let theta = acb();
        // θ²(a) = acbacaaba
        assert_eq!(theta.last_letter_of_power(0, 2), 0);
        assert_eq!(theta.first_letter_of_power(1, 1), 0);
        let u = theta.fixed_point_prefix(0, 1, 12).unwrap();
        assert_eq!(render(&theta, &u), "acbacaabaacb");
        assert!(theta.fixed_point_prefix(1, 1, 5).is_none());
    }
}
