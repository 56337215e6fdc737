use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use shiftaut::block_code::{
    morse_mirror_code, morse_mirror_sequence, morse_mirror_system_with_length, SlidingBlockCode,
};
use shiftaut::sturmian::{characteristic_word, sturmian_language, ContinuedFraction};
use shiftaut::substitution::catalog;
use shiftaut::{
    build_language, build_language_from_sequence, Alphabet, Error, LanguageTable, Substitution,
    Word,
};

/// Thue–Morse prefix exponent behind the `morse-mirror` builtin.
pub const MORSE_MIRROR_EXPONENT: usize = 14;

/// Letters read off a generator when no explicit probe length is given.
pub const DEFAULT_PROBE_LENGTH: usize = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Fibonacci,
    ThueMorse,
    Acb,
    MorseMirror,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Substitution rules file, one `a -> acb` rule per line
    #[arg(long, value_name = "FILE")]
    pub rules: Option<PathBuf>,
    /// Sturmian continued-fraction quotients, e.g. `1,1,1` or `2,1,...`
    #[arg(long, value_name = "LIST")]
    pub cf: Option<String>,
    /// Text file holding an explicit sequence; whitespace and `#` lines ignored
    #[arg(long, value_name = "FILE")]
    pub prefix_file: Option<PathBuf>,
    /// A bundled example system
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
}

enum Generator {
    Substitution(Substitution),
    Sturmian(ContinuedFraction),
    Prefix { alphabet: Alphabet, letters: Word },
    MorseMirror,
}

pub struct Source {
    generator: Generator,
    kind: &'static str,
    label: String,
    sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

impl Source {
    pub fn load(args: &SourceArgs) -> Result<Self> {
        if let Some(path) = &args.rules {
            let text = read(path)?;
            let theta = Substitution::parse(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            return Ok(Source {
                generator: Generator::Substitution(theta),
                kind: "rules",
                label: path.display().to_string(),
                sha256: sha256_hex(text.as_bytes()),
            });
        }
        if let Some(list) = &args.cf {
            let cf: ContinuedFraction = list.parse().context("parsing --cf")?;
            return Ok(Source {
                sha256: sha256_hex(cf.to_string().as_bytes()),
                label: cf.to_string(),
                generator: Generator::Sturmian(cf),
                kind: "cf",
            });
        }
        if let Some(path) = &args.prefix_file {
            let text = read(path)?;
            let body: String = text
                .lines()
                .filter(|l| !l.trim_start().starts_with('#'))
                .collect::<Vec<_>>()
                .join("\n");
            let alphabet = Alphabet::from_text(&body)
                .with_context(|| format!("reading symbols of {}", path.display()))?;
            let letters = alphabet.parse(&body.split_whitespace().collect::<String>())?;
            return Ok(Source {
                generator: Generator::Prefix { alphabet, letters },
                kind: "prefix-file",
                label: path.display().to_string(),
                sha256: sha256_hex(text.as_bytes()),
            });
        }
        let builtin = args.builtin.expect("clap enforces one source");
        let (generator, text) = match builtin {
            Builtin::Fibonacci => builtin_rules(catalog::fibonacci()),
            Builtin::ThueMorse => builtin_rules(catalog::thue_morse()),
            Builtin::Acb => builtin_rules(catalog::acb()),
            Builtin::MorseMirror => (
                Generator::MorseMirror,
                format!("morse-mirror 2^{MORSE_MIRROR_EXPONENT}"),
            ),
        };
        Ok(Source {
            generator,
            kind: "builtin",
            label: builtin
                .to_possible_value()
                .expect("no skipped variants")
                .get_name()
                .to_string(),
            sha256: sha256_hex(text.as_bytes()),
        })
    }

    /// Language table up to `max_length`.
    pub fn table(&self, max_length: usize) -> Result<Arc<LanguageTable>> {
        let table = match &self.generator {
            Generator::Substitution(theta) => build_language(theta, max_length)?,
            Generator::Sturmian(cf) => sturmian_language(cf, max_length)?,
            Generator::Prefix { alphabet, letters } => {
                build_language_from_sequence(alphabet, letters, max_length, self.label.clone())?
            }
            Generator::MorseMirror => {
                return Ok(morse_mirror_system_with_length(MORSE_MIRROR_EXPONENT, max_length)?.0)
            }
        };
        Ok(Arc::new(table))
    }

    /// A long sequence from the generator, for return-word scans.
    pub fn probe(&self, length: Option<usize>) -> Result<Word> {
        let wanted = length.unwrap_or(DEFAULT_PROBE_LENGTH);
        match &self.generator {
            Generator::Substitution(theta) => {
                let mut w = theta.image(0).clone();
                while w.len() < wanted {
                    w = theta.substitute(&w)?;
                }
                w.truncate(wanted);
                Ok(w)
            }
            Generator::Sturmian(cf) => match characteristic_word(cf, wanted) {
                Err(Error::InsufficientQuotients { reached, .. }) if length.is_none() => {
                    Ok(characteristic_word(cf, reached)?)
                }
                other => Ok(other?),
            },
            Generator::Prefix { letters, .. } => {
                if length.is_some_and(|l| l > letters.len()) {
                    bail!(
                        "probe length {wanted} exceeds the prefix length {}",
                        letters.len()
                    );
                }
                let mut w = letters.clone();
                w.truncate(wanted);
                Ok(w)
            }
            Generator::MorseMirror => {
                let mut w = morse_mirror_sequence(MORSE_MIRROR_EXPONENT)?;
                if length.is_some_and(|l| l > w.len()) {
                    bail!("probe length {wanted} exceeds {}", w.len());
                }
                w.truncate(wanted);
                Ok(w)
            }
        }
    }

    pub fn substitution(&self) -> Option<&Substitution> {
        match &self.generator {
            Generator::Substitution(theta) => Some(theta),
            _ => None,
        }
    }

    /// The built-in code of a source, if it has one.
    pub fn default_code(&self, table: &Arc<LanguageTable>) -> Result<Option<SlidingBlockCode>> {
        match self.generator {
            Generator::MorseMirror => Ok(Some(morse_mirror_code(table)?)),
            _ => Ok(None),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "kind": self.kind, "value": self.label, "sha256": self.sha256 })
    }
}

fn builtin_rules(theta: Substitution) -> (Generator, String) {
    let text = theta.to_rules_text();
    (Generator::Substitution(theta), text)
}
