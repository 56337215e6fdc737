//! Built-in end-to-end checks over the bundled example systems.
//!
//! Each check rebuilds its inputs from scratch and reports pass or fail with a
//! short witness; errors are reported as failures, never propagated.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::json;

use crate::block_code::{
    equals, find_root_relation, morse_mirror_system, morse_mirror_system_with_length, shift_power,
    verify_endomorphism, SlidingBlockCode,
};
use crate::error::{Error, Result};
use crate::language::{build_language, LanguageTable, Side};
use crate::recurrence::{cassaigne_s_bound, lr_aut_bound};
use crate::search::{enumerate_endomorphisms, invertible_endomorphisms, SearchConfig};
use crate::special::{
    asymptotic_upper_bound, aut_upper_bound, branch_census, certify_branch_points,
    left_special_tree, substitution_root_bound, BranchCensus, BranchPointCertificate,
};
use crate::sturmian::{sturmian_language, ContinuedFraction};
use crate::substitution::catalog::{acb, fibonacci, thue_morse};
use crate::substitution::Substitution;
use crate::word::{Letter, Word};

/// Check groups, in run order.
pub const GROUPS: [&str; 8] = [
    "sturmian",
    "automorphisms",
    "acb",
    "hedlund",
    "bounds",
    "cassaigne",
    "oracle",
    "thue-morse",
];

/// `p(1..=10)` of the Thue–Morse language.
pub const THUE_MORSE_COMPLEXITY: [usize; 10] = [2, 4, 6, 10, 12, 16, 20, 22, 24, 28];

/// Depth at which chains are counted; tables are built to `4·depth + 1`.
pub const CENSUS_DEPTH: usize = 30;
const CENSUS_TABLE_LENGTH: usize = 4 * CENSUS_DEPTH + 1;
const MAX_PERIOD: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    pub witness: String,
}

impl ClaimCheck {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "group": self.group,
            "name": self.name,
            "status": if self.passed { "PASS" } else { "FAIL" },
            "witness": self.witness,
        })
    }
}

fn check(
    group: &'static str,
    name: impl Into<String>,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> ClaimCheck {
    let (passed, witness) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    ClaimCheck {
        group,
        name: name.into(),
        passed,
        witness,
    }
}

/// Runs every group, or only `only`.
pub fn run_checks(only: Option<&str>) -> Result<Vec<ClaimCheck>> {
    if let Some(g) = only {
        if !GROUPS.contains(&g) {
            return Err(Error::InvalidArgument(format!(
                "unknown check group {g:?}; expected one of {}",
                GROUPS.join(", ")
            )));
        }
    }
    let mut out = Vec::new();
    for group in GROUPS {
        if only.is_some_and(|g| g != group) {
            continue;
        }
        out.extend(match group {
            "sturmian" => sturmian_checks(),
            "automorphisms" => automorphism_checks(),
            "acb" => acb_checks(),
            "hedlund" => hedlund_checks(),
            "bounds" => bound_checks(),
            "cassaigne" => cassaigne_checks(),
            "oracle" => oracle_checks(),
            "thue-morse" => thue_morse_checks(),
            _ => unreachable!(),
        });
    }
    Ok(out)
}

/// The two Sturmian expansions exercised by the checks.
pub fn sturmian_examples() -> Vec<ContinuedFraction> {
    vec![
        ContinuedFraction::fibonacci(),
        ContinuedFraction::with_repeating_tail(vec![2, 1]).expect("valid quotients"),
    ]
}

fn sturmian_checks() -> Vec<ClaimCheck> {
    let mut out = Vec::new();
    for cf in sturmian_examples() {
        let table = sturmian_language(&cf, 201);
        out.push(check(
            "sturmian",
            format!("p(n) = n+1 for n <= 200, cf {cf}"),
            || {
                let table = table.clone()?;
                for n in 1..=200 {
                    let p = table.complexity(n)?;
                    if p != n + 1 {
                        return Ok((false, format!("p({n}) = {p}")));
                    }
                }
                Ok((true, "200 lengths".into()))
            },
        ));
        out.push(check(
            "sturmian",
            format!("one left-special word per length, cf {cf}"),
            || {
                let table = table?;
                for n in 1..=200 {
                    let ls = table.special_words(n, Side::Left)?;
                    if ls.len() != 1 {
                        return Ok((
                            false,
                            format!("{} left-special words of length {n}", ls.len()),
                        ));
                    }
                }
                Ok((true, "200 lengths".into()))
            },
        ));
    }
    out
}

/// Shift-power exponents of the search results, `None` for other codes.
fn shift_exponents(reports: &[crate::block_code::EndomorphismReport]) -> Vec<Option<usize>> {
    reports.iter().map(|r| r.shift_power_equivalent).collect()
}

fn automorphism_checks() -> Vec<ClaimCheck> {
    let g = "automorphisms";
    let table = build_language(&fibonacci(), 16).map(Arc::new);
    vec![
        check(
            g,
            "Fibonacci radius 2 depth 12: only shift powers 0, 1, 2",
            || {
                let table = table.clone()?;
                let found = shift_exponents(&enumerate_endomorphisms(&table, 2, 12)?);
                Ok((found == [Some(0), Some(1), Some(2)], format!("{found:?}")))
            },
        ),
        check(
            g,
            "Fibonacci radius 2: invertible codes are the identity",
            || {
                let table = table.clone()?;
                let inv = invertible_endomorphisms(&table, 2, 12, &SearchConfig::default())?;
                let found: Vec<_> = inv.iter().map(|(r, _)| r.shift_power_equivalent).collect();
                Ok((found == [Some(0)], format!("{found:?}")))
            },
        ),
        check(
            g,
            "invertible codes found <= census bound (Fibonacci, acb)",
            || {
                let mut detail = Vec::new();
                let mut ok = true;
                for (name, sub) in [("Fibonacci", fibonacci()), ("acb", acb())] {
                    let census = census_of(&sub)?;
                    let bound = aut_upper_bound(&census)?;
                    let small = Arc::new(build_language(&sub, 16)?);
                    let n =
                        invertible_endomorphisms(&small, 1, 12, &SearchConfig::default())?.len();
                    ok &= n <= bound;
                    detail.push(format!("{name}: {n} <= {bound}"));
                }
                Ok((ok, detail.join("; ")))
            },
        ),
    ]
}

fn census_of(sub: &Substitution) -> Result<BranchCensus> {
    let table = build_language(sub, CENSUS_TABLE_LENGTH)?;
    let tree = left_special_tree(&table, CENSUS_DEPTH)?;
    let certs = certify_branch_points(sub, &table, MAX_PERIOD);
    Ok(branch_census(&tree, &certs))
}

fn acb_checks() -> Vec<ClaimCheck> {
    let g = "acb";
    let theta = acb();
    let built = build_language(&theta, CENSUS_TABLE_LENGTH).and_then(|table| {
        let tree = left_special_tree(&table, CENSUS_DEPTH)?;
        let certs = certify_branch_points(&theta, &table, MAX_PERIOD);
        let census = branch_census(&tree, &certs);
        Ok((table, certs, census))
    });
    let counts = |c: &BranchCensus| format!("{:?}", c.counts());
    vec![
        check(g, "branch census is {2: 2}, all certified", || {
            let (_, _, census) = built.clone()?;
            let ok = census.counts().into_iter().collect::<Vec<_>>() == [(2, 2)]
                && census.entries()[&2].is_certified();
            Ok((ok, counts(&census)))
        }),
        check(g, "periodic certificate with seed a", || {
            let (table, certs, _) = built.clone()?;
            let a = table.alphabet().letter('a')?;
            let found = certs.iter().any(|c| {
                matches!(c, BranchPointCertificate::PeriodicFixedPoint { seed, .. } if *seed == a)
                    && c.replay(&theta, &table)
            });
            Ok((found, describe(&table, &certs)))
        }),
        check(
            g,
            "common-suffix certificate a.theta(y) = y replays to depth >= 30",
            || {
                let (table, certs, _) = built.clone()?;
                let found = certs.iter().any(|c| match c {
                    BranchPointCertificate::CommonSuffixLimit {
                        word,
                        period,
                        point_prefix,
                        ..
                    } => {
                        table.render(word) == "a"
                            && *period == 1
                            && point_prefix.len() >= 30
                            && c.replay(&theta, &table)
                    }
                    _ => false,
                });
                Ok((found, describe(&table, &certs)))
            },
        ),
        check(g, "aut upper bound is 2", || {
            let (_, _, census) = built.clone()?;
            let m = aut_upper_bound(&census)?;
            Ok((m == 2, format!("M = {m}")))
        }),
        check(
            g,
            "radius 2 depth 12 search finds only shift powers",
            || {
                let table = Arc::new(build_language(&theta, 16)?);
                let found = shift_exponents(&enumerate_endomorphisms(&table, 2, 12)?);
                Ok((found.iter().all(Option::is_some), format!("{found:?}")))
            },
        ),
    ]
}

fn describe(table: &LanguageTable, certs: &[BranchPointCertificate]) -> String {
    certs
        .iter()
        .map(|c| {
            format!(
                "{} q={} letters={} y={}...",
                c.kind(),
                c.period(),
                table.render(c.letters()),
                table.render(&c.point_prefix()[..c.point_prefix().len().min(12)])
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Depth exponent of the Thue–Morse prefix behind the Morse-mirror table.
pub const HEDLUND_EXPONENT: usize = 14;

fn hedlund_checks() -> Vec<ClaimCheck> {
    let g = "hedlund";
    let system = morse_mirror_system(HEDLUND_EXPONENT);
    vec![
        check(g, "Phi passes verify_endomorphism at depth 20", || {
            let (table, phi) = system.clone()?;
            let report = verify_endomorphism(&phi, &table, 20)?;
            Ok((true, format!("verified_depth = {}", report.verified_depth)))
        }),
        check(g, "Phi^2 = sigma^2", || {
            let (table, phi) = system.clone()?;
            let square = crate::block_code::compose(&phi, &phi)?;
            let ok = equals(&square, &shift_power(2, &table)?, &table)?;
            let root = find_root_relation(&phi, &table, 2, 6)?;
            Ok((ok, format!("least root relation {root:?}")))
        }),
        check(g, "Phi != sigma^n for 0 <= n <= 6", || {
            let (table, phi) = system.clone()?;
            for n in 0..=6 {
                if equals(&phi, &shift_power(n, &table)?, &table)? {
                    return Ok((false, format!("Phi = sigma^{n}")));
                }
            }
            Ok((true, "no n in 0..=6".into()))
        }),
    ]
}

fn bound_checks() -> Vec<ClaimCheck> {
    let g = "bounds";
    vec![
        check(g, "2(K+1)(2K+3)^2 at K = 1, 2, 3 is 100, 294, 648", || {
            let v = [lr_aut_bound(1)?, lr_aut_bound(2)?, lr_aut_bound(3)?];
            Ok((v == [100, 294, 648], format!("{v:?}")))
        }),
        check(g, "2K(2K+1)^2 at K = 1, 2, 4 is 18, 100, 648", || {
            let v = [
                cassaigne_s_bound(1)?,
                cassaigne_s_bound(2)?,
                cassaigne_s_bound(4)?,
            ];
            Ok((v == [18, 100, 648], format!("{v:?}")))
        }),
        check(
            g,
            "lr bound at K equals s bound at K+1 for K <= 100",
            || {
                for k in 1..=100 {
                    if lr_aut_bound(k)? != cassaigne_s_bound(k + 1)? {
                        return Ok((false, format!("K = {k}")));
                    }
                }
                Ok((true, "K = 1..=100".into()))
            },
        ),
        check(g, "root bound on 3 letters is 9", || {
            let v = substitution_root_bound(3)?;
            Ok((v == 9, v.to_string()))
        }),
    ]
}

/// Named tables the structural checks run over, each deep enough for a
/// depth-30 census.
pub fn example_tables() -> Result<Vec<(String, LanguageTable)>> {
    let mut out = vec![
        (
            "Fibonacci".to_string(),
            build_language(&fibonacci(), CENSUS_TABLE_LENGTH)?,
        ),
        (
            "Thue-Morse".to_string(),
            build_language(&thue_morse(), CENSUS_TABLE_LENGTH)?,
        ),
        (
            "acb".to_string(),
            build_language(&acb(), CENSUS_TABLE_LENGTH)?,
        ),
    ];
    for cf in sturmian_examples() {
        out.push((
            format!("Sturmian {cf}"),
            sturmian_language(&cf, CENSUS_TABLE_LENGTH)?,
        ));
    }
    let (mirror, _) = morse_mirror_system_with_length(HEDLUND_EXPONENT, CENSUS_TABLE_LENGTH)?;
    out.push(("Morse mirror".to_string(), Arc::unwrap_or_clone(mirror)));
    Ok(out)
}

fn cassaigne_checks() -> Vec<ClaimCheck> {
    let g = "cassaigne";
    let tables = match example_tables() {
        Ok(t) => t,
        Err(e) => return vec![check(g, "build example tables", || Err(e))],
    };
    let mut out = Vec::new();
    for (name, table) in tables {
        out.push(check(
            g,
            format!("{name}: chains at depth 30 <= max s(n), n <= 30"),
            || {
                let tree = left_special_tree(&table, CENSUS_DEPTH)?;
                let max_s = (1..=CENSUS_DEPTH)
                    .map(|n| table.complexity_diff(n))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .max()
                    .unwrap_or(0);
                let chains = tree.chains().len();
                Ok((chains as i64 <= max_s, format!("{chains} <= {max_s}")))
            },
        ));
        out.push(check(
            g,
            format!("{name}: order sum >= census total"),
            || {
                let tree = left_special_tree(&table, CENSUS_DEPTH)?;
                let census = branch_census(&tree, &[]);
                let bound = asymptotic_upper_bound(&census)?;
                Ok((
                    bound.upper_bound_total >= census.total(),
                    format!("{} >= {}", bound.upper_bound_total, census.total()),
                ))
            },
        ));
    }
    out
}

/// Factors of length `n` of a word, by direct scan.
fn subwords(word: &[Letter], n: usize) -> BTreeSet<Word> {
    word.windows(n).map(Word::from).collect()
}

/// Every rule of memory 0 and anticipation `≤ radius`, tested one by one.
fn naive_endomorphisms(
    table: &Arc<LanguageTable>,
    radius: usize,
    depth: usize,
) -> Result<Vec<(usize, Vec<Letter>)>> {
    let k = table.alphabet().len();
    let mut out = Vec::new();
    for a in 0..=radius {
        let size = table.factors(a + 1).len();
        for mut number in 0..k.pow(size as u32) {
            let mut rule = Vec::with_capacity(size);
            for _ in 0..size {
                rule.push((number % k) as Letter);
                number /= k;
            }
            let code = SlidingBlockCode::from_rule(table, 0, a, rule)?;
            if !code.ignores_last_letter() && verify_endomorphism(&code, table, depth).is_ok() {
                out.push((a, code.rule().to_vec()));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn oracle_checks() -> Vec<ClaimCheck> {
    let g = "oracle";
    let mut out = Vec::new();
    for (name, sub) in [("Thue-Morse", thue_morse()), ("Fibonacci", fibonacci())] {
        out.push(check(
            g,
            format!("{name}: pruned search equals naive, radius <= 1"),
            || {
                let table = Arc::new(build_language(&sub, 12)?);
                let mut pruned: Vec<_> = enumerate_endomorphisms(&table, 1, 10)?
                    .into_iter()
                    .map(|r| (r.code.anticipation(), r.code.rule().to_vec()))
                    .collect();
                pruned.sort();
                let naive = naive_endomorphisms(&table, 1, 10)?;
                Ok((pruned == naive, format!("{} codes", pruned.len())))
            },
        ));
    }
    for (name, sub) in [
        ("Fibonacci", fibonacci()),
        ("Thue-Morse", thue_morse()),
        ("acb", acb()),
    ] {
        out.push(check(
            g,
            format!("{name}: factor sets equal iterate subwords, n <= 12"),
            || {
                let table = build_language(&sub, 12)?;
                let mut long = sub.iterate(0, 1)?;
                while long.len() < 20_000 {
                    long = sub.substitute(&long)?;
                }
                for n in 1..=12 {
                    let direct = subwords(&long, n);
                    let built: BTreeSet<Word> = table.factors(n).iter().cloned().collect();
                    if direct != built {
                        return Ok((false, format!("length {n} differs")));
                    }
                }
                Ok((true, format!("prefix of length {}", long.len())))
            },
        ));
    }
    out
}

fn thue_morse_checks() -> Vec<ClaimCheck> {
    let g = "thue-morse";
    let table = build_language(&thue_morse(), 12).map(Arc::new);
    vec![
        check(g, "p(1..10) = 2, 4, 6, 10, 12, 16, 20, 22, 24, 28", || {
            let table = table.clone()?;
            let p = (1..=10)
                .map(|n| table.complexity(n))
                .collect::<Result<Vec<_>>>()?;
            Ok((p == THUE_MORSE_COMPLEXITY, format!("{p:?}")))
        }),
        check(
            g,
            "0<->1 exchange found at radius 0 with root relation (2, 0)",
            || {
                let table = table.clone()?;
                let reports = enumerate_endomorphisms(&table, 0, 10)?;
                let swap = SlidingBlockCode::letter_map(&table, &[1, 0])?;
                let found = reports.iter().find(|r| r.code == swap);
                match found {
                    Some(r) => {
                        let root = find_root_relation(&r.code, &table, 2, 2)?;
                        Ok((root == Some((2, 0)), format!("root relation {root:?}")))
                    }
                    None => Ok((false, format!("{} codes, no exchange", reports.len()))),
                }
            },
        ),
    ]
}
