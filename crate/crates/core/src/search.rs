//! Exhaustive search for sliding block codes that map the language into itself.
//!
//! For each anticipation `a ≤ radius` the rule is assigned one window-length
//! factor at a time, in canonical order. A factor `f` of length `n + a` is
//! checked as soon as every window of `f` has an output, so a partial rule is
//! abandoned the moment one image leaves the language.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::block_code::{
    compose, equals, shift_power, verify_endomorphism, EndomorphismReport, SlidingBlockCode,
};
use crate::error::{Error, Result};
use crate::language::LanguageTable;
use crate::word::Letter;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of partial assignments visited over the whole search.
    pub node_budget: u64,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 50_000_000,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// One report per code, by anticipation, then by rule in canonical order.
    pub reports: Vec<EndomorphismReport>,
    pub nodes_visited: u64,
}

/// Every code of memory 0 and anticipation `≤ radius` whose images of factors
/// of length `n + a`, `n ≤ depth`, are factors. Codes are listed once, with
/// their smallest window.
pub fn enumerate_endomorphisms(
    table: &Arc<LanguageTable>,
    radius: usize,
    depth: usize,
) -> Result<Vec<EndomorphismReport>> {
    enumerate_endomorphisms_with(table, radius, depth, &SearchConfig::default()).map(|o| o.reports)
}

pub fn enumerate_endomorphisms_with(
    table: &Arc<LanguageTable>,
    radius: usize,
    depth: usize,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    if depth < radius + 1 {
        return Err(Error::OutOfRange {
            what: "depth",
            value: depth,
            min: radius + 1,
            max: usize::MAX,
        });
    }
    if depth + radius > table.max_length() {
        return Err(Error::TableTooShallow {
            needed: depth + radius,
            available: table.max_length(),
        });
    }
    let nodes = AtomicU64::new(0);
    let mut reports = Vec::new();
    for a in 0..=radius {
        let space = Space::new(table, a, depth);
        for rule in space.solve(&nodes, config)? {
            let code = SlidingBlockCode::from_rule(table, 0, a, rule)?;
            if code.ignores_last_letter() {
                continue;
            }
            reports.push(verify_endomorphism(&code, table, depth)?);
        }
    }
    Ok(SearchOutcome {
        reports,
        nodes_visited: nodes.load(Ordering::Relaxed),
    })
}

/// Window indices of one factor whose image must be a factor.
struct Check {
    windows: Vec<u32>,
}

struct Space<'a> {
    table: &'a LanguageTable,
    letters: Vec<Letter>,
    /// `triggers[v]` holds the checks whose largest window index is `v`.
    triggers: Vec<Vec<Check>>,
}

impl<'a> Space<'a> {
    fn new(table: &'a LanguageTable, anticipation: usize, depth: usize) -> Self {
        let window = anticipation + 1;
        let mut triggers: Vec<Vec<Check>> = (0..table.factors(window).len())
            .map(|_| Vec::new())
            .collect();
        for n in 1..=depth {
            for f in table.factors(n + anticipation) {
                let windows: Vec<u32> = f
                    .windows(window)
                    .map(|w| table.index_of(w).expect("subwords of factors are factors") as u32)
                    .collect();
                let last = *windows.iter().max().expect("nonempty") as usize;
                triggers[last].push(Check { windows });
            }
        }
        Space {
            table,
            letters: table.alphabet().letters().collect(),
            triggers,
        }
    }

    fn solve(&self, nodes: &AtomicU64, config: &SearchConfig) -> Result<Vec<Vec<Letter>>> {
        let size = self.triggers.len();
        let branch = |first: Letter| -> Result<Vec<Vec<Letter>>> {
            let mut rule = vec![0; size];
            let mut image = Vec::new();
            let mut found = Vec::new();
            self.descend(0, first, &mut rule, &mut image, &mut found, nodes, config)?;
            Ok(found)
        };
        let per_branch: Vec<Result<Vec<Vec<Letter>>>> = if config.parallel {
            self.letters.par_iter().map(|&l| branch(l)).collect()
        } else {
            self.letters.iter().map(|&l| branch(l)).collect()
        };
        let mut out = Vec::new();
        for found in per_branch {
            out.extend(found?);
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        var: usize,
        value: Letter,
        rule: &mut [Letter],
        image: &mut Vec<Letter>,
        found: &mut Vec<Vec<Letter>>,
        nodes: &AtomicU64,
        config: &SearchConfig,
    ) -> Result<()> {
        let visited = nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if visited > config.node_budget {
            return Err(Error::BudgetExceeded { nodes: visited });
        }
        rule[var] = value;
        for check in &self.triggers[var] {
            image.clear();
            image.extend(check.windows.iter().map(|&i| rule[i as usize]));
            if !self.table.contains(image) {
                return Ok(());
            }
        }
        if var + 1 == rule.len() {
            found.push(rule.to_vec());
            return Ok(());
        }
        for &l in &self.letters {
            self.descend(var + 1, l, rule, image, found, nodes, config)?;
        }
        Ok(())
    }
}

/// A code `d` among `candidates` with `d ∘ code` and `code ∘ d` both the
/// identity, first in the given order.
pub fn find_inverse<'c>(
    code: &SlidingBlockCode,
    candidates: impl IntoIterator<Item = &'c SlidingBlockCode>,
) -> Result<Option<&'c SlidingBlockCode>> {
    let table = code.table();
    let identity = shift_power(0, table)?;
    for d in candidates {
        if equals(&compose(d, code)?, &identity, table)?
            && equals(&compose(code, d)?, &identity, table)?
        {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Endomorphisms found at `radius` that have an inverse among the
/// endomorphisms of radius `≤ 2·radius`, each paired with that inverse.
pub fn invertible_endomorphisms(
    table: &Arc<LanguageTable>,
    radius: usize,
    depth: usize,
    config: &SearchConfig,
) -> Result<Vec<(EndomorphismReport, SlidingBlockCode)>> {
    let found = enumerate_endomorphisms_with(table, radius, depth, config)?.reports;
    let wide = enumerate_endomorphisms_with(table, 2 * radius, depth, config)?.reports;
    let candidates: Vec<&SlidingBlockCode> = wide.iter().map(|r| &r.code).collect();
    let mut out = Vec::new();
    for report in found {
        if let Some(inverse) = find_inverse(&report.code, candidates.iter().copied())? {
            let inverse = inverse.clone();
            out.push((report, inverse));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::build_language;
    use crate::substitution::catalog::*;

    /// Every rule, checked factor by factor.
    fn naive(table: &Arc<LanguageTable>, radius: usize, depth: usize) -> Vec<SlidingBlockCode> {
        let k = table.alphabet().len();
        let mut out = Vec::new();
        for a in 0..=radius {
            let size = table.factors(a + 1).len();
            for mut code_number in 0..k.pow(size as u32) {
                let mut rule = Vec::with_capacity(size);
                for _ in 0..size {
                    rule.push((code_number % k) as Letter);
                    code_number /= k;
                }
                let code = SlidingBlockCode::from_rule(table, 0, a, rule).unwrap();
                if !code.ignores_last_letter() && verify_endomorphism(&code, table, depth).is_ok() {
                    out.push(code);
                }
            }
        }
        out
    }

    fn sorted(mut codes: Vec<SlidingBlockCode>) -> Vec<(usize, Vec<Letter>)> {
        let mut v: Vec<_> = codes
            .drain(..)
            .map(|c| (c.anticipation(), c.rule().to_vec()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn fibonacci_finds_only_shift_powers() {
        let table = Arc::new(build_language(&fibonacci(), 16).unwrap());
        let reports = enumerate_endomorphisms(&table, 2, 12).unwrap();
        let shifts: Vec<_> = reports.iter().map(|r| r.shift_power_equivalent).collect();
        assert_eq!(shifts, [Some(0), Some(1), Some(2)]);
        let inv = invertible_endomorphisms(&table, 2, 12, &SearchConfig::default()).unwrap();
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0].0.shift_power_equivalent, Some(0));
    }

    #[test]
    fn pruned_matches_naive() {
        for sub in [fibonacci(), thue_morse(), acb()] {
            let table = Arc::new(build_language(&sub, 10).unwrap());
            let pruned: Vec<_> = enumerate_endomorphisms(&table, 1, 8)
                .unwrap()
                .into_iter()
                .map(|r| r.code)
                .collect();
            assert_eq!(sorted(pruned), sorted(naive(&table, 1, 8)));
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let table = Arc::new(build_language(&thue_morse(), 14).unwrap());
        let run = |parallel| {
            enumerate_endomorphisms_with(
                &table,
                2,
                10,
                &SearchConfig {
                    node_budget: u64::MAX,
                    parallel,
                },
            )
            .unwrap()
        };
        let (a, b) = (run(true), run(false));
        assert_eq!(a.reports, b.reports);
        assert_eq!(a.nodes_visited, b.nodes_visited);
    }

    #[test]
    fn budget_is_enforced() {
        let table = Arc::new(build_language(&thue_morse(), 14).unwrap());
        let config = SearchConfig {
            node_budget: 5,
            parallel: false,
        };
        assert!(matches!(
            enumerate_endomorphisms_with(&table, 2, 10, &config),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn thue_morse_exchange_at_radius_zero() {
        let table = Arc::new(build_language(&thue_morse(), 12).unwrap());
        let reports = enumerate_endomorphisms(&table, 0, 10).unwrap();
        let rules: Vec<_> = reports.iter().map(|r| r.code.rule().to_vec()).collect();
        assert_eq!(rules, [vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn table_depth_checked() {
        let table = Arc::new(build_language(&fibonacci(), 8).unwrap());
        assert!(matches!(
            enumerate_endomorphisms(&table, 2, 8),
            Err(Error::TableTooShallow { .. })
        ));
    }
}
