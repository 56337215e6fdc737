//! Branch points: left-special trees, certificates for substitution shifts,
//! branch censuses and the automorphism bounds derived from them.
//!
//! A one-sided point of a minimal shift is a branch point of order `k` when it
//! has exactly `k` preimages under the shift, i.e. exactly `k` letters `a` with
//! `a·x` in the shift. Every prefix of a branch point is a left-special factor,
//! so branch points are the infinite paths of the tree of left-special factors.
//! A finite table only sees finitely many levels of that tree; finite
//! side-branches that die out later are filtered by requiring a chain to reach
//! the deepest level the table supports (its horizon).

use std::collections::{BTreeMap, HashMap};

use serde_json::json;

use crate::error::{Error, Result};
use crate::language::{LanguageTable, Side};
use crate::substitution::Substitution;
use crate::word::{common_suffix_len, Alphabet, Letter, Word};

/// A left-special factor with its left-extension set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub word: Word,
    pub extensions: Vec<Letter>,
}

/// A depth-`N` left-special word that survives to the horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    /// The length-`depth` left-special word (prefix of the candidate branch point).
    pub word: Word,
    /// Left extensions of `word` itself.
    pub extensions: Vec<Letter>,
    /// Left extensions at the horizon (largest among surviving descendants).
    pub limit_extensions: Vec<Letter>,
    /// Number of horizon-level left-special words descending from `word`.
    pub survivors: usize,
}

impl Chain {
    /// Branch-order candidate: size of the limiting extension set.
    pub fn order(&self) -> usize {
        self.limit_extensions.len()
    }
}

/// Left-special factors of a table, level by level up to the horizon
/// `max_length - 1`, with the depth-`N` chains that reach the horizon.
#[derive(Clone, Debug)]
pub struct LeftSpecialTree {
    depth: usize,
    horizon: usize,
    levels: Vec<Vec<TreeNode>>,
    chains: Vec<Chain>,
}

impl LeftSpecialTree {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Left-special words of length `n` (`1 ≤ n ≤ horizon`).
    pub fn level(&self, n: usize) -> &[TreeNode] {
        if n == 0 || n > self.horizon {
            return &[];
        }
        &self.levels[n - 1]
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    /// Extension-set sizes along the prefixes of `chain.word`, lengths `1..=depth`.
    pub fn extension_profile(&self, chain: &Chain) -> Vec<usize> {
        (1..=self.depth)
            .map(|n| {
                self.level(n)
                    .iter()
                    .find(|node| node.word.as_slice() == &chain.word[..n])
                    .map_or(0, |node| node.extensions.len())
            })
            .collect()
    }
}

/// Builds the left-special tree of `table` and its chains at `depth`.
pub fn left_special_tree(table: &LanguageTable, depth: usize) -> Result<LeftSpecialTree> {
    let horizon = table.max_length().saturating_sub(1);
    if depth == 0 || depth > horizon {
        return Err(Error::OutOfRange {
            what: "depth",
            value: depth,
            min: 1,
            max: horizon,
        });
    }
    let levels: Vec<Vec<TreeNode>> = (1..=horizon)
        .map(|n| {
            table.special_words(n, Side::Left).map(|words| {
                words
                    .into_iter()
                    .map(|s| TreeNode {
                        word: s.word,
                        extensions: s.extensions,
                    })
                    .collect()
            })
        })
        .collect::<Result<_>>()?;

    let mut grouped: BTreeMap<&[Letter], Vec<&TreeNode>> = BTreeMap::new();
    for node in &levels[horizon - 1] {
        grouped.entry(&node.word[..depth]).or_default().push(node);
    }
    let chains = grouped
        .into_iter()
        .map(|(prefix, survivors)| {
            let extensions = levels[depth - 1]
                .iter()
                .find(|n| n.word.as_slice() == prefix)
                .map(|n| n.extensions.clone())
                .expect("prefixes of left-special words are left-special");
            let limit_extensions = survivors
                .iter()
                .max_by_key(|n| n.extensions.len())
                .map(|n| n.extensions.clone())
                .unwrap_or_default();
            Chain {
                word: Word::from(prefix),
                extensions,
                limit_extensions,
                survivors: survivors.len(),
            }
        })
        .collect();
    Ok(LeftSpecialTree {
        depth,
        horizon,
        levels,
        chains,
    })
}

/// Algebraic evidence that a point of a substitution shift is a branch point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchPointCertificate {
    /// `y = θ^q(y)` grown from `seed`; every letter in `extension_letters` is
    /// the last letter of its own θ^q-image and precedes `seed` in the language.
    PeriodicFixedPoint {
        period: usize,
        seed: Letter,
        extension_letters: Vec<Letter>,
        point_prefix: Word,
    },
    /// `y = w·θ^q(y)`, the limit of growing maximal proper common suffixes of
    /// θⁿ-images of the letters in `letters`.
    CommonSuffixLimit {
        letters: Vec<Letter>,
        period: usize,
        word: Word,
        point_prefix: Word,
    },
}

impl BranchPointCertificate {
    pub fn point_prefix(&self) -> &Word {
        match self {
            Self::PeriodicFixedPoint { point_prefix, .. }
            | Self::CommonSuffixLimit { point_prefix, .. } => point_prefix,
        }
    }

    /// Letters `a` certified to satisfy `a·y ∈ X`.
    pub fn letters(&self) -> &[Letter] {
        match self {
            Self::PeriodicFixedPoint {
                extension_letters, ..
            } => extension_letters,
            Self::CommonSuffixLimit { letters, .. } => letters,
        }
    }

    pub fn order(&self) -> usize {
        self.letters().len()
    }

    pub fn period(&self) -> usize {
        match self {
            Self::PeriodicFixedPoint { period, .. } | Self::CommonSuffixLimit { period, .. } => {
                *period
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::PeriodicFixedPoint { .. } => "periodic-fixed-point",
            Self::CommonSuffixLimit { .. } => "common-suffix-limit",
        }
    }

    /// Re-checks the defining equation on the stored prefix, and that each
    /// certified letter extends the prefix to the left inside `table`.
    pub fn replay(&self, theta: &Substitution, table: &LanguageTable) -> bool {
        let prefix = self.point_prefix();
        let image = match self {
            Self::PeriodicFixedPoint { period, seed, .. } => {
                if prefix.first() != Some(seed)
                    || theta.first_letter_of_power(*seed, *period) != *seed
                    || !self
                        .letters()
                        .iter()
                        .all(|&a| theta.last_letter_of_power(a, *period) == a)
                {
                    return false;
                }
                match theta.iterate_word(prefix, *period) {
                    Ok(w) => w,
                    Err(_) => return false,
                }
            }
            Self::CommonSuffixLimit { period, word, .. } => {
                match theta.iterate_word(prefix, *period) {
                    Ok(w) => word.concat(&w),
                    Err(_) => return false,
                }
            }
        };
        if image.len() <= prefix.len() || !image.starts_with(prefix) {
            return false;
        }
        extends_left(table, self.letters(), prefix)
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        let letters: Vec<String> = self
            .letters()
            .iter()
            .map(|&l| alphabet.symbol(l).to_string())
            .collect();
        match self {
            Self::PeriodicFixedPoint {
                period,
                seed,
                point_prefix,
                ..
            } => json!({
                "kind": self.kind(),
                "period": period,
                "seed": alphabet.symbol(*seed).to_string(),
                "extension_letters": letters,
                "point_prefix": alphabet.render(point_prefix),
                "order": self.order(),
            }),
            Self::CommonSuffixLimit {
                period,
                word,
                point_prefix,
                ..
            } => json!({
                "kind": self.kind(),
                "period": period,
                "word": alphabet.render(word),
                "letters": letters,
                "point_prefix": alphabet.render(point_prefix),
                "order": self.order(),
            }),
        }
    }
}

/// Whether `a·prefix` (truncated to the table depth) is a factor for every `a`.
fn extends_left(table: &LanguageTable, letters: &[Letter], prefix: &[Letter]) -> bool {
    let m = prefix.len().min(table.max_length() - 1);
    let mut buf = Vec::with_capacity(m + 1);
    letters.iter().all(|&a| {
        buf.clear();
        buf.push(a);
        buf.extend_from_slice(&prefix[..m]);
        table.contains(&buf)
    })
}

/// Certificates for θ-periodic branch points.
///
/// For each seed letter `c` and period `q ≤ max_period` with θ^q(c) starting
/// with `c`, collects the letters `a` that end θ^q(a) and satisfy `a·c ∈ L`.
/// Such an `a` precedes ever longer prefixes of the fixed point, since
/// θ^{qn}(a·c) ends with `a` followed by θ^{qn}(c). One certificate per seed,
/// using the smallest period that attains the largest letter set.
pub fn certify_branch_periodic(
    theta: &Substitution,
    table: &LanguageTable,
    max_period: usize,
) -> Vec<BranchPointCertificate> {
    let mut out = Vec::new();
    for seed in theta.alphabet().letters() {
        let mut best: Option<(usize, Vec<Letter>)> = None;
        for q in 1..=max_period {
            if theta.first_letter_of_power(seed, q) != seed {
                continue;
            }
            let letters: Vec<Letter> = theta
                .alphabet()
                .letters()
                .filter(|&a| theta.last_letter_of_power(a, q) == a && table.contains(&[a, seed]))
                .collect();
            if letters.len() >= 2 && best.as_ref().is_none_or(|(_, b)| letters.len() > b.len()) {
                best = Some((q, letters));
            }
        }
        let Some((period, extension_letters)) = best else {
            continue;
        };
        let Some(point_prefix) = theta.fixed_point_prefix(seed, period, table.max_length()) else {
            continue;
        };
        let cert = BranchPointCertificate::PeriodicFixedPoint {
            period,
            seed,
            extension_letters,
            point_prefix,
        };
        if cert.replay(theta, table) {
            out.push(cert);
        }
    }
    out
}

type Pair = (Letter, Letter);

fn pair(a: Letter, b: Letter) -> Pair {
    (a.min(b), a.max(b))
}

/// Certificates for branch points arising as limits of common suffixes.
///
/// For letters `x ≠ y` let `c` be the maximal proper common suffix of θ(x)
/// and θ(y), and `{x', y'}` the letters just before it. Then the common suffix
/// of θⁿ(x), θⁿ(y) is built from the common suffix for `{x', y'}` at `n-1`
/// followed by θ^{n-1}(c). A pair lying on a cycle of length `r` of this
/// pair map therefore yields a point `y` with `w·θ^r(y) = y` whose left
/// extensions include the pair. Growth is confirmed directly on θ^r and
/// θ^{2r}, and the equation is replayed to the table depth. Certificates for
/// the same limit point are merged.
pub fn certify_branch_suffix(
    theta: &Substitution,
    table: &LanguageTable,
    max_period: usize,
) -> Vec<BranchPointCertificate> {
    let letters: Vec<Letter> = theta.alphabet().letters().collect();
    let mut step: HashMap<Pair, (Pair, Word)> = HashMap::new();
    let mut pairs = Vec::new();
    for (i, &x) in letters.iter().enumerate() {
        for &y in &letters[i + 1..] {
            let (ix, iy) = (theta.image(x), theta.image(y));
            let cs = common_suffix_len(ix, iy);
            if cs == 0 || cs >= ix.len().min(iy.len()) {
                continue;
            }
            let before = pair(ix[ix.len() - cs - 1], iy[iy.len() - cs - 1]);
            step.insert((x, y), (before, Word::from(&ix[ix.len() - cs..])));
            pairs.push((x, y));
        }
    }

    let target = table.max_length();
    let mut found: BTreeMap<Word, BranchPointCertificate> = BTreeMap::new();
    for &start in &pairs {
        // q₀ = start, q_{i+1} = P(q_i); look for q_r = start
        let mut cycle = vec![start];
        let mut period = None;
        let mut cur = start;
        for r in 1..=max_period {
            match step.get(&cur) {
                Some(&(next, _)) if next == start => {
                    period = Some(r);
                    break;
                }
                Some(&(next, _)) => {
                    cycle.push(next);
                    cur = next;
                }
                None => break,
            }
        }
        let Some(r) = period else { continue };

        // w = c_{q_{r-1}} θ(c_{q_{r-2}}) … θ^{r-1}(c_{q_0})
        let mut w = step[&cycle[0]].1.clone();
        for q in &cycle[1..] {
            w = step[q].1.concat(&theta.substitute_unchecked(&w));
        }

        let (x, y) = start;
        let grows = |k: usize| -> Option<usize> {
            let a = theta.iterate(x, k).ok()?;
            let b = theta.iterate(y, k).ok()?;
            Some(common_suffix_len(&a, &b))
        };
        match (grows(r), grows(2 * r)) {
            (Some(first), Some(second)) if first > 0 && second > first => {}
            _ => continue,
        }

        let mut point = w.clone();
        while point.len() < target {
            let next = w.concat(&theta.iterate_word(&point, r).expect("letters in range"));
            point = next;
        }
        point.truncate(target);
        let cert = BranchPointCertificate::CommonSuffixLimit {
            letters: vec![x, y],
            period: r,
            word: w,
            point_prefix: point,
        };
        if !cert.replay(theta, table) {
            continue;
        }
        match found.get_mut(cert.point_prefix()) {
            Some(BranchPointCertificate::CommonSuffixLimit {
                letters, period, ..
            }) => {
                letters.extend([x, y]);
                letters.sort_unstable();
                letters.dedup();
                *period = (*period).min(r);
            }
            _ => {
                found.insert(cert.point_prefix().clone(), cert);
            }
        }
    }
    found.into_values().collect()
}

/// Periodic and common-suffix certificates together.
pub fn certify_branch_points(
    theta: &Substitution,
    table: &LanguageTable,
    max_period: usize,
) -> Vec<BranchPointCertificate> {
    let mut certs = certify_branch_periodic(theta, table, max_period);
    certs.extend(certify_branch_suffix(theta, table, max_period));
    certs
}

/// Count and certification status for one branch order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CensusEntry {
    pub count: usize,
    pub certified: usize,
}

impl CensusEntry {
    /// Every branch point of this order is matched to a certificate.
    pub fn is_certified(&self) -> bool {
        self.count > 0 && self.certified == self.count
    }
}

/// How one chain entered the census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusChain {
    pub word: Word,
    pub order: usize,
    /// Index into the certificate list the census was built from.
    pub certificate: Option<usize>,
}

/// `M_k`: number of branch points of order `k`, by order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchCensus {
    depth: usize,
    entries: BTreeMap<usize, CensusEntry>,
    chains: Vec<CensusChain>,
}

impl BranchCensus {
    /// A census from bare counts (all entries empirical).
    pub fn from_counts(counts: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (order, count) in counts {
            if order < 2 {
                return Err(Error::InvalidArgument(format!(
                    "branch order {order} is below 2"
                )));
            }
            entries.insert(
                order,
                CensusEntry {
                    count,
                    certified: 0,
                },
            );
        }
        Ok(BranchCensus {
            depth: 0,
            entries,
            chains: Vec::new(),
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn entries(&self) -> &BTreeMap<usize, CensusEntry> {
        &self.entries
    }

    pub fn chains(&self) -> &[CensusChain] {
        &self.chains
    }

    /// `{k: M_k}` for the nonzero entries.
    pub fn counts(&self) -> BTreeMap<usize, usize> {
        self.entries
            .iter()
            .filter(|(_, e)| e.count > 0)
            .map(|(&k, e)| (k, e.count))
            .collect()
    }

    /// Total number of branch points counted.
    pub fn total(&self) -> usize {
        self.entries.values().map(|e| e.count).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts: serde_json::Map<String, serde_json::Value> = self
            .counts()
            .into_iter()
            .map(|(k, m)| (k.to_string(), json!(m)))
            .collect();
        let certified: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .filter(|(_, e)| e.count > 0)
            .map(|(&k, e)| (k.to_string(), json!(e.is_certified())))
            .collect();
        json!({ "counts": counts, "certified": certified, "depth": self.depth })
    }
}

/// Counts the tree's chains by branch order, matching chains one-to-one with
/// certificates whose point starts with the chain word and whose letters equal
/// the chain's limiting extension set.
pub fn branch_census(
    tree: &LeftSpecialTree,
    certificates: &[BranchPointCertificate],
) -> BranchCensus {
    let mut used = vec![false; certificates.len()];
    let mut entries: BTreeMap<usize, CensusEntry> = BTreeMap::new();
    let mut chains = Vec::with_capacity(tree.chains().len());
    for chain in tree.chains() {
        let matched = certificates.iter().enumerate().position(|(i, cert)| {
            !used[i]
                && cert.point_prefix().starts_with(&chain.word)
                && cert.letters() == chain.limit_extensions.as_slice()
        });
        if let Some(i) = matched {
            used[i] = true;
        }
        let entry = entries.entry(chain.order()).or_default();
        entry.count += 1;
        entry.certified += usize::from(matched.is_some());
        chains.push(CensusChain {
            word: chain.word.clone(),
            order: chain.order(),
            certificate: matched,
        });
    }
    BranchCensus {
        depth: tree.depth(),
        entries,
        chains,
    }
}

/// `M = min_k M_k` over orders with `M_k ≥ 1`; bounds `|Aut(X,σ)|`.
pub fn aut_upper_bound(census: &BranchCensus) -> Result<usize> {
    census
        .entries
        .values()
        .map(|e| e.count)
        .filter(|&c| c > 0)
        .min()
        .ok_or(Error::EmptyCensus)
}

/// Upper-bound profile of the ∼-classes of right-asymptotic orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticCensus {
    /// `{k: M̄_k}`; an upper-bound profile unless `exact`.
    pub class_size_counts: BTreeMap<usize, usize>,
    /// `Σ k·M_k`, bounding the number of right-asymptotic orbits.
    pub upper_bound_total: usize,
    pub exact: bool,
}

impl AsymptoticCensus {
    /// An exact census from a known decomposition into ∼-classes.
    pub fn from_classes(sizes: &[usize]) -> Result<Self> {
        let mut class_size_counts = BTreeMap::new();
        for &size in sizes {
            if size < 2 {
                return Err(Error::InvalidArgument(format!(
                    "class size {size} is below 2"
                )));
            }
            *class_size_counts.entry(size).or_insert(0) += 1;
        }
        if class_size_counts.is_empty() {
            return Err(Error::EmptyCensus);
        }
        Ok(AsymptoticCensus {
            class_size_counts,
            upper_bound_total: sizes.iter().sum(),
            exact: true,
        })
    }

    /// `M̄ = min_k M̄_k` over nonzero entries; bounds `|Aut(X̄,σ̄)/{σ̄ⁿ}|`.
    pub fn m_bar(&self) -> usize {
        self.class_size_counts
            .values()
            .copied()
            .filter(|&c| c > 0)
            .min()
            .expect("census is nonempty")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts: serde_json::Map<String, serde_json::Value> = self
            .class_size_counts
            .iter()
            .map(|(k, m)| (k.to_string(), json!(m)))
            .collect();
        json!({
            "class_size_counts": counts,
            "upper_bound_total": self.upper_bound_total,
            "m_bar": self.m_bar(),
            "exact": self.exact,
        })
    }
}

/// Order-sum bound on right-asymptotic orbits, with each order-`k` branch
/// point contributing at most one class of size at most `k`.
pub fn asymptotic_upper_bound(census: &BranchCensus) -> Result<AsymptoticCensus> {
    let class_size_counts = census.counts();
    if class_size_counts.is_empty() {
        return Err(Error::EmptyCensus);
    }
    Ok(AsymptoticCensus {
        upper_bound_total: class_size_counts.iter().map(|(k, m)| k * m).sum(),
        class_size_counts,
        exact: false,
    })
}

/// `k²`: any automorphism of a primitive substitution shift on `k` letters is
/// at most a `k²`-th root of the shift.
pub fn substitution_root_bound(alphabet_size: usize) -> Result<usize> {
    if alphabet_size < 2 {
        return Err(Error::OutOfRange {
            what: "alphabet_size",
            value: alphabet_size,
            min: 2,
            max: usize::MAX,
        });
    }
    alphabet_size
        .checked_mul(alphabet_size)
        .ok_or_else(|| Error::InvalidArgument("alphabet size overflows".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::build_language;
    use crate::substitution::catalog::*;

    #[test]
    fn bounds_on_plain_counts() {
        let c = BranchCensus::from_counts([(2, 2)]).unwrap();
        assert_eq!(aut_upper_bound(&c).unwrap(), 2);
        let a = asymptotic_upper_bound(&c).unwrap();
        assert_eq!((a.upper_bound_total, a.m_bar(), a.exact), (4, 2, false));

        let c = BranchCensus::from_counts([(2, 1)]).unwrap();
        assert_eq!(aut_upper_bound(&c).unwrap(), 1);
        let a = asymptotic_upper_bound(&c).unwrap();
        assert_eq!((a.upper_bound_total, a.m_bar()), (2, 1));

        let c = BranchCensus::from_counts([(2, 5), (3, 1)]).unwrap();
        assert_eq!(aut_upper_bound(&c).unwrap(), 1);

        let zero = BranchCensus::from_counts([(2, 0)]).unwrap();
        assert_eq!(aut_upper_bound(&zero), Err(Error::EmptyCensus));
        assert_eq!(asymptotic_upper_bound(&zero), Err(Error::EmptyCensus));
        assert!(BranchCensus::from_counts([(1, 3)]).is_err());
    }

    #[test]
    fn exact_classes() {
        let a = AsymptoticCensus::from_classes(&[2, 2, 3]).unwrap();
        assert!(a.exact);
        assert_eq!(a.upper_bound_total, 7);
        assert_eq!(a.m_bar(), 1);
        assert!(AsymptoticCensus::from_classes(&[]).is_err());
    }

    #[test]
    fn root_bound() {
        assert_eq!(substitution_root_bound(2).unwrap(), 4);
        assert_eq!(substitution_root_bound(3).unwrap(), 9);
        assert_eq!(substitution_root_bound(10).unwrap(), 100);
        assert!(substitution_root_bound(1).is_err());
    }

    #[test]
    fn acb_periodic_certificate() {
        let theta = acb();
        let table = build_language(&theta, 40).unwrap();
        let certs = certify_branch_periodic(&theta, &table, 2);
        assert_eq!(certs.len(), 1);
        match &certs[0] {
            BranchPointCertificate::PeriodicFixedPoint {
                period,
                seed,
                extension_letters,
                point_prefix,
            } => {
                assert_eq!(*period, 2);
                assert_eq!(*seed, 0);
                assert_eq!(table.render(extension_letters), "ab");
                assert_eq!(point_prefix.len(), 40);
                assert_eq!(&table.render(point_prefix)[..12], "acbacaabaacb");
            }
            other => panic!("unexpected {other:?}"),
        }
        // q = 1 alone: no letter ends its own image
        assert!(certify_branch_periodic(&theta, &table, 1).is_empty());
    }

    #[test]
    fn acb_suffix_certificate() {
        let theta = acb();
        let table = build_language(&theta, 40).unwrap();
        let certs = certify_branch_suffix(&theta, &table, 3);
        assert_eq!(certs.len(), 1);
        let cert = &certs[0];
        match cert {
            BranchPointCertificate::CommonSuffixLimit {
                letters,
                period,
                word,
                point_prefix,
            } => {
                assert_eq!(table.render(letters), "bc");
                assert_eq!(*period, 1);
                assert_eq!(table.render(word), "a");
                // y = a θ(a) θ²(a) … = a acb acbacaaba …
                assert_eq!(&table.render(point_prefix)[..13], "aacbacbacaaba");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(cert.replay(&theta, &table));
    }

    #[test]
    fn no_common_suffixes() {
        let theta = Substitution::from_rules([('a', "ab"), ('b', "ba")]).unwrap();
        let table = build_language(&theta, 10).unwrap();
        assert!(certify_branch_suffix(&theta, &table, 3).is_empty());
        let fib = fibonacci();
        let table = build_language(&fib, 10).unwrap();
        assert!(certify_branch_suffix(&fib, &table, 3).is_empty());
    }

    #[test]
    fn fibonacci_and_thue_morse_periodic() {
        // θ²(0) = 010 ends in 0, θ²(1) = 01 ends in 1; 00 and 10 are factors
        let fib = fibonacci();
        let table = build_language(&fib, 20).unwrap();
        let certs = certify_branch_periodic(&fib, &table, 2);
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].period(), 2);
        assert_eq!(certs[0].order(), 2);

        let tm = thue_morse();
        let table = build_language(&tm, 20).unwrap();
        let certs = certify_branch_periodic(&tm, &table, 2);
        assert_eq!(certs.len(), 2);
        assert!(certs.iter().all(|c| c.period() == 2 && c.order() == 2));
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let theta = acb();
        let table = build_language(&theta, 30).unwrap();
        let mut cert = certify_branch_suffix(&theta, &table, 2).remove(0);
        if let BranchPointCertificate::CommonSuffixLimit { word, .. } = &mut cert {
            *word = theta.alphabet().parse("b").unwrap();
        }
        assert!(!cert.replay(&theta, &table));
    }

    #[test]
    fn acb_census() {
        let theta = acb();
        let table = build_language(&theta, 121).unwrap();
        let tree = left_special_tree(&table, 30).unwrap();
        assert_eq!(tree.chains().len(), 2);
        for chain in tree.chains() {
            assert_eq!(chain.order(), 2);
            let profile = tree.extension_profile(chain);
            assert!(profile.windows(2).all(|w| w[0] >= w[1]));
        }
        let certs = certify_branch_points(&theta, &table, 3);
        let census = branch_census(&tree, &certs);
        assert_eq!(census.counts(), BTreeMap::from([(2, 2)]));
        assert!(census.entries()[&2].is_certified());
        assert_eq!(aut_upper_bound(&census).unwrap(), 2);
    }

    #[test]
    fn shallow_horizon_sees_transient_branches() {
        // at horizon 31 a side branch of the fixed point is still alive
        let table = build_language(&acb(), 31).unwrap();
        let tree = left_special_tree(&table, 30).unwrap();
        assert_eq!(tree.chains().len(), 3);
    }

    #[test]
    fn tree_depth_range() {
        let table = build_language(&fibonacci(), 10).unwrap();
        assert!(left_special_tree(&table, 10).is_err());
        assert!(left_special_tree(&table, 0).is_err());
        assert!(left_special_tree(&table, 9).is_ok());
    }
}
