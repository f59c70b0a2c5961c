//! Group divisible designs: verification, transversal designs from MOLS,
//! inflation by a weight, and 4-GDDs of type 24^t.
//!
//! A k-GDD of type `g^u` has `gu` points split into `u` groups of size `g`,
//! and blocks of size `k` such that two points in different groups share
//! exactly one block while two points in one group share none.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

mod mols;
mod search;
mod store;

pub use mols::{
    is_latin, kronecker_mols, mols_binary_field, mols_for_order, mols_prime_power, orthogonal,
    td_from_mols, MolsSet,
};
pub use search::{exact_cover_search, orbit_search, SearchLimits};
pub use store::IngredientStore;

/// Group sizes of a GDD, as `(size, multiplicity)` runs: `6^4 3^1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GddType {
    pub parts: Vec<(usize, usize)>,
}

impl GddType {
    pub fn uniform(g: usize, u: usize) -> GddType {
        GddType {
            parts: vec![(g, u)],
        }
    }

    /// Group sizes in order, one entry per group.
    pub fn group_sizes(&self) -> Vec<usize> {
        self.parts
            .iter()
            .flat_map(|&(g, u)| std::iter::repeat_n(g, u))
            .collect()
    }

    pub fn point_count(&self) -> usize {
        self.parts.iter().map(|&(g, u)| g * u).sum()
    }

    pub fn group_count(&self) -> usize {
        self.parts.iter().map(|&(_, u)| u).sum()
    }

    /// Pairs of points lying in different groups.
    pub fn cross_pairs(&self) -> usize {
        let v = self.point_count();
        v * (v.saturating_sub(1)) / 2
            - self
                .group_sizes()
                .iter()
                .map(|g| g * g.saturating_sub(1) / 2)
                .sum::<usize>()
    }

    fn from_sizes(sizes: impl IntoIterator<Item = usize>) -> GddType {
        let mut parts: Vec<(usize, usize)> = Vec::new();
        for g in sizes {
            match parts.last_mut() {
                Some((last, u)) if *last == g => *u += 1,
                _ => parts.push((g, 1)),
            }
        }
        GddType { parts }
    }
}

impl fmt::Display for GddType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (g, u)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}^{u}")?;
        }
        Ok(())
    }
}

impl FromStr for GddType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::Precondition(format!("bad GDD type {s:?} (expected e.g. 3^5 or 6^4 3^1)"));
        let mut parts = Vec::new();
        for token in s.split_whitespace() {
            let (g, u) = token.split_once('^').ok_or_else(bad)?;
            let g: usize = g.parse().map_err(|_| bad())?;
            let u: usize = u.parse().map_err(|_| bad())?;
            if g == 0 || u == 0 {
                return Err(bad());
            }
            parts.push((g, u));
        }
        if parts.is_empty() {
            return Err(bad());
        }
        Ok(GddType { parts })
    }
}

/// A group divisible design on points `0..point_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gdd {
    k: usize,
    point_count: usize,
    groups: Vec<Vec<u32>>,
    blocks: Vec<Vec<u32>>,
    provenance: String,
}

impl Gdd {
    /// Assembles a GDD without verifying it; the point count is the total
    /// size of the groups. Call [`Gdd::verified`] before handing it out.
    pub fn new(k: usize, groups: Vec<Vec<u32>>, blocks: Vec<Vec<u32>>) -> Result<Gdd> {
        if k < 2 {
            return Err(Error::Precondition(format!("block size {k} < 2")));
        }
        let point_count = groups.iter().map(Vec::len).sum();
        Ok(Gdd {
            k,
            point_count,
            groups,
            blocks,
            provenance: String::new(),
        })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Gdd {
        self.provenance = provenance.into();
        self
    }

    /// Runs [`verify_gdd`] and fails unless it passes.
    pub fn verified(self) -> Result<Gdd> {
        let report = verify_gdd(&self);
        if report.pass {
            Ok(self)
        } else {
            Err(Error::VerificationFailed(format!(
                "{}-GDD of type {}: {}",
                self.k,
                self.gdd_type(),
                report.summary()
            )))
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn groups(&self) -> &[Vec<u32>] {
        &self.groups
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// How this GDD was obtained (construction route, ingredient, seed).
    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn gdd_type(&self) -> GddType {
        GddType::from_sizes(self.groups.iter().map(Vec::len))
    }

    /// Relabels points so that groups are consecutive runs in their current
    /// order (group 0 is `0..g_0`, and so on). Blocks and groups are sorted.
    pub fn canonicalized(&self) -> Gdd {
        let mut relabel = vec![u32::MAX; self.point_count];
        let mut next = 0u32;
        let mut groups = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            let mut renamed = Vec::with_capacity(g.len());
            for p in sorted {
                if let Some(slot) = relabel.get_mut(p as usize) {
                    *slot = next;
                }
                renamed.push(next);
                next += 1;
            }
            groups.push(renamed);
        }
        let mut blocks: Vec<Vec<u32>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<u32> = b
                    .iter()
                    .map(|&p| relabel.get(p as usize).copied().unwrap_or(p))
                    .collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        blocks.sort();
        Gdd {
            k: self.k,
            point_count: self.point_count,
            groups,
            blocks,
            provenance: self.provenance.clone(),
        }
    }

    /// Whether group `i` is exactly `{offset_i, …}` in consecutive order.
    pub fn has_consecutive_groups(&self) -> bool {
        let mut next = 0u32;
        self.groups.iter().all(|g| {
            g.iter().all(|&p| {
                let ok = p == next;
                next += 1;
                ok
            })
        })
    }

    /// Ingredient-file text: `gdd <k> <type>`, then `group` and `block` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.provenance.is_empty() {
            out.push_str(&format!("# {}\n", self.provenance));
        }
        out.push_str(&format!("gdd {} {}\n", self.k, self.gdd_type()));
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        for g in &self.groups {
            out.push_str(&format!("group {}\n", join(g)));
        }
        for b in &self.blocks {
            out.push_str(&format!("block {}\n", join(b)));
        }
        out
    }

    /// Parses ingredient-file text and verifies the result.
    pub fn from_text(text: &str) -> Result<Gdd> {
        let mut header = None;
        let mut groups = Vec::new();
        let mut blocks = Vec::new();
        let mut provenance = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if header.is_none() && provenance.is_empty() {
                    provenance = comment.trim().to_string();
                }
                continue;
            }
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let ints = || -> Result<Vec<u32>> {
                rest.split_whitespace()
                    .map(|t| t.parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::parse(line_no, "point names must be integers"))
            };
            match keyword {
                "gdd" if header.is_none() => {
                    let (k, ty) = rest
                        .trim()
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| Error::parse(line_no, "expected `gdd <k> <type>`"))?;
                    let k: usize = k
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad block size {k:?}")))?;
                    let ty: GddType = ty
                        .parse()
                        .map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
                    header = Some((k, ty));
                }
                "group" if header.is_some() => groups.push(ints()?),
                "block" if header.is_some() => blocks.push(ints()?),
                _ => return Err(Error::parse(line_no, format!("unexpected line {line:?}"))),
            }
        }
        let (k, ty) = header.ok_or_else(|| Error::parse(1, "missing `gdd <k> <type>` header"))?;
        let gdd = Gdd::new(k, groups, blocks)?.with_provenance(provenance);
        if gdd.gdd_type() != ty {
            return Err(Error::VerificationFailed(format!(
                "header declares type {ty}, groups have type {}",
                gdd.gdd_type()
            )));
        }
        gdd.verified()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockError {
    WrongSize { block: usize, size: usize },
    PointOutOfRange { block: usize, point: u32 },
    RepeatedPoint { block: usize, point: u32 },
}

/// Everything [`verify_gdd`] found wrong; `pass` iff all lists are empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GddReport {
    pub pass: bool,
    pub group_errors: Vec<String>,
    pub block_errors: Vec<BlockError>,
    /// Cross-group pairs in no block.
    pub uncovered: Vec<(u32, u32)>,
    /// Cross-group pairs in more than one block, with their count.
    pub overcovered: Vec<((u32, u32), u32)>,
    /// Same-group pairs that occur in some block.
    pub intra_group: Vec<(u32, u32)>,
    pub cross_pairs_total: usize,
    pub cross_pairs_covered_once: usize,
}

impl GddReport {
    pub fn summary(&self) -> String {
        if self.pass {
            return format!("pass ({} cross pairs covered once)", self.cross_pairs_total);
        }
        format!(
            "fail: {} group errors, {} block errors, {} uncovered, {} overcovered, {} intra-group pairs",
            self.group_errors.len(),
            self.block_errors.len(),
            self.uncovered.len(),
            self.overcovered.len(),
            self.intra_group.len()
        )
    }
}

/// Checks the three GDD clauses: the groups partition the points, every block
/// has `k` distinct points, and each pair is covered once if it crosses groups
/// and never if it lies inside one.
pub fn verify_gdd(d: &Gdd) -> GddReport {
    let v = d.point_count;
    let mut report = GddReport::default();
    let mut group_of = vec![usize::MAX; v];
    for (gi, g) in d.groups.iter().enumerate() {
        if g.is_empty() {
            report.group_errors.push(format!("group {gi} is empty"));
        }
        for &p in g {
            match group_of.get_mut(p as usize) {
                None => report
                    .group_errors
                    .push(format!("group {gi} names point {p} outside 0..{v}")),
                Some(slot) if *slot != usize::MAX => report
                    .group_errors
                    .push(format!("point {p} lies in groups {} and {gi}", *slot)),
                Some(slot) => *slot = gi,
            }
        }
    }
    for (p, &g) in group_of.iter().enumerate() {
        if g == usize::MAX {
            report
                .group_errors
                .push(format!("point {p} lies in no group"));
        }
    }

    let mut counts = vec![0u32; v * v];
    for (bi, block) in d.blocks.iter().enumerate() {
        if block.len() != d.k {
            report.block_errors.push(BlockError::WrongSize {
                block: bi,
                size: block.len(),
            });
        }
        for (i, &a) in block.iter().enumerate() {
            if a as usize >= v {
                report.block_errors.push(BlockError::PointOutOfRange {
                    block: bi,
                    point: a,
                });
                continue;
            }
            for &b in &block[i + 1..] {
                if b as usize >= v {
                    continue;
                }
                if a == b {
                    report.block_errors.push(BlockError::RepeatedPoint {
                        block: bi,
                        point: a,
                    });
                    continue;
                }
                let (x, y) = (a.min(b) as usize, a.max(b) as usize);
                counts[x * v + y] += 1;
            }
        }
    }

    for x in 0..v {
        for y in x + 1..v {
            let c = counts[x * v + y];
            let same_group = group_of[x] != usize::MAX && group_of[x] == group_of[y];
            let pair = (x as u32, y as u32);
            if same_group {
                if c > 0 {
                    report.intra_group.push(pair);
                }
                continue;
            }
            report.cross_pairs_total += 1;
            match c {
                0 => report.uncovered.push(pair),
                1 => report.cross_pairs_covered_once += 1,
                _ => report.overcovered.push((pair, c)),
            }
        }
    }

    report.pass = report.group_errors.is_empty()
        && report.block_errors.is_empty()
        && report.uncovered.is_empty()
        && report.overcovered.is_empty()
        && report.intra_group.is_empty();
    report
}

/// Source of transversal designs TD(k, m), numbered with group `i` equal to
/// `{i·m, …, i·m + m - 1}`.
pub trait TdProvider {
    fn transversal_design(&self, k: usize, m: usize) -> Result<Gdd>;
}

/// Builds TD(k, m) from the MOLS available via [`mols_for_order`].
#[derive(Debug, Clone, Copy, Default)]
pub struct MolsTdProvider;

impl TdProvider for MolsTdProvider {
    fn transversal_design(&self, k: usize, m: usize) -> Result<Gdd> {
        if m == 1 {
            return td_from_mols(k, 1, &MolsSet::new(1, vec![vec![0]; k.saturating_sub(2)])?);
        }
        let mols = u32::try_from(m)
            .map_err(|_| Error::UnsupportedOrder(u32::MAX))
            .and_then(mols_for_order)
            .map_err(|e| match e {
                Error::UnsupportedOrder(_) => Error::IngredientUnavailable(format!(
                    "no MOLS construction for order {m}, needed for TD({k},{m})"
                )),
                other => other,
            })?;
        td_from_mols(k, m, &mols)
    }
}

/// Weights every point of `d` by `w`: point `p` becomes `p·w + x` for
/// `x < w`, groups grow by the factor `w`, and each block is replaced by a
/// copy of TD(k, w) whose `i`-th group sits over the block's `i`-th smallest
/// point.
pub fn inflate(d: &Gdd, w: usize, td: &dyn TdProvider) -> Result<Gdd> {
    let ingredient = td.transversal_design(d.k, w)?;
    if ingredient.k != d.k
        || ingredient.gdd_type() != GddType::uniform(w, d.k)
        || !ingredient.has_consecutive_groups()
    {
        return Err(Error::Precondition(format!(
            "provider returned a {}-GDD of type {} for TD({},{w})",
            ingredient.k,
            ingredient.gdd_type(),
            d.k
        )));
    }
    let w32 = w as u32;
    let groups = d
        .groups
        .iter()
        .map(|g| {
            g.iter()
                .flat_map(|&p| (0..w32).map(move |x| p * w32 + x))
                .collect()
        })
        .collect();
    let mut blocks = Vec::with_capacity(d.blocks.len() * ingredient.blocks.len());
    for block in &d.blocks {
        let mut over = block.clone();
        over.sort_unstable();
        for t in &ingredient.blocks {
            blocks.push(
                t.iter()
                    .map(|&q| over[(q / w32) as usize] * w32 + q % w32)
                    .collect(),
            );
        }
    }
    let provenance = if d.provenance.is_empty() {
        format!("inflated by weight {w}")
    } else {
        format!("{}; inflated by weight {w}", d.provenance)
    };
    Gdd::new(d.k, groups, blocks)?
        .with_provenance(provenance)
        .verified()
}

/// A 4-GDD of type `24^t` with group `i` = `{24i, …, 24i + 23}`.
///
/// `t = 4` is TD(4,24) from MOLS(8) × MOLS(3). Larger `t` inflates a stored
/// 4-GDD of type `6^t` by weight 4, or failing that type `3^t` by weight 8.
pub fn gdd_24_t(t: usize, store: &IngredientStore, td: &dyn TdProvider) -> Result<Gdd> {
    if t < 4 {
        return Err(Error::Precondition(format!(
            "4-GDDs of type 24^t are only constructed for t ≥ 4, got t = {t}"
        )));
    }
    let gdd = if t == 4 {
        td.transversal_design(4, 24)?
    } else {
        let route = [(6usize, 4usize), (3, 8)]
            .into_iter()
            .find_map(|(g, w)| store.get(4, &GddType::uniform(g, t)).map(|ing| (ing, w)));
        let Some((ingredient, w)) = route else {
            return Err(Error::IngredientUnavailable(format!(
                "4-GDD of type 6^{t} or 3^{t} (needed for 24^{t}) is not in the ingredient store"
            )));
        };
        let base = ingredient.canonicalized();
        let label = format!(
            "ingredient 4-GDD of type {} [{}]",
            base.gdd_type(),
            if base.provenance.is_empty() {
                "stored"
            } else {
                &base.provenance
            }
        );
        inflate(&base.with_provenance(label), w, td)?
    };
    if gdd.gdd_type() != GddType::uniform(24, t) || !gdd.has_consecutive_groups() {
        return Err(Error::VerificationFailed(format!(
            "expected consecutive groups of type 24^{t}, got {}",
            gdd.gdd_type()
        )));
    }
    if gdd.blocks.len() != 48 * t * (t - 1) {
        return Err(Error::VerificationFailed(format!(
            "24^{t} needs {} blocks, built {}",
            48 * t * (t - 1),
            gdd.blocks.len()
        )));
    }
    Ok(gdd)
}

/// Block counts per point, handy for spotting malformed ingredients.
pub fn replication_numbers(d: &Gdd) -> BTreeMap<u32, usize> {
    let mut out = BTreeMap::new();
    for b in &d.blocks {
        for &p in b {
            *out.entry(p).or_default() += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn td43() -> Gdd {
        MolsTdProvider.transversal_design(4, 3).unwrap()
    }

    #[test]
    fn trivial_two_point_gdd() {
        let d = Gdd::new(2, vec![vec![0], vec![1]], vec![vec![0, 1]]).unwrap();
        assert!(verify_gdd(&d).pass);
    }

    #[test]
    fn deleting_a_block_uncovers_six_pairs() {
        let td = td43();
        let report = verify_gdd(&td);
        assert!(report.pass);
        assert_eq!(report.cross_pairs_total, 54);
        let mut blocks = td.blocks().to_vec();
        blocks.pop();
        let broken = Gdd::new(4, td.groups().to_vec(), blocks).unwrap();
        let report = verify_gdd(&broken);
        assert!(!report.pass);
        assert_eq!(report.uncovered.len(), 6);
        assert!(broken.verified().is_err());
    }

    #[test]
    fn structural_violations_are_listed() {
        let d = Gdd::new(
            3,
            vec![vec![0, 1], vec![2], vec![2, 3]],
            vec![vec![0, 1, 2], vec![0, 3], vec![9, 0, 3]],
        )
        .unwrap();
        let report = verify_gdd(&d);
        assert!(!report.pass);
        assert!(!report.group_errors.is_empty());
        assert!(report
            .block_errors
            .contains(&BlockError::WrongSize { block: 1, size: 2 }));
        assert!(report
            .block_errors
            .contains(&BlockError::PointOutOfRange { block: 2, point: 9 }));
        assert!(report.intra_group.contains(&(0, 1)));
        assert!(report
            .overcovered
            .iter()
            .any(|&(p, c)| p == (0, 3) && c == 2));
    }

    #[test]
    fn inflating_td43_by_eight_gives_type_24_4() {
        let d = inflate(&td43(), 8, &MolsTdProvider).unwrap();
        assert_eq!(d.gdd_type(), GddType::uniform(24, 4));
        assert_eq!(d.blocks().len(), 9 * 64);
        assert!(verify_gdd(&d).pass);
    }

    #[test]
    fn inflating_by_one_is_identity_up_to_order() {
        let td = td43();
        let d = inflate(&td, 1, &MolsTdProvider).unwrap();
        assert_eq!(d.groups(), td.groups());
        let mut a = d.blocks().to_vec();
        let mut b: Vec<Vec<u32>> = td
            .blocks()
            .iter()
            .map(|x| {
                let mut x = x.clone();
                x.sort_unstable();
                x
            })
            .collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn inflation_needs_the_transversal_design() {
        let err = inflate(&td43(), 6, &MolsTdProvider).unwrap_err();
        assert!(matches!(err, Error::IngredientUnavailable(_)), "{err}");
        let err = inflate(&td43(), 2, &MolsTdProvider).unwrap_err();
        assert!(matches!(err, Error::IngredientUnavailable(_)), "{err}");
    }

    #[test]
    fn gdd_24_4_is_the_transversal_design() {
        let d = gdd_24_t(4, &IngredientStore::empty(), &MolsTdProvider).unwrap();
        assert_eq!(d.blocks().len(), 576);
        assert_eq!(d.point_count(), 96);
        assert!(d.has_consecutive_groups());
        assert!(d.provenance().contains("TD(4,24)"));
    }

    #[test]
    fn gdd_24_t_preconditions() {
        assert!(matches!(
            gdd_24_t(3, &IngredientStore::empty(), &MolsTdProvider),
            Err(Error::Precondition(_))
        ));
        match gdd_24_t(5, &IngredientStore::empty(), &MolsTdProvider) {
            Err(Error::IngredientUnavailable(msg)) => {
                assert!(msg.contains("6^5") && msg.contains("3^5"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gdd_types_parse_and_print() {
        let ty: GddType = "6^4 3^1".parse().unwrap();
        assert_eq!(ty.parts, vec![(6, 4), (3, 1)]);
        assert_eq!(ty.to_string(), "6^4 3^1");
        assert_eq!(ty.point_count(), 27);
        assert_eq!(GddType::uniform(24, 4).cross_pairs(), 3456);
        assert!("6^0".parse::<GddType>().is_err());
        assert!("six".parse::<GddType>().is_err());
    }

    #[test]
    fn ingredient_text_round_trip() {
        let td = td43();
        let text = td.to_text();
        assert!(text.contains("gdd 4 3^4\n"));
        let back = Gdd::from_text(&text).unwrap();
        assert_eq!(back, td);
    }

    #[test]
    fn loader_rejects_bad_files() {
        let text = td43().to_text();
        let dropped: String = text
            .lines()
            .take(text.lines().count() - 1)
            .map(|l| format!("{l}\n"))
            .collect();
        assert!(matches!(
            Gdd::from_text(&dropped),
            Err(Error::VerificationFailed(_))
        ));
        let wrong_type = text.replace("gdd 4 3^4", "gdd 4 3^5");
        assert!(Gdd::from_text(&wrong_type).is_err());
        assert!(matches!(
            Gdd::from_text("block 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn canonicalize_renumbers_groups() {
        let d = Gdd::new(
            2,
            vec![vec![3, 1], vec![0, 2]],
            vec![vec![1, 0], vec![1, 2], vec![3, 0], vec![3, 2]],
        )
        .unwrap()
        .verified()
        .unwrap();
        let c = d.canonicalized();
        assert!(c.has_consecutive_groups());
        assert!(verify_gdd(&c).pass);
        assert_eq!(
            replication_numbers(&c)
                .values()
                .copied()
                .collect::<Vec<_>>(),
            vec![2; 4]
        );
    }
}
