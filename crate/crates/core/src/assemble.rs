//! Designs of every admissible order.
//!
//! Orders 97, 193 and 289 come straight from the published base blocks. For
//! `n = 96t + 1` with `t ≥ 4`, a 4-GDD of type `24^t` is inflated by 4: each
//! block becomes a `K_{4,4,4,4}` split into two copies of the target, and each
//! group's 96 points plus a new point `∞` carry a copy of the order-97 design.

use std::fmt;

use crate::blocks::{develop, k4444_decomposition, published_base_block, Design, LabeledBlock};
use crate::error::{Error, Result};
use crate::gdd::{gdd_24_t, IngredientStore, MolsTdProvider, TdProvider};
use crate::targets::{TargetGraph, TargetId};

/// `|V|`, `|E|` and the degree shared by both targets.
const VERTICES: u64 = TargetGraph::VERTICES as u64;
const EDGES: u64 = TargetGraph::EDGES as u64;
const DEGREE: u64 = 6;

/// Points per group after inflating a group of 24 by 4.
pub const INFLATED_GROUP: u32 = 96;

/// The necessary conditions for a design of order `n` of a `degree`-regular
/// graph with the given vertex and edge counts.
pub fn necessary_conditions(n: u64, vertices: u64, edges: u64, degree: u64) -> bool {
    let n = u128::from(n);
    let size = n >= u128::from(vertices) || n == 1;
    let pairs = (n * n.saturating_sub(1)) % (2 * u128::from(edges)) == 0;
    let regular = n.saturating_sub(1) % u128::from(degree) == 0;
    n >= 1 && size && pairs && regular
}

/// Whether a design of order `n` can exist for either target: `n = 1` or
/// `n ≡ 1 (mod 96)`.
pub fn admissible(n: u64) -> bool {
    let closed_form = n == 1 || n % 96 == 1;
    debug_assert_eq!(
        closed_form,
        necessary_conditions(n, VERTICES, EDGES, DEGREE),
        "closed form disagrees with the necessary conditions at n = {n}"
    );
    closed_form
}

/// An order `n` with `admissible(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissibleOrder(u64);

impl AdmissibleOrder {
    pub fn new(n: u64) -> Result<AdmissibleOrder> {
        if admissible(n) {
            Ok(AdmissibleOrder(n))
        } else {
            Err(Error::NotAdmissible { order: n })
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `t` with `n = 96t + 1`.
    pub fn t(self) -> u64 {
        (self.0 - 1) / 96
    }
}

impl fmt::Display for AdmissibleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Pushes the two `K_{4,4,4,4}` tuples over `Z_16` onto the inflated points of
/// a GDD block: with `p_0 < p_1 < p_2 < p_3`, label `ℓ ≡ i (mod 4)` goes to
/// `4·p_i + ℓ div 4`.
pub fn inflate_block_to_k4444(
    block: [u32; 4],
    decomposition: &[LabeledBlock; 2],
) -> [LabeledBlock; 2] {
    let mut p = block;
    p.sort_unstable();
    decomposition.map(|b| b.map(|l| 4 * p[(l % 4) as usize] + l / 4))
}

/// The blocks of `d97` carried onto one inflated group plus `∞`. Design
/// point `k < 96` goes to the `k`-th smallest inflated point of the group,
/// and point 96 to `infinity`.
pub fn overlay_group(group: &[u32], infinity: u32, d97: &Design) -> Result<Vec<LabeledBlock>> {
    if group.len() * 4 != INFLATED_GROUP as usize {
        return Err(Error::Precondition(format!(
            "overlay needs a group of 24 GDD points, got {}",
            group.len()
        )));
    }
    if d97.order != u64::from(INFLATED_GROUP) + 1 {
        return Err(Error::Precondition(format!(
            "overlay needs a design of order 97, got {}",
            d97.order
        )));
    }
    let mut points: Vec<u32> = group
        .iter()
        .flat_map(|&p| (0..4).map(move |j| 4 * p + j))
        .collect();
    points.sort_unstable();
    points.push(infinity);
    Ok(d97
        .blocks
        .iter()
        .map(|b| b.map(|k| points[k as usize]))
        .collect())
}

/// [`construct_design_with`] using TDs from MOLS.
pub fn construct_design(
    target: TargetId,
    n: AdmissibleOrder,
    store: &IngredientStore,
) -> Result<Design> {
    construct_design_with(target, n, store, &MolsTdProvider)
}

/// A design of order `n` for `target`. Blocks from the recursive
/// construction come as the `K_{4,4,4,4}` pieces in GDD block order, then the
/// overlays in group order.
pub fn construct_design_with(
    target: TargetId,
    n: AdmissibleOrder,
    store: &IngredientStore,
    td: &dyn TdProvider,
) -> Result<Design> {
    let t = n.t();
    match t {
        0 => {
            return Ok(Design {
                order: 1,
                target,
                blocks: Vec::new(),
            })
        }
        1..=3 => return develop(&published_base_block(target, n.get())?),
        _ => {}
    }
    let t = usize::try_from(t).map_err(|_| Error::NotAdmissible { order: n.get() })?;
    let gdd = gdd_24_t(t, store, td)?;
    let d97 = develop(&published_base_block(target, 97)?)?;
    let decomposition = k4444_decomposition(target);
    let infinity = u32::try_from(96 * t)
        .map_err(|_| Error::Precondition(format!("order {n} is too large to label")))?;

    let mut blocks = Vec::with_capacity(Design::expected_block_count(n.get()) as usize);
    for b in gdd.blocks() {
        let block: [u32; 4] = b.as_slice().try_into().map_err(|_| {
            Error::Precondition(format!("GDD block of size {} in a 4-GDD", b.len()))
        })?;
        blocks.extend(inflate_block_to_k4444(block, &decomposition));
    }
    for group in gdd.groups() {
        let mut group = group.clone();
        group.sort_unstable();
        blocks.extend(overlay_group(&group, infinity, &d97)?);
    }
    let design = Design {
        order: n.get(),
        target,
        blocks,
    };
    if design.blocks.len() as u64 != Design::expected_block_count(n.get()) {
        return Err(Error::VerificationFailed(format!(
            "order {n} needs {} blocks, assembled {}",
            Design::expected_block_count(n.get()),
            design.blocks.len()
        )));
    }
    Ok(design)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{certify, Certificate};
    use proptest::prelude::*;

    fn store() -> IngredientStore {
        IngredientStore::builtin().unwrap()
    }

    #[test]
    fn admissibility_examples() {
        assert!(admissible(97));
        assert!(admissible(1));
        assert!(!admissible(98));
        assert!(!admissible(0));
        assert!(!admissible(16));
        assert!(matches!(
            AdmissibleOrder::new(98),
            Err(Error::NotAdmissible { order: 98 })
        ));
        assert_eq!(AdmissibleOrder::new(481).unwrap().t(), 5);
    }

    #[test]
    fn admissibility_matches_necessary_conditions() {
        for n in 1..=10_000 {
            assert_eq!(admissible(n), necessary_conditions(n, 16, 48, 6), "n = {n}");
        }
        // The size clause alone rules out 2 ≤ n < 16; nothing there is 1 mod 96 anyway.
        assert!(necessary_conditions(1, 16, 48, 6));
        assert!(!necessary_conditions(0, 16, 48, 6));
    }

    #[test]
    fn identity_block_layout() {
        let id = LabeledBlock(std::array::from_fn(|i| i as u32));
        let [a, _] = inflate_block_to_k4444([0, 1, 2, 3], &[id, id]);
        assert_eq!((a.0[0], a.0[5], a.0[15]), (0, 5, 15));
        for target in TargetId::ALL {
            let mut count = [[0u8; 16]; 16];
            for b in inflate_block_to_k4444([0, 1, 2, 3], &k4444_decomposition(target)) {
                for (u, v) in target.graph().position_pairs() {
                    let (x, y) = (b.0[u] as usize, b.0[v] as usize);
                    count[x.min(y)][x.max(y)] += 1;
                }
            }
            for (x, row) in count.iter().enumerate() {
                for (y, &c) in row.iter().enumerate().skip(x + 1) {
                    let cross = x / 4 != y / 4;
                    assert_eq!(c, u8::from(cross), "{target:?} pair {{{x},{y}}}");
                }
            }
        }
    }

    #[test]
    fn inflated_labels_stay_on_the_block() {
        let dec = k4444_decomposition(TargetId::LineK44);
        let block = [40, 7, 19, 2];
        let allowed: Vec<u32> = block
            .iter()
            .flat_map(|&p| (0..4).map(move |j| 4 * p + j))
            .collect();
        for b in inflate_block_to_k4444(block, &dec) {
            assert!(b.has_distinct_labels());
            assert!(b.0.iter().all(|l| allowed.contains(l)));
        }
    }

    #[test]
    fn overlay_on_first_group_is_identity() {
        let d97 = develop(&published_base_block(TargetId::Shrikhande, 97).unwrap()).unwrap();
        let group: Vec<u32> = (0..24).collect();
        assert_eq!(overlay_group(&group, 96, &d97).unwrap(), d97.blocks);
        let moved = overlay_group(&(24..48).collect::<Vec<_>>(), 480, &d97).unwrap();
        assert!(moved
            .iter()
            .flat_map(|b| b.0)
            .all(|p| (96..192).contains(&p) || p == 480));
        assert!(overlay_group(&group[..23], 96, &d97).is_err());
    }

    #[test]
    fn small_orders() {
        let s = store();
        let d =
            construct_design(TargetId::Shrikhande, AdmissibleOrder::new(1).unwrap(), &s).unwrap();
        assert!(d.blocks.is_empty());
        let d = construct_design(TargetId::LineK44, AdmissibleOrder::new(97).unwrap(), &s).unwrap();
        assert_eq!(d.blocks.len(), 97);
        assert!(certify(&Certificate::complete(&d)).pass);
    }

    #[test]
    fn order_385_counts_and_pair_classification() {
        let n = AdmissibleOrder::new(385).unwrap();
        for target in TargetId::ALL {
            let d = construct_design(target, n, &store()).unwrap();
            assert_eq!(d.blocks.len(), 1540);
            let group_of = |p: u32| if p == 384 { None } else { Some(p / 96) };
            let pieces = 576 * 2;
            for (i, b) in d.blocks.iter().enumerate() {
                for (u, v) in target.graph().position_pairs() {
                    let (x, y) = (b.0[u], b.0[v]);
                    let same_group = match (group_of(x), group_of(y)) {
                        (Some(gx), Some(gy)) => gx == gy,
                        _ => true,
                    };
                    assert_eq!(same_group, i >= pieces, "block {i}, pair {{{x},{y}}}");
                    if x / 4 == y / 4 && x != 384 && y != 384 {
                        assert!(i >= pieces, "pair inside an inflated point in a piece");
                    }
                }
            }
            assert!(certify(&Certificate::complete(&d)).pass);
        }
    }

    #[test]
    fn missing_ingredient_is_reported() {
        let n = AdmissibleOrder::new(481).unwrap();
        assert!(matches!(
            construct_design(TargetId::Shrikhande, n, &IngredientStore::empty()),
            Err(Error::IngredientUnavailable(_))
        ));
        // 96·17 + 1 lies past the shipped ingredients.
        let n = AdmissibleOrder::new(96 * 17 + 1).unwrap();
        assert!(matches!(
            construct_design(TargetId::Shrikhande, n, &store()),
            Err(Error::IngredientUnavailable(_))
        ));
    }

    #[test]
    fn construction_is_deterministic() {
        let n = AdmissibleOrder::new(481).unwrap();
        let a = construct_design(TargetId::LineK44, n, &store()).unwrap();
        let b = construct_design(TargetId::LineK44, n, &store()).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn admissible_iff_one_mod_96(n in 1u64..u64::MAX / 2) {
            prop_assert_eq!(admissible(n), n == 1 || n % 96 == 1);
        }

        #[test]
        fn inflation_is_a_bijection_on_labels(
            pts in proptest::sample::subsequence((0u32..200).collect::<Vec<_>>(), 4)
        ) {
            let block: [u32; 4] = pts.try_into().unwrap();
            let id = LabeledBlock(std::array::from_fn(|i| i as u32));
            let [out, _] = inflate_block_to_k4444(block, &[id, id]);
            prop_assert!(out.has_distinct_labels());
        }
    }
}
