//! Base blocks, their development into full designs, and the difference check.
//!
//! A base block labels the 16 canonical vertices of a target graph with ring
//! elements. Developing it under `x ↦ ω^e·x + d` for `0 ≤ e < (n-1)/96` and
//! every `d` yields `n(n-1)/96` labelled copies of the target.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use crate::algebra::{Element, Ring};
use crate::error::{Error, Result};
use crate::targets::TargetId;

/// Number of edges in a target graph, and the divisor in `n(n-1)/96`.
pub const EDGES_PER_BLOCK: u64 = 48;
pub const BLOCK_LEN: usize = 16;

const CATALOG_TEXT: &str = include_str!("../data/base_blocks.txt");

/// One labelled copy of a target: position `i` holds the point placed on
/// canonical vertex `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledBlock(pub [u32; BLOCK_LEN]);

impl LabeledBlock {
    pub fn labels(&self) -> &[u32; BLOCK_LEN] {
        &self.0
    }

    pub fn has_distinct_labels(&self) -> bool {
        let mut sorted = self.0;
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Applies `f` to every label.
    pub fn map(&self, f: impl FnMut(u32) -> u32) -> LabeledBlock {
        LabeledBlock(self.0.map(f))
    }
}

impl fmt::Display for LabeledBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A claimed decomposition of `K_n` into copies of a target graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    pub order: u64,
    pub target: TargetId,
    pub blocks: Vec<LabeledBlock>,
}

impl Design {
    /// `n(n-1)/96`, the block count any design of order `n` must have.
    pub fn expected_block_count(order: u64) -> u64 {
        let n = u128::from(order);
        let count = n * n.saturating_sub(1) / u128::from(2 * EDGES_PER_BLOCK);
        u64::try_from(count).unwrap_or(u64::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseBlock {
    pub target: TargetId,
    pub ring: Ring,
    pub omega: Element,
    pub labels: [Element; BLOCK_LEN],
}

impl BaseBlock {
    pub fn new(target: TargetId, ring: Ring, omega: u32, labels: [u32; BLOCK_LEN]) -> Result<Self> {
        let omega = ring.element(omega)?;
        let mut checked = [Element(0); BLOCK_LEN];
        for (slot, &l) in checked.iter_mut().zip(&labels) {
            *slot = ring.element(l)?;
        }
        Ok(BaseBlock {
            target,
            ring,
            omega,
            labels: checked,
        })
    }

    pub fn order(&self) -> u64 {
        u64::from(self.ring.order())
    }

    /// `(n - 1) / 96`, the number of multipliers `ω^e` used in development.
    pub fn exponents(&self) -> Result<u32> {
        let n = self.order();
        if n < 2 || !(n - 1).is_multiple_of(2 * EDGES_PER_BLOCK) {
            return Err(Error::Precondition(format!(
                "cannot develop over a ring of order {n}: n - 1 must be a positive multiple of 96"
            )));
        }
        Ok(((n - 1) / (2 * EDGES_PER_BLOCK)) as u32)
    }

    pub fn codes(&self) -> [u32; BLOCK_LEN] {
        self.labels.map(Element::code)
    }

    /// Copy with the label at `position` replaced.
    pub fn with_label(&self, position: usize, code: u32) -> Result<BaseBlock> {
        let mut out = self.clone();
        out.labels[position] = self.ring.element(code)?;
        Ok(out)
    }

    /// `ℓ_v - ℓ_u` for every canonical edge `{u, v}`, `u < v`, in edge-list order.
    pub fn edge_differences(&self) -> Result<Vec<Element>> {
        self.target
            .graph()
            .position_pairs()
            .iter()
            .map(|&(u, v)| self.ring.sub(self.labels[v], self.labels[u]))
            .collect()
    }
}

/// An entry of the shipped base-block catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub target: TargetId,
    pub order: u32,
    pub omega: u32,
    pub labels: [u32; BLOCK_LEN],
}

impl CatalogEntry {
    pub fn base_block(&self) -> Result<BaseBlock> {
        BaseBlock::new(
            self.target,
            Ring::for_order(self.order)?,
            self.omega,
            self.labels,
        )
    }

    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} {}",
            self.target,
            self.order,
            self.omega,
            LabeledBlock(self.labels)
        )
    }
}

/// Parses catalog text: one `<target> <n> <omega> <16 labels>` line per entry.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 + BLOCK_LEN {
            return Err(Error::parse(
                line_no,
                format!("expected {} fields, found {}", 3 + BLOCK_LEN, fields.len()),
            ));
        }
        let target = fields[0]
            .parse::<TargetId>()
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
        let nums = fields[1..]
            .iter()
            .map(|f| f.parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::parse(line_no, "non-integer field"))?;
        let mut labels = [0; BLOCK_LEN];
        labels.copy_from_slice(&nums[2..]);
        out.push(CatalogEntry {
            target,
            order: nums[0],
            omega: nums[1],
            labels,
        });
    }
    Ok(out)
}

/// Raw text of the shipped catalog.
pub fn catalog_text() -> &'static str {
    CATALOG_TEXT
}

pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(CATALOG_TEXT).expect("shipped catalog parses"))
}

/// The published base block for `target` at order `n` (97, 193 or 289).
pub fn published_base_block(target: TargetId, n: u64) -> Result<BaseBlock> {
    catalog()
        .iter()
        .find(|e| e.target == target && u64::from(e.order) == n)
        .ok_or_else(|| Error::NotInCatalog {
            target: target.to_string(),
            order: n,
        })?
        .base_block()
}

/// The two labelled copies decomposing `K_{4,4,4,4}` on `Z_16`, whose parts
/// are the residue classes mod 4.
pub fn k4444_decomposition(target: TargetId) -> [LabeledBlock; 2] {
    match target {
        TargetId::Shrikhande => [
            LabeledBlock([0, 1, 2, 5, 3, 4, 7, 6, 10, 9, 8, 13, 11, 14, 15, 12]),
            LabeledBlock([0, 2, 8, 10, 9, 3, 5, 15, 12, 14, 4, 6, 7, 13, 11, 1]),
        ],
        TargetId::LineK44 => [
            LabeledBlock([0, 1, 2, 3, 5, 6, 7, 4, 11, 10, 15, 14, 8, 9, 13, 12]),
            LabeledBlock([0, 9, 11, 14, 10, 13, 15, 7, 1, 8, 4, 2, 6, 3, 12, 5]),
        ],
    }
}

/// Develops `b` into the full design `{(ω^e·ℓ_i + d)_i}`, ordered by `(e, d)`.
///
/// Fails if `{±ω^e}` is not a subgroup of the right size, if a developed block
/// repeats a label, or if two developed blocks coincide.
pub fn develop(b: &BaseBlock) -> Result<Design> {
    let exponents = b.exponents()?;
    let ring = b.ring;
    ring.signed_power_subgroup(b.omega, exponents)?;

    let n = ring.order();
    let mut blocks = Vec::with_capacity(n as usize * exponents as usize);
    let mut seen = HashSet::with_capacity(blocks.capacity());
    let mut multiplier = ring.one();
    for e in 0..exponents {
        let scaled = b
            .labels
            .iter()
            .map(|&l| ring.mul(multiplier, l))
            .collect::<Result<Vec<_>>>()?;
        for d in ring.elements() {
            let mut labels = [0u32; BLOCK_LEN];
            for (slot, &s) in labels.iter_mut().zip(&scaled) {
                *slot = ring.add(s, d)?.code();
            }
            let block = LabeledBlock(labels);
            if !block.has_distinct_labels() {
                let mut sorted = labels;
                sorted.sort_unstable();
                let label = sorted
                    .windows(2)
                    .find(|w| w[0] == w[1])
                    .map(|w| w[0])
                    .unwrap();
                return Err(Error::DuplicateLabel {
                    e,
                    d: d.code(),
                    label,
                });
            }
            if !seen.insert(block) {
                return Err(Error::DuplicateBlock { e, d: d.code() });
            }
            blocks.push(block);
        }
        multiplier = ring.mul(multiplier, b.omega)?;
    }
    Ok(Design {
        order: u64::from(n),
        target: b.target,
        blocks,
    })
}

/// Fast validity test for a base block: the labels are pairwise distinct and
/// the 48 edge differences form a system of representatives for the cosets
/// of `{±ω^e}` in the unit group, one per coset.
pub fn difference_transversal_check(b: &BaseBlock) -> Result<bool> {
    let exponents = b.exponents()?;
    let partition = b.ring.unit_group_coset_partition(b.omega, exponents)?;
    if !LabeledBlock(b.codes()).has_distinct_labels() {
        return Ok(false);
    }
    let mut hit = vec![false; partition.cosets.len()];
    for diff in b.edge_differences()? {
        match partition.coset_of(diff) {
            Some(c) if !hit[c] => hit[c] = true,
            _ => return Ok(false),
        }
    }
    Ok(hit.iter().all(|&h| h))
}
