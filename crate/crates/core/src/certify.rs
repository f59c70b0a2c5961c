//! Independent verification of claimed designs, and the certificate file format.
//!
//! A certificate is checked by exact pair counting: every block contributes the
//! 48 canonical edges pushed through its labels, and each unordered pair of
//! points must be hit exactly the expected number of times.
//!
//! ```text
//! design <shrikhande|lk44> <n> <complete|4partite>
//! blocks <count>
//! <16 labels>        # one line per block, position i = canonical vertex i+1
//! ```
//!
//! Lines starting with `#` are comments.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::blocks::{Design, LabeledBlock, BLOCK_LEN};
use crate::error::{Error, Result};
use crate::targets::{is_isomorphic, SmallGraph, TargetId};

/// Orders above this are refused rather than allocating the pair table.
pub const MAX_CERTIFIABLE_ORDER: u64 = 20_000;

/// At most this many pair errors are kept in a report; the total is always exact.
pub const MAX_REPORTED_PAIR_ERRORS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Decomposition of `K_n`.
    Complete,
    /// Decomposition of `K_{4,4,4,4}` on `Z_16`, parts = residue classes mod 4.
    FourPartite,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Complete => "complete",
            Mode::FourPartite => "4partite",
        }
    }

    fn expected_coverage(self, u: u32, v: u32) -> u8 {
        match self {
            Mode::Complete => 1,
            Mode::FourPartite => u8::from(u % 4 != v % 4),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(Mode::Complete),
            "4partite" => Ok(Mode::FourPartite),
            other => Err(Error::Precondition(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub target: TargetId,
    pub order: u64,
    pub mode: Mode,
    pub blocks: Vec<LabeledBlock>,
}

impl Certificate {
    pub fn complete(design: &Design) -> Certificate {
        Certificate {
            target: design.target,
            order: design.order,
            mode: Mode::Complete,
            blocks: design.blocks.clone(),
        }
    }

    pub fn four_partite(target: TargetId, blocks: Vec<LabeledBlock>) -> Certificate {
        Certificate {
            target,
            order: 16,
            mode: Mode::FourPartite,
            blocks,
        }
    }

    /// Number of blocks a valid certificate of this kind must contain.
    pub fn expected_block_count(&self) -> u64 {
        match self.mode {
            Mode::Complete => Design::expected_block_count(self.order),
            Mode::FourPartite => 2,
        }
    }

    /// Each block's induced edge set, as explicit point pairs.
    pub fn to_raw_edges(&self) -> Vec<Vec<(u32, u32)>> {
        let pairs = self.target.graph().position_pairs();
        self.blocks
            .iter()
            .map(|b| pairs.iter().map(|&(u, v)| (b.0[u], b.0[v])).collect())
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(64 + self.blocks.len() * 64);
        out.push_str(&format!(
            "design {} {} {}\nblocks {}\n",
            self.target,
            self.order,
            self.mode.as_str(),
            self.blocks.len()
        ));
        for b in &self.blocks {
            out.push_str(&b.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Certificate> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let last_line = text.lines().count();

        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(last_line + 1, "missing `design` header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.first() != Some(&"design") {
            return Err(Error::parse(
                line_no,
                format!("unsupported certificate header {header:?} (expected `design ...`)"),
            ));
        }
        let [_, target, order, mode] = fields.as_slice() else {
            return Err(Error::parse(
                line_no,
                "expected `design <target> <n> <mode>`",
            ));
        };
        let target = target
            .parse::<TargetId>()
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
        let order = order
            .parse::<u64>()
            .map_err(|_| Error::parse(line_no, format!("bad order {order:?}")))?;
        let mode = mode
            .parse::<Mode>()
            .map_err(|e| Error::parse(line_no, e.to_string()))?;

        let (line_no, count_line) = lines
            .next()
            .ok_or_else(|| Error::parse(last_line + 1, "missing `blocks <count>` line"))?;
        let count = match count_line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["blocks", c] => c
                .parse::<usize>()
                .map_err(|_| Error::parse(line_no, format!("bad block count {c:?}")))?,
            _ => return Err(Error::parse(line_no, "expected `blocks <count>`")),
        };

        let mut blocks = Vec::with_capacity(count.min(1 << 20));
        for (line_no, line) in lines {
            if blocks.len() == count {
                return Err(Error::parse(
                    line_no,
                    format!("more block lines than the declared {count}"),
                ));
            }
            let labels = line
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::parse(line_no, "labels must be decimal integers"))?;
            let labels: [u32; BLOCK_LEN] = labels.try_into().map_err(|v: Vec<u32>| {
                Error::parse(
                    line_no,
                    format!("expected {BLOCK_LEN} labels, found {}", v.len()),
                )
            })?;
            blocks.push(LabeledBlock(labels));
        }
        if blocks.len() < count {
            return Err(Error::parse(
                last_line + 1,
                format!("truncated: declared {count} blocks, found {}", blocks.len()),
            ));
        }
        Ok(Certificate {
            target,
            order,
            mode,
            blocks,
        })
    }
}

pub fn write_certificate(c: &Certificate, path: &Path) -> Result<()> {
    fs::write(path, c.to_text())?;
    Ok(())
}

pub fn read_certificate(path: &Path) -> Result<Certificate> {
    let text = fs::read_to_string(path)?;
    Certificate::from_text(&text).map_err(|e| e.with_path(path))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairError {
    pub pair: (u32, u32),
    pub count: u32,
    pub expected: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelError {
    OutOfRange {
        block: usize,
        position: usize,
        label: u32,
    },
    Repeated {
        block: usize,
        label: u32,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CertReport {
    pub pass: bool,
    pub pair_coverage_errors: Vec<PairError>,
    /// Total number of mis-covered pairs, including any not kept above.
    pub pair_error_total: u64,
    pub label_errors: Vec<LabelError>,
    /// Indices of parts not isomorphic to the target (raw-edge mode only).
    pub isomorphism_errors: Vec<usize>,
    /// Problems with the certificate as a whole (unsupported order, bad part sizes).
    pub structure_errors: Vec<String>,
    pub count_expected: u64,
    pub count_actual: u64,
}

impl CertReport {
    fn finish(mut self) -> CertReport {
        self.pass = self.pair_error_total == 0
            && self.label_errors.is_empty()
            && self.isomorphism_errors.is_empty()
            && self.structure_errors.is_empty()
            && self.count_expected == self.count_actual;
        self
    }

    pub fn uncovered(&self) -> impl Iterator<Item = &PairError> {
        self.pair_coverage_errors
            .iter()
            .filter(|e| e.count < e.expected)
    }

    pub fn overcovered(&self) -> impl Iterator<Item = &PairError> {
        self.pair_coverage_errors
            .iter()
            .filter(|e| e.count > e.expected)
    }
}

impl fmt::Display for CertReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "result: {}", if self.pass { "PASS" } else { "FAIL" })?;
        writeln!(
            f,
            "blocks: {} (expected {})",
            self.count_actual, self.count_expected
        )?;
        for s in &self.structure_errors {
            writeln!(f, "structure: {s}")?;
        }
        for e in self.label_errors.iter().take(20) {
            match e {
                LabelError::OutOfRange {
                    block,
                    position,
                    label,
                } => writeln!(
                    f,
                    "label: block {block} position {position}: {label} out of range"
                )?,
                LabelError::Repeated { block, label } => {
                    writeln!(f, "label: block {block} repeats {label}")?
                }
            }
        }
        for i in self.isomorphism_errors.iter().take(20) {
            writeln!(f, "isomorphism: part {i} is not a copy of the target")?;
        }
        if self.pair_error_total > 0 {
            writeln!(f, "mis-covered pairs: {}", self.pair_error_total)?;
        }
        for e in self.pair_coverage_errors.iter().take(20) {
            writeln!(
                f,
                "pair {{{}, {}}}: covered {} times, expected {}",
                e.pair.0, e.pair.1, e.count, e.expected
            )?;
        }
        Ok(())
    }
}

// Pair {u, v}, u < v, lives at v(v-1)/2 + u.
fn pair_index(u: u32, v: u32) -> usize {
    let (u, v) = (u as usize, v as usize);
    v * (v - 1) / 2 + u
}

struct Coverage {
    order: u32,
    counts: Vec<u8>,
}

impl Coverage {
    fn new(order: u32) -> Coverage {
        let n = order as usize;
        Coverage {
            order,
            counts: vec![0; n * n.saturating_sub(1) / 2],
        }
    }

    fn hit(&mut self, a: u32, b: u32) {
        if a == b || a >= self.order || b >= self.order {
            return;
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        let c = &mut self.counts[pair_index(u, v)];
        *c = c.saturating_add(1);
    }

    fn compare(&self, mode: Mode, report: &mut CertReport) {
        for v in 1..self.order {
            for u in 0..v {
                let count = self.counts[pair_index(u, v)];
                let expected = mode.expected_coverage(u, v);
                if count != expected {
                    report.pair_error_total += 1;
                    if report.pair_coverage_errors.len() < MAX_REPORTED_PAIR_ERRORS {
                        report.pair_coverage_errors.push(PairError {
                            pair: (u, v),
                            count: u32::from(count),
                            expected: u32::from(expected),
                        });
                    }
                }
            }
        }
    }
}

fn check_order(order: u64, mode: Mode, report: &mut CertReport) -> Option<u32> {
    if mode == Mode::FourPartite && order != 16 {
        report
            .structure_errors
            .push(format!("4partite certificates have order 16, not {order}"));
        return None;
    }
    if order > MAX_CERTIFIABLE_ORDER {
        report.structure_errors.push(format!(
            "order {order} exceeds the certifiable maximum {MAX_CERTIFIABLE_ORDER}"
        ));
        return None;
    }
    Some(order as u32)
}

/// Certifies a tuple-form certificate. Malformed content produces a failing
/// report, never an error.
pub fn certify(c: &Certificate) -> CertReport {
    let mut report = CertReport {
        count_expected: c.expected_block_count(),
        count_actual: c.blocks.len() as u64,
        ..CertReport::default()
    };
    let Some(order) = check_order(c.order, c.mode, &mut report) else {
        return report.finish();
    };
    let pairs = c.target.graph().position_pairs();
    let mut coverage = Coverage::new(order);
    for (index, block) in c.blocks.iter().enumerate() {
        for (position, &label) in block.0.iter().enumerate() {
            if label >= order {
                report.label_errors.push(LabelError::OutOfRange {
                    block: index,
                    position,
                    label,
                });
            }
        }
        let mut sorted = block.0;
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1]
                && report.label_errors.last()
                    != Some(&LabelError::Repeated {
                        block: index,
                        label: w[0],
                    })
            {
                report.label_errors.push(LabelError::Repeated {
                    block: index,
                    label: w[0],
                });
            }
        }
        for &(u, v) in &pairs {
            coverage.hit(block.0[u], block.0[v]);
        }
    }
    coverage.compare(c.mode, &mut report);
    report.finish()
}

/// Certifies a decomposition of `K_n` given as explicit edge sets, checking
/// each part against the target by isomorphism search.
pub fn certify_raw_edges(order: u64, parts: &[Vec<(u32, u32)>], target: TargetId) -> CertReport {
    certify_raw_edges_in_mode(order, Mode::Complete, parts, target)
}

pub fn certify_raw_edges_in_mode(
    order: u64,
    mode: Mode,
    parts: &[Vec<(u32, u32)>],
    target: TargetId,
) -> CertReport {
    let mut report = CertReport {
        count_expected: match mode {
            Mode::Complete => Design::expected_block_count(order),
            Mode::FourPartite => 2,
        },
        count_actual: parts.len() as u64,
        ..CertReport::default()
    };
    let Some(n) = check_order(order, mode, &mut report) else {
        return report.finish();
    };
    let target_graph = &target.graph().graph;
    let mut coverage = Coverage::new(n);
    for (index, part) in parts.iter().enumerate() {
        for (position, &(a, b)) in part.iter().enumerate() {
            for label in [a, b] {
                if label >= n {
                    report.label_errors.push(LabelError::OutOfRange {
                        block: index,
                        position,
                        label,
                    });
                }
            }
            coverage.hit(a, b);
        }
        if part_graph(part).is_none_or(|g| is_isomorphic(&g, target_graph).is_none()) {
            report.isomorphism_errors.push(index);
        }
    }
    coverage.compare(mode, &mut report);
    report.finish()
}

// The part as a SmallGraph on its own vertex set, numbered by ascending label.
fn part_graph(part: &[(u32, u32)]) -> Option<SmallGraph> {
    let mut vertices: Vec<u32> = part.iter().flat_map(|&(a, b)| [a, b]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    if vertices.is_empty() || vertices.len() > crate::targets::MAX_VERTICES {
        return None;
    }
    let index = |x: u32| vertices.binary_search(&x).unwrap() + 1;
    SmallGraph::new(
        vertices.len(),
        part.iter().map(|&(a, b)| (index(a), index(b))),
    )
    .ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{develop, k4444_decomposition, published_base_block};

    fn d97() -> Certificate {
        Certificate::complete(
            &develop(&published_base_block(TargetId::Shrikhande, 97).unwrap()).unwrap(),
        )
    }

    #[test]
    fn pair_index_layout() {
        assert_eq!(pair_index(0, 1), 0);
        assert_eq!(pair_index(0, 2), 1);
        assert_eq!(pair_index(1, 2), 2);
        assert_eq!(pair_index(0, 3), 3);
    }

    #[test]
    fn published_97_design_passes() {
        let report = certify(&d97());
        assert!(report.pass, "{report}");
        assert_eq!(report.count_actual, 97);
    }

    #[test]
    fn four_partite_mode_accepts_published_pairs() {
        for t in TargetId::ALL {
            let c = Certificate::four_partite(t, k4444_decomposition(t).to_vec());
            assert!(certify(&c).pass);
        }
        // The same blocks do not decompose K_16.
        let mut c = Certificate::four_partite(
            TargetId::Shrikhande,
            k4444_decomposition(TargetId::Shrikhande).to_vec(),
        );
        c.mode = Mode::Complete;
        assert!(!certify(&c).pass);
    }

    #[test]
    fn swapping_positions_one_and_three_breaks_coverage() {
        let mut c = d97();
        c.blocks[0].0.swap(0, 2);
        let report = certify(&c);
        assert!(!report.pass);
        assert!(report.uncovered().count() >= 1);
        assert!(report.overcovered().count() >= 1);
        assert!(report.label_errors.is_empty());
    }

    #[test]
    fn label_problems_are_reported_not_raised() {
        let mut c = d97();
        c.blocks[3].0[5] = 500;
        c.blocks[4].0[1] = c.blocks[4].0[0];
        let report = certify(&c);
        assert!(!report.pass);
        assert!(report.label_errors.contains(&LabelError::OutOfRange {
            block: 3,
            position: 5,
            label: 500
        }));
        assert!(report
            .label_errors
            .iter()
            .any(|e| matches!(e, LabelError::Repeated { block: 4, .. })));
    }

    #[test]
    fn wrong_block_count_fails() {
        let mut c = d97();
        c.blocks.pop();
        let report = certify(&c);
        assert!(!report.pass);
        assert_eq!((report.count_expected, report.count_actual), (97, 96));
    }

    #[test]
    fn raw_edges_agree_with_tuple_form() {
        let c = d97();
        let raw = certify_raw_edges(97, &c.to_raw_edges(), TargetId::Shrikhande);
        assert!(raw.pass, "{raw}");
        assert!(!certify_raw_edges(97, &c.to_raw_edges(), TargetId::LineK44).pass);
    }

    #[test]
    fn raw_edges_reject_substituted_part() {
        let c = d97();
        let mut parts = c.to_raw_edges();
        let labels = c.blocks[0].0;
        parts[0] = crate::targets::line_k44()
            .position_pairs()
            .iter()
            .map(|&(u, v)| (labels[u], labels[v]))
            .collect();
        let report = certify_raw_edges(97, &parts, TargetId::Shrikhande);
        assert!(!report.pass);
        assert_eq!(report.isomorphism_errors, vec![0]);
    }

    #[test]
    fn empty_design_of_order_one() {
        assert!(certify_raw_edges(1, &[], TargetId::Shrikhande).pass);
        let c = Certificate {
            target: TargetId::LineK44,
            order: 1,
            mode: Mode::Complete,
            blocks: vec![],
        };
        assert!(certify(&c).pass);
    }

    #[test]
    fn oversized_order_fails_cleanly() {
        let c = Certificate {
            target: TargetId::Shrikhande,
            order: u64::MAX,
            mode: Mode::Complete,
            blocks: vec![],
        };
        let report = certify(&c);
        assert!(!report.pass);
        assert_eq!(report.structure_errors.len(), 1);
    }

    #[test]
    fn text_round_trip_is_byte_identical() {
        let c = d97();
        let text = c.to_text();
        assert!(text.starts_with("design shrikhande 97 complete\nblocks 97\n0 4 6 62 "));
        let back = Certificate::from_text(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn comments_are_ignored() {
        let text = "# produced by hand\ndesign lk44 16 4partite\n# two blocks\nblocks 2\n\
                    0 1 2 3 5 6 7 4 11 10 15 14 8 9 13 12\n\
                    0 9 11 14 10 13 15 7 1 8 4 2 6 3 12 5\n";
        let c = Certificate::from_text(text).unwrap();
        assert_eq!(c.mode, Mode::FourPartite);
        assert!(certify(&c).pass);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let text = d97().to_text();
        let truncated: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        match Certificate::from_text(&truncated) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 11);
                assert!(message.contains("truncated"));
            }
            other => panic!("unexpected {other:?}"),
        }

        let cut_mid_line = &text[..text.len() - 10];
        match Certificate::from_text(cut_mid_line) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 99),
            other => panic!("unexpected {other:?}"),
        }

        match Certificate::from_text("certificate v2 shrikhande 97\n") {
            Err(Error::Parse {
                line: 1, message, ..
            }) => assert!(message.contains("unsupported")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Certificate::from_text("design petersen 10 complete\nblocks 0\n").is_err());
        assert!(Certificate::from_text("design shrikhande 97 complete\nblocks 0\n1 2\n").is_err());
    }

    #[test]
    fn header_count_mismatch_is_semantic() {
        // Syntactically fine, but 97 points need 97 blocks.
        let text = "design shrikhande 97 complete\nblocks 1\n0 4 6 62 1 11 19 45 69 80 59 78 32 74 28 44\n";
        let c = Certificate::from_text(text).unwrap();
        let report = certify(&c);
        assert!(!report.pass);
        assert_eq!(report.count_expected, 97);
    }
}
