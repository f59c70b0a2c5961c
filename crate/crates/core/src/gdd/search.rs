//! Exact-cover search for small GDDs (Algorithm X over dancing links).
//!
//! Columns are the cross-group pairs, rows the candidate blocks (k points from
//! k distinct groups). A solution covers each column exactly once, which is
//! precisely the GDD condition.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::{Gdd, GddType};

/// Desk-scale guard on the number of points.
pub const MAX_SEARCH_POINTS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of rows tried before giving up.
    pub max_nodes: u64,
    /// Seeds the row order; the same seed always gives the same result.
    pub seed: u64,
    /// Fix the blocks through the first points when the type is `g^k`
    /// (a transversal design). Sound: any TD can be relabelled into this form.
    pub symmetry_breaking: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: 50_000_000,
            seed: 0,
            symmetry_breaking: true,
        }
    }
}

/// Searches for a `k`-GDD of type `ty`.
///
/// `Ok(Some(_))` is a verified GDD, `Ok(None)` means the whole search tree was
/// exhausted so none exists, and `Err(BudgetExhausted)` means neither could be
/// established within `limits.max_nodes`.
pub fn exact_cover_search(ty: &GddType, k: usize, limits: SearchLimits) -> Result<Option<Gdd>> {
    let v = ty.point_count();
    if v > MAX_SEARCH_POINTS {
        return Err(Error::Precondition(format!(
            "{v} points exceeds the search limit of {MAX_SEARCH_POINTS}"
        )));
    }
    if k < 2 || k > ty.group_count() {
        return Err(Error::Precondition(format!(
            "block size {k} impossible with {} groups",
            ty.group_count()
        )));
    }

    let sizes = ty.group_sizes();
    let mut groups: Vec<Vec<u32>> = Vec::with_capacity(sizes.len());
    let mut group_of = Vec::with_capacity(v);
    let mut next = 0u32;
    for (gi, &g) in sizes.iter().enumerate() {
        groups.push((next..next + g as u32).collect());
        group_of.extend(std::iter::repeat_n(gi, g));
        next += g as u32;
    }

    // Column index of each cross pair.
    let mut column = vec![usize::MAX; v * v];
    let mut columns = 0;
    for a in 0..v {
        for b in a + 1..v {
            if group_of[a] != group_of[b] {
                column[a * v + b] = columns;
                columns += 1;
            }
        }
    }

    let transversal = limits.symmetry_breaking
        && sizes.len() == k
        && k >= 3
        && sizes.iter().all(|&g| g == sizes[0]);
    let g = sizes[0] as u32;
    let forced: Vec<Vec<u32>> = if transversal {
        // Blocks through point 0: {0, g + j, 2g + j, ...} for every j.
        (0..g)
            .map(|j| {
                (0..k as u32)
                    .map(|i| if i == 0 { 0 } else { i * g + j })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut current = Vec::with_capacity(k);
    candidate_blocks(&groups, k, 0, &mut current, &mut rows);
    if transversal {
        rows.retain(|b| !b.contains(&0) && admissible_second_level(b, g));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    rows.shuffle(&mut rng);

    let row_columns = |b: &[u32]| -> Vec<usize> {
        let mut cols = Vec::with_capacity(k * (k - 1) / 2);
        for (i, &a) in b.iter().enumerate() {
            for &c in &b[i + 1..] {
                let (x, y) = (a.min(c) as usize, a.max(c) as usize);
                cols.push(column[x * v + y]);
            }
        }
        cols
    };

    let mut dlx = Dlx::new(columns);
    for b in &rows {
        dlx.add_row(&row_columns(b));
    }
    for b in &forced {
        dlx.select_columns(&row_columns(b))?;
    }

    let mut chosen = Vec::new();
    let mut nodes = 0u64;
    match dlx.search(&mut chosen, &mut nodes, limits.max_nodes) {
        Outcome::Exhausted => Ok(None),
        Outcome::OutOfBudget => Err(Error::BudgetExhausted { nodes }),
        Outcome::Found => {
            let mut blocks: Vec<Vec<u32>> = forced;
            blocks.extend(chosen.iter().map(|&r| rows[r].clone()));
            blocks.sort();
            let gdd = Gdd::new(k, groups, blocks)?
                .with_provenance(format!(
                    "exact_cover_search seed {} ({nodes} nodes)",
                    limits.seed
                ))
                .verified()?;
            Ok(Some(gdd))
        }
    }
}

/// Largest point count accepted by [`orbit_search`].
pub const MAX_ORBIT_POINTS: usize = 96;

/// Searches for a `k`-GDD of uniform type `g^u` on `Z_{gu}` (groups = residue
/// classes mod `u`) that is invariant under `x ↦ x + shift`.
///
/// Rows are orbits of candidate blocks, columns orbits of cross pairs; only
/// full-length orbits are used, so each chosen block orbit covers each of its
/// pair orbits exactly once. `Ok(None)` means no GDD with this automorphism
/// exists, which says nothing about GDDs without it.
pub fn orbit_search(
    ty: &GddType,
    k: usize,
    shift: usize,
    limits: SearchLimits,
) -> Result<Option<Gdd>> {
    let &[(g, u)] = ty.parts.as_slice() else {
        return Err(Error::Precondition(format!(
            "orbit search needs a uniform type, got {ty}"
        )));
    };
    let v = g * u;
    if v > MAX_ORBIT_POINTS {
        return Err(Error::Precondition(format!(
            "{v} points exceeds the orbit search limit of {MAX_ORBIT_POINTS}"
        )));
    }
    if k < 2 || k > u {
        return Err(Error::Precondition(format!(
            "block size {k} impossible with {u} groups"
        )));
    }
    if shift == 0 || v % shift != 0 {
        return Err(Error::Precondition(format!(
            "shift {shift} does not divide {v}"
        )));
    }
    let m = v / shift;
    let translate = |x: usize, t: usize| (x + t * shift) % v;

    // Orbit id of every cross pair (a < b), all orbits of full length m.
    let mut pair_orbit = vec![usize::MAX; v * v];
    let mut columns = 0;
    for a in 0..v {
        for b in a + 1..v {
            if a % u == b % u || pair_orbit[a * v + b] != usize::MAX {
                continue;
            }
            let mut members = Vec::with_capacity(m);
            for t in 0..m {
                let (x, y) = (translate(a, t), translate(b, t));
                let (x, y) = (x.min(y), x.max(y));
                if !members.contains(&(x, y)) {
                    members.push((x, y));
                }
            }
            if members.len() != m {
                return Err(Error::Precondition(format!(
                    "pair {{{a},{b}}} crosses groups but has a short orbit under shift {shift}"
                )));
            }
            for (x, y) in members {
                pair_orbit[x * v + y] = columns;
            }
            columns += 1;
        }
    }

    let mut rows: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
    for first in 0..shift {
        let mut current = vec![first as u32];
        orbit_representatives(v, u, k, shift, &pair_orbit, &mut current, &mut rows);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    rows.shuffle(&mut rng);

    let mut dlx = Dlx::new(columns);
    for (_, cols) in &rows {
        dlx.add_row(cols);
    }
    let mut chosen = Vec::new();
    let mut nodes = 0u64;
    match dlx.search(&mut chosen, &mut nodes, limits.max_nodes) {
        Outcome::Exhausted => Ok(None),
        Outcome::OutOfBudget => Err(Error::BudgetExhausted { nodes }),
        Outcome::Found => {
            let mut bases: Vec<&Vec<u32>> = chosen.iter().map(|&r| &rows[r].0).collect();
            bases.sort();
            let mut blocks: Vec<Vec<u32>> = bases
                .iter()
                .flat_map(|b| {
                    (0..m).map(move |t| {
                        let mut blk: Vec<u32> =
                            b.iter().map(|&x| translate(x as usize, t) as u32).collect();
                        blk.sort_unstable();
                        blk
                    })
                })
                .collect();
            blocks.sort();
            let groups = (0..u as u32)
                .map(|i| (0..g as u32).map(|j| i + j * u as u32).collect())
                .collect();
            let described = bases
                .iter()
                .map(|b| format!("{b:?}"))
                .collect::<Vec<_>>()
                .join(" ");
            let gdd = Gdd::new(k, groups, blocks)?
                .with_provenance(format!(
                    "orbit_search shift {shift} seed {} ({nodes} nodes), base blocks mod {v}: {described}",
                    limits.seed
                ))
                .verified()?;
            Ok(Some(gdd))
        }
    }
}

// Blocks with points in distinct groups whose pairs fall in distinct cross
// pair orbits, whose own orbit has full length, and which are the least
// translate in that orbit.
fn orbit_representatives(
    v: usize,
    u: usize,
    k: usize,
    shift: usize,
    pair_orbit: &[usize],
    current: &mut Vec<u32>,
    out: &mut Vec<(Vec<u32>, Vec<usize>)>,
) {
    if current.len() == k {
        let mut cols: Vec<usize> = Vec::with_capacity(k * (k - 1) / 2);
        for (i, &a) in current.iter().enumerate() {
            for &b in &current[i + 1..] {
                cols.push(pair_orbit[a as usize * v + b as usize]);
            }
        }
        let mut sorted = cols.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let m = v / shift;
        let translates: Vec<Vec<u32>> = (0..m)
            .map(|t| {
                let mut b: Vec<u32> = current
                    .iter()
                    .map(|&x| ((x as usize + t * shift) % v) as u32)
                    .collect();
                b.sort_unstable();
                b
            })
            .collect();
        let full_length = translates[1..].iter().all(|b| b != current);
        if full_length
            && translates
                .iter()
                .min()
                .is_some_and(|least| least == current)
        {
            out.push((current.clone(), cols));
        }
        return;
    }
    let last = *current.last().expect("starts with a point") as usize;
    for x in last + 1..v {
        if current.iter().any(|&y| (x - y as usize).is_multiple_of(u)) {
            continue;
        }
        current.push(x as u32);
        orbit_representatives(v, u, k, shift, pair_orbit, current, out);
        current.pop();
    }
}

// Second-level normalisation for transversal designs: the block through g
// (the first point of group 1) and 2g + i, i ≥ 1, must contain point i.
fn admissible_second_level(block: &[u32], g: u32) -> bool {
    if block.len() < 3 || block[1] != g {
        return true;
    }
    let i = block[2] - 2 * g;
    i == 0 || block[0] == i
}

// All k-subsets (ascending) taking at most one point per group.
fn candidate_blocks(
    groups: &[Vec<u32>],
    k: usize,
    from: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    let needed = k - current.len();
    for gi in from..groups.len() {
        if groups.len() - gi < needed {
            break;
        }
        for &p in &groups[gi] {
            current.push(p);
            candidate_blocks(groups, k, gi + 1, current, out);
            current.pop();
        }
    }
}

enum Outcome {
    Found,
    Exhausted,
    OutOfBudget,
}

/// Dancing-links matrix. Node 0 is the root, nodes `1..=columns` the column
/// headers, the rest row entries.
struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    rows: usize,
}

impl Dlx {
    fn new(columns: usize) -> Dlx {
        let n = columns + 1;
        let mut d = Dlx {
            left: (0..n)
                .map(|i| if i == 0 { columns } else { i - 1 })
                .collect(),
            right: (0..n)
                .map(|i| if i == columns { 0 } else { i + 1 })
                .collect(),
            up: (0..n).collect(),
            down: (0..n).collect(),
            col: (0..n).collect(),
            row: vec![usize::MAX; n],
            size: vec![0; n],
            rows: 0,
        };
        if columns == 0 {
            d.left[0] = 0;
            d.right[0] = 0;
        }
        d
    }

    fn add_row(&mut self, columns: &[usize]) {
        let first = self.left.len();
        for (i, &c) in columns.iter().enumerate() {
            let node = first + i;
            let header = c + 1;
            self.col.push(header);
            self.row.push(self.rows);
            self.up.push(self.up[header]);
            self.down.push(header);
            let above = self.up[header];
            self.down[above] = node;
            self.up[header] = node;
            self.size[header] += 1;
            self.left.push(if i == 0 {
                first + columns.len() - 1
            } else {
                node - 1
            });
            self.right.push(if i + 1 == columns.len() {
                first
            } else {
                node + 1
            });
        }
        self.rows += 1;
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Commits a fixed block: covers its columns, which must all still be open.
    fn select_columns(&mut self, columns: &[usize]) -> Result<()> {
        for &c in columns {
            let header = c + 1;
            if self.right[self.left[header]] != header {
                return Err(Error::Precondition("forced blocks overlap".into()));
            }
            self.cover(header);
        }
        Ok(())
    }

    fn search(&mut self, chosen: &mut Vec<usize>, nodes: &mut u64, budget: u64) -> Outcome {
        if self.right[0] == 0 {
            return Outcome::Found;
        }
        // Column with fewest remaining rows.
        let mut c = self.right[0];
        let mut j = self.right[c];
        while j != 0 {
            if self.size[j] < self.size[c] {
                c = j;
            }
            j = self.right[j];
        }
        if self.size[c] == 0 {
            return Outcome::Exhausted;
        }
        self.cover(c);
        let mut r = self.down[c];
        while r != c {
            if *nodes >= budget {
                self.uncover(c);
                return Outcome::OutOfBudget;
            }
            *nodes += 1;
            chosen.push(self.row[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            let outcome = self.search(chosen, nodes, budget);
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            match outcome {
                Outcome::Exhausted => {
                    chosen.pop();
                }
                done => {
                    if matches!(done, Outcome::OutOfBudget) {
                        chosen.pop();
                    }
                    self.uncover(c);
                    return done;
                }
            }
            r = self.down[r];
        }
        self.uncover(c);
        Outcome::Exhausted
    }
}
