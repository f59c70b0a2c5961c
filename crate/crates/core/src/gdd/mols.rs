//! Mutually orthogonal Latin squares and the transversal designs built from them.

use crate::algebra::is_prime;
use crate::error::{Error, Result};

use super::Gdd;

/// A set of pairwise orthogonal Latin squares of one order. Each square is
/// stored row-major with entries in `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolsSet {
    order: usize,
    squares: Vec<Vec<u32>>,
}

impl MolsSet {
    /// Checks every square is Latin and every pair is orthogonal.
    pub fn new(order: usize, squares: Vec<Vec<u32>>) -> Result<MolsSet> {
        if order == 0 {
            return Err(Error::UnsupportedOrder(0));
        }
        for (i, sq) in squares.iter().enumerate() {
            if sq.len() != order * order {
                return Err(Error::VerificationFailed(format!(
                    "square {i} has wrong size"
                )));
            }
            if !is_latin(order, sq) {
                return Err(Error::VerificationFailed(format!(
                    "square {i} is not Latin"
                )));
            }
        }
        for i in 0..squares.len() {
            for j in i + 1..squares.len() {
                if !orthogonal(order, &squares[i], &squares[j]) {
                    return Err(Error::VerificationFailed(format!(
                        "squares {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        Ok(MolsSet { order, squares })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn squares(&self) -> &[Vec<u32>] {
        &self.squares
    }

    pub fn entry(&self, square: usize, row: usize, col: usize) -> u32 {
        self.squares[square][row * self.order + col]
    }

    /// First `count` squares only.
    pub fn truncate(mut self, count: usize) -> MolsSet {
        self.squares.truncate(count);
        self
    }
}

pub fn is_latin(order: usize, square: &[u32]) -> bool {
    let mut seen = vec![false; order];
    let line_ok = |seen: &mut Vec<bool>, it: &mut dyn Iterator<Item = u32>| {
        seen.iter_mut().for_each(|s| *s = false);
        for v in it {
            let v = v as usize;
            if v >= order || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    };
    (0..order).all(|r| {
        line_ok(&mut seen, &mut (0..order).map(|c| square[r * order + c]))
            && line_ok(&mut seen, &mut (0..order).map(|c| square[c * order + r]))
    })
}

pub fn orthogonal(order: usize, a: &[u32], b: &[u32]) -> bool {
    let mut seen = vec![false; order * order];
    for (&x, &y) in a.iter().zip(b) {
        let idx = x as usize * order + y as usize;
        if seen[idx] {
            return false;
        }
        seen[idx] = true;
    }
    true
}

/// The `q - 1` squares `L_a(x, y) = a·x + y` over `Z_q`, `a = 1..q-1`.
pub fn mols_prime_power(q: u32) -> Result<MolsSet> {
    if !is_prime(u64::from(q)) {
        return Err(Error::UnsupportedOrder(q));
    }
    let squares = (1..q)
        .map(|a| {
            (0..q)
                .flat_map(|x| (0..q).map(move |y| (a * x + y) % q))
                .collect()
        })
        .collect();
    MolsSet::new(q as usize, squares)
}

/// GF(2^r) for r = 2, 3, with elements as bit vectors of polynomial
/// coefficients. Only the orders 4 and 8 are needed here.
#[derive(Debug, Clone, Copy)]
struct BinaryField {
    bits: u32,
    modulus: u32,
}

impl BinaryField {
    fn of_order(q: u32) -> Option<BinaryField> {
        match q {
            4 => Some(BinaryField {
                bits: 2,
                modulus: 0b111,
            }),
            8 => Some(BinaryField {
                bits: 3,
                modulus: 0b1011,
            }),
            _ => None,
        }
    }

    fn mul(self, mut x: u32, y: u32) -> u32 {
        let mut acc = 0;
        for i in 0..self.bits {
            if y >> i & 1 == 1 {
                acc ^= x;
            }
            x <<= 1;
            if x >> self.bits & 1 == 1 {
                x ^= self.modulus;
            }
        }
        acc
    }
}

/// `q - 1` MOLS of order 4 or 8 from the field of that order.
pub fn mols_binary_field(q: u32) -> Result<MolsSet> {
    let field = BinaryField::of_order(q).ok_or(Error::UnsupportedOrder(q))?;
    let squares = (1..q)
        .map(|a| {
            (0..q)
                .flat_map(|x| (0..q).map(move |y| field.mul(a, x) ^ y))
                .collect()
        })
        .collect();
    MolsSet::new(q as usize, squares)
}

/// Product construction: square `i` of the result pairs square `i` of `a`
/// with square `i` of `b`, entry `(a_i(x1,y1), b_i(x2,y2))` coded as
/// `a_i·n + b_i` at row `x1·n + x2`, column `y1·n + y2`.
pub fn kronecker_mols(a: &MolsSet, b: &MolsSet) -> Result<MolsSet> {
    let (m, n) = (a.order, b.order);
    let s = a.len().min(b.len());
    let mn = m * n;
    let squares = (0..s)
        .map(|i| {
            let mut sq = vec![0u32; mn * mn];
            for x1 in 0..m {
                for x2 in 0..n {
                    for y1 in 0..m {
                        for y2 in 0..n {
                            sq[(x1 * n + x2) * mn + y1 * n + y2] =
                                a.entry(i, x1, y1) * n as u32 + b.entry(i, x2, y2);
                        }
                    }
                }
            }
            sq
        })
        .collect();
    MolsSet::new(mn, squares)
}

/// The largest MOLS set this crate can build for `m`: primes and the binary
/// fields directly, anything else as a product over its prime-power factors.
pub fn mols_for_order(m: u32) -> Result<MolsSet> {
    if m == 1 {
        return MolsSet::new(1, vec![]);
    }
    let mut factors = Vec::new();
    let mut rest = m;
    let mut p = 2;
    while rest > 1 {
        if rest.is_multiple_of(p) {
            let mut pk = 1;
            while rest.is_multiple_of(p) {
                rest /= p;
                pk *= p;
            }
            factors.push(pk);
        }
        p += 1;
    }
    let mut sets = factors.into_iter().map(|q| {
        if is_prime(u64::from(q)) {
            mols_prime_power(q)
        } else {
            mols_binary_field(q)
        }
    });
    let first = sets.next().expect("m > 1 has a factor")?;
    sets.try_fold(first, |acc, next| kronecker_mols(&acc, &next?))
}

/// TD(k, m) as a k-GDD of type `m^k`: group `i` is `{i·m, …, i·m + m - 1}` and
/// the block for cell `(x, y)` is `{x, m + y, 2m + L_1(x,y), …}`.
pub fn td_from_mols(k: usize, m: usize, mols: &MolsSet) -> Result<Gdd> {
    if k < 2 {
        return Err(Error::Precondition(format!("TD block size {k} < 2")));
    }
    if mols.order() != m {
        return Err(Error::Precondition(format!(
            "MOLS of order {} supplied for TD(k, {m})",
            mols.order()
        )));
    }
    if mols.len() < k - 2 {
        return Err(Error::IngredientUnavailable(format!(
            "TD({k},{m}) needs {} MOLS of order {m}, only {} available",
            k - 2,
            mols.len()
        )));
    }
    let m32 = m as u32;
    let mut blocks = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            let mut block = vec![x as u32, m32 + y as u32];
            for i in 0..k - 2 {
                block.push((i as u32 + 2) * m32 + mols.entry(i, x, y));
            }
            blocks.push(block);
        }
    }
    let groups = (0..k as u32)
        .map(|i| (i * m32..(i + 1) * m32).collect())
        .collect();
    Gdd::new(k, groups, blocks)?
        .with_provenance(format!("TD({k},{m}) from {} MOLS of order {m}", k - 2))
        .verified()
}
