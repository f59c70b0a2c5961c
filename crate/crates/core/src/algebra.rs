//! Exact arithmetic in `Z_p` (p prime) and in GF(17²).
//!
//! Elements are plain integer codes. In GF(17²) the code `17a + b` stands for
//! `a·z + b`, and products are reduced with `z² + 3z + 1`, i.e. `z² = 14z + 16`.

use std::fmt;

use crate::error::{Error, Result};

const GF_P: u32 = 17;
// z² + 3z + 1 = 0  ⇒  z² = -3z - 1 = 14z + 16 (mod 17)
const REDUCTION_LINEAR: u32 = 3;
const REDUCTION_CONSTANT: u32 = 1;

/// An element code. Which ring it lives in is carried by the [`Ring`] it is
/// used with; every operation range-checks its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub u32);

impl Element {
    pub fn code(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    PrimeField(u32),
    Gf289,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn prime_field(p: u32) -> Result<Ring> {
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(u64::from(p)));
        }
        Ok(Ring::PrimeField(p))
    }

    pub fn gf289() -> Result<Ring> {
        if reduction_polynomial_roots().next().is_some() {
            return Err(Error::ReduciblePolynomial);
        }
        Ok(Ring::Gf289)
    }

    /// The ring whose elements name the points of a design of order `n`:
    /// `Z_n` for prime `n`, GF(17²) for 289.
    pub fn for_order(n: u32) -> Result<Ring> {
        if n == 289 {
            Ring::gf289()
        } else {
            Ring::prime_field(n)
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Ring::PrimeField(p) => p,
            Ring::Gf289 => GF_P * GF_P,
        }
    }

    pub fn zero(self) -> Element {
        Element(0)
    }

    pub fn one(self) -> Element {
        Element(1)
    }

    pub fn element(self, code: u32) -> Result<Element> {
        if code < self.order() {
            Ok(Element(code))
        } else {
            Err(Error::InvalidElement {
                code,
                order: self.order(),
            })
        }
    }

    pub fn elements(self) -> impl Iterator<Item = Element> {
        (0..self.order()).map(Element)
    }

    fn check(self, x: Element) -> Result<u32> {
        self.element(x.0).map(|e| e.0)
    }

    pub fn add(self, x: Element, y: Element) -> Result<Element> {
        let (x, y) = (self.check(x)?, self.check(y)?);
        Ok(Element(match self {
            Ring::PrimeField(p) => (x + y) % p,
            Ring::Gf289 => {
                let ((a, b), (c, d)) = (split(x), split(y));
                join((a + c) % GF_P, (b + d) % GF_P)
            }
        }))
    }

    pub fn neg(self, x: Element) -> Result<Element> {
        let x = self.check(x)?;
        Ok(Element(match self {
            Ring::PrimeField(p) => (p - x) % p,
            Ring::Gf289 => {
                let (a, b) = split(x);
                join((GF_P - a) % GF_P, (GF_P - b) % GF_P)
            }
        }))
    }

    pub fn sub(self, x: Element, y: Element) -> Result<Element> {
        self.add(x, self.neg(y)?)
    }

    pub fn mul(self, x: Element, y: Element) -> Result<Element> {
        let (x, y) = (self.check(x)?, self.check(y)?);
        Ok(Element(match self {
            Ring::PrimeField(p) => ((u64::from(x) * u64::from(y)) % u64::from(p)) as u32,
            Ring::Gf289 => {
                // (az + b)(cz + d) = ac·z² + (ad + bc)·z + bd
                let ((a, b), (c, d)) = (split(x), split(y));
                let ac = a * c;
                let linear = a * d + b * c + ac * (GF_P - REDUCTION_LINEAR);
                let constant = b * d + ac * (GF_P - REDUCTION_CONSTANT);
                join(linear % GF_P, constant % GF_P)
            }
        }))
    }

    /// `x^e` by repeated squaring; `x^0 = 1`.
    pub fn pow(self, x: Element, mut e: u64) -> Result<Element> {
        let mut base = Element(self.check(x)?);
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base)?;
            }
            base = self.mul(base, base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicative inverse via `x^(q-2)`; `None` for zero.
    pub fn inverse(self, x: Element) -> Result<Option<Element>> {
        let code = self.check(x)?;
        if code == 0 {
            return Ok(None);
        }
        self.pow(x, u64::from(self.order()) - 2).map(Some)
    }

    /// Smallest `k ≥ 1` with `x^k = 1`, or `None` for zero.
    pub fn multiplicative_order(self, x: Element) -> Result<Option<u32>> {
        if self.check(x)? == 0 {
            return Ok(None);
        }
        let mut acc = x;
        for k in 1..self.order() {
            if acc == self.one() {
                return Ok(Some(k));
            }
            acc = self.mul(acc, x)?;
        }
        unreachable!("nonzero element of a finite field has finite order")
    }

    /// The set `{±ω^e : 0 ≤ e < exponents}`, provided it is a subgroup of the
    /// unit group of size exactly `2·exponents`.
    pub fn signed_power_subgroup(self, omega: Element, exponents: u32) -> Result<Vec<Element>> {
        let not_subgroup = || Error::NotASubgroup {
            omega: omega.0,
            exponents,
            expected: 2 * exponents,
        };
        if exponents == 0 || self.check(omega)? == 0 {
            return Err(not_subgroup());
        }
        let mut members = Vec::with_capacity(2 * exponents as usize);
        let mut power = self.one();
        for _ in 0..exponents {
            members.push(power);
            members.push(self.neg(power)?);
            power = self.mul(power, omega)?;
        }
        members.sort_unstable();
        members.dedup();
        if members.len() != 2 * exponents as usize {
            return Err(not_subgroup());
        }
        for &a in &members {
            for &b in &members {
                if members.binary_search(&self.mul(a, b)?).is_err() {
                    return Err(not_subgroup());
                }
            }
        }
        Ok(members)
    }

    /// Partition of the nonzero elements into cosets of `H = {±ω^e}`.
    pub fn unit_group_coset_partition(
        self,
        omega: Element,
        exponents: u32,
    ) -> Result<CosetPartition> {
        let subgroup = self.signed_power_subgroup(omega, exponents)?;
        let order = self.order() as usize;
        let mut index = vec![None; order];
        let mut cosets = Vec::new();
        for x in self.elements().skip(1) {
            if index[x.0 as usize].is_some() {
                continue;
            }
            let mut coset = subgroup
                .iter()
                .map(|&h| self.mul(x, h))
                .collect::<Result<Vec<_>>>()?;
            coset.sort_unstable();
            for y in &coset {
                index[y.0 as usize] = Some(cosets.len());
            }
            cosets.push(coset);
        }
        Ok(CosetPartition {
            subgroup,
            cosets,
            index,
        })
    }
}

/// Cosets of a subgroup `H` of the unit group, ordered by least element.
#[derive(Debug, Clone)]
pub struct CosetPartition {
    pub subgroup: Vec<Element>,
    pub cosets: Vec<Vec<Element>>,
    index: Vec<Option<usize>>,
}

impl CosetPartition {
    /// Index of the coset holding `x`; `None` for zero or out-of-range codes.
    pub fn coset_of(&self, x: Element) -> Option<usize> {
        self.index.get(x.0 as usize).copied().flatten()
    }
}

/// Roots of `z² + 3z + 1` in `Z_17` (there are none).
pub fn reduction_polynomial_roots() -> impl Iterator<Item = u32> {
    (0..GF_P).filter(|z| (z * z + REDUCTION_LINEAR * z + REDUCTION_CONSTANT).is_multiple_of(GF_P))
}

/// Splits a GF(17²) code into `(a, b)` with `code = 17a + b`.
pub fn split(code: u32) -> (u32, u32) {
    (code / GF_P, code % GF_P)
}

pub fn join(a: u32, b: u32) -> u32 {
    GF_P * a + b
}
