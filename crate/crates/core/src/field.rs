//! Arithmetic in GF(2^h), 1 <= h <= 16, in a polynomial basis.
//!
//! An element is a bit-vector of length `h` (bit `i` is the coefficient of
//! `x^i`) wrapped in [`Gf`]. Addition is XOR and needs no field context, so
//! [`Gf`] implements `Add` directly; everything else goes through a
//! [`Field`], which owns log/antilog tables built from the modulus.
//!
//! ```
//! use arcflock::field::{Field, Gf};
//!
//! let f = Field::new(3).unwrap();
//! assert_eq!(f.modulus(), 0b1011); // x^3 + x + 1
//! let x = Gf(0b010);
//! assert_eq!(f.mul(x, f.mul(x, x)), Gf(0b011)); // x^3 = x + 1
//! assert_eq!(f.trace(Gf::ONE), 1); // h odd
//! ```

use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2;

pub const MAX_DEGREE: u32 = 16;

/// An element of GF(2^h) as its coefficient bit-vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf(pub u32);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Gf {
    type Output = Gf;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl AddAssign for Gf {
    #[allow(clippy::suspicious_op_assign_impl)] // addition in characteristic 2
    fn add_assign(&mut self, rhs: Gf) {
        self.0 ^= rhs.0;
    }
}

impl std::iter::Sum for Gf {
    fn sum<I: Iterator<Item = Gf>>(iter: I) -> Gf {
        iter.fold(Gf::ZERO, Add::add)
    }
}

/// Wire form of a field: `{"h": int, "modulus": int}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub h: u32,
    pub modulus: u32,
}

fn degree(poly: u32) -> u32 {
    31 - poly.leading_zeros()
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree 1..=h/2.
pub fn is_irreducible(modulus: u32, h: u32) -> bool {
    if modulus == 0 || degree(modulus) != h || modulus & 1 == 0 {
        return false;
    }
    (2u32..1 << (h / 2 + 1)).all(|d| poly_rem(modulus, d) != 0)
}

/// The lexicographically least irreducible polynomial of degree `h` with
/// constant term 1.
pub fn least_irreducible(h: u32) -> Result<u32> {
    if !(1..=MAX_DEGREE).contains(&h) {
        return Err(Error::DegreeOutOfRange(h));
    }
    Ok(((1u32 << h) + 1..1 << (h + 1))
        .step_by(2)
        .find(|&m| is_irreducible(m, h))
        .expect("an irreducible polynomial exists for every degree"))
}

/// Shift-and-add product modulo `modulus`; slow but table-free.
pub fn mul_reference(mut a: u32, mut b: u32, modulus: u32, h: u32) -> u32 {
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> h & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

struct Tables {
    h: u32,
    modulus: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_mask: u32,
    /// Rows of the GF(2)-linear map x -> x^2 + x (row j = output bit j).
    artin_schreier: Vec<(u32, bool)>,
}

/// GF(2^h) with a fixed polynomial basis. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.h() == other.h() && self.modulus() == other.modulus()
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; {:#x})", self.h(), self.modulus())
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_reference(mut a: u32, mut e: u32, modulus: u32, h: u32) -> u32 {
    let mut acc = 1;
    while e != 0 {
        if e & 1 == 1 {
            acc = mul_reference(acc, a, modulus, h);
        }
        a = mul_reference(a, a, modulus, h);
        e >>= 1;
    }
    acc
}

impl Field {
    /// GF(2^h) over the least irreducible polynomial of degree `h`.
    pub fn new(h: u32) -> Result<Field> {
        Field::with_modulus(h, least_irreducible(h)?)
    }

    /// GF(2^h) over an explicit modulus, for cross-checking external tables.
    pub fn with_modulus(h: u32, modulus: u32) -> Result<Field> {
        if !(1..=MAX_DEGREE).contains(&h) {
            return Err(Error::DegreeOutOfRange(h));
        }
        if !is_irreducible(modulus, h) {
            return Err(Error::BadModulus { h, modulus });
        }
        let q = 1u32 << h;
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&p| pow_reference(g, order / p, modulus, h) != 1))
            .expect("the multiplicative group is cyclic");

        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for i in 0..order {
            exp[i as usize] = acc;
            exp[(i + order) as usize] = acc;
            log[acc as usize] = i;
            acc = mul_reference(acc, generator, modulus, h);
        }

        let trace_mask = (0..h).fold(0u32, |mask, i| {
            let mut x = 1u32 << i;
            let mut t = 0;
            for _ in 0..h {
                t ^= x;
                x = mul_reference(x, x, modulus, h);
            }
            debug_assert!(t <= 1);
            mask | (t << i)
        });

        let images: Vec<u32> = (0..h)
            .map(|i| {
                let e = 1u32 << i;
                mul_reference(e, e, modulus, h) ^ e
            })
            .collect();
        let artin_schreier = (0..h)
            .map(|j| {
                let row = images.iter().enumerate().fold(0u32, |row, (i, &img)| row | ((img >> j & 1) << i));
                (row, false)
            })
            .collect();

        Ok(Field(Arc::new(Tables { h, modulus, exp, log, trace_mask, artin_schreier })))
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Field> {
        Field::with_modulus(spec.h, spec.modulus)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { h: self.h(), modulus: self.modulus() }
    }

    pub fn h(&self) -> u32 {
        self.0.h
    }

    pub fn modulus(&self) -> u32 {
        self.0.modulus
    }

    /// The order q = 2^h.
    pub fn q(&self) -> u32 {
        1 << self.0.h
    }

    /// Checked conversion from an integer.
    pub fn element(&self, value: u32) -> Result<Gf> {
        if value < self.q() {
            Ok(Gf(value))
        } else {
            Err(Error::NotInField { value, h: self.h() })
        }
    }

    pub fn contains(&self, a: Gf) -> bool {
        a.0 < self.q()
    }

    /// Every element in ascending integer order.
    pub fn elements(&self) -> impl Iterator<Item = Gf> + Clone {
        (0..self.q()).map(Gf)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Gf> + Clone {
        (1..self.q()).map(Gf)
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        debug_assert!(self.contains(a) && self.contains(b));
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        let t = &self.0;
        Gf(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    /// Multiplication that rejects values outside this field.
    pub fn checked_mul(&self, a: Gf, b: Gf) -> Result<Gf> {
        for v in [a, b] {
            if !self.contains(v) {
                return Err(Error::NotInField { value: v.0, h: self.h() });
            }
        }
        Ok(self.mul(a, b))
    }

    pub fn square(&self, a: Gf) -> Gf {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = &self.0;
        let order = self.q() - 1;
        Ok(Gf(t.exp[((order - t.log[a.0 as usize]) % order) as usize]))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        if a.is_zero() {
            return Gf::ZERO;
        }
        let order = (self.q() - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64 * (e % order) % order;
        Gf(self.0.exp[l as usize])
    }

    /// The unique square root; squaring is a bijection in characteristic 2.
    pub fn sqrt(&self, a: Gf) -> Gf {
        // log(sqrt a) = log(a) * (q/2) mod (q-1), since 2 * q/2 = q = 1 mod (q-1).
        self.pow(a, (self.q() / 2) as u64)
    }

    /// Absolute trace Tr(a) = a + a^2 + ... + a^(2^(h-1)), as 0 or 1.
    pub fn trace(&self, a: Gf) -> u8 {
        ((a.0 & self.0.trace_mask).count_ones() & 1) as u8
    }

    /// Bit `i` is Tr(x^i); Tr(a) is the parity of `a & trace_mask`.
    pub fn trace_mask(&self) -> u32 {
        self.0.trace_mask
    }

    /// Roots `{r, r+1}` of `x^2 + x + c`, smaller first, or `None` when
    /// Tr(c) = 1.
    pub fn solve_affine_quadratic(&self, c: Gf) -> Option<(Gf, Gf)> {
        if self.trace(c) == 1 {
            return None;
        }
        let rows: Vec<(u32, bool)> =
            self.0.artin_schreier.iter().enumerate().map(|(j, &(row, _))| (row, c.0 >> j & 1 == 1)).collect();
        let r = gf2::row_reduce(&rows, self.h()).particular()?;
        let (a, b) = (Gf(r), Gf(r ^ 1));
        Some((a.min(b), a.max(b)))
    }

    /// GF(2)-span of `generators`, sorted ascending. Always contains 0.
    pub fn additive_span(&self, generators: &[Gf]) -> Vec<Gf> {
        let mut span = vec![Gf::ZERO];
        for &g in generators {
            if !span.contains(&g) {
                let shifted: Vec<Gf> = span.iter().map(|&s| s + g).collect();
                span.extend(shifted);
            }
        }
        span.sort_unstable();
        span
    }

    /// Whether `set` (given without zero) together with 0 is closed under
    /// addition.
    pub fn is_subgroup_minus_zero(&self, set: &[Gf]) -> bool {
        if set.iter().any(|a| a.is_zero() || !self.contains(*a)) {
            return false;
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != set.len() {
            return false;
        }
        let span = self.additive_span(&sorted);
        span.len() == sorted.len() + 1
    }
}
