use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Serialize};

/// Largest supported truncation order.
pub const MAX_ORDER: u32 = 63;

/// An element of `F₂[u]/uᵏ`, stored as the bit pattern of its coefficients
/// (bit `i` is the coefficient of `uⁱ`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElem {
    k: u32,
    bits: u64,
}

impl RingElem {
    pub fn new(k: u32, bits: u64) -> Self {
        assert!((1..=MAX_ORDER).contains(&k), "truncation order {k} out of range");
        RingElem { k, bits: bits & Self::mask(k) }
    }

    fn mask(k: u32) -> u64 {
        (1u64 << k) - 1
    }

    pub fn zero(k: u32) -> Self {
        Self::new(k, 0)
    }

    pub fn one(k: u32) -> Self {
        Self::new(k, 1)
    }

    /// `uᵖ`, which is zero once `p ≥ k`.
    pub fn u_pow(k: u32, p: u32) -> Self {
        if p >= k {
            Self::zero(k)
        } else {
            Self::new(k, 1 << p)
        }
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn coeff(&self, i: u32) -> bool {
        i < self.k && (self.bits >> i) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_unit(&self) -> bool {
        self.bits & 1 == 1
    }

    /// Reduce modulo `uᵐ` for `m ≤ k`.
    pub fn truncate(&self, m: u32) -> Self {
        assert!(m <= self.k);
        Self::new(m, self.bits)
    }

    /// Iterator over the exponents with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.k).filter(move |&i| self.coeff(i))
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, rhs: RingElem) -> RingElem {
        debug_assert_eq!(self.k, rhs.k);
        RingElem { k: self.k, bits: self.bits ^ rhs.bits }
    }
}

impl AddAssign for RingElem {
    fn add_assign(&mut self, rhs: RingElem) {
        debug_assert_eq!(self.k, rhs.k);
        self.bits ^= rhs.bits;
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, rhs: RingElem) -> RingElem {
        debug_assert_eq!(self.k, rhs.k);
        let mut acc = 0u64;
        let mut b = rhs.bits;
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= self.bits << shift;
            }
            b >>= 1;
            shift += 1;
        }
        RingElem::new(self.k, acc)
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "u".to_string(),
                _ => format!("u^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}
