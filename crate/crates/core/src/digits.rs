//! Signed binary expansions `x = x_0/2 + x_1/4 + x_2/8 + ...` with `x_n ∈ {-1, +1}`.
//!
//! Only a finite prefix `x_0 … x_M` is ever stored. The prefix pins `x` to a
//! dyadic cell of width `2^{-M}` centred at [`DigitExpansion::midpoint`].
//!
//! Dyadic rationals admit two expansions. [`DigitExpansion::expand`] resolves the
//! tie by emitting `+1` whenever the running remainder is `>= 0`, which makes the
//! map total and deterministic. Integrals never see the difference since the
//! affected set has measure zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// The walk weight `λ`, real with `|λ| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    lambda: f64,
}

impl Params {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && libm::fabs(lambda) < 1.0 {
            Ok(Self { lambda })
        } else {
            Err(Error::LambdaOutOfRange(lambda))
        }
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    #[inline]
    pub fn abs_lambda(&self) -> f64 {
        libm::fabs(self.lambda)
    }

    /// `V ≡ 1` and `U ≡ 0` at this weight.
    #[inline]
    pub fn is_trivial(&self) -> bool {
        self.lambda == 0.0
    }
}

const WORD: usize = 64;

/// A finite prefix of ±1 digits, packed one bit per digit (set bit = `+1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitExpansion {
    words: Vec<u64>,
    len: usize,
}

impl DigitExpansion {
    /// Greedy expansion of `x` to `depth + 1` digits.
    ///
    /// With `r_0 = x`, each step emits `x_n = sign(r_n)` (ties to `+1`) and
    /// continues with `r_{n+1} = 2 r_n - x_n`, so that
    /// `x = Σ_{n≤M} x_n 2^{-(n+1)} + 2^{-(M+1)} r_{M+1}` with `|r_{M+1}| ≤ 1`.
    pub fn expand(x: f64, depth: usize) -> Result<Self> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::PointOutOfRange(x));
        }
        let mut out = Self::zeroed(depth + 1);
        let mut r = x;
        for n in 0..=depth {
            let d = if r >= 0.0 { 1.0 } else { -1.0 };
            if d > 0.0 {
                out.set_plus(n);
            }
            r = 2.0 * r - d;
        }
        Ok(out)
    }

    /// Builds an expansion from explicit signs.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::EmptyExpansion);
        }
        let mut out = Self::zeroed(signs.len());
        for (n, &s) in signs.iter().enumerate() {
            match s {
                1 => out.set_plus(n),
                -1 => {}
                other => return Err(Error::InvalidDigit(other as i64)),
            }
        }
        Ok(out)
    }

    fn zeroed(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    #[inline]
    fn set_plus(&mut self, n: usize) {
        self.words[n / WORD] |= 1u64 << (n % WORD);
    }

    /// Index `M` of the last stored digit.
    #[inline]
    pub fn depth(&self) -> usize {
        self.len - 1
    }

    /// Number of stored digits, `M + 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Digit `x_n` as `-1` or `+1`.
    #[inline]
    pub fn digit(&self, n: usize) -> i8 {
        assert!(n < self.len, "digit index {n} out of range for length {}", self.len);
        if self.words[n / WORD] >> (n % WORD) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = i8> + '_ {
        (0..self.len).map(move |n| self.digit(n))
    }

    pub fn to_signs(&self) -> Vec<i8> {
        self.iter().collect()
    }

    /// Centre of the dyadic cell: `Σ_{n≤M} x_n 2^{-(n+1)}`.
    pub fn midpoint(&self) -> f64 {
        let mut acc = 0.0;
        let mut w = 0.5;
        for d in self.iter() {
            acc += f64::from(d) * w;
            w *= 0.5;
        }
        acc
    }

    /// Half the width of the cell, `2^{-(M+1)}`.
    pub fn half_width(&self) -> f64 {
        libm::ldexp(1.0, -(self.len as i32))
    }

    /// Closed cell `[lo, hi]` of all points sharing this prefix.
    pub fn interval(&self) -> (f64, f64) {
        let c = self.midpoint();
        let h = self.half_width();
        (c - h, c + h)
    }

    /// Left shift `(x_0, …, x_M) ↦ (x_1, …, x_M)`; on values, `x ↦ 2x ∓ 1`.
    pub fn shift(&self) -> Result<Self> {
        if self.len < 2 {
            return Err(Error::ShiftAtDepthZero);
        }
        let mut out = Self::zeroed(self.len - 1);
        for n in 1..self.len {
            if self.digit(n) > 0 {
                out.set_plus(n - 1);
            }
        }
        Ok(out)
    }

    /// Prepends `sign` as the new leading digit.
    pub fn prepend(&self, sign: i8) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidDigit(sign as i64));
        }
        let mut out = Self::zeroed(self.len + 1);
        if sign > 0 {
            out.set_plus(0);
        }
        for n in 0..self.len {
            if self.digit(n) > 0 {
                out.set_plus(n + 1);
            }
        }
        Ok(out)
    }

    /// Exchanges `x_{2n} ↔ x_{2n+1}` for every complete pair. A trailing
    /// unpaired digit stays put.
    pub fn swap_pairs(&self) -> Self {
        let mut out = Self::zeroed(self.len);
        for n in 0..self.len {
            let src = if n % 2 == 0 {
                if n + 1 < self.len {
                    n + 1
                } else {
                    n
                }
            } else {
                n - 1
            };
            if self.digit(src) > 0 {
                out.set_plus(n);
            }
        }
        out
    }

    /// Flips every digit; represents `-x`.
    pub fn negate(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.len % WORD;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Self {
            words,
            len: self.len,
        }
    }
}
