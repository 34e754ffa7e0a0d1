use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A Gaussian integer `re + i·im`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    /// `i^k`.
    pub fn unit(k: u64) -> Self {
        match k & 3 {
            0 => GaussianInt::new(1, 0),
            1 => GaussianInt::new(0, 1),
            2 => GaussianInt::new(-1, 0),
            _ => GaussianInt::new(0, -1),
        }
    }

    /// `Σ counts[q] · i^q` for a four-bin phase histogram.
    pub fn from_quarter_counts(counts: &[u64]) -> Self {
        let c = |q: usize| counts.get(q).copied().unwrap_or(0) as i64;
        GaussianInt::new(c(0) - c(2), c(1) - c(3))
    }

    pub fn conj(self) -> Self {
        GaussianInt::new(self.re, -self.im)
    }

    /// `self · i^k`.
    pub fn rotate(self, k: u64) -> Self {
        match k & 3 {
            0 => self,
            1 => GaussianInt::new(-self.im, self.re),
            2 => GaussianInt::new(-self.re, -self.im),
            _ => GaussianInt::new(self.im, -self.re),
        }
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(self) -> u128 {
        let re = self.re.unsigned_abs() as u128;
        let im = self.im.unsigned_abs() as u128;
        re * re + im * im
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: Self) -> Self {
        GaussianInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for GaussianInt {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: Self) -> Self {
        GaussianInt::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> Self {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: Self) -> Self {
        GaussianInt::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}
