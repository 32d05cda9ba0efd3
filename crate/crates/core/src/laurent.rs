//! Scalar Laurent polynomials with complex coefficients.
//!
//! A [`LaurentPoly`] stores a dense run of coefficients starting at an
//! arbitrary (possibly negative) power of `z`:
//!
//! ```text
//! P(z) = Σ_{k=0}^{len-1} coeffs[k] · z^(lowest + k)
//! ```
//!
//! Exact zeros at either end are stripped on construction. Coefficients that
//! are merely small are never dropped implicitly; call [`LaurentPoly::trim`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier;

/// Tolerance on `| |z| - 1 |` accepted by [`LaurentPoly::evaluate`].
pub const UNIT_CIRCLE_TOL: f64 = 1e-12;

/// Default relative threshold for [`LaurentPoly::trim`].
pub const TRIM_REL: f64 = 1e-14;

/// Spans at or above this length are multiplied through the FFT.
pub const FFT_MUL_THRESHOLD: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    lowest: i64,
    coeffs: Vec<Complex64>,
}

impl Default for LaurentPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl LaurentPoly {
    /// Builds `Σ coeffs[k] z^(lowest+k)`, stripping exact zeros at both ends.
    pub fn new(lowest: i64, coeffs: Vec<Complex64>) -> Self {
        let first = coeffs.iter().position(|c| *c != ZERO);
        let Some(first) = first else {
            return Self::zero();
        };
        let last = coeffs.iter().rposition(|c| *c != ZERO).unwrap();
        let coeffs = if first == 0 && last + 1 == coeffs.len() {
            coeffs
        } else {
            coeffs[first..=last].to_vec()
        };
        Self {
            lowest: lowest + first as i64,
            coeffs,
        }
    }

    pub fn from_real(lowest: i64, coeffs: &[f64]) -> Self {
        Self::new(
            lowest,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn zero() -> Self {
        Self {
            lowest: 0,
            coeffs: vec![ZERO],
        }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(0, vec![c])
    }

    /// `c · z^power`.
    pub fn monomial(c: Complex64, power: i64) -> Self {
        Self::new(power, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn highest(&self) -> i64 {
        self.lowest + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Number of stored coefficients.
    pub fn span(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `z^power` (zero outside the stored range).
    pub fn coeff(&self, power: i64) -> Complex64 {
        let idx = power - self.lowest;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            ZERO
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient modulus among powers `< 0`.
    pub fn max_abs_negative(&self) -> f64 {
        (self.lowest..0).map(|k| self.coeff(k).norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient modulus among powers `> 0`.
    pub fn max_abs_positive(&self) -> f64 {
        (1..=self.highest())
            .map(|k| self.coeff(k).norm())
            .fold(0.0, f64::max)
    }

    /// No stored negative powers.
    pub fn is_causal(&self) -> bool {
        self.is_zero() || self.lowest >= 0
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.lowest, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Multiplies by `z^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            lowest: self.lowest + shift,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Coefficient-wise sum over the union of the two power ranges.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        if other.is_zero() {
            return self.combine_with_zero(&op, true);
        }
        if self.is_zero() {
            return other.combine_with_zero(&op, false);
        }
        let lo = self.lowest.min(other.lowest);
        let hi = self.highest().max(other.highest());
        let coeffs = (lo..=hi)
            .map(|k| op(self.coeff(k), other.coeff(k)))
            .collect();
        Self::new(lo, coeffs)
    }

    fn combine_with_zero(
        &self,
        op: &impl Fn(Complex64, Complex64) -> Complex64,
        self_first: bool,
    ) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| if self_first { op(c, ZERO) } else { op(ZERO, c) })
            .collect();
        Self::new(self.lowest, coeffs)
    }

    /// Product; the power range is the sum of the two ranges.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let coeffs = if self.span().min(other.span()) >= FFT_MUL_THRESHOLD {
            fourier::convolve(&self.coeffs, &other.coeffs)
        } else {
            direct_convolve(&self.coeffs, &other.coeffs)
        };
        Self::new(self.lowest + other.lowest, coeffs)
    }

    /// Product computed by direct convolution regardless of size.
    pub fn mul_direct(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(
            self.lowest + other.lowest,
            direct_convolve(&self.coeffs, &other.coeffs),
        )
    }

    /// Product computed through the FFT regardless of size.
    pub fn mul_fft(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(
            self.lowest + other.lowest,
            fourier::convolve(&self.coeffs, &other.coeffs),
        )
    }

    /// `P̃(z) = Σ conj(p_k) z^(-k)`; equals `conj(P(z))` on the unit circle.
    pub fn tilde(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        Self::new(-self.highest(), coeffs)
    }

    /// Evaluates at a point of the unit circle.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if (z.norm() - 1.0).abs() > UNIT_CIRCLE_TOL {
            return Err(Error::Domain(format!("{z}")));
        }
        Ok(self.eval(z))
    }

    /// Evaluates anywhere except `z = 0` when negative powers are present.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        if self.lowest == 0 {
            acc
        } else {
            acc * z.powi(self.lowest as i32)
        }
    }

    /// Zeroes coefficients with modulus below `rel × max_abs` and strips the
    /// resulting zero ends.
    pub fn trim(&self, rel: f64) -> Self {
        let cut = rel * self.max_abs();
        Self::new(
            self.lowest,
            self.coeffs
                .iter()
                .map(|&c| if c.norm() < cut { ZERO } else { c })
                .collect(),
        )
    }

    /// Keeps only the powers in `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        if hi < lo {
            return Self::zero();
        }
        let lo = lo.max(self.lowest);
        let hi = hi.min(self.highest());
        if hi < lo {
            return Self::zero();
        }
        Self::new(lo, (lo..=hi).map(|k| self.coeff(k)).collect())
    }

    /// Dense coefficient vector over `[lo, hi]`, zero-padded.
    pub fn dense(&self, lo: i64, hi: i64) -> Vec<Complex64> {
        (lo..=hi).map(|k| self.coeff(k)).collect()
    }

    /// Power series of `self / den` up to `z^degree`, for causal operands with
    /// `den(0) ≠ 0`. Converges on the circle when `den` has no roots in the
    /// closed unit disk.
    pub fn series_div(&self, den: &Self, degree: i64) -> Result<Self> {
        if !self.is_causal() || !den.is_causal() {
            return Err(Error::InvalidArgument(
                "series division needs causal operands".into(),
            ));
        }
        let d0 = den.coeff(0);
        if d0 == ZERO {
            return Err(Error::InvalidArgument(
                "series division by a polynomial vanishing at 0".into(),
            ));
        }
        let dh = den.highest();
        let mut out: Vec<Complex64> = Vec::with_capacity(degree.max(0) as usize + 1);
        for k in 0..=degree {
            let mut acc = self.coeff(k);
            for l in 1..=k.min(dh) {
                acc -= den.coeff(l) * out[(k - l) as usize];
            }
            out.push(acc / d0);
        }
        Ok(Self::new(0, out))
    }

    /// Plain Parseval sum `Σ |c_k|²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest coefficient difference against `other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }
}

fn direct_convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<'a> $tr<&'a LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                LaurentPoly::$method(self, rhs)
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                LaurentPoly::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale_real(-1.0)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale_real(-1.0)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let power = self.lowest + i as i64;
            let c_str = if c.im == 0.0 {
                format!("{}", c.re)
            } else {
                format!("({})", c)
            };
            match power {
                0 => write!(f, "{c_str}")?,
                1 => write!(f, "{c_str}·z")?,
                _ => write!(f, "{c_str}·z^{power}")?,
            }
        }
        Ok(())
    }
}
