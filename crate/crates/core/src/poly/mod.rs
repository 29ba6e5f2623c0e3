//! Univariate polynomials: dense complex arithmetic, exact matching
//! polynomials, characteristic polynomials and root analysis.

mod charpoly;
mod matching;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{cabs, czero, Scalar};

pub use charpoly::char_poly;
pub use matching::{matching_counts, matching_polynomial, matching_polynomial_with_limit, DEFAULT_MATCHING_EDGE_LIMIT};
pub use roots::{
    check_common_interlacing, common_interlacing_by_roots, is_real_rooted, max_real_root, roots,
    simplex_weight_grid, RootSet,
};

/// Relative tolerance under which a coefficient's imaginary part counts as zero.
pub const COEFF_TOL: f64 = 1e-9;

/// Dense polynomial with complex coefficients in ascending degree order.
///
/// Trailing exact zeros are trimmed, so the last stored coefficient is nonzero;
/// the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T: Scalar> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == T::zero() && c.im == T::zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs.last().copied().unwrap_or_else(czero)
    }

    pub fn coeff(&self, power: usize) -> Complex<T> {
        self.coeffs.get(power).copied().unwrap_or_else(czero)
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.iter().map(|&c| cabs(c)).fold(T::zero(), |a, b| a.max(b))
    }

    /// Drops trailing coefficients whose modulus is at most `rel_tol` times the largest one.
    pub fn trimmed(&self, rel_tol: T) -> Self {
        let cutoff = rel_tol * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|&c| cabs(c) <= cutoff) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Every imaginary part is at most `rel_tol` times the largest coefficient modulus.
    pub fn is_real(&self, rel_tol: T) -> bool {
        let cutoff = rel_tol * self.max_abs_coeff();
        self.coeffs.iter().all(|c| c.im.abs() <= cutoff)
    }

    pub fn real_parts(&self) -> Vec<T> {
        self.coeffs.iter().map(|c| c.re).collect()
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(czero(), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// `Σ wᵢ pᵢ` over real weights.
    pub fn weighted_sum(polys: &[Self], weights: &[T]) -> Self {
        let len = polys.iter().map(|p| p.coeffs.len()).max().unwrap_or(0);
        let mut out = vec![czero(); len];
        for (p, &w) in polys.iter().zip(weights) {
            for (o, &c) in out.iter_mut().zip(&p.coeffs) {
                *o += c * w;
            }
        }
        Self::new(out)
    }

    /// Largest coefficientwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).map(|i| cabs(self.coeff(i) - other.coeff(i))).fold(T::zero(), |a, b| a.max(b))
    }

    pub fn cast<U: Scalar>(&self) -> Polynomial<U> {
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|c| Complex::new(U::lit(c.re.to_f64_lossy()), U::lit(c.im.to_f64_lossy())))
                .collect(),
        )
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![czero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Serialize for Polynomial<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> =
            self.coeffs.iter().map(|c| [c.re.to_f64_lossy(), c.im.to_f64_lossy()]).collect();
        pairs.serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Polynomial<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(Self::new(pairs.into_iter().map(|[re, im]| Complex::new(T::lit(re), T::lit(im))).collect()))
    }
}

/// Polynomial with exact integer coefficients, ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, power: usize) -> BigInt {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    /// Nearest floating-point image; coefficients beyond the scalar's range become infinite.
    pub fn to_poly<T: Scalar>(&self) -> Polynomial<T> {
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|c| Complex::new(T::lit(c.to_f64().unwrap_or(f64::INFINITY)), T::zero()))
                .collect(),
        )
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let one = mag == BigInt::from(1);
            match power {
                0 => write!(f, "{mag}")?,
                1 if one => write!(f, "x")?,
                1 => write!(f, "{mag}x")?,
                _ if one => write!(f, "x^{power}")?,
                _ => write!(f, "{mag}x^{power}")?,
            }
        }
        Ok(())
    }
}
