//! Floating-point scalar abstraction shared by every numeric routine.
//!
//! All spectral and polynomial code is written against [`Scalar`] so the same
//! pipeline runs in `f64` (the default, see the aliases in the crate root) or
//! in `f32` for quick low-precision sweeps.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar usable by the eigensolvers and polynomial routines: `f32` or `f64`.
pub trait Scalar:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal, panicking only for non-representable values.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Unit roundoff of the type.
    fn unit_roundoff() -> Self {
        Self::default_epsilon()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Modulus of a complex number without requiring `num_traits::Float`.
pub(crate) fn cabs<T: Scalar>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

pub(crate) fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn cone<T: Scalar>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `exp(2πi · j / k)`, snapped to exact values on quarter turns so that
/// ±1 and ±i entries compare exactly. Powers `j` and `k − j` are exact conjugates.
pub fn root_of_unity<T: Scalar>(k: u32, j: u64) -> Complex<T> {
    assert!(k > 0, "root of unity order must be positive");
    let k64 = u64::from(k);
    let j = j % k64;
    if (4 * j).is_multiple_of(k64) {
        let quarter = 4 * j / k64;
        let (re, im) = match quarter {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        return Complex::new(T::lit(re), T::lit(im));
    }
    if 2 * j > k64 {
        return root_of_unity::<T>(k, k64 - j).conj();
    }
    let angle = T::two_pi() * T::lit(j as f64) / T::lit(k as f64);
    Complex::new(angle.cos(), angle.sin())
}
