//! Root extraction through companion-matrix eigenvalues, plus the numeric
//! real-rootedness and common-interlacing checks built on it.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex;

use super::{Polynomial, COEFF_TOL};
use crate::error::{Error, Result};
use crate::scalar::{cabs, Scalar};

/// A root whose imaginary part exceeds the caller's tolerance is still taken as
/// real when its real part is an exact root of a coefficient perturbation this
/// many unit roundoffs in size. Multiple real roots split into complex clusters
/// of radius `u^(1/multiplicity)`, far beyond any fixed imaginary-part tolerance.
const ROUNDOFF_MULTIPLE: f64 = 1e4;

const SCHUR_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet<T: Scalar> {
    /// All roots with multiplicity; the length equals the degree.
    pub roots: Vec<Complex<T>>,
    /// Largest real part among roots classified as real.
    pub max_real_root: Option<T>,
    /// Per-root real classification, parallel to `roots`.
    pub is_real: Vec<bool>,
}

impl<T: Scalar> RootSet<T> {
    pub fn all_real(&self) -> bool {
        self.is_real.iter().all(|&r| r)
    }

    /// Real parts of the roots, ascending.
    pub fn sorted_real_parts(&self) -> Vec<T> {
        let mut v: Vec<T> = self.roots.iter().map(|z| z.re).collect();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
        v
    }
}

fn require_real<T: Scalar>(p: &Polynomial<T>) -> Result<Vec<T>> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if !p.is_real(T::lit(COEFF_TOL)) {
        return Err(Error::InvalidPolynomial("coefficients are not real".into()));
    }
    Ok(p.real_parts())
}

/// Roots of a real-coefficient polynomial, classified as real when
/// `|Im z| <= tol (1 + |Re z|)` or when `Re z` is a root up to roundoff.
pub fn roots<T: Scalar>(p: &Polynomial<T>, tol: T) -> Result<RootSet<T>> {
    let coeffs = require_real(p)?;
    let raw = companion_roots(&coeffs)?;
    let scale = coeffs.iter().fold(T::zero(), |a, &c| a.max(c.abs()));
    let backward_tol = T::lit(ROUNDOFF_MULTIPLE) * T::unit_roundoff();
    let is_real: Vec<bool> = raw
        .iter()
        .map(|z| {
            if z.im.abs() <= tol * (T::one() + z.re.abs()) {
                return true;
            }
            let x = z.re;
            let value = coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c).abs();
            let powers = (0..coeffs.len())
                .fold((T::zero(), T::one()), |(sum, pow), _| (sum + pow, pow * x.abs()))
                .0;
            value <= backward_tol * scale * powers
        })
        .collect();
    let max_real_root = raw
        .iter()
        .zip(&is_real)
        .filter(|(_, &r)| r)
        .map(|(z, _)| z.re)
        .fold(None, |acc: Option<T>, x| Some(acc.map_or(x, |a| a.max(x))));
    Ok(RootSet { roots: raw, max_real_root, is_real })
}

/// Largest real root; `Err(NoRealRoot)` when every root is genuinely complex.
pub fn max_real_root<T: Scalar>(p: &Polynomial<T>, tol: T) -> Result<T> {
    roots(p, tol)?.max_real_root.ok_or(Error::NoRealRoot)
}

pub fn is_real_rooted<T: Scalar>(p: &Polynomial<T>, tol: T) -> Result<bool> {
    Ok(roots(p, tol)?.all_real())
}

fn companion_roots<T: Scalar>(coeffs: &[T]) -> Result<Vec<Complex<T>>> {
    let zero_roots = coeffs.iter().take_while(|&&c| c == T::zero()).count();
    let coeffs = &coeffs[zero_roots..];
    let n = coeffs.len() - 1;
    let mut out = vec![Complex::new(T::zero(), T::zero()); zero_roots];
    if n == 0 {
        return Ok(out);
    }
    let lead = coeffs[n];
    if n == 1 {
        out.push(Complex::new(-coeffs[0] / lead, T::zero()));
        return Ok(out);
    }
    let mut c = DMatrix::<T>::zeros(n, n);
    for i in 1..n {
        c[(i, i - 1)] = T::one();
    }
    for i in 0..n {
        c[(i, n - 1)] = -coeffs[i] / lead;
    }
    balance(&mut c);
    match Schur::try_new(c, T::default_epsilon(), SCHUR_MAX_ITER) {
        Some(schur) => out.extend(schur.complex_eigenvalues().iter().copied()),
        // QR can stall on exactly repeated roots; simultaneous iteration does not.
        None => out.extend(aberth(coeffs)?),
    }
    Ok(out)
}

const ABERTH_MAX_ITER: usize = 1000;

fn aberth<T: Scalar>(coeffs: &[T]) -> Result<Vec<Complex<T>>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex<T>> = coeffs.iter().map(|&c| Complex::new(c / lead, T::zero())).collect();
    let deriv: Vec<Complex<T>> =
        (1..=n).map(|i| monic[i] * Complex::new(T::lit(i as f64), T::zero())).collect();
    let horner = |cs: &[Complex<T>], z: Complex<T>| cs.iter().rev().fold(Complex::new(T::zero(), T::zero()), |a, &c| a * z + c);
    // Fujiwara bound on root moduli
    let radius = (0..n)
        .map(|i| cabs(monic[i]).powf(T::one() / T::lit((n - i) as f64)))
        .fold(T::zero(), |a, b| a.max(b))
        * T::lit(2.0);
    let radius = if radius > T::zero() { radius } else { T::one() };
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|j| {
            let angle = T::two_pi() * T::lit(j as f64 + 0.25) / T::lit(n as f64);
            Complex::new(radius * angle.cos(), radius * angle.sin())
        })
        .collect();
    let tiny = T::lit(16.0) * T::unit_roundoff();
    for _ in 0..ABERTH_MAX_ITER {
        let mut moved = false;
        for k in 0..n {
            let value = horner(&monic, z[k]);
            if value == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            let ratio = value / horner(&deriv, z[k]);
            let repulsion = (0..n)
                .filter(|&j| j != k)
                .fold(Complex::new(T::zero(), T::zero()), |a, j| a + (z[k] - z[j]).inv());
            let step = ratio / (Complex::new(T::one(), T::zero()) - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            z[k] -= step;
            if cabs(step) > tiny * (T::one() + cabs(z[k])) {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    if z.iter().any(|w| !(w.re.is_finite() && w.im.is_finite())) {
        return Err(Error::NoConvergence);
    }
    Ok(z)
}

/// Parlett–Reinsch diagonal similarity scaling by powers of two.
fn balance<T: Scalar>(m: &mut DMatrix<T>) {
    let n = m.nrows();
    let two = T::lit(2.0);
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut col = T::zero();
            let mut row = T::zero();
            for j in (0..n).filter(|&j| j != i) {
                col += m[(j, i)].abs();
                row += m[(i, j)].abs();
            }
            if col == T::zero() || row == T::zero() {
                continue;
            }
            let total = col + row;
            let mut f = T::one();
            let mut g = row / two;
            while col < g {
                f *= two;
                col *= two * two;
            }
            g = row * two;
            while col > g {
                f /= two;
                col /= two * two;
            }
            if (col + row) / f < T::lit(0.95) * total {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Weights on a uniform lattice over the simplex (resolution `samples − 1`, which
/// includes every vertex and `samples` points on each pairwise edge), plus the
/// uniform weight vector.
pub fn simplex_weight_grid<T: Scalar>(count: usize, samples: usize) -> Vec<Vec<T>> {
    if count == 0 {
        return Vec::new();
    }
    let resolution = samples.max(2) - 1;
    let mut grid = Vec::new();
    let mut current = vec![0usize; count];
    compositions(resolution, 0, &mut current, &mut |parts| {
        grid.push(parts.iter().map(|&p| T::lit(p as f64 / resolution as f64)).collect());
    });
    grid.push(vec![T::one() / T::lit(count as f64); count]);
    grid
}

fn compositions(remaining: usize, idx: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if idx + 1 == cur.len() {
        cur[idx] = remaining;
        f(cur);
        return;
    }
    for take in (0..=remaining).rev() {
        cur[idx] = take;
        compositions(remaining - take, idx + 1, cur, f);
    }
}

fn check_family<T: Scalar>(ps: &[Polynomial<T>]) -> Result<()> {
    let Some(first) = ps.first() else {
        return Ok(());
    };
    let d = first.degree().unwrap_or(0);
    for p in ps {
        let e = p.degree().unwrap_or(0);
        if e != d {
            return Err(Error::DegreeMismatch(d, e));
        }
        if !p.is_real(T::lit(COEFF_TOL)) || p.leading().re <= T::zero() {
            return Err(Error::InvalidPolynomial(
                "interlacing checks need real coefficients and a positive leading coefficient".into(),
            ));
        }
    }
    Ok(())
}

/// Sampled test of the convex-combination criterion for a common interlacing:
/// true iff every weighting in [`simplex_weight_grid`] yields a real-rooted polynomial.
///
/// A sufficient numeric proxy only: it can falsify but never prove the property.
pub fn check_common_interlacing<T: Scalar>(ps: &[Polynomial<T>], samples: usize, tol: T) -> Result<bool> {
    check_family(ps)?;
    for weights in simplex_weight_grid::<T>(ps.len(), samples) {
        let combo = Polynomial::weighted_sum(ps, &weights);
        if !is_real_rooted(&combo, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Direct criterion on sorted roots: real-rooted polynomials of equal degree share
/// an interlacing iff the `i`-th root of each is at most the `(i+1)`-th root of every other.
pub fn common_interlacing_by_roots<T: Scalar>(ps: &[Polynomial<T>], tol: T) -> Result<bool> {
    check_family(ps)?;
    let mut sorted = Vec::with_capacity(ps.len());
    for p in ps {
        let r = roots(p, tol)?;
        if !r.all_real() {
            return Ok(false);
        }
        sorted.push(r.sorted_real_parts());
    }
    let Some(n) = sorted.first().map(Vec::len) else {
        return Ok(true);
    };
    for i in 0..n.saturating_sub(1) {
        let lower = sorted.iter().map(|r| r[i]).fold(T::min_value().unwrap(), |a, b| a.max(b));
        let upper = sorted.iter().map(|r| r[i + 1]).fold(T::max_value().unwrap(), |a, b| a.min(b));
        let slack = tol.sqrt() * (T::one() + lower.abs().max(upper.abs()));
        if lower > upper + slack {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Polynomial<f64> {
        Polynomial::from_real(c)
    }

    #[test]
    fn x2_minus_1() {
        assert!((max_real_root(&p(&[-1.0, 0.0, 1.0]), 1e-9).unwrap() - 1.0).abs() < 1e-12);
        assert!(is_real_rooted(&p(&[-1.0, 0.0, 1.0]), 1e-9).unwrap());
    }

    #[test]
    fn x2_plus_1() {
        assert!(matches!(max_real_root(&p(&[1.0, 0.0, 1.0]), 1e-9), Err(Error::NoRealRoot)));
        assert!(!is_real_rooted(&p(&[1.0, 0.0, 1.0]), 1e-9).unwrap());
    }

    #[test]
    fn constant_rejected() {
        assert!(matches!(max_real_root(&p(&[3.0]), 1e-9), Err(Error::ConstantPolynomial)));
        assert!(matches!(roots(&Polynomial::<f64>::zero(), 1e-9), Err(Error::ConstantPolynomial)));
    }

    #[test]
    fn complex_coefficients_rejected() {
        let q = Polynomial::new(vec![Complex::new(0.0, 1.0), Complex::new(1.0, 0.0)]);
        assert!(matches!(roots(&q, 1e-9), Err(Error::InvalidPolynomial(_))));
    }

    #[test]
    fn k33_matching_root() {
        // y^3 - 9y^2 + 18y - 6 with y = x^2; the largest y solved by bisection
        let f = |y: f64| y * y * y - 9.0 * y * y + 18.0 * y - 6.0;
        let (mut lo, mut hi) = (6.0, 7.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let expected = lo.sqrt();
        let got = max_real_root(&p(&[-6.0, 0.0, 18.0, 0.0, -9.0, 0.0, 1.0]), 1e-9).unwrap();
        assert!((got - expected).abs() < 1e-10);
        assert!((got - 2.50798).abs() < 1e-5);
        assert!(got <= 2.0 * 2f64.sqrt());
    }

    #[test]
    fn multiple_roots_count_as_real() {
        // x^4 (x^2 - 9) and (x - 1)^3 (x + 2)
        let a = p(&[1e-16, 0.0, 1e-15, 0.0, -9.0, 0.0, 1.0]);
        assert!(is_real_rooted(&a, 1e-9).unwrap());
        assert!((max_real_root(&a, 1e-9).unwrap() - 3.0).abs() < 1e-12);
        let b = &(&(&p(&[-1.0, 1.0]) * &p(&[-1.0, 1.0])) * &p(&[-1.0, 1.0])) * &p(&[2.0, 1.0]);
        assert!(is_real_rooted(&b, 1e-9).unwrap());
        assert!((max_real_root(&b, 1e-9).unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn small_genuine_imaginary_part_detected() {
        // (x - 1)^2 + 1e-6 has roots 1 ± 1e-3 i
        assert!(!is_real_rooted(&p(&[1.0 + 1e-6, -2.0, 1.0]), 1e-9).unwrap());
    }

    #[test]
    fn root_count_matches_degree() {
        let q = p(&[0.0, 0.0, 2.0, -3.0, 1.0]);
        let r = roots(&q, 1e-9).unwrap();
        assert_eq!(r.roots.len(), 4);
        assert_eq!(r.sorted_real_parts().len(), 4);
    }

    #[test]
    fn high_degree_roots() {
        // Π (x - j) for j = 1..12
        let mut q = p(&[1.0]);
        for j in 1..=12 {
            q = &q * &p(&[-(j as f64), 1.0]);
        }
        let r = roots(&q, 1e-6).unwrap();
        assert!(r.all_real());
        assert!((r.max_real_root.unwrap() - 12.0).abs() < 1e-6);
    }

    #[test]
    fn interlacing_examples() {
        let fam = [p(&[-1.0, 0.0, 1.0]), p(&[-4.0, 0.0, 1.0])];
        assert!(check_common_interlacing(&fam, 21, 1e-9).unwrap());
        assert!(common_interlacing_by_roots(&fam, 1e-9).unwrap());
        let bad = [p(&[1.0, 0.0, 1.0]), p(&[1.0, 0.0, 1.0])];
        assert!(!check_common_interlacing(&bad, 21, 1e-9).unwrap());
        assert!(!common_interlacing_by_roots(&bad, 1e-9).unwrap());
        // (x-1)(x-2) and (x-3)(x-4): no common interlacing; the midpoint combination
        // x^2 - 5x + 7 has complex roots
        let apart = [p(&[2.0, -3.0, 1.0]), p(&[12.0, -7.0, 1.0])];
        assert!(!check_common_interlacing(&apart, 21, 1e-9).unwrap());
        assert!(!common_interlacing_by_roots(&apart, 1e-9).unwrap());
    }

    #[test]
    fn interlacing_preconditions() {
        let mixed = [p(&[-1.0, 0.0, 1.0]), p(&[-1.0, 1.0])];
        assert!(matches!(check_common_interlacing(&mixed, 21, 1e-9), Err(Error::DegreeMismatch(2, 1))));
        let negative = [p(&[1.0, 0.0, -1.0])];
        assert!(check_common_interlacing(&negative, 21, 1e-9).is_err());
    }

    #[test]
    fn weight_grid_shape() {
        let g2 = simplex_weight_grid::<f64>(2, 21);
        assert_eq!(g2.len(), 22);
        assert_eq!(g2[0], vec![1.0, 0.0]);
        assert_eq!(g2[20], vec![0.0, 1.0]);
        let g3 = simplex_weight_grid::<f64>(3, 21);
        assert_eq!(g3.len(), 231 + 1);
        for w in &g3 {
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn f32_roots() {
        let q = Polynomial::<f32>::from_real(&[-6.0, 0.0, 18.0, 0.0, -9.0, 0.0, 1.0]);
        let r = max_real_root(&q, 1e-4).unwrap();
        assert!((r - 2.50798).abs() < 1e-3);
    }

    #[test]
    fn triple_roots() {
        // (x^2 - 3)^3 stalls the QR iteration
        let q = p(&[-27.0, 0.0, 27.0, 0.0, -9.0, 0.0, 1.0]);
        let r = roots(&q, 1e-6).unwrap();
        assert_eq!(r.roots.len(), 6);
        assert!(r.all_real());
        assert!((r.max_real_root.unwrap() - 3f64.sqrt()).abs() < 1e-4);
        let z = aberth::<f64>(&[-27.0, 0.0, 27.0, 0.0, -9.0, 0.0, 1.0]).unwrap();
        assert!(z.iter().all(|w| (w.re.abs() - 3f64.sqrt()).abs() < 1e-4));
    }
}
