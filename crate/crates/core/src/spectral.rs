//! Eigenvalues of Hermitian matrices, new-eigenvalue spectra of shift lifts,
//! and Ramanujan certification.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{validate, Graph};
use crate::lift::{adjacency_matrix, expand_lift, quotient_matrix_with_generator, ShiftAssignment};
use crate::scalar::{cabs, Scalar};

/// Default certification slack.
pub const DEFAULT_EPSILON: f64 = 1e-8;

/// Entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    Matrix,
    Adjacency,
    FullLift,
    Quotient(u32),
    NewEigenvalues,
}

/// Eigenvalues sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T: Scalar> {
    pub eigenvalues: Vec<T>,
    pub source: SpectrumSource,
}

impl<T: Scalar> Spectrum<T> {
    fn sorted(mut eigenvalues: Vec<T>, source: SpectrumSource) -> Self {
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        Self { eigenvalues, source }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_abs(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |a, &x| a.max(x.abs()))
    }

    /// Largest entrywise difference against another spectrum of the same length.
    pub fn max_abs_diff(&self, other: &Self) -> Option<T> {
        (self.len() == other.len()).then(|| {
            self.eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .fold(T::zero(), |a, (&x, &y)| a.max((x - y).abs()))
        })
    }

    pub fn to_json(&self) -> String {
        let values: Vec<f64> = self.eigenvalues.iter().map(|x| x.to_f64_lossy()).collect();
        serde_json::to_string(&values).expect("spectrum serialization is infallible")
    }
}

fn check_hermitian<T: Scalar>(mat: &DMatrix<Complex<T>>) -> Result<()> {
    let (rows, cols) = mat.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let mut worst = T::zero();
    for i in 0..rows {
        for j in i..cols {
            worst = worst.max(cabs(mat[(i, j)] - mat[(j, i)].conj()));
        }
    }
    if worst > T::lit(HERMITIAN_TOL) {
        return Err(Error::NotHermitian { max_asymmetry: worst.to_f64_lossy() });
    }
    Ok(())
}

/// Sorted real eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<T: Scalar>(mat: &DMatrix<Complex<T>>) -> Result<Spectrum<T>> {
    check_hermitian(mat)?;
    let values = mat.symmetric_eigenvalues();
    Ok(Spectrum::sorted(values.iter().copied().collect(), SpectrumSource::Matrix))
}

/// Eigenpairs with their residuals `‖Mv − λv‖`, sorted by eigenvalue.
pub fn hermitian_eigen_residuals<T: Scalar>(mat: &DMatrix<Complex<T>>) -> Result<Vec<(T, T)>> {
    check_hermitian(mat)?;
    let eig = mat.clone().symmetric_eigen();
    let mut out: Vec<(T, T)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(c, &lambda)| {
            let v = eig.eigenvectors.column(c);
            let r = mat * v - v * Complex::new(lambda, T::zero());
            (lambda, r.norm())
        })
        .collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    Ok(out)
}

/// Spectrum of the quotient `A_s(ω^i)`.
pub fn quotient_spectrum<T: Scalar>(g: &Graph, s: &ShiftAssignment, i: u32) -> Result<Spectrum<T>> {
    quotient_spectrum_with_generator(g, s, i, 1)
}

fn quotient_spectrum_with_generator<T: Scalar>(
    g: &Graph,
    s: &ShiftAssignment,
    i: u32,
    generator: u32,
) -> Result<Spectrum<T>> {
    let q = quotient_matrix_with_generator::<T>(g, s, i, generator)?;
    let mut spec = hermitian_eigenvalues(&q.entries)?;
    spec.source = SpectrumSource::Quotient(i);
    Ok(spec)
}

pub fn adjacency_spectrum<T: Scalar>(g: &Graph) -> Result<Spectrum<T>> {
    let mut spec = hermitian_eigenvalues(&adjacency_matrix::<T>(g))?;
    spec.source = SpectrumSource::Adjacency;
    Ok(spec)
}

/// The `(k − 1)·n` eigenvalues the lift adds on top of the base spectrum:
/// the union of the spectra of `A_s(ω^i)` for `i = 1..k`.
pub fn new_eigenvalues<T: Scalar>(g: &Graph, s: &ShiftAssignment) -> Result<Spectrum<T>> {
    let mut all = Vec::with_capacity(g.n() * (s.k() as usize - 1));
    for i in 1..s.k() {
        all.extend(quotient_spectrum::<T>(g, s, i)?.eigenvalues);
    }
    Ok(Spectrum::sorted(all, SpectrumSource::NewEigenvalues))
}

/// Compares the spectrum of the explicit lift with the union of all `k` quotient
/// spectra, entrywise after sorting.
pub fn verify_spectrum_union<T: Scalar>(g: &Graph, s: &ShiftAssignment, tol: T) -> Result<bool> {
    let lift = expand_lift(g, s)?;
    let direct = adjacency_spectrum::<T>(&lift)?;
    let mut union = Vec::with_capacity(lift.n());
    for i in 0..s.k() {
        union.extend(quotient_spectrum::<T>(g, s, i)?.eigenvalues);
    }
    let union = Spectrum::sorted(union, SpectrumSource::FullLift);
    Ok(direct.max_abs_diff(&union).is_some_and(|d| d <= tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bound(value: f64, bound: f64, epsilon: f64) -> Self {
        if value <= bound + epsilon {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// `2√(d − 1)`.
pub fn ramanujan_bound(d: usize) -> f64 {
    2.0 * ((d as f64) - 1.0).max(0.0).sqrt()
}

/// Ramanujan status of a base graph: both trivial eigenvalues `±d` removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseVerdict {
    pub degree: usize,
    pub lambda_nontrivial_max: f64,
    pub bound: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
    pub base_hash: String,
}

/// Requires a connected, regular, bipartite graph so that exactly one `+d` and one
/// `−d` are trivial.
pub fn ramanujan_verdict<T: Scalar>(g: &Graph, epsilon: f64) -> Result<BaseVerdict> {
    let report = validate(g);
    let d = report.degree.ok_or(Error::NotRegular)?;
    if !report.is_bipartite {
        return Err(Error::NotBipartite);
    }
    if !report.is_connected {
        return Err(Error::Disconnected);
    }
    let spec = adjacency_spectrum::<T>(g)?;
    let values = &spec.eigenvalues;
    let nontrivial = if values.len() >= 2 { &values[1..values.len() - 1] } else { &[][..] };
    let lambda = nontrivial.iter().fold(0.0f64, |a, x| a.max(x.to_f64_lossy().abs()));
    let bound = ramanujan_bound(d);
    Ok(BaseVerdict {
        degree: d,
        lambda_nontrivial_max: lambda,
        bound,
        epsilon,
        verdict: Verdict::from_bound(lambda, bound, epsilon),
        base_hash: g.content_hash(),
    })
}

/// A checked lift. JSON keys: `k`, `shifts`, `lambda_new_max`, `bound`, `epsilon`,
/// `verdict`, `base_hash`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: u32,
    pub shifts: Vec<u32>,
    pub lambda_new_max: f64,
    pub bound: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
    pub base_hash: String,
}

impl Certificate {
    pub fn assignment(&self) -> Result<ShiftAssignment> {
        ShiftAssignment::new(self.k, self.shifts.clone())
    }

    pub fn passes(&self) -> bool {
        self.verdict.is_pass()
    }

    /// Same measurement judged under a different slack.
    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self {
            epsilon,
            verdict: Verdict::from_bound(self.lambda_new_max, self.bound, epsilon),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialization is infallible")
    }
}

/// Certifies many assignments against one base graph without re-validating it.
#[derive(Debug, Clone)]
pub struct LiftCertifier {
    graph: Graph,
    degree: usize,
    bound: f64,
    epsilon: f64,
    base_hash: String,
}

impl LiftCertifier {
    pub fn new(g: &Graph, epsilon: f64) -> Result<Self> {
        let report = validate(g);
        let degree = report.degree.ok_or(Error::NotRegular)?;
        if !report.is_bipartite {
            return Err(Error::NotBipartite);
        }
        Ok(Self {
            graph: g.clone(),
            degree,
            bound: ramanujan_bound(degree),
            epsilon,
            base_hash: g.content_hash(),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn certify<T: Scalar>(&self, s: &ShiftAssignment) -> Result<Certificate> {
        self.certify_with_generator::<T>(s, 1)
    }

    /// Only powers `1..=k/2` are solved: `A_s(ω^{k−i})` is the transpose of `A_s(ω^i)`.
    pub fn certify_with_generator<T: Scalar>(&self, s: &ShiftAssignment, generator: u32) -> Result<Certificate> {
        let mut lambda = 0.0f64;
        for i in 1..=s.k() / 2 {
            let spec = quotient_spectrum_with_generator::<T>(&self.graph, s, i, generator)?;
            lambda = lambda.max(spec.max_abs().to_f64_lossy());
        }
        Ok(Certificate {
            k: s.k(),
            shifts: s.shifts().to_vec(),
            lambda_new_max: lambda,
            bound: self.bound,
            epsilon: self.epsilon,
            verdict: Verdict::from_bound(lambda, self.bound, self.epsilon),
            base_hash: self.base_hash.clone(),
        })
    }
}

pub fn certify_lift<T: Scalar>(g: &Graph, s: &ShiftAssignment, epsilon: f64) -> Result<Certificate> {
    LiftCertifier::new(g, epsilon)?.certify::<T>(s)
}
