//! Shift k-lifts: shift assignments, their lexicographic enumeration, explicit
//! lifted graphs and the quotient matrices `A_s(ω^i)` whose spectra make up the
//! spectrum of the lift.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{czero, root_of_unity, Scalar};

/// Shift value per oriented edge `e_j = (u, v)`, `u < v`, in the graph's edge order.
///
/// The value on the reverse orientation `(v, u)` is `(k − s) mod k` and is never stored.
/// An optional per-edge mask restricts the values an edge may take.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftAssignment {
    k: u32,
    shifts: Vec<u32>,
    #[serde(skip)]
    mask: Option<Vec<Vec<u32>>>,
}

impl ShiftAssignment {
    pub fn new(k: u32, shifts: Vec<u32>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidAssignment(format!("lift order {k} is below 2")));
        }
        if let Some((j, s)) = shifts.iter().enumerate().find(|(_, &s)| s >= k) {
            return Err(Error::InvalidAssignment(format!("shift {s} on edge {j} is not below k = {k}")));
        }
        Ok(Self { k, shifts, mask: None })
    }

    pub fn zeros(k: u32, m: usize) -> Result<Self> {
        Self::new(k, vec![0; m])
    }

    /// Attaches allowed-value sets; every current shift must be allowed.
    pub fn with_mask(mut self, mask: Vec<Vec<u32>>) -> Result<Self> {
        if mask.len() != self.shifts.len() {
            return Err(Error::LengthMismatch { expected: self.shifts.len(), got: mask.len() });
        }
        for (j, (allowed, s)) in mask.iter().zip(&self.shifts).enumerate() {
            if allowed.iter().any(|&a| a >= self.k) {
                return Err(Error::InvalidAssignment(format!("mask for edge {j} exceeds k")));
            }
            if !allowed.contains(s) {
                return Err(Error::InvalidAssignment(format!("shift {s} on edge {j} not in its mask")));
            }
        }
        self.mask = Some(mask);
        Ok(self)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn shifts(&self) -> &[u32] {
        &self.shifts
    }

    pub fn mask(&self) -> Option<&[Vec<u32>]> {
        self.mask.as_deref()
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    /// Shift of edge `j` traversed from its larger to its smaller endpoint.
    pub fn reverse(&self, j: usize) -> u32 {
        (self.k - self.shifts[j]) % self.k
    }

    /// `(self + other) mod k` edgewise, as an order-`k` assignment. `other` may have a
    /// smaller order (a `{0,1}` signing added to `{0,2}` shifts, say).
    pub fn add(&self, other: &ShiftAssignment, k: u32) -> Result<ShiftAssignment> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        let shifts = self.shifts.iter().zip(&other.shifts).map(|(a, b)| (a + b) % k).collect();
        ShiftAssignment::new(k, shifts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("assignment serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            k: u32,
            shifts: Vec<u32>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        Self::new(raw.k, raw.shifts)
    }

    fn check_against(&self, g: &Graph) -> Result<()> {
        if self.len() != g.m() {
            return Err(Error::LengthMismatch { expected: g.m(), got: self.len() });
        }
        Ok(())
    }
}

/// Product of per-edge allowed sets, ordered lexicographically with the last edge
/// varying fastest. Indexable, so disjoint index ranges can be consumed in parallel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentSpace {
    k: u32,
    allowed: Vec<Vec<u32>>,
}

impl AssignmentSpace {
    /// All of `{0..k}` on every edge unless a mask is given.
    pub fn new(m: usize, k: u32, mask: Option<Vec<Vec<u32>>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidAssignment(format!("lift order {k} is below 2")));
        }
        let allowed = match mask {
            None => vec![(0..k).collect(); m],
            Some(mask) => {
                if mask.len() != m {
                    return Err(Error::LengthMismatch { expected: m, got: mask.len() });
                }
                mask.into_iter()
                    .map(|mut set| {
                        set.sort_unstable();
                        set.dedup();
                        if set.is_empty() || set.iter().any(|&v| v >= k) {
                            Err(Error::InvalidAssignment(format!("mask entries must be nonempty subsets of 0..{k}")))
                        } else {
                            Ok(set)
                        }
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(Self { k, allowed })
    }

    /// The same value set on every edge.
    pub fn uniform(m: usize, k: u32, values: &[u32]) -> Result<Self> {
        Self::new(m, k, Some(vec![values.to_vec(); m]))
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn edges(&self) -> usize {
        self.allowed.len()
    }

    pub fn allowed(&self) -> &[Vec<u32>] {
        &self.allowed
    }

    /// Number of assignments, `None` on `u128` overflow.
    pub fn size(&self) -> Option<u128> {
        self.allowed.iter().try_fold(1u128, |acc, set| acc.checked_mul(set.len() as u128))
    }

    /// Mixed-radix decoding of `index` (the first edge is the most significant digit).
    pub fn get(&self, mut index: u128) -> ShiftAssignment {
        let mut shifts = vec![0; self.allowed.len()];
        for (slot, set) in shifts.iter_mut().zip(&self.allowed).rev() {
            let radix = set.len() as u128;
            *slot = set[(index % radix) as usize];
            index /= radix;
        }
        ShiftAssignment { k: self.k, shifts, mask: Some(self.allowed.clone()) }
    }

    /// Inverse of [`AssignmentSpace::get`]; `None` if a shift is outside its allowed set.
    pub fn index_of(&self, s: &ShiftAssignment) -> Option<u128> {
        if s.len() != self.allowed.len() {
            return None;
        }
        self.allowed.iter().zip(s.shifts()).try_fold(0u128, |acc, (set, v)| {
            let digit = set.iter().position(|a| a == v)? as u128;
            Some(acc * set.len() as u128 + digit)
        })
    }

    pub fn iter(&self) -> AssignmentIter<'_> {
        self.range(0, self.size().unwrap_or(u128::MAX))
    }

    /// Assignments with indices in `start..end`, in order.
    pub fn range(&self, start: u128, end: u128) -> AssignmentIter<'_> {
        let end = end.min(self.size().unwrap_or(u128::MAX));
        let digits = if start < end { Some(self.digits_of(start)) } else { None };
        AssignmentIter { space: self, digits, remaining: end.saturating_sub(start) }
    }

    fn digits_of(&self, mut index: u128) -> Vec<usize> {
        let mut digits = vec![0; self.allowed.len()];
        for (d, set) in digits.iter_mut().zip(&self.allowed).rev() {
            *d = (index % set.len() as u128) as usize;
            index /= set.len() as u128;
        }
        digits
    }
}

/// Lazy odometer over an [`AssignmentSpace`].
pub struct AssignmentIter<'a> {
    space: &'a AssignmentSpace,
    digits: Option<Vec<usize>>,
    remaining: u128,
}

impl Iterator for AssignmentIter<'_> {
    type Item = ShiftAssignment;

    fn next(&mut self) -> Option<ShiftAssignment> {
        if self.remaining == 0 {
            return None;
        }
        let digits = self.digits.as_mut()?;
        let shifts = digits.iter().zip(&self.space.allowed).map(|(&d, set)| set[d]).collect();
        self.remaining -= 1;
        for (d, set) in digits.iter_mut().zip(&self.space.allowed).rev() {
            *d += 1;
            if *d < set.len() {
                break;
            }
            *d = 0;
        }
        Some(ShiftAssignment { k: self.space.k, shifts, mask: Some(self.space.allowed.clone()) })
    }
}

/// Every assignment of `m` edges to `{0..k}` (or to the masked subsets), lexicographically.
pub fn enumerate_assignments(m: usize, k: u32, mask: Option<Vec<Vec<u32>>>) -> Result<Vec<ShiftAssignment>> {
    Ok(AssignmentSpace::new(m, k, mask)?.iter().collect())
}

/// The explicit lift: fibre vertex `(v, ℓ)` becomes `(v − 1)·k + ℓ + 1` and each base
/// edge `(u, v)` yields the edges `(u, ℓ)–(v, (ℓ + s) mod k)` for every layer `ℓ`.
pub fn expand_lift(g: &Graph, s: &ShiftAssignment) -> Result<Graph> {
    s.check_against(g)?;
    let k = s.k() as usize;
    let label = |v: usize, layer: usize| (v - 1) * k + layer + 1;
    let edges = g.edges().iter().zip(s.shifts()).flat_map(|(&(u, v), &shift)| {
        (0..k).map(move |l| (label(u, l), label(v, (l + shift as usize) % k)))
    });
    let bipartition = g.bipartition().map(|classes| {
        classes.clone().map(|class| class.iter().flat_map(|&v| (0..k).map(move |l| label(v, l))).collect())
    });
    Graph::new(g.n() * k, edges, bipartition)
}

/// `A_s(ω^i)`: entry `(u, v)` is `ω^{i·s(u, v)}` on edges, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientMatrix<T: Scalar> {
    pub entries: DMatrix<Complex<T>>,
    pub root_power: u32,
    pub k: u32,
}

/// Quotient matrix for the fixed primitive root `ω = e^{2πi/k}`.
pub fn quotient_matrix<T: Scalar>(g: &Graph, s: &ShiftAssignment, i: u32) -> Result<QuotientMatrix<T>> {
    quotient_matrix_with_generator(g, s, i, 1)
}

/// Quotient matrix for the primitive root `ω^generator`; `generator` must be coprime to `k`.
pub fn quotient_matrix_with_generator<T: Scalar>(
    g: &Graph,
    s: &ShiftAssignment,
    i: u32,
    generator: u32,
) -> Result<QuotientMatrix<T>> {
    s.check_against(g)?;
    let k = s.k();
    if i >= k {
        return Err(Error::RootPowerOutOfRange { power: i, k });
    }
    let n = g.n();
    let mut entries = DMatrix::from_element(n, n, czero::<T>());
    let power = u64::from(i) * u64::from(generator);
    for (j, &(u, v)) in g.edges().iter().enumerate() {
        entries[(u - 1, v - 1)] = root_of_unity(k, power * u64::from(s.shifts()[j]));
        entries[(v - 1, u - 1)] = root_of_unity(k, power * u64::from(s.reverse(j)));
    }
    Ok(QuotientMatrix { entries, root_power: i, k })
}

/// Plain adjacency matrix with complex entries.
pub fn adjacency_matrix<T: Scalar>(g: &Graph) -> DMatrix<Complex<T>> {
    let n = g.n();
    let one = Complex::new(T::one(), T::zero());
    let mut a = DMatrix::from_element(n, n, czero::<T>());
    for &(u, v) in g.edges() {
        a[(u - 1, v - 1)] = one;
        a[(v - 1, u - 1)] = one;
    }
    a
}
