//! Density kernels `Σ K · ∏ conj(φ_bra(r_k)) φ_ket(r_k)` and their contraction.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use super::position::{OrbitalLabel, PositionWavefunction, TERM_EPS};
use super::WavefunctionError;

pub type Point2 = [f64; 2];

/// Resolves orbital labels to numeric single-particle functions.
pub trait OrbitalEvaluator {
    fn evaluate(&self, label: OrbitalLabel, point: Point2) -> Option<Complex64>;
}

impl<F> OrbitalEvaluator for F
where
    F: Fn(OrbitalLabel, Point2) -> Option<Complex64>,
{
    fn evaluate(&self, label: OrbitalLabel, point: Point2) -> Option<Complex64> {
        self(label, point)
    }
}

type Key = (Vec<OrbitalLabel>, Vec<OrbitalLabel>);

/// Kernel over a subset of the original coordinates (0-based, ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    coords: Vec<usize>,
    terms: BTreeMap<Key, Complex64>,
}

impl ReducedDensity {
    pub fn zero(coords: Vec<usize>) -> Self {
        Self {
            coords,
            terms: BTreeMap::new(),
        }
    }

    /// `Σ_{t,u} conj(bra_t) ket_u |t⟩⟨u|`-style kernel: `ket(r) · conj(bra(r))`.
    pub fn outer(
        ket: &PositionWavefunction,
        bra: &PositionWavefunction,
    ) -> Result<Self, WavefunctionError> {
        super::position::check_size(ket.particle_count(), bra.particle_count())?;
        let mut out = Self::zero((0..ket.particle_count()).collect());
        for (t, cb) in bra.terms() {
            for (u, ck) in ket.terms() {
                out.push((t.clone(), u.clone()), cb.conj() * ck);
            }
        }
        Ok(out)
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, bra: &[OrbitalLabel], ket: &[OrbitalLabel]) -> Complex64 {
        self.terms
            .get(&(bra.to_vec(), ket.to_vec()))
            .copied()
            .unwrap_or_default()
    }

    pub(crate) fn push(&mut self, key: Key, c: Complex64) {
        let entry = self.terms.entry(key.clone()).or_default();
        *entry += c;
        if entry.norm() <= TERM_EPS {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, f: Complex64) -> Self {
        let mut out = Self::zero(self.coords.clone());
        for (k, c) in &self.terms {
            out.push(k.clone(), c * f);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, WavefunctionError> {
        if self.coords != other.coords {
            return Err(WavefunctionError::CoordinateMismatch);
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.push(k.clone(), *c);
        }
        Ok(out)
    }

    /// Bra and ket swapped, coefficients conjugated.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.coords.clone());
        for ((b, k), c) in &self.terms {
            out.push((k.clone(), b.clone()), c.conj());
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, c) in &self.terms {
            let o = other.terms.get(k).copied().unwrap_or_default();
            worst = worst.max((c - o).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Sum of the diagonal (`bra = ket`) coefficients: the integral of the density.
    pub fn trace(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|((b, k), _)| b == k)
            .map(|(_, c)| *c)
            .sum()
    }
}

/// Integrates out every coordinate not in `keep` by orbital orthonormality.
///
/// `keep` lists original coordinate indices (0-based).
pub fn marginalize(
    density: &ReducedDensity,
    keep: &[usize],
) -> Result<ReducedDensity, WavefunctionError> {
    if keep.is_empty() {
        return Err(WavefunctionError::EmptyKeep);
    }
    let keep: BTreeSet<usize> = keep.iter().copied().collect();
    let positions: Vec<usize> = density
        .coords
        .iter()
        .enumerate()
        .filter(|(_, c)| keep.contains(c))
        .map(|(i, _)| i)
        .collect();
    if positions.len() != keep.len() {
        return Err(WavefunctionError::UnknownCoordinate);
    }
    let mut out = ReducedDensity::zero(positions.iter().map(|&i| density.coords[i]).collect());
    for ((bra, ket), c) in &density.terms {
        let traced_match = (0..bra.len())
            .filter(|i| !positions.contains(i))
            .all(|i| bra[i] == ket[i]);
        if !traced_match {
            continue;
        }
        let b: Vec<OrbitalLabel> = positions.iter().map(|&i| bra[i]).collect();
        let k: Vec<OrbitalLabel> = positions.iter().map(|&i| ket[i]).collect();
        out.push((b, k), *c);
    }
    Ok(out)
}

/// Evaluates the kernel on the diagonal at each point tuple (one point per kept coordinate).
pub fn evaluate_density<E: OrbitalEvaluator + ?Sized>(
    density: &ReducedDensity,
    evaluator: &E,
    points: &[Vec<Point2>],
) -> Result<Vec<Complex64>, WavefunctionError> {
    let labels: BTreeSet<OrbitalLabel> = density
        .terms
        .keys()
        .flat_map(|(b, k)| b.iter().chain(k.iter()).copied())
        .collect();
    let labels: Vec<OrbitalLabel> = labels.into_iter().collect();
    let mut out = Vec::with_capacity(points.len());
    for tuple in points {
        if tuple.len() != density.coords.len() {
            return Err(WavefunctionError::SizeMismatch(
                density.coords.len(),
                tuple.len(),
            ));
        }
        out.push(evaluate_at(density, evaluator, &labels, tuple)?);
    }
    Ok(out)
}

pub(crate) fn evaluate_at<E: OrbitalEvaluator + ?Sized>(
    density: &ReducedDensity,
    evaluator: &E,
    labels: &[OrbitalLabel],
    tuple: &[Point2],
) -> Result<Complex64, WavefunctionError> {
    // values[coord][label index]
    let mut values = Vec::with_capacity(tuple.len());
    for p in tuple {
        let mut row = Vec::with_capacity(labels.len());
        for l in labels {
            row.push(
                evaluator
                    .evaluate(*l, *p)
                    .ok_or(WavefunctionError::UnresolvedLabel(*l))?,
            );
        }
        values.push(row);
    }
    let idx = |l: &OrbitalLabel| labels.binary_search(l).expect("label collected");
    let mut acc = Complex64::default();
    for ((bra, ket), c) in &density.terms {
        let mut prod = *c;
        for (k, (b, u)) in bra.iter().zip(ket).enumerate() {
            prod *= values[k][idx(b)].conj() * values[k][idx(u)];
        }
        acc += prod;
    }
    Ok(acc)
}

/// Pre-resolved kernel for repeated evaluation at many points.
#[derive(Debug, Clone)]
pub struct CompiledDensity {
    labels: Vec<OrbitalLabel>,
    // (coefficient, per-coordinate (bra index, ket index))
    terms: Vec<(Complex64, Vec<(usize, usize)>)>,
    arity: usize,
}

impl CompiledDensity {
    pub fn new(density: &ReducedDensity) -> Self {
        let labels: BTreeSet<OrbitalLabel> = density
            .terms
            .keys()
            .flat_map(|(b, k)| b.iter().chain(k.iter()).copied())
            .collect();
        let labels: Vec<OrbitalLabel> = labels.into_iter().collect();
        let idx = |l: &OrbitalLabel| labels.binary_search(l).expect("label collected");
        let terms = density
            .terms
            .iter()
            .map(|((b, k), c)| (*c, b.iter().zip(k).map(|(x, y)| (idx(x), idx(y))).collect()))
            .collect();
        Self {
            labels,
            terms,
            arity: density.coords.len(),
        }
    }

    pub fn labels(&self) -> &[OrbitalLabel] {
        &self.labels
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `values[k][j]` is orbital `labels()[j]` at the point of kept coordinate `k`.
    pub fn evaluate_with(&self, values: &[Vec<Complex64>]) -> Complex64 {
        let mut acc = Complex64::default();
        for (c, pairs) in &self.terms {
            let mut prod = *c;
            for (k, &(b, u)) in pairs.iter().enumerate() {
                prod *= values[k][b].conj() * values[k][u];
            }
            acc += prod;
        }
        acc
    }
}
