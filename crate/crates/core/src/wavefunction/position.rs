//! Symbolic position wavefunctions over an orthonormal orbital alphabet.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::WavefunctionError;
use crate::symmetric::Permutation;

/// Coefficients at or below this magnitude are dropped after collection.
pub const TERM_EPS: f64 = 1e-15;

/// An orbital of the orthonormal single-particle basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitalLabel(pub u8);

impl OrbitalLabel {
    pub const G: OrbitalLabel = OrbitalLabel(0);
    pub const E: OrbitalLabel = OrbitalLabel(1);
    /// `e′`
    pub const E1: OrbitalLabel = OrbitalLabel(2);
    /// `e″`
    pub const E2: OrbitalLabel = OrbitalLabel(3);

    pub fn parse(s: &str) -> Option<OrbitalLabel> {
        match s.trim() {
            "g" => Some(Self::G),
            "e" => Some(Self::E),
            "e'" | "e1" | "e′" => Some(Self::E1),
            "e''" | "e2" | "e″" => Some(Self::E2),
            other => other
                .strip_prefix('o')
                .and_then(|n| n.parse().ok())
                .map(OrbitalLabel),
        }
    }
}

impl fmt::Display for OrbitalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "g"),
            1 => write!(f, "e"),
            2 => write!(f, "e'"),
            3 => write!(f, "e''"),
            n => write!(f, "o{n}"),
        }
    }
}

/// `Σ c · φ_{t0}(r1) φ_{t1}(r2) …`, keyed by the orbital assignment `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionWavefunction {
    n: usize,
    terms: BTreeMap<Vec<OrbitalLabel>, Complex64>,
}

impl PositionWavefunction {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(assignment: &[OrbitalLabel]) -> Self {
        let mut wf = Self::zero(assignment.len());
        wf.terms
            .insert(assignment.to_vec(), Complex64::new(1.0, 0.0));
        wf
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Vec<OrbitalLabel>, Complex64)>,
    ) -> Result<Self, WavefunctionError> {
        let mut wf = Self::zero(n);
        for (t, c) in terms {
            if t.len() != n {
                return Err(WavefunctionError::SizeMismatch(n, t.len()));
            }
            wf.push(t, c);
        }
        Ok(wf)
    }

    pub fn particle_count(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<OrbitalLabel>, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, assignment: &[OrbitalLabel]) -> Complex64 {
        self.terms.get(assignment).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn push(&mut self, t: Vec<OrbitalLabel>, c: Complex64) {
        let entry = self.terms.entry(t.clone()).or_default();
        *entry += c;
        if entry.norm() <= TERM_EPS {
            self.terms.remove(&t);
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (t, c) in &self.terms {
            out.push(t.clone(), c * factor);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, WavefunctionError> {
        check_size(self.n, other.n)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.push(t.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WavefunctionError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    /// Largest coefficient difference over both supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (t, c) in &self.terms {
            worst = worst.max((c - other.coefficient(t)).norm());
        }
        for (t, c) in &other.terms {
            if !self.terms.contains_key(t) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }
}

impl fmt::Display for PositionWavefunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                let factors: Vec<String> = t
                    .iter()
                    .enumerate()
                    .map(|(k, o)| format!("{o}({})", k + 1))
                    .collect();
                format!("({:+}{:+}i){}", c.re, c.im, factors.join(""))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub(crate) fn check_size(a: usize, b: usize) -> Result<(), WavefunctionError> {
    if a != b {
        return Err(WavefunctionError::SizeMismatch(a, b));
    }
    Ok(())
}

/// `(P f)(r_1, …, r_N) = f(r_{p(1)}, …, r_{p(N)})`.
///
/// On an assignment `t` this moves the orbital of coordinate `s` to
/// coordinate `p(s)`. Operator products compose as `P·Q ↔ p∘q`.
pub fn permute_arguments(
    wf: &PositionWavefunction,
    p: &Permutation,
) -> Result<PositionWavefunction, WavefunctionError> {
    check_size(wf.n, p.len())?;
    let mut out = PositionWavefunction::zero(wf.n);
    for (t, c) in &wf.terms {
        out.push(p.move_entries(t), *c);
    }
    Ok(out)
}

/// `⟨a|b⟩` with orbitals contracted by orthonormality.
pub fn position_inner_product(
    a: &PositionWavefunction,
    b: &PositionWavefunction,
) -> Result<Complex64, WavefunctionError> {
    check_size(a.n, b.n)?;
    Ok(a.terms
        .iter()
        .filter_map(|(t, ca)| b.terms.get(t).map(|cb| ca.conj() * cb))
        .sum())
}

/// Removes the symmetric component from a family of three, so that it sums to zero.
///
/// The family must be closed under the supplied cyclic relabelling:
/// `permute(family[i], cycle) = family[i+1]` up to collection tolerance.
pub fn project_out_symmetric_sum(
    family: &[PositionWavefunction; 3],
    cycle: &Permutation,
) -> Result<[PositionWavefunction; 3], WavefunctionError> {
    let n = family[0].n;
    for f in family.iter() {
        check_size(n, f.n)?;
    }
    for i in 0..3 {
        let moved = permute_arguments(&family[i], cycle)?;
        let diff = moved.max_abs_diff(&family[(i + 1) % 3]);
        if diff > 1e-12 {
            return Err(WavefunctionError::NotCyclicFamily(diff));
        }
    }
    let total = family[0].add(&family[1])?.add(&family[2])?;
    let third = total.scale(Complex64::new(1.0 / 3.0, 0.0));
    Ok([
        family[0].sub(&third)?,
        family[1].sub(&third)?,
        family[2].sub(&third)?,
    ])
}
