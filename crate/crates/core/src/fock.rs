//! Second-quantized states over two sites × two internal states.
//!
//! Modes carry a fixed total order, site-major then spin-minor
//! (`1↑ < 1↓ < 2↑ < 2↓`). Fermionic signs are taken relative to this order:
//! a creator or annihilator acting on mode `m` picks up `(-1)^Σ` where `Σ` is
//! the number of particles in modes strictly preceding `m`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Number of modes handled by the engine (2 sites × 2 internal states).
pub const MODE_COUNT: usize = 4;

/// Amplitudes at or below this magnitude are dropped from state vectors.
pub const AMPLITUDE_EPS: f64 = 1e-15;

/// Tolerance on `U†U = 1` accepted for mode transforms.
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("site index {0} out of range (expected 1 or 2)")]
    InvalidSite(u8),
    #[error("statistics mismatch: {left:?} vs {right:?}")]
    StatisticsMismatch { left: Statistics, right: Statistics },
    #[error("mode transform is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("phase trajectory needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("phase trajectory times must be strictly increasing (sample {0})")]
    NonMonotoneTime(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Boson => write!(f, "boson"),
            Statistics::Fermion => write!(f, "fermion"),
        }
    }
}

/// Internal two-level label. `Up` stands for `H` (or clock state `a`),
/// `Down` for `V`, `H̄` (or `b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpinLabel {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    site: u8,
    spin: SpinLabel,
}

impl Mode {
    /// All modes in the engine's fixed order.
    pub const ALL: [Mode; MODE_COUNT] = [
        Mode {
            site: 1,
            spin: SpinLabel::Up,
        },
        Mode {
            site: 1,
            spin: SpinLabel::Down,
        },
        Mode {
            site: 2,
            spin: SpinLabel::Up,
        },
        Mode {
            site: 2,
            spin: SpinLabel::Down,
        },
    ];

    pub fn new(site: u8, spin: SpinLabel) -> Result<Self, FockError> {
        if !(1..=2).contains(&site) {
            return Err(FockError::InvalidSite(site));
        }
        Ok(Self { site, spin })
    }

    pub fn site(&self) -> u8 {
        self.site
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    /// Position in the fixed mode order.
    pub fn index(&self) -> usize {
        (self.site as usize - 1) * 2
            + match self.spin {
                SpinLabel::Up => 0,
                SpinLabel::Down => 1,
            }
    }

    pub fn from_index(index: usize) -> Self {
        Self::ALL[index]
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.spin {
            SpinLabel::Up => "↑",
            SpinLabel::Down => "↓",
        };
        write!(f, "{}{}", self.site, s)
    }
}

/// Occupation numbers of the four modes, indexed by `Mode::index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OccupationState {
    occupancy: [u8; MODE_COUNT],
}

impl OccupationState {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn from_occupancy(occupancy: [u8; MODE_COUNT]) -> Self {
        Self { occupancy }
    }

    pub fn occupancy(&self) -> [u8; MODE_COUNT] {
        self.occupancy
    }

    pub fn count(&self, mode: Mode) -> u8 {
        self.occupancy[mode.index()]
    }

    pub fn particle_number(&self) -> u32 {
        self.occupancy.iter().map(|&n| n as u32).sum()
    }

    /// Number of particles on a site, summed over the internal label.
    pub fn site_count(&self, site: u8) -> u32 {
        let base = (site as usize - 1) * 2;
        self.occupancy[base] as u32 + self.occupancy[base + 1] as u32
    }

    fn preceding(&self, mode: Mode) -> u32 {
        self.occupancy[..mode.index()]
            .iter()
            .map(|&n| n as u32)
            .sum()
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Mode::ALL
            .iter()
            .filter(|m| self.count(**m) > 0)
            .map(|m| format!("{}_{}", self.count(*m), m))
            .collect();
        if parts.is_empty() {
            write!(f, "|0⟩")
        } else {
            write!(f, "|{}⟩", parts.join(","))
        }
    }
}

/// Sparse superposition of occupation states under one statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    statistics: Statistics,
    terms: BTreeMap<OccupationState, Complex64>,
}

impl StateVector {
    pub fn zero(statistics: Statistics) -> Self {
        Self {
            statistics,
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum(statistics: Statistics) -> Self {
        Self::basis(statistics, OccupationState::vacuum())
    }

    /// Normalized basis state. Fermionic occupancies above one give the zero vector.
    pub fn basis(statistics: Statistics, occ: OccupationState) -> Self {
        let mut v = Self::zero(statistics);
        if statistics == Statistics::Fermion && occ.occupancy.iter().any(|&n| n > 1) {
            return v;
        }
        v.terms.insert(occ, Complex64::new(1.0, 0.0));
        v
    }

    /// `Σ_k c_k · a†_{m_k,1} a†_{m_k,2} … |0⟩`, operators applied right to left.
    pub fn from_creators(statistics: Statistics, products: &[(Complex64, &[Mode])]) -> Self {
        let mut out = Self::zero(statistics);
        for (coef, modes) in products {
            let mut v = Self::vacuum(statistics);
            for m in modes.iter().rev() {
                v = v.create(*m);
            }
            out.accumulate(&v, *coef);
        }
        out
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, occ: &OccupationState) -> Complex64 {
        self.terms.get(occ).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OccupationState, &Complex64)> {
        self.terms.iter()
    }

    fn accumulate(&mut self, other: &StateVector, factor: Complex64) {
        for (occ, amp) in &other.terms {
            *self.terms.entry(*occ).or_default() += factor * amp;
        }
        self.terms.retain(|_, a| a.norm() > AMPLITUDE_EPS);
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.statistics);
        out.accumulate(self, factor);
        out
    }

    pub fn add(&self, other: &StateVector) -> Result<Self, FockError> {
        self.check_statistics(other)?;
        let mut out = self.clone();
        out.accumulate(other, Complex64::new(1.0, 0.0));
        Ok(out)
    }

    fn check_statistics(&self, other: &StateVector) -> Result<(), FockError> {
        if self.statistics != other.statistics {
            return Err(FockError::StatisticsMismatch {
                left: self.statistics,
                right: other.statistics,
            });
        }
        Ok(())
    }

    pub fn create(&self, mode: Mode) -> Self {
        let mut out = Self::zero(self.statistics);
        for (occ, amp) in &self.terms {
            let n = occ.count(mode);
            let factor = match self.statistics {
                Statistics::Boson => ((n as f64) + 1.0).sqrt(),
                Statistics::Fermion => {
                    if n > 0 {
                        continue;
                    }
                    fermion_sign(occ.preceding(mode))
                }
            };
            let mut next = *occ;
            next.occupancy[mode.index()] += 1;
            *out.terms.entry(next).or_default() += amp * factor;
        }
        out.terms.retain(|_, a| a.norm() > AMPLITUDE_EPS);
        out
    }

    pub fn annihilate(&self, mode: Mode) -> Self {
        let mut out = Self::zero(self.statistics);
        for (occ, amp) in &self.terms {
            let n = occ.count(mode);
            if n == 0 {
                continue;
            }
            let factor = match self.statistics {
                Statistics::Boson => (n as f64).sqrt(),
                Statistics::Fermion => fermion_sign(occ.preceding(mode)),
            };
            let mut next = *occ;
            next.occupancy[mode.index()] -= 1;
            *out.terms.entry(next).or_default() += amp * factor;
        }
        out.terms.retain(|_, a| a.norm() > AMPLITUDE_EPS);
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, a| acc + a.norm_sqr())
    }

    /// Largest amplitude difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        let mut worst: f64 = 0.0;
        for (occ, a) in &self.terms {
            worst = worst.max((a - other.amplitude(occ)).norm());
        }
        for (occ, b) in &other.terms {
            if !self.terms.contains_key(occ) {
                worst = worst.max(b.norm());
            }
        }
        worst
    }

    /// Total probability of states with particles on both sites.
    pub fn coincidence_probability(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(occ, _)| occ.site_count(1) > 0 && occ.site_count(2) > 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(occ, a)| format!("({:+.6}{:+.6}i){}", a.re, a.im, occ))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn fermion_sign(preceding: u32) -> f64 {
    if preceding.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `⟨a|b⟩`, antilinear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64, FockError> {
    a.check_statistics(b)?;
    let (small, large, conj_small) = if a.terms.len() <= b.terms.len() {
        (a, b, true)
    } else {
        (b, a, false)
    };
    let mut acc = Complex64::default();
    for (occ, amp) in &small.terms {
        if let Some(other) = large.terms.get(occ) {
            acc += if conj_small {
                amp.conj() * other
            } else {
                other.conj() * amp
            };
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamsplitterConvention {
    /// Real symmetric reflection matrix `[[cos θ, sin θ], [sin θ, −cos θ]]`.
    Optical,
    /// Adiabatic double-well mixing `[[cos θ, −i sin θ], [−i sin θ, cos θ]]`.
    Atomic,
}

/// Linear map of creation operators, `a†_m → Σ_m' U[m'][m] b†_m'`.
///
/// Built from a 2×2 site block acting identically on both internal labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTransform {
    matrix: [[Complex64; MODE_COUNT]; MODE_COUNT],
}

impl ModeTransform {
    pub fn identity() -> Self {
        let mut matrix = [[Complex64::default(); MODE_COUNT]; MODE_COUNT];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0, 0.0);
        }
        Self { matrix }
    }

    /// `block[s'][s]` is the amplitude of output site `s'+1` for input site `s+1`.
    pub fn from_site_block(block: [[Complex64; 2]; 2]) -> Result<Self, FockError> {
        let mut matrix = [[Complex64::default(); MODE_COUNT]; MODE_COUNT];
        for out_site in 0..2 {
            for in_site in 0..2 {
                for spin in 0..2 {
                    matrix[out_site * 2 + spin][in_site * 2 + spin] = block[out_site][in_site];
                }
            }
        }
        let t = Self { matrix };
        let dev = t.unitarity_deviation();
        if dev > UNITARITY_TOL {
            return Err(FockError::NotUnitary(dev));
        }
        Ok(t)
    }

    pub fn matrix(&self) -> &[[Complex64; MODE_COUNT]; MODE_COUNT] {
        &self.matrix
    }

    pub fn site_block(&self) -> [[Complex64; 2]; 2] {
        [
            [self.matrix[0][0], self.matrix[0][2]],
            [self.matrix[2][0], self.matrix[2][2]],
        ]
    }

    /// `max |(U†U − 1)_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..MODE_COUNT {
            for j in 0..MODE_COUNT {
                let mut acc = Complex64::default();
                for k in 0..MODE_COUNT {
                    acc += self.matrix[k][i].conj() * self.matrix[k][j];
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Transform equivalent to applying `self` first and `then` second.
    pub fn then(&self, then: &ModeTransform) -> ModeTransform {
        let mut matrix = [[Complex64::default(); MODE_COUNT]; MODE_COUNT];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for k in 0..MODE_COUNT {
                    *cell += then.matrix[i][k] * self.matrix[k][j];
                }
            }
        }
        ModeTransform { matrix }
    }
}

pub fn beamsplitter(theta: f64, convention: BeamsplitterConvention) -> ModeTransform {
    let (s, c) = theta.sin_cos();
    let block = match convention {
        BeamsplitterConvention::Optical => [
            [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(-c, 0.0)],
        ],
        BeamsplitterConvention::Atomic => [
            [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
            [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
        ],
    };
    ModeTransform::from_site_block(block).expect("beamsplitter blocks are unitary")
}

/// The balanced optical beamsplitter `[[1, 1], [1, −1]]/√2`.
pub fn balanced_optical() -> ModeTransform {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    ModeTransform::from_site_block([[h, h], [h, -h]]).expect("unitary")
}

/// Rewrites every occupation term as an ordered creator product on the vacuum,
/// substitutes each creator by its image and re-expands. The vacuum phase is zero.
pub fn apply_mode_transform(state: &StateVector, t: &ModeTransform) -> StateVector {
    let stats = state.statistics;
    let mut out = StateVector::zero(stats);
    for (occ, amp) in &state.terms {
        // |n⟩ = Π_m (a†_m)^{n_m} / √(n_m!) |0⟩ with the lowest mode leftmost.
        let mut creators = Vec::new();
        let mut norm = 1.0;
        for m in Mode::ALL {
            let n = occ.count(m);
            for k in 1..=n {
                creators.push(m);
                norm *= k as f64;
            }
        }
        let mut v = StateVector::vacuum(stats);
        for m in creators.iter().rev() {
            let mut next = StateVector::zero(stats);
            for out_mode in Mode::ALL {
                let c = t.matrix[out_mode.index()][m.index()];
                if c.norm() == 0.0 {
                    continue;
                }
                next.accumulate(&v.create(out_mode), c);
            }
            v = next;
        }
        out.accumulate(&v, amp / norm.sqrt());
    }
    out
}

/// Enforces a fixed statistics on the states it transforms.
#[derive(Debug, Clone, Copy)]
pub struct FockEngine {
    statistics: Statistics,
}

impl FockEngine {
    pub fn new(statistics: Statistics) -> Self {
        Self { statistics }
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn apply(&self, state: &StateVector, t: &ModeTransform) -> Result<StateVector, FockError> {
        if state.statistics != self.statistics {
            return Err(FockError::StatisticsMismatch {
                left: self.statistics,
                right: state.statistics,
            });
        }
        Ok(apply_mode_transform(state, t))
    }
}

/// Dynamical phase `θ = −∫Δ dt` over `(t, Δ)` samples.
///
/// Trapezoid rule plus the leading Euler–Maclaurin endpoint correction
/// `−(h_b² Δ'(b) − h_a² Δ'(a))/12`, with end slopes from three-point one-sided
/// differences. Exact for polynomials up to degree two on uniform grids; with
/// two samples only the bare trapezoid is used.
pub fn accumulated_phase(trajectory: &[(f64, f64)]) -> Result<f64, FockError> {
    if trajectory.len() < 2 {
        return Err(FockError::TooFewSamples(trajectory.len()));
    }
    let mut integral = 0.0;
    for (i, w) in trajectory.windows(2).enumerate() {
        let (t0, d0) = w[0];
        let (t1, d1) = w[1];
        if t1 <= t0 || t1.is_nan() || t0.is_nan() {
            return Err(FockError::NonMonotoneTime(i + 1));
        }
        integral += 0.5 * (d0 + d1) * (t1 - t0);
    }
    let n = trajectory.len();
    if n >= 3 {
        let ha = trajectory[1].0 - trajectory[0].0;
        let hb = trajectory[n - 1].0 - trajectory[n - 2].0;
        let slope_a = one_sided_slope(trajectory[0], trajectory[1], trajectory[2]);
        let slope_b = one_sided_slope(trajectory[n - 1], trajectory[n - 2], trajectory[n - 3]);
        integral -= (hb * hb * slope_b - ha * ha * slope_a) / 12.0;
    }
    Ok(-integral)
}

// Derivative at p0 of the parabola through p0, p1, p2.
fn one_sided_slope(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> f64 {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    y0 * (2.0 * x0 - x1 - x2) / ((x0 - x1) * (x0 - x2))
        + y1 * (x0 - x2) / ((x1 - x0) * (x1 - x2))
        + y2 * (x0 - x1) / ((x2 - x0) * (x2 - x1))
}
