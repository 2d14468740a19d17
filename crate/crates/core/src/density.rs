//! Densities, pair correlations and probability flux sampled on 2D grids.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::fock::Statistics;
use crate::orbitals::{MoSet, MolecularOrbital};
use crate::spin::HalfInt;
use crate::wavefunction::{
    assemble_state, ground_assignment, marginalize, spin_traced_kernel, CompiledDensity, Coupling,
    OrbitalEvaluator, Point2, ReducedDensity, SpinPositionState, WavefunctionError,
};

/// Smallest resolution accepted per axis.
pub const MIN_RESOLUTION: usize = 8;
/// Marginal density at or below which conditioning is refused.
pub const CONDITIONING_FLOOR: f64 = 1e-15;
/// Points with a smaller single-particle density are skipped by the antibunching check.
pub const ANTIBUNCHING_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("particle count {0} unsupported (3 or 4)")]
    UnsupportedCount(usize),
    #[error("marginal density {0:e} at the conditioning point is too small")]
    MeaninglessConditioning(f64),
    #[error("pair kernel must carry exactly two coordinates, got {0}")]
    NotPairKernel(usize),
    #[error(transparent)]
    Wavefunction(#[from] WavefunctionError),
}

type Result<T> = std::result::Result<T, DensityError>;

/// Midpoint grid: cell `(i, j)` is centred at `x_min + (i + ½)·dx`, `y_min + (j + ½)·dy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        let spec = Self {
            x_min: x.0,
            x_max: x.1,
            y_min: y.0,
            y_max: y.1,
            nx,
            ny,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Square grid `[−half, half]²`.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new((-half, half), (-half, half), n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.x_max <= self.x_min || self.y_max <= self.y_min {
            return Err(DensityError::InvalidGrid(
                "ranges must be finite and non-degenerate".into(),
            ));
        }
        if self.nx < MIN_RESOLUTION || self.ny < MIN_RESOLUTION {
            return Err(DensityError::InvalidGrid(format!(
                "resolution must be at least {MIN_RESOLUTION}"
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, i: usize, j: usize) -> Point2 {
        [
            self.x_min + (i as f64 + 0.5) * self.dx(),
            self.y_min + (j as f64 + 0.5) * self.dy(),
        ]
    }

    /// Row-major: index `j·nx + i`.
    pub fn point_at(&self, k: usize) -> Point2 {
        self.point(k % self.nx, k / self.nx)
    }

    pub fn nearest_cell(&self, p: Point2) -> (usize, usize) {
        let i = ((p[0] - self.x_min) / self.dx())
            .floor()
            .clamp(0.0, (self.nx - 1) as f64);
        let j = ((p[1] - self.y_min) / self.dy())
            .floor()
            .clamp(0.0, (self.ny - 1) as f64);
        (i as usize, j as usize)
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_min: -6.0,
            x_max: 6.0,
            y_min: -6.0,
            y_max: 6.0,
            nx: 256,
            ny: 256,
        }
    }
}

/// Evaluates `f` at every cell centre in parallel.
pub fn fill<T, F>(spec: &GridSpec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Point2) -> T + Sync + Send,
{
    (0..spec.len())
        .into_par_iter()
        .map(|k| f(spec.point_at(k)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl DensityGrid {
    pub fn from_fn<F: Fn(Point2) -> f64 + Sync + Send>(spec: GridSpec, f: F) -> Self {
        Self {
            values: fill(&spec, f),
            spec,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.spec.nx + i]
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spec.cell_area()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn value_near(&self, p: Point2) -> f64 {
        let (i, j) = self.spec.nearest_cell(p);
        self.get(i, j)
    }

    /// Interior cells not below any of their eight neighbours and above at least one.
    ///
    /// Ties are allowed so that a peak straddling mirror-symmetric cells is still found.
    pub fn local_maxima(&self) -> Vec<(Point2, f64)> {
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        let mut out = Vec::new();
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let v = self.get(i, j);
                let (mut below, mut above) = (false, false);
                for dj in [-1i64, 0, 1] {
                    for di in [-1i64, 0, 1] {
                        if (di, dj) == (0, 0) {
                            continue;
                        }
                        let w = self.get((i as i64 + di) as usize, (j as i64 + dj) as usize);
                        below |= w > v;
                        above |= w < v;
                    }
                }
                if !below && above {
                    out.push((self.spec.point(i, j), v));
                }
            }
        }
        out
    }
}

/// A two-vector field `(jx, jy)` per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxGrid {
    pub spec: GridSpec,
    pub values: Vec<[f64; 2]>,
}

impl FluxGrid {
    pub fn get(&self, i: usize, j: usize) -> [f64; 2] {
        self.values[j * self.spec.nx + i]
    }

    pub fn max_norm(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v[0].hypot(v[1]))
            .fold(0.0, f64::max)
    }

    /// Central-difference divergence on interior cells; boundary cells hold 0.
    pub fn divergence(&self) -> DensityGrid {
        let spec = self.spec;
        let (dx, dy) = (spec.dx(), spec.dy());
        let values = (0..spec.len())
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % spec.nx, k / spec.nx);
                if i == 0 || j == 0 || i + 1 == spec.nx || j + 1 == spec.ny {
                    return 0.0;
                }
                (self.get(i + 1, j)[0] - self.get(i - 1, j)[0]) / (2.0 * dx)
                    + (self.get(i, j + 1)[1] - self.get(i, j - 1)[1]) / (2.0 * dy)
            })
            .collect();
        DensityGrid { spec, values }
    }
}

pub fn occupation_weights(n: usize) -> Result<[f64; 2]> {
    match n {
        3 => Ok([2.0 / 3.0, 1.0 / 3.0]),
        4 => Ok([0.5, 0.5]),
        _ => Err(DensityError::UnsupportedCount(n)),
    }
}

/// Ground-configuration one-particle density `w_g|φ_g|² + w_e|φ_e|²`.
pub fn single_density(n: usize, mos: &MoSet, spec: GridSpec) -> Result<DensityGrid> {
    spec.validate()?;
    let [wg, we] = occupation_weights(n)?;
    let g = mos.orbitals()[0].clone();
    let e = mos.orbitals()[1].clone();
    Ok(DensityGrid::from_fn(spec, move |p| {
        wg * g.evaluate(p).norm_sqr() + we * e.evaluate(p).norm_sqr()
    }))
}

/// Two-coordinate density kernel bound to numeric orbitals.
#[derive(Debug, Clone)]
pub struct PairDensity {
    kernel: ReducedDensity,
    compiled: CompiledDensity,
    marginal: CompiledDensity,
    mos: MoSet,
}

impl PairDensity {
    pub fn new(kernel: ReducedDensity, mos: MoSet) -> Result<Self> {
        if kernel.coords().len() != 2 {
            return Err(DensityError::NotPairKernel(kernel.coords().len()));
        }
        let one = marginalize(&kernel, &kernel.coords()[..1])?;
        for (k, _) in kernel.terms() {
            for l in k.0.iter().chain(&k.1) {
                if mos.get(*l).is_none() {
                    return Err(WavefunctionError::UnresolvedLabel(*l).into());
                }
            }
        }
        Ok(Self {
            compiled: CompiledDensity::new(&kernel),
            marginal: CompiledDensity::new(&one),
            kernel,
            mos,
        })
    }

    /// Marginal on the first two coordinates of `Σ_σ |Ψ|²`.
    pub fn from_state(psi: &SpinPositionState, mos: MoSet) -> Result<Self> {
        let full = spin_traced_kernel(psi, psi)?;
        Self::new(marginalize(&full, &[0, 1])?, mos)
    }

    /// Ground orbital assignment in the given coupling.
    pub fn ground(
        n: usize,
        coupling: Coupling,
        statistics: Statistics,
        mos: MoSet,
    ) -> Result<Self> {
        let m = if n == 3 { HalfInt::HALF } else { HalfInt::ZERO };
        let orbitals = ground_assignment(n)?;
        let psi = assemble_state(n, coupling, statistics, &orbitals, m)?;
        Self::from_state(&psi, mos)
    }

    pub fn kernel(&self) -> &ReducedDensity {
        &self.kernel
    }

    fn values(&self, labels: &[crate::wavefunction::OrbitalLabel], p: Point2) -> Vec<Complex64> {
        labels
            .iter()
            .map(|l| self.mos.evaluate(*l, p).expect("labels checked"))
            .collect()
    }

    pub fn evaluate(&self, r1: Point2, r2: Point2) -> f64 {
        let labels = self.compiled.labels();
        self.compiled
            .evaluate_with(&[self.values(labels, r1), self.values(labels, r2)])
            .re
    }

    /// One-particle density obtained by integrating out the second coordinate.
    pub fn marginal(&self, r: Point2) -> f64 {
        let labels = self.marginal.labels();
        self.marginal.evaluate_with(&[self.values(labels, r)]).re
    }
}

/// `ρ(r | r0)`, normalized to unit integral over the grid.
pub fn conditional_density(pair: &PairDensity, r0: Point2, spec: GridSpec) -> Result<DensityGrid> {
    spec.validate()?;
    let m = pair.marginal(r0);
    if m <= CONDITIONING_FLOOR {
        return Err(DensityError::MeaninglessConditioning(m));
    }
    let mut grid = DensityGrid::from_fn(spec, |p| pair.evaluate(p, r0));
    let total = grid.integral();
    grid.values.iter_mut().for_each(|v| *v /= total);
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntibunchingReport {
    pub qualifying_points: usize,
    pub violations: usize,
    /// Largest `pair(r, r) / ρ(r)²` and where it occurs.
    pub max_ratio: f64,
    pub max_location: Point2,
}

impl AntibunchingReport {
    pub fn antibunched(&self) -> bool {
        self.qualifying_points > 0 && self.violations == 0
    }
}

/// Checks `pair(r, r) < ρ(r)²` wherever `ρ(r) > 1e-8`.
pub fn antibunching_check<P, R>(pair: P, rho: R, spec: GridSpec) -> Result<AntibunchingReport>
where
    P: Fn(Point2, Point2) -> f64 + Sync + Send,
    R: Fn(Point2) -> f64 + Sync + Send,
{
    spec.validate()?;
    let samples: Vec<Option<(f64, Point2)>> = fill(&spec, |p| {
        let r = rho(p);
        (r > ANTIBUNCHING_FLOOR).then(|| (pair(p, p) / (r * r), p))
    });
    let mut report = AntibunchingReport {
        qualifying_points: 0,
        violations: 0,
        max_ratio: f64::NEG_INFINITY,
        max_location: [f64::NAN, f64::NAN],
    };
    for (ratio, p) in samples.into_iter().flatten() {
        report.qualifying_points += 1;
        if ratio >= 1.0 {
            report.violations += 1;
        }
        if ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.max_location = p;
        }
    }
    Ok(report)
}

/// `j = Im[φ* ∇φ]` with ħ/m = 1.
pub fn flux_at(mo: &MolecularOrbital, p: Point2) -> [f64; 2] {
    let v = mo.evaluate(p).conj();
    let g = mo.gradient(p);
    [(v * g[0]).im, (v * g[1]).im]
}

/// `∇·j = Im[φ* ∇²φ]`, evaluated analytically.
pub fn flux_divergence_at(mo: &MolecularOrbital, p: Point2) -> f64 {
    (mo.evaluate(p).conj() * mo.laplacian(p)).im
}

pub fn probability_flux(mo: &MolecularOrbital, spec: GridSpec) -> Result<FluxGrid> {
    spec.validate()?;
    Ok(FluxGrid {
        values: fill(&spec, |p| flux_at(mo, p)),
        spec,
    })
}

/// Tangential flux `j · t̂` at `samples` points of a counter-clockwise ring.
pub fn ring_tangential_flux(
    mo: &MolecularOrbital,
    center: Point2,
    radius: f64,
    samples: usize,
) -> Vec<f64> {
    (0..samples)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / samples as f64;
            let (s, c) = t.sin_cos();
            let j = flux_at(mo, [center[0] + radius * c, center[1] + radius * s]);
            -s * j[0] + c * j[1]
        })
        .collect()
}

/// `∮ j · dl` around the ring (counter-clockwise positive).
pub fn circulation(mo: &MolecularOrbital, center: Point2, radius: f64, samples: usize) -> f64 {
    let tangential = ring_tangential_flux(mo, center, radius, samples);
    tangential.iter().sum::<f64>() * std::f64::consts::TAU * radius / samples as f64
}
