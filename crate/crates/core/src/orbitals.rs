//! Gaussian site orbitals and MO-LCAO molecular orbitals for three- and
//! four-site trap arrangements. Lengths are in units of the trap width δx.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::wavefunction::{OrbitalEvaluator, OrbitalLabel, Point2};

/// Gram deviation beyond which the symmetric orthonormalization fallback runs.
pub const FALLBACK_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitalError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("site orbitals have different widths ({0} vs {1})")]
    UnequalWidths(f64, f64),
    #[error("degenerate superpositions need a square geometry (a = {a}, b = {b})")]
    NotSquare { a: f64, b: f64 },
    #[error("orbitals live on different site sets")]
    SiteMismatch,
    #[error("overlap matrix is singular")]
    SingularOverlap,
}

type Result<T> = std::result::Result<T, OrbitalError>;

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(OrbitalError::NonPositive { name, value })
    }
}

/// Harmonic-trap ground state `exp(−|r−c|²/(2δ²)) / (√π δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteOrbital {
    center: Point2,
    width: f64,
}

impl SiteOrbital {
    pub fn new(center: Point2, width: f64) -> Result<Self> {
        Ok(Self {
            center,
            width: positive("width", width)?,
        })
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn evaluate(&self, p: Point2) -> f64 {
        let dx = p[0] - self.center[0];
        let dy = p[1] - self.center[1];
        let w2 = self.width * self.width;
        (-(dx * dx + dy * dy) / (2.0 * w2)).exp() / (std::f64::consts::PI.sqrt() * self.width)
    }

    pub fn gradient(&self, p: Point2) -> [f64; 2] {
        let v = self.evaluate(p);
        let w2 = self.width * self.width;
        [
            -(p[0] - self.center[0]) / w2 * v,
            -(p[1] - self.center[1]) / w2 * v,
        ]
    }

    pub fn laplacian(&self, p: Point2) -> f64 {
        let dx = p[0] - self.center[0];
        let dy = p[1] - self.center[1];
        let w2 = self.width * self.width;
        ((dx * dx + dy * dy) / (w2 * w2) - 2.0 / w2) * self.evaluate(p)
    }
}

/// `⟨φ_A|φ_B⟩ = exp(−d²/(4δ²))` for equal-width sites.
pub fn overlap(a: &SiteOrbital, b: &SiteOrbital) -> Result<f64> {
    if a.width != b.width {
        return Err(OrbitalError::UnequalWidths(a.width, b.width));
    }
    let dx = a.center[0] - b.center[0];
    let dy = a.center[1] - b.center[1];
    Ok((-(dx * dx + dy * dy) / (4.0 * a.width * a.width)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// Apex A at `(0, h)`, base B, C at `(∓a/2, 0)`.
    Triangle { a: f64, h: f64 },
    /// Corners A `(−a/2, b/2)`, B `(−a/2, −b/2)`, C `(a/2, −b/2)`, D `(a/2, b/2)`.
    Rectangle { a: f64, b: f64 },
}

impl Geometry {
    pub fn triangle(a: f64, h: f64) -> Result<Self> {
        Ok(Geometry::Triangle {
            a: positive("a", a)?,
            h: positive("h", h)?,
        })
    }

    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        Ok(Geometry::Rectangle {
            a: positive("a", a)?,
            b: positive("b", b)?,
        })
    }

    pub fn site_count(&self) -> usize {
        match self {
            Geometry::Triangle { .. } => 3,
            Geometry::Rectangle { .. } => 4,
        }
    }

    pub fn site_names(&self) -> &'static [&'static str] {
        match self {
            Geometry::Triangle { .. } => &["A", "B", "C"],
            Geometry::Rectangle { .. } => &["A", "B", "C", "D"],
        }
    }

    pub fn centers(&self) -> Vec<Point2> {
        match *self {
            Geometry::Triangle { a, h } => vec![[0.0, h], [-a / 2.0, 0.0], [a / 2.0, 0.0]],
            Geometry::Rectangle { a, b } => vec![
                [-a / 2.0, b / 2.0],
                [-a / 2.0, -b / 2.0],
                [a / 2.0, -b / 2.0],
                [a / 2.0, b / 2.0],
            ],
        }
    }

    pub fn sites(&self, width: f64) -> Result<Vec<SiteOrbital>> {
        self.centers()
            .into_iter()
            .map(|c| SiteOrbital::new(c, width))
            .collect()
    }

    pub fn is_square(&self) -> bool {
        match *self {
            Geometry::Rectangle { a, b } => (a - b).abs() <= 1e-12 * a.max(b),
            Geometry::Triangle { .. } => false,
        }
    }
}

pub fn overlap_matrix(sites: &[SiteOrbital]) -> Result<Vec<Vec<f64>>> {
    sites
        .iter()
        .map(|a| sites.iter().map(|b| overlap(a, b)).collect())
        .collect()
}

/// Linear combination of site orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularOrbital {
    name: String,
    coefficients: Vec<Complex64>,
    sites: Vec<SiteOrbital>,
}

impl MolecularOrbital {
    /// Builds the combination and rescales it to unit norm under the overlap metric.
    pub fn normalized(
        name: impl Into<String>,
        coefficients: Vec<Complex64>,
        sites: Vec<SiteOrbital>,
    ) -> Result<Self> {
        if coefficients.len() != sites.len() {
            return Err(OrbitalError::SiteMismatch);
        }
        let mut mo = Self {
            name: name.into(),
            coefficients,
            sites,
        };
        let n = mo.inner(&mo)?.re;
        if n <= 0.0 {
            return Err(OrbitalError::SingularOverlap);
        }
        let s = 1.0 / n.sqrt();
        mo.coefficients.iter_mut().for_each(|c| *c *= s);
        Ok(mo)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn sites(&self) -> &[SiteOrbital] {
        &self.sites
    }

    pub fn is_real(&self) -> bool {
        self.coefficients.iter().all(|c| c.im == 0.0)
    }

    /// `Σ_mn conj(c_m) d_n S_mn`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.sites != other.sites {
            return Err(OrbitalError::SiteMismatch);
        }
        let s = overlap_matrix(&self.sites)?;
        let mut acc = Complex64::default();
        for (m, cm) in self.coefficients.iter().enumerate() {
            for (n, dn) in other.coefficients.iter().enumerate() {
                acc += cm.conj() * dn * s[m][n];
            }
        }
        Ok(acc)
    }

    pub fn evaluate(&self, p: Point2) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&self.sites)
            .map(|(c, s)| c * s.evaluate(p))
            .sum()
    }

    pub fn gradient(&self, p: Point2) -> [Complex64; 2] {
        let mut g = [Complex64::default(); 2];
        for (c, s) in self.coefficients.iter().zip(&self.sites) {
            let d = s.gradient(p);
            g[0] += c * d[0];
            g[1] += c * d[1];
        }
        g
    }

    pub fn laplacian(&self, p: Point2) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&self.sites)
            .map(|(c, s)| c * s.laplacian(p))
            .sum()
    }

    fn combine(name: String, parts: &[(Complex64, &MolecularOrbital)]) -> Result<Self> {
        let sites = parts[0].1.sites.clone();
        let mut coeffs = vec![Complex64::default(); sites.len()];
        for (w, mo) in parts {
            if mo.sites != sites {
                return Err(OrbitalError::SiteMismatch);
            }
            for (c, d) in coeffs.iter_mut().zip(&mo.coefficients) {
                *c += w * d;
            }
        }
        Self::normalized(name, coeffs, sites)
    }
}

/// The `q`, `p`, `f` factors of the three-site combinations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleFactors {
    pub q: f64,
    pub p: f64,
    pub f: f64,
}

impl TriangleFactors {
    pub fn from_overlaps(s_ab: f64, s_bc: f64, s_ac: f64) -> Self {
        let q = 1.0 / (3.0 + 2.0 * s_ab + 2.0 * s_bc + 2.0 * s_ac).sqrt();
        let p = 1.0 / (2.0 * (1.0 - s_bc)).sqrt();
        let f = (2.0 * (1.0 + s_bc) + s_ab + s_ac) / (1.0 + s_ab + s_ac);
        Self { q, p, f }
    }
}

/// An orthonormal MO set, indexed by [`OrbitalLabel`] (`g`, `e`, `e'`, `e''`).
#[derive(Debug, Clone)]
pub struct MoSet {
    geometry: Geometry,
    orbitals: Vec<MolecularOrbital>,
    gram_deviation: f64,
    fallback_applied: bool,
    factors: Option<TriangleFactors>,
}

impl MoSet {
    fn finish(
        geometry: Geometry,
        orbitals: Vec<MolecularOrbital>,
        factors: Option<TriangleFactors>,
    ) -> Result<Self> {
        let deviation = gram_deviation(&orbitals)?;
        let (orbitals, fallback_applied) = if deviation > FALLBACK_THRESHOLD {
            eprintln!(
                "warning: MO Gram deviation {deviation:.3e}; applying symmetric orthonormalization"
            );
            (symmetric_orthonormalize(&orbitals)?, true)
        } else {
            (orbitals, false)
        };
        let gram_deviation = gram_deviation(&orbitals)?;
        Ok(Self {
            geometry,
            orbitals,
            gram_deviation,
            fallback_applied,
            factors,
        })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn orbitals(&self) -> &[MolecularOrbital] {
        &self.orbitals
    }

    pub fn get(&self, label: OrbitalLabel) -> Option<&MolecularOrbital> {
        self.orbitals.get(label.0 as usize)
    }

    /// `max |G − I|` of the final set.
    pub fn gram_deviation(&self) -> f64 {
        self.gram_deviation
    }

    /// Whether the symmetric orthonormalization fallback had to run.
    pub fn fallback_applied(&self) -> bool {
        self.fallback_applied
    }

    pub fn triangle_factors(&self) -> Option<TriangleFactors> {
        self.factors
    }
}

impl OrbitalEvaluator for MoSet {
    fn evaluate(&self, label: OrbitalLabel, point: Point2) -> Option<Complex64> {
        self.get(label).map(|mo| mo.evaluate(point))
    }
}

pub fn gram_matrix(orbitals: &[MolecularOrbital]) -> Result<Vec<Vec<Complex64>>> {
    orbitals
        .iter()
        .map(|a| orbitals.iter().map(|b| a.inner(b)).collect())
        .collect()
}

fn gram_deviation(orbitals: &[MolecularOrbital]) -> Result<f64> {
    let g = gram_matrix(orbitals)?;
    let mut worst: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - target).norm());
        }
    }
    Ok(worst)
}

/// Löwdin orthonormalization: `φ'_i = Σ_j φ_j (G^{-1/2})_{ji}`.
pub fn symmetric_orthonormalize(orbitals: &[MolecularOrbital]) -> Result<Vec<MolecularOrbital>> {
    let n = orbitals.len();
    let g = gram_matrix(orbitals)?;
    let gram = DMatrix::from_fn(n, n, |i, j| g[i][j]);
    let eig = gram.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 1e-14) {
        return Err(OrbitalError::SingularOverlap);
    }
    let inv_sqrt =
        DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(1.0 / l.sqrt(), 0.0)));
    let x = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
    (0..n)
        .map(|i| {
            let parts: Vec<(Complex64, &MolecularOrbital)> =
                (0..n).map(|j| (x[(j, i)], &orbitals[j])).collect();
            MolecularOrbital::combine(orbitals[i].name.clone(), &parts)
        })
        .collect()
}

fn real(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// `φ_g = q(A+B+C)`, `φ_e ∝ qf·A − q(B+C)`, `φ_e' = p(B−C)`.
pub fn triangle_mos(a: f64, h: f64, width: f64) -> Result<MoSet> {
    let geometry = Geometry::triangle(a, h)?;
    let sites = geometry.sites(positive("width", width)?)?;
    let s = overlap_matrix(&sites)?;
    let k = TriangleFactors::from_overlaps(s[0][1], s[1][2], s[0][2]);
    let TriangleFactors { q, p, f } = k;
    let g = MolecularOrbital::normalized("g", real(&[q, q, q]), sites.clone())?;
    let e = MolecularOrbital::normalized("e", real(&[q * f, -q, -q]), sites.clone())?;
    let e1 = MolecularOrbital::normalized("e'", real(&[0.0, p, -p]), sites)?;
    MoSet::finish(geometry, vec![g, e, e1], Some(k))
}

/// The four `D2h` parity patterns over the corners A, B, C, D.
pub fn rectangle_mos(a: f64, b: f64, width: f64) -> Result<MoSet> {
    let geometry = Geometry::rectangle(a, b)?;
    let sites = geometry.sites(positive("width", width)?)?;
    let patterns: [(&str, [f64; 4]); 4] = [
        ("g", [1.0, 1.0, 1.0, 1.0]),
        ("e", [1.0, -1.0, -1.0, 1.0]),
        ("e'", [-1.0, -1.0, 1.0, 1.0]),
        ("e''", [-1.0, 1.0, -1.0, 1.0]),
    ];
    let orbitals = patterns
        .iter()
        .map(|(name, signs)| MolecularOrbital::normalized(*name, real(signs), sites.clone()))
        .collect::<Result<Vec<_>>>()?;
    MoSet::finish(geometry, orbitals, None)
}

/// `(φ_e ± φ_e')/√2` and `(φ_e ± iφ_e')/√2` for a square arrangement, in that order.
pub fn degenerate_superpositions(set: &MoSet) -> Result<[MolecularOrbital; 4]> {
    let (a, b) = match set.geometry {
        Geometry::Rectangle { a, b } => (a, b),
        Geometry::Triangle { a, h } => return Err(OrbitalError::NotSquare { a, b: h }),
    };
    if !set.geometry.is_square() {
        return Err(OrbitalError::NotSquare { a, b });
    }
    let e = &set.orbitals[1];
    let e1 = &set.orbitals[2];
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let one = Complex64::new(r, 0.0);
    let i = Complex64::new(0.0, r);
    Ok([
        MolecularOrbital::combine("e+e'".into(), &[(one, e), (one, e1)])?,
        MolecularOrbital::combine("e-e'".into(), &[(one, e), (-one, e1)])?,
        MolecularOrbital::combine("e+ie'".into(), &[(one, e), (i, e1)])?,
        MolecularOrbital::combine("e-ie'".into(), &[(one, e), (-i, e1)])?,
    ])
}
