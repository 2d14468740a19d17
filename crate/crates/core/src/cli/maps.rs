//! Density-map experiment: single, conditional and flux grids with their checks.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{Conditioning, ExperimentConfig};
use super::output::{write_flux_csv, write_grid_csv, write_pgm, write_ppm};
use super::report::RunReport;
use super::CliError;
use crate::density::{
    antibunching_check, conditional_density, probability_flux, ring_tangential_flux,
    single_density, DensityGrid, PairDensity,
};
use crate::orbitals::{
    degenerate_superpositions, rectangle_mos, triangle_mos, Geometry, MoSet, MolecularOrbital,
};
use crate::wavefunction::{Coupling, Point2};

/// Distance within which a local maximum counts as sitting on a trap site.
pub const SITE_MAXIMUM_RADIUS: f64 = 0.3;
/// Relative slack for ties between mirror-image sites, which agree exactly in real arithmetic.
pub const SITE_TIE_TOLERANCE: f64 = 1e-12;
/// Environment variable that overrides the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "MATTERWAVE_OUTPUT_DIR";

pub fn output_dir(config: &ExperimentConfig) -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| config.output_dir.clone())
}

pub fn build_mos(geometry: Geometry, width: f64) -> Result<MoSet, CliError> {
    Ok(match geometry {
        Geometry::Triangle { a, h } => triangle_mos(a, h, width)?,
        Geometry::Rectangle { a, b } => rectangle_mos(a, b, width)?,
    })
}

fn dist(a: Point2, b: Point2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// For each site, the distance to the nearest local maximum of the grid.
pub fn site_maximum_offsets(grid: &DensityGrid, sites: &[Point2]) -> Vec<f64> {
    let maxima = grid.local_maxima();
    sites
        .iter()
        .map(|s| {
            maxima
                .iter()
                .map(|(p, _)| dist(*p, *s))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Whether the conditional map, sampled at every site, is lowest (ties allowed) at `site`.
pub fn minimum_at_site(grid: &DensityGrid, sites: &[Point2], site: usize) -> bool {
    let own = grid.value_near(sites[site]);
    sites
        .iter()
        .all(|s| grid.value_near(*s) >= own * (1.0 - SITE_TIE_TOLERANCE))
}

fn write_scalar(
    report: &mut RunReport,
    dir: &Path,
    stem: &str,
    grid: &DensityGrid,
) -> Result<(), CliError> {
    let csv = dir.join(format!("{stem}.csv"));
    let pgm = dir.join(format!("{stem}.pgm"));
    write_grid_csv(grid, &csv)?;
    write_pgm(grid, &pgm)?;
    report.outputs.extend([csv, pgm]);
    Ok(())
}

pub fn run_density(config: &ExperimentConfig) -> Result<RunReport, CliError> {
    config.validate_density()?;
    let geometry = config.geometry()?;
    let n = config.particles;
    let spec = config.grid;
    let dir = output_dir(config);
    fs::create_dir_all(&dir)?;
    let stem = |s: &str| format!("{}_{s}", config.name);

    let mut report = RunReport::new(format!("density: {}", config.name));
    for line in config.serialize().lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            report.echo(k, v);
        }
    }
    let mos = build_mos(geometry, config.width)?;
    report.summary("MO Gram deviation", format!("{:.3e}", mos.gram_deviation()));
    report.summary(
        "symmetric orthonormalization applied",
        mos.fallback_applied(),
    );
    report.check_residual("MO set orthonormal", mos.gram_deviation(), 1e-12);
    report.summary(
        "conditional map normalization",
        "unit integral over the grid",
    );

    let sites = geometry.centers();
    let single = single_density(n, &mos, spec)?;
    write_scalar(&mut report, &dir, &stem("single"), &single)?;
    report.summary(
        "single density grid integral",
        format!("{:.9}", single.integral()),
    );
    report.check(
        "single density non-negative",
        single.min() >= -1e-12,
        format!("min {:.3e}", single.min()),
    );
    let offsets = site_maximum_offsets(&single, &sites);
    for (name, d) in geometry.site_names().iter().zip(&offsets) {
        report.check(
            format!("single density has a local maximum near site {name}"),
            *d <= SITE_MAXIMUM_RADIUS,
            format!("nearest maximum at {d:.3}"),
        );
    }

    let psi1 = PairDensity::ground(n, Coupling::Low, config.statistics, mos.clone())?;
    let psi2 = PairDensity::ground(n, Coupling::High, config.statistics, mos.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let mut p = || {
            [
                rng.gen_range(spec.x_min..spec.x_max),
                rng.gen_range(spec.y_min..spec.y_max),
            ]
        };
        let (r1, r2) = (p(), p());
        worst = worst.max((psi1.evaluate(r1, r2) - psi2.evaluate(r1, r2)).abs());
    }
    report.check_residual("pair density independent of spin coupling", worst, 1e-10);

    let targets: Vec<(String, Point2, Option<usize>)> = match &config.conditioning {
        Conditioning::SiteCenters => geometry
            .site_names()
            .iter()
            .zip(&sites)
            .enumerate()
            .map(|(k, (name, p))| (format!("site{name}"), *p, Some(k)))
            .collect(),
        Conditioning::Points(ps) => ps
            .iter()
            .enumerate()
            .map(|(k, p)| (format!("point{k}"), *p, None))
            .collect(),
    };
    for (label, r0, site) in targets {
        let one = conditional_density(&psi1, r0, spec)?;
        let two = conditional_density(&psi2, r0, spec)?;
        let gap = one
            .values
            .iter()
            .zip(&two.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.check_residual(
            format!("conditional map at {label} identical for both couplings"),
            gap,
            1e-10,
        );
        if let Some(k) = site {
            report.check(
                format!("conditional map at {label} is lowest at its own site"),
                minimum_at_site(&one, &sites, k),
                "",
            );
        }
        write_scalar(
            &mut report,
            &dir,
            &stem(&format!("conditional_{label}")),
            &one,
        )?;
    }

    let ab = antibunching_check(|a, b| psi1.evaluate(a, b), |r| psi1.marginal(r), spec)?;
    report.summary("antibunching qualifying points", ab.qualifying_points);
    report.summary(
        "largest coincidence ratio",
        format!(
            "{:.6} at ({:.3}, {:.3})",
            ab.max_ratio, ab.max_location[0], ab.max_location[1]
        ),
    );
    report.check(
        "coincidence density below squared density everywhere",
        ab.antibunched(),
        format!("{} violations", ab.violations),
    );

    if geometry.is_square() {
        square_extras(config, &mos, &dir, &mut report)?;
    }
    Ok(report)
}

fn orbital_density(mo: &MolecularOrbital, spec: crate::density::GridSpec) -> DensityGrid {
    DensityGrid::from_fn(spec, |p| mo.evaluate(p).norm_sqr())
}

fn square_extras(
    config: &ExperimentConfig,
    mos: &MoSet,
    dir: &Path,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let spec = config.grid;
    let stem = |s: &str| format!("{}_{s}", config.name);
    let [plus, minus, cplus, cminus] = degenerate_superpositions(mos)?;
    for (tag, mo) in [
        ("e", &mos.orbitals()[1]),
        ("e1", &mos.orbitals()[2]),
        ("e_plus_e1", &plus),
        ("e_minus_e1", &minus),
        ("e_plus_ie1", &cplus),
    ] {
        write_scalar(
            report,
            dir,
            &stem(&format!("orbital_{tag}")),
            &orbital_density(mo, spec),
        )?;
    }
    let mut real_peak: f64 = 0.0;
    for mo in mos.orbitals().iter().chain([&plus, &minus]) {
        real_peak = real_peak.max(probability_flux(mo, spec)?.max_norm());
    }
    report.check_residual("real orbitals carry no flux", real_peak, 0.0);

    let a = probability_flux(&cplus, spec)?;
    let b = probability_flux(&cminus, spec)?;
    let opposite = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(u, v)| (u[0] + v[0]).abs().max((u[1] + v[1]).abs()))
        .fold(0.0, f64::max);
    report.check_residual(
        "complex superpositions carry opposite flux",
        opposite,
        1e-15,
    );

    let radius = match mos.geometry() {
        Geometry::Rectangle { a, .. } => a / 2.0,
        Geometry::Triangle { .. } => unreachable!("square checked"),
    };
    let ring = ring_tangential_flux(&cplus, [0.0, 0.0], radius, 360);
    let fixed = ring.iter().all(|t| *t > 0.0) || ring.iter().all(|t| *t < 0.0);
    report.check(
        "flux circulates with one sense around the trap ring",
        fixed,
        "",
    );
    let div = a.divergence();
    let interior = div.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    report.summary(
        "largest discrete flux divergence",
        format!("{interior:.6e}"),
    );

    for (tag, flux) in [("flux_e_plus_ie1", &a), ("flux_e_minus_ie1", &b)] {
        let csv = dir.join(format!("{}.csv", stem(tag)));
        let ppm = dir.join(format!("{}.ppm", stem(tag)));
        write_flux_csv(flux, &csv)?;
        write_ppm(flux, &ppm)?;
        report.outputs.extend([csv, ppm]);
    }
    Ok(())
}
