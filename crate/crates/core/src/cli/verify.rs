//! Spin-coupling and symmetric-group identity suite.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::RunReport;
use super::CliError;
use crate::exact::{Coeff, Rational, Surd};
use crate::fock::{Mode, StateVector, Statistics, MODE_COUNT};
use crate::orbitals::{rectangle_mos, triangle_mos, MoSet};
use crate::spin::{family_3, family_4, spin_overlap, wigner6j, HalfInt, SpinState};
use crate::symmetric::Permutation;
use crate::wavefunction::{
    assemble_state, evaluate_density, inner_product, permute_arguments, position_family,
    raw_position_family, spin_trace, Coupling, OrbitalLabel, Point2, PositionWavefunction,
};

/// All-distinct orbital assignments, where the two couplings give independent states.
pub fn distinct_orbitals(n: usize) -> Vec<OrbitalLabel> {
    (0..n as u8).map(OrbitalLabel).collect()
}

pub fn projections(n: usize) -> Vec<HalfInt> {
    if n == 3 {
        vec![HalfInt::HALF, HalfInt::MINUS_HALF]
    } else {
        vec![HalfInt::ZERO]
    }
}

fn spin_families(n: usize, s: u8, m: HalfInt) -> [SpinState; 3] {
    if n == 3 {
        family_3(s, m).expect("valid three-particle family")
    } else {
        family_4(s).expect("valid four-particle family")
    }
}

fn half(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// `pair(r, …)` style symmetry check: returns `max |P f − sign·f|`.
fn symmetry_residual(f: &PositionWavefunction, image: &[usize], sign: f64) -> f64 {
    let p = Permutation::from_image(image.to_vec()).expect("bijection");
    permute_arguments(f, &p)
        .expect("same size")
        .max_abs_diff(&f.scale(Complex64::new(sign, 0.0)))
}

pub fn run_verify() -> Result<RunReport, CliError> {
    let mut report = RunReport::new("verify");
    spin_identities(&mut report);
    position_identities(&mut report)?;
    state_identities(&mut report)?;
    fermion_sign_identities(&mut report);
    Ok(report)
}

fn spin_identities(report: &mut RunReport) {
    for s in 0..=1u8 {
        let six = wigner6j(
            half(1),
            half(1),
            half(2 * s as i32),
            half(1),
            half(1),
            half(2 * s as i32),
        );
        let factor = Coeff::from(Rational::from_integer(if s == 0 { 2 } else { -6 }));
        let total = Coeff::one() + factor * six;
        report.check(
            format!("pair recoupling via 6j, s = {s}"),
            total.is_exact() && total.is_zero(),
            format!("{total}"),
        );
    }
    for n in [3, 4] {
        for s in 0..=1u8 {
            for m in projections(n) {
                let fam = spin_families(n, s, m);
                let total = fam[0]
                    .add(&fam[1])
                    .and_then(|t| t.add(&fam[2]))
                    .expect("same size");
                report.check(
                    format!("spin family sums to zero, n = {n}, s = {s}, M = {m}"),
                    total.is_empty(),
                    format!("{} surviving terms", total.len()),
                );
                let mut row = Coeff::zero();
                for f in &fam {
                    row = row + spin_overlap(&fam[0], f).expect("same size");
                }
                report.check(
                    format!("projected family sum vanishes, n = {n}, s = {s}, M = {m}"),
                    row.is_exact() && row.is_zero(),
                    format!("{row}"),
                );
            }
        }
    }
    let six = wigner6j(half(1), half(1), half(2), half(1), half(1), half(0));
    let expected = (Coeff::from(Surd::sqrt_of(Rational::from_integer(3))) * six)
        .to_f64()
        .abs();
    for m in projections(3) {
        let a = spin_families(3, 0, m);
        let b = spin_families(3, 1, m);
        let o = spin_overlap(&a[0], &b[1]).expect("same size");
        report.check_residual(
            format!("cross-family overlap is √3·6j in magnitude, M = {m}"),
            (o.to_f64().abs() - expected).abs(),
            1e-15,
        );
    }
}

fn position_identities(report: &mut RunReport) -> Result<(), CliError> {
    // (image, sign under Low, sign under High)
    let three: &[(&[usize], f64, f64)] = &[(&[0, 2, 1], 1.0, -1.0)];
    let four: &[(&[usize], f64, f64)] = &[
        (&[1, 0, 2, 3], 1.0, -1.0),
        (&[0, 1, 3, 2], 1.0, -1.0),
        (&[2, 3, 0, 1], 1.0, 1.0),
    ];
    for (n, checks) in [(3, three), (4, four)] {
        let orbs = distinct_orbitals(n);
        for coupling in [Coupling::Low, Coupling::High] {
            let fam = position_family(n, coupling, &orbs)?;
            let mut worst: f64 = 0.0;
            for (image, low, high) in checks {
                let sign = if coupling == Coupling::Low {
                    *low
                } else {
                    *high
                };
                worst = worst.max(symmetry_residual(&fam[0], image, sign));
            }
            report.check_residual(
                format!("position part exchange symmetry, n = {n}, {coupling} coupling"),
                worst,
                0.0,
            );
            let raw = raw_position_family(n, coupling, &orbs)?;
            let total = raw[0].add(&raw[1])?.add(&raw[2])?;
            report.check(
                format!("position family sums to zero, n = {n}, {coupling} coupling"),
                total.is_empty(),
                format!("{} surviving terms", total.len()),
            );
        }
    }
    Ok(())
}

fn state_identities(report: &mut RunReport) -> Result<(), CliError> {
    let three_halves = Coeff::from(Rational::new(3, 2));
    let cross = -Coeff::from(Surd::sqrt_of(Rational::new(3, 4)));
    for n in [3, 4] {
        let orbs = distinct_orbitals(n);
        for statistics in [Statistics::Fermion, Statistics::Boson] {
            for m in projections(n) {
                let a = assemble_state(n, Coupling::Low, statistics, &orbs, m)?;
                let b = assemble_state(n, Coupling::High, statistics, &orbs, m)?;
                let o = inner_product(&a, &b)?;
                report.check_residual(
                    format!("branches orthogonal, n = {n}, {statistics}, M = {m}"),
                    o.norm(),
                    1e-12,
                );
            }
            let m = projections(n)[0];
            let a = assemble_state(n, Coupling::Low, statistics, &orbs, m)?;
            let b = assemble_state(n, Coupling::High, statistics, &orbs, m)?;
            let tr = spin_trace(&a, &b)?;
            report.check(
                format!("same-branch spin trace prefactor is 3/2, n = {n}, {statistics}"),
                tr.prefactor_a == three_halves && tr.prefactor_b == three_halves,
                format!("{} and {}", tr.prefactor_a, tr.prefactor_b),
            );
            report.check(
                format!("interference spin trace prefactor is −√3/2, n = {n}, {statistics}"),
                tr.interference_prefactor == cross,
                format!("{}", tr.interference_prefactor),
            );
        }
        let mos = if n == 3 {
            triangle_mos(2.0, 2.5, 1.0)
        } else {
            rectangle_mos(2.0, 2.5, 1.0)
        }
        .map_err(CliError::from)?;
        let residual = balance_residual(n, &mos, 400, 17)?;
        report.check_residual(
            format!("fermion and boson densities agree at C1 = C2*, n = {n}"),
            residual,
            1e-10,
        );
    }
    Ok(())
}

/// Largest pointwise gap between fermionic and bosonic full densities with `C2 = C1*`.
pub fn balance_residual(n: usize, mos: &MoSet, samples: usize, seed: u64) -> Result<f64, CliError> {
    let orbs = distinct_orbitals(n);
    let m = projections(n)[0];
    let c1 = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, 0.7);
    let c2 = c1.conj();
    let density = |statistics| -> Result<_, CliError> {
        let a = assemble_state(n, Coupling::Low, statistics, &orbs, m)?;
        let b = assemble_state(n, Coupling::High, statistics, &orbs, m)?;
        Ok(spin_trace(&a, &b)?.combine(c1, c2)?)
    };
    let fermion = density(Statistics::Fermion)?;
    let boson = density(Statistics::Boson)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<Point2>> = (0..samples)
        .map(|_| {
            (0..n)
                .map(|_| [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)])
                .collect()
        })
        .collect();
    let f = evaluate_density(&fermion, mos, &points)?;
    let b = evaluate_density(&boson, mos, &points)?;
    Ok(f.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

fn fermion_sign_identities(report: &mut RunReport) {
    let vac = StateVector::vacuum(Statistics::Fermion);
    let modes: Vec<Mode> = (0..MODE_COUNT).map(Mode::from_index).collect();
    let mut worst: f64 = 0.0;
    for &i in &modes {
        for &k in &modes {
            let ik = vac.create(k).create(i);
            let ki = vac.create(i).create(k);
            let sum = ik.add(&ki).expect("same statistics");
            worst = worst.max(sum.norm_sqr().sqrt());
        }
    }
    report.check_residual(
        "creation operators anticommute on every mode pair",
        worst,
        0.0,
    );
}
