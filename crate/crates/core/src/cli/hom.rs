//! Named two-particle beamsplitter experiments and their expected outputs.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use super::config::ExperimentConfig;
use super::report::RunReport;
use super::CliError;
use crate::fock::{
    beamsplitter, BeamsplitterConvention, FockEngine, Mode, SpinLabel, StateVector, Statistics,
};

/// Amplitude tolerance for the named outcomes.
pub const HOM_TOLERANCE: f64 = 1e-12;

const UP: SpinLabel = SpinLabel::Up;
const DOWN: SpinLabel = SpinLabel::Down;

fn mode(site: u8, spin: SpinLabel) -> Mode {
    Mode::new(site, spin).expect("sites 1 and 2")
}

/// `(site, spin)` of one creator.
type Slot = (u8, SpinLabel);

fn pair(s: Statistics, terms: &[(Complex64, Slot, Slot)]) -> StateVector {
    let modes: Vec<[Mode; 2]> = terms
        .iter()
        .map(|(_, x, y)| [mode(x.0, x.1), mode(y.0, y.1)])
        .collect();
    let products: Vec<(Complex64, &[Mode])> = terms
        .iter()
        .zip(&modes)
        .map(|(t, m)| (t.0, &m[..]))
        .collect();
    StateVector::from_creators(s, &products)
}

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Input states by name; `V` also stands for `H̄` and for clock state `b`.
pub fn input_state(name: &str, s: Statistics) -> Option<StateVector> {
    let h = FRAC_1_SQRT_2;
    Some(match name {
        "HH" => pair(s, &[(r(1.0), (1, UP), (2, UP))]),
        "VV" => pair(s, &[(r(1.0), (1, DOWN), (2, DOWN))]),
        "symmetric" | "triplet" => {
            pair(s, &[(r(h), (1, UP), (2, DOWN)), (r(h), (1, DOWN), (2, UP))])
        }
        "antisymmetric" | "singlet" => pair(
            s,
            &[(r(h), (1, UP), (2, DOWN)), (r(-h), (1, DOWN), (2, UP))],
        ),
        _ => return None,
    })
}

fn canonical(name: &str) -> &str {
    match name {
        "triplet" => "symmetric",
        "singlet" => "antisymmetric",
        other => other,
    }
}

#[derive(Debug, Clone)]
pub struct HomCase {
    pub name: &'static str,
    pub statistics: Statistics,
    pub convention: BeamsplitterConvention,
    pub theta: f64,
    pub input_name: &'static str,
    pub input: StateVector,
    pub expected: StateVector,
}

/// Balanced-beamsplitter outcomes for bosons and fermions in both conventions.
pub fn hom_cases() -> Vec<HomCase> {
    use BeamsplitterConvention::{Atomic, Optical};
    use Statistics::{Boson, Fermion};
    let h = FRAC_1_SQRT_2;
    let mi = Complex64::new(0.0, -h);
    let case = |name, statistics, convention, input_name: &'static str, expected| HomCase {
        name,
        statistics,
        convention,
        theta: FRAC_PI_4,
        input_name,
        input: input_state(input_name, statistics).expect("known input"),
        expected,
    };
    let neg = |name: &str, s| input_state(name, s).unwrap().scale(r(-1.0));
    vec![
        case(
            "boson_same_polarization_noon",
            Boson,
            Optical,
            "HH",
            pair(
                Boson,
                &[(r(0.5), (1, UP), (1, UP)), (r(-0.5), (2, UP), (2, UP))],
            ),
        ),
        case(
            "boson_symmetric_polarization_bunches",
            Boson,
            Optical,
            "symmetric",
            pair(
                Boson,
                &[(r(h), (1, UP), (1, DOWN)), (r(-h), (2, UP), (2, DOWN))],
            ),
        ),
        case(
            "boson_antisymmetric_polarization_antibunches",
            Boson,
            Optical,
            "antisymmetric",
            neg("antisymmetric", Boson),
        ),
        case(
            "fermion_same_spin_up_antibunches",
            Fermion,
            Optical,
            "HH",
            neg("HH", Fermion),
        ),
        case(
            "fermion_same_spin_down_antibunches",
            Fermion,
            Optical,
            "VV",
            neg("VV", Fermion),
        ),
        case(
            "fermion_triplet_antibunches",
            Fermion,
            Optical,
            "triplet",
            neg("triplet", Fermion),
        ),
        case(
            "fermion_singlet_bunches",
            Fermion,
            Optical,
            "singlet",
            pair(
                Fermion,
                &[(r(h), (1, UP), (1, DOWN)), (r(-h), (2, UP), (2, DOWN))],
            ),
        ),
        case(
            "atomic_boson_same_state_splits",
            Boson,
            Atomic,
            "HH",
            pair(
                Boson,
                &[(mi * h, (1, UP), (1, UP)), (mi * h, (2, UP), (2, UP))],
            ),
        ),
        case(
            "atomic_boson_triplet_bunches",
            Boson,
            Atomic,
            "triplet",
            pair(Boson, &[(mi, (1, UP), (1, DOWN)), (mi, (2, UP), (2, DOWN))]),
        ),
        case(
            "atomic_boson_singlet_is_eigenstate",
            Boson,
            Atomic,
            "singlet",
            input_state("singlet", Boson).unwrap(),
        ),
    ]
}

/// Runs one input (or `input = all` for every named case) through the beamsplitter.
pub fn run_hom(config: &ExperimentConfig) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(format!("hom: {}", config.name));
    report.echo("input", &config.input);
    let cases = hom_cases();
    if config.input == "all" {
        for case in &cases {
            run_case(
                &mut report,
                case.name,
                case.statistics,
                case.convention,
                case.theta,
                &case.input,
                Some(&case.expected),
            )?;
        }
        return Ok(report);
    }
    report.echo("statistics", config.statistics);
    report.echo(
        "convention",
        format!("{:?}", config.convention).to_lowercase(),
    );
    report.echo("theta", config.theta);
    let input = input_state(&config.input, config.statistics)
        .ok_or_else(|| CliError::UnknownState(config.input.clone()))?;
    let matching = cases.iter().find(|c| {
        c.statistics == config.statistics
            && c.convention == config.convention
            && canonical(c.input_name) == canonical(&config.input)
            && (c.theta - config.theta).abs() < 1e-9
    });
    let name = matching.map_or("custom", |c| c.name);
    run_case(
        &mut report,
        name,
        config.statistics,
        config.convention,
        config.theta,
        &input,
        matching.map(|c| &c.expected),
    )?;
    Ok(report)
}

fn run_case(
    report: &mut RunReport,
    name: &str,
    statistics: Statistics,
    convention: BeamsplitterConvention,
    theta: f64,
    input: &StateVector,
    expected: Option<&StateVector>,
) -> Result<(), CliError> {
    let out = FockEngine::new(statistics).apply(input, &beamsplitter(theta, convention))?;
    report.summary(format!("{name} in"), input);
    report.summary(format!("{name} out"), &out);
    report.summary(
        format!("{name} bunching probability"),
        format!("{:.12}", (1.0 - out.coincidence_probability()).max(0.0)),
    );
    if let Some(expected) = expected {
        report.check_residual(name, out.max_abs_diff(expected), HOM_TOLERANCE);
    }
    Ok(())
}
