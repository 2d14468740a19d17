use num_complex::Complex64;

use super::*;
use crate::exact::{Coeff, Rational, Surd};
use crate::fock::Statistics;
use crate::spin::HalfInt;
use crate::symmetric::Permutation;

use OrbitalLabel as O;

const DISTINCT3: [OrbitalLabel; 3] = [O::G, O::E, O::E1];
const DISTINCT4: [OrbitalLabel; 4] = [O::G, O::E, O::E1, O::E2];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn perm(image: &[usize]) -> Permutation {
    Permutation::from_image(image.to_vec()).unwrap()
}

fn projections(n: usize) -> Vec<HalfInt> {
    if n == 3 {
        vec![HalfInt::HALF, HalfInt::MINUS_HALF]
    } else {
        vec![HalfInt::ZERO]
    }
}

fn orbitals_for(n: usize) -> Vec<Vec<OrbitalLabel>> {
    let ground = ground_assignment(n).unwrap();
    let distinct = if n == 3 {
        DISTINCT3.to_vec()
    } else {
        DISTINCT4.to_vec()
    };
    vec![ground, distinct]
}

#[test]
fn pair_symmetry_of_three_particle_position_parts() {
    let swap = perm(&[0, 2, 1]);
    for orbs in orbitals_for(3) {
        let low = &position_family(3, Coupling::Low, &orbs).unwrap()[0];
        let high = &position_family(3, Coupling::High, &orbs).unwrap()[0];
        assert_eq!(&permute_arguments(low, &swap).unwrap(), low);
        assert_eq!(permute_arguments(high, &swap).unwrap(), high.scale(c(-1.0)));
    }
}

#[test]
fn pair_symmetries_of_four_particle_position_parts() {
    let first = perm(&[1, 0, 2, 3]);
    let second = perm(&[0, 1, 3, 2]);
    let exchange = perm(&[2, 3, 0, 1]);
    for orbs in orbitals_for(4) {
        let low = &position_family(4, Coupling::Low, &orbs).unwrap()[0];
        let high = &position_family(4, Coupling::High, &orbs).unwrap()[0];
        assert_eq!(&permute_arguments(low, &first).unwrap(), low);
        assert_eq!(&permute_arguments(low, &second).unwrap(), low);
        assert_eq!(&permute_arguments(low, &exchange).unwrap(), low);
        assert_eq!(
            permute_arguments(high, &first).unwrap(),
            high.scale(c(-1.0))
        );
        assert_eq!(
            permute_arguments(high, &second).unwrap(),
            high.scale(c(-1.0))
        );
        assert_eq!(&permute_arguments(high, &exchange).unwrap(), high);
    }
}

#[test]
fn raw_young_families_already_sum_to_zero() {
    for n in [3, 4] {
        for orbs in orbitals_for(n) {
            for coupling in [Coupling::Low, Coupling::High] {
                let raw = raw_position_family(n, coupling, &orbs).unwrap();
                let total = raw[0].add(&raw[1]).unwrap().add(&raw[2]).unwrap();
                assert!(total.is_empty(), "n={n} {coupling} {orbs:?}: {total}");
                let projected = position_family(n, coupling, &orbs).unwrap();
                for (a, b) in raw.iter().zip(&projected) {
                    assert_eq!(a.max_abs_diff(b), 0.0);
                }
            }
        }
    }
}

#[test]
fn states_are_normalized() {
    for n in [3, 4] {
        for orbs in orbitals_for(n) {
            for m in projections(n) {
                for stats in [Statistics::Fermion, Statistics::Boson] {
                    for coupling in [Coupling::Low, Coupling::High] {
                        let psi = assemble_state(n, coupling, stats, &orbs, m).unwrap();
                        assert!((psi.norm_sqr() - 1.0).abs() < 1e-13);
                        let direct: f64 = psi.expand().values().map(|a| a.norm_sqr()).sum();
                        assert!((direct - 1.0).abs() < 1e-13);
                    }
                }
            }
        }
    }
}

#[test]
fn exchange_symmetry_of_full_states() {
    for n in [3, 4] {
        for orbs in orbitals_for(n) {
            for m in projections(n) {
                for stats in [Statistics::Fermion, Statistics::Boson] {
                    let sign = if stats == Statistics::Fermion {
                        -1.0
                    } else {
                        1.0
                    };
                    for coupling in [Coupling::Low, Coupling::High] {
                        let psi = assemble_state(n, coupling, stats, &orbs, m).unwrap();
                        for a in 0..n {
                            for b in a + 1..n {
                                let t = Permutation::transposition(n, a, b);
                                let moved = psi.permuted(&t).unwrap();
                                let overlap = inner_product(&psi, &moved).unwrap();
                                assert!(
                                    (overlap - c(sign)).norm() < 1e-12,
                                    "n={n} {stats} {coupling} ({a}{b}): {overlap}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn branches_orthogonal_for_distinct_orbitals() {
    for n in [3, 4] {
        let orbs = orbitals_for(n).pop().unwrap();
        for m in projections(n) {
            for stats in [Statistics::Fermion, Statistics::Boson] {
                let a = assemble_state(n, Coupling::Low, stats, &orbs, m).unwrap();
                let b = assemble_state(n, Coupling::High, stats, &orbs, m).unwrap();
                let o = inner_product(&a, &b).unwrap();
                assert!(o.norm() < 1e-12, "n={n} {stats} m={m}: {o}");
            }
        }
    }
}

#[test]
fn ground_assignment_branches_coincide() {
    // With a doubly occupied orbital both couplings reach the same single state.
    for n in [3, 4] {
        let orbs = ground_assignment(n).unwrap();
        for stats in [Statistics::Fermion, Statistics::Boson] {
            let m = projections(n)[0];
            let a = assemble_state(n, Coupling::Low, stats, &orbs, m).unwrap();
            let b = assemble_state(n, Coupling::High, stats, &orbs, m).unwrap();
            let o = inner_product(&a, &b).unwrap();
            assert!((o.norm() - 1.0).abs() < 1e-12, "n={n} {stats}: {o}");
        }
    }
}

#[test]
fn vanishing_assignment_is_reported() {
    let r = assemble_state(
        3,
        Coupling::Low,
        Statistics::Fermion,
        &[O::G, O::E, O::G],
        HalfInt::HALF,
    );
    assert_eq!(r.unwrap_err(), WavefunctionError::VanishingRepresentation);
    let r = assemble_state(
        4,
        Coupling::High,
        Statistics::Boson,
        &[O::G, O::E, O::G, O::E],
        HalfInt::ZERO,
    );
    assert_eq!(r.unwrap_err(), WavefunctionError::VanishingRepresentation);
}

#[test]
fn invalid_requests() {
    let g = ground_assignment(3).unwrap();
    assert!(assemble_state(5, Coupling::Low, Statistics::Fermion, &g, HalfInt::HALF).is_err());
    assert!(assemble_state(3, Coupling::Low, Statistics::Fermion, &g, HalfInt::ZERO).is_err());
    let g4 = ground_assignment(4).unwrap();
    assert!(assemble_state(4, Coupling::Low, Statistics::Fermion, &g4, HalfInt::HALF).is_err());
    assert!(assemble_state(4, Coupling::Low, Statistics::Fermion, &g, HalfInt::ZERO).is_err());
}

#[test]
fn boson_states_swap_position_partners() {
    let orbs = DISTINCT3;
    let psi = assemble_state(3, Coupling::Low, Statistics::Boson, &orbs, HalfInt::HALF).unwrap();
    let high_positions = position_family(3, Coupling::High, &orbs).unwrap();
    let spins = spin_family(3, Coupling::Low, HalfInt::HALF).unwrap();
    for (i, (chi, phi)) in psi.pairs().iter().enumerate() {
        assert_eq!(chi, &spins[i]);
        let ratio = position_inner_product(&high_positions[i], phi).unwrap()
            / position_inner_product(&high_positions[i], &high_positions[i]).unwrap();
        let rescaled = high_positions[i].scale(ratio);
        assert!(rescaled.max_abs_diff(phi) < 1e-14);
    }
}

fn exact(r: (i128, i128)) -> Coeff {
    Coeff::from(Rational::new(r.0, r.1))
}

#[test]
fn spin_trace_prefactors_emerge() {
    let three_halves = exact((3, 2));
    let minus_root3_over_2 = -Coeff::from(Surd::sqrt_of(Rational::new(3, 4)));
    for n in [3, 4] {
        for orbs in orbitals_for(n) {
            for stats in [Statistics::Fermion, Statistics::Boson] {
                let m = projections(n)[0];
                let a = assemble_state(n, Coupling::Low, stats, &orbs, m).unwrap();
                let b = assemble_state(n, Coupling::High, stats, &orbs, m).unwrap();
                let tr = spin_trace(&a, &b).unwrap();
                assert_eq!(tr.prefactor_a, three_halves);
                assert_eq!(tr.prefactor_b, three_halves);
                assert_eq!(tr.interference_prefactor, minus_root3_over_2);
                for i in 0..3 {
                    assert!(tr.gram_cross[i][i].is_zero());
                    assert_eq!(tr.gram_cross[i][(i + 1) % 3], minus_root3_over_2);
                    assert_eq!(tr.gram_cross[i][(i + 2) % 3], -minus_root3_over_2);
                }
            }
        }
    }
}

#[test]
fn traced_densities_have_cyclic_structure() {
    for n in [3, 4] {
        for orbs in orbitals_for(n) {
            let m = projections(n)[0];
            let a = assemble_state(n, Coupling::Low, Statistics::Fermion, &orbs, m).unwrap();
            let b = assemble_state(n, Coupling::High, Statistics::Fermion, &orbs, m).unwrap();
            let tr = spin_trace(&a, &b).unwrap();
            let phi0: Vec<_> = a.pairs().iter().map(|p| p.1.clone()).collect();
            let phi1: Vec<_> = b.pairs().iter().map(|p| p.1.clone()).collect();
            let zero = ReducedDensity::zero((0..n).collect());

            let mut same = zero.clone();
            for p in &phi0 {
                same = same.add(&ReducedDensity::outer(p, p).unwrap()).unwrap();
            }
            let pref = tr.prefactor_a.to_f64();
            assert!(tr.rho_a.max_abs_diff(&same.scale(c(pref))) < 1e-13);

            let mut cross = zero.clone();
            for i in 0..3 {
                let next = ReducedDensity::outer(&phi0[i], &phi1[(i + 1) % 3]).unwrap();
                let prev = ReducedDensity::outer(&phi0[i], &phi1[(i + 2) % 3]).unwrap();
                cross = cross.add(&next).unwrap().add(&prev.scale(c(-1.0))).unwrap();
            }
            let ip = tr.interference_prefactor.to_f64();
            assert!(tr.rho_int.max_abs_diff(&cross.scale(c(ip))) < 1e-13);
        }
    }
}

#[test]
fn boson_interference_is_adjoint_of_fermion_interference() {
    for n in [3, 4] {
        for orbs in orbitals_for(n) {
            let m = projections(n)[0];
            let trace_for = |s| {
                let a = assemble_state(n, Coupling::Low, s, &orbs, m).unwrap();
                let b = assemble_state(n, Coupling::High, s, &orbs, m).unwrap();
                spin_trace(&a, &b).unwrap()
            };
            let f = trace_for(Statistics::Fermion);
            let b = trace_for(Statistics::Boson);
            assert!(b.rho_int.max_abs_diff(&f.rho_int.adjoint()) < 1e-13);
            assert!(b.rho_a.max_abs_diff(&f.rho_b) < 1e-13);
            assert!(b.rho_b.max_abs_diff(&f.rho_a) < 1e-13);
        }
    }
}

#[test]
fn full_density_has_unit_trace_and_is_hermitian() {
    for n in [3, 4] {
        for orbs in orbitals_for(n) {
            let m = projections(n)[0];
            let a = assemble_state(n, Coupling::Low, Statistics::Fermion, &orbs, m).unwrap();
            let b = assemble_state(n, Coupling::High, Statistics::Fermion, &orbs, m).unwrap();
            let tr = spin_trace(&a, &b).unwrap();
            assert!((tr.rho_a.trace() - c(1.0)).norm() < 1e-13);
            assert!((tr.rho_b.trace() - c(1.0)).norm() < 1e-13);
            assert!(tr.rho_a.is_hermitian(1e-14));
            let full = tr
                .combine(
                    Complex64::from_polar(0.6, 0.3),
                    Complex64::from_polar(0.8, -1.1),
                )
                .unwrap();
            assert!(full.is_hermitian(1e-14));
        }
    }
}

// Pair kernels written out from the printed two-coordinate ground-state densities.
fn printed_pair_kernel(n: usize) -> ReducedDensity {
    let third = 1.0 / 3.0;
    let sixth = 1.0 / 6.0;
    let mut k = ReducedDensity::zero(vec![0, 1]);
    let mut put = |bra: [OrbitalLabel; 2], ket: [OrbitalLabel; 2], v: f64| {
        k.push((bra.to_vec(), ket.to_vec()), c(v))
    };
    if n == 3 {
        put([O::G, O::G], [O::G, O::G], third);
    } else {
        put([O::G, O::G], [O::G, O::G], sixth);
        put([O::E, O::E], [O::E, O::E], sixth);
    }
    put([O::G, O::E], [O::G, O::E], third);
    put([O::E, O::G], [O::E, O::G], third);
    // −(1/3) φgφe(r1) φgφe(r2), split over the two off-diagonal kernel entries
    put([O::G, O::E], [O::E, O::G], -sixth);
    put([O::E, O::G], [O::G, O::E], -sixth);
    k
}

#[test]
fn ground_pair_kernels_match_printed_expressions() {
    for n in [3, 4] {
        let orbs = ground_assignment(n).unwrap();
        let want = printed_pair_kernel(n);
        for stats in [Statistics::Fermion, Statistics::Boson] {
            for m in projections(n) {
                for coupling in [Coupling::Low, Coupling::High] {
                    let psi = assemble_state(n, coupling, stats, &orbs, m).unwrap();
                    let full = spin_traced_kernel(&psi, &psi).unwrap();
                    let pair = marginalize(&full, &[0, 1]).unwrap();
                    assert!(
                        pair.max_abs_diff(&want) < 1e-14,
                        "n={n} {stats} {coupling}: {pair:?}"
                    );
                    let other = marginalize(&full, &[1, n - 1]).unwrap();
                    assert_eq!(other.len(), want.len());
                }
            }
        }
    }
}

#[test]
fn ground_interference_kernel_is_not_empty() {
    // Both branches describe the same state here, so their cross density is ±ρ_A.
    for n in [3, 4] {
        let orbs = ground_assignment(n).unwrap();
        let m = projections(n)[0];
        let a = assemble_state(n, Coupling::Low, Statistics::Fermion, &orbs, m).unwrap();
        let b = assemble_state(n, Coupling::High, Statistics::Fermion, &orbs, m).unwrap();
        let tr = spin_trace(&a, &b).unwrap();
        assert!(!tr.rho_int.is_empty());
        let plus = tr.rho_int.max_abs_diff(&tr.rho_a);
        let minus = tr.rho_int.max_abs_diff(&tr.rho_a.scale(c(-1.0)));
        assert!(plus.min(minus) < 1e-13);
    }
}

#[test]
fn single_particle_marginal_follows_occupations() {
    for (n, g, e) in [(3, 2.0 / 3.0, 1.0 / 3.0), (4, 0.5, 0.5)] {
        let orbs = ground_assignment(n).unwrap();
        let psi = assemble_state(
            n,
            Coupling::Low,
            Statistics::Fermion,
            &orbs,
            projections(n)[0],
        )
        .unwrap();
        let one = marginalize(&spin_traced_kernel(&psi, &psi).unwrap(), &[2]).unwrap();
        assert!((one.coefficient(&[O::G], &[O::G]) - c(g)).norm() < 1e-14);
        assert!((one.coefficient(&[O::E], &[O::E]) - c(e)).norm() < 1e-14);
        assert_eq!(one.len(), 2);
    }
}
