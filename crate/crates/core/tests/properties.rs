use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use matterwave::cli::ExperimentConfig;
use matterwave::density::{antibunching_check, GridSpec, PairDensity};
use matterwave::exact::Coeff;
use matterwave::fock::{
    apply_mode_transform, beamsplitter, BeamsplitterConvention, Mode, ModeTransform,
    OccupationState, StateVector, Statistics, MODE_COUNT,
};
use matterwave::orbitals::{overlap, rectangle_mos, triangle_mos, SiteOrbital};
use matterwave::spin::{clebsch_gordan, wigner6j, wigner9j, HalfInt};
use matterwave::symmetric::{
    all_permutations, apply_symmetrizer, build_symmetrizer, Permutation, SymmetrizerOrder, Tableau,
    YoungDiagram,
};
use matterwave::wavefunction::{
    assemble_state, evaluate_density, marginalize, spin_traced_kernel, Coupling, OrbitalLabel,
    Point2, PositionWavefunction,
};

fn unitary_block(theta: f64, alpha: f64, beta: f64, gamma: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let e = |x: f64| Complex64::from_polar(1.0, x);
    [
        [e(alpha) * c, e(beta) * s],
        [-e(gamma - beta) * s, e(gamma - alpha) * c],
    ]
}

fn angle() -> impl Strategy<Value = f64> {
    -PI..PI
}

fn statistics() -> impl Strategy<Value = Statistics> {
    prop_oneof![Just(Statistics::Boson), Just(Statistics::Fermion)]
}

/// Up to three particles spread over the four modes, with random amplitudes.
fn small_state(stats: Statistics) -> impl Strategy<Value = StateVector> {
    let max = if stats == Statistics::Fermion {
        1u8
    } else {
        2u8
    };
    prop::collection::vec(
        (prop::array::uniform4(0..=max), -1.0f64..1.0, -1.0f64..1.0),
        1..5,
    )
    .prop_map(move |terms| {
        let mut v = StateVector::zero(stats);
        for (occ, re, im) in terms {
            let basis = StateVector::basis(stats, OccupationState::from_occupancy(occ));
            v = v.add(&basis.scale(Complex64::new(re, im))).unwrap();
        }
        v
    })
}

proptest! {
    #[test]
    fn random_site_blocks_are_unitary(t in angle(), a in angle(), b in angle(), g in angle()) {
        let u = ModeTransform::from_site_block(unitary_block(t, a, b, g)).unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn composition_matches_sequential_application(
        stats in statistics(),
        t1 in angle(), t2 in angle(),
        a in angle(), b in angle(), g in angle(),
        state_seed in any::<u64>(),
    ) {
        let first = beamsplitter(t1, BeamsplitterConvention::Atomic);
        let second = ModeTransform::from_site_block(unitary_block(t2, a, b, g)).unwrap();
        let creators: &[Mode] = &[Mode::from_index((state_seed % 4) as usize), Mode::from_index(((state_seed / 4) % 4) as usize)];
        let input = StateVector::from_creators(stats, &[(Complex64::new(1.0, 0.0), creators)]);
        let stepwise = apply_mode_transform(&apply_mode_transform(&input, &first), &second);
        let combined = apply_mode_transform(&input, &first.then(&second));
        prop_assert!(stepwise.max_abs_diff(&combined) < 1e-12);
    }

    #[test]
    fn transforms_preserve_norm(state in statistics().prop_flat_map(small_state), t in angle(), a in angle(), b in angle(), g in angle()) {
        let u = ModeTransform::from_site_block(unitary_block(t, a, b, g)).unwrap();
        let out = apply_mode_transform(&state, &u);
        prop_assert!((out.norm_sqr() - state.norm_sqr()).abs() < 1e-12 * state.norm_sqr().max(1.0));
    }

    #[test]
    fn canonical_relations(state in statistics().prop_flat_map(small_state), i in 0..MODE_COUNT, j in 0..MODE_COUNT) {
        let (mi, mj) = (Mode::from_index(i), Mode::from_index(j));
        let sign = if state.statistics() == Statistics::Fermion { 1.0 } else { -1.0 };
        // a_i a†_j ± a†_j a_i = δ_ij
        let lhs = state.create(mj).annihilate(mi).add(&state.annihilate(mi).create(mj).scale(Complex64::new(sign, 0.0))).unwrap();
        let rhs = if i == j { state.clone() } else { StateVector::zero(state.statistics()) };
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        if state.statistics() == Statistics::Fermion {
            let cc = state.create(mi).create(mj).add(&state.create(mj).create(mi)).unwrap();
            prop_assert!(cc.max_abs_diff(&StateVector::zero(Statistics::Fermion)) < 1e-12);
        }
    }
}

fn half(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clebsch_gordan_rows_are_orthonormal(tj1 in 0i32..=3, tj2 in 0i32..=3, tm in -6i32..=6) {
        // Σ_{m1} ⟨j1 m1 j2 M−m1|J M⟩⟨j1 m1 j2 M−m1|J' M⟩ = δ_JJ'
        prop_assume!((tj1 + tj2 - tm) % 2 == 0 && tm.abs() <= tj1 + tj2);
        let totals: Vec<i32> = (((tj1 - tj2).abs())..=(tj1 + tj2)).step_by(2).filter(|tj| tm.abs() <= *tj).collect();
        for &ja in &totals {
            for &jb in &totals {
                let mut acc = Coeff::zero();
                let mut tm1 = -tj1;
                while tm1 <= tj1 {
                    let tm2 = tm - tm1;
                    if tm2.abs() <= tj2 {
                        let x = clebsch_gordan(half(tj1), half(tm1), half(tj2), half(tm2), half(ja), half(tm));
                        let y = clebsch_gordan(half(tj1), half(tm1), half(tj2), half(tm2), half(jb), half(tm));
                        acc = acc + x * y;
                    }
                    tm1 += 2;
                }
                let want = if ja == jb { 1.0 } else { 0.0 };
                prop_assert!((acc.to_f64() - want).abs() < 1e-13, "{} {} {} {}", tj1, tj2, ja, jb);
            }
        }
    }

    #[test]
    fn six_j_column_and_row_symmetries(t in prop::array::uniform6(0i32..=3)) {
        let [a, b, c, d, e, f] = t.map(half);
        let base = wigner6j(a, b, c, d, e, f);
        for (x, y) in [
            (wigner6j(b, a, c, e, d, f), "swap columns 1 2"),
            (wigner6j(a, c, b, d, f, e), "swap columns 2 3"),
            (wigner6j(d, e, c, a, b, f), "swap upper and lower in columns 1 2"),
        ] {
            prop_assert!(x.equals(&base, 1e-13), "{}", y);
        }
    }

    #[test]
    fn nine_j_transpose_symmetry(t in prop::array::uniform9(0i32..=2)) {
        let m = [[t[0], t[1], t[2]], [t[3], t[4], t[5]], [t[6], t[7], t[8]]].map(|r| r.map(half));
        let transposed = [[m[0][0], m[1][0], m[2][0]], [m[0][1], m[1][1], m[2][1]], [m[0][2], m[1][2], m[2][2]]];
        prop_assert!(wigner9j(m).equals(&wigner9j(transposed), 1e-13));
        // swapping two rows multiplies by (−1)^{sum of all nine}
        let sum: i32 = t.iter().sum();
        let swapped = [m[1], m[0], m[2]];
        let sign = if (sum / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if sum % 2 == 0 {
            prop_assert!((wigner9j(swapped).to_f64() - sign * wigner9j(m).to_f64()).abs() < 1e-13);
        }
    }
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_image(v).unwrap())
}

proptest! {
    #[test]
    fn parity_is_a_homomorphism((p, q) in (2usize..=6).prop_flat_map(|n| (permutation(n), permutation(n)))) {
        prop_assert_eq!(p.compose(&q).sign(), p.sign() * q.sign());
        prop_assert_eq!(p.inverse().sign(), p.sign());
        prop_assert_eq!(p.compose(&p.inverse()), Permutation::identity(p.len()));
    }

    #[test]
    fn argument_permutations_compose((p, q) in (3usize..=4).prop_flat_map(|n| (permutation(n), permutation(n))), seed in prop::collection::vec(0u8..4, 4)) {
        let n = p.len();
        let labels: Vec<OrbitalLabel> = seed[..n].iter().map(|&k| OrbitalLabel(k)).collect();
        let f = PositionWavefunction::monomial(&labels);
        let pq = matterwave::wavefunction::permute_arguments(&f, &p.compose(&q)).unwrap();
        let seq = matterwave::wavefunction::permute_arguments(&matterwave::wavefunction::permute_arguments(&f, &q).unwrap(), &p).unwrap();
        prop_assert_eq!(pq, seq);
    }

    #[test]
    fn young_symmetrizers_are_essentially_idempotent(which in 0usize..2, shuffle in permutation(4), rows_first in any::<bool>()) {
        let (partition, hook): (Vec<usize>, i32) = if which == 0 { (vec![2, 1], 3) } else { (vec![2, 2], 12) };
        let n: usize = partition.iter().sum();
        let filling: Vec<usize> = shuffle.image().iter().copied().filter(|&k| k < n).collect();
        let rows: Vec<Vec<usize>> = vec![filling[..2].to_vec(), filling[2..].to_vec()];
        let tableau = Tableau::new(YoungDiagram::new(partition).unwrap(), rows).unwrap();
        let order = if rows_first { SymmetrizerOrder::RowsFirst } else { SymmetrizerOrder::ColumnsFirst };
        let y = build_symmetrizer(&tableau, order);
        let square = y.then_after(&y);
        let scaled: Vec<_> = y.terms().iter().map(|(p, c)| (p.clone(), c * hook)).collect();
        prop_assert_eq!(square.terms(), &scaled[..]);
        prop_assert!(all_permutations(n).unwrap().len() >= y.len());
    }
}

fn orbital_values(labels: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)),
        labels,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn traced_kernels_evaluate_real_and_non_negative(
        n in 3usize..=4,
        stats in statistics(),
        high in any::<bool>(),
        values in prop::collection::vec(orbital_values(4), 4),
    ) {
        let orbs: Vec<OrbitalLabel> = (0..n as u8).map(OrbitalLabel).collect();
        let m = if n == 3 { HalfInt::HALF } else { HalfInt::ZERO };
        let coupling = if high { Coupling::High } else { Coupling::Low };
        let psi = assemble_state(n, coupling, stats, &orbs, m).unwrap();
        let rho = spin_traced_kernel(&psi, &psi).unwrap();
        prop_assert!(rho.is_hermitian(1e-14));
        // Points carry their own orbital values, so the evaluator reads them by position.
        let points: Vec<Point2> = (0..n).map(|k| [k as f64, 0.0]).collect();
        let table = values.clone();
        let eval = move |l: OrbitalLabel, p: Point2| table.get(p[0] as usize).and_then(|row| row.get(l.0 as usize)).copied();
        let v = evaluate_density(&rho, &eval, &[points]).unwrap()[0];
        prop_assert!(v.im.abs() < 1e-12);
        prop_assert!(v.re > -1e-12);
    }

    #[test]
    fn marginalization_composes(n in 3usize..=4, stats in statistics()) {
        let orbs: Vec<OrbitalLabel> = (0..n as u8).map(OrbitalLabel).collect();
        let m = if n == 3 { HalfInt::HALF } else { HalfInt::ZERO };
        let psi = assemble_state(n, Coupling::Low, stats, &orbs, m).unwrap();
        let rho = spin_traced_kernel(&psi, &psi).unwrap();
        let two = marginalize(&rho, &[0, 1]).unwrap();
        let one_direct = marginalize(&rho, &[0]).unwrap();
        let one_nested = marginalize(&two, &[0]).unwrap();
        prop_assert!(one_direct.max_abs_diff(&one_nested) < 1e-15);
        prop_assert!((two.trace() - rho.trace()).norm() < 1e-13);
    }

    #[test]
    fn overlap_is_symmetric_bounded_and_monotone(d1 in 0.0f64..6.0, d2 in 0.0f64..6.0, angle in angle(), w in 0.5f64..2.0) {
        let dir = [angle.cos(), angle.sin()];
        let origin = SiteOrbital::new([0.3, -0.2], w).unwrap();
        let at = |d: f64| SiteOrbital::new([0.3 + d * dir[0], -0.2 + d * dir[1]], w).unwrap();
        let s1 = overlap(&origin, &at(d1)).unwrap();
        prop_assert_eq!(s1, overlap(&at(d1), &origin).unwrap());
        prop_assert!(s1 > 0.0 && s1 <= 1.0);
        if d1 < d2 - 1e-9 {
            prop_assert!(s1 > overlap(&origin, &at(d2)).unwrap());
        }
    }

    #[test]
    fn mo_sets_orthonormal_over_geometries(a in 0.8f64..4.0, h in 0.8f64..4.0) {
        prop_assert!(triangle_mos(a, h, 1.0).unwrap().gram_deviation() < 1e-12);
        prop_assert!(rectangle_mos(a, h, 1.0).unwrap().gram_deviation() < 1e-12);
    }

    #[test]
    fn ground_orbital_mirror_symmetry(a in 0.8f64..4.0, h in 0.8f64..4.0, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let t = triangle_mos(a, h, 1.0).unwrap();
        let g = &t.orbitals()[0];
        prop_assert!((g.evaluate([x, y]) - g.evaluate([-x, y])).norm() < 1e-14);
        let r = rectangle_mos(a, h, 1.0).unwrap();
        let g = &r.orbitals()[0];
        let v = g.evaluate([x, y]);
        for q in [[-x, y], [x, -y], [-x, -y]] {
            prop_assert!((g.evaluate(q) - v).norm() < 1e-14);
        }
    }

    #[test]
    fn pair_density_exchange_symmetric_and_positive(
        n in 3usize..=4,
        r in prop::array::uniform4(-4.0f64..4.0),
    ) {
        let mos = if n == 3 { triangle_mos(2.0, 2.5, 1.0) } else { rectangle_mos(2.0, 2.5, 1.0) }.unwrap();
        let pair = PairDensity::ground(n, Coupling::Low, Statistics::Fermion, mos).unwrap();
        let (r1, r2) = ([r[0], r[1]], [r[2], r[3]]);
        prop_assert!((pair.evaluate(r1, r2) - pair.evaluate(r2, r1)).abs() < 1e-15);
        prop_assert!(pair.evaluate(r1, r2) >= -1e-15);
        prop_assert!(pair.marginal(r1) >= -1e-15);
    }

    #[test]
    fn config_round_trips(
        theta in -10.0f64..10.0,
        a in 0.1f64..10.0,
        nx in 8usize..512,
        c1 in (0.0f64..1.0, angle()),
        seed in any::<u64>(),
        name in "[a-z][a-z0-9_]{0,12}",
    ) {
        let mut c = ExperimentConfig { theta, a, c1, seed, name, ..ExperimentConfig::default() };
        c.grid.nx = nx;
        prop_assert_eq!(ExperimentConfig::parse(&c.serialize()).unwrap(), c);
    }
}

#[test]
fn product_kernel_is_not_antibunched() {
    let spec = GridSpec::square(5.0, 32).unwrap();
    let rho = |p: Point2| (-(p[0] * p[0] + p[1] * p[1])).exp() / PI;
    let report = antibunching_check(|a, b| rho(a) * rho(b), rho, spec).unwrap();
    assert!(!report.antibunched());
    assert!((report.max_ratio - 1.0).abs() < 1e-12);
}

#[test]
fn symmetrizer_annihilates_fully_symmetric_input() {
    let tableau = Tableau::new(
        YoungDiagram::new(vec![2, 1]).unwrap(),
        vec![vec![0, 1], vec![2]],
    )
    .unwrap();
    let y = build_symmetrizer(&tableau, SymmetrizerOrder::RowsFirst);
    let g = OrbitalLabel::G;
    let out = apply_symmetrizer(&y, &PositionWavefunction::monomial(&[g, g, g])).unwrap();
    assert!(out.is_empty());
}
