//! Minimal-spin three- and four-particle states `Σ_i χ_i ⊗ Φ_i` and their spin trace.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::position::{
    permute_arguments, position_inner_product, project_out_symmetric_sum, OrbitalLabel,
    PositionWavefunction,
};
use super::reduced::ReducedDensity;
use super::WavefunctionError;
use crate::exact::Coeff;
use crate::fock::Statistics;
use crate::spin::{family_3, family_4, spin_overlap, HalfInt, SpinBasisVector, SpinState};
use crate::symmetric::{
    apply_symmetrizer, build_symmetrizer, Permutation, SymmetrizerOrder, Tableau, YoungDiagram,
};

/// Squared norms below this are treated as a vanishing position part.
pub const VANISHING_NORM_SQR: f64 = 1e-24;

/// Intermediate pair spin: 0 (low) or 1 (high).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coupling {
    Low,
    High,
}

impl Coupling {
    pub fn pair_spin(&self) -> u8 {
        match self {
            Coupling::Low => 0,
            Coupling::High => 1,
        }
    }

    pub fn other(&self) -> Coupling {
        match self {
            Coupling::Low => Coupling::High,
            Coupling::High => Coupling::Low,
        }
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Low => write!(f, "low"),
            Coupling::High => write!(f, "high"),
        }
    }
}

/// The Young tableau, operator order and overall sign that generate the
/// position partner of a coupled spin family.
///
/// Cells hold coordinates; the monomial is `φ_I(r1) φ_II(r2) φ_III(r3) [φ_IV(r4)]`.
pub fn position_template(
    n: usize,
    coupling: Coupling,
) -> Result<(Tableau, SymmetrizerOrder, f64), WavefunctionError> {
    let (partition, rows, scale) = match n {
        3 => (vec![2, 1], vec![vec![2, 1], vec![0]], -1.0),
        4 => (vec![2, 2], vec![vec![3, 2], vec![1, 0]], 1.0),
        _ => return Err(WavefunctionError::UnsupportedCount(n)),
    };
    let diagram = YoungDiagram::new(partition).expect("fixed partition");
    let tableau = Tableau::new(diagram, rows).expect("fixed filling");
    Ok(match coupling {
        Coupling::Low => (tableau, SymmetrizerOrder::ColumnsFirst, scale),
        Coupling::High => (tableau.transpose(), SymmetrizerOrder::RowsFirst, scale),
    })
}

/// Coordinate relabellings taking the first family member to the others.
pub fn family_relabellings(n: usize) -> Result<[Permutation; 3], WavefunctionError> {
    let images: [Vec<usize>; 3] = match n {
        3 => [vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        4 => [vec![0, 1, 2, 3], vec![1, 2, 0, 3], vec![2, 0, 1, 3]],
        _ => return Err(WavefunctionError::UnsupportedCount(n)),
    };
    Ok(images.map(|i| Permutation::from_image(i).expect("valid")))
}

/// Raw symmetrizer output for the three members, before any projection.
pub fn raw_position_family(
    n: usize,
    coupling: Coupling,
    orbitals: &[OrbitalLabel],
) -> Result<[PositionWavefunction; 3], WavefunctionError> {
    if orbitals.len() != n {
        return Err(WavefunctionError::SizeMismatch(n, orbitals.len()));
    }
    let (tableau, order, scale) = position_template(n, coupling)?;
    let sym = build_symmetrizer(&tableau, order);
    let base = apply_symmetrizer(&sym, &PositionWavefunction::monomial(orbitals))
        .map_err(|e| WavefunctionError::Symmetrizer(e.to_string()))?
        .scale(Complex64::new(scale, 0.0));
    let [p0, p1, p2] = family_relabellings(n)?;
    Ok([
        permute_arguments(&base, &p0)?,
        permute_arguments(&base, &p1)?,
        permute_arguments(&base, &p2)?,
    ])
}

/// Family with its symmetric component removed (a no-op when it already sums to zero).
pub fn position_family(
    n: usize,
    coupling: Coupling,
    orbitals: &[OrbitalLabel],
) -> Result<[PositionWavefunction; 3], WavefunctionError> {
    let raw = raw_position_family(n, coupling, orbitals)?;
    let cycle = &family_relabellings(n)?[1];
    project_out_symmetric_sum(&raw, cycle)
}

pub fn spin_family(
    n: usize,
    coupling: Coupling,
    m: HalfInt,
) -> Result<[SpinState; 3], WavefunctionError> {
    let s = coupling.pair_spin();
    let fam = match n {
        3 => family_3(s, m),
        4 => {
            if m != HalfInt::ZERO {
                return Err(WavefunctionError::InvalidProjection(m));
            }
            family_4(s)
        }
        _ => return Err(WavefunctionError::UnsupportedCount(n)),
    };
    fam.map_err(|_| WavefunctionError::InvalidProjection(m))
}

type ExpandedKey = (SpinBasisVector, Vec<OrbitalLabel>);

/// `Σ_i χ_i ⊗ Φ_i`, normalized, with the spin family fixed by `coupling`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPositionState {
    statistics: Statistics,
    coupling: Coupling,
    m: HalfInt,
    pairs: Vec<(SpinState, PositionWavefunction)>,
}

impl SpinPositionState {
    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    pub fn projection(&self) -> HalfInt {
        self.m
    }

    pub fn particle_count(&self) -> usize {
        self.pairs[0].1.particle_count()
    }

    pub fn pairs(&self) -> &[(SpinState, PositionWavefunction)] {
        &self.pairs
    }

    /// Flattened amplitudes over (spin basis vector, orbital assignment).
    pub fn expand(&self) -> BTreeMap<ExpandedKey, Complex64> {
        let mut out: BTreeMap<ExpandedKey, Complex64> = BTreeMap::new();
        for (chi, phi) in &self.pairs {
            for (v, c) in chi.terms() {
                let cs = c.to_f64();
                for (t, a) in phi.terms() {
                    *out.entry((*v, t.clone())).or_default() += a * cs;
                }
            }
        }
        out.retain(|_, a| a.norm() > super::position::TERM_EPS);
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        inner_product(self, self).map(|c| c.re).unwrap_or(f64::NAN)
    }

    /// The same permutation applied to spin labels and position arguments.
    pub fn permuted(&self, p: &Permutation) -> Result<SpinPositionState, WavefunctionError> {
        let pairs = self
            .pairs
            .iter()
            .map(|(chi, phi)| Ok((chi.permuted(p.image()), permute_arguments(phi, p)?)))
            .collect::<Result<Vec<_>, WavefunctionError>>()?;
        Ok(SpinPositionState {
            pairs,
            ..self.clone()
        })
    }

    fn scaled(&self, f: Complex64) -> SpinPositionState {
        let pairs = self
            .pairs
            .iter()
            .map(|(c, p)| (c.clone(), p.scale(f)))
            .collect();
        SpinPositionState {
            pairs,
            ..self.clone()
        }
    }
}

/// Largest amplitude difference between two expanded states.
pub fn max_state_diff(a: &SpinPositionState, b: &SpinPositionState) -> f64 {
    let ea = a.expand();
    let eb = b.expand();
    let mut worst: f64 = 0.0;
    for (k, x) in &ea {
        worst = worst.max((x - eb.get(k).copied().unwrap_or_default()).norm());
    }
    for (k, y) in &eb {
        if !ea.contains_key(k) {
            worst = worst.max(y.norm());
        }
    }
    worst
}

/// `⟨a|b⟩ = Σ_ij ⟨χ^a_i|χ^b_j⟩ ⟨Φ^a_i|Φ^b_j⟩`.
pub fn inner_product(
    a: &SpinPositionState,
    b: &SpinPositionState,
) -> Result<Complex64, WavefunctionError> {
    if a.statistics != b.statistics {
        return Err(WavefunctionError::StatisticsMismatch);
    }
    let mut acc = Complex64::default();
    for (ca, pa) in &a.pairs {
        for (cb, pb) in &b.pairs {
            let s = spin_overlap(ca, cb).map_err(|_| WavefunctionError::SizeMismatch(0, 0))?;
            if s.is_zero() {
                continue;
            }
            acc += position_inner_product(pa, pb)? * s.to_f64();
        }
    }
    Ok(acc)
}

/// Builds `Ψ = Σ_i χ_i ⊗ Φ_i` for `n ∈ {3, 4}`.
///
/// Fermions pair each spin family with the position family of the same
/// coupling. Bosons take the position family of the other coupling; the
/// high-coupling boson state carries an extra `−1` so that its interference
/// density with the low-coupling one is the complex conjugate of the
/// fermionic counterpart.
pub fn assemble_state(
    n: usize,
    coupling: Coupling,
    statistics: Statistics,
    orbitals: &[OrbitalLabel],
    m: HalfInt,
) -> Result<SpinPositionState, WavefunctionError> {
    let spins = spin_family(n, coupling, m)?;
    let position_coupling = match statistics {
        Statistics::Fermion => coupling,
        Statistics::Boson => coupling.other(),
    };
    let positions = position_family(n, position_coupling, orbitals)?;
    if positions.iter().all(|p| p.norm_sqr() <= VANISHING_NORM_SQR) {
        return Err(WavefunctionError::VanishingRepresentation);
    }
    let pairs: Vec<_> = spins.into_iter().zip(positions).collect();
    let raw = SpinPositionState {
        statistics,
        coupling,
        m,
        pairs,
    };
    let norm_sqr = raw.norm_sqr();
    if norm_sqr <= VANISHING_NORM_SQR {
        return Err(WavefunctionError::VanishingRepresentation);
    }
    let sign = if statistics == Statistics::Boson && coupling == Coupling::High {
        -1.0
    } else {
        1.0
    };
    Ok(raw.scaled(Complex64::new(sign / norm_sqr.sqrt(), 0.0)))
}

/// Default orbital filling: ground orbital doubly occupied, excited singly (n=3) or doubly (n=4).
pub fn ground_assignment(n: usize) -> Result<Vec<OrbitalLabel>, WavefunctionError> {
    match n {
        3 => Ok(vec![OrbitalLabel::G, OrbitalLabel::G, OrbitalLabel::E]),
        4 => Ok(vec![
            OrbitalLabel::G,
            OrbitalLabel::G,
            OrbitalLabel::E,
            OrbitalLabel::E,
        ]),
        _ => Err(WavefunctionError::UnsupportedCount(n)),
    }
}

/// `Σ_σ ket(σ, r) conj(bra(σ, r))` as a kernel over all coordinates.
pub fn spin_traced_kernel(
    ket: &SpinPositionState,
    bra: &SpinPositionState,
) -> Result<ReducedDensity, WavefunctionError> {
    if ket.statistics != bra.statistics {
        return Err(WavefunctionError::StatisticsMismatch);
    }
    let n = ket.particle_count();
    if n != bra.particle_count() {
        return Err(WavefunctionError::SizeMismatch(n, bra.particle_count()));
    }
    let ek = ket.expand();
    let eb = bra.expand();
    let mut by_spin: BTreeMap<SpinBasisVector, Vec<(&Vec<OrbitalLabel>, Complex64)>> =
        BTreeMap::new();
    for ((v, t), a) in &ek {
        by_spin.entry(*v).or_default().push((t, *a));
    }
    let mut out = ReducedDensity::zero((0..n).collect());
    for ((v, t), b) in &eb {
        if let Some(kets) = by_spin.get(v) {
            for (u, a) in kets {
                out.push(((*t).clone(), (*u).clone()), b.conj() * a);
            }
        }
    }
    Ok(out)
}

/// Spin-traced pieces of `C1 Ψ1 + C2 Ψ2`, with the overlap coefficients that generate them.
#[derive(Debug, Clone)]
pub struct SpinTrace {
    /// `Σ_σ |Ψ1|²`
    pub rho_a: ReducedDensity,
    /// `Σ_σ |Ψ2|²`
    pub rho_b: ReducedDensity,
    /// `Σ_σ Ψ1 Ψ2*`
    pub rho_int: ReducedDensity,
    /// `⟨χ_i|χ_i⟩ − ⟨χ_i|χ_{i+1}⟩` of the first spin family.
    pub prefactor_a: Coeff,
    /// Same for the second spin family.
    pub prefactor_b: Coeff,
    /// `⟨χ^1_i|χ^2_{i+1}⟩`, the cross-family overlap next to the diagonal.
    pub interference_prefactor: Coeff,
    /// Spin overlap matrices: first family, second family, cross.
    pub gram_a: [[Coeff; 3]; 3],
    pub gram_b: [[Coeff; 3]; 3],
    pub gram_cross: [[Coeff; 3]; 3],
}

impl SpinTrace {
    /// `|C1|²ρ_A + |C2|²ρ_B + C1 C2* ρ_int + c.c.`
    pub fn combine(
        &self,
        c1: Complex64,
        c2: Complex64,
    ) -> Result<ReducedDensity, WavefunctionError> {
        let x = c1 * c2.conj();
        self.rho_a
            .scale(Complex64::new(c1.norm_sqr(), 0.0))
            .add(&self.rho_b.scale(Complex64::new(c2.norm_sqr(), 0.0)))?
            .add(&self.rho_int.scale(x))?
            .add(&self.rho_int.adjoint().scale(x.conj()))
    }
}

fn gram(
    a: &[(SpinState, PositionWavefunction)],
    b: &[(SpinState, PositionWavefunction)],
) -> [[Coeff; 3]; 3] {
    let mut g = [[Coeff::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = spin_overlap(&a[i].0, &b[j].0).expect("same particle count");
        }
    }
    g
}

/// Traces out the spins of the two branches.
pub fn spin_trace(
    psi1: &SpinPositionState,
    psi2: &SpinPositionState,
) -> Result<SpinTrace, WavefunctionError> {
    if psi1.statistics != psi2.statistics {
        return Err(WavefunctionError::StatisticsMismatch);
    }
    if psi1.pairs.len() != 3 || psi2.pairs.len() != 3 {
        return Err(WavefunctionError::SizeMismatch(
            3,
            psi1.pairs.len().min(psi2.pairs.len()),
        ));
    }
    let gram_a = gram(&psi1.pairs, &psi1.pairs);
    let gram_b = gram(&psi2.pairs, &psi2.pairs);
    let gram_cross = gram(&psi1.pairs, &psi2.pairs);
    Ok(SpinTrace {
        rho_a: spin_traced_kernel(psi1, psi1)?,
        rho_b: spin_traced_kernel(psi2, psi2)?,
        rho_int: spin_traced_kernel(psi1, psi2)?,
        prefactor_a: gram_a[0][0] - gram_a[0][1],
        prefactor_b: gram_b[0][0] - gram_b[0][1],
        interference_prefactor: gram_cross[0][1],
        gram_a,
        gram_b,
        gram_cross,
    })
}
