//! Angular-momentum coupling for two to four spin-½ particles.
//!
//! Clebsch–Gordan coefficients and 6j symbols come from the Racah sum formulas
//! and are exact. Coupled states are expanded in the product basis with
//! Condon–Shortley phases.
//!
//! Pair orientation inside coupled states follows the cyclic order
//! `(2,3)`, `(3,1)`, `(1,2)` for three particles and the written order of the
//! pairings for four. With this orientation the three members of each
//! coupled family sum to zero.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{Coeff, Rational, Surd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpinError {
    #[error("particle index {0} out of range for {1} particles")]
    InvalidParticle(usize, usize),
    #[error("pair spin must be 0 or 1, got {0}")]
    InvalidPairSpin(u8),
    #[error("projection {0} not allowed here")]
    InvalidProjection(HalfInt),
    #[error("particle count mismatch: {0} vs {1}")]
    ParticleCountMismatch(usize, usize),
    #[error("particle count {0} unsupported (2..=4)")]
    UnsupportedCount(usize),
    #[error("unknown pairing label {0:?}")]
    UnknownPairing(String),
}

/// `twice / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const MINUS_HALF: HalfInt = HalfInt { twice: -1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i32) -> Self {
        Self { twice }
    }

    pub const fn integer(n: i32) -> Self {
        Self { twice: 2 * n }
    }

    pub fn twice(&self) -> i32 {
        self.twice
    }

    pub fn to_f64(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(&self) -> bool {
        self.twice % 2 == 0
    }

    /// `|m| ≤ j` and `j − m` integral.
    pub fn is_valid_projection_of(&self, j: HalfInt) -> bool {
        j.twice >= 0 && self.twice.abs() <= j.twice && (j.twice - self.twice) % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

fn factorial(n: i32) -> i128 {
    debug_assert!(n >= 0);
    (1..=n as i128).product()
}

fn fact_ratio(num: &[i32], den: &[i32]) -> Rational {
    let n: i128 = num.iter().map(|&k| factorial(k)).product();
    let d: i128 = den.iter().map(|&k| factorial(k)).product();
    Rational::new(n, d)
}

fn triangle_ok(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.twice, b.twice, c.twice);
    a >= 0 && b >= 0 && c >= 0 && c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
}

/// Squared triangle coefficient `(a+b−c)!(a−b+c)!(−a+b+c)!/(a+b+c+1)!`.
fn delta_sq(a: HalfInt, b: HalfInt, c: HalfInt) -> Rational {
    let (a, b, c) = (a.twice, b.twice, c.twice);
    fact_ratio(
        &[(a + b - c) / 2, (a - b + c) / 2, (-a + b + c) / 2],
        &[(a + b + c) / 2 + 1],
    )
}

fn sign(k: i32) -> i128 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `⟨j1 m1; j2 m2 | J M⟩`, Condon–Shortley. Zero outside the selection rules.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Coeff {
    if !triangle_ok(j1, j2, j)
        || !m1.is_valid_projection_of(j1)
        || !m2.is_valid_projection_of(j2)
        || !m.is_valid_projection_of(j)
        || m1.twice + m2.twice != m.twice
    {
        return Coeff::zero();
    }
    let h = |x: i32| x / 2;
    let (tj1, tm1, tj2, tm2, tj, tm) = (j1.twice, m1.twice, j2.twice, m2.twice, j.twice, m.twice);
    let pre = Rational::from_integer((tj + 1) as i128)
        * fact_ratio(
            &[h(tj + tj1 - tj2), h(tj - tj1 + tj2), h(tj1 + tj2 - tj)],
            &[h(tj1 + tj2 + tj) + 1],
        )
        * fact_ratio(
            &[
                h(tj + tm),
                h(tj - tm),
                h(tj1 - tm1),
                h(tj1 + tm1),
                h(tj2 - tm2),
                h(tj2 + tm2),
            ],
            &[],
        );
    let mut sum = Rational::zero();
    for k in 0..=h(tj1 + tj2 - tj) {
        let den = [
            k,
            h(tj1 + tj2 - tj) - k,
            h(tj1 - tm1) - k,
            h(tj2 + tm2) - k,
            h(tj - tj2 + tm1) + k,
            h(tj - tj1 - tm2) + k,
        ];
        if den.iter().any(|&d| d < 0) {
            continue;
        }
        sum += Rational::from_integer(sign(k)) / fact_ratio(&den, &[]);
    }
    Coeff::Exact(Surd::sqrt_of(pre) * Surd::rational(sum))
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}` by the Racah sum. Zero on any violated triad.
pub fn wigner6j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j4: HalfInt,
    j5: HalfInt,
    j6: HalfInt,
) -> Coeff {
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triads.iter().any(|&(a, b, c)| !triangle_ok(a, b, c)) {
        return Coeff::zero();
    }
    let pre = triads
        .iter()
        .fold(Rational::one(), |acc, &(a, b, c)| acc * delta_sq(a, b, c));
    let sums: Vec<i32> = triads
        .iter()
        .map(|&(a, b, c)| (a.twice + b.twice + c.twice) / 2)
        .collect();
    let caps = [
        (j1.twice + j2.twice + j4.twice + j5.twice) / 2,
        (j2.twice + j3.twice + j5.twice + j6.twice) / 2,
        (j3.twice + j1.twice + j6.twice + j4.twice) / 2,
    ];
    let lo = *sums.iter().max().unwrap();
    let hi = *caps.iter().min().unwrap();
    let mut sum = Rational::zero();
    for t in lo..=hi {
        let mut den: Vec<i32> = sums.iter().map(|&s| t - s).collect();
        den.extend(caps.iter().map(|&c| c - t));
        sum += Rational::from_integer(sign(t) * factorial(t + 1)) / fact_ratio(&den, &[]);
    }
    Coeff::Exact(Surd::sqrt_of(pre) * Surd::rational(sum))
}

/// Wigner 9j symbol, rows `(a b c)(d e f)(g h j)`, as a sum over 6j products.
pub fn wigner9j(rows: [[HalfInt; 3]; 3]) -> Coeff {
    let [[a, b, c], [d, e, f], [g, h, j]] = rows;
    for (x, y, z) in [
        (a, b, c),
        (d, e, f),
        (g, h, j),
        (a, d, g),
        (b, e, h),
        (c, f, j),
    ] {
        if !triangle_ok(x, y, z) {
            return Coeff::zero();
        }
    }
    let lo = [
        (a.twice - j.twice).abs(),
        (d.twice - h.twice).abs(),
        (b.twice - f.twice).abs(),
    ]
    .into_iter()
    .max()
    .unwrap();
    let hi = [a.twice + j.twice, d.twice + h.twice, b.twice + f.twice]
        .into_iter()
        .min()
        .unwrap();
    let mut acc = Coeff::zero();
    let mut tx = lo;
    while tx <= hi {
        let x = HalfInt::from_twice(tx);
        let weight = Coeff::from(Rational::from_integer(sign(tx) * (tx as i128 + 1)));
        let term = weight
            * wigner6j(a, b, c, f, j, x)
            * wigner6j(d, e, f, b, x, h)
            * wigner6j(g, h, j, x, a, d);
        acc = acc + term;
        tx += 2;
    }
    acc
}

/// Product-basis vector: bit `i` of `ups` set means particle `i` (0-based) is ↑.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinBasisVector {
    ups: u8,
    n: u8,
}

impl SpinBasisVector {
    pub fn new(projections: &[HalfInt]) -> Result<Self, SpinError> {
        if !(1..=4).contains(&projections.len()) {
            return Err(SpinError::UnsupportedCount(projections.len()));
        }
        let mut ups = 0u8;
        for (i, p) in projections.iter().enumerate() {
            match p.twice {
                1 => ups |= 1 << i,
                -1 => {}
                _ => return Err(SpinError::InvalidProjection(*p)),
            }
        }
        Ok(Self {
            ups,
            n: projections.len() as u8,
        })
    }

    pub fn from_mask(ups: u8, n: usize) -> Self {
        Self {
            ups: ups & ((1u8 << n) - 1),
            n: n as u8,
        }
    }

    pub fn mask(&self) -> u8 {
        self.ups
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_up(&self, particle: usize) -> bool {
        self.ups & (1 << particle) != 0
    }

    pub fn projections(&self) -> Vec<HalfInt> {
        (0..self.len())
            .map(|i| {
                if self.is_up(i) {
                    HalfInt::HALF
                } else {
                    HalfInt::MINUS_HALF
                }
            })
            .collect()
    }

    pub fn total_projection(&self) -> HalfInt {
        let ups = self.ups.count_ones() as i32;
        HalfInt::from_twice(2 * ups - self.n as i32)
    }

    /// Moves the spin of particle `s` to particle `perm[s]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut ups = 0u8;
        for (s, &target) in perm.iter().enumerate() {
            if self.is_up(s) {
                ups |= 1 << target;
            }
        }
        Self { ups, n: self.n }
    }
}

impl fmt::Display for SpinBasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len())
            .map(|i| if self.is_up(i) { '↑' } else { '↓' })
            .collect();
        write!(f, "|{s}⟩")
    }
}

/// Linear combination of product basis vectors of a fixed particle count.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    n: usize,
    terms: BTreeMap<SpinBasisVector, Coeff>,
}

impl SpinState {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(v: SpinBasisVector) -> Self {
        let mut s = Self::zero(v.len());
        s.terms.insert(v, Coeff::one());
        s
    }

    pub fn particle_count(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SpinBasisVector, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, v: &SpinBasisVector) -> Coeff {
        self.terms.get(v).copied().unwrap_or_else(Coeff::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient vanishes (exactly, or within `tol` for approximate ones).
    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_zero_within(tol))
    }

    pub fn all_exact(&self) -> bool {
        self.terms.values().all(Coeff::is_exact)
    }

    fn push(&mut self, v: SpinBasisVector, c: Coeff) {
        let entry = self.terms.entry(v).or_insert_with(Coeff::zero);
        *entry = *entry + c;
        if entry.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn add(&self, other: &SpinState) -> Result<SpinState, SpinError> {
        if self.n != other.n {
            return Err(SpinError::ParticleCountMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.push(*v, *c);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Coeff) -> SpinState {
        let mut out = SpinState::zero(self.n);
        for (v, c) in &self.terms {
            out.push(*v, *c * factor);
        }
        out
    }

    /// Relabels particles: the spin of particle `s` moves to `perm[s]`.
    pub fn permuted(&self, perm: &[usize]) -> SpinState {
        let mut out = SpinState::zero(self.n);
        for (v, c) in &self.terms {
            out.push(v.permuted(perm), *c);
        }
        out
    }

    /// Tensor product, `other`'s particles appended after `self`'s.
    fn tensor(&self, other: &SpinState) -> SpinState {
        let n = self.n + other.n;
        let mut out = SpinState::zero(n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let v = SpinBasisVector::from_mask(a.ups | (b.ups << self.n), n);
                out.push(v, *ca * *cb);
            }
        }
        out
    }

    pub fn to_f64_terms(&self) -> Vec<(SpinBasisVector, f64)> {
        self.terms.iter().map(|(v, c)| (*v, c.to_f64())).collect()
    }
}

impl fmt::Display for SpinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(v, c)| format!("({c}){v}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Product-basis dot product (all coefficients are real).
pub fn spin_overlap(a: &SpinState, b: &SpinState) -> Result<Coeff, SpinError> {
    if a.n != b.n {
        return Err(SpinError::ParticleCountMismatch(a.n, b.n));
    }
    let mut acc = Coeff::zero();
    for (v, ca) in &a.terms {
        if let Some(cb) = b.terms.get(v) {
            acc = acc + *ca * *cb;
        }
    }
    Ok(acc)
}

fn single(m: HalfInt) -> SpinState {
    SpinState::basis(SpinBasisVector::from_mask(u8::from(m.twice > 0), 1))
}

/// `|j1 j2; J M⟩` from two coupled subsystems of known `(j, m)` expansions.
fn couple(
    left: &dyn Fn(HalfInt) -> SpinState,
    jl: HalfInt,
    right: &dyn Fn(HalfInt) -> SpinState,
    jr: HalfInt,
    j: HalfInt,
    m: HalfInt,
    n: usize,
) -> SpinState {
    let mut out = SpinState::zero(n);
    let mut ml = -jl.twice;
    while ml <= jl.twice {
        let mr = m.twice - ml;
        let cg = clebsch_gordan(
            jl,
            HalfInt::from_twice(ml),
            jr,
            HalfInt::from_twice(mr),
            j,
            m,
        );
        if !cg.is_zero() {
            let part = left(HalfInt::from_twice(ml)).tensor(&right(HalfInt::from_twice(mr)));
            out = out.add(&part.scale(cg)).expect("same size");
        }
        ml += 2;
    }
    out
}

/// `|s μ⟩` of two spin-½ particles, particle order as given.
fn pair_state(s: HalfInt, mu: HalfInt) -> SpinState {
    couple(&single, HalfInt::HALF, &single, HalfInt::HALF, s, mu, 2)
}

/// Places the particles of a state built in slot order onto the given particle indices.
fn place(state: &SpinState, slots_to_particles: &[usize]) -> SpinState {
    state.permuted(slots_to_particles)
}

/// Pair (as 0-based particles) attached to each lone particle of three.
pub fn cyclic_pair(lone: usize) -> Result<(usize, usize), SpinError> {
    match lone {
        1 => Ok((1, 2)),
        2 => Ok((2, 0)),
        3 => Ok((0, 1)),
        _ => Err(SpinError::InvalidParticle(lone, 3)),
    }
}

/// `|s_i, s_jk; ½ M⟩` for three particles: the pair `(j,k)` coupled to spin
/// `s_pair`, then coupled with the lone particle `i` (1-based) to total spin ½.
pub fn coupled_state_3(lone: usize, s_pair: u8, m: HalfInt) -> Result<SpinState, SpinError> {
    let (j, k) = cyclic_pair(lone)?;
    if s_pair > 1 {
        return Err(SpinError::InvalidPairSpin(s_pair));
    }
    if m.twice.abs() != 1 {
        return Err(SpinError::InvalidProjection(m));
    }
    let sp = HalfInt::integer(s_pair as i32);
    let pair = move |mu: HalfInt| pair_state(sp, mu);
    let slot_state = couple(&pair, sp, &single, HalfInt::HALF, HalfInt::HALF, m, 3);
    Ok(place(&slot_state, &[j, k, lone - 1]))
}

/// The three ways of splitting four particles into two pairs, with fixed orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pairing {
    /// `(1,2)(3,4)`
    P12_34,
    /// `(2,3)(1,4)`
    P23_14,
    /// `(3,1)(2,4)`
    P31_24,
}

impl Pairing {
    pub const ALL: [Pairing; 3] = [Pairing::P12_34, Pairing::P23_14, Pairing::P31_24];

    /// 0-based `[i, j, k, l]` for pairs `(i,j)(k,l)`.
    pub fn particles(&self) -> [usize; 4] {
        match self {
            Pairing::P12_34 => [0, 1, 2, 3],
            Pairing::P23_14 => [1, 2, 0, 3],
            Pairing::P31_24 => [2, 0, 1, 3],
        }
    }

    pub fn parse(label: &str) -> Result<Self, SpinError> {
        match label.replace(' ', "").as_str() {
            "(12)(34)" | "12,34" => Ok(Pairing::P12_34),
            "(23)(14)" | "23,14" => Ok(Pairing::P23_14),
            "(31)(24)" | "31,24" => Ok(Pairing::P31_24),
            other => Err(SpinError::UnknownPairing(other.to_string())),
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pairing::P12_34 => "(12)(34)",
            Pairing::P23_14 => "(23)(14)",
            Pairing::P31_24 => "(31)(24)",
        };
        write!(f, "{s}")
    }
}

/// `|s_ij, s_kl; 0 0⟩` for four particles with both pairs at spin `s`.
pub fn coupled_state_4(pairing: Pairing, s: u8) -> Result<SpinState, SpinError> {
    if s > 1 {
        return Err(SpinError::InvalidPairSpin(s));
    }
    let sp = HalfInt::integer(s as i32);
    let pair = move |mu: HalfInt| pair_state(sp, mu);
    let slot_state = couple(&pair, sp, &pair, sp, HalfInt::ZERO, HalfInt::ZERO, 4);
    Ok(place(&slot_state, &pairing.particles()))
}

/// The three coupled states of one family, in cyclic order.
pub fn family_3(s_pair: u8, m: HalfInt) -> Result<[SpinState; 3], SpinError> {
    Ok([
        coupled_state_3(1, s_pair, m)?,
        coupled_state_3(2, s_pair, m)?,
        coupled_state_3(3, s_pair, m)?,
    ])
}

pub fn family_4(s: u8) -> Result<[SpinState; 3], SpinError> {
    Ok([
        coupled_state_4(Pairing::P12_34, s)?,
        coupled_state_4(Pairing::P23_14, s)?,
        coupled_state_4(Pairing::P31_24, s)?,
    ])
}
