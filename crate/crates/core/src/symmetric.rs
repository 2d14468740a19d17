//! Permutations of up to four objects, Young tableaux and Young symmetrizers.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::wavefunction::{permute_arguments, PositionWavefunction, WavefunctionError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetricError {
    #[error("permutation size {0} unsupported (2..=4)")]
    UnsupportedSize(usize),
    #[error("image {0:?} is not a bijection")]
    NotBijective(Vec<usize>),
    #[error("invalid partition {0:?}")]
    InvalidPartition(Vec<usize>),
    #[error("tableau does not fit its diagram or is not a bijective filling: {0}")]
    MalformedTableau(String),
    #[error(transparent)]
    Wavefunction(#[from] WavefunctionError),
}

/// A bijection of `{0, …, n−1}`, stored as its image.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self, SymmetricError> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || seen[i] {
                return Err(SymmetricError::NotBijective(image));
            }
            seen[i] = true;
        }
        Ok(Self { image })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Self { image }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other.image.iter().map(|&i| self.image[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (s, &t) in self.image.iter().enumerate() {
            image[t] = s;
        }
        Permutation { image }
    }

    /// `+1` for even, `−1` for odd.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.image.len()];
        let mut sign = 1;
        for start in 0..self.image.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.image[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Moves entry `s` of `items` to position `self(s)`.
    pub fn move_entries<T: Clone>(&self, items: &[T]) -> Vec<T> {
        let mut out = items.to_vec();
        for (s, item) in items.iter().enumerate() {
            out[self.image[s]] = item.clone();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations_of(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// All `n!` permutations, identity first.
pub fn all_permutations(n: usize) -> Result<Vec<Permutation>, SymmetricError> {
    if !(2..=4).contains(&n) {
        return Err(SymmetricError::UnsupportedSize(n));
    }
    let items: Vec<usize> = (0..n).collect();
    Ok(permutations_of(&items)
        .into_iter()
        .map(|image| Permutation { image })
        .collect())
}

/// Permutations that act only within `block`, fixing everything else.
fn block_group(n: usize, block: &[usize]) -> Vec<Permutation> {
    permutations_of(block)
        .into_iter()
        .map(|images| {
            let mut image: Vec<usize> = (0..n).collect();
            for (&from, &to) in block.iter().zip(&images) {
                image[from] = to;
            }
            Permutation { image }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct YoungDiagram {
    partition: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(partition: Vec<usize>) -> Result<Self, SymmetricError> {
        if partition.is_empty()
            || partition.contains(&0)
            || partition.windows(2).any(|w| w[0] < w[1])
        {
            return Err(SymmetricError::InvalidPartition(partition));
        }
        Ok(Self { partition })
    }

    pub fn partition(&self) -> &[usize] {
        &self.partition
    }

    pub fn size(&self) -> usize {
        self.partition.iter().sum()
    }

    pub fn transpose(&self) -> YoungDiagram {
        let cols = self.partition[0];
        let partition = (0..cols)
            .map(|c| self.partition.iter().filter(|&&r| r > c).count())
            .collect();
        YoungDiagram { partition }
    }
}

/// A bijective filling of a diagram with the coordinates `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    diagram: YoungDiagram,
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(diagram: YoungDiagram, rows: Vec<Vec<usize>>) -> Result<Self, SymmetricError> {
        let shape: Vec<usize> = rows.iter().map(Vec::len).collect();
        if shape != diagram.partition {
            return Err(SymmetricError::MalformedTableau(format!(
                "row lengths {shape:?} vs partition {:?}",
                diagram.partition
            )));
        }
        let n = diagram.size();
        let mut seen = vec![false; n];
        for &x in rows.iter().flatten() {
            if x >= n || seen[x] {
                return Err(SymmetricError::MalformedTableau(format!(
                    "entries {rows:?}"
                )));
            }
            seen[x] = true;
        }
        Ok(Self { diagram, rows })
    }

    pub fn diagram(&self) -> &YoungDiagram {
        &self.diagram
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        (0..self.diagram.partition[0])
            .map(|c| self.rows.iter().filter_map(|r| r.get(c).copied()).collect())
            .collect()
    }

    /// Entries increase along every row and down every column.
    pub fn is_standard(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
        let cols_ok = self
            .columns()
            .iter()
            .all(|c| c.windows(2).all(|w| w[0] < w[1]));
        rows_ok && cols_ok
    }

    pub fn transpose(&self) -> Tableau {
        Tableau {
            diagram: self.diagram.transpose(),
            rows: self.columns(),
        }
    }
}

/// Which of the two factors of a Young symmetrizer acts on the function first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetrizerOrder {
    /// Row symmetrizer first, then column antisymmetrizer: `Y = A·S`.
    RowsFirst,
    /// Column antisymmetrizer first, then row symmetrizer: `Y = S·A`.
    ColumnsFirst,
}

/// Formal signed sum of permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrizer {
    n: usize,
    terms: Vec<(Permutation, i32)>,
}

impl Symmetrizer {
    pub fn terms(&self) -> &[(Permutation, i32)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Operator product `self · other` (apply `other` first).
    pub fn then_after(&self, other: &Symmetrizer) -> Symmetrizer {
        let mut acc: BTreeMap<Permutation, i32> = BTreeMap::new();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                *acc.entry(p.compose(q)).or_default() += a * b;
            }
        }
        Symmetrizer {
            n: self.n,
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }
}

/// Young symmetrizer of a tableau whose entries label coordinates.
///
/// Any bijective filling is accepted; standardness is not required, because the
/// target position functions place the lone coordinate below the pair.
pub fn build_symmetrizer(tableau: &Tableau, order: SymmetrizerOrder) -> Symmetrizer {
    let n = tableau.diagram.size();
    let product = |blocks: &[Vec<usize>], signed: bool| -> Vec<(Permutation, i32)> {
        let mut acc = vec![(Permutation::identity(n), 1)];
        for b in blocks.iter().filter(|b| b.len() > 1) {
            let group = block_group(n, b);
            acc = acc
                .iter()
                .flat_map(|(p, s)| {
                    group.iter().map(move |g| {
                        let sg = if signed { g.sign() } else { 1 };
                        (p.compose(g), s * sg)
                    })
                })
                .collect();
        }
        acc
    };
    let rows = Symmetrizer {
        n,
        terms: product(&tableau.rows, false),
    };
    let cols = Symmetrizer {
        n,
        terms: product(&tableau.columns(), true),
    };
    match order {
        SymmetrizerOrder::RowsFirst => cols.then_after(&rows),
        SymmetrizerOrder::ColumnsFirst => rows.then_after(&cols),
    }
}

/// `Σ c_p · P f`, collected.
pub fn apply_symmetrizer(
    sym: &Symmetrizer,
    wf: &PositionWavefunction,
) -> Result<PositionWavefunction, SymmetricError> {
    if wf.particle_count() != sym.n {
        return Err(WavefunctionError::SizeMismatch(sym.n, wf.particle_count()).into());
    }
    let mut out = PositionWavefunction::zero(sym.n);
    for (p, c) in &sym.terms {
        out = out.add(&permute_arguments(wf, p)?.scale(Complex64::new(*c as f64, 0.0)))?;
    }
    Ok(out)
}
