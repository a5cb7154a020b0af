//! Exact rational linear algebra for the substitution matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::folding::{word_to_string, FoldDirection};
use crate::substitution::{substitution_matrix, CountMatrix, SubRule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("entry ({row}, {col}) above the diagonal is {value}")]
    NotTriangular { row: usize, col: usize, value: BigRational },
    #[error("matrix is singular")]
    Singular,
    #[error("empty word")]
    EmptyWord,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactVector(pub Vec<BigRational>);

impl ExactVector {
    pub fn from_ints(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| q(x)).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        Self((0..n).map(|j| if i == j { q(1) } else { q(0) }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// `max_i |x_i - c|`.
    pub fn max_deviation(&self, c: &BigRational) -> BigRational {
        self.0.iter().map(|x| (x - c).abs()).max().unwrap_or_else(BigRational::zero)
    }

    pub fn sum(&self) -> BigRational {
        self.0.iter().fold(BigRational::zero(), |a, b| a + b)
    }
}

impl Sub for &ExactVector {
    type Output = ExactVector;

    fn sub(self, rhs: &ExactVector) -> ExactVector {
        ExactVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for ExactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.0.iter().map(fmt_rational).collect();
        write!(f, "({})", cells.join(", "))
    }
}

/// Dense square matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![BigRational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = q(1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { n, data: rows.iter().flatten().map(|&x| q(x)).collect() }
    }

    pub fn from_count(m: &CountMatrix) -> Self {
        let data = m.0.iter().flatten().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        Self { n: 8, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigRational) {
        self.data[i * self.n + j] = x;
    }

    pub fn mul_vec(&self, v: &ExactVector) -> ExactVector {
        assert_eq!(v.len(), self.n);
        ExactVector(
            (0..self.n)
                .map(|i| (0..self.n).fold(BigRational::zero(), |acc, j| acc + self.get(i, j) * &v.0[j]))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    pub fn minus_scalar(&self, lambda: &BigRational) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            let x = m.get(i, i) - lambda;
            m.set(i, i, x);
        }
        m
    }

    pub fn diagonal(&self) -> Vec<BigRational> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_integer(&self) -> bool {
        self.data.iter().all(BigRational::is_integer)
    }

    pub fn column_sums(&self) -> Vec<BigRational> {
        (0..self.n)
            .map(|j| (0..self.n).fold(BigRational::zero(), |acc, i| acc + self.get(i, j)))
            .collect()
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self, SpectralError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(SpectralError::Singular)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &p);
                inv.set(col, j, inv.get(col, j) / &p);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - &f * a.get(col, j));
                    inv.set(r, j, inv.get(r, j) - &f * inv.get(col, j));
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.data.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    /// Rank by fraction-free (Bareiss) elimination after clearing denominators.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let l = (0..n).fold(BigInt::one(), |acc, j| acc.lcm(self.get(i, j).denom()));
                (0..n).map(|j| (self.get(i, j) * BigRational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| !rows[r][col].is_zero()) else { continue };
            rows.swap(rank, pivot);
            for r in rank + 1..n {
                for j in col + 1..n {
                    let v = &rows[rank][col] * &rows[r][j] - &rows[r][col] * &rows[rank][j];
                    rows[r][j] = v / &prev;
                }
                rows[r][col] = BigInt::zero();
            }
            prev = rows[rank][col].clone();
            rank += 1;
        }
        rank
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = ExactMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let x = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, x);
                }
            }
        }
        out
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(fmt_rational).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for row in cells.chunks(self.n.max(1)) {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", padded.join(" "))?;
        }
        Ok(())
    }
}

/// Columns are eigenvectors of `M+`.
const C_ROWS: [[i64; 8]; 8] = [
    [1, -2, 0, 0, 0, 0, -1, 0],
    [1, 0, -2, 0, 1, 0, 3, 0],
    [1, 9, 1, 0, -2, 0, -3, 0],
    [1, -3, 1, 0, 1, 0, 1, 0],
    [1, 2, 0, 0, 0, 0, 0, -1],
    [1, 0, 0, -2, 0, 1, 0, 3],
    [1, -9, 0, 1, 0, -2, 0, -3],
    [1, 3, 0, 1, 0, 1, 0, 1],
];

pub fn conjugator() -> &'static ExactMatrix {
    static C: OnceLock<ExactMatrix> = OnceLock::new();
    C.get_or_init(|| ExactMatrix::from_rows(&C_ROWS.map(|r| r.to_vec())))
}

pub fn conjugator_inverse() -> &'static ExactMatrix {
    static C_INV: OnceLock<ExactMatrix> = OnceLock::new();
    C_INV.get_or_init(|| conjugator().inverse().expect("C is invertible"))
}

pub fn rule_matrix(rule: SubRule) -> &'static ExactMatrix {
    static PLUS: OnceLock<ExactMatrix> = OnceLock::new();
    static MINUS: OnceLock<ExactMatrix> = OnceLock::new();
    match rule {
        SubRule::Plus => PLUS.get_or_init(|| ExactMatrix::from_count(&substitution_matrix(rule))),
        SubRule::Minus => MINUS.get_or_init(|| ExactMatrix::from_count(&substitution_matrix(rule))),
    }
}

/// `M_{a1} ... M_{ak}` in exact arithmetic.
pub fn word_matrix(word: &[FoldDirection]) -> ExactMatrix {
    word.iter()
        .fold(ExactMatrix::identity(8), |acc, d| &acc * rule_matrix(SubRule::from(*d)))
}

/// `C^-1 M C`, checked to be lower triangular, with its diagonal.
pub fn triangularize(m: &ExactMatrix) -> Result<(ExactMatrix, Vec<BigRational>), SpectralError> {
    let t = &(conjugator_inverse() * m) * conjugator();
    for row in 0..8 {
        for col in row + 1..8 {
            if !t.get(row, col).is_zero() {
                return Err(SpectralError::NotTriangular { row, col, value: t.get(row, col).clone() });
            }
        }
    }
    let diag = t.diagonal();
    Ok((t, diag))
}

/// `(4^k, 2^k, (-2)^k, (-2)^k, 1, 1, 0, 0)`.
pub fn expected_diagonal(k: u32) -> Vec<BigInt> {
    let p = |b: i64| BigInt::from(b).pow(k);
    vec![p(4), p(2), p(-2), p(-2), BigInt::one(), BigInt::one(), BigInt::zero(), BigInt::zero()]
}

pub fn all_ones() -> ExactVector {
    ExactVector::from_ints(&[1; 8])
}

pub fn kernel_vectors() -> [ExactVector; 2] {
    [
        ExactVector::from_ints(&[1, -3, 3, -1, 0, 0, 0, 0]),
        ExactVector::from_ints(&[0, 0, 0, 0, 1, -3, 3, -1]),
    ]
}

/// The eigenvalue-1 vector of a word starting with `first`, and its twin on
/// the negative block.
pub fn unit_eigenvectors(first: FoldDirection) -> [ExactVector; 2] {
    match first {
        FoldDirection::Up => [
            ExactVector::from_ints(&[0, 1, -2, 1, 0, 0, 0, 0]),
            ExactVector::from_ints(&[0, 0, 0, 0, 0, 1, -2, 1]),
        ],
        FoldDirection::Down => [
            ExactVector::from_ints(&[1, -2, 1, 0, 0, 0, 0, 0]),
            ExactVector::from_ints(&[0, 0, 0, 0, 1, -2, 1, 0]),
        ],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenReport {
    pub word: String,
    pub length: usize,
    /// Distinct eigenvalues in decreasing order with algebraic multiplicity.
    pub eigenvalues: Vec<(BigInt, usize)>,
    pub lower_triangular: bool,
    pub perron_frobenius: bool,
    pub unit_eigenvectors: bool,
    pub kernel_vectors: bool,
    /// Geometric multiplicity of each distinct eigenvalue.
    pub eigenspace_dims: Vec<(BigInt, usize)>,
    /// Dimension of the `2^k` eigenspace, reported for even `k`.
    pub dim_two_pow_k: Option<usize>,
    pub diagonalizable: bool,
}

impl EigenReport {
    pub fn all_checks_pass(&self) -> bool {
        self.lower_triangular && self.perron_frobenius && self.unit_eigenvectors && self.kernel_vectors
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let list = |v: &[(BigInt, usize)]| {
            v.iter().map(|(l, m)| format!("{l}x{m}")).collect::<Vec<_>>().join(" ")
        };
        let flat: Vec<String> = self
            .eigenvalues
            .iter()
            .flat_map(|(l, m)| std::iter::repeat_n(l.to_string(), *m))
            .collect();
        vec![
            ("word", self.word.clone()),
            ("length", self.length.to_string()),
            ("eigenvalues", flat.join(", ")),
            ("multiplicities", list(&self.eigenvalues)),
            ("lower_triangular", self.lower_triangular.to_string()),
            ("perron_frobenius", self.perron_frobenius.to_string()),
            ("unit_eigenvectors", self.unit_eigenvectors.to_string()),
            ("kernel_vectors", self.kernel_vectors.to_string()),
            ("eigenspace_dims", list(&self.eigenspace_dims)),
            (
                "dim_two_pow_k",
                self.dim_two_pow_k.map_or_else(|| "n/a".to_string(), |d| d.to_string()),
            ),
            ("diagonalizable", self.diagonalizable.to_string()),
        ]
    }

    pub fn to_text(&self) -> String {
        self.fields().into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }

    pub fn to_kv(&self) -> String {
        self.fields().into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

pub fn eigen_report(word: &[FoldDirection]) -> Result<EigenReport, SpectralError> {
    let first = *word.first().ok_or(SpectralError::EmptyWord)?;
    let k = word.len();
    let m = word_matrix(word);
    let (lower_triangular, diag) = match triangularize(&m) {
        Ok((_, d)) => (true, d),
        Err(SpectralError::NotTriangular { .. }) => (false, Vec::new()),
        Err(e) => return Err(e),
    };

    let mut counts: BTreeMap<BigInt, usize> = BTreeMap::new();
    for x in &diag {
        *counts.entry(x.to_integer()).or_default() += 1;
    }
    let eigenvalues: Vec<(BigInt, usize)> = counts.into_iter().rev().collect();

    let pf = BigRational::from_integer(BigInt::from(4).pow(k as u32));
    let ones = all_ones();
    let perron_frobenius = m.mul_vec(&ones) == ones.scale(&pf);
    let unit_eigenvectors = unit_eigenvectors(first).iter().all(|u| m.mul_vec(u) == *u);
    let kernel_vectors = kernel_vectors().iter().all(|z| m.mul_vec(z).is_zero());

    let eigenspace_dims: Vec<(BigInt, usize)> = eigenvalues
        .iter()
        .map(|(l, _)| (l.clone(), 8 - m.minus_scalar(&BigRational::from_integer(l.clone())).rank()))
        .collect();
    let two_k = BigInt::from(2).pow(k as u32);
    let dim_two_pow_k = k.is_multiple_of(2)
        .then(|| eigenspace_dims.iter().find(|(l, _)| *l == two_k).map(|(_, d)| *d))
        .flatten();
    let diagonalizable = lower_triangular && eigenspace_dims.iter().map(|(_, d)| d).sum::<usize>() == 8;

    Ok(EigenReport {
        word: word_to_string(word),
        length: k,
        eigenvalues,
        lower_triangular,
        perron_frobenius,
        unit_eigenvectors,
        kernel_vectors,
        eigenspace_dims,
        dim_two_pow_k,
        diagonalizable,
    })
}

/// `M_word^n e_seed / 4^(|word| n)`; `seed` is 1-based.
pub fn density_limit(word: &[FoldDirection], n: u32, seed: usize) -> ExactVector {
    assert!((1..=8).contains(&seed), "seed index must be in 1..=8");
    let m = word_matrix(word).pow(n);
    let total = BigRational::from_integer(BigInt::from(4).pow(word.len() as u32 * n));
    m.mul_vec(&ExactVector::unit(8, seed - 1)).scale(&total.recip())
}

/// `v_n = M_{S_n} e_seed / 4^n` for `n = 1..=len`, where `S_n` is the
/// length-`n` prefix of the periodic sequence `word*`.
pub fn density_sequence(word: &[FoldDirection], len: usize, seed: usize) -> Vec<ExactVector> {
    assert!((1..=8).contains(&seed), "seed index must be in 1..=8");
    assert!(!word.is_empty(), "word must be nonempty");
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let mut prefix = ExactMatrix::identity(8);
    let mut scale = BigRational::one();
    (0..len)
        .map(|i| {
            prefix = &prefix * rule_matrix(SubRule::from(word[i % word.len()]));
            scale = &scale * &quarter;
            prefix.mul_vec(&ExactVector::unit(8, seed - 1)).scale(&scale)
        })
        .collect()
}

pub fn eighth() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(8))
}

/// Smallest `e <= max` with every entry of `m^e` positive.
pub fn primitivity_exponent(m: &ExactMatrix, max: u32) -> Option<u32> {
    let mut p = m.clone();
    for e in 1..=max {
        if p.data.iter().all(Signed::is_positive) {
            return Some(e);
        }
        p = &p * m;
    }
    None
}
