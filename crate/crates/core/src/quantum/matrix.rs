//! Small dense complex matrices (2×2 single qubit, 4×4 system ⊗ ancilla).
//!
//! Basis convention: for each qubit the excited state `|e⟩` has index 0 and
//! the ground state `|g⟩` index 1. Joint states are ordered system ⊗ ancilla,
//! i.e. `|ee⟩, |eg⟩, |ge⟩, |gg⟩` with the system label first.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const EXCITED: usize = 0;
pub const GROUND: usize = 1;

const MAX_DIM: usize = 4;

/// A dense complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::zeros_unchecked(dim))
    }

    pub(crate) fn zeros_unchecked(dim: usize) -> Self {
        Self {
            dim,
            data: [Complex64::new(0.0, 0.0); MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be 4 or 16.
    pub fn from_rows(entries: &[Complex64]) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => return Err(Error::UnsupportedDimension((n as f64).sqrt() as usize)),
        };
        let mut m = Self::zeros_unchecked(dim);
        m.data[..entries.len()].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros_unchecked(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        out.entries_mut().iter_mut().for_each(|z| *z *= s);
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        let mut out = *self;
        out.entries_mut().iter_mut().for_each(|z| *z *= s);
        out
    }

    /// Row-major view of the `dim × dim` entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    fn entries_mut(&mut self) -> &mut [Complex64] {
        let n = self.dim * self.dim;
        &mut self.data[..n]
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        Ok(self.matmul_unchecked(rhs))
    }

    pub(crate) fn matmul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros_unchecked(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }

    /// `[self, rhs] = self·rhs − rhs·self`
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(self.matmul(rhs)? - rhs.matmul_unchecked(self))
    }

    /// Kronecker product of two 2×2 matrices; `self` is the left (system) factor.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        if self.dim != 2 || rhs.dim != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: if self.dim != 2 { self.dim } else { rhs.dim },
            });
        }
        let mut out = Self::zeros_unchecked(4);
        for (i, j) in (0..2).flat_map(|i| (0..2).map(move |j| (i, j))) {
            for (k, l) in (0..2).flat_map(|k| (0..2).map(move |l| (k, l))) {
                out[(2 * i + k, 2 * j + l)] = self[(i, j)] * rhs[(k, l)];
            }
        }
        Ok(out)
    }

    /// Largest absolute entry of `self − self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() < tol
    }

    /// Projects onto the Hermitian part, `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    ///
    /// Closed form for 2×2, nalgebra's Hermitian eigensolver for 4×4.
    pub fn hermitian_eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        let defect = self.hermiticity_defect();
        if defect >= tol {
            return Err(Error::NotHermitian(defect));
        }
        if self.dim == 2 {
            let a = self[(0, 0)].re;
            let d = self[(1, 1)].re;
            let b = self[(0, 1)];
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            return Ok(vec![mean - radius, mean + radius]);
        }
        let eig = self.to_nalgebra().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }

    pub(crate) fn to_nalgebra(self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |r, c| self[(r, c)])
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let mut out = Self::zeros(m.nrows())?;
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                out[(r, c)] = m[(r, c)];
            }
        }
        Ok(out)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.dim && c < self.dim, "index ({r}, {c}) out of range");
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.dim && c < self.dim, "index ({r}, {c}) out of range");
        &mut self.data[r * self.dim + c]
    }
}

// Elementwise ops panic on mismatched dimensions, like the std slice ops.
impl Add for ComplexMatrix {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for ComplexMatrix {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.entries_mut()
            .iter_mut()
            .zip(rhs.entries())
            .for_each(|(a, b)| *a += b);
    }
}

impl Sub for ComplexMatrix {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.entries_mut()
            .iter_mut()
            .zip(rhs.entries())
            .for_each(|(a, b)| *a -= b);
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.matmul_unchecked(&rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Which single-qubit Pauli-type operator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    /// `σ_z = |e⟩⟨e| − |g⟩⟨g|`
    Z,
    /// `σ⁺ = |e⟩⟨g|`
    Plus,
    /// `σ⁻ = |g⟩⟨e|`
    Minus,
}

pub fn pauli(which: Pauli) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros_unchecked(2);
    let one = Complex64::new(1.0, 0.0);
    match which {
        Pauli::Z => {
            m[(EXCITED, EXCITED)] = one;
            m[(GROUND, GROUND)] = -one;
        }
        Pauli::Plus => m[(EXCITED, GROUND)] = one,
        Pauli::Minus => m[(GROUND, EXCITED)] = one,
    }
    m
}
