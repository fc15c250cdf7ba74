//! Truncated density matrices in the Fock basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const HERMITICITY_TOL: f64 = 1e-12;
const DIAGONAL_TOL: f64 = 1e-12;
const PURITY_TOL: f64 = 1e-12;

/// A `dim x dim` density matrix truncated to the lowest `dim` Fock states.
///
/// Construction validates hermiticity, near-nonnegative diagonal, trace within
/// the declared truncation tail of one, and purity at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    mat: DMatrix<Complex64>,
    trace_tail_bound: f64,
}

impl FockDensityMatrix {
    /// Validate and wrap a matrix whose trace may fall short of one by at
    /// most `trace_tail_bound` (the analytic truncation deficit).
    pub fn new(mat: DMatrix<Complex64>, trace_tail_bound: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotDensityMatrix(format!(
                "matrix is {}x{}, not square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.nrows() < 2 {
            return Err(Error::NotDensityMatrix(
                "Fock cutoff must be at least 2".into(),
            ));
        }
        if !(0.0..1.0).contains(&trace_tail_bound) {
            return Err(Error::NotDensityMatrix(format!(
                "trace tail bound {trace_tail_bound} outside [0, 1)"
            )));
        }
        let dim = mat.nrows();
        for k in 0..dim {
            if mat[(k, k)].re < -DIAGONAL_TOL || mat[(k, k)].im.abs() > DIAGONAL_TOL {
                return Err(Error::NotDensityMatrix(format!(
                    "diagonal element {k} is {}",
                    mat[(k, k)]
                )));
            }
            for l in (k + 1)..dim {
                if (mat[(k, l)] - mat[(l, k)].conj()).norm() > HERMITICITY_TOL {
                    return Err(Error::NotDensityMatrix(format!(
                        "not Hermitian at ({k}, {l})"
                    )));
                }
            }
        }
        let out = FockDensityMatrix {
            mat,
            trace_tail_bound,
        };
        let trace = out.trace();
        if trace > 1.0 + DIAGONAL_TOL || trace < 1.0 - trace_tail_bound - DIAGONAL_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "trace {trace} outside [1 - {trace_tail_bound}, 1]"
            )));
        }
        if out.purity() > 1.0 + PURITY_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "purity {} exceeds 1",
                out.purity()
            )));
        }
        Ok(out)
    }

    /// Rank-one matrix `rho = a a^dagger` from pure-state amplitudes.
    pub fn from_pure_amplitudes(amps: &[Complex64], trace_tail_bound: f64) -> Result<Self> {
        let dim = amps.len();
        let mat = DMatrix::from_fn(dim, dim, |k, l| amps[k] * amps[l].conj());
        Self::new(mat, trace_tail_bound)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn element(&self, k: usize, l: usize) -> Complex64 {
        self.mat[(k, l)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// Analytic bound on `1 - Tr rho` declared at construction.
    pub fn trace_tail_bound(&self) -> f64 {
        self.trace_tail_bound
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|k| self.mat[(k, k)].re).sum()
    }

    /// `Tr rho^2`, computed as the squared Frobenius norm (valid for
    /// Hermitian matrices).
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> DVector<f64> {
        let mut eigs = self.mat.clone().symmetric_eigen().eigenvalues;
        eigs.as_mut_slice().sort_by(f64::total_cmp);
        eigs
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Von Neumann entropy `S = -Tr(rho ln rho)` from the eigenvalues, with
    /// `0 ln 0 := 0`. Errors if an eigenvalue is below `-1e-10`; eigensolver
    /// noise of order machine epsilon is clamped so the result stays
    /// nonnegative.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let eigs = self.eigenvalues();
        if eigs[0] < -1e-10 {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: eigs[0],
            });
        }
        let s: f64 = eigs
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| -l * l.ln())
            .sum();
        Ok(s.max(0.0))
    }
}

/// Diagonal geometric (thermal) matrix `rho_{k,k} = [n/(n+1)]^k / (n+1)`,
/// truncated at `dim` with the exact tail `[n/(n+1)]^dim` recorded.
pub(crate) fn thermal_matrix(n_mean: f64, dim: usize) -> Result<FockDensityMatrix> {
    if !(n_mean >= 0.0) || !n_mean.is_finite() {
        return Err(Error::NotDensityMatrix(format!(
            "thermal mean occupation {n_mean} invalid"
        )));
    }
    if dim < 2 {
        return Err(Error::NotDensityMatrix(
            "Fock cutoff must be at least 2".into(),
        ));
    }
    let q = n_mean / (n_mean + 1.0);
    let mut mat = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let mut p = 1.0 / (n_mean + 1.0);
    for k in 0..dim {
        mat[(k, k)] = Complex64::new(p, 0.0);
        p *= q;
    }
    FockDensityMatrix::new(mat, q.powi(dim as i32))
}

/// Entropy of a thermal state with mean occupation `n`:
/// `(n+1) ln(n+1) - n ln n`, the closed form the eigenvalue route must match.
pub fn thermal_entropy(n_mean: f64) -> f64 {
    if n_mean <= 0.0 {
        return 0.0;
    }
    (n_mean + 1.0) * (n_mean + 1.0).ln() - n_mean * n_mean.ln()
}
