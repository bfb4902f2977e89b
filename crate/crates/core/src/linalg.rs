//! Small dense complex matrices and a cyclic Jacobi eigensolver.
//!
//! The reduced density matrices this crate diagonalizes are at most
//! 16x16 during fitness evaluation (and up to 256x256 for the negativity
//! benchmark), so a robust O(dim^3)-per-sweep Jacobi iteration is the
//! right tool: no pivoting drama, quadratic convergence, and exact
//! preservation of hermiticity.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, tol, Scalar};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T: Scalar> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Largest elementwise deviation from `A = A^dagger`.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for r in 0..self.dim {
            for c in r..self.dim {
                let d = (self[(r, c)] - self[(c, r)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    fn off_diagonal_norm(&self) -> T {
        let mut sum = T::zero();
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c {
                    sum += self[(r, c)].norm_sqr();
                }
            }
        }
        sum.sqrt()
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.dim + c]
    }
}

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a hermitian matrix, ascending.
///
/// Cyclic Jacobi with complex plane rotations. Convergence is reached when
/// the off-diagonal Frobenius norm drops below `1e-12` relative to the
/// matrix scale (floored near epsilon for narrower scalar types). The
/// input is symmetrized first, so tiny hermiticity defects do not bias the
/// rotations; callers that care validate the defect beforehand.
pub fn hermitian_eigenvalues<T: Scalar>(matrix: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let n = matrix.dim();
    if n == 0 {
        return Ok(Vec::new());
    }

    // Work on the hermitian part: a <- (a + a^dagger)/2, real diagonal.
    let half = T::from_f64(0.5).unwrap();
    let mut a = ComplexMatrix::from_fn(n, |r, c| {
        (matrix[(r, c)] + matrix[(c, r)].conj()) * half
    });
    for i in 0..n {
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
    }

    let scale = a.frobenius_norm().max(T::one());
    let threshold = tol::<T>(1e-12) * scale;
    // Rotations on entries this small cannot move the off-diagonal norm
    // past the threshold; skipping them avoids pointless work.
    let skip = threshold / from_usize::<T>(n * n);

    for _sweep in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= threshold {
            let mut eigs: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
            return Ok(eigs);
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q, skip);
            }
        }
    }

    Err(Error::numerical(format!(
        "jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (dim {n})"
    )))
}

/// Zero out `a[(p, q)]` with the unitary plane rotation
/// `J_pp = c, J_pq = s*u, J_qp = -s*conj(u), J_qq = c`, where `u` is the
/// phase of `a[(p, q)]` and `(c, s)` the classic symmetric-Jacobi pair.
fn rotate<T: Scalar>(a: &mut ComplexMatrix<T>, p: usize, q: usize, skip: T) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r <= skip {
        return;
    }
    let u = apq.unscale(r);
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let two = T::one() + T::one();
    let tau = (aqq - app) / (two * r);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    let n = a.dim();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = akp * c - akq * (u.conj() * s);
        let new_kq = akp * (u * s) + akq * c;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp.conj();
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq.conj();
    }
    let shift = t * r;
    a[(p, p)] = Complex::new(app - shift, T::zero());
    a[(q, q)] = Complex::new(aqq + shift, T::zero());
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
}
