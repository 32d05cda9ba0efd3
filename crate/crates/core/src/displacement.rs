//! Fast triangular factorization of the corrector matrix `Δ` from its
//! displacement generator.
//!
//! With `Z` the upper shift, `Δ - ZΔZ* = A J A*` where `A` has one column per
//! lower-block sign plus the unit vector `e_N`. After reversing the index
//! order the shift becomes the lower shift `L`, and the generalized Schur
//! algorithm peels off one column per step: bring the current generator row
//! to proper form with unitary and hyperbolic rotations, read off the pivot
//! column, then shift it down. Each step costs `O(n·m)`, so the whole
//! factorization is `O(m n²)` instead of `O(n³)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::junitary::CorrectorSystem;

/// Hyperbolic rotations with `| 1 - |ρ|² |` below this are rejected.
pub const BREAKDOWN_TOL: f64 = 1e-12;

/// `Δ = R L D L* R` with `R` the index reversal, `L` lower triangular and
/// `D = diag(±1)`.
#[derive(Clone, Debug)]
pub struct DisplacementFactor {
    pub lower: DMatrix<Complex64>,
    pub signs: Vec<i8>,
}

/// Generator `(A, J)` with `Δ - ZΔZ* = A J A*`.
pub fn generator(system: &CorrectorSystem) -> (DMatrix<Complex64>, Vec<i8>) {
    let n = system.size();
    let k = system.gammas.len();
    let mut a = DMatrix::zeros(n, k + 1);
    for (i, theta) in system.first_columns().iter().enumerate() {
        a.set_column(i, &DVector::from_column_slice(theta));
    }
    a[(n - 1, k)] = Complex64::new(1.0, 0.0);
    let mut signs = system.signs.clone();
    signs.push(1);
    (a, signs)
}

/// Triangular factorization of the system's `Δ` through its generator.
pub fn displacement_factorize(system: &CorrectorSystem) -> Result<DisplacementFactor> {
    let (a, signs) = generator(system);
    factorize_generator(&a, &signs)
}

/// Generalized Schur algorithm for `Δ - ZΔZ* = A J A*`.
pub fn factorize_generator(a: &DMatrix<Complex64>, signs: &[i8]) -> Result<DisplacementFactor> {
    let n = a.nrows();
    let k = a.ncols();
    assert_eq!(signs.len(), k, "one sign per generator column");
    // Reversed rows: the displacement operator becomes the lower shift.
    let mut g = DMatrix::from_fn(n, k, |i, j| a[(n - 1 - i, j)]);
    let mut lower = DMatrix::zeros(n, n);
    let mut pivot_signs = Vec::with_capacity(n);

    let positive: Vec<usize> = (0..k).filter(|&c| signs[c] > 0).collect();
    let negative: Vec<usize> = (0..k).filter(|&c| signs[c] < 0).collect();

    for i in 0..n {
        let p = collapse(&mut g, i, &positive);
        let q = collapse(&mut g, i, &negative);
        let pivot = match (p, q) {
            (Some(p), None) => p,
            (None, Some(q)) => q,
            (Some(p), Some(q)) => {
                let a_val = g[(i, p)];
                let b_val = g[(i, q)];
                if b_val.norm() == 0.0 {
                    p
                } else if a_val.norm() == 0.0 {
                    q
                } else if a_val.norm() > b_val.norm() {
                    hyperbolic(&mut g, i, p, q)?;
                    p
                } else {
                    hyperbolic(&mut g, i, q, p)?;
                    q
                }
            }
            (None, None) => return Err(Error::HyperbolicBreakdown { step: i }),
        };
        if g[(i, pivot)].norm() == 0.0 {
            return Err(Error::HyperbolicBreakdown { step: i });
        }
        for row in i..n {
            lower[(row, i)] = g[(row, pivot)];
        }
        pivot_signs.push(signs[pivot]);
        // Shift the pivot column down by one.
        for row in ((i + 1)..n).rev() {
            g[(row, pivot)] = g[(row - 1, pivot)];
        }
        g[(i, pivot)] = Complex64::new(0.0, 0.0);
    }
    Ok(DisplacementFactor {
        lower,
        signs: pivot_signs,
    })
}

/// Unitary (Givens) rotations among `cols` so that row `i` has at most one
/// nonzero entry in that set; returns its column.
fn collapse(g: &mut DMatrix<Complex64>, i: usize, cols: &[usize]) -> Option<usize> {
    let &first = cols.first()?;
    let mut keep = first;
    for &c in &cols[1..] {
        if g[(i, c)].norm() > g[(i, keep)].norm() {
            keep = c;
        }
    }
    for &c in cols {
        if c == keep {
            continue;
        }
        let a = g[(i, keep)];
        let b = g[(i, c)];
        if b.norm() == 0.0 {
            continue;
        }
        let rho = a.norm().hypot(b.norm());
        for row in i..g.nrows() {
            let gp = g[(row, keep)];
            let gk = g[(row, c)];
            g[(row, keep)] = (a.conj() * gp + b.conj() * gk) / rho;
            g[(row, c)] = (-b * gp + a * gk) / rho;
        }
        g[(i, c)] = Complex64::new(0.0, 0.0);
    }
    Some(keep)
}

/// Hyperbolic rotation between columns `big` and `small` (opposite signs,
/// `|g[i,big]| > |g[i,small]|`) zeroing `g[i, small]`.
fn hyperbolic(g: &mut DMatrix<Complex64>, i: usize, big: usize, small: usize) -> Result<()> {
    let rho = g[(i, small)] / g[(i, big)];
    let denom = 1.0 - rho.norm_sqr();
    if denom < BREAKDOWN_TOL {
        return Err(Error::HyperbolicBreakdown { step: i });
    }
    let scale = 1.0 / denom.sqrt();
    for row in i..g.nrows() {
        let gb = g[(row, big)];
        let gs = g[(row, small)];
        g[(row, big)] = (gb - rho.conj() * gs) * scale;
        g[(row, small)] = (gs - rho * gb) * scale;
    }
    g[(i, small)] = Complex64::new(0.0, 0.0);
    Ok(())
}

impl DisplacementFactor {
    pub fn size(&self) -> usize {
        self.lower.nrows()
    }

    /// Solves `Δ x = b` with two triangular sweeps.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.size();
        // w = L⁻¹ R b
        let mut w: Vec<Complex64> = b.iter().rev().cloned().collect();
        for i in 0..n {
            let mut acc = w[i];
            for k in 0..i {
                acc -= self.lower[(i, k)] * w[k];
            }
            w[i] = acc / self.lower[(i, i)];
        }
        for (wi, s) in w.iter_mut().zip(&self.signs) {
            *wi *= f64::from(*s);
        }
        // y = L^{-*} w
        for i in (0..n).rev() {
            let mut acc = w[i];
            for k in (i + 1)..n {
                acc -= self.lower[(k, i)].conj() * w[k];
            }
            w[i] = acc / self.lower[(i, i)].conj();
        }
        w.reverse();
        w
    }

    /// `R L D L* R`, the matrix this factor represents.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.size();
        let d = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(f64::from(self.signs[i]), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let rev = self.lower.adjoint();
        let full = &self.lower * d * rev;
        DMatrix::from_fn(n, n, |i, j| full[(n - 1 - i, n - 1 - j)])
    }
}
