//! J-unitary polynomial correctors.
//!
//! Given the last row `(ζ_1, …, ζ_{m-1}, f)` of a matrix
//!
//! ```text
//!     F = [ I_{m-1}   0 ]
//!         [ ζ_1 … ζ_{m-1}  f ]
//! ```
//!
//! with `ζ_i` anticausal of degree `N`, `f` causal of degree `N` and
//! `f(0) ≠ 0`, this module builds a polynomial `U` with
//! `U(z) J U(z)* = J` on the circle, `J = diag(J_1, …, J_{m-1}, 1)`, such
//! that `F U` is causal of degree `N`.
//!
//! The columns of `U` come from `m` linear systems in the coefficients of
//! `m` unknown polynomials. With `D` the upper-triangular Toeplitz matrix of
//! `f` and `Γ_i` the Hankel matrix of `ζ_i`, everything reduces to one
//! `(N+1)×(N+1)` Hermitian matrix `Δ = Σ J_i Θ_i Θ_i* + I`, `Θ_i = D⁻¹Γ_i`,
//! solved once per right-hand side. Unknowns enter the reduced system
//! conjugated; vectors are kept conjugated until extraction.

use log::warn;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::displacement::{self, DisplacementFactor};
use crate::error::{Error, Result};
use crate::fourier;
use crate::laurent::LaurentPoly;
use crate::matrix::MatrixLaurent;
use crate::signature::Signature;

/// `Δ` is treated as singular above this condition estimate.
pub const DELTA_CONDITION_LIMIT: f64 = 1e12;

/// `V(1)` is used as the normalizing constant below this condition number.
pub const REFERENCE_CONDITION_LIMIT: f64 = 1e10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug)]
pub struct CorrectorInput {
    /// `ζ_1, …, ζ_{m-1}`, powers in `[-N, 0]`.
    pub zetas: Vec<LaurentPoly>,
    /// Powers in `[0, N]`.
    pub fplus: LaurentPoly,
    /// `J_1, …, J_{m-1}`; the last sign is fixed to `+1`.
    pub signs: Vec<i8>,
    pub degree: usize,
}

impl CorrectorInput {
    pub fn new(
        zetas: Vec<LaurentPoly>,
        fplus: LaurentPoly,
        signs: Vec<i8>,
        degree: usize,
    ) -> Result<Self> {
        if zetas.len() != signs.len() {
            return Err(Error::Dimension(format!(
                "{} zetas but {} signs",
                zetas.len(),
                signs.len()
            )));
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidArgument("signs must be ±1".into()));
        }
        let n = degree as i64;
        for (i, z) in zetas.iter().enumerate() {
            if !z.is_zero() && (z.highest() > 0 || z.lowest() < -n) {
                return Err(Error::InvalidArgument(format!(
                    "zeta {} has powers outside [-{n}, 0]",
                    i + 1
                )));
            }
        }
        if !fplus.is_zero() && (fplus.lowest() < 0 || fplus.highest() > n) {
            return Err(Error::InvalidArgument(format!(
                "f has powers outside [0, {n}]"
            )));
        }
        if fplus.coeff(0).norm() <= 1e-13 * fplus.max_abs() || fplus.is_zero() {
            return Err(Error::SingularD);
        }
        Ok(Self {
            zetas,
            fplus,
            signs,
            degree,
        })
    }

    /// Block size `m`.
    pub fn m(&self) -> usize {
        self.zetas.len() + 1
    }

    /// `diag(J_1, …, J_{m-1}, 1)`.
    pub fn signature(&self) -> Signature {
        let mut s = self.signs.clone();
        s.push(1);
        Signature::new(s).expect("validated")
    }
}

/// Assembled blocks of the corrector system.
#[derive(Clone, Debug)]
pub struct CorrectorSystem {
    pub degree: usize,
    /// `d_0, …, d_N`.
    pub d: Vec<Complex64>,
    /// `γ_{i0}, …, γ_{iN}` per `ζ_i`.
    pub gammas: Vec<Vec<Complex64>>,
    pub thetas: Vec<DMatrix<Complex64>>,
    pub delta: DMatrix<Complex64>,
    pub signs: Vec<i8>,
}

/// Solves `D x = b` for the upper-triangular Toeplitz `D` with first row `d`.
pub fn toeplitz_upper_solve(d: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = b.len();
    let mut x = vec![ZERO; n];
    for k in (0..n).rev() {
        let mut acc = b[k];
        for l in (k + 1)..n {
            acc -= d[l - k] * x[l];
        }
        x[k] = acc / d[0];
    }
    x
}

/// `Γ x` for the Hankel matrix `Γ[k][l] = γ_{k+l}` (zero past `N`).
pub fn hankel_mul(gamma: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| (0..(n - k)).map(|l| gamma[k + l] * x[l]).sum())
        .collect()
}

impl CorrectorSystem {
    pub fn size(&self) -> usize {
        self.degree + 1
    }

    pub fn m(&self) -> usize {
        self.gammas.len() + 1
    }

    pub fn d_matrix(&self) -> DMatrix<Complex64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |k, l| if l >= k { self.d[l - k] } else { ZERO })
    }

    pub fn gamma_matrix(&self, i: usize) -> DMatrix<Complex64> {
        let n = self.size();
        let g = &self.gammas[i];
        DMatrix::from_fn(n, n, |k, l| if k + l < n { g[k + l] } else { ZERO })
    }

    /// First columns `D⁻¹ γ_i` of the `Θ_i`.
    pub fn first_columns(&self) -> Vec<Vec<Complex64>> {
        self.thetas
            .iter()
            .map(|t| t.column(0).iter().cloned().collect())
            .collect()
    }

    /// Right-hand side of the reduced system for condition `j` (0-based).
    /// For `j < m-1` this is `J_j D⁻¹ Γ_j conj(D⁻¹) e_0`; for `j = m-1` it is `e_0`.
    pub fn rhs(&self, j: usize) -> Vec<Complex64> {
        let n = self.size();
        if j + 1 == self.m() {
            let mut e = vec![ZERO; n];
            e[0] = ONE;
            return e;
        }
        let s = f64::from(self.signs[j]) / self.d[0].conj();
        self.thetas[j].column(0).iter().map(|v| v * s).collect()
    }

    /// Recovers `(X_1, …, X_m)` for condition `j` from `y = conj(X_m)`.
    fn unknowns(&self, j: usize, y: &[Complex64]) -> Vec<Vec<Complex64>> {
        let n = self.size();
        let xm: Vec<Complex64> = y.iter().map(|v| v.conj()).collect();
        let mut out = Vec::with_capacity(self.m());
        for i in 0..self.gammas.len() {
            let mut rhs = hankel_mul(&self.gammas[i], &xm);
            if i == j {
                rhs[0] -= ONE;
            }
            let sol = toeplitz_upper_solve(&self.d, &rhs);
            let s = f64::from(self.signs[i]);
            out.push(sol.iter().map(|v| v.conj() * s).collect());
        }
        debug_assert_eq!(xm.len(), n);
        out.push(xm);
        out
    }
}

/// Builds `D`, `Γ_i`, `Θ_i = D⁻¹Γ_i` and `Δ = Σ J_i Θ_i Θ_i* + I`.
pub fn assemble_system(input: &CorrectorInput) -> Result<CorrectorSystem> {
    let n = input.degree + 1;
    let d: Vec<Complex64> = (0..n as i64).map(|k| input.fplus.coeff(k)).collect();
    if d[0] == ZERO {
        return Err(Error::SingularD);
    }
    let gammas: Vec<Vec<Complex64>> = input
        .zetas
        .iter()
        .map(|z| (0..n as i64).map(|k| z.coeff(-k)).collect())
        .collect();

    let mut system = CorrectorSystem {
        degree: input.degree,
        d,
        gammas,
        thetas: Vec::new(),
        delta: DMatrix::identity(n, n),
        signs: input.signs.clone(),
    };
    let mut thetas = Vec::with_capacity(system.gammas.len());
    for i in 0..system.gammas.len() {
        let gamma = system.gamma_matrix(i);
        let mut theta = DMatrix::zeros(n, n);
        for col in 0..n {
            let c: Vec<Complex64> = gamma.column(col).iter().cloned().collect();
            let sol = toeplitz_upper_solve(&system.d, &c);
            for (row, v) in sol.into_iter().enumerate() {
                theta[(row, col)] = v;
            }
        }
        let s = Complex64::new(f64::from(system.signs[i]), 0.0);
        system.delta += &theta * theta.adjoint() * s;
        thetas.push(theta);
    }
    system.thetas = thetas;
    Ok(system)
}

/// How the reduced system was solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolvePath {
    Dense,
    Displacement,
}

enum Factor {
    Dense(nalgebra::linalg::FullPivLU<Complex64, nalgebra::Dyn, nalgebra::Dyn>),
    Displacement(DisplacementFactor),
}

impl Factor {
    fn solve(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        match self {
            Factor::Dense(lu) => lu
                .solve(&nalgebra::DVector::from_column_slice(b))
                .map(|x| x.iter().cloned().collect()),
            Factor::Displacement(f) => Some(f.solve(b)),
        }
    }
}

/// Hager/Higham estimate of `‖Δ‖₁ ‖Δ⁻¹‖₁` for Hermitian `Δ`.
fn condition_estimate(delta: &DMatrix<Complex64>, factor: &Factor) -> f64 {
    let n = delta.nrows();
    let norm1 = (0..n)
        .map(|c| delta.column(c).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
    let mut est = 0.0;
    for _ in 0..5 {
        let Some(y) = factor.solve(&x) else {
            return f64::INFINITY;
        };
        if y.iter().any(|v| !v.is_finite()) {
            return f64::INFINITY;
        }
        est = y.iter().map(|v| v.norm()).sum::<f64>();
        let xi: Vec<Complex64> = y
            .iter()
            .map(|v| if v.norm() > 0.0 { v / v.norm() } else { ONE })
            .collect();
        let Some(w) = factor.solve(&xi) else {
            return f64::INFINITY;
        };
        let (jmax, wmax) = w
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, 0.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        let wx: f64 = w.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
        if wmax <= wx {
            break;
        }
        x = vec![ZERO; n];
        x[jmax] = ONE;
    }
    norm1 * est
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub use_displacement: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            use_displacement: true,
        }
    }
}

/// A J-unitary polynomial corrector and the matrices it was built from.
#[derive(Clone, Debug)]
pub struct Corrector {
    pub u: MatrixLaurent,
    /// Columns are the raw solutions of the `m` systems.
    pub v: MatrixLaurent,
    /// `J = diag(J_1, …, J_{m-1}, 1)`.
    pub signature: Signature,
    /// `C = V(z₀)* J V(z₀)`, constant on the circle.
    pub c: DMatrix<Complex64>,
    /// `C = C₀* J C₀`; `U = V C₀⁻¹`.
    pub c0: DMatrix<Complex64>,
    pub reference_point: Complex64,
    pub det_u: Complex64,
    pub delta_condition: f64,
    pub path: SolvePath,
}

/// Solutions `(X_1, …, X_m)` of all `m` systems, column-major by condition.
pub fn solve_systems(
    system: &CorrectorSystem,
    options: SolveOptions,
) -> Result<(Vec<Vec<Vec<Complex64>>>, f64, SolvePath)> {
    let n = system.size();
    let mut path = SolvePath::Dense;
    let factor = if options.use_displacement {
        match displacement::displacement_factorize(system) {
            Ok(f) => {
                path = SolvePath::Displacement;
                Factor::Displacement(f)
            }
            Err(e) => {
                warn!("displacement factorization failed ({e}); using dense solve");
                Factor::Dense(system.delta.clone().full_piv_lu())
            }
        }
    } else {
        Factor::Dense(system.delta.clone().full_piv_lu())
    };
    if let Factor::Dense(lu) = &factor {
        if !lu.is_invertible() {
            return Err(Error::DeltaSingular {
                condition: f64::INFINITY,
            });
        }
    }
    let condition = condition_estimate(&system.delta, &factor);
    if !(condition <= DELTA_CONDITION_LIMIT) {
        return Err(Error::DeltaSingular { condition });
    }
    let mut solutions = Vec::with_capacity(system.m());
    for j in 0..system.m() {
        let y = factor
            .solve(&system.rhs(j))
            .ok_or(Error::DeltaSingular { condition })?;
        debug_assert_eq!(y.len(), n);
        solutions.push(system.unknowns(j, &y));
    }
    Ok((solutions, condition, path))
}

/// Builds `V` from the solutions: entry `(i, j)` is `x_i^j` for `i < m`,
/// and the last row holds `x̃_m^j`.
fn build_v(solutions: &[Vec<Vec<Complex64>>]) -> MatrixLaurent {
    let m = solutions.len();
    MatrixLaurent::from_fn(m, m, |i, j| {
        let p = LaurentPoly::new(0, solutions[j][i].clone());
        if i + 1 == m {
            p.tilde()
        } else {
            p
        }
    })
}

/// Builds the J-unitary corrector `U = V C₀⁻¹`.
pub fn solve_corrector(input: &CorrectorInput, options: SolveOptions) -> Result<Corrector> {
    let system = assemble_system(input)?;
    let (solutions, delta_condition, path) = solve_systems(&system, options)?;
    let v = build_v(&solutions);
    let signature = input.signature();
    let j = signature.to_matrix();

    let one = ONE;
    let v1 = v.eval(one);
    let (reference_point, c, c0) = if matrix_condition(&v1) <= REFERENCE_CONDITION_LIMIT {
        let c = v1.adjoint() * &j * &v1;
        check_inertia(&c, &signature)?;
        (one, c, v1)
    } else {
        let z0 = best_reference_point(&v, 256);
        let vz = v.eval(z0);
        let c = vz.adjoint() * &j * &vz;
        let c0 = signed_factor(&c, &signature)?;
        (z0, c, c0)
    };
    let c0_inv = c0
        .clone()
        .try_inverse()
        .ok_or(Error::DeltaSingular {
            condition: f64::INFINITY,
        })?;
    let u = v.mat_mul(&MatrixLaurent::from_constant(&c0_inv))?;
    let det_u = u.eval(one).determinant();
    Ok(Corrector {
        u,
        v,
        signature,
        c,
        c0,
        reference_point,
        det_u,
        delta_condition,
        path,
    })
}

fn matrix_condition(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn best_reference_point(v: &MatrixLaurent, grid: usize) -> Complex64 {
    fourier::grid_points(grid)
        .into_iter()
        .map(|z| (z, matrix_condition(&v.eval(z))))
        .fold((ONE, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        .0
}

fn inertia(c: &DMatrix<Complex64>) -> (usize, usize, Vec<f64>, DMatrix<Complex64>) {
    let eig = SymmetricEigen::new(c.clone());
    let vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    let p = vals.iter().filter(|v| **v > 0.0).count();
    (p, vals.len() - p, vals, eig.eigenvectors)
}

fn check_inertia(c: &DMatrix<Complex64>, signature: &Signature) -> Result<()> {
    let (found_p, found_q, _, _) = inertia(c);
    if (found_p, found_q) != (signature.p(), signature.q()) {
        return Err(Error::CSignatureMismatch {
            p: signature.p(),
            q: signature.q(),
            found_p,
            found_q,
        });
    }
    Ok(())
}

/// `C₀` with `C₀* J C₀ = C` from the eigendecomposition of Hermitian `C`.
fn signed_factor(c: &DMatrix<Complex64>, signature: &Signature) -> Result<DMatrix<Complex64>> {
    let (found_p, found_q, vals, vecs) = inertia(c);
    if (found_p, found_q) != (signature.p(), signature.q()) {
        return Err(Error::CSignatureMismatch {
            p: signature.p(),
            q: signature.q(),
            found_p,
            found_q,
        });
    }
    let m = vals.len();
    let mut pos: Vec<usize> = (0..m).filter(|&k| vals[k] > 0.0).collect();
    let mut neg: Vec<usize> = (0..m).filter(|&k| vals[k] <= 0.0).collect();
    // Row k of C₀ is sqrt|λ| e*, taking eigenpairs whose sign matches J_k.
    let mut c0 = DMatrix::zeros(m, m);
    for k in 0..m {
        let idx = if signature.signs()[k] > 0 {
            pos.remove(0)
        } else {
            neg.remove(0)
        };
        let s = vals[idx].abs().sqrt();
        for col in 0..m {
            c0[(k, col)] = vecs[(col, idx)].conj() * s;
        }
    }
    Ok(c0)
}

/// `max_z ‖U(z) J U(z)* - J‖_∞` over a uniform grid.
pub fn junitarity_defect(u: &MatrixLaurent, signature: &Signature, grid: usize) -> f64 {
    let j = signature.to_matrix();
    u.sample(grid)
        .iter()
        .map(|uz| {
            let d = uz * &j * uz.adjoint() - &j;
            d.iter().map(|v| v.norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Mean of `det U(z)` and its relative standard deviation over the grid.
pub fn determinant_spread(u: &MatrixLaurent, grid: usize) -> (Complex64, f64) {
    let dets: Vec<Complex64> = u.sample(grid).into_iter().map(|m| m.determinant()).collect();
    let mean: Complex64 = dets.iter().sum::<Complex64>() / grid as f64;
    let var = dets.iter().map(|d| (d - mean).norm_sqr()).sum::<f64>() / grid as f64;
    let rel = if mean.norm() > 0.0 {
        var.sqrt() / mean.norm()
    } else {
        f64::INFINITY
    };
    (mean, rel)
}

/// Checks `Σ_{k<m} J_k u_k ũ'_k + ũ_m v_m = const` for every pair of columns
/// of a matrix shaped like `V` (last row stored as tildes). Returns the
/// largest non-constant coefficient.
pub fn column_product_defect(v: &MatrixLaurent, signs: &Signature) -> f64 {
    let m = v.rows();
    let mut worst: f64 = 0.0;
    for a in 0..v.cols() {
        for b in 0..v.cols() {
            let mut acc = LaurentPoly::zero();
            for k in 0..m {
                let term = v.get(k, a) * &v.get(k, b).tilde();
                acc = &acc + &term.scale_real(if k + 1 == m { 1.0 } else { signs.sign(k) });
            }
            let nonconst = acc
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(i, _)| acc.lowest() + *i as i64 != 0)
                .map(|(_, c)| c.norm())
                .fold(0.0, f64::max);
            worst = worst.max(nonconst);
        }
    }
    worst
}

/// Largest negative-power coefficient of `F U` relative to its largest
/// coefficient.
pub fn causality_defect(input: &CorrectorInput, u: &MatrixLaurent) -> f64 {
    let m = input.m();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for col in 0..m {
        let mut row = input.fplus.mul(u.get(m - 1, col));
        for (i, z) in input.zetas.iter().enumerate() {
            row = &row + &(z * u.get(i, col));
        }
        worst = worst.max(row.max_abs_negative());
        scale = scale.max(row.max_abs());
    }
    for i in 0..(m - 1) {
        for col in 0..m {
            let e = u.get(i, col);
            worst = worst.max(e.max_abs_negative());
            scale = scale.max(e.max_abs());
        }
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn empty_interaction() {
        let input =
            CorrectorInput::new(vec![LaurentPoly::zero()], LaurentPoly::one(), vec![1], 3).unwrap();
        let sys = assemble_system(&input).unwrap();
        assert_eq!(sys.gamma_matrix(0), DMatrix::zeros(4, 4));
        assert_eq!(sys.d_matrix(), DMatrix::identity(4, 4));
        assert_eq!(sys.delta, DMatrix::identity(4, 4));

        let corr = solve_corrector(&input, SolveOptions::default()).unwrap();
        assert!(corr.u.max_diff(&MatrixLaurent::identity(2)).unwrap() < 1e-15);
        let mut v = MatrixLaurent::identity(2);
        v.set(0, 0, LaurentPoly::from_real(0, &[-1.0]));
        assert!(corr.v.max_diff(&v).unwrap() < 1e-15);
    }

    #[test]
    fn hand_computed_two_by_two() {
        let zeta = LaurentPoly::monomial(c(1.0), -1);
        let input = CorrectorInput::new(vec![zeta.clone()], LaurentPoly::one(), vec![1], 1).unwrap();
        let sys = assemble_system(&input).unwrap();
        let gamma = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        assert_eq!(sys.gamma_matrix(0), gamma);
        assert!((sys.delta.clone() - DMatrix::identity(2, 2) * c(2.0)).norm() < 1e-15);

        let input = CorrectorInput::new(vec![zeta], LaurentPoly::one(), vec![-1], 1).unwrap();
        let sys = assemble_system(&input).unwrap();
        assert!(sys.delta.norm() < 1e-15);
        assert!(matches!(
            solve_corrector(&input, SolveOptions { use_displacement: false }),
            Err(Error::DeltaSingular { .. })
        ));
        assert!(matches!(
            solve_corrector(&input, SolveOptions::default()),
            Err(Error::DeltaSingular { .. })
        ));
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            CorrectorInput::new(
                vec![LaurentPoly::zero()],
                LaurentPoly::from_real(0, &[0.0, 1.0]),
                vec![1],
                2
            ),
            Err(Error::SingularD)
        ));
        assert!(CorrectorInput::new(
            vec![LaurentPoly::monomial(c(1.0), 1)],
            LaurentPoly::one(),
            vec![1],
            2
        )
        .is_err());
        assert!(CorrectorInput::new(vec![], LaurentPoly::one(), vec![1], 2).is_err());
    }

    #[test]
    fn toeplitz_and_hankel_helpers() {
        let d = vec![c(2.0), c(1.0), c(0.5)];
        let b = vec![c(1.0), c(2.0), c(3.0)];
        let x = toeplitz_upper_solve(&d, &b);
        let dm = DMatrix::from_fn(3, 3, |k, l| if l >= k { d[l - k] } else { c(0.0) });
        let back = dm * nalgebra::DVector::from_vec(x);
        for k in 0..3 {
            assert!((back[k] - b[k]).norm() < 1e-15);
        }
        let g = vec![c(1.0), c(2.0), c(3.0)];
        assert_eq!(hankel_mul(&g, &[c(1.0), c(0.0), c(0.0)]), g);
        assert_eq!(hankel_mul(&g, &[c(0.0), c(0.0), c(1.0)]), vec![c(3.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn column_products_detect_perturbation() {
        assert_eq!(column_product_defect(&MatrixLaurent::identity(2), &Signature::identity(2)), 0.0);
        let mut v = MatrixLaurent::identity(2);
        v.set(0, 0, LaurentPoly::from_real(0, &[1.0, 1e-3]));
        assert!(column_product_defect(&v, &Signature::identity(2)) >= 1e-4);
    }
}
