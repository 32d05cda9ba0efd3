//! Seeded random test instances `S = A J A*` with a known causal factor.
//!
//! `A(z) = L₀ (I + Σ_k B_k z^k)` with `L₀` lower triangular with positive
//! diagonal and `Σ_k 2^k ‖B_k‖₂ < 1`, so `det A` has no zeros in `|z| ≤ 2`.
//! Candidates are redrawn until every leading minor of `S` has constant sign
//! matching `J` and no leading-minor determinant has a root in the annulus
//! `1/ROOT_GAP < |z| < ROOT_GAP`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fourier;
use crate::matrix::MatrixLaurent;
use crate::roots;
use crate::signature::Signature;
use crate::triangular;

/// Leading-minor determinants have no roots with `|z|` in `(1/ROOT_GAP, ROOT_GAP)`.
pub const ROOT_GAP: f64 = 1.8;

/// Upper bound on `Σ_k 2^k ‖B_k‖₂`.
pub const PERTURBATION_BUDGET: f64 = 0.6;

const MAX_ATTEMPTS: usize = 10_000;

#[derive(Clone, Debug)]
pub struct Instance {
    pub s: MatrixLaurent,
    /// Causal factor with `S = A J A*`.
    pub a: MatrixLaurent,
    pub signature: Signature,
    /// Candidates drawn before acceptance.
    pub attempts: usize,
}

fn random_complex(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius))
}

fn candidate(rng: &mut ChaCha8Rng, r: usize, degree: usize) -> MatrixLaurent {
    let mut l0 = DMatrix::<Complex64>::zeros(r, r);
    for i in 0..r {
        l0[(i, i)] = Complex64::new(rng.gen_range(1.0..2.0), 0.0);
        for j in 0..i {
            l0[(i, j)] = random_complex(rng, 0.5);
        }
    }
    let budget = rng.gen_range(0.1..PERTURBATION_BUDGET);
    let raw: Vec<DMatrix<Complex64>> = (0..degree)
        .map(|_| DMatrix::from_fn(r, r, |_, _| random_complex(rng, 1.0)))
        .collect();
    let weight: f64 = raw
        .iter()
        .enumerate()
        .map(|(k, b)| 2f64.powi(k as i32 + 1) * triangular::spectral_norm(b))
        .sum();
    let mut coeffs = vec![l0.clone()];
    for b in raw {
        let b = if weight > 0.0 { b * Complex64::new(budget / weight, 0.0) } else { b };
        coeffs.push(&l0 * b);
    }
    MatrixLaurent::from_matrix_coeffs(0, &coeffs).expect("square coefficients")
}

fn admissible(s: &MatrixLaurent, signature: &Signature) -> Result<bool> {
    let span = (2 * s.highest().max(0) + 1) as usize;
    let grid = fourier::default_grid_size(span * s.rows()).max(256);
    let report = triangular::minor_sign_report(s, grid)?;
    if !report.all_constant() || report.induced_signature() != *signature {
        return Ok(false);
    }
    for m in 1..=s.rows() {
        let det = triangular::leading_minor_poly(s, m)?;
        if det.is_zero() {
            return Ok(false);
        }
        let coeffs = det.dense(det.lowest(), det.highest());
        let inside = roots::poly_roots(&coeffs)
            .iter()
            .any(|w| w.norm() > 1.0 / ROOT_GAP && w.norm() < ROOT_GAP);
        if inside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Draws `S = A J A*` of size `signature.len()` with `deg A ≤ degree`.
pub fn generate_instance(signature: &Signature, degree: usize, seed: u64) -> Result<Instance> {
    let r = signature.len();
    if r == 0 {
        return Err(Error::InvalidArgument("signature must be non-empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j = MatrixLaurent::from_constant(&signature.to_matrix());
    for attempt in 1..=MAX_ATTEMPTS {
        let a = candidate(&mut rng, r, degree);
        let s = a.mat_mul(&j)?.mat_mul(&a.hermitian_conjugate())?;
        let s = s.add(&s.hermitian_conjugate())?.map(|e| e.scale_real(0.5));
        if admissible(&s, signature)? {
            return Ok(Instance {
                s,
                a,
                signature: signature.clone(),
                attempts: attempt,
            });
        }
    }
    Err(Error::InvalidArgument(format!(
        "no admissible instance for signature {signature} after {MAX_ATTEMPTS} draws"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_hermitian() {
        let sig = Signature::parse("+-+").unwrap();
        let a = generate_instance(&sig, 2, 1).unwrap();
        let b = generate_instance(&sig, 2, 1).unwrap();
        assert_eq!(a.s, b.s);
        assert_eq!(a.s.hermitian_defect(), 0.0);
        let report = triangular::check_minor_signs(&a.s, 256).unwrap();
        assert_eq!(report.induced_signature(), sig);
    }

    #[test]
    fn constant_instance() {
        let sig = Signature::parse("+").unwrap();
        let inst = generate_instance(&sig, 0, 3).unwrap();
        assert_eq!(inst.s.highest(), 0);
        assert!(inst.s.get(0, 0).coeff(0).re > 0.0);
    }

    #[test]
    fn factor_is_stable() {
        let sig = Signature::parse("-+").unwrap();
        let inst = generate_instance(&sig, 3, 11).unwrap();
        for z in fourier::grid_points(64) {
            let w = z * 1.99;
            assert!(inst.a.eval(w).determinant().norm() > 0.0);
        }
    }
}
