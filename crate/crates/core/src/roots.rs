//! Polynomial roots from companion-matrix eigenvalues.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

/// Roots of `Σ coeffs[k] x^k` (ascending order).
///
/// The companion matrix is balanced by powers of two before the complex
/// Schur decomposition; each eigenvalue then gets a few guarded Newton steps.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let Some(top) = coeffs.iter().rposition(|c| *c != zero) else {
        return Vec::new();
    };
    let coeffs = &coeffs[..=top];
    let zeros_at_origin = coeffs.iter().position(|c| *c != zero).unwrap();
    let reduced = &coeffs[zeros_at_origin..];
    let degree = reduced.len() - 1;

    let mut roots = vec![zero; zeros_at_origin];
    if degree == 0 {
        return roots;
    }
    if degree == 1 {
        roots.push(-reduced[0] / reduced[1]);
        return roots;
    }

    // Symmetric coefficient patterns can stall the QR iteration; rotating the
    // variable by a unit phase breaks the symmetry without changing moduli.
    for phase in [0.0, 0.374_281, 1.137_593, 2.618_034] {
        let rot = Complex64::from_polar(1.0, phase);
        if let Some(eigs) = companion_eigenvalues(reduced, rot) {
            for e in eigs {
                roots.push(polish(reduced, e * rot));
            }
            return roots;
        }
    }
    let (_, t) = Schur::new(companion(reduced, Complex64::new(1.0, 0.0))).unpack();
    roots.extend((0..degree).map(|i| polish(reduced, t[(i, i)])));
    roots
}

/// Balanced companion matrix of `p(rot · x)`.
fn companion(reduced: &[Complex64], rot: Complex64) -> DMatrix<Complex64> {
    let degree = reduced.len() - 1;
    let scaled: Vec<Complex64> = reduced
        .iter()
        .enumerate()
        .map(|(k, c)| c * rot.powi(k as i32))
        .collect();
    let lead = scaled[degree];
    let mut m = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        m[(i, degree - 1)] = -scaled[i] / lead;
    }
    balance(&mut m);
    m
}

fn companion_eigenvalues(reduced: &[Complex64], rot: Complex64) -> Option<Vec<Complex64>> {
    let degree = reduced.len() - 1;
    let schur = Schur::try_new(companion(reduced, rot), f64::EPSILON, 200 * degree)?;
    let (_, t) = schur.unpack();
    Some((0..degree).map(|i| t[(i, i)]).collect())
}

/// Parlett–Reinsch diagonal balancing with power-of-two scalings.
fn balance(a: &mut DMatrix<Complex64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += a[(j, i)].l1_norm();
                    row += a[(i, j)].l1_norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut c = col;
            let mut r = row;
            while c < r / RADIX {
                c *= RADIX;
                r /= RADIX;
                f *= RADIX;
            }
            while c >= r * RADIX {
                c /= RADIX;
                r *= RADIX;
                f /= RADIX;
            }
            if (c + r) < 0.95 * total {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

fn horner_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn polish(coeffs: &[Complex64], mut x: Complex64) -> Complex64 {
    for _ in 0..4 {
        let (p, dp) = horner_with_derivative(coeffs, x);
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let next = x - p / dp;
        let (pn, _) = horner_with_derivative(coeffs, next);
        if pn.norm() < p.norm() {
            x = next;
        } else {
            break;
        }
    }
    x
}

/// Smallest root modulus, or `+∞` for constants.
pub fn min_root_modulus(coeffs: &[Complex64]) -> f64 {
    poly_roots(coeffs)
        .iter()
        .map(|r| r.norm())
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v
    }

    #[test]
    fn quadratic_roots() {
        // (x - 2)(x + 3) = x^2 + x - 6
        let r = sorted_by_re(poly_roots(&[c(-6.0), c(1.0), c(1.0)]));
        assert!((r[0] - c(-3.0)).norm() < 1e-13);
        assert!((r[1] - c(2.0)).norm() < 1e-13);
    }

    #[test]
    fn zero_roots_and_constants() {
        assert!(poly_roots(&[c(5.0)]).is_empty());
        assert!(poly_roots(&[c(0.0)]).is_empty());
        let r = poly_roots(&[c(0.0), c(0.0), c(1.0), c(1.0)]);
        assert_eq!(r.iter().filter(|x| x.norm() == 0.0).count(), 2);
        assert!(r.iter().any(|x| (x - c(-1.0)).norm() < 1e-14));
    }

    #[test]
    fn badly_scaled_roots() {
        // roots 1e-3, 1, 1e3
        let r = sorted_by_re(poly_roots(&[c(-1.0), c(1001.001), c(-1001.001), c(1.0)]));
        assert!((r[0] - c(1e-3)).norm() < 1e-12);
        assert!((r[1] - c(1.0)).norm() < 1e-10);
        assert!((r[2] - c(1e3)).norm() < 1e-8);
    }

    #[test]
    fn double_roots_on_circle_cluster() {
        // -(z^2 - 1)^2 = -1 + 2z^2 - z^4
        let r = poly_roots(&[c(-1.0), c(0.0), c(2.0), c(0.0), c(-1.0)]);
        assert_eq!(r.len(), 4);
        for x in r {
            assert!((x.norm() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn min_modulus() {
        assert_eq!(min_root_modulus(&[c(3.0)]), f64::INFINITY);
        assert!((min_root_modulus(&[c(4.0), c(2.0)]) - 2.0).abs() < 1e-14);
    }
}
