//! Reference matrices with known factorizations.

use crate::laurent::LaurentPoly;
use crate::matrix::MatrixLaurent;
use crate::signature::Signature;

/// A 2×2 Hermitian matrix whose determinant `4(z⁻² - 2 + z²)` vanishes at
/// `z = ±1`; both `s₁₁` and the determinant are negative on the circle.
pub fn singular_example() -> MatrixLaurent {
    MatrixLaurent::new(
        2,
        2,
        vec![
            LaurentPoly::from_real(-1, &[-8.0, -19.0, -8.0]),
            LaurentPoly::from_real(-1, &[-39.0, -73.0, -28.0]),
            LaurentPoly::from_real(-1, &[-28.0, -73.0, -39.0]),
            LaurentPoly::from_real(-1, &[-137.0, -286.0, -137.0]),
        ],
    )
    .expect("2x2")
}

/// Exact factor of [`singular_example`] for `J = diag(-1, 1)`.
pub fn singular_example_factor() -> MatrixLaurent {
    MatrixLaurent::new(
        2,
        2,
        vec![
            LaurentPoly::from_real(0, &[4.0, 2.0]),
            LaurentPoly::from_real(0, &[1.0]),
            LaurentPoly::from_real(0, &[14.0, 10.0]),
            LaurentPoly::from_real(0, &[3.0, 1.0]),
        ],
    )
    .expect("2x2")
}

pub fn singular_example_signature() -> Signature {
    Signature::new(vec![-1, 1]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_factor_reproduces_example() {
        let sp = singular_example_factor();
        let j = MatrixLaurent::from_constant(&singular_example_signature().to_matrix());
        let s = sp.mat_mul(&j).unwrap().mat_mul(&sp.hermitian_conjugate()).unwrap();
        assert_eq!(s.max_diff(&singular_example()).unwrap(), 0.0);
    }
}
