use super::{CMatrix, DensityMatrix, StateVector, C64};
use crate::{Error, Result};

/// Ascending eigenvalues and matching eigenvectors (as columns) of the
/// Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, col| {
        eig.eigenvectors[(r, order[col])]
    });
    (values, vectors)
}

/// `½‖a − b‖₁` from the eigenvalues of the Hermitian difference.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let diff = a.entries() - b.entries();
    let (values, _) = hermitian_eigen(&diff);
    let t = 0.5 * values.iter().map(|v| v.abs()).sum::<f64>();
    Ok(t.clamp(0.0, 1.0))
}

/// `<ψ|ρ|ψ>`.
pub fn fidelity(psi: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    Ok(rho.expectation_pure(psi)?.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_pure(n: usize, seed: u64) -> StateVector {
        // small LCG keeps this test free of rng plumbing
        let mut s = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        StateVector::normalized((0..1 << n).map(|_| C64::new(next(), next())).collect()).unwrap()
    }

    #[test]
    fn identical_and_orthogonal_states() {
        let rho = random_pure(2, 3).to_density_matrix();
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-12);
        let zero = DensityMatrix::from_pure(&StateVector::basis(1, 0));
        let one = DensityMatrix::from_pure(&StateVector::basis(1, 1));
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_state_versus_maximally_mixed() {
        // difference has eigenvalues 15/16 once and -1/16 fifteen times
        for seed in 0..5 {
            let rho = random_pure(4, seed).to_density_matrix();
            let t = trace_distance(&rho, &DensityMatrix::maximally_mixed(4)).unwrap();
            assert!((t - 0.9375).abs() < 1e-10, "{t}");
        }
    }

    #[test]
    fn fidelity_cases() {
        let psi = random_pure(4, 11);
        assert!((fidelity(&psi, &psi.to_density_matrix()).unwrap() - 1.0).abs() < 1e-12);
        assert!(
            (fidelity(&psi, &DensityMatrix::maximally_mixed(4)).unwrap() - 1.0 / 16.0).abs()
                < 1e-12
        );
        let zero = StateVector::basis(1, 0);
        let one = DensityMatrix::from_pure(&StateVector::basis(1, 1));
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = DensityMatrix::maximally_mixed(1);
        let b = DensityMatrix::maximally_mixed(2);
        assert!(trace_distance(&a, &b).is_err());
        assert!(fidelity(&StateVector::zero(2), &a).is_err());
    }
}
