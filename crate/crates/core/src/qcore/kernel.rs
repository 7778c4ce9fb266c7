//! Index-level kernels shared by state vectors and density matrices.

use super::{CMatrix, C64};

/// Applies the `2^k × 2^k` matrix `m` to the bits at `positions` of a flat
/// amplitude array. `positions[0]` is the most significant bit of the
/// sub-index that `m` acts on.
pub(crate) fn apply_on_bits(amps: &mut [C64], positions: &[usize], m: &CMatrix) {
    let k = positions.len();
    let sub = 1usize << k;
    debug_assert_eq!(m.nrows(), sub);
    let mask: usize = positions.iter().map(|&b| 1usize << b).sum();
    let offsets: Vec<usize> = (0..sub)
        .map(|s| {
            positions
                .iter()
                .enumerate()
                .filter(|(j, _)| (s >> (k - 1 - j)) & 1 == 1)
                .map(|(_, &b)| 1usize << b)
                .sum()
        })
        .collect();
    let mut buf = vec![C64::new(0.0, 0.0); sub];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (s, slot) in buf.iter_mut().enumerate() {
            *slot = amps[base | offsets[s]];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (s, &v) in buf.iter().enumerate() {
                acc += m[(r, s)] * v;
            }
            amps[base | off] = acc;
        }
    }
}

/// Bit positions of `targets` in an `n`-qubit index (q0 is the MSB).
pub(crate) fn qubit_bits(n: usize, targets: &[usize]) -> Vec<usize> {
    targets.iter().map(|&q| n - 1 - q).collect()
}

/// `K ρ K†` for a column-major `2^n × 2^n` matrix stored flat.
///
/// Viewing the storage as a `2n`-qubit vector, row bits are the low `n`
/// bits and column bits the high `n` bits; `ρ K†` is `conj(K)` acting on
/// the column index.
pub(crate) fn conjugate_by(data: &mut [C64], n: usize, targets: &[usize], k: &CMatrix) {
    let rows = qubit_bits(n, targets);
    let cols: Vec<usize> = rows.iter().map(|b| b + n).collect();
    apply_on_bits(data, &rows, k);
    apply_on_bits(data, &cols, &k.map(|z| z.conj()));
}
