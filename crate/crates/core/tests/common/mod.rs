#![allow(dead_code)]

use channel_fidelity::random::Sampler;
use channel_fidelity::{ComplexMatrix, QuantumChannel};

/// Random channel with a Kraus rank drawn from the admissible range.
pub fn random_channel(d_in: usize, d_out: usize, sampler: &mut Sampler) -> QuantumChannel {
    let lo = d_in.div_ceil(d_out);
    let rank = lo + sampler.index(d_in * d_out - lo + 1);
    QuantumChannel::random_with(d_in, d_out, rank, sampler).unwrap()
}

/// Entry `(i, j)` of `A (x) B` straight from the index formula.
pub fn kron_entry(a: &ComplexMatrix, b: &ComplexMatrix, i: usize, j: usize) -> channel_fidelity::Complex64 {
    let (p, q) = b.shape();
    a[(i / p, j / q)] * b[(i % p, j % q)]
}
