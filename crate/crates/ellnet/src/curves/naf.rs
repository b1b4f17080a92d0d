//! Signed binary recoding.

use num_bigint::BigUint;
use num_traits::Zero;

/// Non-adjacent form of `k`, least significant digit first. Digits are in
/// {-1, 0, 1} and no two consecutive digits are nonzero; the recoding has
/// minimal Hamming weight among signed binary expansions.
pub fn naf(k: &BigUint) -> Vec<i8> {
    let mut k = k.clone();
    let mut out = Vec::with_capacity(k.bits() as usize + 1);
    let one = BigUint::from(1u64);
    while !k.is_zero() {
        if k.bit(0) {
            // k mod 4 decides the digit: 1 -> +1, 3 -> -1
            let d: i8 = if k.bit(1) { -1 } else { 1 };
            out.push(d);
            if d == 1 {
                k -= &one;
            } else {
                k += &one;
            }
        } else {
            out.push(0);
        }
        k >>= 1;
    }
    out
}

pub fn hamming_weight(digits: &[i8]) -> usize {
    digits.iter().filter(|&&d| d != 0).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn reconstruct(digits: &[i8]) -> BigInt {
        let mut acc = BigInt::from(0);
        for &d in digits.iter().rev() {
            acc = acc * 2 + d;
        }
        acc
    }

    #[test]
    fn naf_reconstructs_and_is_nonadjacent() {
        for k in (0u64..200).chain([12345, 65535, u64::MAX]) {
            let digits = naf(&BigUint::from(k));
            assert_eq!(reconstruct(&digits), BigInt::from(k), "k={k}");
            for w in digits.windows(2) {
                assert!(w[0] == 0 || w[1] == 0, "adjacent nonzero digits for k={k}");
            }
        }
    }

    #[test]
    fn naf_weight_is_minimal_for_dense_values() {
        // 2^64 - 1 has binary weight 64 but signed weight 2
        let digits = naf(&BigUint::from(u64::MAX));
        assert_eq!(hamming_weight(&digits), 2);
        assert_eq!(digits.len(), 65);
    }
}
