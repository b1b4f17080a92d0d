//! The degree twelve extension tower over a prime field:
//!
//! Fp2 = Fp[u]/(u^2 + 1), Fp6 = Fp2[v]/(v^3 - xi), Fp12 = Fp6[w]/(w^2 - v),
//! with xi = 1 + u throughout.
//!
//! [`Tower`] validates that the modulus actually supports this shape
//! (p = 3 mod 4, p = 1 mod 3, and xi a quadratic and cubic non-residue in
//! Fp2) and precomputes the Frobenius scale factors.

pub mod fp12;
pub mod fp2;
pub mod fp6;

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::Error;
use crate::field::Field;
use crate::fp::FpCtx;
pub use fp12::Fp12;
pub use fp2::{Fp2, WideFp2};
pub use fp6::Fp6;

/// Scale factors for the q^e Frobenius on Fp12, e in 1..=3:
/// `gamma[e-1][i-1] = xi^(i (q^e - 1) / 6)` for i in 1..=5.
pub struct FrobeniusTable {
    pub gamma: [[Fp2; 5]; 3],
}

pub struct Tower {
    fp: FpCtx,
    xi: Fp2,
    frob: FrobeniusTable,
}

impl Tower {
    pub fn new(fp: &FpCtx) -> Result<Arc<Tower>, Error> {
        let p = fp.params().modulus().clone();
        if (&p % 4u64) != BigUint::from(3u64) {
            return Err(Error::Unsupported(
                "the tower needs p = 3 (mod 4) so that u^2 = -1 works".into(),
            ));
        }
        if (&p % 3u64) != BigUint::one() {
            return Err(Error::Unsupported(
                "the tower needs p = 1 (mod 3) for the sextic twist structure".into(),
            ));
        }
        let xi = Fp2::new(fp.one(), fp.one());
        let q2_minus_1 = &p * &p - 1u64;
        if xi.pow(&(&q2_minus_1 / 2u64)).is_one() {
            return Err(Error::Unsupported(
                "xi = 1 + u is a square in Fp2; tower undefined".into(),
            ));
        }
        if xi.pow(&(&q2_minus_1 / 3u64)).is_one() {
            return Err(Error::Unsupported(
                "xi = 1 + u is a cube in Fp2; tower undefined".into(),
            ));
        }

        let gamma_row = |e: u32| -> [Fp2; 5] {
            let qe = p.pow(e);
            let exp = (&qe - 1u64) / 6u64;
            let g1 = xi.pow(&exp);
            let g2 = g1.mul(&g1);
            let g3 = g2.mul(&g1);
            let g4 = g3.mul(&g1);
            let g5 = g4.mul(&g1);
            [g1, g2, g3, g4, g5]
        };
        let frob = FrobeniusTable {
            gamma: [gamma_row(1), gamma_row(2), gamma_row(3)],
        };
        Ok(Arc::new(Tower {
            fp: fp.clone(),
            xi,
            frob,
        }))
    }

    pub fn fp(&self) -> &FpCtx {
        &self.fp
    }

    pub fn xi(&self) -> &Fp2 {
        &self.xi
    }

    pub fn frobenius_table(&self) -> &FrobeniusTable {
        &self.frob
    }
}
