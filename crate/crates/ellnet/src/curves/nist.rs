//! The NIST prime curves P-384 and P-521.
//!
//! Both use a = -3. The two moduli sit on opposite sides of the gcd(3, p-1)
//! split: p384 = 2 (mod 3) so cubing is a bijection on Fp*, while p521 - 1
//! is divisible by 3. Downstream scalar multiplication picks its update
//! scheme based on that distinction, so both curves matter for coverage.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::curves::{Curve, Point};
use crate::error::Error;
use crate::fp::{Fp, FpCtx, PrimeModulus};

pub struct NistCurve {
    pub name: &'static str,
    pub fp: FpCtx,
    pub curve: Curve<Fp>,
    pub g: Point<Fp>,
    /// prime group order (cofactor 1)
    pub order: BigUint,
}

fn build(
    name: &'static str,
    lazy: bool,
    p_hex: &str,
    b_hex: &str,
    gx_hex: &str,
    gy_hex: &str,
    n_hex: &str,
) -> Result<Arc<NistCurve>, Error> {
    let big = |s: &str| BigUint::parse_bytes(s.as_bytes(), 16).expect("valid hex constant");
    let params = PrimeModulus::new(&big(p_hex))?;
    let fp = FpCtx::new(params, lazy);
    let curve = Curve::new(fp.from_i64(-3), fp.from_biguint(&big(b_hex)))?;
    let g = curve.point(fp.from_biguint(&big(gx_hex)), fp.from_biguint(&big(gy_hex)))?;
    Ok(Arc::new(NistCurve {
        name,
        fp,
        curve,
        g,
        order: big(n_hex),
    }))
}

pub fn p384(lazy: bool) -> Result<Arc<NistCurve>, Error> {
    build(
        "P-384",
        lazy,
        "fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffeffffffff0000000000000000ffffffff",
        "b3312fa7e23ee7e4988e056be3f82d19181d9c6efe8141120314088f5013875ac656398d8a2ed19d2a85c8edd3ec2aef",
        "aa87ca22be8b05378eb1c71ef320ad746e1d3b628ba79b9859f741e082542a385502f25dbf55296c3a545e3872760ab7",
        "3617de4a96262c6f5d9e98bf9292dc29f8f41dbd289a147ce9da3113b5f0b8c00a60b1ce1d7e819d7a431d7c90ea0e5f",
        "ffffffffffffffffffffffffffffffffffffffffffffffffc7634d81f4372ddf581a0db248b0a77aecec196accc52973",
    )
}

pub fn p521(lazy: bool) -> Result<Arc<NistCurve>, Error> {
    build(
        "P-521",
        lazy,
        "01ffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff",
        "0051953eb9618e1c9a1f929a21a0b68540eea2da725b99b315f3b8b489918ef109e156193951ec7e937b1652c0bd3bb1bf073573df883d2c34f1ef451fd46b503f00",
        "00c6858e06b70404e9cd9e3ecb662395b4429c648139053fb521f828af606b4d3dbaa14b5e77efe75928fe1dc127a2ffa8de3348b3c1856a429bf97e7e31c2e5bd66",
        "011839296a789a3bc0045c8a5fb42c7d1bd998f54449579b446817afbd17273e662c97ee72995ef42640c550b9013fad0761353c7086a272c24088be94769fd16650",
        "01fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffa51868783bf2f966b7fcc0148f709a5d03bb5c9b8899c47aebb6fb71e91386409",
    )
}
