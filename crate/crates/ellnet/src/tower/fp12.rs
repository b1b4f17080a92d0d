//! Quadratic extension Fp12 = Fp6[w] / (w^2 - v).
//!
//! The coefficient at w^i (viewing Fp12 as Fp2[w]/(w^6 - xi)) is reachable
//! as the (i mod 2, i div 2) slot of the nested representation; Frobenius
//! uses that to scale by the right power of xi.

use num_bigint::BigUint;

use crate::error::Error;
use crate::field::{Field, SecondField};
use crate::fp::{Fp, FpCtx};
use crate::tower::fp2::Fp2;
use crate::tower::fp6::Fp6;
use crate::tower::FrobeniusTable;

#[derive(Clone, PartialEq, Eq)]
pub struct Fp12 {
    pub c0: Fp6,
    pub c1: Fp6,
}

impl std::fmt::Debug for Fp12 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fp12({:?} + ({:?})*w)", self.c0, self.c1)
    }
}

impl Fp12 {
    pub fn new(c0: Fp6, c1: Fp6) -> Self {
        Fp12 { c0, c1 }
    }

    pub fn zero(ctx: &FpCtx) -> Self {
        Fp12 {
            c0: Fp6::zero(ctx),
            c1: Fp6::zero(ctx),
        }
    }

    pub fn one(ctx: &FpCtx) -> Self {
        Fp12 {
            c0: Fp6::one(ctx),
            c1: Fp6::zero(ctx),
        }
    }

    pub fn from_fp6(x: &Fp6) -> Self {
        Fp12 {
            c0: x.clone(),
            c1: x.zero_like(),
        }
    }

    pub fn from_fp2(x: &Fp2) -> Self {
        Fp12 {
            c0: Fp6::from_fp2(x),
            c1: Fp6::zero(x.ctx()),
        }
    }

    pub fn ctx(&self) -> &FpCtx {
        self.c0.ctx()
    }

    /// Conjugation of the degree two layer: c1 -> -c1. This is the q^6
    /// Frobenius, and for unitary elements (pairing outputs after final
    /// exponentiation) it is the inverse.
    pub fn conjugate(&self) -> Self {
        Fp12 {
            c0: self.c0.clone(),
            c1: self.c1.neg(),
        }
    }

    /// The q^e power Frobenius, e in 1..=3.
    pub fn frobenius(&self, tab: &FrobeniusTable, e: usize) -> Self {
        assert!((1..=3).contains(&e), "frobenius power out of table range");
        let conj = e % 2 == 1;
        let g = |x: &Fp2, i: usize| {
            let base = if conj { x.conjugate() } else { x.clone() };
            if i == 0 {
                base
            } else {
                base.mul(&tab.gamma[e - 1][i - 1])
            }
        };
        Fp12 {
            c0: Fp6::new(g(&self.c0.c0, 0), g(&self.c0.c1, 2), g(&self.c0.c2, 4)),
            c1: Fp6::new(g(&self.c1.c0, 1), g(&self.c1.c1, 3), g(&self.c1.c2, 5)),
        }
    }

    pub fn map_fp2<F: Fn(&Fp2) -> Fp2>(&self, f: F) -> Self {
        Fp12 {
            c0: self.c0.map(&f),
            c1: self.c1.map(&f),
        }
    }

    pub fn zip_fp2<F: Fn(&Fp2, &Fp2) -> Fp2>(&self, o: &Fp12, f: F) -> Self {
        Fp12 {
            c0: self.c0.zip(&o.c0, &f),
            c1: self.c1.zip(&o.c1, &f),
        }
    }
}

impl Field for Fp12 {
    fn zero_like(&self) -> Self {
        Fp12::zero(self.ctx())
    }

    fn one_like(&self) -> Self {
        Fp12::one(self.ctx())
    }

    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        Fp12 {
            c0: self.c0.add(&rhs.c0),
            c1: self.c1.add(&rhs.c1),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Fp12 {
            c0: self.c0.sub(&rhs.c0),
            c1: self.c1.sub(&rhs.c1),
        }
    }

    fn neg(&self) -> Self {
        Fp12 {
            c0: self.c0.neg(),
            c1: self.c1.neg(),
        }
    }

    fn dbl(&self) -> Self {
        Fp12 {
            c0: self.c0.dbl(),
            c1: self.c1.dbl(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let aa = self.c0.mul(&rhs.c0);
        let bb = self.c1.mul(&rhs.c1);
        let cross = self.c0.add(&self.c1).mul(&rhs.c0.add(&rhs.c1));
        Fp12 {
            c0: aa.add(&bb.mul_by_v()),
            c1: cross.sub(&aa).sub(&bb),
        }
    }

    fn sqr(&self) -> Self {
        // complex squaring over Fp6: 2 multiplications
        let t = self.c0.mul(&self.c1);
        let c0 = self
            .c0
            .add(&self.c1)
            .mul(&self.c0.add(&self.c1.mul_by_v()))
            .sub(&t)
            .sub(&t.mul_by_v());
        Fp12 {
            c0,
            c1: t.dbl(),
        }
    }

    fn mul_small(&self, k: u64) -> Self {
        Fp12 {
            c0: self.c0.mul_small(k),
            c1: self.c1.mul_small(k),
        }
    }

    fn inv(&self) -> Result<Self, Error> {
        let t = self.c0.sqr().sub(&self.c1.sqr().mul_by_v()).inv()?;
        Ok(Fp12 {
            c0: self.c0.mul(&t),
            c1: self.c1.neg().mul(&t),
        })
    }

    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.mul(b).sub(&c.mul(d))
    }

    fn mul_add(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.mul(b).add(&c.mul(d))
    }

    fn with_lazy(&self, lazy: bool) -> Self {
        Fp12 {
            c0: self.c0.with_lazy(lazy),
            c1: self.c1.with_lazy(lazy),
        }
    }

    fn to_hex(&self) -> String {
        format!("{}{}", self.c0.to_hex(), self.c1.to_hex())
    }

    fn from_hex_like(proto: &Self, s: &str) -> Result<Self, Error> {
        let s = s.strip_prefix("0x").unwrap_or(s);
        let chunk = 12 * proto.ctx().params().byte_len();
        if s.len() != 2 * chunk {
            return Err(Error::InvalidEncoding(format!(
                "expected {} hex digits for an Fp12 element, got {}",
                2 * chunk,
                s.len()
            )));
        }
        Ok(Fp12 {
            c0: Fp6::from_hex_like(&proto.c0, &s[..chunk])?,
            c1: Fp6::from_hex_like(&proto.c0, &s[chunk..])?,
        })
    }

    fn pow(&self, e: &BigUint) -> Self {
        use num_traits::Zero;
        if e.is_zero() {
            return self.one_like();
        }
        let mut acc = self.clone();
        for i in (0..e.bits() - 1).rev() {
            acc = acc.sqr();
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }
}

impl SecondField<Fp> for Fp12 {
    fn embed_like(proto: &Self, x: &Fp) -> Self {
        let mut out = Fp12::zero(proto.ctx());
        out.c0.c0.c0 = x.clone();
        out
    }

    fn scale_first(&self, x: &Fp) -> Self {
        self.map_fp2(|c| c.scale_first(x))
    }

    fn mixed_mul_sub(a: &Self, b: &Fp, c: &Self, d: &Fp) -> Self {
        a.zip_fp2(c, |x, y| Fp2::mixed_mul_sub(x, b, y, d))
    }
}

impl SecondField<Fp2> for Fp12 {
    fn embed_like(proto: &Self, x: &Fp2) -> Self {
        let mut out = Fp12::zero(proto.ctx());
        out.c0.c0 = x.clone();
        out
    }

    fn scale_first(&self, x: &Fp2) -> Self {
        self.map_fp2(|c| c.mul(x))
    }

    fn mixed_mul_sub(a: &Self, b: &Fp2, c: &Self, d: &Fp2) -> Self {
        a.zip_fp2(c, |x, y| Fp2::mul_sub(x, b, y, d))
    }
}

impl SecondField<Fp12> for Fp12 {
    fn embed_like(_proto: &Self, x: &Fp12) -> Self {
        x.clone()
    }

    fn scale_first(&self, x: &Fp12) -> Self {
        self.mul(x)
    }

    fn mixed_mul_sub(a: &Self, b: &Fp12, c: &Self, d: &Fp12) -> Self {
        Fp12::mul_sub(a, b, c, d)
    }
}
