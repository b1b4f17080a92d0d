//! Cubic extension Fp6 = Fp2[v] / (v^3 - xi), xi = 1 + u.
//!
//! Multiplication is three-way Karatsuba (six Fp2 products); squaring uses
//! the 2M + 3S split. Under a lazy context every Fp2 product stays wide and
//! each output coefficient pays two reductions, so a full multiplication
//! costs 6 reductions instead of 18 base ones.

use crate::error::Error;
use crate::field::Field;
use crate::fp::FpCtx;
use crate::tower::fp2::{Fp2, WideFp2};

#[derive(Clone, PartialEq, Eq)]
pub struct Fp6 {
    pub c0: Fp2,
    pub c1: Fp2,
    pub c2: Fp2,
}

impl std::fmt::Debug for Fp6 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fp6({:?}, {:?}, {:?})", self.c0, self.c1, self.c2)
    }
}

impl Fp6 {
    pub fn new(c0: Fp2, c1: Fp2, c2: Fp2) -> Self {
        Fp6 { c0, c1, c2 }
    }

    pub fn zero(ctx: &FpCtx) -> Self {
        Fp6 {
            c0: Fp2::zero(ctx),
            c1: Fp2::zero(ctx),
            c2: Fp2::zero(ctx),
        }
    }

    pub fn one(ctx: &FpCtx) -> Self {
        Fp6 {
            c0: Fp2::one(ctx),
            c1: Fp2::zero(ctx),
            c2: Fp2::zero(ctx),
        }
    }

    pub fn from_fp2(x: &Fp2) -> Self {
        Fp6 {
            c0: x.clone(),
            c1: x.zero_like(),
            c2: x.zero_like(),
        }
    }

    pub fn ctx(&self) -> &FpCtx {
        self.c0.ctx()
    }

    /// Multiply by v: (c0, c1, c2) -> (xi*c2, c0, c1).
    pub fn mul_by_v(&self) -> Self {
        Fp6 {
            c0: self.c2.mul_by_xi(),
            c1: self.c0.clone(),
            c2: self.c1.clone(),
        }
    }

    pub fn map<F: Fn(&Fp2) -> Fp2>(&self, f: F) -> Self {
        Fp6 {
            c0: f(&self.c0),
            c1: f(&self.c1),
            c2: f(&self.c2),
        }
    }

    pub fn zip<F: Fn(&Fp2, &Fp2) -> Fp2>(&self, o: &Fp6, f: F) -> Self {
        Fp6 {
            c0: f(&self.c0, &o.c0),
            c1: f(&self.c1, &o.c1),
            c2: f(&self.c2, &o.c2),
        }
    }
}

impl Field for Fp6 {
    fn zero_like(&self) -> Self {
        Fp6::zero(self.ctx())
    }

    fn one_like(&self) -> Self {
        Fp6::one(self.ctx())
    }

    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero() && self.c2.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a.add(b))
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a.sub(b))
    }

    fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    fn dbl(&self) -> Self {
        self.map(|a| a.dbl())
    }

    fn mul(&self, rhs: &Self) -> Self {
        let (a0, a1, a2) = (&self.c0, &self.c1, &self.c2);
        let (b0, b1, b2) = (&rhs.c0, &rhs.c1, &rhs.c2);
        if self.ctx().lazy() {
            let v0 = WideFp2::product(a0, b0);
            let v1 = WideFp2::product(a1, b1);
            let v2 = WideFp2::product(a2, b2);
            let t01 = WideFp2::product(&a0.add(a1), &b0.add(b1));
            let t02 = WideFp2::product(&a0.add(a2), &b0.add(b2));
            let t12 = WideFp2::product(&a1.add(a2), &b1.add(b2));
            // c0 = v0 + xi ((a1+a2)(b1+b2) - v1 - v2)
            let mut m = t12;
            m.sub_assign(&v1);
            m.sub_assign(&v2);
            let mut c0 = m.mul_by_xi();
            c0.add_assign(&v0);
            // c1 = (a0+a1)(b0+b1) - v0 - v1 + xi v2
            let mut c1 = t01;
            c1.sub_assign(&v0);
            c1.sub_assign(&v1);
            c1.add_assign(&v2.mul_by_xi());
            // c2 = (a0+a2)(b0+b2) - v0 - v2 + v1
            let mut c2 = t02;
            c2.sub_assign(&v0);
            c2.sub_assign(&v2);
            c2.add_assign(&v1);
            Fp6 {
                c0: c0.reduce(),
                c1: c1.reduce(),
                c2: c2.reduce(),
            }
        } else {
            let v0 = a0.mul(b0);
            let v1 = a1.mul(b1);
            let v2 = a2.mul(b2);
            let t01 = a0.add(a1).mul(&b0.add(b1));
            let t02 = a0.add(a2).mul(&b0.add(b2));
            let t12 = a1.add(a2).mul(&b1.add(b2));
            Fp6 {
                c0: t12.sub(&v1).sub(&v2).mul_by_xi().add(&v0),
                c1: t01.sub(&v0).sub(&v1).add(&v2.mul_by_xi()),
                c2: t02.sub(&v0).sub(&v2).add(&v1),
            }
        }
    }

    fn sqr(&self) -> Self {
        let (a0, a1, a2) = (&self.c0, &self.c1, &self.c2);
        if self.ctx().lazy() {
            let s0 = WideFp2::square(a0);
            let mut s1 = WideFp2::product(a0, a1);
            s1.dbl_assign();
            let s2 = WideFp2::square(&a0.sub(a1).add(a2));
            let mut s3 = WideFp2::product(a1, a2);
            s3.dbl_assign();
            let s4 = WideFp2::square(a2);
            let mut c0 = s3.mul_by_xi();
            c0.add_assign(&s0);
            let mut c1 = s4.mul_by_xi();
            c1.add_assign(&s1);
            let mut c2 = s1;
            c2.add_assign(&s2);
            c2.add_assign(&s3);
            c2.sub_assign(&s0);
            c2.sub_assign(&s4);
            Fp6 {
                c0: c0.reduce(),
                c1: c1.reduce(),
                c2: c2.reduce(),
            }
        } else {
            let s0 = a0.sqr();
            let s1 = a0.mul(a1).dbl();
            let s2 = a0.sub(a1).add(a2).sqr();
            let s3 = a1.mul(a2).dbl();
            let s4 = a2.sqr();
            Fp6 {
                c0: s3.mul_by_xi().add(&s0),
                c1: s4.mul_by_xi().add(&s1),
                c2: s1.add(&s2).add(&s3).sub(&s0).sub(&s4),
            }
        }
    }

    fn mul_small(&self, k: u64) -> Self {
        self.map(|a| a.mul_small(k))
    }

    fn inv(&self) -> Result<Self, Error> {
        let (a0, a1, a2) = (&self.c0, &self.c1, &self.c2);
        let big_a = a0.sqr().sub(&a1.mul(a2).mul_by_xi());
        let big_b = a2.sqr().mul_by_xi().sub(&a0.mul(a1));
        let big_c = a1.sqr().sub(&a0.mul(a2));
        let t = a2
            .mul(&big_b)
            .add(&a1.mul(&big_c))
            .mul_by_xi()
            .add(&a0.mul(&big_a));
        let tinv = t.inv()?;
        Ok(Fp6 {
            c0: big_a.mul(&tinv),
            c1: big_b.mul(&tinv),
            c2: big_c.mul(&tinv),
        })
    }

    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.mul(b).sub(&c.mul(d))
    }

    fn mul_add(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.mul(b).add(&c.mul(d))
    }

    fn with_lazy(&self, lazy: bool) -> Self {
        Fp6 {
            c0: self.c0.with_lazy(lazy),
            c1: self.c1.with_lazy(lazy),
            c2: self.c2.with_lazy(lazy),
        }
    }

    fn to_hex(&self) -> String {
        format!("{}{}{}", self.c0.to_hex(), self.c1.to_hex(), self.c2.to_hex())
    }

    fn from_hex_like(proto: &Self, s: &str) -> Result<Self, Error> {
        let s = s.strip_prefix("0x").unwrap_or(s);
        let chunk = 4 * proto.ctx().params().byte_len();
        if s.len() != 3 * chunk {
            return Err(Error::InvalidEncoding(format!(
                "expected {} hex digits for an Fp6 element, got {}",
                3 * chunk,
                s.len()
            )));
        }
        Ok(Fp6 {
            c0: Fp2::from_hex_like(&proto.c0, &s[..chunk])?,
            c1: Fp2::from_hex_like(&proto.c0, &s[chunk..2 * chunk])?,
            c2: Fp2::from_hex_like(&proto.c0, &s[2 * chunk..])?,
        })
    }
}
