//! Field abstraction used by the net engine and the curve layer.
//!
//! Elements are prototype-based: there are no global contexts, so "give me
//! zero" is phrased as `x.zero_like()` against any element of the right
//! field. This keeps multi-modulus test setups honest and cheap.

use num_bigint::BigUint;

use crate::error::Error;
use crate::fp::Fp;

pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn dbl(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn sqr(&self) -> Self;
    fn mul_small(&self, k: u64) -> Self;
    fn inv(&self) -> Result<Self, Error>;

    /// `a*b - c*d`, implemented with lazy reduction when the context asks
    /// for it.
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self;

    /// `a*b + c*d`.
    fn mul_add(a: &Self, b: &Self, c: &Self, d: &Self) -> Self;

    /// Signed sum of products `sum (+|-) a_i*b_i`; the bool flags a
    /// subtracted term and the first term must be positive. Fields with a
    /// double-width representation fuse the whole sum into one reduction
    /// under lazy contexts; the default just chains full multiplications.
    fn sum_prod(terms: &[(bool, &Self, &Self)]) -> Self {
        assert!(!terms.is_empty() && !terms[0].0, "first term must be added");
        let mut acc = terms[0].1.mul(terms[0].2);
        for (negate, a, b) in &terms[1..] {
            let prod = a.mul(b);
            acc = if *negate { acc.sub(&prod) } else { acc.add(&prod) };
        }
        acc
    }

    /// The same value bound to a context whose reduction strategy matches
    /// `lazy`. Pure bookkeeping: counters and modulus stay shared.
    fn with_lazy(&self, lazy: bool) -> Self;

    fn to_hex(&self) -> String;
    fn from_hex_like(proto: &Self, s: &str) -> Result<Self, Error>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
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

/// The field the second net index lives in, as a module over the first.
///
/// For a pairing net the first vector stays in `F1` while the second vector
/// collects values in an extension `F2`. The cross terms multiply an `F2`
/// value by an `F1` value, which acts componentwise; implementations exploit
/// that to keep the mixed operations sparse.
pub trait SecondField<F1: Field>: Field {
    /// Lift a base field element, using `proto` for the target context.
    fn embed_like(proto: &Self, x: &F1) -> Self;

    /// Multiply by a base field scalar.
    fn scale_first(&self, x: &F1) -> Self;

    /// `a*b - c*d` with `b, d` in the base field.
    fn mixed_mul_sub(a: &Self, b: &F1, c: &Self, d: &F1) -> Self;
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        self.ctx().zero()
    }
    fn one_like(&self) -> Self {
        self.ctx().one()
    }
    fn is_zero(&self) -> bool {
        Fp::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Fp::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Fp::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        Fp::neg(self)
    }
    fn dbl(&self) -> Self {
        Fp::dbl(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Fp::mul(self, rhs)
    }
    fn sqr(&self) -> Self {
        Fp::sqr(self)
    }
    fn mul_small(&self, k: u64) -> Self {
        Fp::mul_small(self, k)
    }
    fn inv(&self) -> Result<Self, Error> {
        Fp::inv(self)
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        Fp::mul_sub(a, b, c, d)
    }
    fn mul_add(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        Fp::mul_add(a, b, c, d)
    }
    fn sum_prod(terms: &[(bool, &Self, &Self)]) -> Self {
        Fp::sum_prod(terms)
    }
    fn with_lazy(&self, lazy: bool) -> Self {
        Fp::retag_lazy(self, lazy)
    }
    fn to_hex(&self) -> String {
        Fp::to_hex(self)
    }
    fn from_hex_like(proto: &Self, s: &str) -> Result<Self, Error> {
        proto.ctx().from_hex(s)
    }
    fn is_one(&self) -> bool {
        Fp::is_one(self)
    }
    fn pow(&self, e: &BigUint) -> Self {
        Fp::pow_biguint(self, e)
    }
}

impl SecondField<Fp> for Fp {
    fn embed_like(_proto: &Self, x: &Fp) -> Self {
        x.clone()
    }
    fn scale_first(&self, x: &Fp) -> Self {
        self.mul(x)
    }
    fn mixed_mul_sub(a: &Self, b: &Fp, c: &Self, d: &Fp) -> Self {
        Fp::mul_sub(a, b, c, d)
    }
}
