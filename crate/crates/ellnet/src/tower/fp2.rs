//! Quadratic extension Fp2 = Fp[u] / (u^2 + 1).
//!
//! Requires p = 3 (mod 4) so that -1 is a non-residue; every modulus this
//! crate ships satisfies that. Multiplication is Karatsuba (three base
//! products). Under a lazy context the products are kept in double width and
//! each output coefficient pays a single Montgomery reduction, so a full
//! multiplication costs 2 reductions instead of 3.

use crate::error::Error;
use crate::field::{Field, SecondField};
use crate::fp::{Fp, FpCtx, Wide};

#[derive(Clone, PartialEq, Eq)]
pub struct Fp2 {
    pub c0: Fp,
    pub c1: Fp,
}

impl std::fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fp2(0x{} + 0x{}*u)", self.c0.to_hex(), self.c1.to_hex())
    }
}

impl Fp2 {
    pub fn new(c0: Fp, c1: Fp) -> Self {
        Fp2 { c0, c1 }
    }

    pub fn zero(ctx: &FpCtx) -> Self {
        Fp2 {
            c0: ctx.zero(),
            c1: ctx.zero(),
        }
    }

    pub fn one(ctx: &FpCtx) -> Self {
        Fp2 {
            c0: ctx.one(),
            c1: ctx.zero(),
        }
    }

    pub fn u(ctx: &FpCtx) -> Self {
        Fp2 {
            c0: ctx.zero(),
            c1: ctx.one(),
        }
    }

    pub fn from_base(x: &Fp) -> Self {
        Fp2 {
            c0: x.clone(),
            c1: x.ctx().zero(),
        }
    }

    pub fn ctx(&self) -> &FpCtx {
        self.c0.ctx()
    }

    /// Fp2 conjugation, which is also the p-power Frobenius here.
    pub fn conjugate(&self) -> Self {
        Fp2 {
            c0: self.c0.clone(),
            c1: self.c1.neg(),
        }
    }

    /// Multiply by the tower non-residue xi = 1 + u. Costs two additions.
    pub fn mul_by_xi(&self) -> Self {
        Fp2 {
            c0: self.c0.sub(&self.c1),
            c1: self.c0.add(&self.c1),
        }
    }

    /// Norm to the base field: c0^2 + c1^2.
    pub fn norm(&self) -> Fp {
        Fp::mul_add(&self.c0, &self.c0, &self.c1, &self.c1)
    }

    /// Square root via the norm map, returning None for non-squares.
    ///
    /// For z = a + bu with u^2 = -1: if w^2 = z then norm(w)^2 = norm(z), so
    /// norm(z) must be a square in Fp, and Re(w)^2 = (a + sqrt(norm))/2 up to
    /// the sign of the inner root. Both signs are tried and the candidate is
    /// verified by squaring.
    pub fn sqrt(&self) -> Option<Fp2> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let zero = self.c0.ctx().zero();
        if self.c1.is_zero() {
            if let Some(r) = self.c0.sqrt() {
                return Some(Fp2 { c0: r, c1: zero });
            }
            // p = 3 (mod 4) makes -1 a non-residue, so -a is square here
            let r = self.c0.neg().sqrt()?;
            return Some(Fp2 { c0: zero, c1: r });
        }
        let s = self.norm().sqrt()?;
        for s in [s.clone(), s.neg()] {
            let Some(c) = self.c0.add(&s).halve().sqrt() else {
                continue;
            };
            if c.is_zero() {
                continue;
            }
            let d = self.c1.mul(&c.dbl().inv().expect("c is nonzero"));
            let cand = Fp2 { c0: c, c1: d };
            if cand.sqr() == *self {
                return Some(cand);
            }
        }
        None
    }
}

/// An unreduced Fp2 value: one double-width accumulator per coefficient.
///
/// Magnitude is tracked in units of `p << bits(p)` (any single product of
/// reduced values is below one unit). Subtraction inserts offset multiples
/// of p automatically, so arbitrary sums and differences of products can be
/// composed and reduced once at the end. The limb headroom guarantees 64
/// units never overflow, which is asserted.
#[derive(Clone)]
pub struct WideFp2 {
    re: Wide,
    im: Wide,
    re_units: u64,
    im_units: u64,
}

/// Add offset multiples of p covering `units` worth of magnitude; returns
/// the units actually added.
fn cover(w: &mut Wide, units: u64) -> u64 {
    let mut added = 0u64;
    let mut left = units as i64;
    while left > 0 {
        let k = match left {
            1 => 0,
            2 => 1,
            3..=4 => 2,
            _ => 3,
        };
        w.add_offset(k);
        added += 1 << k;
        left -= 1 << k;
    }
    added
}

impl WideFp2 {
    pub fn zero(ctx: &FpCtx) -> Self {
        WideFp2 {
            re: Wide::zero(ctx),
            im: Wide::zero(ctx),
            re_units: 0,
            im_units: 0,
        }
    }

    /// Karatsuba product of two reduced elements, kept wide. Three base
    /// multiplications, no reductions. The cross sums stay unreduced so the
    /// integer identity cross - w00 - w11 = x0 y1 + x1 y0 holds exactly.
    pub fn product(x: &Fp2, y: &Fp2) -> Self {
        let w00 = x.c0.mul_wide(&y.c0);
        let w11 = x.c1.mul_wide(&y.c1);
        let sx = x.c0.sum_unreduced(&x.c1);
        let sy = y.c0.sum_unreduced(&y.c1);
        let mut im = sx.mul_wide(&sy);
        im.sub_assign(&w00);
        im.sub_assign(&w11);
        let mut re = w00;
        re.add_offset(0);
        re.sub_assign(&w11);
        WideFp2 {
            re,
            im,
            re_units: 2,
            im_units: 2,
        }
    }

    /// Squaring kept wide: two base multiplications.
    pub fn square(x: &Fp2) -> Self {
        let re = x.c0.add(&x.c1).mul_wide(&x.c0.sub(&x.c1));
        let mut im = x.c0.mul_wide(&x.c1);
        im.dbl_assign();
        WideFp2 {
            re,
            im,
            re_units: 1,
            im_units: 2,
        }
    }

    pub fn add_assign(&mut self, o: &WideFp2) {
        self.re.add_assign(&o.re);
        self.im.add_assign(&o.im);
        self.re_units += o.re_units;
        self.im_units += o.im_units;
        self.check();
    }

    pub fn sub_assign(&mut self, o: &WideFp2) {
        self.re_units += cover(&mut self.re, o.re_units);
        self.re.sub_assign(&o.re);
        self.im_units += cover(&mut self.im, o.im_units);
        self.im.sub_assign(&o.im);
        self.check();
    }

    pub fn dbl_assign(&mut self) {
        self.re.dbl_assign();
        self.im.dbl_assign();
        self.re_units *= 2;
        self.im_units *= 2;
        self.check();
    }

    /// Multiply by xi = 1 + u without leaving the wide domain.
    pub fn mul_by_xi(&self) -> WideFp2 {
        let mut re = self.re.clone();
        let re_units = self.re_units + cover(&mut re, self.im_units);
        re.sub_assign(&self.im);
        let mut im = self.re.clone();
        im.add_assign(&self.im);
        let out = WideFp2 {
            re,
            im,
            re_units,
            im_units: self.re_units + self.im_units,
        };
        out.check();
        out
    }

    fn check(&self) {
        assert!(
            self.re_units < 64 && self.im_units < 64,
            "wide Fp2 accumulator exceeded the headroom budget"
        );
    }

    /// Two Montgomery reductions, one per coefficient.
    pub fn reduce(&self) -> Fp2 {
        Fp2 {
            c0: self.re.reduce(),
            c1: self.im.reduce(),
        }
    }
}

impl Field for Fp2 {
    fn zero_like(&self) -> Self {
        Fp2::zero(self.ctx())
    }

    fn one_like(&self) -> Self {
        Fp2::one(self.ctx())
    }

    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        Fp2 {
            c0: self.c0.add(&rhs.c0),
            c1: self.c1.add(&rhs.c1),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Fp2 {
            c0: self.c0.sub(&rhs.c0),
            c1: self.c1.sub(&rhs.c1),
        }
    }

    fn neg(&self) -> Self {
        Fp2 {
            c0: self.c0.neg(),
            c1: self.c1.neg(),
        }
    }

    fn dbl(&self) -> Self {
        Fp2 {
            c0: self.c0.dbl(),
            c1: self.c1.dbl(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.ctx().lazy() {
            WideFp2::product(self, rhs).reduce()
        } else {
            let v0 = self.c0.mul(&rhs.c0);
            let v1 = self.c1.mul(&rhs.c1);
            let cross = self.c0.add(&self.c1).mul(&rhs.c0.add(&rhs.c1));
            Fp2 {
                c0: v0.sub(&v1),
                c1: cross.sub(&v0).sub(&v1),
            }
        }
    }

    fn sqr(&self) -> Self {
        // (c0 + c1 u)^2 = (c0+c1)(c0-c1) + 2 c0 c1 u; both coefficients are
        // single products, so laziness has nothing to fuse
        let c0 = self.c0.add(&self.c1).mul(&self.c0.sub(&self.c1));
        let c1 = self.c0.mul(&self.c1).dbl();
        Fp2 { c0, c1 }
    }

    fn mul_small(&self, k: u64) -> Self {
        Fp2 {
            c0: self.c0.mul_small(k),
            c1: self.c1.mul_small(k),
        }
    }

    fn inv(&self) -> Result<Self, Error> {
        let n = self.norm();
        let t = n.inv()?;
        Ok(Fp2 {
            c0: self.c0.mul(&t),
            c1: self.c1.neg().mul(&t),
        })
    }

    /// `a*b - c*d` fused: six base products and two reductions when lazy.
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        if a.ctx().lazy() {
            let mut acc = WideFp2::product(a, b);
            acc.sub_assign(&WideFp2::product(c, d));
            acc.reduce()
        } else {
            a.mul(b).sub(&c.mul(d))
        }
    }

    fn mul_add(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        if a.ctx().lazy() {
            let mut acc = WideFp2::product(a, b);
            acc.add_assign(&WideFp2::product(c, d));
            acc.reduce()
        } else {
            a.mul(b).add(&c.mul(d))
        }
    }

    fn sum_prod(terms: &[(bool, &Self, &Self)]) -> Self {
        assert!(!terms.is_empty() && !terms[0].0, "first term must be added");
        if terms[0].1.ctx().lazy() {
            let mut acc = WideFp2::product(terms[0].1, terms[0].2);
            for (negate, a, b) in &terms[1..] {
                let prod = WideFp2::product(a, b);
                if *negate {
                    acc.sub_assign(&prod);
                } else {
                    acc.add_assign(&prod);
                }
            }
            acc.reduce()
        } else {
            let mut acc = terms[0].1.mul(terms[0].2);
            for (negate, a, b) in &terms[1..] {
                let prod = a.mul(b);
                acc = if *negate { acc.sub(&prod) } else { acc.add(&prod) };
            }
            acc
        }
    }

    fn with_lazy(&self, lazy: bool) -> Self {
        Fp2 {
            c0: self.c0.retag_lazy(lazy),
            c1: self.c1.retag_lazy(lazy),
        }
    }

    fn to_hex(&self) -> String {
        format!("{}{}", self.c0.to_hex(), self.c1.to_hex())
    }

    fn from_hex_like(proto: &Self, s: &str) -> Result<Self, Error> {
        let s = s.strip_prefix("0x").unwrap_or(s);
        let chunk = 2 * proto.ctx().params().byte_len();
        if s.len() != 2 * chunk {
            return Err(Error::InvalidEncoding(format!(
                "expected {} hex digits for an Fp2 element, got {}",
                2 * chunk,
                s.len()
            )));
        }
        Ok(Fp2 {
            c0: proto.ctx().from_hex(&s[..chunk])?,
            c1: proto.ctx().from_hex(&s[chunk..])?,
        })
    }
}

impl SecondField<Fp> for Fp2 {
    fn embed_like(proto: &Self, x: &Fp) -> Self {
        Fp2 {
            c0: x.clone(),
            c1: proto.ctx().zero(),
        }
    }

    fn scale_first(&self, x: &Fp) -> Self {
        Fp2 {
            c0: self.c0.mul(x),
            c1: self.c1.mul(x),
        }
    }

    fn mixed_mul_sub(a: &Self, b: &Fp, c: &Self, d: &Fp) -> Self {
        Fp2 {
            c0: Fp::mul_sub(&a.c0, b, &c.c0, d),
            c1: Fp::mul_sub(&a.c1, b, &c.c1, d),
        }
    }
}

impl SecondField<Fp2> for Fp2 {
    fn embed_like(_proto: &Self, x: &Fp2) -> Self {
        x.clone()
    }

    fn scale_first(&self, x: &Fp2) -> Self {
        self.mul(x)
    }

    fn mixed_mul_sub(a: &Self, b: &Fp2, c: &Self, d: &Fp2) -> Self {
        <Fp2 as Field>::mul_sub(a, b, c, d)
    }
}
