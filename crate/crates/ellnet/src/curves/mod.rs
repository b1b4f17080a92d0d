//! Short Weierstrass curves over the field abstraction.
//!
//! Everything here is generic over [`Field`] so the same group law serves
//! E(Fp), E(Fp2) and E(Fp12). Scalar multiplication is plain double-and-add;
//! it exists as a correctness reference, not as a fast path.

use crate::error::Error;
use crate::field::Field;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

pub mod bls12_381;
pub mod naf;
pub mod nist;
pub mod toy;

/// A curve y^2 = x^3 + a x + b with coefficients in F.
#[derive(Clone, Debug)]
pub struct Curve<F: Field> {
    pub a: F,
    pub b: F,
}

/// Affine point, with an explicit flag for the point at infinity.
#[derive(Clone, Debug)]
pub struct Point<F: Field> {
    pub x: F,
    pub y: F,
    pub infinity: bool,
}

impl<F: Field> PartialEq for Point<F> {
    fn eq(&self, other: &Self) -> bool {
        if self.infinity || other.infinity {
            return self.infinity == other.infinity;
        }
        self.x == other.x && self.y == other.y
    }
}

impl<F: Field> Curve<F> {
    /// Builds the curve, rejecting singular coefficient pairs
    /// (4a^3 + 27b^2 = 0).
    pub fn new(a: F, b: F) -> Result<Self, Error> {
        let a3 = a.sqr().mul(&a);
        let b2 = b.sqr();
        let disc = a3.mul_small(4).add(&b2.mul_small(27));
        if disc.is_zero() {
            return Err(Error::InvalidModulus("singular curve".into()));
        }
        Ok(Self { a, b })
    }

    pub fn infinity(&self) -> Point<F> {
        Point {
            x: self.a.zero_like(),
            y: self.a.zero_like(),
            infinity: true,
        }
    }

    /// Right-hand side x^3 + a x + b.
    pub fn rhs(&self, x: &F) -> F {
        x.sqr().mul(x).add(&self.a.mul(x)).add(&self.b)
    }

    pub fn contains(&self, pt: &Point<F>) -> bool {
        pt.infinity || pt.y.sqr() == self.rhs(&pt.x)
    }

    /// Constructs an affine point, checking the curve equation.
    pub fn point(&self, x: F, y: F) -> Result<Point<F>, Error> {
        let pt = Point { x, y, infinity: false };
        if self.contains(&pt) {
            Ok(pt)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        if p.infinity {
            return p.clone();
        }
        Point {
            x: p.x.clone(),
            y: p.y.neg(),
            infinity: false,
        }
    }

    pub fn dbl(&self, p: &Point<F>) -> Point<F> {
        if p.infinity || p.y.is_zero() {
            return self.infinity();
        }
        // lambda = (3x^2 + a) / 2y
        let num = p.x.sqr().mul_small(3).add(&self.a);
        let den = p.y.dbl();
        let lambda = num.mul(&den.inv().expect("doubling denominator is nonzero"));
        let x3 = lambda.sqr().sub(&p.x.dbl());
        let y3 = lambda.mul(&p.x.sub(&x3)).sub(&p.y);
        Point { x: x3, y: y3, infinity: false }
    }

    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        if p.infinity {
            return q.clone();
        }
        if q.infinity {
            return p.clone();
        }
        if p.x == q.x {
            if p.y == q.y {
                return self.dbl(p);
            }
            return self.infinity();
        }
        let lambda = q
            .y
            .sub(&p.y)
            .mul(&q.x.sub(&p.x).inv().expect("distinct x coordinates"));
        let x3 = lambda.sqr().sub(&p.x).sub(&q.x);
        let y3 = lambda.mul(&p.x.sub(&x3)).sub(&p.y);
        Point { x: x3, y: y3, infinity: false }
    }

    pub fn sub(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        self.add(p, &self.neg(q))
    }

    /// Double-and-add scalar multiplication over a signed scalar. This is the
    /// reference implementation the fast paths are tested against.
    pub fn scalar_mul(&self, p: &Point<F>, k: &BigInt) -> Point<F> {
        let (sign, mag) = k.clone().into_parts();
        let mut acc = self.infinity();
        if mag.is_zero() {
            return acc;
        }
        let bits = mag.bits();
        for i in (0..bits).rev() {
            acc = self.dbl(&acc);
            if mag.bit(i) {
                acc = self.add(&acc, p);
            }
        }
        if sign == Sign::Minus {
            acc = self.neg(&acc);
        }
        acc
    }

    pub fn scalar_mul_biguint(&self, p: &Point<F>, k: &BigUint) -> Point<F> {
        self.scalar_mul(p, &BigInt::from_biguint(Sign::Plus, k.clone()))
    }

    /// The order of `p` in the group, by brute force. Only usable for tiny
    /// test curves.
    pub fn brute_order(&self, p: &Point<F>, cap: u64) -> Option<u64> {
        let mut acc = p.clone();
        for n in 1..=cap {
            if acc.infinity {
                return Some(n);
            }
            acc = self.add(&acc, p);
        }
        None
    }
}

/// Uncompressed point encoding: "04" then both coordinates in canonical
/// big-endian hex, or "00" for the point at infinity.
pub fn point_to_hex<F: Field>(pt: &Point<F>) -> String {
    if pt.infinity {
        "00".into()
    } else {
        format!("04{}{}", pt.x.to_hex(), pt.y.to_hex())
    }
}

/// Parses the encoding produced by [`point_to_hex`], validating the curve
/// equation. `proto` supplies the field context.
pub fn point_from_hex<F: Field>(curve: &Curve<F>, proto: &F, s: &str) -> Result<Point<F>, Error> {
    if s == "00" {
        return Ok(curve.infinity());
    }
    let body = s
        .strip_prefix("04")
        .ok_or_else(|| Error::InvalidEncoding("expected 04 or 00 prefix".into()))?;
    if body.len() % 2 != 0 {
        return Err(Error::InvalidEncoding("odd hex length".into()));
    }
    let half = body.len() / 2;
    let x = F::from_hex_like(proto, &body[..half])?;
    let y = F::from_hex_like(proto, &body[half..])?;
    curve.point(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::{Fp, FpCtx, PrimeModulus};

    fn small_ctx(p: u64) -> FpCtx {
        FpCtx::new(PrimeModulus::new(&BigUint::from(p)).unwrap(), false)
    }

    /// first affine point with x >= 1 on the curve
    fn any_point(curve: &Curve<Fp>, ctx: &FpCtx) -> Point<Fp> {
        for xi in 1u64.. {
            let x = ctx.from_u64(xi);
            if let Some(y) = curve.rhs(&x).sqrt() {
                return curve.point(x, y).unwrap();
            }
        }
        unreachable!()
    }

    /// Brute-forces every point on the curve. Returns the group order.
    fn enumerate(curve: &Curve<Fp>, ctx: &FpCtx, p: u64) -> (u64, Vec<Point<Fp>>) {
        let mut pts = vec![];
        for xi in 0..p {
            let x = ctx.from_u64(xi);
            let rhs = curve.rhs(&x);
            if rhs.is_zero() {
                pts.push(curve.point(x, ctx.zero()).unwrap());
            } else if let Some(y) = rhs.sqrt() {
                pts.push(curve.point(x.clone(), y.clone()).unwrap());
                pts.push(curve.point(x, y.neg()).unwrap());
            }
        }
        (pts.len() as u64 + 1, pts)
    }

    #[test]
    fn group_law_against_enumeration() {
        let p = 1019u64;
        let ctx = small_ctx(p);
        let curve = Curve::new(ctx.from_u64(2), ctx.from_u64(3)).unwrap();
        let (n, pts) = enumerate(&curve, &ctx, p);

        // Hasse bound
        let t = p as i64 + 1 - n as i64;
        assert!((t * t) as u64 <= 4 * p);

        // every affine point has order dividing n
        for pt in pts.iter().step_by(7) {
            let npt = curve.scalar_mul(pt, &BigInt::from(n));
            assert!(npt.infinity, "order of point does not divide group order");
        }

        // closure plus associativity spot checks
        let a = &pts[3];
        let b = &pts[11];
        let c = &pts[17];
        let ab = curve.add(a, b);
        assert!(curve.contains(&ab));
        let left = curve.add(&curve.add(a, b), c);
        let right = curve.add(a, &curve.add(b, c));
        assert_eq!(left, right);
    }

    #[test]
    fn scalar_mul_matches_repeated_addition() {
        let ctx = small_ctx(1019);
        let curve = Curve::new(ctx.from_u64(2), ctx.from_u64(3)).unwrap();
        let g = any_point(&curve, &ctx);
        let mut acc = curve.infinity();
        for k in 0..40i64 {
            assert_eq!(curve.scalar_mul(&g, &BigInt::from(k)), acc);
            assert_eq!(
                curve.scalar_mul(&g, &BigInt::from(-k)),
                curve.neg(&acc),
                "negative scalar k={k}"
            );
            acc = curve.add(&acc, &g);
        }
    }

    #[test]
    fn singular_curves_are_rejected() {
        let ctx = small_ctx(1019);
        // 4a^3 + 27b^2 = 0 for a = -3, b = 2 (discriminant of x^3 - 3x + 2)
        let a = ctx.from_i64(-3);
        let b = ctx.from_u64(2);
        assert!(Curve::new(a, b).is_err());
    }

    #[test]
    fn point_encoding_roundtrip() {
        let ctx = small_ctx(1019);
        let curve = Curve::new(ctx.from_u64(2), ctx.from_u64(3)).unwrap();
        let g = any_point(&curve, &ctx);
        let enc = point_to_hex(&g);
        assert!(enc.starts_with("04"));
        let back = point_from_hex(&curve, &ctx.zero(), &enc).unwrap();
        assert_eq!(back, g);

        assert_eq!(point_to_hex(&curve.infinity()), "00");
        let inf = point_from_hex(&curve, &ctx.zero(), "00").unwrap();
        assert!(inf.infinity);

        // off-curve encodings are rejected
        let bogus = format!("04{}{}", ctx.from_u64(5).to_hex(), ctx.from_u64(5).to_hex());
        assert!(matches!(
            point_from_hex(&curve, &ctx.zero(), &bogus),
            Err(Error::NotOnCurve)
        ));
    }
}
