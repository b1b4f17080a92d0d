//! Textbook Miller loop, kept deliberately naive.
//!
//! This is the reference the net-based pairings are checked against, so it
//! uses nothing but affine chord-and-tangent lines and keeps every vertical
//! factor, whatever the embedding degree. No operation budgeting applies.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

use crate::curves::{Curve, Point};
use crate::error::Error;
use crate::field::Field;

pub(crate) fn support_hit() -> Error {
    Error::DegeneratePair("evaluation point meets the line support".into())
}

/// The tangent line at `t` evaluated at `q`, together with 2t.
fn tangent_eval<F: Field>(curve: &Curve<F>, t: &Point<F>, q: &Point<F>) -> (F, Point<F>) {
    if t.y.is_zero() {
        // 2t = O: the "tangent" is the vertical through t.
        return (q.x.sub(&t.x), curve.infinity());
    }
    let num = t.x.sqr().mul_small(3).add(&curve.a);
    let den = t.y.dbl();
    let lambda = num.mul(&den.inv().expect("nonzero by the y check"));
    let val = q.y.sub(&t.y).sub(&lambda.mul(&q.x.sub(&t.x)));
    (val, curve.dbl(t))
}

/// The chord through `t` and `s` evaluated at `q`, together with t + s.
fn chord_eval<F: Field>(curve: &Curve<F>, t: &Point<F>, s: &Point<F>, q: &Point<F>) -> (F, Point<F>) {
    if t.x == s.x {
        if t.y == s.y {
            return tangent_eval(curve, t, q);
        }
        // t + s = O: vertical through both.
        return (q.x.sub(&t.x), curve.infinity());
    }
    let lambda = s.y.sub(&t.y).mul(&s.x.sub(&t.x).inv().expect("distinct x"));
    let val = q.y.sub(&t.y).sub(&lambda.mul(&q.x.sub(&t.x)));
    (val, curve.add(t, s))
}

/// The vertical through `t` evaluated at `q`; the vertical through O is the
/// constant 1.
pub(crate) fn vertical_eval<F: Field>(t: &Point<F>, q: &Point<F>) -> F {
    if t.infinity {
        return q.x.one_like();
    }
    q.x.sub(&t.x)
}

/// The line through `a` and `b` (tangent when they coincide, vertical when
/// they oppose or one of them is O) evaluated at `at`. The "line" through O
/// and O is the constant 1.
pub(crate) fn line_through<F: Field>(
    curve: &Curve<F>,
    a: &Point<F>,
    b: &Point<F>,
    at: &Point<F>,
) -> F {
    match (a.infinity, b.infinity) {
        (true, true) => at.x.one_like(),
        (true, false) => vertical_eval(b, at),
        (false, true) => vertical_eval(a, at),
        (false, false) => chord_eval(curve, a, b, at).0,
    }
}

/// f_{n, s} evaluated at `q`: the function with divisor
/// n(s) - (ns) - (n-1)(O), normalized to leading coefficient 1 at O,
/// built by plain double-and-add over the bits of n.
pub fn miller_oracle<F: Field>(
    curve: &Curve<F>,
    s: &Point<F>,
    q: &Point<F>,
    n: &BigUint,
) -> Result<F, Error> {
    if s.infinity || q.infinity {
        return Err(Error::DegeneratePair("miller points must be affine".into()));
    }
    if n.is_zero() {
        return Err(Error::Unsupported("miller loop needs n >= 1".into()));
    }
    let mut f = q.x.one_like();
    let mut t = s.clone();
    for i in (0..n.bits() - 1).rev() {
        let (line, t2) = tangent_eval(curve, &t, q);
        let vert = vertical_eval(&t2, q);
        if line.is_zero() || vert.is_zero() {
            return Err(support_hit());
        }
        f = f.sqr().mul(&line).mul(&vert.inv()?);
        t = t2;
        if n.bit(i) {
            let (line, ts) = chord_eval(curve, &t, s, q);
            let vert = vertical_eval(&ts, q);
            if line.is_zero() || vert.is_zero() {
                return Err(support_hit());
            }
            f = f.mul(&line).mul(&vert.inv()?);
            t = ts;
        }
    }
    Ok(f)
}

/// f_{n, s}(q) for signed n, via f_{-n} = (f_n * v_{ns})^{-1}.
pub fn miller_signed<F: Field>(
    curve: &Curve<F>,
    s: &Point<F>,
    q: &Point<F>,
    n: &BigInt,
) -> Result<F, Error> {
    match n.sign() {
        Sign::Plus => miller_oracle(curve, s, q, n.magnitude()),
        Sign::NoSign => Err(Error::Unsupported("miller loop needs n != 0".into())),
        Sign::Minus => {
            let mag = n.magnitude();
            let f = miller_oracle(curve, s, q, mag)?;
            let ns = curve.scalar_mul_biguint(s, mag);
            let vert = vertical_eval(&ns, q);
            if vert.is_zero() {
                return Err(support_hit());
            }
            f.mul(&vert).inv()
        }
    }
}

/// f_{n, s} evaluated at the degree-zero divisor (q + r) - (r), the form
/// pairing definitions actually consume. The caller picks the auxiliary
/// point r; both q + r and r must avoid the support of f.
pub fn miller_on_divisor<F: Field>(
    curve: &Curve<F>,
    s: &Point<F>,
    q_plus_r: &Point<F>,
    r: &Point<F>,
    n: &BigUint,
) -> Result<F, Error> {
    let num = miller_oracle(curve, s, q_plus_r, n)?;
    let den = miller_oracle(curve, s, r, n)?;
    Ok(num.mul(&den.inv()?))
}
