//! A deterministically constructed tiny pairing-friendly curve.
//!
//! Embedding degree 2: a prime r divides both #E(Fp) and p + 1, so the
//! r-torsion is fully rational over Fp2 and the Tate pairing lands in the
//! order-r subgroup of Fp2*. The parameters are small enough that naive
//! point counting and exhaustive cross-checks stay cheap, which makes this
//! curve the workhorse for oracle tests.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::curves::{Curve, Point};
use crate::error::Error;
use crate::fp::{Fp, FpCtx, PrimeModulus};
use crate::tower::Fp2;

pub struct ToyCurve {
    pub fp: FpCtx,
    pub p: u64,
    /// #E(Fp)
    pub n: u64,
    /// prime pairing subgroup order
    pub r: u64,
    /// #E(Fp2) = n (2(p+1) - n)
    pub n2: BigUint,
    pub curve: Curve<Fp>,
    pub curve2: Curve<Fp2>,
    /// order-r generator of E(Fp)
    pub g1: Point<Fp>,
    /// order-r point with Frobenius eigenvalue p (the trace-zero eigenspace)
    pub g2: Point<Fp2>,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Legendre symbol of a mod p as -1, 0, 1.
fn legendre(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// #E(Fp) for y^2 = x^3 + ax + b by summing Legendre symbols.
fn count_points(p: u64, a: u64, b: u64) -> u64 {
    let mut n = p as i64 + 1;
    for x in 0..p {
        let rhs = (mulmod(mulmod(x, x, p), x, p) + mulmod(a, x, p) + b) % p;
        n += legendre(rhs, p);
    }
    n as u64
}

/// The p-power Frobenius on E(Fp2) coordinates.
pub fn frobenius_point(pt: &Point<Fp2>) -> Point<Fp2> {
    Point {
        x: pt.x.conjugate(),
        y: pt.y.conjugate(),
        infinity: pt.infinity,
    }
}

struct Found {
    p: u64,
    a: u64,
    b: u64,
    n: u64,
    r: u64,
}

/// Scans for the first parameter set satisfying every constraint. The scan
/// order is fixed, so the result is deterministic.
fn search() -> Found {
    for p in (201u64..3000).step_by(2) {
        // p = 3 (mod 4) gives easy square roots, p = 2 (mod 3) makes cubing
        // a bijection on Fp* (both fast paths get exercised downstream)
        if p % 4 != 3 || p % 3 != 2 || !is_prime_u64(p) {
            continue;
        }
        for a in 1..=6u64 {
            for b in 1..=6u64 {
                if (4 * powmod(a, 3, p) + 27 * mulmod(b, b, p)) % p == 0 {
                    continue;
                }
                let n = count_points(p, a, b);
                let m = 2 * (p + 1) - n;
                for r in 50..=n.min(1000) {
                    let ok = n % r == 0
                        && is_prime_u64(r)
                        && (p + 1) % r == 0
                        && (p - 1) % r != 0
                        && (n / r) % r != 0
                        && (m / r) % r != 0;
                    if ok {
                        return Found { p, a, b, n, r };
                    }
                }
            }
        }
    }
    unreachable!("the scan range is known to contain valid parameters")
}

impl ToyCurve {
    pub fn new(lazy: bool) -> Result<Arc<ToyCurve>, Error> {
        let f = search();
        let params = PrimeModulus::new(&BigUint::from(f.p))?;
        let fp = FpCtx::new(params, lazy);

        let curve = Curve::new(fp.from_u64(f.a), fp.from_u64(f.b))?;
        let curve2 = Curve::new(
            Fp2::from_base(&fp.from_u64(f.a)),
            Fp2::from_base(&fp.from_u64(f.b)),
        )?;

        // order-r point over Fp: clear the cofactor off the first point found
        let cof = BigUint::from(f.n / f.r);
        let mut g1 = None;
        for x in 1..f.p {
            let xe = fp.from_u64(x);
            let rhs = curve.rhs(&xe);
            if let Some(y) = rhs.sqrt() {
                let cand = curve.scalar_mul_biguint(&curve.point(xe, y)?, &cof);
                if !cand.infinity {
                    g1 = Some(cand);
                    break;
                }
            }
        }
        let g1 = g1.expect("E(Fp) has a point of order r");

        // order-r point over Fp2 in the p-eigenspace of Frobenius. The
        // r-Sylow subgroup of E(Fp2) is exactly E[r] (r exactly divides both
        // n and 2(p+1)-n), so cofactor clearing lands in E[r] and the
        // anti-trace T - pi(T) kills the Fp-rational eigenspace.
        let n2 = BigUint::from(f.n) * BigUint::from(2 * (f.p + 1) - f.n);
        let cof2 = &n2 / BigUint::from(f.r * f.r);
        let mut g2 = None;
        'outer: for re in 0..f.p {
            for im in 1..f.p {
                let xe = Fp2::new(fp.from_u64(re), fp.from_u64(im));
                let Some(y) = curve2.rhs(&xe).sqrt() else {
                    continue;
                };
                let t = curve2.scalar_mul_biguint(&curve2.point(xe, y)?, &cof2);
                let cand = curve2.sub(&t, &frobenius_point(&t));
                if !cand.infinity {
                    g2 = Some(cand);
                    break 'outer;
                }
            }
        }
        let g2 = g2.expect("E(Fp2) has a trace-zero point of order r");

        Ok(Arc::new(ToyCurve {
            fp,
            p: f.p,
            n: f.n,
            r: f.r,
            n2,
            curve,
            curve2,
            g1,
            g2,
        }))
    }

    /// Embeds an E(Fp) point into E(Fp2).
    pub fn lift_g1(&self, pt: &Point<Fp>) -> Point<Fp2> {
        Point {
            x: Fp2::from_base(&pt.x),
            y: Fp2::from_base(&pt.y),
            infinity: pt.infinity,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn search_is_deterministic_and_frozen() {
        let f = search();
        // frozen expected parameters; a change here means the scan logic moved
        assert_eq!(
            (f.p, f.a, f.b, f.n, f.r),
            (FROZEN.0, FROZEN.1, FROZEN.2, FROZEN.3, FROZEN.4)
        );
    }

    // captured from the first run of the deterministic scan; the curve is
    // supersingular (trace 0), which is harmless here: the Frobenius
    // eigenvalues on E[r] are still +1 and -1
    const FROZEN: (u64, u64, u64, u64, u64) = (1307, 6, 3, 1308, 109);

    #[test]
    fn constraints_hold() {
        let t = ToyCurve::new(false).unwrap();
        assert!(is_prime_u64(t.p) && is_prime_u64(t.r));
        assert_eq!(t.p % 4, 3);
        assert_eq!(t.p % 3, 2);
        assert_eq!(t.n % t.r, 0);
        assert_eq!((t.p + 1) % t.r, 0);
        assert_ne!((t.p - 1) % t.r, 0);
        // Hasse
        let tr = t.p as i64 + 1 - t.n as i64;
        assert!((tr * tr) as u64 <= 4 * t.p);
    }

    #[test]
    fn generators_have_order_r_and_eigenvalues() {
        let t = ToyCurve::new(false).unwrap();
        let r = BigInt::from(t.r);
        assert!(!t.g1.infinity && !t.g2.infinity);
        assert!(t.curve.scalar_mul(&t.g1, &r).infinity);
        assert!(t.curve2.scalar_mul(&t.g2, &r).infinity);
        // no smaller order: r is prime, so any proper divisor is 1
        assert!(!t.curve.dbl(&t.g1).infinity || t.r == 2);

        // Frobenius fixes g1 and negates g2 (eigenvalue p = -1 mod r)
        let lifted = t.lift_g1(&t.g1);
        assert_eq!(frobenius_point(&lifted), lifted);
        assert_eq!(frobenius_point(&t.g2), t.curve2.neg(&t.g2));
        let p_mod_r = BigInt::from(t.p % t.r);
        assert_eq!(
            t.curve2.scalar_mul(&t.g2, &p_mod_r),
            t.curve2.neg(&t.g2),
            "eigenvalue is p mod r"
        );
    }

    #[test]
    fn fp2_point_counts_are_consistent() {
        let t = ToyCurve::new(false).unwrap();
        // sample points on E(Fp2) and check n2 annihilates them
        let mut checked = 0;
        for re in 0..t.p {
            if checked == 5 {
                break;
            }
            let xe = Fp2::new(t.fp.from_u64(re), t.fp.from_u64(1));
            if let Some(y) = t.curve2.rhs(&xe).sqrt() {
                let pt = t.curve2.point(xe, y).unwrap();
                let dead = t
                    .curve2
                    .scalar_mul(&pt, &BigInt::from(t.n2.clone()));
                assert!(dead.infinity, "group order must annihilate x=({re},1)");
                checked += 1;
            }
        }
        assert_eq!(checked, 5);
    }
}
