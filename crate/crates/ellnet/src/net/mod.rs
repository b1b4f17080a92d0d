//! Block-based elliptic net evaluation.
//!
//! An elliptic net attaches a field value W(m, n) to every pair of indices;
//! the ones used here are indexed by multiples of a point P (first index)
//! and a companion point Q (second index). The engine never materializes the
//! whole net. It keeps a sliding block: seven or eight consecutive first
//! vector terms W(center-3 ..), plus the three second vector terms
//! W(center-1 .. center+1, 1), and grows the center left to right through
//! the bits of the scalar. Each step doubles the center and optionally adds
//! or subtracts one, so a scalar walk costs one block update per bit.
//!
//! Two block shapes are supported. The eight-term shape (`Algorithm::Ena`)
//! reaches every child term with plain two-product combinations and never
//! divides. The seven-term shape (`Algorithm::Iena`) is cheaper per step
//! but its double-and-add update needs one extra term from outside the
//! block, recovered through a division by the fresh W(2*center, 0); that
//! division can either run as an actual inversion or be traded away by
//! rescaling the rest of the first vector (`eliminate_inversion`).
//!
//! All step recipes hit fixed operation budgets which the unit tests pin
//! reduction by reduction.

pub mod oracle;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::json;

use crate::curves::naf::naf;
use crate::error::Error;
use crate::field::{Field, SecondField};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Algorithm {
    /// Eight-term blocks, inversion free, no digit recoding.
    Ena,
    /// Seven-term blocks with the improved update schedule.
    Iena,
}

/// Configuration of a net walk. The flags are orthogonal except where
/// `validate` says otherwise: NAF digits and inversion elimination only
/// make sense for the seven-term blocks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NetVariant {
    pub algorithm: Algorithm,
    pub lazy_reduction: bool,
    pub eliminate_inversion: bool,
    pub use_naf: bool,
    /// Consumed by the pairing layer to pick the twisted-coordinate route;
    /// the block engine itself is agnostic.
    pub twisted: bool,
}

impl NetVariant {
    pub fn ena() -> Self {
        NetVariant {
            algorithm: Algorithm::Ena,
            lazy_reduction: false,
            eliminate_inversion: false,
            use_naf: false,
            twisted: false,
        }
    }

    pub fn iena() -> Self {
        NetVariant {
            algorithm: Algorithm::Iena,
            ..Self::ena()
        }
    }

    pub fn lazy(mut self, on: bool) -> Self {
        self.lazy_reduction = on;
        self
    }

    pub fn elim_inv(mut self, on: bool) -> Self {
        self.eliminate_inversion = on;
        self
    }

    pub fn naf(mut self, on: bool) -> Self {
        self.use_naf = on;
        self
    }

    pub fn twist(mut self, on: bool) -> Self {
        self.twisted = on;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.algorithm == Algorithm::Ena && self.use_naf {
            return Err(Error::Unsupported(
                "NAF digit recoding requires the seven-term blocks".into(),
            ));
        }
        if self.algorithm == Algorithm::Ena && self.eliminate_inversion {
            return Err(Error::Unsupported(
                "the eight-term blocks never invert, nothing to eliminate".into(),
            ));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let mut s = String::from(match self.algorithm {
            Algorithm::Ena => "ena",
            Algorithm::Iena => "iena",
        });
        if self.lazy_reduction {
            s.push_str("+lazy");
        }
        if self.eliminate_inversion {
            s.push_str("+elim");
        }
        if self.use_naf {
            s.push_str("+naf");
        }
        if self.twisted {
            s.push_str("+twist");
        }
        s
    }
}

/// The handful of values a net grows from.
///
/// `a, b, c` are W(2,0), W(3,0), W(4,0) and depend on P alone. The rest sit
/// on the second row: `d = W(2,1)`, `e = W(-1,1)`, `f = W(2,-1)` and
/// `g = W(1,1)`. Point-derived nets always have `g = 1`, but the engine
/// carries a general `g` so rescaled nets can be walked too.
#[derive(Clone, Debug)]
pub struct NetSeeds<F1, F2> {
    pub a: F1,
    pub b: F1,
    pub c: F1,
    pub d: F2,
    pub e: F2,
    pub f: F2,
    pub g: F2,
}

/// psi_2, psi_3, psi_4 evaluated at P, in that order.
///
/// The schedule is shaped so the reduction count is a fixed function of the
/// curve: 10 reductions in general, 8 when b6 = 0, 6 when a4 = 0, and with
/// lazy contexts 7 / 6 / 5, since the bracket of psi_4 then folds into a
/// single double-width accumulation.
pub fn first_vector_seeds<F: Field>(x: &F, y: &F, a4: &F, b6: &F) -> (F, F, F) {
    let a = y.dbl();
    let x2 = x.sqr();
    if a4.is_zero() {
        let x3 = x.mul(&x2);
        let b = x.mul(&x3.mul_small(3).add(&b6.mul_small(12)));
        let bracket = F::sum_prod(&[
            (false, &x3, &x3),
            (false, b6, &x3.mul_small(20).sub(&b6.mul_small(8))),
        ]);
        let c = a.mul(&bracket).dbl();
        return (a, b, c);
    }
    if b6.is_zero() {
        let x4 = x2.sqr();
        let ax2 = a4.mul(&x2);
        let asq = a4.sqr();
        let b = x4.mul_small(3).add(&ax2.mul_small(6)).sub(&asq);
        let bracket = F::sum_prod(&[
            (false, &x2, &x4),
            (false, &ax2.mul_small(5), &x2),
            (true, &asq, &x2.mul_small(5).add(a4)),
        ]);
        let c = a.mul(&bracket).dbl();
        return (a, b, c);
    }
    let x3 = x.mul(&x2);
    let ax = a4.mul(x);
    let asq = a4.sqr();
    let b = x
        .mul(&x3.mul_small(3).add(&ax.mul_small(6)).add(&b6.mul_small(12)))
        .sub(&asq);
    let bracket = F::sum_prod(&[
        (false, &x3, &x3),
        (false, &ax.mul_small(5), &x3),
        (true, &asq, &x2.mul_small(5).add(a4)),
        (
            false,
            b6,
            &x3.mul_small(20).sub(&ax.mul_small(4)).sub(&b6.mul_small(8)),
        ),
    ]);
    let c = a.mul(&bracket).dbl();
    (a, b, c)
}

/// All seven seed values for the net of a point pair (P, Q) on
/// y^2 = x^3 + a4 x + b6, with P given in the first-vector field and Q in
/// the second. Rejects pairs whose seeds vanish identically: P of order
/// two and Q equal to P or -P have no walkable net, and Q = 2P kills the
/// W(2,-1) seed the add steps divide by.
pub fn pair_seeds<F1: Field, F2: SecondField<F1>>(
    a4: &F1,
    b6: &F1,
    p: (&F1, &F1),
    q: (&F2, &F2),
) -> Result<NetSeeds<F1, F2>, Error> {
    let (x1, y1) = p;
    let (x2, y2) = q;
    let (a, b, c) = first_vector_seeds(x1, y1, a4, b6);
    if a.is_zero() {
        return Err(Error::DegeneratePair("P is a two-torsion point".into()));
    }
    let x1q = F2::embed_like(x2, x1);
    let y1q = F2::embed_like(x2, y1);
    let e = x1q.sub(x2);
    if e.is_zero() {
        return Err(Error::DegeneratePair("Q coincides with P or -P".into()));
    }
    // W(2,1) comes from the chord through P and Q: with s its slope,
    // W(2,1) = 2 x_P + x_Q - s^2.
    let s = y2.sub(&y1q).mul(&e.neg().inv()?);
    let two_xp_xq = x1q.dbl().add(x2);
    let d = two_xp_xq.sub(&s.sqr());
    let f = y1q.add(y2).sqr().sub(&two_xp_xq.mul(&e.sqr()));
    if f.is_zero() {
        return Err(Error::DegeneratePair("Q coincides with 2P".into()));
    }
    let g = d.one_like();
    Ok(NetSeeds { a, b, c, d, e, f, g })
}

/// A sliding net block mid-walk.
pub struct Net<F1: Field, F2: SecondField<F1>> {
    variant: NetVariant,
    v1: Vec<F1>,
    v2: [F2; 3],
    /// W(2,0)^{-1}
    alpha: F1,
    /// W(2,0)^2
    omega2: F1,
    /// W(1,0) W(3,0)
    omega13: F1,
    /// W(1,1)^{-1}
    delta: F2,
    /// W(-1,1)^{-1}
    beta: F2,
    /// W(2,-1)^{-1}
    gamma1: F2,
    /// W(2,1)^{-1}, prepared only when the walk may subtract.
    dinv: Option<F2>,
    center: BigUint,
}

impl<F1: Field, F2: SecondField<F1>> Net<F1, F2> {
    /// Seed a net for the pair (P, Q) on y^2 = x^3 + a4 x + b6. P supplies
    /// the first vector; Q enters through the second-row seeds. Pairs where
    /// one of the seed values vanishes (P of order two, Q = +-P, Q = 2P,
    /// and Q = -2P on NAF walks) cannot be walked and are rejected.
    pub fn init(
        variant: NetVariant,
        a4: &F1,
        b6: &F1,
        p: (&F1, &F1),
        q: (&F2, &F2),
    ) -> Result<Self, Error> {
        variant.validate()?;
        Self::from_seeds(variant, pair_seeds(a4, b6, p, q)?)
    }

    /// Walk a net grown from raw seed values. This is the entry point for
    /// rescaled nets and for cross-checking against term oracles.
    pub fn from_seeds(variant: NetVariant, seeds: NetSeeds<F1, F2>) -> Result<Self, Error> {
        variant.validate()?;
        let lazy = variant.lazy_reduction;
        let a = seeds.a.with_lazy(lazy);
        let b = seeds.b.with_lazy(lazy);
        let c = seeds.c.with_lazy(lazy);
        let d = seeds.d.with_lazy(lazy);
        let e = seeds.e.with_lazy(lazy);
        let f = seeds.f.with_lazy(lazy);
        let g = seeds.g.with_lazy(lazy);

        if a.is_zero() {
            return Err(Error::DegeneratePair("P is a two-torsion point".into()));
        }
        let alpha = a.inv()?;
        let degenerate = |what: &str| Error::DegeneratePair(format!("{what} vanishes"));
        let delta = g.inv().map_err(|_| degenerate("W(1,1)"))?;
        let beta = e.inv().map_err(|_| degenerate("W(-1,1)"))?;
        let gamma1 = f.inv().map_err(|_| degenerate("W(2,-1)"))?;
        let dinv = if variant.use_naf {
            Some(d.inv().map_err(|_| degenerate("W(2,1)"))?)
        } else {
            None
        };

        let omega2 = a.sqr();
        let omega13 = b.clone();
        let zero = a.zero_like();
        let one = a.one_like();
        let mut v1 = vec![a.neg(), one.neg(), zero, one, a.clone(), b.clone(), c.clone()];
        if variant.algorithm == Algorithm::Ena {
            // W(5,0) = W(4,0) W(2,0)^3 - W(3,0)^3
            let a3 = a.sqr().mul(&a);
            v1.push(F1::mul_sub(&c, &a3, &b.sqr(), &b));
        }
        let v2 = [g.one_like(), g, d];
        Ok(Net {
            variant,
            v1,
            v2,
            alpha,
            omega2,
            omega13,
            delta,
            beta,
            gamma1,
            dinv,
            center: BigUint::one(),
        })
    }

    pub fn variant(&self) -> NetVariant {
        self.variant
    }

    pub fn center(&self) -> &BigUint {
        &self.center
    }

    pub fn v1(&self) -> &[F1] {
        &self.v1
    }

    pub fn v2(&self) -> &[F2; 3] {
        &self.v2
    }

    /// W(center + k, 0), for k in -3..=3 (-3..=4 on eight-term blocks).
    pub fn first(&self, k: i64) -> &F1 {
        &self.v1[usize::try_from(k + 3).expect("offset out of block range")]
    }

    /// W(center + k, 1), for k in -1..=1.
    pub fn second(&self, k: i64) -> &F2 {
        &self.v2[usize::try_from(k + 1).expect("offset out of block range")]
    }

    /// Squares and adjacent products of the current block, the shared
    /// prologue of every step.
    fn step_tables(&self) -> (Vec<F1>, Vec<F1>, F2, F2) {
        let t = self.v1.len() - 2;
        let mut s = Vec::with_capacity(t);
        let mut p = Vec::with_capacity(t);
        for j in 0..t {
            s.push(self.v1[j + 1].sqr());
        }
        for j in 0..t {
            p.push(self.v1[j].mul(&self.v1[j + 2]));
        }
        let s0 = self.v2[1].sqr();
        let p0 = self.v2[0].mul(&self.v2[2]);
        (s, p, s0, p0)
    }

    fn degenerate_at(index: &BigUint) -> Error {
        Error::DegenerateIndex(i64::try_from(index).unwrap_or(i64::MAX))
    }

    /// center -> 2*center.
    pub fn double(&mut self) -> Result<(), Error> {
        let (s, p, s0, p0) = self.step_tables();
        let mut new = Vec::with_capacity(self.v1.len());
        for idx in 0..self.v1.len() {
            let j = idx / 2;
            let term = if idx % 2 == 0 {
                F1::mul_sub(&s[j], &p[j + 1], &s[j + 1], &p[j])
            } else {
                F1::mul_sub(&s[j], &p[j + 2], &s[j + 2], &p[j]).mul(&self.alpha)
            };
            new.push(term);
        }
        self.v1 = new;
        self.v2 = [
            F2::mixed_mul_sub(&p0, &s[1], &s0, &p[1]).mul(&self.delta),
            F2::mixed_mul_sub(&p0, &s[2], &s0, &p[2]),
            F2::mixed_mul_sub(&p0, &s[3], &s0, &p[3]).mul(&self.beta),
        ];
        self.center = &self.center << 1;
        Ok(())
    }

    /// center -> 2*center + 1.
    pub fn double_add(&mut self) -> Result<(), Error> {
        let (s, p, s0, p0) = self.step_tables();
        let len = self.v1.len();
        let mut new = Vec::with_capacity(len);
        let fixed = if self.variant.algorithm == Algorithm::Ena { len } else { len - 1 };
        for idx in 0..fixed {
            let term = if idx % 2 == 0 {
                let j = idx / 2;
                F1::mul_sub(&s[j], &p[j + 2], &s[j + 2], &p[j]).mul(&self.alpha)
            } else {
                let j = idx / 2 + 1;
                F1::mul_sub(&s[j], &p[j + 1], &s[j + 1], &p[j])
            };
            new.push(term);
        }
        let second = [
            F2::mixed_mul_sub(&p0, &s[2], &s0, &p[2]),
            F2::mixed_mul_sub(&p0, &s[3], &s0, &p[3]).mul(&self.beta),
            F2::mixed_mul_sub(&s0, &p[4], &p0, &s[4]).mul(&self.gamma1),
        ];
        if self.variant.algorithm == Algorithm::Iena {
            self.edge(&mut new, Edge::Right, second)?;
        } else {
            self.v2 = second;
            self.v1 = new;
        }
        self.center = (&self.center << 1) + 1u32;
        Ok(())
    }

    /// center -> 2*center - 1. Only reachable through NAF walks.
    pub fn double_sub(&mut self) -> Result<(), Error> {
        let dinv = self
            .dinv
            .as_ref()
            .ok_or_else(|| {
                Error::Unsupported("subtracting steps need a NAF-enabled variant".into())
            })?
            .clone();
        let (s, p, s0, p0) = self.step_tables();
        let mut new = Vec::with_capacity(7);
        for idx in 1..7 {
            let term = if idx % 2 == 1 {
                let j = idx / 2;
                F1::mul_sub(&s[j], &p[j + 1], &s[j + 1], &p[j])
            } else {
                let j = idx / 2 - 1;
                F1::mul_sub(&s[j], &p[j + 2], &s[j + 2], &p[j]).mul(&self.alpha)
            };
            new.push(term);
        }
        let second = [
            F2::mixed_mul_sub(&p0, &s[0], &s0, &p[0]).mul(&dinv),
            F2::mixed_mul_sub(&p0, &s[1], &s0, &p[1]).mul(&self.delta),
            F2::mixed_mul_sub(&p0, &s[2], &s0, &p[2]),
        ];
        self.edge(&mut new, Edge::Left, second)?;
        self.center = (&self.center << 1) - 1u32;
        Ok(())
    }

    /// Recover the one child term the seven-term block cannot reach with
    /// plain combinations: W(2c+4) on add steps, W(2c-4) on subtract steps.
    /// Both satisfy
    ///   W(M+2) W(M-2) = W(M+1) W(M-1) W(2)^2 - W(1) W(3) W(M)^2
    /// around M = 2c+2 resp. 2c-2, which leaves a division by the already
    /// computed W(2c). Under `eliminate_inversion` the division is traded
    /// for a uniform rescaling of the six sibling first-vector terms; the
    /// second vector keeps its natural scale. The two vectors then drift
    /// apart by a factor built from W(2c) values, which in every pairing
    /// configuration lies in a class the final exponentiation kills, so
    /// reduced pairing values are unaffected.
    fn edge(&mut self, new: &mut Vec<F1>, side: Edge, second: [F2; 3]) -> Result<(), Error> {
        // Indices into `new` before the edge value joins it. On add steps
        // the six sibling terms are W(2c-2)..W(2c+3); on subtract steps
        // they are W(2c-3)..W(2c+2). The divisor is W(2c) either way.
        let (divisor_idx, a_idx, b_idx, sq_idx) = match side {
            Edge::Right => (2, 3, 5, 4),
            Edge::Left => (3, 2, 0, 1),
        };
        let dv = new[divisor_idx].clone();
        if dv.is_zero() {
            return Err(Self::degenerate_at(&(&self.center << 1)));
        }
        let vt1 = new[a_idx].mul(&new[b_idx]);
        let vt2 = new[sq_idx].sqr();
        let num = F1::mul_sub(&vt1, &self.omega2, &self.omega13, &vt2);
        let edge = if self.variant.eliminate_inversion {
            // num already carries the factor W(2c); scaling the six sibling
            // terms by the same W(2c) keeps the first vector uniform.
            for term in new.iter_mut() {
                *term = term.mul(&dv);
            }
            num
        } else {
            num.mul(&dv.inv()?)
        };
        self.v2 = second;
        match side {
            Edge::Right => new.push(edge),
            Edge::Left => new.insert(0, edge),
        }
        self.v1 = std::mem::take(new);
        Ok(())
    }

    /// Walk from the seed block at center 1 to center n, consuming scalar
    /// digits most significant first: plain bits, or NAF digits when the
    /// variant asks for recoding.
    pub fn run(&mut self, n: &BigUint) -> Result<(), Error> {
        if n.is_zero() {
            return Err(Error::Unsupported("net walks start at scalar 1".into()));
        }
        debug_assert!(self.center.is_one(), "walks consume a fresh block");
        if self.variant.use_naf {
            let digits = naf(n);
            debug_assert_eq!(digits.last(), Some(&1i8));
            for &dg in digits[..digits.len() - 1].iter().rev() {
                match dg {
                    0 => self.double()?,
                    1 => self.double_add()?,
                    _ => self.double_sub()?,
                }
            }
        } else {
            for i in (0..n.bits() - 1).rev() {
                if n.bit(i) {
                    self.double_add()?;
                } else {
                    self.double()?;
                }
            }
        }
        debug_assert_eq!(&self.center, n);
        Ok(())
    }

    /// The current block as a JSON object, hex-encoded termwise.
    pub fn dump_json(&self) -> serde_json::Value {
        json!({
            "variant": self.variant.label(),
            "center": self.center.to_string(),
            "v1": self.v1.iter().map(Field::to_hex).collect::<Vec<_>>(),
            "v2": self.v2.iter().map(Field::to_hex).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy)]
enum Edge {
    /// W(2c+4) joins on the right of an add step.
    Right,
    /// W(2c-4) joins on the left of a subtract step.
    Left,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::nist::p384;
    use crate::curves::toy::ToyCurve;
    use crate::curves::{Curve, Point};
    use crate::fp::{Fp, FpCtx, OpCounts};
    use num_bigint::BigInt;

    #[test]
    fn variant_flags_and_labels() {
        assert!(NetVariant::iena().lazy(true).elim_inv(true).naf(true).validate().is_ok());
        assert!(NetVariant::ena().lazy(true).validate().is_ok());
        assert!(matches!(
            NetVariant::ena().naf(true).validate(),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            NetVariant::ena().elim_inv(true).validate(),
            Err(Error::Unsupported(_))
        ));
        assert_eq!(NetVariant::ena().label(), "ena");
        assert_eq!(
            NetVariant::iena().lazy(true).elim_inv(true).naf(true).twist(true).label(),
            "iena+lazy+elim+naf+twist"
        );
    }

    /// Scans for an affine point with y != 0; the toy prime is 3 mod 4 so a
    /// square root is a single power.
    fn find_point(fp: &FpCtx, curve: &Curve<Fp>) -> Point<Fp> {
        let sqrt_exp = BigUint::from(327u32);
        for xi in 2u64.. {
            let x = fp.from_u64(xi);
            let rhs = curve.rhs(&x);
            let y = rhs.pow_biguint(&sqrt_exp);
            if !y.is_zero() && y.sqr() == rhs {
                return Point { x, y, infinity: false };
            }
        }
        unreachable!()
    }

    fn naive_psi234(x: &Fp, y: &Fp, a: &Fp, b: &Fp) -> (Fp, Fp, Fp) {
        let x2 = x.sqr();
        let x3 = x2.mul(x);
        let x4 = x2.sqr();
        let x6 = x4.mul(&x2);
        let a2 = a.sqr();
        let psi2 = y.dbl();
        let psi3 = x4
            .mul_small(3)
            .add(&a.mul(&x2).mul_small(6))
            .add(&b.mul(x).mul_small(12))
            .sub(&a2);
        let poly = x6
            .add(&a.mul(&x4).mul_small(5))
            .add(&b.mul(&x3).mul_small(20))
            .sub(&a2.mul(&x2).mul_small(5))
            .sub(&a.mul(b).mul(x).mul_small(4))
            .sub(&b.sqr().mul_small(8))
            .sub(&a2.mul(a));
        let psi4 = y.dbl().dbl().mul(&poly);
        (psi2, psi3, psi4)
    }

    #[test]
    fn seed_values_match_the_division_polynomials() {
        let toy = ToyCurve::new(false).unwrap();
        let shapes = [(6u64, 3u64), (6, 0), (0, 3)];
        for (ai, bi) in shapes {
            let a = toy.fp.from_u64(ai);
            let b = toy.fp.from_u64(bi);
            let curve = Curve::new(a.clone(), b.clone()).unwrap();
            let pt = find_point(&toy.fp, &curve);
            let (s2, s3, s4) = first_vector_seeds(&pt.x, &pt.y, &a, &b);
            let (p2, p3, p4) = naive_psi234(&pt.x, &pt.y, &a, &b);
            assert_eq!(s2, p2, "psi2 on ({ai}, {bi})");
            assert_eq!(s3, p3, "psi3 on ({ai}, {bi})");
            assert_eq!(s4, p4, "psi4 on ({ai}, {bi})");
        }
    }

    #[test]
    fn seed_reduction_budgets_hold_for_every_curve_shape() {
        // (a, b, plain reductions, lazy reductions)
        let shapes = [(6u64, 3u64, 10, 7), (6, 0, 8, 6), (0, 3, 6, 5)];
        for lazy in [false, true] {
            let toy = ToyCurve::new(lazy).unwrap();
            for &(ai, bi, plain_cost, lazy_cost) in &shapes {
                let a = toy.fp.from_u64(ai);
                let b = toy.fp.from_u64(bi);
                let curve = Curve::new(a.clone(), b.clone()).unwrap();
                let pt = find_point(&toy.fp, &curve);
                let before = toy.fp.snapshot();
                let _ = first_vector_seeds(&pt.x, &pt.y, &a, &b);
                let spent = toy.fp.snapshot() - before;
                let want = if lazy { lazy_cost } else { plain_cost };
                assert_eq!(spent.reductions, want, "shape ({ai}, {bi}), lazy={lazy}");
                assert_eq!(spent.inv, 0);
            }
        }
    }

    fn p384_net(variant: NetVariant) -> (std::sync::Arc<crate::curves::nist::NistCurve>, Net<Fp, Fp>) {
        let nist = p384(false).unwrap();
        let q = nist.curve.scalar_mul(&nist.g, &BigInt::from(3));
        let net = Net::init(
            variant,
            &nist.curve.a,
            &nist.curve.b,
            (&nist.g.x, &nist.g.y),
            (&q.x, &q.y),
        )
        .unwrap();
        (nist, net)
    }

    fn cost_of(
        fp: &FpCtx,
        net: &mut Net<Fp, Fp>,
        step: fn(&mut Net<Fp, Fp>) -> Result<(), Error>,
    ) -> OpCounts {
        let before = fp.snapshot();
        step(net).unwrap();
        fp.snapshot() - before
    }

    #[test]
    fn per_step_reduction_budgets_are_exact() {
        // (variant, double, double_add, double_sub, inversions per add/sub)
        let rows: [(NetVariant, u64, u64, Option<u64>, u64); 6] = [
            (NetVariant::iena(), 37, 40, None, 1),
            (NetVariant::iena().lazy(true), 27, 30, None, 1),
            (NetVariant::iena().naf(true), 37, 40, Some(40), 1),
            (NetVariant::iena().lazy(true).naf(true), 27, 30, Some(30), 1),
            (NetVariant::iena().lazy(true).elim_inv(true).naf(true), 27, 35, Some(35), 0),
            (NetVariant::ena(), 42, 42, None, 0),
        ];
        for (variant, double_cost, add_cost, sub_cost, invs) in rows {
            let (nist, mut net) = p384_net(variant);
            let label = variant.label();
            for _ in 0..3 {
                let spent = cost_of(&nist.fp, &mut net, Net::double);
                assert_eq!(spent.reductions, double_cost, "{label} double");
                assert_eq!(spent.inv, 0, "{label} double");
            }
            for _ in 0..3 {
                let spent = cost_of(&nist.fp, &mut net, Net::double_add);
                assert_eq!(spent.reductions, add_cost, "{label} double_add");
                assert_eq!(spent.inv, invs, "{label} double_add");
            }
            if let Some(sub_cost) = sub_cost {
                for _ in 0..3 {
                    let spent = cost_of(&nist.fp, &mut net, Net::double_sub);
                    assert_eq!(spent.reductions, sub_cost, "{label} double_sub");
                    assert_eq!(spent.inv, invs, "{label} double_sub");
                }
            }
        }
    }

    #[test]
    fn lazy_eight_term_steps_also_hit_fixed_budgets() {
        let (nist, mut net) = p384_net(NetVariant::ena().lazy(true));
        for _ in 0..3 {
            assert_eq!(cost_of(&nist.fp, &mut net, Net::double).reductions, 31);
            assert_eq!(cost_of(&nist.fp, &mut net, Net::double_add).reductions, 31);
        }
    }

    fn toy_net(toy: &ToyCurve, variant: NetVariant, qmul: i64) -> Net<Fp, Fp> {
        let p = toy.g1.clone();
        let q = toy.curve.scalar_mul(&p, &BigInt::from(qmul));
        Net::init(
            variant,
            &toy.curve.a,
            &toy.curve.b,
            (&p.x, &p.y),
            (&q.x, &q.y),
        )
        .unwrap()
    }

    #[test]
    fn walks_agree_across_digits_laziness_and_block_shape() {
        let toy = ToyCurve::new(false).unwrap();
        for n in 2u64..=100 {
            let n_big = BigUint::from(n);
            let mut base = toy_net(&toy, NetVariant::iena(), 3);
            base.run(&n_big).unwrap();
            let others = [
                NetVariant::iena().lazy(true),
                NetVariant::iena().naf(true),
                NetVariant::iena().lazy(true).naf(true),
                NetVariant::ena(),
                NetVariant::ena().lazy(true),
            ];
            for variant in others {
                let mut net = toy_net(&toy, variant, 3);
                net.run(&n_big).unwrap();
                for k in -3..=3 {
                    assert_eq!(
                        net.first(k).with_lazy(false),
                        *base.first(k),
                        "n={n} k={k} {}",
                        variant.label()
                    );
                }
                for k in -1..=1 {
                    assert_eq!(
                        net.second(k).with_lazy(false),
                        *base.second(k),
                        "n={n} k={k} {}",
                        variant.label()
                    );
                }
            }
        }
    }

    #[test]
    fn eliminating_inversions_rescales_each_vector_uniformly() {
        let toy = ToyCurve::new(false).unwrap();
        for n in 2u64..=100 {
            let n_big = BigUint::from(n);
            let mut plain = toy_net(&toy, NetVariant::iena().naf(true), 3);
            let mut elim = toy_net(&toy, NetVariant::iena().naf(true).elim_inv(true), 3);
            plain.run(&n_big).unwrap();
            elim.run(&n_big).unwrap();
            // Each vector carries one common factor, so ratios within a
            // vector survive; across the vectors the factors differ.
            for k in -3..=3 {
                assert_eq!(
                    elim.first(k).mul(plain.first(0)),
                    plain.first(k).mul(elim.first(0)),
                    "n={n} k={k}"
                );
            }
            for k in -1..=1 {
                assert_eq!(
                    elim.second(k).mul(plain.second(0)),
                    plain.second(k).mul(elim.second(0)),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn eliminated_add_steps_scale_the_first_vector_and_keep_the_second() {
        let toy = ToyCurve::new(false).unwrap();
        for (doubles, subtract) in [(0, false), (1, false), (3, false), (1, true), (4, true)] {
            let mut plain = toy_net(&toy, NetVariant::iena().naf(true), 3);
            let mut elim = toy_net(&toy, NetVariant::iena().naf(true).elim_inv(true), 3);
            for _ in 0..doubles {
                plain.double().unwrap();
                elim.double().unwrap();
            }
            if subtract {
                plain.double_sub().unwrap();
                elim.double_sub().unwrap();
            } else {
                plain.double_add().unwrap();
                elim.double_add().unwrap();
            }
            // The divisor the plain path inverted is W(2c), one slot left
            // (add) or right (subtract) of the new center.
            let dv = plain.first(if subtract { 1 } else { -1 });
            for k in -3..=3 {
                assert_eq!(
                    *elim.first(k),
                    plain.first(k).mul(dv),
                    "doubles={doubles} subtract={subtract} k={k}"
                );
            }
            for k in -1..=1 {
                assert_eq!(
                    elim.second(k),
                    plain.second(k),
                    "doubles={doubles} subtract={subtract} k={k}"
                );
            }
        }
    }

    #[test]
    fn composite_order_points_report_the_degenerate_index() {
        let toy = ToyCurve::new(false).unwrap();
        let mut order6 = None;
        for xi in 2u64..toy.p {
            let x = toy.fp.from_u64(xi);
            let rhs = toy.curve.rhs(&x);
            let y = rhs.pow_biguint(&BigUint::from(327u32));
            if y.is_zero() || y.sqr() != rhs {
                continue;
            }
            let pt = Point { x, y, infinity: false };
            if let Some(ord) = toy.curve.brute_order(&pt, 1400) {
                if ord % 6 == 0 {
                    let p6 = toy.curve.scalar_mul(&pt, &BigInt::from(ord / 6));
                    assert_eq!(toy.curve.brute_order(&p6, 10), Some(6));
                    order6 = Some(p6);
                    break;
                }
            }
        }
        let p = order6.expect("toy curve has a point of order 6");
        let q = toy.curve.scalar_mul(&p, &BigInt::from(3));
        let mut net = Net::init(
            NetVariant::iena(),
            &toy.curve.a,
            &toy.curve.b,
            (&p.x, &p.y),
            (&q.x, &q.y),
        )
        .unwrap();
        // 7 = 111b asks for a double-add at center 3, whose edge term
        // divides by W(6) = 0 when P has order 6.
        assert_eq!(net.run(&BigUint::from(7u32)), Err(Error::DegenerateIndex(6)));
    }

    #[test]
    fn degenerate_pairs_are_rejected_up_front() {
        let toy = ToyCurve::new(false).unwrap();
        let p = toy.g1.clone();
        let init = |pp: &Point<Fp>, qq: &Point<Fp>, variant: NetVariant| {
            Net::init(variant, &toy.curve.a, &toy.curve.b, (&pp.x, &pp.y), (&qq.x, &qq.y))
                .err()
        };

        let q = toy.curve.scalar_mul(&p, &BigInt::from(3));
        let two_torsion = {
            let mut found = None;
            for xi in 0u64..toy.p {
                let x = toy.fp.from_u64(xi);
                if toy.curve.rhs(&x).is_zero() {
                    found = Some(Point { x: x.clone(), y: x.zero_like(), infinity: false });
                    break;
                }
            }
            found.expect("toy curve has even order")
        };
        assert!(matches!(
            init(&two_torsion, &q, NetVariant::iena()),
            Some(Error::DegeneratePair(_))
        ));
        assert!(matches!(init(&p, &p, NetVariant::iena()), Some(Error::DegeneratePair(_))));
        let minus_p = toy.curve.neg(&p);
        assert!(matches!(
            init(&p, &minus_p, NetVariant::iena()),
            Some(Error::DegeneratePair(_))
        ));
        let twice_p = toy.curve.scalar_mul(&p, &BigInt::from(2));
        assert!(matches!(
            init(&p, &twice_p, NetVariant::iena()),
            Some(Error::DegeneratePair(_))
        ));
        // -2P only hurts walks that subtract, which invert W(2,1).
        let minus_2p = toy.curve.neg(&twice_p);
        assert!(init(&p, &minus_2p, NetVariant::iena()).is_none());
        assert!(matches!(
            init(&p, &minus_2p, NetVariant::iena().naf(true)),
            Some(Error::DegeneratePair(_))
        ));

        let mut net = toy_net(&toy, NetVariant::iena(), 3);
        assert!(matches!(net.run(&BigUint::zero()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn block_dump_is_json_with_hex_terms() {
        let toy = ToyCurve::new(false).unwrap();
        let mut net = toy_net(&toy, NetVariant::iena().lazy(true), 3);
        net.run(&BigUint::from(13u32)).unwrap();
        let dump = net.dump_json();
        assert_eq!(dump["variant"], "iena+lazy");
        assert_eq!(dump["center"], "13");
        assert_eq!(dump["v1"].as_array().unwrap().len(), 7);
        assert_eq!(dump["v2"].as_array().unwrap().len(), 3);
    }
}
