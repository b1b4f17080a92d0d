//! Pairing front-ends built on elliptic nets, plus the independent Miller
//! loop they are validated against.
//!
//! Every net-based pairing here follows the same shape: seed a rank-2 net
//! from the two input points, slide the block out to the loop scalar n, read
//! off the ratio W(n+1,1)/W(n+1,0) (the seeds normalize W(1,0) = W(1,1) = 1),
//! and reduce with the final exponentiation. Pre-reduction values are only
//! well-defined up to the kernel of that exponentiation (the net ratio and
//! the Miller value at the same index typically differ by an r-th power),
//! so all cross-checks compare reduced values.

pub mod miller;

pub use miller::{miller_on_divisor, miller_oracle, miller_signed};

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::curves::bls12_381::{Bls12381, X_ABS};
use crate::curves::{Curve, Point};
use crate::error::Error;
use crate::field::{Field, SecondField};
use crate::fp::{Fp, OpCounts};
use crate::net::{Net, NetVariant};
use crate::tower::{Fp2, Fp12};

/// A reduced pairing value, the variant that produced it, and the operation
/// counts of the net phase. The counts cover seeding, the block walk, and
/// the ratio; the final exponentiation is excluded so that variants stay
/// comparable on the part the algorithm choice actually affects.
#[derive(Clone, Debug)]
pub struct PairingResult {
    pub value: Fp12,
    pub variant: NetVariant,
    pub counts: OpCounts,
}

fn net_ratio_at<F1: Field, F2: SecondField<F1>>(
    variant: NetVariant,
    a4: &F1,
    b6: &F1,
    p: (&F1, &F1),
    q: (&F2, &F2),
    n: &BigUint,
    k: i64,
) -> Result<F2, Error> {
    let mut net = Net::init(variant, a4, b6, p, q)?;
    net.run(n)?;
    let ratio = net.second(k).scale_first(&net.first(k).inv()?);
    Ok(ratio.with_lazy(false))
}

/// Walks a net to center n and returns W(n+1,1) / W(n+1,0).
///
/// For n = order of the base point this is the unreduced Tate pairing.
/// With inversion elimination the first vector carries an extra product of
/// W(2c,0) factors, so the result differs from the plain path by a factor
/// the final exponentiation kills; callers must reduce before comparing
/// across variants.
pub fn net_pairing_ratio<F1: Field, F2: SecondField<F1>>(
    variant: NetVariant,
    a4: &F1,
    b6: &F1,
    p: (&F1, &F1),
    q: (&F2, &F2),
    n: &BigUint,
) -> Result<F2, Error> {
    net_ratio_at(variant, a4, b6, p, q, n, 1)
}

/// Walks a net to center n and returns W(n,1) / W(n,0).
///
/// This is the Miller function f_{n,P} evaluated at the second point, up
/// to factors a final exponentiation kills: the ratio equals the inverse
/// of the monic f_{n,-P} at that point, and the two differ by verticals
/// whose values lie in a proper subfield whenever both points sit in
/// Frobenius eigenspaces. Loop scalars that do not annihilate the base
/// point (ate-style pairings) must read the net here rather than at n+1.
pub fn net_miller_ratio<F1: Field, F2: SecondField<F1>>(
    variant: NetVariant,
    a4: &F1,
    b6: &F1,
    p: (&F1, &F1),
    q: (&F2, &F2),
    n: &BigUint,
) -> Result<F2, Error> {
    net_ratio_at(variant, a4, b6, p, q, n, 0)
}

/// One line/vertical step of an optimal-pairing product: the line through
/// [from]S and [add]S, divided by the vertical at [to]S = [from + add]S.
#[derive(Clone, Debug)]
pub struct LineStep {
    pub from: BigInt,
    pub add: BigInt,
    pub to: BigInt,
}

/// A short lattice vector (c_0, ..., c_l) with Σ c_i·q^i ≡ 0 (mod r),
/// together with the line/vertical schedule its pairing product needs.
///
/// For the BLS12 family the vector is (z, -1), the product degenerates to
/// the single f_z term, and the net front-ends use the scalar directly; the
/// general product form is exercised through [`Self::eval_miller`].
#[derive(Clone, Debug)]
pub struct OptimalAteRecipe {
    pub coefficients: Vec<BigInt>,
}

impl OptimalAteRecipe {
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        OptimalAteRecipe { coefficients }
    }

    /// The BLS12 family vector (z, -1): z ≡ q (mod r), so z - q ≡ 0.
    pub fn bls12(z: &BigInt) -> Self {
        OptimalAteRecipe::new(vec![z.clone(), -BigInt::one()])
    }

    /// Σ c_i·q^i as an integer.
    pub fn lambda(&self, q: &BigUint) -> BigInt {
        let qb = BigInt::from(q.clone());
        let mut acc = BigInt::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * &qb + c;
        }
        acc
    }

    /// The tail sums s_i = Σ_{j≥i} c_j·q^j turned into line/vertical steps:
    /// step i joins [s_{i+1}]S and [c_i·q^i]S and removes the vertical at
    /// [s_i]S. The last index carries no step (its f-term stands alone).
    pub fn schedule(&self, q: &BigUint) -> Vec<LineStep> {
        let qb = BigInt::from(q.clone());
        let mut qpow = BigInt::one();
        let terms: Vec<BigInt> = self
            .coefficients
            .iter()
            .map(|c| {
                let t = c * &qpow;
                qpow *= &qb;
                t
            })
            .collect();
        let mut steps = Vec::new();
        let mut tail = BigInt::zero();
        for t in terms.iter().skip(1).rev() {
            tail += t;
        }
        let mut tails = vec![tail];
        for t in terms.iter().skip(1).take(terms.len().saturating_sub(2)) {
            let prev = tails.last().expect("seeded").clone();
            tails.push(prev - t);
        }
        for (i, t) in terms.iter().take(terms.len() - 1).enumerate() {
            let from = tails[i].clone();
            steps.push(LineStep {
                to: &from + t,
                from,
                add: t.clone(),
            });
        }
        steps
    }

    /// Validates the lattice relation Σ c_i·q^i ≡ 0 (mod r) and the
    /// non-degeneracy condition for the resulting pairing:
    /// m·k·q^(k-1) ≢ ((q^k - 1)/r)·Σ i·c_i·q^(i-1) (mod r), λ = m·r.
    pub fn check(&self, q: &BigUint, r: &BigUint, k: u32) -> Result<(), Error> {
        let qb = BigInt::from(q.clone());
        let rb = BigInt::from(r.clone());
        let modr = |x: &BigInt| ((x % &rb) + &rb) % &rb;
        let lambda = self.lambda(q);
        if !modr(&lambda).is_zero() {
            return Err(Error::Unsupported(
                "recipe coefficients do not satisfy the lattice relation".into(),
            ));
        }
        let m = &lambda / &rb;
        let k_big = BigInt::from(k);
        let lhs = modr(&(&m * &k_big * qb.modpow(&(&k_big - 1), &rb)));
        let mut drv = BigInt::zero();
        let mut qpow = BigInt::one();
        for (i, c) in self.coefficients.iter().enumerate() {
            if i >= 1 {
                drv += BigInt::from(i) * c * &qpow;
                qpow *= &qb;
            }
        }
        let cofactor = (qb.pow(k) - 1) / &rb;
        let rhs = modr(&(cofactor * drv));
        if lhs == rhs {
            return Err(Error::Unsupported("recipe yields a degenerate pairing".into()));
        }
        Ok(())
    }

    /// The full product Π f_{c_i,S}^(q^i) · Π l/v evaluated with the Miller
    /// oracle. Exponentiation by q^i is generic, so this is only meant for
    /// small reference curves.
    pub fn eval_miller<F: Field>(
        &self,
        curve: &Curve<F>,
        s: &Point<F>,
        at: &Point<F>,
        q: &BigUint,
    ) -> Result<F, Error> {
        let mut value = at.x.one_like();
        let mut qpow = BigUint::one();
        for c in &self.coefficients {
            if !c.is_zero() {
                let f = miller_signed(curve, s, at, c)?;
                value = value.mul(&f.pow(&qpow));
            }
            qpow *= q;
        }
        for step in self.schedule(q) {
            let a = curve.scalar_mul(s, &step.from);
            let b = curve.scalar_mul(s, &step.add);
            let line = miller::line_through(curve, &a, &b, at);
            let vert = miller::vertical_eval(&curve.scalar_mul(s, &step.to), at);
            if line.is_zero() || vert.is_zero() {
                return Err(miller::support_hit());
            }
            value = value.mul(&line).mul(&vert.inv()?);
        }
        Ok(value)
    }
}

/// The BLS12-381 pairing suite: reduced Tate, Ate over either side of the
/// sextic twist, and the Optimal Ate loop, all running on elliptic nets.
pub struct BlsPairings {
    bls: Arc<Bls12381>,
    /// (t - 1) mod r, the Ate loop scalar; t - 1 = z is negative, so this
    /// is r - |z|.
    ate_scalar: BigUint,
    /// (q^4 - q^2 + 1)/r, the hard exponent of the final exponentiation.
    hard_exp: BigUint,
    /// Variant used by the fixed-policy front-ends (tate, ate).
    default_variant: NetVariant,
}

impl BlsPairings {
    pub fn new(bls: Arc<Bls12381>) -> Self {
        let q = bls.fp.params().modulus().clone();
        let q2 = &q * &q;
        let hard_exp = (&q2 * &q2 - &q2 + 1u32) / &bls.r;
        let ate_scalar = &bls.r - BigUint::from(X_ABS);
        BlsPairings {
            bls,
            ate_scalar,
            hard_exp,
            default_variant: NetVariant::iena().lazy(true),
        }
    }

    pub fn curve(&self) -> &Arc<Bls12381> {
        &self.bls
    }

    pub fn ate_loop_scalar(&self) -> &BigUint {
        &self.ate_scalar
    }

    /// The optimal-ate lattice vector for this curve.
    pub fn recipe(&self) -> OptimalAteRecipe {
        OptimalAteRecipe::bls12(&-BigInt::from(X_ABS))
    }

    /// f^((q^12 - 1)/r): easy part with one inversion and Frobenius maps,
    /// hard part by generic exponentiation.
    pub fn final_exponentiation(&self, f: &Fp12) -> Result<Fp12, Error> {
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let tab = self.bls.tower.frobenius_table();
        let easy = f.conjugate().mul(&f.inv()?);
        let easy = easy.frobenius(tab, 2).mul(&easy);
        Ok(easy.pow(&self.hard_exp))
    }

    fn finish(
        &self,
        ratio: Fp12,
        invert: bool,
        variant: NetVariant,
        counts: OpCounts,
    ) -> Result<PairingResult, Error> {
        let mut value = self.final_exponentiation(&ratio)?;
        if invert {
            // the reduced value is unitary, so conjugation is inversion
            value = value.conjugate();
        }
        Ok(PairingResult {
            value,
            variant,
            counts,
        })
    }

    /// Reduced Tate pairing with loop scalar r. Q lives on E(Fp12), the
    /// codomain of the untwist map; Q must have order r and lie outside
    /// ⟨P⟩ (the second condition is the caller's contract, a dependent pair
    /// either degenerates during seeding or reduces to 1).
    pub fn tate_net(&self, p: &Point<Fp>, q: &Point<Fp12>) -> Result<PairingResult, Error> {
        self.bls.validate_g1(p)?;
        if !self.bls.curve_fp12.contains(q) {
            return Err(Error::NotOnCurve);
        }
        if !self.bls.curve_fp12.scalar_mul_biguint(q, &self.bls.r).infinity {
            return Err(Error::NotInSubgroup);
        }
        self.tate_net_unchecked(p, q)
    }

    pub fn tate_net_unchecked(
        &self,
        p: &Point<Fp>,
        q: &Point<Fp12>,
    ) -> Result<PairingResult, Error> {
        let start = self.bls.fp.snapshot();
        let ratio = net_pairing_ratio(
            self.default_variant,
            &self.bls.curve_g1.a,
            &self.bls.curve_g1.b,
            (&p.x, &p.y),
            (&q.x, &q.y),
            &self.bls.r,
        )?;
        let counts = self.bls.fp.snapshot() - start;
        self.finish(ratio, false, self.default_variant, counts)
    }

    /// Ate pairing computed over Fp12 on the untwisted side: the net is
    /// based at (Ψ₆(Q'), P) with loop scalar T = (t-1) mod r, reading the
    /// center terms W(T,1)/W(T,0) since T does not annihilate the base.
    pub fn ate_untwisted(&self, qp: &Point<Fp2>, p: &Point<Fp>) -> Result<PairingResult, Error> {
        self.bls.validate_g2(qp)?;
        self.bls.validate_g1(p)?;
        self.ate_untwisted_unchecked(qp, p)
    }

    pub fn ate_untwisted_unchecked(
        &self,
        qp: &Point<Fp2>,
        p: &Point<Fp>,
    ) -> Result<PairingResult, Error> {
        let s = self.bls.untwist(qp);
        let eval = self.bls.embed_g1(p);
        let variant = self.default_variant.twist(false);
        let start = self.bls.fp.snapshot();
        let ratio = net_miller_ratio(
            variant,
            &self.bls.curve_fp12.a,
            &self.bls.curve_fp12.b,
            (&s.x, &s.y),
            (&eval.x, &eval.y),
            &self.ate_scalar,
        )?;
        let counts = self.bls.fp.snapshot() - start;
        self.finish(ratio, false, variant, counts)
    }

    /// Ate pairing computed on the twist: the net is based at (Q', Ψ₆⁻¹(P)),
    /// so the first vector stays in Fp2 and only the second vector pays for
    /// Fp12 arithmetic. Agrees with [`Self::ate_untwisted`] exactly.
    pub fn ate_twisted(&self, qp: &Point<Fp2>, p: &Point<Fp>) -> Result<PairingResult, Error> {
        self.bls.validate_g2(qp)?;
        self.bls.validate_g1(p)?;
        self.ate_twisted_unchecked(qp, p)
    }

    pub fn ate_twisted_unchecked(
        &self,
        qp: &Point<Fp2>,
        p: &Point<Fp>,
    ) -> Result<PairingResult, Error> {
        let eval = self.bls.twist(&self.bls.embed_g1(p));
        let variant = self.default_variant.twist(true);
        let start = self.bls.fp.snapshot();
        let ratio = net_miller_ratio(
            variant,
            &self.bls.curve_g2.a,
            &self.bls.curve_g2.b,
            (&qp.x, &qp.y),
            (&eval.x, &eval.y),
            &self.ate_scalar,
        )?;
        let counts = self.bls.fp.snapshot() - start;
        self.finish(ratio, false, variant, counts)
    }

    /// Optimal Ate: loop scalar |z| where z is the (negative) curve
    /// parameter, inverted after reduction by conjugation. The variant's
    /// twisted flag picks the twisted or untwisted configuration; NAF and
    /// the other flags apply to the net walk as usual.
    pub fn opt_ate(
        &self,
        qp: &Point<Fp2>,
        p: &Point<Fp>,
        variant: NetVariant,
    ) -> Result<PairingResult, Error> {
        self.bls.validate_g2(qp)?;
        self.bls.validate_g1(p)?;
        self.opt_ate_unchecked(qp, p, variant)
    }

    pub fn opt_ate_unchecked(
        &self,
        qp: &Point<Fp2>,
        p: &Point<Fp>,
        variant: NetVariant,
    ) -> Result<PairingResult, Error> {
        let z_abs = BigUint::from(X_ABS);
        let start = self.bls.fp.snapshot();
        let ratio = if variant.twisted {
            let eval = self.bls.twist(&self.bls.embed_g1(p));
            net_miller_ratio(
                variant,
                &self.bls.curve_g2.a,
                &self.bls.curve_g2.b,
                (&qp.x, &qp.y),
                (&eval.x, &eval.y),
                &z_abs,
            )?
        } else {
            let s = self.bls.untwist(qp);
            let eval = self.bls.embed_g1(p);
            net_miller_ratio(
                variant,
                &self.bls.curve_fp12.a,
                &self.bls.curve_fp12.b,
                (&s.x, &s.y),
                (&eval.x, &eval.y),
                &z_abs,
            )?
        };
        let counts = self.bls.fp.snapshot() - start;
        self.finish(ratio, true, variant, counts)
    }
}
