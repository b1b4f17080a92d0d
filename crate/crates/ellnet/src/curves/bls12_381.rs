//! BLS12-381 and its sextic twist.
//!
//! The curve family is parameterised by x = -0xd201000000010000:
//!   r = x^4 - x^2 + 1,  p = (x - 1)^2 r / 3 + x,  trace = x + 1.
//! E:  y^2 = x^3 + 4 over Fp, G2 lives on the twist E': y^2 = x^3 + 4(1+u)
//! over Fp2. The twist here is the one whose untwist map divides by powers
//! of w (w^6 = xi): (x', y') -> (x' w^-2, y' w^-3). The opposite convention
//! (curve y^2 = x^3 + 4/xi, multiply by powers of w) shows up only in a unit
//! test to pin down the difference.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::curves::{Curve, Point};
use crate::error::Error;
use crate::field::Field;
use crate::fp::{Fp, FpCtx, PrimeModulus};
use crate::tower::{Fp12, Fp2, Fp6, Tower};

pub const P_HEX: &str = "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f6241eabfffeb153ffffb9feffffffffaaab";
pub const R_HEX: &str = "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";
/// |x|; the parameter itself is negative.
pub const X_ABS: u64 = 0xd201_0000_0001_0000;

const G1_X: &str = "3685416753713387016781088315183077757961620795782546409894578378688607592378376318836054947676345821548104185464507";
const G1_Y: &str = "1339506544944476473020471379941921221584933875938349620426543736416511423956333506472724655353366534992391756441569";
const G2_X0: &str = "352701069587466618187139116011060144890029952792775240219908644239793785735715026873347600343865175952761926303160";
const G2_X1: &str = "3059144344244213709971259814753781636986470325476647558659373206291635324768958432433509563104347017837885763365758";
const G2_Y0: &str = "1985150602287291935568054521177171638300868978215655730859378665066344726373823718423869104263333984641494340347905";
const G2_Y1: &str = "927553665492332455747201965776037880757740193453592970025027978793976877002675564980949289727957565575433344219582";

pub struct Bls12381 {
    pub fp: FpCtx,
    pub tower: Arc<Tower>,
    pub r: BigUint,
    pub curve_g1: Curve<Fp>,
    pub curve_g2: Curve<Fp2>,
    /// E over Fp12, the codomain of the untwist map
    pub curve_fp12: Curve<Fp12>,
    /// E' with coordinates lifted to Fp12 (where twisted-coordinate pairing
    /// computations mix points coming from both groups)
    pub curve_g2_fp12: Curve<Fp12>,
    pub g1: Point<Fp>,
    pub g2: Point<Fp2>,
    omega2: Fp12,
    omega3: Fp12,
    omega2_inv: Fp12,
    omega3_inv: Fp12,
    phi_x: Fp2,
    phi_y: Fp2,
}

impl Bls12381 {
    pub fn new(lazy: bool) -> Result<Arc<Self>, Error> {
        let p = BigUint::parse_bytes(P_HEX.as_bytes(), 16).expect("modulus hex");
        let params = PrimeModulus::new(&p)?;
        let fp = FpCtx::new(params, lazy);
        let tower = Tower::new(&fp)?;
        let r = BigUint::parse_bytes(R_HEX.as_bytes(), 16).expect("order hex");

        let dec = |s: &str| fp.from_biguint(&BigUint::parse_bytes(s.as_bytes(), 10).unwrap());
        let four = fp.from_u64(4);
        let b2 = tower.xi().mul_small(4);

        let curve_g1 = Curve::new(fp.zero(), four.clone())?;
        let curve_g2 = Curve::new(Fp2::zero(&fp), b2.clone())?;
        let curve_fp12 = Curve::new(Fp12::zero(&fp), Fp12::from_fp2(&Fp2::from_base(&four)))?;
        let curve_g2_fp12 = Curve::new(Fp12::zero(&fp), Fp12::from_fp2(&b2))?;

        let g1 = curve_g1.point(dec(G1_X), dec(G1_Y))?;
        let g2 = curve_g2.point(
            Fp2::new(dec(G2_X0), dec(G2_X1)),
            Fp2::new(dec(G2_Y0), dec(G2_Y1)),
        )?;

        // w is the generator of the top extension: w^2 = v, w^6 = xi
        let omega = Fp12::new(
            Fp6::zero(&fp),
            Fp6::new(Fp2::one(&fp), Fp2::zero(&fp), Fp2::zero(&fp)),
        );
        let omega2 = omega.sqr();
        let omega3 = omega2.mul(&omega);
        let omega2_inv = omega2.inv()?;
        let omega3_inv = omega3.inv()?;

        // Frobenius conjugated through the untwist:
        // phi(x', y') = (x'^p xi^-(p-1)/3, y'^p xi^-(p-1)/2)
        let gamma = &tower.frobenius_table().gamma[0];
        let phi_x = gamma[1].inv()?;
        let phi_y = gamma[2].inv()?;

        Ok(Arc::new(Bls12381 {
            fp,
            tower,
            r,
            curve_g1,
            curve_g2,
            curve_fp12,
            curve_g2_fp12,
            g1,
            g2,
            omega2,
            omega3,
            omega2_inv,
            omega3_inv,
            phi_x,
            phi_y,
        }))
    }

    /// The untwist E'(Fp2) -> E(Fp12): (x', y') -> (x' w^-2, y' w^-3).
    pub fn untwist(&self, q: &Point<Fp2>) -> Point<Fp12> {
        if q.infinity {
            return self.curve_fp12.infinity();
        }
        Point {
            x: Fp12::from_fp2(&q.x).mul(&self.omega2_inv),
            y: Fp12::from_fp2(&q.y).mul(&self.omega3_inv),
            infinity: false,
        }
    }

    /// The inverse map E(Fp12) -> E'(Fp12): (X, Y) -> (X w^2, Y w^3).
    /// Applied to an E(Fp) point this produces the sparse twisted
    /// coordinates used by pairing computations on the twist.
    pub fn twist(&self, pt: &Point<Fp12>) -> Point<Fp12> {
        if pt.infinity {
            return self.curve_g2_fp12.infinity();
        }
        Point {
            x: pt.x.mul(&self.omega2),
            y: pt.y.mul(&self.omega3),
            infinity: false,
        }
    }

    /// Coordinate embedding E(Fp) -> E(Fp12).
    pub fn embed_g1(&self, pt: &Point<Fp>) -> Point<Fp12> {
        Point {
            x: Fp12::from_fp2(&Fp2::from_base(&pt.x)),
            y: Fp12::from_fp2(&Fp2::from_base(&pt.y)),
            infinity: pt.infinity,
        }
    }

    /// Coordinate embedding E'(Fp2) -> E'(Fp12).
    pub fn embed_g2(&self, pt: &Point<Fp2>) -> Point<Fp12> {
        Point {
            x: Fp12::from_fp2(&pt.x),
            y: Fp12::from_fp2(&pt.y),
            infinity: pt.infinity,
        }
    }

    /// The twist endomorphism psi^-1 . pi_p . psi on E'(Fp2). Acts on the
    /// r-torsion as multiplication by p = x (mod r).
    pub fn phi(&self, q: &Point<Fp2>) -> Point<Fp2> {
        if q.infinity {
            return self.curve_g2.infinity();
        }
        Point {
            x: q.x.conjugate().mul(&self.phi_x),
            y: q.y.conjugate().mul(&self.phi_y),
            infinity: false,
        }
    }

    pub fn validate_g1(&self, pt: &Point<Fp>) -> Result<(), Error> {
        if !self.curve_g1.contains(pt) {
            return Err(Error::NotOnCurve);
        }
        if !self.curve_g1.scalar_mul_biguint(pt, &self.r).infinity {
            return Err(Error::NotInSubgroup);
        }
        Ok(())
    }

    pub fn validate_g2(&self, pt: &Point<Fp2>) -> Result<(), Error> {
        if !self.curve_g2.contains(pt) {
            return Err(Error::NotOnCurve);
        }
        if !self.curve_g2.scalar_mul_biguint(pt, &self.r).infinity {
            return Err(Error::NotInSubgroup);
        }
        Ok(())
    }
}
