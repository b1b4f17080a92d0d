//! Engine blocks against independent term fills.
//!
//! The oracles in `net::oracle` grow a net one term at a time straight from
//! the defining identities; the engine jumps through it in blocks. These
//! tests walk every scalar up to 64 under every variant and require the
//! final block to match the oracle fill term by term. Inversion-eliminating
//! walks carry a uniform scale factor, so for those the comparison is made
//! on cross ratios, which the rescaling must leave alone.

use ellnet::curves::toy::ToyCurve;
use ellnet::net::oracle::{first_terms, second_terms};
use ellnet::{pair_seeds, Error, Field, Fp, Fp2, Net, NetSeeds, NetVariant, SecondField};
use num_bigint::{BigInt, BigUint};

fn all_variants() -> Vec<NetVariant> {
    let mut out = Vec::new();
    for lazy in [false, true] {
        out.push(NetVariant::ena().lazy(lazy));
        for elim in [false, true] {
            for naf in [false, true] {
                out.push(NetVariant::iena().lazy(lazy).elim_inv(elim).naf(naf));
            }
        }
    }
    out
}

/// W(m, 0) for possibly negative m, using the odd symmetry of the first row.
fn at<F: Field>(w: &[F], m: i64) -> F {
    if m < 0 {
        w[(-m) as usize].neg()
    } else {
        w[m as usize].clone()
    }
}

fn check_blocks<F1: Field, F2: SecondField<F1>>(seeds: &NetSeeds<F1, F2>, tag: &str) {
    let w1 = first_terms(&seeds.a, &seeds.b, &seeds.c, 80).unwrap();
    let w2 = second_terms(seeds, &w1, 70).unwrap();
    for variant in all_variants() {
        for n in 1u64..=64 {
            let mut net = Net::from_seeds(variant, seeds.clone()).unwrap();
            net.run(&BigUint::from(n)).unwrap();
            let c = n as i64;
            let top = if net.v1().len() == 8 { 4 } else { 3 };
            if variant.eliminate_inversion {
                // Each vector is a uniform multiple of the oracle values,
                // so in-vector cross ratios survive the rescaling.
                let anchor1 = net.first(0).clone();
                let anchor2 = net.second(0).clone();
                for k in -3..=top {
                    assert_eq!(
                        net.first(k).mul(&at(&w1, c)),
                        at(&w1, c + k).mul(&anchor1),
                        "{tag} {} n={n} k={k}",
                        variant.label()
                    );
                }
                for k in -1..=1i64 {
                    assert_eq!(
                        net.second(k).mul(&w2[c as usize]),
                        w2[(c + k) as usize].mul(&anchor2),
                        "{tag} {} n={n} k={k}",
                        variant.label()
                    );
                }
            } else {
                for k in -3..=top {
                    assert_eq!(
                        net.first(k).with_lazy(false),
                        at(&w1, c + k).with_lazy(false),
                        "{tag} {} n={n} k={k}",
                        variant.label()
                    );
                }
                for k in -1..=1i64 {
                    assert_eq!(
                        net.second(k).with_lazy(false),
                        w2[(c + k) as usize].with_lazy(false),
                        "{tag} {} n={n} k={k}",
                        variant.label()
                    );
                }
            }
        }
    }
}

#[test]
fn base_field_blocks_match_the_oracle() {
    let toy = ToyCurve::new(false).unwrap();
    let p = toy.g1.clone();
    let q = toy.curve.scalar_mul(&p, &BigInt::from(3));
    let seeds =
        pair_seeds::<Fp, Fp>(&toy.curve.a, &toy.curve.b, (&p.x, &p.y), (&q.x, &q.y)).unwrap();
    check_blocks(&seeds, "fp/fp");
}

#[test]
fn quadratic_extension_blocks_match_the_oracle() {
    let toy = ToyCurve::new(false).unwrap();
    let p = toy.g1.clone();
    let q = &toy.g2;
    let seeds = pair_seeds::<Fp, Fp2>(
        &toy.curve.a,
        &toy.curve.b,
        (&p.x, &p.y),
        (&q.x, &q.y),
    )
    .unwrap();
    check_blocks(&seeds, "fp/fp2");
}

#[test]
fn rescaled_seeds_walk_the_rescaled_net() {
    let toy = ToyCurve::new(false).unwrap();
    let p = toy.g1.clone();
    let q = toy.curve.scalar_mul(&p, &BigInt::from(5));
    let mut seeds =
        pair_seeds::<Fp, Fp>(&toy.curve.a, &toy.curve.b, (&p.x, &p.y), (&q.x, &q.y)).unwrap();
    // Push the net through the scaling that multiplies W(m, 1) by mu^m.
    // It leaves the first row alone but turns W(1,1) into a value the walk
    // has to divide by at every step.
    let mu = toy.fp.from_u64(17);
    let muinv = mu.inv().unwrap();
    seeds.d = seeds.d.mul(&mu.sqr());
    seeds.e = seeds.e.mul(&muinv);
    seeds.f = seeds.f.mul(&muinv.sqr());
    seeds.g = seeds.g.mul(&mu);
    check_blocks(&seeds, "rescaled");
}

#[test]
fn walks_error_cleanly_instead_of_dividing_by_zero() {
    // A pair where some W(2c, 0) vanishes mid-walk: P of composite order 12
    // hits W(12) = 0 whenever an add step fires at center 6.
    let toy = ToyCurve::new(false).unwrap();
    let mut p12 = None;
    'outer: for xi in 2u64..toy.p {
        let x = toy.fp.from_u64(xi);
        let rhs = toy.curve.rhs(&x);
        let y = rhs.pow_biguint(&BigUint::from(327u32));
        if y.is_zero() || y.sqr() != rhs {
            continue;
        }
        let pt = ellnet::Point { x, y, infinity: false };
        if let Some(ord) = toy.curve.brute_order(&pt, 1400) {
            if ord % 12 == 0 {
                let cand = toy.curve.scalar_mul(&pt, &BigInt::from(ord / 12));
                if toy.curve.brute_order(&cand, 16) == Some(12) {
                    p12 = Some(cand);
                    break 'outer;
                }
            }
        }
    }
    let Some(p) = p12 else {
        // The toy group need not contain order-12 points; the order-6 case
        // in the unit tests already covers the failure path.
        return;
    };
    let q = toy.curve.scalar_mul(&p, &BigInt::from(5));
    let mut net = Net::init(
        NetVariant::iena(),
        &toy.curve.a,
        &toy.curve.b,
        (&p.x, &p.y),
        (&q.x, &q.y),
    )
    .unwrap();
    // 13 = 1101b: centers 1 -> 3 -> 6, then an add step at 6 needs W(12).
    assert_eq!(net.run(&BigUint::from(13u32)), Err(Error::DegenerateIndex(12)));
}
