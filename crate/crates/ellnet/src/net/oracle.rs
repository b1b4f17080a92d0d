//! Slow, independent term fills for whole stretches of a net.
//!
//! The block engine is fast but only ever shows a seven-term window. These
//! fills build every term from the seeds upward using nothing but the
//! defining identities, one term per loop turn, so a block walk can be
//! checked against them index by index. They are deliberately naive; no
//! operation budgeting applies here.

use crate::error::Error;
use crate::field::{Field, SecondField};
use crate::net::NetSeeds;

/// W(0, 0) through W(count, 0) from the seeds a = W(2,0), b = W(3,0),
/// c = W(4,0).
///
/// Odd terms use W(2k+1) = W(k+2) W(k)^3 - W(k-1) W(k+1)^3 and even terms
/// W(2k) W(2) = W(k) (W(k+2) W(k-1)^2 - W(k-2) W(k+1)^2), so the only
/// division is by W(2), which the seed contract keeps nonzero.
pub fn first_terms<F: Field>(a: &F, b: &F, c: &F, count: usize) -> Result<Vec<F>, Error> {
    let zero = a.zero_like();
    let one = a.one_like();
    let ainv = a.inv()?;
    let mut w = vec![zero, one, a.clone(), b.clone(), c.clone()];
    while w.len() <= count {
        let m = w.len();
        let k = m / 2;
        let term = if m % 2 == 1 {
            let cube = |t: &F| t.sqr().mul(t);
            w[k + 2].mul(&cube(&w[k])).sub(&w[k - 1].mul(&cube(&w[k + 1])))
        } else {
            let inner = w[k + 2]
                .mul(&w[k - 1].sqr())
                .sub(&w[k - 2].mul(&w[k + 1].sqr()));
            w[k].mul(&inner).mul(&ainv)
        };
        w.push(term);
    }
    w.truncate(count + 1);
    Ok(w)
}

/// W(0, 1) through W(count, 1).
///
/// Everything flows from one shape of identity,
///   W(m+n, 1) W(m-n, 1) = W(m+1,1) W(m-1,1) W(n,0)^2
///                       - W(n+1,0) W(n-1,0) W(m,1)^2,
/// instantiated with balanced splits: odd targets t take (m, n) =
/// ((t+1)/2, (t-1)/2) and divide by W(1,1), even targets take (t/2, t/2)
/// and divide by W(0,1) = 1. The two seeds beyond the given ones are the
/// same identity at t = 3 and t = 4, dividing by W(-1,1) and W(2,-1).
///
/// `first` must hold the first-index terms up to at least count/2 + 2.
pub fn second_terms<F1: Field, F2: SecondField<F1>>(
    seeds: &NetSeeds<F1, F2>,
    first: &[F1],
    count: usize,
) -> Result<Vec<F2>, Error> {
    assert!(first.len() > count / 2 + 2, "not enough first-index terms");
    let one = seeds.d.one_like();
    let ginv = seeds.g.inv()?;
    let gsq = seeds.g.sqr();

    // W(3,1) = (W(2,1) W(2,0)^2 - W(3,0) W(1,1)^2) / W(-1,1)
    let w31 = seeds
        .d
        .scale_first(&seeds.a.sqr())
        .sub(&gsq.scale_first(&seeds.b))
        .mul(&seeds.e.inv()?);
    // W(4,1) = (W(4,0) W(2,0) W(1,1)^2 - W(2,1) W(3,0)^2) / W(2,-1)
    let w41 = gsq
        .scale_first(&seeds.c.mul(&seeds.a))
        .sub(&seeds.d.scale_first(&seeds.b.sqr()))
        .mul(&seeds.f.inv()?);

    let mut w = vec![one, seeds.g.clone(), seeds.d.clone(), w31, w41];
    while w.len() <= count {
        let t = w.len();
        let term = if t % 2 == 1 {
            let m = (t + 1) / 2;
            let lhs = w[m + 1].mul(&w[m - 1]).scale_first(&first[m - 1].sqr());
            let rhs = w[m].sqr().scale_first(&first[m].mul(&first[m - 2]));
            lhs.sub(&rhs).mul(&ginv)
        } else {
            let m = t / 2;
            let lhs = w[m + 1].mul(&w[m - 1]).scale_first(&first[m].sqr());
            let rhs = w[m].sqr().scale_first(&first[m + 1].mul(&first[m - 1]));
            lhs.sub(&rhs)
        };
        w.push(term);
    }
    w.truncate(count + 1);
    Ok(w)
}
