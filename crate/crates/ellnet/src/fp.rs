//! Prime field arithmetic in Montgomery form with explicit operation
//! accounting.
//!
//! Every element carries an [`FpCtx`] that bundles the modulus constants,
//! a shared set of [`OpCounters`], and the lazy-reduction flag. The counters
//! record multiplication, squaring, addition, inversion, Montgomery
//! reduction, and shift events so that callers can compare evaluation
//! strategies by exact operation counts rather than wall clock noise.
//!
//! Lazy reduction is exposed through [`Wide`]: a product can be kept as a
//! double-width accumulator, combined with further products, and reduced
//! once at the end. An expression such as `a*b - c*d` then costs one
//! reduction instead of two. Subtraction of unreduced accumulators is made
//! safe by adding a shifted multiple of the modulus first (`p << (bits+k)`
//! covers up to `2^k` subtracted products).
//!
//! The limb count for a modulus is chosen as `ceil((bits + 6) / 64)`, which
//! guarantees `64*p < R`. All accumulator schemes used in this crate stay
//! below `p*R`, the bound required for a single Montgomery reduction, and
//! that bound is asserted on every reduce.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Hard cap on the limb count, enough for moduli up to 762 bits.
pub const MAX_LIMBS: usize = 12;
const WIDE_LIMBS: usize = 2 * MAX_LIMBS;

#[inline(always)]
fn adc(a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = a as u128 + b as u128 + carry as u128;
    (t as u64, (t >> 64) as u64)
}

#[inline(always)]
fn sbb(a: u64, b: u64, borrow: u64) -> (u64, u64) {
    let t = (a as u128)
        .wrapping_sub(b as u128)
        .wrapping_sub(borrow as u128);
    (t as u64, (t >> 127) as u64)
}

#[inline(always)]
fn mac(acc: u64, a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = acc as u128 + (a as u128) * (b as u128) + carry as u128;
    (t as u64, (t >> 64) as u64)
}

/// Live operation counters, shared by every element created from one context.
///
/// Counts use relaxed atomics: they are sums with no ordering requirements,
/// and the measurement harnesses drive a context from a single thread.
#[derive(Debug, Default)]
pub struct OpCounters {
    mul: AtomicU64,
    sqr: AtomicU64,
    add: AtomicU64,
    inv: AtomicU64,
    reductions: AtomicU64,
    shifts: AtomicU64,
}

impl OpCounters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn snapshot(&self) -> OpCounts {
        OpCounts {
            mul: self.mul.load(Ordering::Relaxed),
            sqr: self.sqr.load(Ordering::Relaxed),
            add: self.add.load(Ordering::Relaxed),
            inv: self.inv.load(Ordering::Relaxed),
            reductions: self.reductions.load(Ordering::Relaxed),
            shifts: self.shifts.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.mul.store(0, Ordering::Relaxed);
        self.sqr.store(0, Ordering::Relaxed);
        self.add.store(0, Ordering::Relaxed);
        self.inv.store(0, Ordering::Relaxed);
        self.reductions.store(0, Ordering::Relaxed);
        self.shifts.store(0, Ordering::Relaxed);
    }

    #[inline(always)]
    fn bump_mul(&self) {
        self.mul.fetch_add(1, Ordering::Relaxed);
    }
    #[inline(always)]
    fn bump_sqr(&self) {
        self.sqr.fetch_add(1, Ordering::Relaxed);
    }
    #[inline(always)]
    fn bump_add(&self) {
        self.add.fetch_add(1, Ordering::Relaxed);
    }
    #[inline(always)]
    fn bump_inv(&self) {
        self.inv.fetch_add(1, Ordering::Relaxed);
    }
    #[inline(always)]
    fn bump_red(&self) {
        self.reductions.fetch_add(1, Ordering::Relaxed);
    }
    #[inline(always)]
    fn bump_shift(&self) {
        self.shifts.fetch_add(1, Ordering::Relaxed);
    }
}

/// A point-in-time copy of the counters. Subtract two snapshots to get the
/// cost of the code between them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    pub mul: u64,
    pub sqr: u64,
    pub add: u64,
    pub inv: u64,
    pub reductions: u64,
    pub shifts: u64,
}

impl OpCounts {
    /// Multiplication events including squarings.
    pub fn total_muls(&self) -> u64 {
        self.mul + self.sqr
    }
}

impl std::ops::Sub for OpCounts {
    type Output = OpCounts;
    fn sub(self, earlier: OpCounts) -> OpCounts {
        OpCounts {
            mul: self.mul - earlier.mul,
            sqr: self.sqr - earlier.sqr,
            add: self.add - earlier.add,
            inv: self.inv - earlier.inv,
            reductions: self.reductions - earlier.reductions,
            shifts: self.shifts - earlier.shifts,
        }
    }
}

impl std::ops::Add for OpCounts {
    type Output = OpCounts;
    fn add(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            mul: self.mul + rhs.mul,
            sqr: self.sqr + rhs.sqr,
            add: self.add + rhs.add,
            inv: self.inv + rhs.inv,
            reductions: self.reductions + rhs.reductions,
            shifts: self.shifts + rhs.shifts,
        }
    }
}

impl fmt::Display for OpCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mul={} sqr={} add={} inv={} red={} shift={}",
            self.mul, self.sqr, self.add, self.inv, self.reductions, self.shifts
        )
    }
}

fn biguint_to_limbs(x: &BigUint, out: &mut [u64]) {
    for l in out.iter_mut() {
        *l = 0;
    }
    for (i, d) in x.iter_u64_digits().enumerate() {
        assert!(i < out.len(), "value does not fit the limb array");
        out[i] = d;
    }
}

fn limbs_to_biguint(limbs: &[u64]) -> BigUint {
    let mut bytes = Vec::with_capacity(limbs.len() * 8);
    for l in limbs {
        bytes.extend_from_slice(&l.to_le_bytes());
    }
    BigUint::from_bytes_le(&bytes)
}

/// Miller-Rabin with a fixed set of small prime witnesses. Deterministic for
/// every input, and more than strong enough for the curated moduli this
/// library is handed (curve primes and subgroup orders).
pub(crate) fn is_probable_prime(n: &BigUint) -> bool {
    const SMALL: [u64; 46] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
        181, 191, 193, 197, 199,
    ];
    let two = BigUint::from(2u64);
    if *n < two {
        return false;
    }
    for &q in &SMALL {
        let q = BigUint::from(q);
        if *n == q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &SMALL {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A prime modulus together with every precomputed constant the Montgomery
/// machinery needs. Construct once, share via `Arc`.
pub struct PrimeModulus {
    bits: u32,
    limb_count: usize,
    byte_len: usize,
    p: [u64; MAX_LIMBS],
    n0_inv: u64,
    r_mod_p: [u64; MAX_LIMBS],
    r2_mod_p: [u64; MAX_LIMBS],
    r3_mod_p: [u64; MAX_LIMBS],
    // offsets[k] = p << (bits + k), a multiple of p large enough to cover
    // the subtraction of 2^k unreduced products from a wide accumulator.
    offsets: [[u64; WIDE_LIMBS]; 4],
    p_big: BigUint,
}

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeModulus({} bits)", self.bits)
    }
}

impl PrimeModulus {
    pub fn new(p: &BigUint) -> Result<Arc<Self>, Error> {
        if (p % 2u64).is_zero() || !is_probable_prime(p) {
            return Err(Error::InvalidModulus(
                "modulus must be an odd prime".into(),
            ));
        }
        let bits = p.bits() as u32;
        let limb_count = ((bits as usize) + 6).div_ceil(64);
        if limb_count > MAX_LIMBS {
            return Err(Error::InvalidModulus(format!(
                "modulus of {bits} bits exceeds the supported size"
            )));
        }
        let r = BigUint::one() << (64 * limb_count);
        let mut limbs = [0u64; MAX_LIMBS];
        biguint_to_limbs(p, &mut limbs[..limb_count]);

        // -p^{-1} mod 2^64 by Newton iteration on the low limb.
        let mut inv: u64 = limbs[0];
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(limbs[0].wrapping_mul(inv)));
        }
        let n0_inv = inv.wrapping_neg();

        let mut r_mod_p = [0u64; MAX_LIMBS];
        let mut r2_mod_p = [0u64; MAX_LIMBS];
        let mut r3_mod_p = [0u64; MAX_LIMBS];
        biguint_to_limbs(&(&r % p), &mut r_mod_p[..limb_count]);
        biguint_to_limbs(&(&r * &r % p), &mut r2_mod_p[..limb_count]);
        biguint_to_limbs(&(&r * &r % p * &r % p), &mut r3_mod_p[..limb_count]);

        let mut offsets = [[0u64; WIDE_LIMBS]; 4];
        for (k, slot) in offsets.iter_mut().enumerate() {
            let shifted = p << (bits as usize + k);
            biguint_to_limbs(&shifted, &mut slot[..2 * limb_count]);
        }

        Ok(Arc::new(PrimeModulus {
            bits,
            limb_count,
            byte_len: ((bits as usize) + 7) / 8,
            p: limbs,
            n0_inv,
            r_mod_p,
            r2_mod_p,
            r3_mod_p,
            offsets,
            p_big: p.clone(),
        }))
    }

    pub fn from_hex(s: &str) -> Result<Arc<Self>, Error> {
        let s = s.strip_prefix("0x").unwrap_or(s);
        let bytes = hex::decode(s)
            .map_err(|e| Error::InvalidEncoding(format!("modulus hex: {e}")))?;
        Self::new(&BigUint::from_bytes_be(&bytes))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p_big
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn byte_len(&self) -> usize {
        self.byte_len
    }

    pub fn limb_count(&self) -> usize {
        self.limb_count
    }
}

fn cmp_limbs(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    debug_assert_eq!(a.len(), b.len());
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// Field context: modulus constants, shared counters, and the lazy flag.
#[derive(Clone)]
pub struct FpCtx {
    params: Arc<PrimeModulus>,
    counters: Arc<OpCounters>,
    lazy: bool,
}

impl fmt::Debug for FpCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FpCtx({} bits, lazy={})",
            self.params.bits, self.lazy
        )
    }
}

impl FpCtx {
    pub fn new(params: Arc<PrimeModulus>, lazy: bool) -> Self {
        FpCtx {
            params,
            counters: Arc::new(OpCounters::new()),
            lazy,
        }
    }

    /// Same modulus and the same counters, different reduction strategy.
    pub fn with_lazy(&self, lazy: bool) -> Self {
        FpCtx {
            params: self.params.clone(),
            counters: self.counters.clone(),
            lazy,
        }
    }

    pub fn lazy(&self) -> bool {
        self.lazy
    }

    pub fn params(&self) -> &Arc<PrimeModulus> {
        &self.params
    }

    pub fn counters(&self) -> &Arc<OpCounters> {
        &self.counters
    }

    pub fn snapshot(&self) -> OpCounts {
        self.counters.snapshot()
    }

    pub fn reset_counters(&self) {
        self.counters.reset()
    }

    fn compatible(&self, other: &FpCtx) -> bool {
        Arc::ptr_eq(&self.params, &other.params) || self.params.p_big == other.params.p_big
    }

    pub fn zero(&self) -> Fp {
        Fp {
            limbs: [0u64; MAX_LIMBS],
            ctx: self.clone(),
        }
    }

    pub fn one(&self) -> Fp {
        Fp {
            limbs: self.params.r_mod_p,
            ctx: self.clone(),
        }
    }

    pub fn from_u64(&self, x: u64) -> Fp {
        self.from_biguint(&BigUint::from(x))
    }

    pub fn from_i64(&self, x: i64) -> Fp {
        let f = self.from_u64(x.unsigned_abs());
        if x < 0 {
            raw_neg(&f)
        } else {
            f
        }
    }

    pub fn from_biguint(&self, x: &BigUint) -> Fp {
        let reduced = x % &self.params.p_big;
        let mut limbs = [0u64; MAX_LIMBS];
        biguint_to_limbs(&reduced, &mut limbs[..self.params.limb_count]);
        // One raw Montgomery multiplication by R^2 converts into Montgomery
        // form. Conversions are bookkeeping, not field work: not counted.
        let out = mont_mul_raw(&limbs, &self.params.r2_mod_p, &self.params);
        Fp {
            limbs: out,
            ctx: self.clone(),
        }
    }

    /// Canonical big-endian hex, exactly `2*byte_len` digits, optional 0x.
    pub fn from_hex(&self, s: &str) -> Result<Fp, Error> {
        let s = s.strip_prefix("0x").unwrap_or(s);
        if s.len() != 2 * self.params.byte_len {
            return Err(Error::InvalidEncoding(format!(
                "expected {} hex digits, got {}",
                2 * self.params.byte_len,
                s.len()
            )));
        }
        let bytes =
            hex::decode(s).map_err(|e| Error::InvalidEncoding(format!("bad hex: {e}")))?;
        let v = BigUint::from_bytes_be(&bytes);
        if v >= self.params.p_big {
            return Err(Error::InvalidEncoding(
                "value is not reduced modulo the field prime".into(),
            ));
        }
        Ok(self.from_biguint(&v))
    }
}

// Raw limb-level routines. These never touch the counters; the counted API
// wraps them.

fn add_mod_raw(a: &[u64; MAX_LIMBS], b: &[u64; MAX_LIMBS], m: &PrimeModulus) -> [u64; MAX_LIMBS] {
    let n = m.limb_count;
    let mut out = [0u64; MAX_LIMBS];
    let mut carry = 0;
    for i in 0..n {
        let (v, c) = adc(a[i], b[i], carry);
        out[i] = v;
        carry = c;
    }
    // limb rule keeps p well below the top of the limb array, so the raw sum
    // never overflows; a single conditional subtraction restores canonicity
    debug_assert_eq!(carry, 0);
    if cmp_limbs(&out[..n], &m.p[..n]) != std::cmp::Ordering::Less {
        let mut borrow = 0;
        for i in 0..n {
            let (v, b2) = sbb(out[i], m.p[i], borrow);
            out[i] = v;
            borrow = b2;
        }
    }
    out
}

fn sub_mod_raw(a: &[u64; MAX_LIMBS], b: &[u64; MAX_LIMBS], m: &PrimeModulus) -> [u64; MAX_LIMBS] {
    let n = m.limb_count;
    let mut out = [0u64; MAX_LIMBS];
    let mut borrow = 0;
    for i in 0..n {
        let (v, b2) = sbb(a[i], b[i], borrow);
        out[i] = v;
        borrow = b2;
    }
    if borrow != 0 {
        let mut carry = 0;
        for i in 0..n {
            let (v, c) = adc(out[i], m.p[i], carry);
            out[i] = v;
            carry = c;
        }
    }
    out
}

fn raw_neg(a: &Fp) -> Fp {
    if a.is_zero() {
        return a.clone();
    }
    let m = &a.ctx.params;
    let n = m.limb_count;
    let mut out = [0u64; MAX_LIMBS];
    let mut borrow = 0;
    for i in 0..n {
        let (v, b2) = sbb(m.p[i], a.limbs[i], borrow);
        out[i] = v;
        borrow = b2;
    }
    Fp {
        limbs: out,
        ctx: a.ctx.clone(),
    }
}

fn mul_wide_raw(
    a: &[u64; MAX_LIMBS],
    b: &[u64; MAX_LIMBS],
    m: &PrimeModulus,
) -> [u64; WIDE_LIMBS] {
    let n = m.limb_count;
    let mut out = [0u64; WIDE_LIMBS];
    for i in 0..n {
        let mut carry = 0;
        for j in 0..n {
            let (v, c) = mac(out[i + j], a[i], b[j], carry);
            out[i + j] = v;
            carry = c;
        }
        out[i + n] = carry;
    }
    out
}

/// Montgomery reduction of a double-width value. Requires input < p*R,
/// which the caller asserts; output is canonical (< p).
fn redc_raw(t: &[u64; WIDE_LIMBS], m: &PrimeModulus) -> [u64; MAX_LIMBS] {
    let n = m.limb_count;
    let mut buf = [0u64; WIDE_LIMBS + 1];
    buf[..2 * n].copy_from_slice(&t[..2 * n]);
    for i in 0..n {
        let mfac = buf[i].wrapping_mul(m.n0_inv);
        let mut carry = 0;
        for j in 0..n {
            let (v, c) = mac(buf[i + j], mfac, m.p[j], carry);
            buf[i + j] = v;
            carry = c;
        }
        let mut k = i + n;
        while carry != 0 {
            let (v, c) = adc(buf[k], carry, 0);
            buf[k] = v;
            carry = c;
            k += 1;
        }
    }
    debug_assert_eq!(buf[2 * n], 0, "accumulator exceeded p*R");
    let mut out = [0u64; MAX_LIMBS];
    out[..n].copy_from_slice(&buf[n..2 * n]);
    if cmp_limbs(&out[..n], &m.p[..n]) != std::cmp::Ordering::Less {
        let mut borrow = 0;
        for i in 0..n {
            let (v, b2) = sbb(out[i], m.p[i], borrow);
            out[i] = v;
            borrow = b2;
        }
    }
    debug_assert!(cmp_limbs(&out[..n], &m.p[..n]) == std::cmp::Ordering::Less);
    out
}

fn mont_mul_raw(
    a: &[u64; MAX_LIMBS],
    b: &[u64; MAX_LIMBS],
    m: &PrimeModulus,
) -> [u64; MAX_LIMBS] {
    let wide = mul_wide_raw(a, b, m);
    redc_raw(&wide, m)
}

/// A double-width unreduced accumulator for lazy reduction.
///
/// The contract is simple: keep the running value below `p*R` (checked when
/// reducing) and never let a subtraction underflow (add an offset first).
#[derive(Clone)]
pub struct Wide {
    limbs: [u64; WIDE_LIMBS],
    ctx: FpCtx,
}

impl Wide {
    pub fn zero(ctx: &FpCtx) -> Self {
        Wide {
            limbs: [0u64; WIDE_LIMBS],
            ctx: ctx.clone(),
        }
    }

    pub fn add_assign(&mut self, other: &Wide) {
        assert!(self.ctx.compatible(&other.ctx), "context mismatch");
        self.ctx.counters.bump_add();
        let n = 2 * self.ctx.params.limb_count;
        let mut carry = 0;
        for i in 0..n {
            let (v, c) = adc(self.limbs[i], other.limbs[i], carry);
            self.limbs[i] = v;
            carry = c;
        }
        assert_eq!(carry, 0, "wide accumulator overflow");
    }

    /// Subtract; the caller must have added a sufficient offset so the
    /// running value stays non-negative.
    pub fn sub_assign(&mut self, other: &Wide) {
        assert!(self.ctx.compatible(&other.ctx), "context mismatch");
        self.ctx.counters.bump_add();
        let n = 2 * self.ctx.params.limb_count;
        let mut borrow = 0;
        for i in 0..n {
            let (v, b2) = sbb(self.limbs[i], other.limbs[i], borrow);
            self.limbs[i] = v;
            borrow = b2;
        }
        assert_eq!(borrow, 0, "wide accumulator underflow; offset too small");
    }

    /// Add `p << (bits + k)`, a multiple of p that dominates `2^k` products.
    pub fn add_offset(&mut self, k: usize) {
        self.ctx.counters.bump_add();
        let off = &self.ctx.params.offsets[k];
        let n = 2 * self.ctx.params.limb_count;
        let mut carry = 0;
        for i in 0..n {
            let (v, c) = adc(self.limbs[i], off[i], carry);
            self.limbs[i] = v;
            carry = c;
        }
        assert_eq!(carry, 0, "wide accumulator overflow");
    }

    pub fn dbl_assign(&mut self) {
        self.ctx.counters.bump_shift();
        let n = 2 * self.ctx.params.limb_count;
        let mut carry = 0;
        for i in 0..n {
            let next = self.limbs[i] >> 63;
            self.limbs[i] = (self.limbs[i] << 1) | carry;
            carry = next;
        }
        assert_eq!(carry, 0, "wide accumulator overflow");
    }

    /// `k * self` by a double-and-add chain; counts the shifts and adds it
    /// actually performs.
    pub fn mul_small(&self, k: u64) -> Wide {
        assert!(k > 0, "zero coefficient in accumulation");
        let mut acc = self.clone();
        let top = 63 - k.leading_zeros();
        for bit in (0..top).rev() {
            acc.dbl_assign();
            if (k >> bit) & 1 == 1 {
                acc.add_assign(self);
            }
        }
        acc
    }

    /// One Montgomery reduction to a canonical field element.
    pub fn reduce(&self) -> Fp {
        let m = &self.ctx.params;
        let n = m.limb_count;
        // enforce the p*R bound: the high half of the accumulator must be
        // strictly below p
        assert!(
            cmp_limbs(&self.limbs[n..2 * n], &m.p[..n]) == std::cmp::Ordering::Less,
            "accumulator exceeded p*R before reduction"
        );
        self.ctx.counters.bump_red();
        Fp {
            limbs: redc_raw(&self.limbs, m),
            ctx: self.ctx.clone(),
        }
    }

    pub fn ctx(&self) -> &FpCtx {
        &self.ctx
    }
}

/// A field element in Montgomery form, always canonically reduced.
#[derive(Clone)]
pub struct Fp {
    limbs: [u64; MAX_LIMBS],
    ctx: FpCtx,
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.compatible(&other.ctx) && self.limbs == other.limbs
    }
}

impl Eq for Fp {}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fp(0x{})", self.to_hex())
    }
}

impl Fp {
    #[inline]
    fn assert_compatible(&self, other: &Fp) {
        assert!(
            self.ctx.compatible(&other.ctx),
            "field context mismatch: operands use different moduli"
        );
    }

    pub fn ctx(&self) -> &FpCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    pub fn is_one(&self) -> bool {
        self.limbs == self.ctx.params.r_mod_p
    }

    pub fn add(&self, rhs: &Fp) -> Fp {
        self.assert_compatible(rhs);
        self.ctx.counters.bump_add();
        Fp {
            limbs: add_mod_raw(&self.limbs, &rhs.limbs, &self.ctx.params),
            ctx: self.ctx.clone(),
        }
    }

    pub fn sub(&self, rhs: &Fp) -> Fp {
        self.assert_compatible(rhs);
        self.ctx.counters.bump_add();
        Fp {
            limbs: sub_mod_raw(&self.limbs, &rhs.limbs, &self.ctx.params),
            ctx: self.ctx.clone(),
        }
    }

    pub fn neg(&self) -> Fp {
        self.ctx.counters.bump_add();
        raw_neg(self)
    }

    /// Doubling is a shift event, not an addition.
    pub fn dbl(&self) -> Fp {
        self.ctx.counters.bump_shift();
        Fp {
            limbs: add_mod_raw(&self.limbs, &self.limbs, &self.ctx.params),
            ctx: self.ctx.clone(),
        }
    }

    /// Halving (division by two), also a shift event.
    pub fn halve(&self) -> Fp {
        self.ctx.counters.bump_shift();
        let m = &self.ctx.params;
        let n = m.limb_count;
        let mut limbs = self.limbs;
        let mut top = 0u64;
        if limbs[0] & 1 == 1 {
            let mut carry = 0;
            for i in 0..n {
                let (v, c) = adc(limbs[i], m.p[i], carry);
                limbs[i] = v;
                carry = c;
            }
            top = carry;
        }
        for i in 0..n {
            let next = if i + 1 < n { limbs[i + 1] } else { top };
            limbs[i] = (limbs[i] >> 1) | (next << 63);
        }
        Fp {
            limbs,
            ctx: self.ctx.clone(),
        }
    }

    pub fn mul(&self, rhs: &Fp) -> Fp {
        self.assert_compatible(rhs);
        self.ctx.counters.bump_mul();
        self.ctx.counters.bump_red();
        Fp {
            limbs: mont_mul_raw(&self.limbs, &rhs.limbs, &self.ctx.params),
            ctx: self.ctx.clone(),
        }
    }

    pub fn sqr(&self) -> Fp {
        self.ctx.counters.bump_sqr();
        self.ctx.counters.bump_red();
        Fp {
            limbs: mont_mul_raw(&self.limbs, &self.limbs, &self.ctx.params),
            ctx: self.ctx.clone(),
        }
    }

    /// Limb-level sum without the modular correction, so the result may lie
    /// in [p, 2p). Only for immediate use as a wide multiplication input
    /// (Karatsuba cross terms need the sum to be exact over the integers);
    /// such a value must never escape into canonical element positions.
    pub(crate) fn sum_unreduced(&self, rhs: &Fp) -> Fp {
        self.assert_compatible(rhs);
        self.ctx.counters.bump_add();
        let n = self.ctx.params.limb_count;
        let mut out = [0u64; MAX_LIMBS];
        let mut carry = 0;
        for i in 0..n {
            let (v, c) = adc(self.limbs[i], rhs.limbs[i], carry);
            out[i] = v;
            carry = c;
        }
        debug_assert_eq!(carry, 0);
        Fp {
            limbs: out,
            ctx: self.ctx.clone(),
        }
    }

    /// Product kept in double width, no reduction yet.
    pub fn mul_wide(&self, rhs: &Fp) -> Wide {
        self.assert_compatible(rhs);
        self.ctx.counters.bump_mul();
        Wide {
            limbs: mul_wide_raw(&self.limbs, &rhs.limbs, &self.ctx.params),
            ctx: self.ctx.clone(),
        }
    }

    pub fn sqr_wide(&self) -> Wide {
        self.ctx.counters.bump_sqr();
        Wide {
            limbs: mul_wide_raw(&self.limbs, &self.limbs, &self.ctx.params),
            ctx: self.ctx.clone(),
        }
    }

    /// `k * self` by double-and-add; 0 and 1 are free.
    pub fn mul_small(&self, k: u64) -> Fp {
        match k {
            0 => self.ctx.zero(),
            1 => self.clone(),
            _ => {
                let mut acc = self.clone();
                let top = 63 - k.leading_zeros();
                for bit in (0..top).rev() {
                    acc = acc.dbl();
                    if (k >> bit) & 1 == 1 {
                        acc = acc.add(self);
                    }
                }
                acc
            }
        }
    }

    /// `a*b - c*d`. Lazy contexts combine the two products in double width
    /// and pay a single reduction; plain contexts reduce each product.
    pub fn mul_sub(a: &Fp, b: &Fp, c: &Fp, d: &Fp) -> Fp {
        if a.ctx.lazy {
            let mut acc = a.mul_wide(b);
            acc.add_offset(0);
            acc.sub_assign(&c.mul_wide(d));
            acc.reduce()
        } else {
            a.mul(b).sub(&c.mul(d))
        }
    }

    /// `a*b + c*d`, one reduction when lazy.
    pub fn mul_add(a: &Fp, b: &Fp, c: &Fp, d: &Fp) -> Fp {
        if a.ctx.lazy {
            let mut acc = a.mul_wide(b);
            acc.add_assign(&c.mul_wide(d));
            acc.reduce()
        } else {
            a.mul(b).add(&c.mul(d))
        }
    }

    /// Signed sum of products, `sum (+|-) a_i*b_i`. Lazy contexts keep the
    /// whole accumulation in double width and pay one reduction; plain
    /// contexts reduce every product. The first term must be positive.
    pub fn sum_prod(terms: &[(bool, &Fp, &Fp)]) -> Fp {
        assert!(!terms.is_empty() && !terms[0].0, "first term must be added");
        if terms[0].1.ctx.lazy {
            let mut acc = terms[0].1.mul_wide(terms[0].2);
            for (negate, a, b) in &terms[1..] {
                let prod = a.mul_wide(b);
                if *negate {
                    // Each operand is reduced, so the product stays below
                    // p*2^bits and a single offset covers the subtraction.
                    acc.add_offset(0);
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

    /// Same value bound to a context that differs only in reduction
    /// strategy. Counters and modulus are shared; no field work happens.
    pub fn retag_lazy(&self, lazy: bool) -> Fp {
        if self.ctx.lazy == lazy {
            return self.clone();
        }
        Fp {
            limbs: self.limbs,
            ctx: self.ctx.with_lazy(lazy),
        }
    }

    /// Multiplicative inverse. The algorithm itself is uncounted; the event
    /// is recorded as a single inversion.
    pub fn inv(&self) -> Result<Fp, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.ctx.counters.bump_inv();
        let m = &self.ctx.params;
        let x = limbs_to_biguint(&self.limbs[..m.limb_count]);
        // x = a*R, so x^{-1} = a^{-1}*R^{-1} and one raw Montgomery
        // multiplication by R^3 yields a^{-1}*R.
        let xinv = x.modpow(&(&m.p_big - BigUint::from(2u64)), &m.p_big);
        let mut limbs = [0u64; MAX_LIMBS];
        biguint_to_limbs(&xinv, &mut limbs[..m.limb_count]);
        let out = mont_mul_raw(&limbs, &m.r3_mod_p, m);
        Ok(Fp {
            limbs: out,
            ctx: self.ctx.clone(),
        })
    }

    /// Square-and-multiply with counted operations.
    pub fn pow_biguint(&self, e: &BigUint) -> Fp {
        if e.is_zero() {
            return self.ctx.one();
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

    /// Square root for p = 3 (mod 4), as all moduli in this crate are.
    pub fn sqrt(&self) -> Option<Fp> {
        let m = &self.ctx.params;
        assert!(
            m.p_big.bit(0) && m.p_big.bit(1),
            "sqrt shortcut requires p = 3 (mod 4)"
        );
        let e = (&m.p_big + BigUint::one()) >> 2;
        let cand = self.pow_biguint(&e);
        if cand.sqr() == *self {
            Some(cand)
        } else {
            None
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        let m = &self.ctx.params;
        let mut wide = [0u64; WIDE_LIMBS];
        wide[..m.limb_count].copy_from_slice(&self.limbs[..m.limb_count]);
        let std_form = redc_raw(&wide, m);
        limbs_to_biguint(&std_form[..m.limb_count])
    }

    /// Canonical big-endian hex, zero padded to the modulus byte length.
    pub fn to_hex(&self) -> String {
        let m = &self.ctx.params;
        let v = self.to_biguint();
        let bytes = v.to_bytes_be();
        let mut out = vec![0u8; m.byte_len];
        out[m.byte_len - bytes.len()..].copy_from_slice(&bytes);
        hex::encode(out)
    }
}
