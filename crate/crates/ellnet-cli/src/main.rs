//! Command line driver for the ellnet library: compute pairings and scalar
//! multiplications, benchmark every variant with exact operation counters,
//! and run a self test wired to the frozen budgets.
//!
//! All randomness is seeded, so reports are reproducible; wall times are
//! reported for orientation but nothing ever depends on them.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use ellnet::curves::bls12_381::Bls12381;
use ellnet::curves::toy::ToyCurve;
use ellnet::curves::{point_from_hex, point_to_hex, Curve};
use ellnet::net::oracle::first_terms;
use ellnet::{
    first_vector_seeds, miller_oracle, netmul, netmul_init, netmul_step, Algorithm, BlsPairings,
    Field, Fp, FpCtx, MulCurveConfig, Net, NetVariant, OpCounts, Point,
};

#[derive(Parser)]
#[command(
    name = "ellnet",
    about = "Elliptic net pairings and scalar multiplication with exact operation counting",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute an Optimal Ate pairing on BLS12-381
    Pair(PairArgs),
    /// Net-based scalar multiplication on a NIST curve
    Mul(MulArgs),
    /// Run every variant on seeded random inputs and print a counter report
    Bench(BenchArgs),
    /// Oracle suites and budget assertions; exits 0 when everything holds
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantName {
    Ena,
    Iena,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct PairArgs {
    /// Target curve; only bls12-381 is wired up
    #[arg(long, default_value = "bls12-381")]
    curve: String,
    /// Block shape: eight-term (ena) or seven-term (iena)
    #[arg(long, value_enum)]
    variant: VariantName,
    /// Evaluate through the sextic twist
    #[arg(long)]
    twist: bool,
    /// Lazy double-width reductions
    #[arg(long)]
    lazy: bool,
    /// Trade the add-step inversion for a block rescale (iena only)
    #[arg(long = "elim-inv")]
    elim_inv: bool,
    /// Signed-digit loop recoding (iena only)
    #[arg(long)]
    naf: bool,
    /// G1 point, uncompressed hex (04 || x || y)
    #[arg(short = 'P', value_name = "HEX")]
    p: String,
    /// G2 point on the twist, uncompressed hex over Fp2 (04 || x || y)
    #[arg(short = 'Q', long = "qp", alias = "Qp", value_name = "HEX")]
    qp: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum MulCurveName {
    P384,
    P521,
}

#[derive(Args)]
struct MulArgs {
    #[arg(long, value_enum)]
    curve: MulCurveName,
    /// Scalar, decimal
    #[arg(short = 'k', value_name = "DECIMAL")]
    k: String,
    /// Base point, uncompressed hex (04 || x || y); 00 is the point at
    /// infinity
    #[arg(short = 'P', value_name = "HEX")]
    p: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    /// Iterations per variant
    #[arg(long)]
    iters: u64,
    /// Seed for the input stream; same seed, same counts
    #[arg(long, default_value_t = 0xe11e7)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Pair(args) => cmd_pair(args),
        Cmd::Mul(args) => cmd_mul(args),
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Selftest => cmd_selftest(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_pair(args: PairArgs) -> Result<()> {
    if args.curve != "bls12-381" {
        bail!("unsupported curve {:?}; try bls12-381", args.curve);
    }
    let variant = match args.variant {
        VariantName::Ena => NetVariant::ena(),
        VariantName::Iena => NetVariant::iena(),
    }
    .lazy(args.lazy)
    .elim_inv(args.elim_inv)
    .naf(args.naf)
    .twist(args.twist);
    variant.validate()?;

    let bls = Bls12381::new(true)?;
    let pairs = BlsPairings::new(bls.clone());
    let p = point_from_hex(&bls.curve_g1, &bls.curve_g1.a, &args.p).context("-P")?;
    let qp = point_from_hex(&bls.curve_g2, &bls.curve_g2.a, &args.qp).context("-Q")?;
    let t0 = Instant::now();
    let res = pairs.opt_ate(&qp, &p, variant)?;
    let nanos = t0.elapsed().as_nanos();

    match args.format {
        Format::Json => {
            let c = res.counts;
            let row = json!({
                "variant": res.variant.label(),
                "value": res.value.to_hex(),
                "mul": c.mul,
                "sqr": c.sqr,
                "add": c.add,
                "inv": c.inv,
                "reductions": c.reductions,
                "nanos": nanos,
            });
            println!("{}", serde_json::to_string_pretty(&row)?);
        }
        Format::Text => {
            println!("value = {}", res.value.to_hex());
            println!("variant = {}", res.variant.label());
            println!("counts: {}", res.counts);
        }
    }
    Ok(())
}

fn cmd_mul(args: MulArgs) -> Result<()> {
    let cfg = match args.curve {
        MulCurveName::P384 => MulCurveConfig::p384(true)?,
        MulCurveName::P521 => MulCurveConfig::p521(true)?,
    };
    let k = BigUint::parse_bytes(args.k.as_bytes(), 10)
        .with_context(|| format!("-k {:?} is not a decimal scalar", args.k))?;
    let p = point_from_hex(&cfg.curve, &cfg.curve.a, &args.p).context("-P")?;

    cfg.fp.reset_counters();
    let t0 = Instant::now();
    let result = netmul(&k, &p, &cfg)?;
    let nanos = t0.elapsed().as_nanos();
    let counts = cfg.fp.snapshot();
    let bits = k.bits().max(1);

    match args.format {
        Format::Json => {
            let row = json!({
                "curve": if cfg.gcd3 { "p384" } else { "p521" },
                "point": point_to_hex(&result),
                "mul": counts.mul,
                "sqr": counts.sqr,
                "add": counts.add,
                "inv": counts.inv,
                "reductions": counts.reductions,
                "shifts": counts.shifts,
                "bits": bits,
                "nanos": nanos,
            });
            println!("{}", serde_json::to_string_pretty(&row)?);
        }
        Format::Text => {
            println!("{}", point_to_hex(&result));
            println!("counts: {counts} over {bits} scalar bits");
        }
    }
    Ok(())
}

/// One report row: totals over `iters` repetitions of whatever the label
/// names. The key set is fixed; tooling may rely on it.
fn row(label: String, iters: u64, counts: OpCounts, nanos: u128) -> serde_json::Value {
    json!({
        "variant": label,
        "mul": counts.mul,
        "sqr": counts.sqr,
        "add": counts.add,
        "inv": counts.inv,
        "reductions": counts.reductions,
        "iters": iters,
        "nanos": nanos,
    })
}

fn all_pairing_variants() -> Vec<NetVariant> {
    let mut out = Vec::new();
    for bits in 0..4 {
        out.push(NetVariant::ena().lazy(bits & 1 != 0).twist(bits & 2 != 0));
    }
    for bits in 0..16 {
        out.push(
            NetVariant::iena()
                .lazy(bits & 1 != 0)
                .elim_inv(bits & 2 != 0)
                .naf(bits & 4 != 0)
                .twist(bits & 8 != 0),
        );
    }
    out
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if args.iters == 0 {
        bail!("--iters must be at least 1");
    }
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let bls = Bls12381::new(true)?;
    let pairs = BlsPairings::new(bls.clone());
    let mut rows = Vec::new();

    // pairing variants on shared random inputs
    let inputs: Vec<(Point<Fp>, _)> = (0..args.iters)
        .map(|_| {
            let a = BigInt::from(rng.gen_range(2u64..1 << 62));
            let b = BigInt::from(rng.gen_range(2u64..1 << 62));
            (
                bls.curve_g1.scalar_mul(&bls.g1, &a),
                bls.curve_g2.scalar_mul(&bls.g2, &b),
            )
        })
        .collect();
    for variant in all_pairing_variants() {
        bls.fp.reset_counters();
        let t0 = Instant::now();
        for (p, qp) in &inputs {
            pairs.opt_ate(qp, p, variant)?;
        }
        rows.push(row(
            variant.label(),
            args.iters,
            bls.fp.snapshot(),
            t0.elapsed().as_nanos(),
        ));
    }

    // single net steps, the per-iteration budgets the pairing loop is made
    // of; per-iteration reductions are totals divided by iters
    let nist = ellnet::curves::nist::p384(false)?;
    let q = nist.curve.scalar_mul(&nist.g, &BigInt::from(5));
    for variant in [
        NetVariant::ena(),
        NetVariant::iena(),
        NetVariant::iena().lazy(true),
    ] {
        for (kind, step) in [
            ("double", Net::double as fn(&mut Net<Fp, Fp>) -> _),
            ("double-add", Net::double_add),
        ] {
            let mut net = Net::init(
                variant,
                &nist.curve.a,
                &nist.curve.b,
                (&nist.g.x, &nist.g.y),
                (&q.x, &q.y),
            )?;
            nist.fp.reset_counters();
            let t0 = Instant::now();
            for _ in 0..args.iters {
                step(&mut net)?;
            }
            rows.push(row(
                format!("step/{kind}[{}]", variant.label()),
                args.iters,
                nist.fp.snapshot(),
                t0.elapsed().as_nanos(),
            ));
        }
    }

    // scalar multiplication steps on both NIST profiles
    for name in ["p384", "p521"] {
        let cfg = ellnet::netmul::nist_config(name, true)?;
        let g = cfg.generator.clone().expect("nist generator");
        let mut block = netmul_init(&g, &cfg)?;
        cfg.fp.reset_counters();
        let t0 = Instant::now();
        for i in 0..args.iters {
            block = netmul_step(&block, i % 2 == 1);
        }
        rows.push(row(
            format!("mulstep[{name}]"),
            args.iters,
            cfg.fp.snapshot(),
            t0.elapsed().as_nanos(),
        ));
    }

    let report = json!({
        "seed": args.seed,
        "iters": args.iters,
        "records": rows,
    });
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Text => {
            println!(
                "{:<34} {:>6} {:>10} {:>9} {:>11} {:>6} {:>10} {:>9} {:>12}",
                "variant", "iters", "mul", "sqr", "add", "inv", "red", "red/iter", "nanos"
            );
            for r in report["records"].as_array().unwrap() {
                let per = r["reductions"].as_u64().unwrap() / r["iters"].as_u64().unwrap();
                println!(
                    "{:<34} {:>6} {:>10} {:>9} {:>11} {:>6} {:>10} {:>9} {:>12}",
                    r["variant"].as_str().unwrap(),
                    r["iters"].as_u64().unwrap(),
                    r["mul"].as_u64().unwrap(),
                    r["sqr"].as_u64().unwrap(),
                    r["add"].as_u64().unwrap(),
                    r["inv"].as_u64().unwrap(),
                    r["reductions"].as_u64().unwrap(),
                    per,
                    r["nanos"].as_u64().unwrap_or(0),
                );
            }
        }
    }
    Ok(())
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        bail!("selftest failed: {what}");
    }
}

/// The toy-curve oracle suites and the frozen reduction budgets. Everything
/// here re-derives its expectations from independent code paths: Miller's
/// algorithm for the pairing, double-and-add for scalars, and the slow
/// recurrence fill for raw net terms.
fn cmd_selftest() -> Result<()> {
    // reduced Tate on the toy curve against the Miller oracle, 25 pairs
    let toy = ToyCurve::new(false)?;
    let fe = (BigUint::from(toy.p) * BigUint::from(toy.p) - 1u32) / BigUint::from(toy.r);
    let r = BigUint::from(toy.r);
    for a in 1u64..=5 {
        for b in 1u64..=5 {
            let p = toy.curve.scalar_mul(&toy.g1, &BigInt::from(a));
            let q = toy.curve2.scalar_mul(&toy.g2, &BigInt::from(b));
            let net = ellnet::net_pairing_ratio(
                NetVariant::iena(),
                &toy.curve.a,
                &toy.curve.b,
                (&p.x, &p.y),
                (&q.x, &q.y),
                &r,
            )?
            .pow(&fe);
            let oracle = miller_oracle(&toy.curve2, &toy.lift_g1(&p), &q, &r)?.pow(&fe);
            check(net == oracle, "toy reduced Tate vs Miller oracle")?;
        }
    }

    // raw first-vector walk against the recurrence fill
    let w = {
        let (a, b, c) = first_vector_seeds(&toy.g1.x, &toy.g1.y, &toy.curve.a, &toy.curve.b);
        first_terms(&a, &b, &c, 130)?
    };
    let cfg = MulCurveConfig::new(toy.fp.clone(), toy.curve.clone(), Some(toy.g1.clone()));
    let plain_cfg = cfg.clone().without_rescale();
    let block = {
        let mut b = netmul_init(&toy.g1, &plain_cfg)?;
        for bit in [true, false, true] {
            b = netmul_step(&b, bit);
        }
        b
    };
    check(*block.center() == BigUint::from(13u32), "walk center")?;
    check(block.terms()[3] == w[13], "walk term vs recurrence fill")?;

    // scalar multiplication against double-and-add, both schemes
    for n in 1u64..=200 {
        let n = BigUint::from(n);
        let fast = netmul(&n, &toy.g1, &cfg)?;
        let slow = toy.curve.scalar_mul_biguint(&toy.g1, &n);
        check(fast == slow, "net scalar multiple vs ladder (rescaled)")?;
        let plain = netmul(&n, &toy.g1, &plain_cfg)?;
        check(plain == slow, "net scalar multiple vs ladder (plain)")?;
    }

    // seed reduction budgets: {a,b nonzero; b = 0; a = 0} cost
    // {10, 8, 6} reductions plain and {7, 6, 5} lazy
    for (lazy, budgets) in [(false, [10u64, 8, 6]), (true, [7, 6, 5])] {
        let fp = toy.fp.with_lazy(lazy);
        for ((a, b), want) in [(2u64, 3u64), (2, 0), (0, 5)].into_iter().zip(budgets) {
            let (ae, be) = (fp.from_u64(a), fp.from_u64(b));
            let curve = Curve::new(ae.clone(), be.clone())?;
            let pt = scan_point(&fp, &curve);
            let before = fp.snapshot();
            let _ = first_vector_seeds(&pt.x, &pt.y, &ae, &be);
            let spent = fp.snapshot() - before;
            check(
                spent.reductions == want,
                &format!("seed budget ({a},{b}) lazy={lazy}: {} != {want}", spent.reductions),
            )?;
        }
    }

    // per-step reduction budgets on a full-width block walk
    let nist = ellnet::curves::nist::p384(false)?;
    let q = nist.curve.scalar_mul(&nist.g, &BigInt::from(3));
    for (variant, dbl, dbl_add) in [
        (NetVariant::ena(), 42u64, 42u64),
        (NetVariant::iena(), 37, 40),
        (NetVariant::iena().lazy(true), 27, 30),
    ] {
        let mut net = Net::init(
            variant,
            &nist.curve.a,
            &nist.curve.b,
            (&nist.g.x, &nist.g.y),
            (&q.x, &q.y),
        )?;
        for _ in 0..3 {
            let before = nist.fp.snapshot();
            net.double()?;
            let spent = nist.fp.snapshot() - before;
            check(
                spent.reductions == dbl,
                &format!("double budget {}: {} != {dbl}", variant.label(), spent.reductions),
            )?;
            let before = nist.fp.snapshot();
            net.double_add()?;
            let spent = nist.fp.snapshot() - before;
            check(
                spent.reductions == dbl_add,
                &format!(
                    "double-add budget {}: {} != {dbl_add}",
                    variant.label(),
                    spent.reductions
                ),
            )?;
        }
    }

    // per-step scalar multiplication budgets: 19 mul + 6 sqr rescaled,
    // 24 mul + 6 sqr plain
    for (cfg, mul, label) in [(&cfg, 19u64, "rescaled"), (&plain_cfg, 24, "plain")] {
        let mut block = netmul_init(&toy.g1, cfg)?;
        for bit in [false, true, true, false] {
            let before = cfg.fp.snapshot();
            block = netmul_step(&block, bit);
            let spent = cfg.fp.snapshot() - before;
            check(
                spent.mul == mul && spent.sqr == 6,
                &format!("{label} step budget: {spent}"),
            )?;
        }
    }

    println!("selftest: ok");
    Ok(())
}

fn scan_point(fp: &FpCtx, curve: &Curve<Fp>) -> Point<Fp> {
    for x in 1u64.. {
        let xe = fp.from_u64(x);
        if let Some(y) = curve.rhs(&xe).sqrt() {
            if !y.is_zero() {
                return curve.point(xe, y).expect("rhs admitted the root");
            }
        }
    }
    unreachable!()
}
