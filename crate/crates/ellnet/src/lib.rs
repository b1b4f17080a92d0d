//! Elliptic net arithmetic: pairings and scalar multiplication driven by the
//! four-term net recurrence, with exact operation accounting for comparing
//! evaluation strategies.

pub mod curves;
pub mod error;
pub mod field;
pub mod fp;
pub mod net;
pub mod netmul;
pub mod pairings;
pub mod tower;

pub use curves::{Curve, Point};
pub use error::Error;
pub use field::{Field, SecondField};
pub use fp::{Fp, FpCtx, OpCounters, OpCounts, PrimeModulus};
pub use net::{first_vector_seeds, pair_seeds, Algorithm, Net, NetSeeds, NetVariant};
pub use netmul::{netmul, netmul_extract, netmul_init, netmul_step, MulCurveConfig, Rank1Block};
pub use pairings::{
    miller_on_divisor, miller_oracle, miller_signed, net_miller_ratio, net_pairing_ratio,
    BlsPairings,
    OptimalAteRecipe, PairingResult,
};
pub use tower::{Fp12, Fp2, Fp6, Tower};
