//! A small discrete memoryless interference channel with the full
//! multiplex encoder (time sharing, common/private superposition, stochastic
//! encoder, per-transmitter bijective hashing), and exact brute-force
//! leakage evaluation against the single-letter bound.

mod channel;
mod code;
mod leakage;

pub use channel::{DiscreteIC, DiscreteIcSpec, LawSpec, SingleLetterLaw};
pub use code::{
    decode_ml, exact_block_error, generate_codebook, generate_codebook_with, sampled_block_error,
    Codebook, Decoded, Encoded, IndexBits, MultiplexCode, ENUMERATION_LIMIT,
};
pub use leakage::{
    a_rho, bound_base, exact_leakage, finite_length_leakage_rate_bound, rates, sample_leakage,
    sampled_code, single_letter_leakage_bound, DiscreteInstance, FiniteLengthBound, LeakageReport,
    LeakageSample, EPSILON_LABEL,
};
