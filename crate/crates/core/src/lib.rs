//! Finite permutation group computations: solubility scans, generation
//! probabilities over cosets, exhaustive counting identities, and the
//! supporting group machinery (stabilizer chains, block systems, wreath
//! products, finite semilinear groups).

pub mod analysis;
pub mod blocks;
pub mod combinatorics;
pub mod constructions;
pub mod enumerate;
pub mod error;
pub mod gf;
pub mod group;
pub mod insolubility;
pub mod naive;
pub mod numtheory;
pub mod perm;
pub mod sampling;
pub mod solubilizer;
pub mod textnum;
pub mod wreath;

pub use analysis::{
    contains_alternating, is_soluble, pair_generates_soluble, solubility_certificate,
    SolubilityCertificate,
};
pub use blocks::{blocks_action, minimal_block_system, BlockSystem};
pub use combinatorics::{
    facile_count, fact1_check, fact2_check, factorial_identity_check, iota_count, kappa_closed_form,
    kappa_count, lambda_member, lambda_rate_exact, lambda_rate_montecarlo, nontransitivity_exact,
    nontransitivity_rate, project_onto, restrict_to, DistinguishedCycleCount, FactorialIdentity,
    IotaCount,
};
pub use error::{Error, Result};
pub use gf::{
    agammal_fixed_points, fpagl_check, prime_powers_up_to, FixedPointReport, FqElement, FqField,
    SemilinearMap,
};
pub use group::GroupHandle;
pub use insolubility::{
    eta_exact, eta_tilde, pins_exact, pins_montecarlo, two_coset_generation_check, CosetParity,
    CosetSpec, EtaReport, InsolubilityReport, Probability, ReportKind, DEFAULT_EXACT_CEILING,
};
pub use numtheory::{b_empirical, totient, totient_ratio_count, totient_sieve};
pub use perm::{orbits, Permutation};
pub use sampling::{wilson_interval, McEstimate};
pub use solubilizer::{
    ccent_check, construction_chain, crucial_bound_check, derived_series_chain, solubilizer_set,
    t_centralizer_count, CacheMode, CcentOutcome, CrucialReport, NormalChain, SolubilizerReport,
    DEFAULT_SOLUBILIZER_CEILING,
};
pub use wreath::{wreath_pins_montecarlo, WreathElement};

pub use num_bigint::BigUint;
pub use num_rational::BigRational;
