//! Unit quadratic residues in finite commutative rings, counted and lifted
//! through chains of nilpotent ideals.

pub mod census;
pub mod cli;
pub mod error;
pub mod ideal;
pub mod lifting;
pub mod modular;
pub mod oracle;
pub mod ring;

pub use census::{
    chain_census, coset_equivalence_check, is_qr_unit, product_census, product_ring_census, ring_census,
    solution_count_chain, sqrt_all, sqrt_coset, sqrt_zn, zn_census, zn_census_with, Alpha, ChainCensus, IdentityCheck,
    PrimePower, ResidueIndex, ResidueReport, SolutionSet, ZnFactorization,
};
pub use error::{Error, Result};
pub use ideal::{
    canonical_chain, ideal_from_generators, ideal_power, ideal_product, nilpotency_data, nilradical, parse_chain,
    parse_ideal, power_chain, quotient, verify_chain, verify_cnc, zero_ideal, CncChain, CncViolation, Ideal,
    IdealChain, QuotientRing,
};
pub use lifting::{
    assert_unit_coset, chain_power_lift, chain_power_lift_with, freshman_power_check, power_lift, root_in_coset,
    root_in_coset_verified, CosetRootFinder, LiftWitness, PowerMap,
};
pub use oracle::{audit, audit_passes, brute_squares, AuditEntry, AuditStatus, SquareTable};
pub use ring::{parse_ring_spec, Element, Ring, RingSpec};
