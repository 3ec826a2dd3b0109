//! Exact enumeration of topological types of extended Schottky groups.

mod counts;
mod oracle;
mod pairings;
mod signature;

pub use counts::{
    b_f, count_report, delta_set, g0_count, m_g, m_g_closed_form, n_f, n_f_closed_form, q_multiset,
    real_part_sum, residual_rank, t_gamma, CountReport, DeltaEntry, RealRanks,
};
pub use oracle::{
    enumerate_types, granularity, m_g_oracle, refined_types, Granularity, RealFactor,
    RealSchottkyType, TopType,
};
pub use pairings::{directed_pairings, pairing_report, pairings_over_gamma, PairingReport};
pub use signature::Signature;
