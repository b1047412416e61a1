//! Parameter derivations for protocols built on top of a ticket assignment.

pub mod coding;
pub mod committee;
pub mod sharing;

pub use coding::{erasure_params, error_correction_params, ErasureParams, ErrorCorrectionParams};
pub use committee::{virtual_committee, VirtualCommittee};
pub use sharing::{deal_blunt_secret, reconstruct_secret, BluntSharingParams, Share};
