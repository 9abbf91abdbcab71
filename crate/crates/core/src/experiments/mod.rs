// SPDX-License-Identifier: Apache-2.0

//! Campaign drivers. Each returns a [`ScanReport`]; a report passes exactly
//! when its violation list is empty.

pub mod checks;
mod four_to_one;
mod mx;
mod pell;
pub mod report;
mod scan;
mod verify;

pub use four_to_one::{four_to_one_check, MAX_PREIMAGES};
pub use mx::{
    extremal_lf_construct, mx_campaign, mx_search, mx_witnesses, ExtremalResult, MxResult, EXHAUSTIVE_MX_LIMIT,
};
pub use pell::{pell_records, pell_scan, InertFactor, PellRecord};
pub use report::{FieldId, ScanReport, Status, Violation};
pub use scan::scan_splitfree;
pub use verify::{verify_suite, VerifyConfig, HALF_PELL_PRIME_INDICES, INERT_HALF_PELL_PRIME_INDICES};
