//! Ownership-cost engine for distributed energy resources.
//!
//! The crate computes per-usage-unit ownership-cost rates (dollars per hour,
//! or per amp-hour for batteries) for a piece of equipment under four
//! accounting approaches, propagates discrete uncertainty in equipment
//! lifetime and annual usage through each approach, and ranks the approaches
//! by risk subject to a total-payment accuracy gate.
//!
//! Module map:
//! - [`econ`]: depreciation, capital recovery, and the four cost-rate
//!   approaches.
//! - [`distributions`]: discrete outcome distributions (hypergeometric with
//!   exact big-integer masses, minimum extreme-value, explicit).
//! - [`risk`]: cost surfaces over outcome grids, expected cost, standard
//!   deviation, gated ranking.
//! - [`verification`]: year-by-year payment schedules accumulated nominally
//!   or in present value, compared against the replacement-chain base case.
//! - [`battery`]: charge-life and effective-discharge adapters so the same
//!   engine prices batteries in amp-hours.

#![forbid(unsafe_code)]

pub mod battery;
pub mod distributions;
pub mod econ;
mod error;
pub mod risk;
pub mod verification;

pub use battery::{BatteryCostRates, BatterySpec, DischargeEvent};
pub use distributions::{DiscreteDistribution, DistributionSpec};
pub use econ::{Approach, CostRate, EquipmentScenario, FinancialParams, HorizonPolicy};
pub use error::CoreError;
pub use risk::{Ranking, RiskReport, Surface};
pub use verification::{AccumulationMode, PaymentSchedule, VerificationRow};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoreError>;
