//! Battery adaptation of the cost engine: usage is metered in amp-hours
//! instead of hours.
//!
//! Charge life turns cycle ratings into a total-Ah economic life, and the
//! effective-discharge transform folds depth-of-discharge stress and
//! capacity fade into the metered Ah. With those two conversions the
//! generic rate machinery applies unchanged, with `economic_life` in Ah and
//! usage in Ah per year.

use crate::econ::{self, CostRate, EquipmentScenario, FinancialParams};
use crate::{CoreError, Result};

/// Battery nameplate ratings plus the stress curve-fit coefficients.
///
/// `u0` and `u1` have no defaults on purpose: they come from fitting cycle
/// data of the specific cell chemistry, and a silently assumed value would
/// skew every effective-Ah figure downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatterySpec {
    /// Cycles to end of life at rated depth of discharge and current.
    pub rated_cycle_life: f64,
    /// Rated depth of discharge, fraction in (0, 1].
    pub rated_dod: f64,
    /// Capacity at rated discharge current, Ah.
    pub rated_capacity: f64,
    /// Exponent on the DoD stress ratio.
    pub u0: f64,
    /// Coefficient in the exponential stress term.
    pub u1: f64,
}

impl BatterySpec {
    pub fn validate(&self) -> Result<()> {
        if !self.rated_cycle_life.is_finite() || self.rated_cycle_life <= 0.0 {
            return Err(CoreError::invalid(
                "rated_cycle_life",
                format!("must be finite and positive, got {}", self.rated_cycle_life),
            ));
        }
        if !self.rated_dod.is_finite() || self.rated_dod <= 0.0 || self.rated_dod > 1.0 {
            return Err(CoreError::invalid(
                "rated_dod",
                format!("must lie in (0, 1], got {}", self.rated_dod),
            ));
        }
        if !self.rated_capacity.is_finite() || self.rated_capacity <= 0.0 {
            return Err(CoreError::invalid(
                "rated_capacity",
                format!("must be finite and positive, got {}", self.rated_capacity),
            ));
        }
        if !self.u0.is_finite() || !self.u1.is_finite() {
            return Err(CoreError::invalid("u0", "u0 and u1 must be finite"));
        }
        Ok(())
    }
}

/// One discharge event from an operations log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DischargeEvent {
    /// Ah actually discharged during the event.
    pub discharged: f64,
    /// Battery capacity at the time of the event, Ah.
    pub capacity: f64,
    /// Depth of discharge reached, fraction in (0, 1].
    pub dod: f64,
}

impl DischargeEvent {
    pub fn validate(&self) -> Result<()> {
        if !self.discharged.is_finite() || self.discharged < 0.0 {
            return Err(CoreError::invalid(
                "discharged",
                format!("must be finite and non-negative, got {}", self.discharged),
            ));
        }
        if !self.capacity.is_finite() || self.capacity <= 0.0 {
            return Err(CoreError::invalid(
                "capacity",
                format!("must be finite and positive, got {}", self.capacity),
            ));
        }
        if !self.dod.is_finite() || self.dod <= 0.0 || self.dod > 1.0 {
            return Err(CoreError::invalid(
                "dod",
                format!("must lie in (0, 1], got {}", self.dod),
            ));
        }
        Ok(())
    }
}

/// Total charge life: the Ah a battery can deliver over its whole service
/// life at rated conditions. This is the battery's `economic_life`.
pub fn charge_life(spec: &BatterySpec) -> Result<f64> {
    spec.validate()?;
    Ok(spec.rated_cycle_life * spec.rated_dod * spec.rated_capacity)
}

/// Effective Ah consumed by one event: the metered Ah scaled by capacity
/// fade and by DoD stress relative to rated conditions. Discharging at
/// rated capacity and rated DoD passes the meter reading through unchanged.
pub fn effective_discharge(event: &DischargeEvent, spec: &BatterySpec) -> Result<f64> {
    spec.validate()?;
    event.validate()?;
    let stress = event.dod / spec.rated_dod;
    Ok(event.discharged
        * (spec.rated_capacity / event.capacity)
        * stress.powf(spec.u0)
        * (spec.u1 * (stress - 1.0)).exp())
}

/// Sum of effective discharges over one year's worth of events.
pub fn annual_effective_discharge(events: &[DischargeEvent], spec: &BatterySpec) -> Result<f64> {
    if events.is_empty() {
        return Err(CoreError::invalid("events", "event log is empty"));
    }
    let mut total = 0.0;
    for event in events {
        total += effective_discharge(event, spec)?;
    }
    Ok(total)
}

/// Escalating per-effective-Ah cost rates on two denominators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryCostRates {
    /// Denominator is the charge life (total Ah per installed unit); the
    /// drop-in analogue of the hours formulation.
    pub lifetime_basis: CostRate,
    /// Denominator is the observed annual effective Ah, tying the rate to
    /// the metered duty rather than the nameplate.
    pub annual_sum_basis: CostRate,
}

/// Year-`year` cost per effective Ah under both denominators.
///
/// The scenario's `economic_life` must already be the charge life in Ah;
/// `annual_effective_ah` (from the operations log) replaces the planned
/// annual usage for replacement counting, so the schedule reflects real
/// wear.
pub fn cost_per_effective_ah(
    s: &EquipmentScenario,
    fp: &FinancialParams,
    annual_effective_ah: f64,
    year: u32,
) -> Result<BatteryCostRates> {
    if !annual_effective_ah.is_finite() || annual_effective_ah <= 0.0 {
        return Err(CoreError::invalid(
            "annual_effective_ah",
            format!("must be finite and positive, got {annual_effective_ah}"),
        ));
    }
    let derived = EquipmentScenario {
        annual_usage: annual_effective_ah,
        ..*s
    };
    let lifetime_basis = econ::rate_approach_iiib(&derived, fp, year)?;

    let replacements = econ::replacement_count(&derived);
    let dep = econ::depreciation_cost(
        econ::purchase_cost_with_replacements(&derived, replacements),
        derived.salvage_value,
    )?;
    let value = dep / (annual_effective_ah * f64::from(replacements + 1))
        * (1.0 + fp.real_rate()).powi(year as i32);
    let annual_sum_basis = CostRate {
        value,
        approach: lifetime_basis.approach,
        year: Some(year),
    };

    Ok(BatteryCostRates {
        lifetime_basis,
        annual_sum_basis,
    })
}
