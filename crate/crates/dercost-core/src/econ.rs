//! Depreciation, capital recovery, and the four ownership-cost approaches.
//!
//! Rates are money per usage unit: hours for rotating equipment, amp-hours
//! for batteries. Approach I annuitizes one equipment life and is the base
//! case the others are judged against. Approach II divides the depreciable
//! value evenly over the life with no interest. Approach III.A annuitizes
//! the whole project including replacement purchases. Approach III.B spreads
//! the same project-wide depreciable value per usage unit and escalates it
//! year over year at the real interest rate.

use std::fmt;
use std::str::FromStr;

use crate::{CoreError, Result};

/// Relative tolerance for "this float should be an integer" decisions, so
/// duty cycles that divide evenly are not bumped by representation noise.
const INTEGER_EPS: f64 = 1e-9;

/// Interest and inflation context for a project.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinancialParams {
    nominal_interest: f64,
    inflation: f64,
}

impl FinancialParams {
    /// Validates and builds. Nominal interest must be non-negative and
    /// finite; inflation must be finite and above -100%.
    pub fn new(nominal_interest: f64, inflation: f64) -> Result<Self> {
        if !nominal_interest.is_finite() || nominal_interest < 0.0 {
            return Err(CoreError::invalid(
                "nominal_interest",
                format!("must be finite and non-negative, got {nominal_interest}"),
            ));
        }
        if !inflation.is_finite() || inflation <= -1.0 {
            return Err(CoreError::invalid(
                "inflation",
                format!("must be finite and above -1, got {inflation}"),
            ));
        }
        Ok(FinancialParams {
            nominal_interest,
            inflation,
        })
    }

    pub fn nominal_interest(&self) -> f64 {
        self.nominal_interest
    }

    pub fn inflation(&self) -> f64 {
        self.inflation
    }

    /// Inflation-adjusted (real) interest rate. Negative when inflation
    /// outruns nominal interest; downstream math accepts that.
    pub fn real_rate(&self) -> f64 {
        (self.nominal_interest - self.inflation) / (1.0 + self.inflation)
    }
}

/// Purchase and duty-cycle description of one piece of equipment.
///
/// `economic_life` and `annual_usage` share a unit (hours and hours per
/// year, or amp-hours and amp-hours per year); every rate produced from the
/// scenario is money per that unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquipmentScenario {
    /// Purchase price at commissioning, installation included.
    pub capital_cost: f64,
    /// Resale value at the end of the economic life.
    pub salvage_value: f64,
    /// Price of one replacement unit. `None` applies the 70%-of-capital
    /// default (repeat installs skip wiring and housing work).
    pub replacement_cost: Option<f64>,
    /// Usage units one unit survives.
    pub economic_life: f64,
    /// Usage units consumed per year.
    pub annual_usage: f64,
    /// Project length in years.
    pub project_years: u32,
}

impl EquipmentScenario {
    /// Checks every field against its domain.
    pub fn validate(&self) -> Result<()> {
        if !self.capital_cost.is_finite() || self.capital_cost <= 0.0 {
            return Err(CoreError::invalid(
                "capital_cost",
                format!("must be finite and positive, got {}", self.capital_cost),
            ));
        }
        if !self.salvage_value.is_finite() || self.salvage_value < 0.0 {
            return Err(CoreError::invalid(
                "salvage_value",
                format!("must be finite and non-negative, got {}", self.salvage_value),
            ));
        }
        if self.salvage_value > self.capital_cost {
            return Err(CoreError::invalid(
                "salvage_value",
                format!(
                    "salvage {} exceeds capital cost {}",
                    self.salvage_value, self.capital_cost
                ),
            ));
        }
        if let Some(rep) = self.replacement_cost {
            if !rep.is_finite() || rep < 0.0 {
                return Err(CoreError::invalid(
                    "replacement_cost",
                    format!("must be finite and non-negative, got {rep}"),
                ));
            }
        }
        if !self.economic_life.is_finite() || self.economic_life <= 0.0 {
            return Err(CoreError::invalid(
                "economic_life",
                format!("must be finite and positive, got {}", self.economic_life),
            ));
        }
        if !self.annual_usage.is_finite() || self.annual_usage <= 0.0 {
            return Err(CoreError::invalid(
                "annual_usage",
                format!("must be finite and positive, got {}", self.annual_usage),
            ));
        }
        if self.project_years == 0 {
            return Err(CoreError::invalid("project_years", "must be at least 1"));
        }
        Ok(())
    }

    /// Replacement price, falling back to 70% of the capital cost.
    pub fn effective_replacement_cost(&self) -> f64 {
        self.replacement_cost.unwrap_or(0.7 * self.capital_cost)
    }

    /// Years one unit lasts at the planned duty cycle.
    pub fn life_years(&self) -> f64 {
        self.economic_life / self.annual_usage
    }
}

/// The four ownership-cost accounting approaches.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Approach {
    /// Base case: annuitize one equipment life, no replacements priced.
    I,
    /// Straight-line: depreciable value spread evenly over the life.
    II,
    /// Annuitize the whole project, replacement purchases included.
    IIIA,
    /// Per-unit rate over the project's depreciable value, escalated yearly.
    IIIB,
}

impl Approach {
    /// All approaches in canonical order.
    pub const ALL: [Approach; 4] = [Approach::I, Approach::II, Approach::IIIA, Approach::IIIB];
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Approach::I => "I",
            Approach::II => "II",
            Approach::IIIA => "III.A",
            Approach::IIIB => "III.B",
        };
        f.write_str(s)
    }
}

impl FromStr for Approach {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "I" => Ok(Approach::I),
            "II" => Ok(Approach::II),
            "IIIA" | "III.A" => Ok(Approach::IIIA),
            "IIIB" | "III.B" => Ok(Approach::IIIB),
            other => Err(CoreError::invalid(
                "approach",
                format!("unknown approach `{other}`; expected I, II, IIIA, or IIIB"),
            )),
        }
    }
}

/// A computed ownership-cost rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostRate {
    /// Money per usage unit.
    pub value: f64,
    /// Approach that produced the rate.
    pub approach: Approach,
    /// Escalation year index (zero-based), for the approach that has one.
    pub year: Option<u32>,
}

/// How a non-integral equipment life in years is treated where a whole
/// number of years is conventional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HorizonPolicy {
    /// Require a whole number of years (within rounding noise), error
    /// otherwise.
    #[default]
    WholeYears,
    /// Annuitize over the fractional horizon as given.
    Fractional,
}

/// Real (inflation-adjusted) interest rate from nominal interest and
/// inflation.
pub fn real_interest_rate(nominal_interest: f64, inflation: f64) -> Result<f64> {
    Ok(FinancialParams::new(nominal_interest, inflation)?.real_rate())
}

/// Capital recovery factor: the level annuity payment per unit of present
/// value over `n_years` at rate `i`.
///
/// Evaluated in log space so the factor is continuous down to `i == 0`,
/// where it degenerates to `1 / n_years` exactly.
///
/// ```
/// let crf = dercost_core::econ::capital_recovery_factor(0.05, 10.0).unwrap();
/// assert!((crf - 0.129504).abs() < 1e-6);
/// ```
pub fn capital_recovery_factor(i: f64, n_years: f64) -> Result<f64> {
    if !i.is_finite() || i <= -1.0 {
        return Err(CoreError::invalid(
            "interest_rate",
            format!("must be finite and above -1, got {i}"),
        ));
    }
    if !n_years.is_finite() || n_years < 1.0 {
        return Err(CoreError::invalid(
            "horizon_years",
            format!("must be at least one year, got {n_years}"),
        ));
    }
    if i == 0.0 {
        return Ok(1.0 / n_years);
    }
    // growth = (1+i)^n - 1 without cancellation for small i
    let growth = (n_years * i.ln_1p()).exp_m1();
    Ok(i * (growth + 1.0) / growth)
}

/// Equivalent uniform annual cost: the level annual payment that repays
/// `present_value` with interest over `n_years`.
pub fn euac(present_value: f64, i: f64, n_years: f64) -> Result<f64> {
    Ok(present_value * capital_recovery_factor(i, n_years)?)
}

/// Depreciable value: capital minus salvage.
pub fn depreciation_cost(capital: f64, salvage: f64) -> Result<f64> {
    if !capital.is_finite() || capital <= 0.0 {
        return Err(CoreError::invalid(
            "capital_cost",
            format!("must be finite and positive, got {capital}"),
        ));
    }
    if !salvage.is_finite() || salvage < 0.0 {
        return Err(CoreError::invalid(
            "salvage_value",
            format!("must be finite and non-negative, got {salvage}"),
        ));
    }
    if salvage > capital {
        return Err(CoreError::invalid(
            "salvage_value",
            format!("salvage {salvage} exceeds capital cost {capital}"),
        ));
    }
    Ok(capital - salvage)
}

/// Replacements needed so that installed units cover the whole project.
///
/// A unit retiring exactly at project end is not replaced; the comparison
/// carries a small relative tolerance so exact multiples survive float
/// rounding.
pub fn replacement_count(s: &EquipmentScenario) -> u32 {
    replacements_for(s.project_years, s.annual_usage, s.economic_life)
}

/// [`replacement_count`] on raw values.
pub fn replacements_for(project_years: u32, annual_usage: f64, economic_life: f64) -> u32 {
    let units = f64::from(project_years) * annual_usage / economic_life;
    let nearest = units.round();
    let needed = if (units - nearest).abs() <= INTEGER_EPS * units.max(1.0) {
        nearest
    } else {
        units.ceil()
    };
    (needed as u32).saturating_sub(1)
}

/// Total purchase outlay over the project: the first unit at capital price
/// plus `replacements` units at the replacement price.
pub fn purchase_cost_with_replacements(s: &EquipmentScenario, replacements: u32) -> f64 {
    s.capital_cost + f64::from(replacements) * s.effective_replacement_cost()
}

/// Depreciable value of the whole project: all purchases minus one salvage
/// at project end.
fn project_depreciation(s: &EquipmentScenario) -> Result<(f64, u32)> {
    let n_rep = replacement_count(s);
    let dep = depreciation_cost(purchase_cost_with_replacements(s, n_rep), s.salvage_value)?;
    Ok((dep, n_rep))
}

/// Approach I rate: one equipment life annuitized at the real rate, spread
/// over the annual usage.
pub fn rate_approach_i(
    s: &EquipmentScenario,
    fp: &FinancialParams,
    policy: HorizonPolicy,
) -> Result<CostRate> {
    s.validate()?;
    let dep = depreciation_cost(s.capital_cost, s.salvage_value)?;
    let life = s.life_years();
    let horizon = match policy {
        HorizonPolicy::WholeYears => {
            let nearest = life.round();
            if nearest >= 1.0 && (life - nearest).abs() <= INTEGER_EPS * life.max(1.0) {
                nearest
            } else {
                return Err(CoreError::NonIntegerHorizon { horizon: life });
            }
        }
        HorizonPolicy::Fractional => life,
    };
    let annual = euac(dep, fp.real_rate(), horizon)?;
    Ok(CostRate {
        value: annual / s.annual_usage,
        approach: Approach::I,
        year: None,
    })
}

/// Approach II rate: depreciable value divided evenly over the economic
/// life, no interest.
pub fn rate_approach_ii(s: &EquipmentScenario) -> Result<CostRate> {
    s.validate()?;
    let dep = depreciation_cost(s.capital_cost, s.salvage_value)?;
    Ok(CostRate {
        value: dep / s.economic_life,
        approach: Approach::II,
        year: None,
    })
}

/// Approach III.A rate: the project's depreciable value (replacements
/// included) annuitized over the project length, spread over annual usage.
pub fn rate_approach_iiia(s: &EquipmentScenario, fp: &FinancialParams) -> Result<CostRate> {
    s.validate()?;
    let (dep, _) = project_depreciation(s)?;
    let annual = euac(dep, fp.real_rate(), f64::from(s.project_years))?;
    Ok(CostRate {
        value: annual / s.annual_usage,
        approach: Approach::IIIA,
        year: None,
    })
}

/// Approach III.B rate for project year `year` (zero-based): the project's
/// depreciable value per usage unit across all installed units, escalated
/// by the real rate compounded to that year.
pub fn rate_approach_iiib(s: &EquipmentScenario, fp: &FinancialParams, year: u32) -> Result<CostRate> {
    s.validate()?;
    if year >= s.project_years {
        return Err(CoreError::YearOutOfRange {
            year,
            project_years: s.project_years,
        });
    }
    let (dep, n_rep) = project_depreciation(s)?;
    let level = dep / (s.economic_life * f64::from(n_rep + 1));
    let value = level * (1.0 + fp.real_rate()).powi(year as i32);
    Ok(CostRate {
        value,
        approach: Approach::IIIB,
        year: Some(year),
    })
}
