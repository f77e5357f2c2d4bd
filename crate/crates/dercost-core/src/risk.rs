//! Uncertainty propagation: cost surfaces over (lifetime, usage) outcome
//! grids, expected cost and risk (standard deviation), and risk-based
//! ranking under a total-payment accuracy gate.

use crate::distributions::DiscreteDistribution;
use crate::econ::{self, Approach, EquipmentScenario, FinancialParams, HorizonPolicy};
use crate::{CoreError, Result};

/// A cost rate evaluated at every (lifetime, usage) outcome pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub approach: Approach,
    /// Lifetime outcomes, one per row.
    pub lifetime_values: Vec<f64>,
    /// Usage outcomes, one per column.
    pub usage_values: Vec<f64>,
    /// Row-major rates: `cells[m][n]` pairs lifetime `m` with usage `n`.
    pub cells: Vec<Vec<f64>>,
}

impl Surface {
    fn check_dims(&self, lifetime: &DiscreteDistribution, usage: &DiscreteDistribution) -> Result<()> {
        if self.cells.len() != lifetime.outcome_count()
            || self.cells.iter().any(|row| row.len() != usage.outcome_count())
        {
            return Err(CoreError::DimensionMismatch(format!(
                "surface is {}x{}, distributions are {}x{}",
                self.cells.len(),
                self.cells.first().map_or(0, Vec::len),
                lifetime.outcome_count(),
                usage.outcome_count()
            )));
        }
        Ok(())
    }
}

/// Rate surface over the outcome grids.
///
/// Each cell re-derives the scenario: the cell's lifetime and usage replace
/// the planned values and the replacement count is recomputed, so
/// neighbouring cells can sit on different replacement schedules. Approach I
/// annuitizes over the cell's own (generally fractional) equipment life in
/// years. `year` picks the escalation year for the approach that has one.
pub fn sensitivity_surface(
    approach: Approach,
    lifetime: &DiscreteDistribution,
    usage: &DiscreteDistribution,
    base: &EquipmentScenario,
    fp: &FinancialParams,
    year: u32,
) -> Result<Surface> {
    base.validate()?;
    let mut cells = Vec::with_capacity(lifetime.outcome_count());
    for &(life, _) in lifetime.outcomes() {
        let mut row = Vec::with_capacity(usage.outcome_count());
        for &(hours, _) in usage.outcomes() {
            let cell = EquipmentScenario {
                economic_life: life,
                annual_usage: hours,
                ..*base
            };
            let rate = match approach {
                Approach::I => econ::rate_approach_i(&cell, fp, HorizonPolicy::Fractional)?,
                Approach::II => econ::rate_approach_ii(&cell)?,
                Approach::IIIA => econ::rate_approach_iiia(&cell, fp)?,
                Approach::IIIB => econ::rate_approach_iiib(&cell, fp, year)?,
            };
            row.push(rate.value);
        }
        cells.push(row);
    }
    Ok(Surface {
        approach,
        lifetime_values: lifetime.outcomes().iter().map(|&(v, _)| v).collect(),
        usage_values: usage.outcomes().iter().map(|&(v, _)| v).collect(),
        cells,
    })
}

/// Compensated (Neumaier) sum; insensitive to magnitude ordering, so
/// expectations come out the same however the grid is traversed.
fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for v in values {
        let t = sum + v;
        compensation += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + compensation
}

/// Probability-weighted mean of the surface under independent lifetime and
/// usage distributions.
pub fn expected_cost(
    surface: &Surface,
    lifetime: &DiscreteDistribution,
    usage: &DiscreteDistribution,
) -> Result<f64> {
    surface.check_dims(lifetime, usage)?;
    Ok(neumaier_sum(weighted_terms(surface, lifetime, usage, |c| c)))
}

/// Standard deviation of the surface under the same weighting. Tiny
/// negative variances from round-off clamp to zero.
pub fn risk_std(
    surface: &Surface,
    lifetime: &DiscreteDistribution,
    usage: &DiscreteDistribution,
) -> Result<f64> {
    surface.check_dims(lifetime, usage)?;
    let mean = neumaier_sum(weighted_terms(surface, lifetime, usage, |c| c));
    let mean_sq = neumaier_sum(weighted_terms(surface, lifetime, usage, |c| c * c));
    Ok((mean_sq - mean * mean).max(0.0).sqrt())
}

fn weighted_terms<'a>(
    surface: &'a Surface,
    lifetime: &'a DiscreteDistribution,
    usage: &'a DiscreteDistribution,
    f: fn(f64) -> f64,
) -> impl Iterator<Item = f64> + 'a {
    lifetime
        .outcomes()
        .iter()
        .zip(&surface.cells)
        .flat_map(move |(&(_, p_life), row)| {
            usage
                .outcomes()
                .iter()
                .zip(row)
                .map(move |(&(_, p_use), &cell)| p_life * p_use * f(cell))
        })
}

/// Risk summary for one approach.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskReport {
    pub approach: Approach,
    /// Probability-weighted mean rate over the outcome grid.
    pub expected_cost: f64,
    /// Standard deviation of the rate over the outcome grid.
    pub risk: f64,
    /// Signed total-payment error against the base case at the planning
    /// horizon; the accuracy gate tests its magnitude.
    pub gate_error: f64,
    /// Whether the magnitude of `gate_error` was within the gate when the
    /// report was built.
    pub gate_passed: bool,
    /// The surface behind the numbers.
    pub sensitivity: Surface,
}

/// Ranking outcome across approaches.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    /// Approaches that pass the gate, lowest risk first.
    pub order: Vec<Approach>,
    /// True when nothing passed and the base case was kept by itself.
    pub fell_back_to_base: bool,
}

/// Orders gate-passing approaches by ascending risk, breaking ties on
/// expected cost and then on approach id. An empty survivor set falls back
/// to the base case alone so callers always get a usable answer; they
/// should surface that as a warning.
pub fn rank_approaches(reports: &[RiskReport], gate_tolerance: f64) -> Result<Ranking> {
    if !gate_tolerance.is_finite() || gate_tolerance < 0.0 {
        return Err(CoreError::invalid(
            "gate_tolerance",
            format!("must be finite and non-negative, got {gate_tolerance}"),
        ));
    }
    let mut survivors: Vec<&RiskReport> = reports
        .iter()
        .filter(|r| r.gate_error.abs() <= gate_tolerance)
        .collect();
    if survivors.is_empty() {
        return Ok(Ranking {
            order: vec![Approach::I],
            fell_back_to_base: true,
        });
    }
    survivors.sort_by(|a, b| {
        a.risk
            .total_cmp(&b.risk)
            .then(a.expected_cost.total_cmp(&b.expected_cost))
            .then(a.approach.cmp(&b.approach))
    });
    Ok(Ranking {
        order: survivors.into_iter().map(|r| r.approach).collect(),
        fell_back_to_base: false,
    })
}
