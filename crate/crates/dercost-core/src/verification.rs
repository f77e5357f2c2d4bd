//! Total-payment verification: year-by-year payment schedules per approach,
//! accumulated either nominally or in present value, and compared against
//! the replacement-chain base case.
//!
//! The base case books the annuity of one equipment life (at the full
//! capital price) every project year; an approach whose accumulated total
//! strays from that by more than the accuracy gate is rejected for planning
//! use.

use std::fmt;

use crate::econ::{self, Approach, EquipmentScenario, FinancialParams};
use crate::{CoreError, Result};

/// How annual payments accumulate into a project total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AccumulationMode {
    /// Plain sum of the annual payments.
    #[default]
    Nominal,
    /// Payments discounted to commissioning at the real rate; the year-`j`
    /// payment is treated as falling at the end of that year, so it carries
    /// a factor of `(1+i)^-(j+1)`.
    PresentValue,
}

impl fmt::Display for AccumulationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccumulationMode::Nominal => "nominal",
            AccumulationMode::PresentValue => "pv",
        })
    }
}

/// Year-by-year payments for one approach over a project.
#[derive(Debug, Clone, PartialEq)]
pub struct PaymentSchedule {
    pub approach: Approach,
    pub project_years: u32,
    pub mode: AccumulationMode,
    /// Payment booked in each project year, year 0 first, undiscounted.
    pub annual_payments: Vec<f64>,
    /// Accumulated total per `mode`.
    pub total: f64,
    /// True when the last equipment life runs past project end, so its
    /// annuity is only partially collected inside the project window.
    pub prorated: bool,
}

/// Payment schedule of `approach` over `project_years`.
///
/// Rates that depend on the project length (replacement counting,
/// project-wide annuities, escalation span) are evaluated at
/// `project_years`, not at the scenario's own planning horizon, so one
/// scenario can be swept across horizons.
pub fn payment_schedule(
    approach: Approach,
    s: &EquipmentScenario,
    fp: &FinancialParams,
    project_years: u32,
    mode: AccumulationMode,
) -> Result<PaymentSchedule> {
    s.validate()?;
    if project_years == 0 {
        return Err(CoreError::invalid("project_years", "must be at least 1"));
    }
    let horizon = EquipmentScenario {
        project_years,
        ..*s
    };
    let i = fp.real_rate();
    let years = project_years as usize;
    let mut prorated = false;

    let annual_payments: Vec<f64> = match approach {
        Approach::I => {
            // replacement chain: every year pays the annuity of one life at
            // the full capital price; a life that outruns the project pays
            // only for the years inside it
            let dep = econ::depreciation_cost(s.capital_cost, s.salvage_value)?;
            let cycle = s.life_years();
            let annual = econ::euac(dep, i, cycle)?;
            let cycles = f64::from(project_years) / cycle;
            prorated = (cycles - cycles.round()).abs() > 1e-9 * cycles.max(1.0);
            vec![annual; years]
        }
        Approach::II => {
            let rate = econ::rate_approach_ii(s)?;
            vec![rate.value * s.annual_usage; years]
        }
        Approach::IIIA => {
            let rate = econ::rate_approach_iiia(&horizon, fp)?;
            vec![rate.value * s.annual_usage; years]
        }
        Approach::IIIB => (0..project_years)
            .map(|j| econ::rate_approach_iiib(&horizon, fp, j).map(|r| r.value * s.annual_usage))
            .collect::<Result<_>>()?,
    };

    let total = match mode {
        AccumulationMode::Nominal => annual_payments.iter().sum(),
        AccumulationMode::PresentValue => annual_payments
            .iter()
            .enumerate()
            .map(|(j, p)| p / (1.0 + i).powi(j as i32 + 1))
            .sum(),
    };

    Ok(PaymentSchedule {
        approach,
        project_years,
        mode,
        annual_payments,
        total,
        prorated,
    })
}

/// Signed relative error of a schedule's total against the base schedule.
pub fn verification_error(schedule: &PaymentSchedule, base: &PaymentSchedule) -> Result<f64> {
    if schedule.project_years != base.project_years || schedule.mode != base.mode {
        return Err(CoreError::DimensionMismatch(format!(
            "comparing {} years/{} against {} years/{}",
            schedule.project_years, schedule.mode, base.project_years, base.mode
        )));
    }
    Ok((schedule.total - base.total) / base.total)
}

/// Signed total-payment error of one approach against the base case at the
/// scenario's own planning horizon.
pub fn gate_error(
    approach: Approach,
    s: &EquipmentScenario,
    fp: &FinancialParams,
    mode: AccumulationMode,
) -> Result<f64> {
    let base = payment_schedule(Approach::I, s, fp, s.project_years, mode)?;
    let schedule = payment_schedule(approach, s, fp, s.project_years, mode)?;
    verification_error(&schedule, &base)
}

/// Project horizons the verification study defaults to.
pub const DEFAULT_HORIZONS: [u32; 5] = [4, 8, 12, 16, 20];

/// One verification table entry.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRow {
    pub project_years: u32,
    pub approach: Approach,
    pub mode: AccumulationMode,
    /// Accumulated payment per the row's mode.
    pub total: f64,
    /// Signed relative error against the base case, same horizon and mode.
    pub error_vs_base: f64,
    /// Carried over from the base chain when its last life is cut short.
    pub prorated: bool,
}

/// Full verification table: every approach at every horizon in both
/// accumulation modes, nominal block first, horizons ascending as given.
pub fn verification_table(
    s: &EquipmentScenario,
    fp: &FinancialParams,
    horizons: &[u32],
) -> Result<Vec<VerificationRow>> {
    if horizons.is_empty() {
        return Err(CoreError::invalid("horizons", "list must not be empty"));
    }
    let mut rows = Vec::with_capacity(horizons.len() * Approach::ALL.len() * 2);
    for mode in [AccumulationMode::Nominal, AccumulationMode::PresentValue] {
        for &years in horizons {
            let base = payment_schedule(Approach::I, s, fp, years, mode)?;
            for approach in Approach::ALL {
                let schedule = payment_schedule(approach, s, fp, years, mode)?;
                let error_vs_base = verification_error(&schedule, &base)?;
                rows.push(VerificationRow {
                    project_years: years,
                    approach,
                    mode,
                    total: schedule.total,
                    error_vs_base,
                    prorated: schedule.prorated,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn genset() -> EquipmentScenario {
        EquipmentScenario {
            capital_cost: 6750.0,
            salvage_value: 0.0,
            replacement_cost: Some(4725.0),
            economic_life: 20000.0,
            annual_usage: 5000.0,
            project_years: 20,
        }
    }

    fn rates() -> FinancialParams {
        FinancialParams::new(0.035, 0.015).unwrap()
    }

    fn nominal(approach: Approach, years: u32) -> PaymentSchedule {
        payment_schedule(approach, &genset(), &rates(), years, AccumulationMode::Nominal).unwrap()
    }

    fn pv(approach: Approach, years: u32) -> PaymentSchedule {
        payment_schedule(
            approach,
            &genset(),
            &rates(),
            years,
            AccumulationMode::PresentValue,
        )
        .unwrap()
    }

    #[test]
    fn base_chain_reference_totals() {
        let expect = [
            (4, 7085.7560908658622),
            (8, 14171.512181731724),
            (12, 21257.268272597587),
            (16, 28343.024363463449),
            (20, 35428.780454329311),
        ];
        for (years, want) in expect {
            let sched = nominal(Approach::I, years);
            assert_relative_eq!(sched.total, want, max_relative = 1e-13);
            assert!(!sched.prorated);
        }
    }

    #[test]
    fn base_chain_present_value_of_one_cycle_returns_capital() {
        // annuitizing 6750 over 4 years and discounting it straight back
        let sched = pv(Approach::I, 4);
        assert_relative_eq!(sched.total, 6750.0, max_relative = 1e-12);
    }

    #[test]
    fn straight_line_error_is_constant_across_horizons_and_modes() {
        for years in DEFAULT_HORIZONS {
            for mode in [AccumulationMode::Nominal, AccumulationMode::PresentValue] {
                let base =
                    payment_schedule(Approach::I, &genset(), &rates(), years, mode).unwrap();
                let ii = payment_schedule(Approach::II, &genset(), &rates(), years, mode).unwrap();
                let err = verification_error(&ii, &base).unwrap();
                assert_relative_eq!(err, -0.047384652612962522, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn annuitized_project_matches_base_over_one_life() {
        // a 4-year project has no replacements, so the project annuity is
        // the same computation as one base cycle
        let base = nominal(Approach::I, 4);
        let iiia = nominal(Approach::IIIA, 4);
        assert_eq!(verification_error(&iiia, &base).unwrap(), 0.0);
    }

    #[test]
    fn twenty_year_reference_totals_and_errors() {
        let base = nominal(Approach::I, 20);
        let iiia = nominal(Approach::IIIA, 20);
        let iiib = nominal(Approach::IIIB, 20);
        assert_relative_eq!(iiia.total, 31283.981332051003, max_relative = 1e-13);
        assert_relative_eq!(iiib.total, 31069.829621478763, max_relative = 1e-13);
        assert_relative_eq!(
            verification_error(&iiia, &base).unwrap(),
            -0.11698960757684854,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            verification_error(&iiib, &base).unwrap(),
            -0.12303417664826492,
            max_relative = 1e-12
        );
    }

    #[test]
    fn escalating_present_value_reference() {
        let base = pv(Approach::I, 4);
        let iiib = pv(Approach::IIIB, 4);
        assert_relative_eq!(iiib.total, 6619.5652173913043, max_relative = 1e-13);
        assert_relative_eq!(
            verification_error(&iiib, &base).unwrap(),
            -0.019323671497584541,
            max_relative = 1e-11
        );
    }

    #[test]
    fn escalating_payments_grow_at_the_real_rate() {
        let sched = nominal(Approach::IIIB, 20);
        let growth = 1.0 + rates().real_rate();
        for pair in sched.annual_payments.windows(2) {
            assert_relative_eq!(pair[1] / pair[0], growth, max_relative = 1e-13);
        }
        assert_relative_eq!(
            sched.annual_payments[0],
            0.2565 * 5000.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn proration_flagged_when_life_does_not_divide_project() {
        let mut s = genset();
        s.economic_life = 15000.0; // 3-year cycle against a 20-year project
        let sched =
            payment_schedule(Approach::I, &s, &rates(), 20, AccumulationMode::Nominal).unwrap();
        assert!(sched.prorated);
        // the chain still books the full annuity every project year
        assert_relative_eq!(
            sched.total,
            sched.annual_payments[0] * 20.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn gate_error_at_planning_horizon() {
        let err = gate_error(
            Approach::II,
            &genset(),
            &rates(),
            AccumulationMode::Nominal,
        )
        .unwrap();
        assert_relative_eq!(err, -0.047384652612962522, max_relative = 1e-12);
        let self_err = gate_error(
            Approach::I,
            &genset(),
            &rates(),
            AccumulationMode::Nominal,
        )
        .unwrap();
        assert_eq!(self_err, 0.0);
    }

    #[test]
    fn table_covers_every_cell_once() {
        let rows = verification_table(&genset(), &rates(), &DEFAULT_HORIZONS).unwrap();
        assert_eq!(rows.len(), 40);
        let nominal_rows = rows
            .iter()
            .filter(|r| r.mode == AccumulationMode::Nominal)
            .count();
        assert_eq!(nominal_rows, 20);
        // base rows carry zero error by construction
        for row in rows.iter().filter(|r| r.approach == Approach::I) {
            assert_eq!(row.error_vs_base, 0.0);
        }
    }

    #[test]
    fn table_rejects_empty_horizons() {
        assert!(verification_table(&genset(), &rates(), &[]).is_err());
    }

    #[test]
    fn mismatched_comparison_is_an_error() {
        let a = nominal(Approach::II, 8);
        let b = nominal(Approach::I, 12);
        assert!(verification_error(&a, &b).is_err());
        let c = pv(Approach::I, 8);
        assert!(verification_error(&a, &c).is_err());
    }
}
