//! Shared fixtures for the benchmark suite: the bundled generator scenario
//! and its 6x5 uncertainty grids.

#![forbid(unsafe_code)]

use dercost_core::distributions::{
    build_distribution, DistributionSpec, ExtremeValueParams, HypergeometricParams,
};
use dercost_core::{DiscreteDistribution, EquipmentScenario, FinancialParams};

pub fn scenario() -> EquipmentScenario {
    EquipmentScenario {
        capital_cost: 6750.0,
        salvage_value: 0.0,
        replacement_cost: Some(4725.0),
        economic_life: 20000.0,
        annual_usage: 5000.0,
        project_years: 20,
    }
}

pub fn financial() -> FinancialParams {
    FinancialParams::new(0.035, 0.015).expect("fixture rates are valid")
}

pub fn grids() -> (DiscreteDistribution, DiscreteDistribution) {
    let lifetime = build_distribution(&DistributionSpec::Hypergeometric(HypergeometricParams {
        population: 70,
        trait_count: 14,
        sample: 10,
        k_min: 0,
        k_max: 5,
        values: vec![15000.0, 16000.0, 17000.0, 18000.0, 19000.0, 20000.0],
    }))
    .expect("lifetime fixture builds");
    let usage = build_distribution(&DistributionSpec::ExtremeValue(ExtremeValueParams {
        location: 3.0,
        scale: 1.5,
        indices: vec![5.0, 4.0, 3.0, 2.0, 1.0],
        values: vec![7300.0, 7500.0, 7700.0, 7900.0, 8100.0],
    }))
    .expect("usage fixture builds");
    (lifetime, usage)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        assert!(scenario().validate().is_ok());
        let (lifetime, usage) = grids();
        assert_eq!(lifetime.outcome_count(), 6);
        assert_eq!(usage.outcome_count(), 5);
    }
}
