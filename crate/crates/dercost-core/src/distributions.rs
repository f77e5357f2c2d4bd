//! Discrete probability distributions over equipment-parameter outcomes.
//!
//! Outcome grids are small (a dozen points at most), so hypergeometric
//! masses are computed from exact big-integer binomials and renormalized in
//! rational arithmetic before the single rounding to `f64`; results are
//! identical across platforms. The minimum extreme-value (Gumbel) density is
//! transcendental and is evaluated in plain `f64`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::{CoreError, Result};

/// Tolerance on the probability sum of a finished distribution.
const PROB_SUM_EPS: f64 = 1e-12;

/// A discrete distribution over strictly increasing outcome values.
///
/// Holds between 1 and [`Self::MAX_OUTCOMES`] outcomes; probabilities are
/// positive and sum to one within 1e-12. A single-outcome (degenerate)
/// distribution is allowed so deterministic parameters can flow through the
/// risk analysis unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    /// (value, probability), values strictly increasing.
    outcomes: Vec<(f64, f64)>,
}

impl DiscreteDistribution {
    /// Most outcomes a distribution may carry. Expert-elicited grids run two
    /// to five points; the cap just bounds pathological inputs.
    pub const MAX_OUTCOMES: usize = 12;

    /// Validates and builds from (value, probability) pairs.
    pub fn new(outcomes: Vec<(f64, f64)>) -> Result<Self> {
        if outcomes.is_empty() || outcomes.len() > Self::MAX_OUTCOMES {
            return Err(CoreError::invalid(
                "outcomes",
                format!(
                    "need between 1 and {} outcomes, got {}",
                    Self::MAX_OUTCOMES,
                    outcomes.len()
                ),
            ));
        }
        let mut sum = 0.0;
        for (idx, &(value, prob)) in outcomes.iter().enumerate() {
            if !value.is_finite() {
                return Err(CoreError::invalid(
                    "outcomes",
                    format!("value at position {idx} is not finite"),
                ));
            }
            if !prob.is_finite() || prob <= 0.0 || prob > 1.0 {
                return Err(CoreError::invalid(
                    "outcomes",
                    format!("probability {prob} at position {idx} is outside (0, 1]"),
                ));
            }
            if idx > 0 && outcomes[idx - 1].0 >= value {
                return Err(CoreError::invalid(
                    "outcomes",
                    format!("values must be strictly increasing, broken at position {idx}"),
                ));
            }
            sum += prob;
        }
        if (sum - 1.0).abs() > PROB_SUM_EPS {
            return Err(CoreError::invalid(
                "outcomes",
                format!("probabilities sum to {sum}, not 1"),
            ));
        }
        Ok(DiscreteDistribution { outcomes })
    }

    /// Outcomes as (value, probability), values ascending.
    pub fn outcomes(&self) -> &[(f64, f64)] {
        &self.outcomes
    }

    /// Number of outcomes.
    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    /// The most probable outcome; on a probability tie, the smallest value.
    pub fn mode(&self) -> (f64, f64) {
        let mut best = self.outcomes[0];
        for &pair in &self.outcomes[1..] {
            if pair.1 > best.1 {
                best = pair;
            }
        }
        best
    }

    /// Probability-weighted mean outcome.
    pub fn mean(&self) -> f64 {
        self.outcomes.iter().map(|(v, p)| v * p).sum()
    }
}

/// Inputs for a hypergeometric outcome grid: draw `sample` items without
/// replacement from `population` of which `trait_count` carry a trait, and
/// keep the trait counts `k_min..=k_max`, attaching `values[i]` to
/// `k_min + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricParams {
    pub population: u64,
    pub trait_count: u64,
    pub sample: u64,
    pub k_min: u64,
    pub k_max: u64,
    /// Outcome value per kept trait count, lowest count first.
    pub values: Vec<f64>,
}

impl HypergeometricParams {
    pub fn validate(&self) -> Result<()> {
        if self.trait_count > self.population {
            return Err(CoreError::invalid(
                "trait_count",
                format!("{} exceeds population {}", self.trait_count, self.population),
            ));
        }
        if self.sample > self.population {
            return Err(CoreError::invalid(
                "sample",
                format!("{} exceeds population {}", self.sample, self.population),
            ));
        }
        if self.k_min > self.k_max {
            return Err(CoreError::invalid(
                "k_min",
                format!("k_min {} exceeds k_max {}", self.k_min, self.k_max),
            ));
        }
        let span = (self.k_max - self.k_min + 1) as usize;
        if self.values.len() != span {
            return Err(CoreError::DimensionMismatch(format!(
                "{} values for {} kept trait counts",
                self.values.len(),
                span
            )));
        }
        Ok(())
    }
}

/// Inputs for a minimum extreme-value (Gumbel) outcome grid: the density is
/// evaluated at each index and the matching value carries that weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeValueParams {
    /// Location parameter of the density.
    pub location: f64,
    /// Scale parameter, positive.
    pub scale: f64,
    /// Points where the density is evaluated.
    pub indices: Vec<f64>,
    /// Outcome value per index, same length.
    pub values: Vec<f64>,
}

impl ExtremeValueParams {
    pub fn validate(&self) -> Result<()> {
        if !self.location.is_finite() {
            return Err(CoreError::invalid("location", "must be finite"));
        }
        if !self.scale.is_finite() || self.scale <= 0.0 {
            return Err(CoreError::invalid(
                "scale",
                format!("must be finite and positive, got {}", self.scale),
            ));
        }
        if self.indices.len() != self.values.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "{} indices against {} values",
                self.indices.len(),
                self.values.len()
            )));
        }
        if self.indices.is_empty() {
            return Err(CoreError::invalid("indices", "must not be empty"));
        }
        Ok(())
    }
}

/// Source description for [`build_distribution`].
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Hypergeometric(HypergeometricParams),
    ExtremeValue(ExtremeValueParams),
    /// Explicit (value, weight) pairs; weights are renormalized like the
    /// generated families, so they need not sum to one.
    Explicit(Vec<(f64, f64)>),
}

/// Exact binomial coefficient.
fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::from(1u32);
    // multiply/divide stepwise; each division is exact
    for step in 1..=k {
        result = result * BigUint::from(n - k + step) / BigUint::from(step);
    }
    result
}

/// Exact hypergeometric mass P[X = k] as a ratio of big integers.
pub fn hypergeometric_pmf_exact(
    population: u64,
    trait_count: u64,
    sample: u64,
    k: u64,
) -> Result<BigRational> {
    if trait_count > population {
        return Err(CoreError::invalid(
            "trait_count",
            format!("{trait_count} exceeds population {population}"),
        ));
    }
    if sample > population {
        return Err(CoreError::invalid(
            "sample",
            format!("{sample} exceeds population {population}"),
        ));
    }
    if k > sample || k > trait_count || sample - k > population - trait_count {
        return Ok(BigRational::zero());
    }
    let ways = binomial(trait_count, k) * binomial(population - trait_count, sample - k);
    let total = binomial(population, sample);
    Ok(BigRational::new(BigInt::from(ways), BigInt::from(total)))
}

/// Hypergeometric mass rounded to `f64`.
pub fn hypergeometric_pmf(population: u64, trait_count: u64, sample: u64, k: u64) -> Result<f64> {
    Ok(hypergeometric_pmf_exact(population, trait_count, sample, k)?
        .to_f64()
        .unwrap_or(0.0))
}

/// Density of the minimum extreme-value (Gumbel) distribution.
///
/// Underflows cleanly to zero far into either tail.
pub fn extreme_value_density(x: f64, location: f64, scale: f64) -> Result<f64> {
    if !scale.is_finite() || scale <= 0.0 {
        return Err(CoreError::invalid(
            "scale",
            format!("must be finite and positive, got {scale}"),
        ));
    }
    if !x.is_finite() || !location.is_finite() {
        return Err(CoreError::invalid("location", "inputs must be finite"));
    }
    let z = (x - location) / scale;
    // exp(z - e^z) / scale; the exponent -> -inf in both tails, so the
    // expression underflows to 0 instead of producing inf * 0
    Ok((z - z.exp()).exp() / scale)
}

/// Evaluates a spec's weights on its grid, attaches outcome values, drops
/// zero-weight points, and renormalizes the rest to sum to one.
///
/// Hypergeometric renormalization happens in exact rational arithmetic; the
/// division by the kept mass is the only rounding step.
pub fn build_distribution(spec: &DistributionSpec) -> Result<DiscreteDistribution> {
    match spec {
        DistributionSpec::Hypergeometric(p) => {
            p.validate()?;
            let exact: Vec<BigRational> = (p.k_min..=p.k_max)
                .map(|k| hypergeometric_pmf_exact(p.population, p.trait_count, p.sample, k))
                .collect::<Result<_>>()?;
            let kept_mass: BigRational = exact.iter().sum();
            if kept_mass.is_zero() {
                return Err(CoreError::invalid(
                    "k_min",
                    "kept trait-count range carries zero probability",
                ));
            }
            let outcomes = p
                .values
                .iter()
                .zip(&exact)
                .filter(|(_, mass)| !mass.is_zero())
                .map(|(&value, mass)| {
                    let prob = (mass / &kept_mass).to_f64().unwrap_or(0.0);
                    (value, prob)
                })
                .collect();
            DiscreteDistribution::new(outcomes)
        }
        DistributionSpec::ExtremeValue(p) => {
            p.validate()?;
            let weights: Vec<f64> = p
                .indices
                .iter()
                .map(|&x| extreme_value_density(x, p.location, p.scale))
                .collect::<Result<_>>()?;
            renormalized(p.values.iter().copied().zip(weights))
        }
        DistributionSpec::Explicit(pairs) => renormalized(pairs.iter().copied()),
    }
}

/// Drops zero weights, renormalizes, sorts by value through the
/// constructor's strictly-increasing requirement.
fn renormalized(pairs: impl Iterator<Item = (f64, f64)>) -> Result<DiscreteDistribution> {
    let mut kept: Vec<(f64, f64)> = Vec::new();
    for (value, weight) in pairs {
        if !weight.is_finite() || weight < 0.0 {
            return Err(CoreError::invalid(
                "outcomes",
                format!("weight {weight} for value {value} is negative or not finite"),
            ));
        }
        if weight > 0.0 {
            kept.push((value, weight));
        }
    }
    let total: f64 = kept.iter().map(|(_, w)| w).sum();
    if !(total > 0.0) {
        return Err(CoreError::invalid("outcomes", "all weights are zero"));
    }
    kept.sort_by(|a, b| a.0.total_cmp(&b.0));
    DiscreteDistribution::new(kept.into_iter().map(|(v, w)| (v, w / total)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_traits::One;

    // lifetime grid: trait counts 0..=5 out of a (70, 14, 10) draw mapped
    // onto 15000..=20000 hours
    fn lifetime_params() -> HypergeometricParams {
        HypergeometricParams {
            population: 70,
            trait_count: 14,
            sample: 10,
            k_min: 0,
            k_max: 5,
            values: vec![15000.0, 16000.0, 17000.0, 18000.0, 19000.0, 20000.0],
        }
    }

    // usage grid: minimum-Gumbel density at indices 5..1 mapped onto
    // 7300..8100 hours, long tail on the large-hours side
    fn usage_params() -> ExtremeValueParams {
        ExtremeValueParams {
            location: 3.0,
            scale: 1.5,
            indices: vec![5.0, 4.0, 3.0, 2.0, 1.0],
            values: vec![7300.0, 7500.0, 7700.0, 7900.0, 8100.0],
        }
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(70, 10).to_string(), "396704524216");
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(8, 0), BigUint::one());
    }

    #[test]
    fn hypergeometric_masses_reference_values() {
        let expect = [
            0.089757109653260381,
            0.26736160322247773,
            0.32584695392739473,
            0.21279801072809452,
            0.08192723413031639,
            0.019276996265956798,
        ];
        for (k, want) in expect.iter().enumerate() {
            let p = hypergeometric_pmf(70, 14, 10, k as u64).unwrap();
            assert_relative_eq!(p, *want, max_relative = 1e-14);
        }
    }

    #[test]
    fn hypergeometric_full_support_sums_to_one_exactly() {
        let total: BigRational = (0..=10)
            .map(|k| hypergeometric_pmf_exact(70, 14, 10, k).unwrap())
            .sum();
        assert!(total.is_one());
    }

    #[test]
    fn hypergeometric_zero_outside_support() {
        assert_eq!(hypergeometric_pmf(70, 14, 10, 11).unwrap(), 0.0);
        assert_eq!(hypergeometric_pmf(70, 14, 10, 15).unwrap(), 0.0);
        // sample - k cannot exceed the non-trait pool
        assert_eq!(hypergeometric_pmf(12, 10, 5, 1).unwrap(), 0.0);
    }

    #[test]
    fn hypergeometric_rejects_bad_parameters() {
        assert!(hypergeometric_pmf(10, 12, 5, 1).is_err());
        assert!(hypergeometric_pmf(10, 5, 12, 1).is_err());
    }

    #[test]
    fn lifetime_distribution_reference_probabilities() {
        let dist =
            build_distribution(&DistributionSpec::Hypergeometric(lifetime_params())).unwrap();
        let expect = [
            (15000.0, 0.090030089172928034),
            (16000.0, 0.26817473370659414),
            (17000.0, 0.32683795670491161),
            (18000.0, 0.21344519621545248),
            (19000.0, 0.082176400542949206),
            (20000.0, 0.019335623657164519),
        ];
        assert_eq!(dist.outcome_count(), 6);
        for ((v, p), (ev, ep)) in dist.outcomes().iter().zip(expect) {
            assert_eq!(*v, ev);
            assert_relative_eq!(*p, ep, max_relative = 1e-13);
        }
        assert_eq!(dist.mode().0, 17000.0);
    }

    #[test]
    fn extreme_value_density_reference_values() {
        let d = extreme_value_density(3.0, 3.0, 1.5).unwrap();
        assert_relative_eq!(d, 0.24525296078096155, max_relative = 1e-14);
        let d1 = extreme_value_density(1.0, 3.0, 1.5).unwrap();
        assert_relative_eq!(d1, 0.13501146481997024, max_relative = 1e-14);
    }

    #[test]
    fn extreme_value_density_underflows_in_both_tails() {
        assert_eq!(extreme_value_density(1e6, 3.0, 1.5).unwrap(), 0.0);
        assert_eq!(extreme_value_density(-1e6, 3.0, 1.5).unwrap(), 0.0);
        assert!(extreme_value_density(3.0, 3.0, 0.0).is_err());
    }

    #[test]
    fn usage_distribution_reference_probabilities() {
        let dist = build_distribution(&DistributionSpec::ExtremeValue(usage_params())).unwrap();
        let expect = [
            (7300.0, 0.068831882720426438),
            (7500.0, 0.22384061002662387),
            (7700.0, 0.29648647757890173),
            (7900.0, 0.24762557445680699),
            (8100.0, 0.16321545521724097),
        ];
        for ((v, p), (ev, ep)) in dist.outcomes().iter().zip(expect) {
            assert_eq!(*v, ev);
            assert_relative_eq!(*p, ep, max_relative = 1e-13);
        }
        assert_eq!(dist.mode().0, 7700.0);
    }

    #[test]
    fn usage_distribution_skews_toward_large_hours() {
        let dist = build_distribution(&DistributionSpec::ExtremeValue(usage_params())).unwrap();
        let median = dist.mode().0;
        let above: f64 = dist
            .outcomes()
            .iter()
            .filter(|(v, _)| *v > median)
            .map(|(_, p)| p)
            .sum();
        let below: f64 = dist
            .outcomes()
            .iter()
            .filter(|(v, _)| *v < median)
            .map(|(_, p)| p)
            .sum();
        assert!(above > below, "mass above {above} not above mass below {below}");
    }

    #[test]
    fn explicit_weights_are_renormalized_and_sorted() {
        let dist = build_distribution(&DistributionSpec::Explicit(vec![
            (5.0, 3.0),
            (1.0, 1.0),
            (3.0, 0.0),
        ]))
        .unwrap();
        assert_eq!(dist.outcomes(), &[(1.0, 0.25), (5.0, 0.75)]);
    }

    #[test]
    fn degenerate_single_point_is_allowed() {
        let dist = build_distribution(&DistributionSpec::Explicit(vec![(42.0, 2.0)])).unwrap();
        assert_eq!(dist.outcomes(), &[(42.0, 1.0)]);
    }

    #[test]
    fn constructor_rejects_malformed_inputs() {
        assert!(DiscreteDistribution::new(vec![]).is_err());
        assert!(DiscreteDistribution::new(vec![(1.0, 0.5), (1.0, 0.5)]).is_err());
        assert!(DiscreteDistribution::new(vec![(1.0, 0.7), (2.0, 0.7)]).is_err());
        assert!(DiscreteDistribution::new(vec![(1.0, -0.2), (2.0, 1.2)]).is_err());
        let thirteen: Vec<(f64, f64)> = (0..13).map(|i| (i as f64, 1.0 / 13.0)).collect();
        assert!(DiscreteDistribution::new(thirteen).is_err());
    }

    #[test]
    fn duplicate_explicit_values_are_rejected() {
        let err = build_distribution(&DistributionSpec::Explicit(vec![(2.0, 0.5), (2.0, 0.5)]))
            .unwrap_err();
        assert!(matches!(err, CoreError::Invalid { .. }));
    }
}
