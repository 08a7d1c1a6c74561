use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

/// Edge-perspective degree profile of an LDPC ensemble: `lambda[i]` is the
/// fraction of edges attached to degree-`i` variable nodes, `rho[j]` the same
/// for degree-`j` check nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeProfile {
    lambda: BTreeMap<u32, f64>,
    rho: BTreeMap<u32, f64>,
}

impl DegreeProfile {
    /// Validates fractions, normalisation, degree ranges and a design rate in
    /// `[0, 1)`. Rate 0 is admitted so that degenerate ensembles can be
    /// represented (they have no finite threshold).
    pub fn new(lambda: BTreeMap<u32, f64>, rho: BTreeMap<u32, f64>) -> Result<Self> {
        check_side("lambda", &lambda, 1)?;
        check_side("rho", &rho, 2)?;
        let p = DegreeProfile { lambda, rho };
        let r = p.design_rate();
        if !(r > -SUM_TOLERANCE && r < 1.0) {
            return Err(Error::InvalidCode(format!(
                "design rate {r:.6} outside [0, 1)"
            )));
        }
        Ok(p)
    }

    /// Regular `(dv, dc)` ensemble.
    pub fn regular(dv: u32, dc: u32) -> Result<Self> {
        DegreeProfile::new(BTreeMap::from([(dv, 1.0)]), BTreeMap::from([(dc, 1.0)]))
    }

    pub fn from_pairs(lambda: &[(u32, f64)], rho: &[(u32, f64)]) -> Result<Self> {
        DegreeProfile::new(
            lambda.iter().copied().collect(),
            rho.iter().copied().collect(),
        )
    }

    pub fn lambda(&self) -> &BTreeMap<u32, f64> {
        &self.lambda
    }

    pub fn rho(&self) -> &BTreeMap<u32, f64> {
        &self.rho
    }

    /// `Σ λᵢ/i`: variable nodes per edge.
    pub fn lambda_integral(&self) -> f64 {
        self.lambda.iter().map(|(&i, &f)| f / i as f64).sum()
    }

    /// `Σ ρⱼ/j`: check nodes per edge.
    pub fn rho_integral(&self) -> f64 {
        self.rho.iter().map(|(&j, &f)| f / j as f64).sum()
    }

    /// `1 − (Σ ρⱼ/j)/(Σ λᵢ/i)`.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.rho_integral() / self.lambda_integral()
    }

    /// Check degree `d` closest to restoring `target` rate with this
    /// variable side and a concentrated check side.
    pub fn concentrated_check_degree(lambda: &BTreeMap<u32, f64>, target: f64) -> u32 {
        let li: f64 = lambda.iter().map(|(&i, &f)| f / i as f64).sum();
        (1.0 / ((1.0 - target) * li)).round().max(2.0) as u32
    }
}

fn check_side(name: &str, side: &BTreeMap<u32, f64>, min_degree: u32) -> Result<()> {
    if side.is_empty() {
        return Err(Error::InvalidCode(format!("{name} is empty")));
    }
    for (&d, &f) in side {
        if d < min_degree {
            return Err(Error::InvalidCode(format!(
                "{name} degree {d} below minimum {min_degree}"
            )));
        }
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::InvalidCode(format!(
                "{name}[{d}] = {f} is not a fraction"
            )));
        }
    }
    let sum: f64 = side.values().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidCode(format!(
            "{name} fractions sum to {sum}, expected 1"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_rate() {
        let p = DegreeProfile::regular(3, 6).unwrap();
        assert!((p.design_rate() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn printed_check_side_is_inconsistent_and_eight_restores_half_rate() {
        let lambda = BTreeMap::from([(2, 0.254), (4, 0.419), (18, 0.327)]);
        let li: f64 = lambda.iter().map(|(&i, &f)| f / i as f64).sum();
        // With every check of degree 3 the rate would be 1 − (1/3)/li < 0.
        assert!(1.0 - (1.0 / 3.0) / li < 0.0);
        assert!(DegreeProfile::new(lambda.clone(), BTreeMap::from([(3, 1.0)])).is_err());
        let dc = DegreeProfile::concentrated_check_degree(&lambda, 0.5);
        assert_eq!(dc, 8);
        let p = DegreeProfile::new(lambda, BTreeMap::from([(dc, 1.0)])).unwrap();
        assert!((p.design_rate() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn validation() {
        assert!(DegreeProfile::from_pairs(&[(3, 0.5)], &[(6, 1.0)]).is_err());
        assert!(DegreeProfile::from_pairs(&[(3, 1.0)], &[(1, 1.0)]).is_err());
        assert!(DegreeProfile::from_pairs(&[(0, 1.0)], &[(6, 1.0)]).is_err());
        assert!(DegreeProfile::from_pairs(&[(3, 1.2), (4, -0.2)], &[(6, 1.0)]).is_err());
        assert!(DegreeProfile::from_pairs(&[], &[(6, 1.0)]).is_err());
        // rate > 0 required to be below 1; rate exactly 0 is admitted
        let cycle = DegreeProfile::regular(2, 2).unwrap();
        assert!(cycle.design_rate().abs() < 1e-15);
        assert!(DegreeProfile::regular(3, 2).is_err());
    }
}
