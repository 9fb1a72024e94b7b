//! Distribution comparison.
//!
//! Distributions are aligned on the union of their supports with zero
//! padding. Simulated populations are never renormalized; the missing or
//! excess mass is reported as `norm_deficit`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::oracles::LatticeDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub norm: f64,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub total_variation: f64,
    pub l_inf: f64,
    /// mean(simulated) − mean(reference).
    pub mean_offset: f64,
    pub variance_simulated: f64,
    pub variance_reference: f64,
    /// 1 − Σ simulated.
    pub norm_deficit: f64,
}

fn check(p: &LatticeDistribution) -> Result<()> {
    if p.offsets.len() != p.probabilities.len() {
        return domain("distribution has mismatched offsets and probabilities");
    }
    if let Some(v) = p.probabilities.iter().find(|v| !(**v >= 0.0)) {
        return domain(format!("negative or NaN probability {v}"));
    }
    Ok(())
}

/// Pairs (p_n, q_n) over the sorted union of both supports.
fn aligned<'a>(
    p: &'a LatticeDistribution,
    q: &'a LatticeDistribution,
) -> impl Iterator<Item = (f64, f64)> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        let a = p.offsets.get(i).copied();
        let b = q.offsets.get(j).copied();
        match (a, b) {
            (None, None) => None,
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
                Some((p.probabilities[i - 1], q.probabilities[j - 1]))
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                Some((p.probabilities[i - 1], 0.0))
            }
            (Some(_), None) => {
                i += 1;
                Some((p.probabilities[i - 1], 0.0))
            }
            _ => {
                j += 1;
                Some((0.0, q.probabilities[j - 1]))
            }
        }
    })
}

/// ½ Σ |p_n − q_n|.
pub fn total_variation(p: &LatticeDistribution, q: &LatticeDistribution) -> Result<f64> {
    check(p)?;
    check(q)?;
    Ok(0.5 * aligned(p, q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

pub fn moments(p: &LatticeDistribution) -> Result<Moments> {
    check(p)?;
    let norm = p.total();
    if norm <= 0.0 {
        return domain("moments of an all-zero distribution");
    }
    let mean = p.iter().map(|(n, v)| n as f64 * v).sum::<f64>() / norm;
    let variance = p
        .iter()
        .map(|(n, v)| {
            let d = n as f64 - mean;
            d * d * v
        })
        .sum::<f64>()
        / norm;
    Ok(Moments {
        norm,
        mean,
        variance,
    })
}

pub fn compare(
    simulated: &LatticeDistribution,
    reference: &LatticeDistribution,
) -> Result<ComparisonReport> {
    let total_variation = total_variation(simulated, reference)?;
    let l_inf = aligned(simulated, reference)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let ms = moments(simulated)?;
    let mr = moments(reference)?;
    Ok(ComparisonReport {
        total_variation,
        l_inf,
        mean_offset: ms.mean - mr.mean,
        variance_simulated: ms.variance,
        variance_reference: mr.variance,
        norm_deficit: 1.0 - ms.norm,
    })
}

/// Ladder populations as a distribution over n = J − origin.
pub fn ladder_distribution(populations: &[f64], origin: usize) -> Result<LatticeDistribution> {
    LatticeDistribution::contiguous(-(origin as i64), populations.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tv_basics() {
        let p = LatticeDistribution::contiguous(0, vec![0.5, 0.5]).unwrap();
        assert_eq!(total_variation(&p, &p).unwrap(), 0.0);
        let d0 = LatticeDistribution::delta(0);
        let d1 = LatticeDistribution::delta(1);
        assert_eq!(total_variation(&d0, &d1).unwrap(), 1.0);
        assert_eq!(total_variation(&p, &d0).unwrap(), 0.5);
    }

    #[test]
    fn tv_rejects_negative() {
        let bad = LatticeDistribution {
            offsets: vec![0, 1],
            probabilities: vec![1.2, -0.2],
        };
        assert!(total_variation(&bad, &LatticeDistribution::delta(0)).is_err());
    }

    #[test]
    fn moments_of_delta() {
        let m = moments(&LatticeDistribution::delta(7)).unwrap();
        assert_eq!((m.norm, m.mean, m.variance), (1.0, 7.0, 0.0));
        let zero = LatticeDistribution::contiguous(0, vec![0.0, 0.0]).unwrap();
        assert!(moments(&zero).is_err());
    }

    #[test]
    fn report_fields() {
        let sim = LatticeDistribution::contiguous(-1, vec![0.2, 0.5, 0.2]).unwrap();
        let reference = LatticeDistribution::contiguous(0, vec![0.5, 0.5]).unwrap();
        let r = compare(&sim, &reference).unwrap();
        assert_abs_diff_eq!(r.total_variation, 0.5 * (0.2 + 0.0 + 0.3), epsilon = 1e-15);
        assert_abs_diff_eq!(r.l_inf, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(r.norm_deficit, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(r.mean_offset, 0.0 - 0.5, epsilon = 1e-15);
        assert!(r.l_inf <= 2.0 * r.total_variation);
    }

    #[test]
    fn ladder_offsets() {
        let d = ladder_distribution(&[0.1, 0.8, 0.1], 1).unwrap();
        assert_eq!(d.offsets, vec![-1, 0, 1]);
    }
}
