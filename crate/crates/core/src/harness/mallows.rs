//! Mallows ranking model, sampled by repeated insertion: the j-th item of
//! the central order (0-based) goes to slot s in 0..=j with weight
//! exp(-phi * (j - s)), which draws full rankings with probability
//! proportional to exp(-phi * kendall_tau(ranking, central)).

use rand::Rng;

/// Mallows draw parameters plus the acceptability cut used when lists are
/// truncated.
#[derive(Clone, Debug)]
pub struct MallowsConfig {
    /// Dispersion, 0 = uniform, large = concentrated on the central order.
    pub phi: f64,
    pub central: Vec<usize>,
    /// Fraction of the ranking kept as acceptable, in (0, 1).
    pub rho: f64,
}

/// One ranking drawn around `config.central` with dispersion `config.phi`.
pub fn mallows_sample(config: &MallowsConfig, rng: &mut impl Rng) -> Vec<usize> {
    sample_around(&config.central, config.phi, rng)
}

pub fn sample_around(central: &[usize], phi: f64, rng: &mut impl Rng) -> Vec<usize> {
    assert!(phi >= 0.0, "dispersion must be nonnegative");
    let q = (-phi).exp();
    let mut out: Vec<usize> = Vec::with_capacity(central.len());
    let mut weights: Vec<f64> = Vec::with_capacity(central.len() + 1);
    for (j, &item) in central.iter().enumerate() {
        // weights for slots j, j-1, .., 0
        weights.clear();
        let mut w = 1.0;
        let mut total = 0.0;
        for _ in 0..=j {
            total += w;
            weights.push(w);
            w *= q;
        }
        let mut u = rng.gen_range(0.0..total);
        let mut slot = j;
        for (t, &wt) in weights.iter().enumerate() {
            if u < wt || t == j {
                slot = j - t;
                break;
            }
            u -= wt;
        }
        out.insert(slot, item);
    }
    out
}

/// Number of pairwise order disagreements between two rankings of the same
/// items.
pub fn kendall_tau(a: &[usize], b: &[usize]) -> u64 {
    let max = a.iter().copied().max().map_or(0, |x| x + 1);
    let mut pos = vec![usize::MAX; max];
    for (i, &x) in b.iter().enumerate() {
        pos[x] = i;
    }
    let mut inversions = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if pos[a[i]] > pos[a[j]] {
                inversions += 1;
            }
        }
    }
    inversions
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::rng::substream;

    #[test]
    fn two_item_probability_matches_closed_form() {
        // central [a, b] with phi = ln 2: P([a, b]) = 1 / (1 + 1/2) = 2/3
        let mut rng = substream(1, 0, 99);
        let central = vec![0, 1];
        let draws = 100_000;
        let hits = (0..draws)
            .filter(|_| sample_around(&central, 2f64.ln(), &mut rng) == central)
            .count();
        let freq = hits as f64 / draws as f64;
        assert!((freq - 2.0 / 3.0).abs() < 0.01, "frequency {freq}");
    }

    #[test]
    fn zero_dispersion_is_uniform() {
        let mut rng = substream(2, 0, 99);
        let central = vec![0, 1, 2];
        let mut counts = std::collections::HashMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            *counts.entry(sample_around(&central, 0.0, &mut rng)).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = draws as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // chi-square df=5, 0.999 quantile
        assert!(chi2 < 20.52, "chi2 {chi2}");
    }

    #[test]
    fn large_dispersion_returns_central() {
        let mut rng = substream(3, 0, 99);
        let central = vec![3, 1, 4, 0, 2];
        let draws = 10_000;
        let hits = (0..draws)
            .filter(|_| sample_around(&central, 50.0, &mut rng) == central)
            .count();
        assert!(hits as f64 / draws as f64 > 0.999);
    }

    #[test]
    fn mean_kendall_tau_decreases_in_phi() {
        let central: Vec<usize> = (0..8).collect();
        let mut means = Vec::new();
        for (i, phi) in [0.0, 0.2, 0.4, 0.6, 0.8].into_iter().enumerate() {
            let mut rng = substream(4, i as u64, 99);
            let total: u64 = (0..2000)
                .map(|_| kendall_tau(&sample_around(&central, phi, &mut rng), &central))
                .sum();
            means.push(total as f64 / 2000.0);
        }
        for w in means.windows(2) {
            assert!(w[1] < w[0], "means not decreasing: {means:?}");
        }
    }
}
