//! Experiment drivers over Mallows-generated markets, with deterministic
//! seeding and byte-stable CSV output.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use std::fmt::Write as _;

use crate::constraints::FeasibilitySpec;
use crate::harness::gen::{
    college_names, gen_college_prefs, gen_resource_constraints, gen_student_prefs,
    resource_counts_for, student_names,
};
use crate::harness::rng::{stage, substream};
use crate::mechanisms::{
    disagreement_bound, optimal_master_list, sd, sd_star, sda_reserved, MasterList,
};
use crate::model::{borda_scores, AssignVec, Market};
use crate::properties::max_envy;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Small grid that a laptop finishes in seconds.
    Desk,
    /// Full scale.
    Paper,
}

impl Preset {
    pub fn parse(token: &str) -> Option<Preset> {
        match token {
            "desk" => Some(Preset::Desk),
            "paper" => Some(Preset::Paper),
            _ => None,
        }
    }

    pub fn n(self) -> usize {
        match self {
            Preset::Desk => 40,
            Preset::Paper => 200,
        }
    }

    pub fn m(self) -> usize {
        match self {
            Preset::Desk => 8,
            Preset::Paper => 20,
        }
    }

    pub fn trials(self) -> usize {
        10
    }
}

/// Sample mean and standard error (zero for fewer than two samples).
pub fn mean_stderr(data: &[f64]) -> (f64, f64) {
    let n = data.len() as f64;
    if data.is_empty() {
        return (0.0, 0.0);
    }
    let mean = data.iter().sum::<f64>() / n;
    if data.len() < 2 {
        return (mean, 0.0);
    }
    let var = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Fixed-notation float with six significant digits, for CSV cells.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// Master list quality under varying college agreement and cut.
#[derive(Clone, Debug)]
pub struct Fig1Config {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub phi_cs: Vec<f64>,
    pub rhos: Vec<f64>,
}

impl Fig1Config {
    pub fn preset(p: Preset, seed: u64) -> Fig1Config {
        Fig1Config {
            n: p.n(),
            m: p.m(),
            trials: p.trials(),
            seed,
            phi_cs: vec![0.0, 0.2, 0.4, 0.6, 0.8],
            rhos: vec![0.3, 0.5, 0.7],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Fig1Cell {
    pub phi_c: f64,
    pub rho: f64,
    /// Disagreement bound of the greedy list, per trial.
    pub optimal: Vec<f64>,
    /// Disagreement bound of a uniformly random list, per trial.
    pub random: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Fig1Result {
    pub cells: Vec<Fig1Cell>,
}

/// Market carrying only college preferences; list construction and
/// disagreement counting never look at the student side.
fn college_side_market(n: usize, m: usize, college_prefs: Vec<Vec<usize>>) -> Market {
    Market::from_parts(
        student_names(n),
        college_names(m),
        vec![Vec::new(); n],
        college_prefs,
        FeasibilitySpec::UnitTotal { total: n as u64 },
    )
    .expect("generated parts are valid")
}

pub fn run_fig1(cfg: &Fig1Config) -> Fig1Result {
    let points: Vec<(usize, usize)> = (0..cfg.phi_cs.len())
        .flat_map(|i| (0..cfg.rhos.len()).map(move |j| (i, j)))
        .collect();
    let cells = points
        .par_iter()
        .map(|&(i, j)| {
            let phi_c = cfg.phi_cs[i];
            let rho = cfg.rhos[j];
            let mut optimal = Vec::with_capacity(cfg.trials);
            let mut random = Vec::with_capacity(cfg.trials);
            for t in 0..cfg.trials {
                let stream = ((i * cfg.rhos.len() + j) * cfg.trials + t) as u64;
                let mut crng = substream(cfg.seed, stream, stage::COLLEGES);
                let (college_prefs, _) = gen_college_prefs(cfg.n, cfg.m, phi_c, rho, &mut crng);
                let market = college_side_market(cfg.n, cfg.m, college_prefs);
                let (_, k) = optimal_master_list(&market);
                optimal.push(k as f64);
                let mut mrng = substream(cfg.seed, stream, stage::MISC);
                let mut order: Vec<usize> = (0..cfg.n).collect();
                order.shuffle(&mut mrng);
                let list = MasterList::new(order, cfg.n).expect("shuffle is a permutation");
                random.push(disagreement_bound(&market, &list) as f64);
            }
            Fig1Cell {
                phi_c,
                rho,
                optimal,
                random,
            }
        })
        .collect();
    Fig1Result { cells }
}

impl Fig1Result {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi_c,rho,method,mean_k,stderr\n");
        for cell in &self.cells {
            for (method, data) in [("optimal", &cell.optimal), ("random", &cell.random)] {
                let (mean, se) = mean_stderr(data);
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_sig6(cell.phi_c),
                    fmt_sig6(cell.rho),
                    method,
                    fmt_sig6(mean),
                    fmt_sig6(se)
                )
                .expect("string writes never fail");
            }
        }
        out
    }
}

/// Guaranteed versus realized envy of serial dictatorship, document order
/// against the greedy list.
#[derive(Clone, Debug)]
pub struct Fig2Config {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub phi_cs: Vec<f64>,
    pub phi_ss: Vec<f64>,
    pub rho: f64,
}

impl Fig2Config {
    pub fn preset(p: Preset, seed: u64) -> Fig2Config {
        Fig2Config {
            n: p.n(),
            m: p.m(),
            trials: p.trials(),
            seed,
            phi_cs: vec![0.3, 0.7],
            phi_ss: vec![0.3, 0.5, 0.7],
            rho: 0.7,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Fig2Row {
    pub method: &'static str,
    pub phi_c: f64,
    pub phi_s: f64,
    pub trial: usize,
    pub guaranteed_k: usize,
    pub realized_k: usize,
}

#[derive(Clone, Debug)]
pub struct Fig2Result {
    pub rows: Vec<Fig2Row>,
}

/// Mallows preferences over a resource constraint, redrawing the resources
/// until the all-ones reserve fits when asked to.
pub fn mallows_resource_market(
    cfg_n: usize,
    cfg_m: usize,
    phi_s: f64,
    phi_c: f64,
    rho: f64,
    seed: u64,
    stream: u64,
    require_ones: bool,
) -> Market {
    let mut crng = substream(seed, stream, stage::COLLEGES);
    let (college_prefs, _) = gen_college_prefs(cfg_n, cfg_m, phi_c, rho, &mut crng);
    let mut srng = substream(seed, stream, stage::STUDENTS);
    let (student_prefs, _) = gen_student_prefs(cfg_n, cfg_m, phi_s, &mut srng);
    let mut rrng = substream(seed, stream, stage::RESOURCES);
    let ones = AssignVec(vec![1; cfg_m]);
    for attempt in 0.. {
        assert!(attempt < 1000, "resource draw keeps missing the reserve");
        let spec = gen_resource_constraints(resource_counts_for(cfg_n), cfg_m, &mut rrng);
        let market = Market::from_parts(
            student_names(cfg_n),
            college_names(cfg_m),
            student_prefs.clone(),
            college_prefs.clone(),
            spec,
        )
        .expect("generated parts are valid");
        if !require_ones || market.is_feasible(&ones) {
            return market;
        }
    }
    unreachable!()
}

pub fn run_fig2(cfg: &Fig2Config) -> Fig2Result {
    let points: Vec<(usize, usize)> = (0..cfg.phi_cs.len())
        .flat_map(|i| (0..cfg.phi_ss.len()).map(move |j| (i, j)))
        .collect();
    let per_point: Vec<Vec<Fig2Row>> = points
        .par_iter()
        .map(|&(i, j)| {
            let phi_c = cfg.phi_cs[i];
            let phi_s = cfg.phi_ss[j];
            let mut rows = Vec::new();
            for t in 0..cfg.trials {
                let stream = ((i * cfg.phi_ss.len() + j) * cfg.trials + t) as u64;
                let market = mallows_resource_market(
                    cfg.n, cfg.m, phi_s, phi_c, cfg.rho, cfg.seed, stream, false,
                );
                let doc = MasterList::document_order(cfg.n);
                let y = sd(&market, &doc);
                rows.push(Fig2Row {
                    method: "sd",
                    phi_c,
                    phi_s,
                    trial: t,
                    guaranteed_k: disagreement_bound(&market, &doc),
                    realized_k: max_envy(&y, &market),
                });
                let (y, _, k) = sd_star(&market);
                rows.push(Fig2Row {
                    method: "sd_star",
                    phi_c,
                    phi_s,
                    trial: t,
                    guaranteed_k: k,
                    realized_k: max_envy(&y, &market),
                });
            }
            rows
        })
        .collect();
    let mut rows: Vec<Fig2Row> = per_point.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (a.method, index_of(&cfg.phi_cs, a.phi_c), index_of(&cfg.phi_ss, a.phi_s), a.trial).cmp(&(
            b.method,
            index_of(&cfg.phi_cs, b.phi_c),
            index_of(&cfg.phi_ss, b.phi_s),
            b.trial,
        ))
    });
    Fig2Result { rows }
}

fn index_of(grid: &[f64], x: f64) -> usize {
    grid.iter().position(|&g| g == x).expect("value from grid")
}

impl Fig2Result {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,phi_c,phi_s,trial,guaranteed_k,realized_k\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.method,
                fmt_sig6(r.phi_c),
                fmt_sig6(r.phi_s),
                r.trial,
                r.guaranteed_k,
                r.realized_k
            )
            .expect("string writes never fail");
        }
        out
    }
}

/// Welfare of sampled deferred acceptance as the sampled prefix grows.
#[derive(Clone, Debug)]
pub struct Fig3Config {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub phi_ss: Vec<f64>,
    pub phi_c: f64,
    pub rho: f64,
    pub ks: Vec<usize>,
}

impl Fig3Config {
    pub fn preset(p: Preset, seed: u64) -> Fig3Config {
        Fig3Config {
            n: p.n(),
            m: p.m(),
            trials: p.trials(),
            seed,
            phi_ss: vec![0.3, 0.5, 0.7],
            phi_c: 0.7,
            rho: 0.7,
            ks: vec![0, 1, 2, 5],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Fig3Cell {
    pub phi_s: f64,
    pub k: usize,
    /// Mean Borda score of the outcome, one entry per trial. Trials are
    /// paired across k: same index, same market.
    pub borda: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Fig3Result {
    pub cells: Vec<Fig3Cell>,
}

pub fn run_fig3(cfg: &Fig3Config) -> Fig3Result {
    let per_phi: Vec<Vec<Fig3Cell>> = (0..cfg.phi_ss.len())
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&i| {
            let phi_s = cfg.phi_ss[i];
            let mut by_k: Vec<Vec<f64>> = vec![Vec::with_capacity(cfg.trials); cfg.ks.len()];
            for t in 0..cfg.trials {
                let stream = (i * cfg.trials + t) as u64;
                // the reserve below keeps one seat per college, so redraw
                // constraints that cannot host it
                let market = mallows_resource_market(
                    cfg.n, cfg.m, phi_s, cfg.phi_c, cfg.rho, cfg.seed, stream, true,
                );
                let ones = AssignVec(vec![1; cfg.m]);
                let list = MasterList::document_order(cfg.n);
                for (ki, &k) in cfg.ks.iter().enumerate() {
                    let out = sda_reserved(&market, k, &list, &ones)
                        .expect("the reserve was checked feasible");
                    let (_, mean) = borda_scores(&out.matching, &market);
                    by_k[ki].push(mean);
                }
            }
            cfg.ks
                .iter()
                .zip(by_k)
                .map(|(&k, borda)| Fig3Cell { phi_s, k, borda })
                .collect()
        })
        .collect();
    Fig3Result {
        cells: per_phi.into_iter().flatten().collect(),
    }
}

impl Fig3Result {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi_s,k,mean_borda,stderr\n");
        for cell in &self.cells {
            let (mean, se) = mean_stderr(&cell.borda);
            writeln!(
                out,
                "{},{},{},{}",
                fmt_sig6(cell.phi_s),
                cell.k,
                fmt_sig6(mean),
                fmt_sig6(se)
            )
            .expect("string writes never fail");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_sig6(0.0), "0.00000");
        assert_eq!(fmt_sig6(0.2), "0.200000");
        assert_eq!(fmt_sig6(12.345_678_9), "12.3457");
        assert_eq!(fmt_sig6(123_456.7), "123457");
        assert_eq!(fmt_sig6(2.5), "2.50000");
        assert_eq!(fmt_sig6(100.0), "100.000");
        assert_eq!(fmt_sig6(-0.25), "-0.250000");
    }

    #[test]
    fn mean_and_stderr() {
        let (mean, se) = mean_stderr(&[2.0, 4.0, 6.0]);
        assert!((mean - 4.0).abs() < 1e-12);
        // sample sd 2, stderr 2/sqrt(3)
        assert!((se - 2.0 / 3.0_f64.sqrt()).abs() < 1e-12);
        assert_eq!(mean_stderr(&[5.0]), (5.0, 0.0));
        assert_eq!(mean_stderr(&[]), (0.0, 0.0));
    }

    #[test]
    fn fig1_is_byte_deterministic() {
        let cfg = Fig1Config {
            n: 12,
            m: 4,
            trials: 3,
            seed: 7,
            phi_cs: vec![0.0, 0.6],
            rhos: vec![0.5],
        };
        let a = run_fig1(&cfg).to_csv();
        let b = run_fig1(&cfg).to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("phi_c,rho,method,mean_k,stderr\n"));
        assert_eq!(a.lines().count(), 1 + 2 * 2);
        assert!(!a.contains('\r'));
    }

    #[test]
    fn fig2_is_byte_deterministic_and_sorted() {
        let cfg = Fig2Config {
            n: 10,
            m: 4,
            trials: 2,
            seed: 9,
            phi_cs: vec![0.3],
            phi_ss: vec![0.3, 0.7],
            rho: 0.7,
        };
        let a = run_fig2(&cfg);
        let b = run_fig2(&cfg);
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.rows.len(), 2 * 2 * 2);
        let methods: Vec<&str> = a.rows.iter().map(|r| r.method).collect();
        let mut sorted = methods.clone();
        sorted.sort();
        assert_eq!(methods, sorted, "sd rows come before sd_star rows");
    }

    #[test]
    fn fig3_pairs_trials_across_k() {
        let cfg = Fig3Config {
            n: 10,
            m: 4,
            trials: 2,
            seed: 11,
            phi_ss: vec![0.5],
            phi_c: 0.7,
            rho: 0.7,
            ks: vec![0, 2],
        };
        let a = run_fig3(&cfg);
        let b = run_fig3(&cfg);
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.cells.len(), 2);
        assert_eq!(a.cells[0].borda.len(), 2);
        assert_eq!(a.cells[0].k, 0);
        assert_eq!(a.cells[1].k, 2);
    }
}
