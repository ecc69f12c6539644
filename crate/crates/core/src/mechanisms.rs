//! Matching mechanisms: generalized deferred acceptance, classical deferred
//! acceptance with artificial caps, serial dictatorship over a master list,
//! and the sampled variant with reserved seats.

use std::collections::HashSet;

use thiserror::Error;

use crate::constraints::Feasibility;
use crate::model::{AssignVec, CollegeId, Market, Matching, StudentId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MechanismError {
    #[error("master list must contain every student exactly once")]
    InvalidMasterList,
    #[error("sampled count {k} exceeds the number of students {n}")]
    SampledCountOutOfRange { k: usize, n: usize },
    #[error("reserved vector has length {got}, want {want}")]
    ReservedLength { got: usize, want: usize },
    #[error("reserved vector is infeasible, no cap vector covers it")]
    ReservedInfeasible,
}

/// Priority weights over contracts. Within one college the order follows the
/// college's preference list; across the whole market every present contract
/// gets a distinct positive weight. Absent pairs weigh zero.
pub struct ContractWeights {
    w: Vec<u64>,
    m: usize,
}

impl ContractWeights {
    pub fn weight(&self, s: StudentId, c: CollegeId) -> u64 {
        self.w[s * self.m + c]
    }
}

/// Builds the canonical weight table: rank block first, then a unique
/// index-based tie-break smaller than one rank step, so weights never
/// collide and better-ranked students always weigh more at their college.
pub fn make_weights(market: &Market) -> ContractWeights {
    let n = market.n() as u64;
    let m = market.m() as u64;
    let step = n * m;
    let mut w = vec![0u64; market.n() * market.m()];
    for c in 0..market.m() {
        for &s in market.college_prefs(c) {
            let rank = market.college_rank(c, s).expect("listed student has a rank") as u64;
            w[s * market.m() + c] = (n - rank) * step + (c as u64 * n + s as u64 + 1);
        }
    }
    ContractWeights { w, m: market.m() }
}

/// College-side choice over a set of offered contracts: scan by descending
/// weight and keep an offer when the occupancy stays feasible. Returns the
/// kept contracts in scan order.
pub fn choice_colleges(
    offers: &[(StudentId, CollegeId)],
    market: &Market,
    weights: &ContractWeights,
) -> Vec<(StudentId, CollegeId)> {
    choice_with(market.feasibility(), offers, weights)
}

fn choice_with(
    feas: &Feasibility,
    offers: &[(StudentId, CollegeId)],
    weights: &ContractWeights,
) -> Vec<(StudentId, CollegeId)> {
    let mut order: Vec<(StudentId, CollegeId)> = offers.to_vec();
    order.sort_by_key(|&(s, c)| std::cmp::Reverse(weights.weight(s, c)));
    let mut nu = AssignVec::zero(feas.m());
    let mut kept = Vec::new();
    for (s, c) in order {
        let cand = nu.plus_unit(c);
        if feas.is_feasible(&cand) {
            nu = cand;
            kept.push((s, c));
        }
    }
    kept
}

/// Generalized deferred acceptance. Students offer their best not yet
/// rejected contract, colleges keep a feasible subset by weight, rejections
/// accumulate until a round changes nothing.
pub fn gda(market: &Market, weights: &ContractWeights) -> Matching {
    gda_with(market, market.feasibility(), weights)
}

/// Generalized deferred acceptance over the unit restriction of the
/// constraint: only the empty vector and feasible single seats survive, so
/// the round structure stays sane even when the constraint itself is wild.
pub fn gda_unit(market: &Market, weights: &ContractWeights) -> Matching {
    let spec = market.feasibility().unit_restriction();
    let feas = Feasibility::new(spec, market.m()).expect("unit restriction is well formed");
    gda_with(market, &feas, weights)
}

fn gda_with(market: &Market, feas: &Feasibility, weights: &ContractWeights) -> Matching {
    let n = market.n();
    let mut rejected: Vec<HashSet<CollegeId>> = vec![HashSet::new(); n];
    loop {
        let mut offers = Vec::new();
        for s in 0..n {
            for &c in market.student_prefs(s) {
                if market.is_contract(s, c) && !rejected[s].contains(&c) {
                    offers.push((s, c));
                    break;
                }
            }
        }
        let kept = choice_with(feas, &offers, weights);
        if kept.len() == offers.len() {
            let mut assignment = vec![None; n];
            for (s, c) in kept {
                assignment[s] = Some(c);
            }
            return Matching::new(market, assignment).expect("offers are valid contracts");
        }
        let kept_set: HashSet<(StudentId, CollegeId)> = kept.into_iter().collect();
        for &(s, c) in &offers {
            if !kept_set.contains(&(s, c)) {
                rejected[s].insert(c);
            }
        }
    }
}

/// Classical student-proposing deferred acceptance under per-college quotas.
pub fn deferred_acceptance(market: &Market, quotas: &[u32]) -> Matching {
    let everyone: Vec<StudentId> = (0..market.n()).collect();
    deferred_acceptance_among(market, quotas, &everyone)
}

/// Deferred acceptance restricted to a subset of students; the rest stay
/// unassigned. The proposal order does not affect the outcome.
pub fn deferred_acceptance_among(
    market: &Market,
    quotas: &[u32],
    participants: &[StudentId],
) -> Matching {
    assert_eq!(quotas.len(), market.m(), "one quota per college");
    let n = market.n();
    let mut next = vec![0usize; n];
    let mut held: Vec<Vec<StudentId>> = vec![Vec::new(); market.m()];
    let mut free: Vec<StudentId> = participants.iter().rev().copied().collect();
    while let Some(s) = free.pop() {
        let prefs = market.student_prefs(s);
        while next[s] < prefs.len() {
            let c = prefs[next[s]];
            next[s] += 1;
            if !market.is_contract(s, c) || quotas[c] == 0 {
                continue;
            }
            if held[c].len() < quotas[c] as usize {
                held[c].push(s);
                break;
            }
            let (slot, &worst) = held[c]
                .iter()
                .enumerate()
                .max_by_key(|&(_, &t)| market.college_rank(c, t).expect("held students are ranked"))
                .expect("held list is full, so nonempty");
            if market.college_rank(c, s) < market.college_rank(c, worst) {
                held[c][slot] = s;
                free.push(worst);
                break;
            }
        }
    }
    let mut assignment = vec![None; n];
    for (c, students) in held.iter().enumerate() {
        for &s in students {
            assignment[s] = Some(c);
        }
    }
    Matching::new(market, assignment).expect("proposals are valid contracts")
}

/// Deferred acceptance under artificial caps: the constraint is replaced by
/// a fixed feasible occupancy vector that acts as per-college quotas.
pub fn acda(market: &Market, nu_star: &AssignVec) -> Matching {
    assert_eq!(nu_star.len(), market.m(), "one cap per college");
    deferred_acceptance(market, &nu_star.0)
}

/// A strict processing order over all students.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterList {
    order: Vec<StudentId>,
    position: Vec<usize>,
}

impl MasterList {
    pub fn new(order: Vec<StudentId>, n: usize) -> Result<MasterList, MechanismError> {
        if order.len() != n {
            return Err(MechanismError::InvalidMasterList);
        }
        let mut position = vec![usize::MAX; n];
        for (i, &s) in order.iter().enumerate() {
            if s >= n || position[s] != usize::MAX {
                return Err(MechanismError::InvalidMasterList);
            }
            position[s] = i;
        }
        Ok(MasterList { order, position })
    }

    /// Students in input order, s1 first.
    pub fn document_order(n: usize) -> MasterList {
        MasterList::new((0..n).collect(), n).expect("identity order is valid")
    }

    pub fn order(&self) -> &[StudentId] {
        &self.order
    }

    pub fn position(&self, s: StudentId) -> usize {
        self.position[s]
    }
}

/// Serial dictatorship: students pick their best college that keeps the
/// occupancy feasible, in master list order.
pub fn sd(market: &Market, list: &MasterList) -> Matching {
    let mut nu = AssignVec::zero(market.m());
    let mut assignment = vec![None; market.n()];
    for &s in list.order() {
        for &c in market.student_prefs(s) {
            if !market.is_contract(s, c) {
                continue;
            }
            let cand = nu.plus_unit(c);
            if market.is_feasible(&cand) {
                nu = cand;
                assignment[s] = Some(c);
                break;
            }
        }
    }
    Matching::new(market, assignment).expect("serial choices are valid contracts")
}

/// edge[s][t] is true when some college ranks s strictly above t while
/// finding both acceptable. These are the pairs a master list can wrong.
pub fn preference_edges(market: &Market) -> Vec<Vec<bool>> {
    let n = market.n();
    let mut edge = vec![vec![false; n]; n];
    for c in 0..market.m() {
        let list = market.college_prefs(c);
        for (i, &hi) in list.iter().enumerate() {
            for &lo in &list[i + 1..] {
                edge[hi][lo] = true;
            }
        }
    }
    edge
}

fn disagreements(edge: &[Vec<bool>], list: &MasterList, s: StudentId) -> usize {
    (0..edge.len())
        .filter(|&t| t != s && list.position(t) < list.position(s) && edge[s][t])
        .count()
}

/// How many students placed ahead of s in the list some college would have
/// put behind s.
pub fn disagreement_count(market: &Market, list: &MasterList, s: StudentId) -> usize {
    disagreements(&preference_edges(market), list, s)
}

/// The largest disagreement count over all students; serial dictatorship on
/// this list never produces more envy than this.
pub fn disagreement_bound(market: &Market, list: &MasterList) -> usize {
    let edge = preference_edges(market);
    (0..market.n())
        .map(|s| disagreements(&edge, list, s))
        .max()
        .unwrap_or(0)
}

/// Builds a master list minimizing the worst disagreement count: repeatedly
/// extract the student with the fewest remaining out-edges (lowest index on
/// ties) and place them at the bottom of the list.
pub fn optimal_master_list(market: &Market) -> (MasterList, usize) {
    let n = market.n();
    let edge = preference_edges(market);
    let mut outdeg: Vec<usize> = (0..n)
        .map(|s| (0..n).filter(|&t| edge[s][t]).count())
        .collect();
    let mut remaining = vec![true; n];
    let mut extraction = Vec::with_capacity(n);
    let mut k = 0;
    for _ in 0..n {
        let s = (0..n)
            .filter(|&s| remaining[s])
            .min_by_key(|&s| (outdeg[s], s))
            .expect("students remain");
        k = k.max(outdeg[s]);
        remaining[s] = false;
        extraction.push(s);
        for t in 0..n {
            if remaining[t] && edge[t][s] {
                outdeg[t] -= 1;
            }
        }
    }
    extraction.reverse();
    let list = MasterList::new(extraction, n).expect("extraction is a permutation");
    (list, k)
}

/// Serial dictatorship on the list built by `optimal_master_list`. Returns
/// the matching, the list, and its disagreement bound.
pub fn sd_star(market: &Market) -> (Matching, MasterList, usize) {
    let (list, k) = optimal_master_list(market);
    (sd(market, &list), list, k)
}

/// Serial dictatorship that keeps room for the reserved vector: a pick is
/// allowed only when the occupancy joined with the reserve stays feasible.
/// `order` may cover just a subset of students; the rest stay unassigned.
pub fn sd_reserved(
    market: &Market,
    order: &[StudentId],
    reserved: &AssignVec,
) -> Result<Matching, MechanismError> {
    if reserved.len() != market.m() {
        return Err(MechanismError::ReservedLength {
            got: reserved.len(),
            want: market.m(),
        });
    }
    let mut nu = AssignVec::zero(market.m());
    let mut assignment = vec![None; market.n()];
    for &s in order {
        for &c in market.student_prefs(s) {
            if !market.is_contract(s, c) {
                continue;
            }
            let cand = nu.plus_unit(c);
            if market.is_feasible(&cand.join(reserved)) {
                nu = cand;
                assignment[s] = Some(c);
                break;
            }
        }
    }
    Ok(Matching::new(market, assignment).expect("serial choices are valid contracts"))
}

pub struct SdaOutcome {
    pub matching: Matching,
    /// Cap vector handed to the deferred acceptance phase.
    pub nu_star: AssignVec,
    /// Students processed serially, the first k of the list.
    pub sampled: Vec<StudentId>,
    /// Colleges with a feasible seat the reserve does not cover; envy
    /// guarantees need this list empty.
    pub uncovered: Vec<CollegeId>,
}

/// Sampled deferred acceptance with reserved seats. The first k students of
/// the list pick serially under the reserve, virtual rounds of the same
/// students grow the occupancy to a worst case, a maximal feasible cap above
/// it is fixed, and everyone else runs classical deferred acceptance inside
/// the remaining room.
pub fn sda_reserved(
    market: &Market,
    k: usize,
    list: &MasterList,
    reserved: &AssignVec,
) -> Result<SdaOutcome, MechanismError> {
    let n = market.n();
    let m = market.m();
    if k > n {
        return Err(MechanismError::SampledCountOutOfRange { k, n });
    }
    if reserved.len() != m {
        return Err(MechanismError::ReservedLength {
            got: reserved.len(),
            want: m,
        });
    }
    let sampled: Vec<StudentId> = list.order()[..k].to_vec();
    let serial = sd_reserved(market, &sampled, reserved)?;
    let serial_nu = serial.nu(market);

    // virtual copies of the sampled students claim more seats round-robin;
    // a college never needs more room than it has contracts
    let cap: Vec<u32> = (0..m).map(|c| market.college_contract_count(c)).collect();
    let mut virt = serial_nu.clone();
    loop {
        let mut assigned_any = false;
        for &s in &sampled {
            for &c in market.student_prefs(s) {
                if !market.is_contract(s, c) || virt[c] >= cap[c] {
                    continue;
                }
                let cand = virt.plus_unit(c);
                if market.is_feasible(&cand.join(reserved)) {
                    virt = cand;
                    assigned_any = true;
                    break;
                }
            }
        }
        if !assigned_any {
            break;
        }
    }

    let lower = virt.join(reserved);
    let nu_star = market
        .feasibility()
        .maximal_feasible_above(&lower)
        .map_err(|_| MechanismError::ReservedInfeasible)?;

    let mut quotas = nu_star.0.clone();
    for c in 0..m {
        let used = serial_nu[c];
        assert!(quotas[c] >= used, "caps cover the serial phase");
        quotas[c] -= used;
    }
    let regulars: Vec<StudentId> = list.order()[k..].to_vec();
    let regular = deferred_acceptance_among(market, &quotas, &regulars);

    let mut assignment: Vec<Option<CollegeId>> = (0..n).map(|s| serial.college_of(s)).collect();
    for &s in &regulars {
        assignment[s] = regular.college_of(s);
    }
    let matching = Matching::new(market, assignment).expect("both phases return valid contracts");
    let uncovered = (0..m)
        .filter(|&c| reserved[c] == 0 && market.is_feasible(&AssignVec::unit(m, c)))
        .collect();
    Ok(SdaOutcome {
        matching,
        nu_star,
        sampled,
        uncovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::FeasibilitySpec;
    use crate::harness::gen::{example1_market, one_seat_market, random_market, two_box_market};
    use crate::harness::rng::{stage, substream};
    use rand::Rng;

    fn assigned(y: &Matching, pairs: &[(usize, Option<usize>)]) -> bool {
        pairs.iter().all(|&(s, c)| y.college_of(s) == c)
    }

    #[test]
    fn weights_are_unique_positive_and_follow_college_order() {
        let mut rng = substream(11, 0, stage::MISC);
        for _ in 0..20 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=4);
            let market = random_market(
                n,
                m,
                0.7,
                0.7,
                FeasibilitySpec::UnitTotal { total: n as u64 },
                &mut rng,
            )
            .unwrap();
            let w = make_weights(&market);
            let mut seen = HashSet::new();
            for c in 0..m {
                let list = market.college_prefs(c);
                for (i, &s) in list.iter().enumerate() {
                    let weight = w.weight(s, c);
                    assert!(weight > 0);
                    assert!(seen.insert(weight), "weights collide");
                    if i > 0 {
                        assert!(w.weight(list[i - 1], c) > weight, "order broken at {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn choice_is_maximal_and_matches_exhaustive_argmax() {
        let mut rng = substream(12, 0, stage::MISC);
        for round in 0..60 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=3);
            let spec = match round % 2 {
                0 => FeasibilitySpec::MaxQuotas {
                    q: (0..m).map(|_| rng.gen_range(0..=2)).collect(),
                },
                _ => FeasibilitySpec::UnitTotal {
                    total: rng.gen_range(0..=3),
                },
            };
            let market = random_market(n, m, 0.8, 0.8, spec, &mut rng).unwrap();
            let w = make_weights(&market);
            let offers: Vec<(StudentId, CollegeId)> = (0..n)
                .filter_map(|s| {
                    let prefs = market.student_prefs(s);
                    let picks: Vec<_> =
                        prefs.iter().filter(|&&c| market.is_contract(s, c)).collect();
                    if picks.is_empty() || rng.gen_bool(0.2) {
                        None
                    } else {
                        Some((s, *picks[rng.gen_range(0..picks.len())]))
                    }
                })
                .collect();
            let kept = choice_colleges(&offers, &market, &w);
            let kept_set: HashSet<_> = kept.iter().copied().collect();
            let nu = kept.iter().fold(AssignVec::zero(m), |v, &(_, c)| v.plus_unit(c));
            assert!(market.is_feasible(&nu));
            // maximality: nothing rejected fits on top of the kept set
            for &(s, c) in &offers {
                if !kept_set.contains(&(s, c)) {
                    assert!(!market.is_feasible(&nu.plus_unit(c)), "rejected {s} {c} fits");
                }
            }
            // exhaustive max weight subset; these constraint kinds admit greedy
            let mut best = 0u64;
            for mask in 0u32..(1 << offers.len()) {
                let mut v = AssignVec::zero(m);
                let mut total = 0u64;
                for (i, &(s, c)) in offers.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v = v.plus_unit(c);
                        total += w.weight(s, c);
                    }
                }
                if market.is_feasible(&v) {
                    best = best.max(total);
                }
            }
            let kept_total: u64 = kept.iter().map(|&(s, c)| w.weight(s, c)).sum();
            assert_eq!(kept_total, best, "greedy missed the optimum");
        }
    }

    #[test]
    fn gda_trace_on_the_cyclic_market() {
        let market = example1_market(3).unwrap();
        let y = gda(&market, &make_weights(&market));
        assert!(assigned(&y, &[(0, None), (1, Some(1)), (2, Some(2))]));
    }

    #[test]
    fn gda_agrees_with_classical_da_under_max_quotas() {
        let mut rng = substream(13, 0, stage::MISC);
        for _ in 0..40 {
            let n = rng.gen_range(1..=7);
            let m = rng.gen_range(1..=4);
            let q: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
            let market = random_market(
                n,
                m,
                0.7,
                0.7,
                FeasibilitySpec::MaxQuotas { q: q.clone() },
                &mut rng,
            )
            .unwrap();
            let y = gda(&market, &make_weights(&market));
            let z = deferred_acceptance(&market, &q);
            assert_eq!(y, z);
        }
    }

    #[test]
    fn da_trace_on_a_three_student_market() {
        // c1 prefers s2, c2 prefers s1; one seat each
        let market = Market::from_parts(
            vec!["s1".into(), "s2".into(), "s3".into()],
            vec!["c1".into(), "c2".into()],
            vec![vec![0, 1], vec![0, 1], vec![1, 0]],
            vec![vec![1, 0, 2], vec![0, 2, 1]],
            FeasibilitySpec::MaxQuotas { q: vec![1, 1] },
        )
        .unwrap();
        let y = deferred_acceptance(&market, &[1, 1]);
        assert!(assigned(&y, &[(0, Some(1)), (1, Some(0)), (2, None)]));
    }

    #[test]
    fn da_ignores_non_participants_and_zero_quotas() {
        let market = example1_market(3).unwrap();
        let y = deferred_acceptance_among(&market, &[1, 1, 1], &[0]);
        assert!(assigned(&y, &[(0, Some(1)), (1, None), (2, None)]));
        let z = deferred_acceptance(&market, &[0, 0, 0]);
        assert!(z.is_empty_matching());
    }

    #[test]
    fn acda_trace_under_the_ascent_cap() {
        let market = example1_market(3).unwrap();
        let nu_star = market
            .feasibility()
            .maximal_feasible_above(&AssignVec::zero(3))
            .unwrap();
        // one seat per college, two seats overall, so the ascent stops at c2
        assert_eq!(nu_star, AssignVec(vec![1, 1, 0]));
        let y = acda(&market, &nu_star);
        assert!(assigned(&y, &[(0, Some(0)), (1, Some(1)), (2, None)]));
    }

    #[test]
    fn master_list_validation() {
        assert!(MasterList::new(vec![2, 0, 1], 3).is_ok());
        assert_eq!(
            MasterList::new(vec![0, 0, 1], 3),
            Err(MechanismError::InvalidMasterList)
        );
        assert_eq!(
            MasterList::new(vec![0, 1], 3),
            Err(MechanismError::InvalidMasterList)
        );
        assert_eq!(
            MasterList::new(vec![0, 1, 3], 3),
            Err(MechanismError::InvalidMasterList)
        );
        let l = MasterList::document_order(3);
        assert_eq!(l.order(), &[0, 1, 2]);
        assert_eq!(l.position(2), 2);
    }

    #[test]
    fn sd_trace_on_the_cyclic_market() {
        let market = example1_market(3).unwrap();
        let y = sd(&market, &MasterList::document_order(3));
        assert!(assigned(&y, &[(0, Some(1)), (1, Some(2)), (2, None)]));
    }

    #[test]
    fn disagreement_counts_on_the_tiny_tables() {
        let market = one_seat_market(1).unwrap();
        let doc = MasterList::document_order(2);
        assert_eq!(disagreement_count(&market, &doc, 0), 0);
        assert_eq!(disagreement_count(&market, &doc, 1), 1);
        assert_eq!(disagreement_bound(&market, &doc), 1);
        let (_, k) = optimal_master_list(&market);
        assert_eq!(k, 1, "both colleges disagree, no order avoids it");

        let market = two_box_market(3).unwrap();
        let doc = MasterList::document_order(2);
        assert_eq!(disagreement_count(&market, &doc, 1), 1);
    }

    #[test]
    fn unanimous_colleges_admit_a_perfect_list() {
        let market = Market::from_parts(
            vec!["s1".into(), "s2".into(), "s3".into()],
            vec!["c1".into(), "c2".into()],
            vec![vec![0], vec![0, 1], vec![1]],
            vec![vec![2, 0, 1], vec![2, 0, 1]],
            FeasibilitySpec::MaxQuotas { q: vec![1, 1] },
        )
        .unwrap();
        let (list, k) = optimal_master_list(&market);
        assert_eq!(k, 0);
        assert_eq!(list.order(), &[2, 0, 1], "the shared ranking itself");
    }

    #[test]
    fn cyclic_market_needs_the_worst_possible_list() {
        let market = example1_market(4).unwrap();
        let (_, k) = optimal_master_list(&market);
        assert_eq!(k, 3, "every pair is contested, so n-1 is forced");
    }

    #[test]
    fn sd_star_runs_on_its_own_list() {
        let market = example1_market(3).unwrap();
        let (y, list, k) = sd_star(&market);
        assert_eq!(k, 2);
        assert_eq!(y, sd(&market, &list));
    }

    #[test]
    fn sd_reserved_keeps_room_for_the_reserve() {
        // three colleges, two seats total, one held for c1
        let market = Market::from_parts(
            vec!["s1".into(), "s2".into(), "s3".into()],
            vec!["c1".into(), "c2".into(), "c3".into()],
            vec![vec![1], vec![2], vec![0]],
            vec![vec![2], vec![0], vec![1]],
            FeasibilitySpec::UnitTotal { total: 2 },
        )
        .unwrap();
        let reserved = AssignVec(vec![1, 0, 0]);
        let y = sd_reserved(&market, &[0, 1, 2], &reserved).unwrap();
        assert!(assigned(&y, &[(0, Some(1)), (1, None), (2, Some(0))]));
        // without the reserve s2 would have taken the second seat
        let z = sd(&market, &MasterList::document_order(3));
        assert!(assigned(&z, &[(0, Some(1)), (1, Some(2)), (2, None)]));
        // a subset order only serves those students
        let w = sd_reserved(&market, &[1], &reserved).unwrap();
        assert!(assigned(&w, &[(0, None), (1, Some(2)), (2, None)]));
        assert_eq!(
            sd_reserved(&market, &[0], &AssignVec(vec![1, 0])),
            Err(MechanismError::ReservedLength { got: 2, want: 3 })
        );
    }

    #[test]
    fn sda_rejects_bad_arguments() {
        let market = example1_market(3).unwrap();
        let list = MasterList::document_order(3);
        let ones = AssignVec(vec![1, 1, 1]);
        match sda_reserved(&market, 4, &list, &AssignVec::zero(3)) {
            Err(MechanismError::SampledCountOutOfRange { k: 4, n: 3 }) => {}
            other => panic!("expected out of range, got {:?}", other.is_ok()),
        }
        // (1,1,1) breaks the two-seat total, so the reserve is infeasible
        match sda_reserved(&market, 1, &list, &ones) {
            Err(MechanismError::ReservedInfeasible) => {}
            other => panic!("expected infeasible reserve, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn sda_edges_match_their_pure_forms() {
        let market = example1_market(4).unwrap();
        let list = MasterList::document_order(4);
        let reserved = AssignVec(vec![1, 1, 0, 0]);

        // k = 0 is deferred acceptance under the maximal cap over the reserve
        let out = sda_reserved(&market, 0, &list, &reserved).unwrap();
        let cap = market.feasibility().maximal_feasible_above(&reserved).unwrap();
        assert_eq!(out.nu_star, cap);
        assert_eq!(out.matching, deferred_acceptance(&market, &cap.0));
        assert!(out.sampled.is_empty());

        // k = n is serial dictatorship with the reserve
        let out = sda_reserved(&market, 4, &list, &reserved).unwrap();
        assert_eq!(
            out.matching,
            sd_reserved(&market, list.order(), &reserved).unwrap()
        );
    }

    #[test]
    fn sda_reports_uncovered_colleges() {
        let market = example1_market(3).unwrap();
        let list = MasterList::document_order(3);
        let out = sda_reserved(&market, 1, &list, &AssignVec(vec![1, 0, 0])).unwrap();
        assert_eq!(out.uncovered, vec![1, 2]);
        let out = sda_reserved(&market, 1, &list, &AssignVec(vec![1, 1, 0])).unwrap();
        assert_eq!(out.uncovered, vec![2]);
    }

    #[test]
    fn sda_output_is_feasible_and_respects_caps() {
        let mut rng = substream(14, 0, stage::MISC);
        for _ in 0..30 {
            let n = rng.gen_range(1..=7);
            let m = rng.gen_range(1..=4);
            let spec = FeasibilitySpec::UnitTotal {
                total: rng.gen_range(0..=n as u64),
            };
            let market = random_market(n, m, 0.7, 0.7, spec, &mut rng).unwrap();
            let reserved = AssignVec::zero(m);
            let list = MasterList::document_order(n);
            for k in 0..=n {
                let out = sda_reserved(&market, k, &list, &reserved).unwrap();
                let nu = out.matching.nu(&market);
                assert!(market.is_feasible(&nu));
                assert!(nu.dominated_by(&out.nu_star));
                assert!(market.is_feasible(&out.nu_star));
            }
        }
    }
}
