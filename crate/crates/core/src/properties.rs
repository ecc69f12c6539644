//! Fairness, wastefulness, stability, and efficiency checks over matchings.
//! Witnesses are always the lexicographically first violating pair by
//! (student index, college index), so reports are reproducible.

use std::collections::HashSet;

use indexmap::IndexMap;
use serde::Serialize;

use crate::constraints::{ConstraintError, FeasibilitySpec};
use crate::mechanisms::{choice_colleges, make_weights};
use crate::model::{
    matching_to_doc, AssignVec, CollegeId, Market, Matching, MatchingDoc, StudentId,
};

/// Students toward whom `s` holds justified envy: they occupy a college that
/// exists as a contract for `s`, that `s` prefers to her own outcome, and
/// that ranks `s` above them.
pub fn envy_set(y: &Matching, market: &Market, s: StudentId) -> Vec<StudentId> {
    let own = y.college_of(s);
    let mut out = Vec::new();
    for t in 0..market.n() {
        if t == s {
            continue;
        }
        let Some(c) = y.college_of(t) else { continue };
        if market.is_contract(s, c)
            && market.student_prefers(s, Some(c), own)
            && market.college_rank(c, s) < market.college_rank(c, t)
        {
            out.push(t);
        }
    }
    out
}

pub fn envy_sets(y: &Matching, market: &Market) -> Vec<Vec<StudentId>> {
    (0..market.n()).map(|s| envy_set(y, market, s)).collect()
}

/// Size of the largest envy set.
pub fn max_envy(y: &Matching, market: &Market) -> usize {
    (0..market.n())
        .map(|s| envy_set(y, market, s).len())
        .max()
        .unwrap_or(0)
}

/// Every student envies at most k others.
pub fn is_ef_k(y: &Matching, market: &Market, k: usize) -> bool {
    (0..market.n()).all(|s| envy_set(y, market, s).len() <= k)
}

/// No justified envy at all.
pub fn is_fair(y: &Matching, market: &Market) -> bool {
    is_ef_k(y, market, 0)
}

/// Occupancy after moving student with current college `own` into `c`.
fn nu_after_move(nu: &AssignVec, own: Option<CollegeId>, c: CollegeId) -> AssignVec {
    let v = match own {
        Some(o) => nu.minus_unit(o),
        None => nu.clone(),
    };
    v.plus_unit(c)
}

fn is_claim(
    market: &Market,
    nu: &AssignVec,
    s: StudentId,
    own: Option<CollegeId>,
    c: CollegeId,
) -> bool {
    market.is_contract(s, c)
        && market.student_prefers(s, Some(c), own)
        && market.is_feasible(&nu_after_move(nu, own, c))
}

/// First (student, college) the matching could serve better by moving that
/// one student, keeping everyone else in place.
pub fn first_claim(y: &Matching, market: &Market) -> Option<(StudentId, CollegeId)> {
    let nu = y.nu(market);
    for s in 0..market.n() {
        let own = y.college_of(s);
        for c in 0..market.m() {
            if is_claim(market, &nu, s, own, c) {
                return Some((s, c));
            }
        }
    }
    None
}

pub fn is_nonwasteful(y: &Matching, market: &Market) -> bool {
    first_claim(y, market).is_none()
}

/// A claim is blocked when some better-ranked student also wants the college
/// but cannot be moved there feasibly; the college can reject both with one
/// cut-off score.
fn claim_blocked(
    y: &Matching,
    market: &Market,
    nu: &AssignVec,
    s: StudentId,
    c: CollegeId,
) -> bool {
    for t in 0..market.n() {
        if t == s || !market.is_contract(t, c) {
            continue;
        }
        let t_own = y.college_of(t);
        if !market.student_prefers(t, Some(c), t_own) {
            continue;
        }
        if market.college_rank(c, t) >= market.college_rank(c, s) {
            continue;
        }
        if !market.is_feasible(&nu_after_move(nu, t_own, c)) {
            return true;
        }
    }
    false
}

/// First claim no cut-off can excuse.
pub fn first_unblocked_claim(y: &Matching, market: &Market) -> Option<(StudentId, CollegeId)> {
    let nu = y.nu(market);
    for s in 0..market.n() {
        let own = y.college_of(s);
        for c in 0..market.m() {
            if is_claim(market, &nu, s, own, c) && !claim_blocked(y, market, &nu, s, c) {
                return Some((s, c));
            }
        }
    }
    None
}

pub fn is_cutoff_nonwasteful(y: &Matching, market: &Market) -> bool {
    first_unblocked_claim(y, market).is_none()
}

/// First contract that could simply be added on top of the matching: the
/// student wants it and the grown occupancy stays feasible.
pub fn first_strong_claim(y: &Matching, market: &Market) -> Option<(StudentId, CollegeId)> {
    let nu = y.nu(market);
    for s in 0..market.n() {
        let own = y.college_of(s);
        for c in 0..market.m() {
            if market.is_contract(s, c)
                && market.student_prefers(s, Some(c), own)
                && market.is_feasible(&nu.plus_unit(c))
            {
                return Some((s, c));
            }
        }
    }
    None
}

pub fn is_weakly_nonwasteful(y: &Matching, market: &Market) -> bool {
    first_strong_claim(y, market).is_none()
}

/// First unassigned student who could feasibly enter an empty college she
/// finds acceptable.
pub fn first_vacant_claim(y: &Matching, market: &Market) -> Option<(StudentId, CollegeId)> {
    let nu = y.nu(market);
    for s in 0..market.n() {
        if y.college_of(s).is_some() {
            continue;
        }
        for c in 0..market.m() {
            if nu[c] == 0
                && market.is_contract(s, c)
                && market.acceptable(s, c)
                && market.is_feasible(&nu.plus_unit(c))
            {
                return Some((s, c));
            }
        }
    }
    None
}

pub fn no_vacant_college(y: &Matching, market: &Market) -> bool {
    first_vacant_claim(y, market).is_none()
}

/// The matching is empty although some mutually acceptable contract is
/// feasible on its own. Returns the first such contract.
pub fn empty_matching_violation(y: &Matching, market: &Market) -> Option<(StudentId, CollegeId)> {
    if !y.is_empty_matching() {
        return None;
    }
    for s in 0..market.n() {
        for c in 0..market.m() {
            if market.is_contract(s, c)
                && market.acceptable(s, c)
                && market.is_feasible(&AssignVec::unit(market.m(), c))
            {
                return Some((s, c));
            }
        }
    }
    None
}

pub fn no_empty_matching(y: &Matching, market: &Market) -> bool {
    empty_matching_violation(y, market).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityViolation {
    /// The college-side choice over the matching itself drops this contract.
    NotChosen { student: StudentId, college: CollegeId },
    /// An outside contract both sides would pick up.
    Blocking { student: StudentId, college: CollegeId },
}

/// Stability against the college-side choice function: the matching must be
/// its own choice, and no outside contract may be wanted by its student and
/// kept by the choice when offered on top.
pub fn hm_violation(y: &Matching, market: &Market) -> Option<StabilityViolation> {
    let weights = make_weights(market);
    let own_pairs: Vec<(StudentId, CollegeId)> = y.pairs().collect();
    let kept: HashSet<(StudentId, CollegeId)> =
        choice_colleges(&own_pairs, market, &weights).into_iter().collect();
    for &(s, c) in &own_pairs {
        if !kept.contains(&(s, c)) {
            return Some(StabilityViolation::NotChosen {
                student: s,
                college: c,
            });
        }
    }
    for s in 0..market.n() {
        let own = y.college_of(s);
        for c in 0..market.m() {
            if own == Some(c) || !market.is_contract(s, c) {
                continue;
            }
            if !market.student_prefers(s, Some(c), own) {
                continue;
            }
            let mut offers = own_pairs.clone();
            offers.push((s, c));
            if choice_colleges(&offers, market, &weights).contains(&(s, c)) {
                return Some(StabilityViolation::Blocking {
                    student: s,
                    college: c,
                });
            }
        }
    }
    None
}

pub fn is_hm_stable(y: &Matching, market: &Market) -> bool {
    hm_violation(y, market).is_none()
}

/// Partial occupancy pruning is sound only when the family is known to be
/// downward closed; an explicit list can be anything.
fn prunable(market: &Market) -> bool {
    !matches!(market.spec(), FeasibilitySpec::Explicit { .. })
}

/// Searches for a feasible matching every student weakly prefers with at
/// least one strict improvement. The search space is capped by `limit`.
pub fn pareto_dominator(
    y: &Matching,
    market: &Market,
    limit: u64,
) -> Result<Option<Matching>, ConstraintError> {
    let n = market.n();
    let mut options: Vec<Vec<Option<CollegeId>>> = Vec::with_capacity(n);
    for s in 0..n {
        let own = y.college_of(s);
        let mut opts: Vec<Option<CollegeId>> = Vec::new();
        for &c in market.student_prefs(s) {
            if own == Some(c) {
                break;
            }
            if market.is_contract(s, c) {
                opts.push(Some(c));
            }
        }
        opts.push(own);
        options.push(opts);
    }
    let mut size: u128 = 1;
    for o in &options {
        size = size.saturating_mul(o.len() as u128);
    }
    if size > limit as u128 {
        return Err(ConstraintError::EnumerationLimit { size, limit });
    }

    let prune = prunable(market);
    let mut nu = AssignVec::zero(market.m());
    let mut assignment: Vec<Option<CollegeId>> = vec![None; n];
    if search_dominator(market, y, &options, 0, false, prune, &mut nu, &mut assignment) {
        let found = Matching::new(market, assignment).expect("options are valid contracts");
        return Ok(Some(found));
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn search_dominator(
    market: &Market,
    y: &Matching,
    options: &[Vec<Option<CollegeId>>],
    s: usize,
    strict: bool,
    prune: bool,
    nu: &mut AssignVec,
    assignment: &mut Vec<Option<CollegeId>>,
) -> bool {
    if s == options.len() {
        return strict && market.is_feasible(nu);
    }
    for &opt in &options[s] {
        if let Some(c) = opt {
            nu.0[c] += 1;
        }
        let viable = !prune || opt.is_none() || market.is_feasible(nu);
        if viable {
            assignment[s] = opt;
            let now_strict = strict || opt != y.college_of(s);
            if search_dominator(market, y, options, s + 1, now_strict, prune, nu, assignment) {
                return true;
            }
        }
        if let Some(c) = opt {
            nu.0[c] -= 1;
        }
    }
    false
}

pub fn is_pareto_efficient(
    y: &Matching,
    market: &Market,
    limit: u64,
) -> Result<bool, ConstraintError> {
    Ok(pareto_dominator(y, market, limit)?.is_none())
}

#[derive(Serialize, Debug, Clone)]
pub struct PairWitness {
    pub student: String,
    pub college: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct Flag {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PairWitness>,
}

#[derive(Serialize, Debug, Clone)]
pub struct StabilityFlag {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PairWitness>,
}

#[derive(Serialize, Debug, Clone)]
pub struct ParetoFlag {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominator: Option<MatchingDoc>,
}

/// Full diagnostic over one matching. Witness pairs use document names.
#[derive(Serialize, Debug, Clone)]
pub struct PropertyReport {
    pub feasible: bool,
    pub envy_sets: IndexMap<String, Vec<String>>,
    pub max_envy: usize,
    pub fair: bool,
    pub nonwasteful: Flag,
    pub cutoff_nonwasteful: Flag,
    pub weakly_nonwasteful: Flag,
    pub no_vacant_college: Flag,
    pub no_empty_matching: Flag,
    pub hm_stable: StabilityFlag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pareto_efficient: Option<ParetoFlag>,
}

/// Evaluates every property. Pareto efficiency runs only when a limit is
/// given and the improvement space fits under it.
pub fn evaluate(y: &Matching, market: &Market, pareto_limit: Option<u64>) -> PropertyReport {
    let name_pair = |(s, c): (StudentId, CollegeId)| PairWitness {
        student: market.student_name(s).to_string(),
        college: market.college_name(c).to_string(),
    };
    let flag = |w: Option<(StudentId, CollegeId)>| Flag {
        holds: w.is_none(),
        witness: w.map(name_pair),
    };
    let envy: IndexMap<String, Vec<String>> = (0..market.n())
        .map(|s| {
            (
                market.student_name(s).to_string(),
                envy_set(y, market, s)
                    .into_iter()
                    .map(|t| market.student_name(t).to_string())
                    .collect(),
            )
        })
        .collect();
    let max_envy = max_envy(y, market);
    let hm = hm_violation(y, market);
    let pareto = pareto_limit.and_then(|limit| {
        pareto_dominator(y, market, limit).ok().map(|d| ParetoFlag {
            holds: d.is_none(),
            dominator: d.map(|better| matching_to_doc(market, &better)),
        })
    });
    PropertyReport {
        feasible: y.is_feasible(market),
        envy_sets: envy,
        max_envy,
        fair: max_envy == 0,
        nonwasteful: flag(first_claim(y, market)),
        cutoff_nonwasteful: flag(first_unblocked_claim(y, market)),
        weakly_nonwasteful: flag(first_strong_claim(y, market)),
        no_vacant_college: flag(first_vacant_claim(y, market)),
        no_empty_matching: flag(empty_matching_violation(y, market)),
        hm_stable: StabilityFlag {
            holds: hm.is_none(),
            kind: hm.as_ref().map(|v| {
                match v {
                    StabilityViolation::NotChosen { .. } => "not_chosen",
                    StabilityViolation::Blocking { .. } => "blocking",
                }
                .to_string()
            }),
            witness: hm.map(|v| match v {
                StabilityViolation::NotChosen { student, college }
                | StabilityViolation::Blocking { student, college } => name_pair((student, college)),
            }),
        },
        pareto_efficient: pareto,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::FeasibilitySpec;
    use crate::harness::gen::{example1_market, one_seat_market, random_market};
    use crate::harness::rng::{stage, substream};
    use crate::mechanisms::{gda, sd, MasterList};
    use rand::Rng;

    fn matching(market: &Market, assignment: Vec<Option<usize>>) -> Matching {
        Matching::new(market, assignment).unwrap()
    }

    #[test]
    fn envy_on_the_cyclic_market() {
        let market = example1_market(3).unwrap();
        let y = matching(&market, vec![None, Some(2), Some(0)]);
        assert_eq!(envy_set(&y, &market, 0), vec![1, 2]);
        assert_eq!(envy_set(&y, &market, 1), Vec::<usize>::new());
        assert_eq!(envy_set(&y, &market, 2), Vec::<usize>::new());
        assert_eq!(max_envy(&y, &market), 2);
        assert!(!is_fair(&y, &market));
        assert!(!is_ef_k(&y, &market, 1));
        assert!(is_ef_k(&y, &market, 2));
    }

    #[test]
    fn gda_output_here_is_fair_and_stable() {
        let market = example1_market(3).unwrap();
        let y = gda(&market, &crate::mechanisms::make_weights(&market));
        assert!(is_fair(&y, &market));
        assert!(is_hm_stable(&y, &market));
    }

    #[test]
    fn wastefulness_ladder_on_a_fixed_matching() {
        let market = example1_market(3).unwrap();
        // two seats used, total is full: no move or addition helps
        let y = matching(&market, vec![None, Some(2), Some(0)]);
        assert!(is_nonwasteful(&y, &market));
        assert!(is_cutoff_nonwasteful(&y, &market));
        assert!(is_weakly_nonwasteful(&y, &market));
        assert!(no_vacant_college(&y, &market));
        assert!(no_empty_matching(&y, &market));

        // empty matching: the very first contract is a witness everywhere
        let empty = Matching::empty(3);
        assert_eq!(first_claim(&empty, &market), Some((0, 0)));
        assert_eq!(first_strong_claim(&empty, &market), Some((0, 0)));
        assert_eq!(first_vacant_claim(&empty, &market), Some((0, 0)));
        assert_eq!(empty_matching_violation(&empty, &market), Some((0, 0)));
        assert!(!is_nonwasteful(&empty, &market));
        assert!(!no_empty_matching(&empty, &market));
    }

    #[test]
    fn one_seat_rows_behave_like_their_table() {
        // profile 1: keeping the seat at c1 is fair, handing it to s2 is not
        let market = one_seat_market(1).unwrap();
        let keep = matching(&market, vec![Some(0), None]);
        assert!(is_fair(&keep, &market));
        assert!(is_cutoff_nonwasteful(&keep, &market));
        let hand = matching(&market, vec![None, Some(1)]);
        assert!(!is_fair(&hand, &market));
        assert!(is_nonwasteful(&hand, &market));

        // profile 3: disjoint demands, both single assignments pass
        let market = one_seat_market(3).unwrap();
        for a in [vec![Some(0), None], vec![None, Some(1)]] {
            let y = matching(&market, a);
            assert!(is_fair(&y, &market));
            assert!(is_cutoff_nonwasteful(&y, &market));
        }
    }

    #[test]
    fn cutoff_blocking_needs_a_better_ranked_rival() {
        // one seat overall; s2 holds c2 and claims c1, a sideways move that
        // stays feasible. Unassigned s1 is ranked above s2 at c1 but cannot
        // enter without a second seat, so the claim of s2 is blocked.
        let market = Market::from_parts(
            vec!["s1".into(), "s2".into()],
            vec!["c1".into(), "c2".into()],
            vec![vec![0], vec![0, 1]],
            vec![vec![0, 1], vec![1]],
            FeasibilitySpec::UnitTotal { total: 1 },
        )
        .unwrap();
        let y = matching(&market, vec![None, Some(1)]);
        assert_eq!(first_claim(&y, &market), Some((1, 0)));
        assert_eq!(first_unblocked_claim(&y, &market), None);
        assert!(!is_nonwasteful(&y, &market));
        assert!(is_cutoff_nonwasteful(&y, &market));

        // flip the ranking at c1 and the excuse disappears
        let flipped = Market::from_parts(
            vec!["s1".into(), "s2".into()],
            vec!["c1".into(), "c2".into()],
            vec![vec![0], vec![0, 1]],
            vec![vec![1, 0], vec![1]],
            FeasibilitySpec::UnitTotal { total: 1 },
        )
        .unwrap();
        let y = matching(&flipped, vec![None, Some(1)]);
        assert_eq!(first_unblocked_claim(&y, &flipped), Some((1, 0)));
        assert!(!is_cutoff_nonwasteful(&y, &flipped));
    }

    #[test]
    fn stability_violations_come_in_both_kinds() {
        let market = Market::from_parts(
            vec!["s1".into(), "s2".into()],
            vec!["c1".into()],
            vec![vec![0], vec![0]],
            vec![vec![0, 1]],
            FeasibilitySpec::MaxQuotas { q: vec![1] },
        )
        .unwrap();
        // both seated at a one-seat college: the choice drops s2
        let both = matching(&market, vec![Some(0), Some(0)]);
        assert_eq!(
            hm_violation(&both, &market),
            Some(StabilityViolation::NotChosen {
                student: 1,
                college: 0
            })
        );
        // nobody seated: the first contract blocks
        let empty = Matching::empty(2);
        assert_eq!(
            hm_violation(&empty, &market),
            Some(StabilityViolation::Blocking {
                student: 0,
                college: 0
            })
        );
        let seated = matching(&market, vec![Some(0), None]);
        assert!(is_hm_stable(&seated, &market));
    }

    #[test]
    fn pareto_dominator_is_found_or_ruled_out() {
        let market = example1_market(3).unwrap();
        let y = gda(&market, &crate::mechanisms::make_weights(&market));
        let better = pareto_dominator(&y, &market, 1_000_000).unwrap();
        assert_eq!(
            better.unwrap(),
            matching(&market, vec![None, Some(2), Some(0)])
        );

        let y = sd(&market, &MasterList::document_order(3));
        assert!(is_pareto_efficient(&y, &market, 1_000_000).unwrap());
    }

    #[test]
    fn pareto_respects_the_limit() {
        let market = example1_market(3).unwrap();
        let err = pareto_dominator(&Matching::empty(3), &market, 10).unwrap_err();
        assert!(matches!(err, ConstraintError::EnumerationLimit { .. }));
    }

    #[test]
    fn serial_dictatorship_is_pareto_efficient_on_random_markets() {
        let mut rng = substream(21, 0, stage::MISC);
        for round in 0..40 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=3);
            let spec = match round % 3 {
                0 => FeasibilitySpec::MaxQuotas {
                    q: (0..m).map(|_| rng.gen_range(0..=2)).collect(),
                },
                1 => FeasibilitySpec::UnitTotal {
                    total: rng.gen_range(0..=n as u64),
                },
                _ => FeasibilitySpec::UnionBoxes {
                    tops: (0..rng.gen_range(1..=2))
                        .map(|_| AssignVec((0..m).map(|_| rng.gen_range(0..=2)).collect()))
                        .collect(),
                },
            };
            let market = random_market(n, m, 0.7, 0.7, spec, &mut rng).unwrap();
            let y = sd(&market, &MasterList::document_order(n));
            assert!(
                is_pareto_efficient(&y, &market, 10_000_000).unwrap(),
                "round {round}"
            );
        }
    }

    #[test]
    fn property_implications_hold_on_random_hereditary_markets() {
        let mut rng = substream(22, 0, stage::MISC);
        for round in 0..300 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=3);
            let spec = match round % 3 {
                0 => FeasibilitySpec::MaxQuotas {
                    q: (0..m).map(|_| rng.gen_range(0..=2)).collect(),
                },
                1 => FeasibilitySpec::UnitTotal {
                    total: rng.gen_range(0..=3),
                },
                _ => FeasibilitySpec::UnionBoxes {
                    tops: (0..rng.gen_range(1..=3))
                        .map(|_| AssignVec((0..m).map(|_| rng.gen_range(0..=2)).collect()))
                        .collect(),
                },
            };
            let market = random_market(n, m, 0.6, 0.6, spec, &mut rng).unwrap();
            // random feasible matching by greedy insertion
            let mut nu = AssignVec::zero(m);
            let mut assignment = vec![None; n];
            for s in 0..n {
                if rng.gen_bool(0.3) {
                    continue;
                }
                let prefs = market.student_prefs(s);
                if prefs.is_empty() {
                    continue;
                }
                let c = prefs[rng.gen_range(0..prefs.len())];
                if market.is_contract(s, c) && market.is_feasible(&nu.plus_unit(c)) {
                    nu = nu.plus_unit(c);
                    assignment[s] = Some(c);
                }
            }
            let y = matching(&market, assignment);

            let pareto = is_pareto_efficient(&y, &market, 10_000_000).unwrap();
            let nw = is_nonwasteful(&y, &market);
            let cutoff = is_cutoff_nonwasteful(&y, &market);
            let weak = is_weakly_nonwasteful(&y, &market);
            let vacant = no_vacant_college(&y, &market);
            let empty = no_empty_matching(&y, &market);
            if pareto {
                assert!(nw, "pareto without nonwastefulness in round {round}");
            }
            if nw {
                assert!(cutoff, "nonwasteful without cutoff in round {round}");
            }
            if cutoff {
                assert!(weak, "cutoff without weak in round {round}");
            }
            if weak {
                assert!(vacant, "weak without no-vacant in round {round}");
            }
            if vacant {
                assert!(empty, "no-vacant without no-empty in round {round}");
            }
            assert_eq!(is_fair(&y, &market), max_envy(&y, &market) == 0);
        }
    }

    #[test]
    fn report_serializes_with_names() {
        let market = example1_market(3).unwrap();
        let y = matching(&market, vec![None, Some(2), Some(0)]);
        let report = evaluate(&y, &market, Some(1_000_000));
        assert!(report.feasible);
        assert!(!report.fair);
        assert_eq!(report.max_envy, 2);
        assert!(report.nonwasteful.holds);
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["envy_sets"]["s1"], serde_json::json!(["s2", "s3"]));
        assert_eq!(json["pareto_efficient"]["holds"], serde_json::json!(true));
        assert!(json.get("feasible").is_some());

        let report = evaluate(&Matching::empty(3), &market, None);
        assert!(!report.no_empty_matching.holds);
        let w = report.no_empty_matching.witness.clone().unwrap();
        assert_eq!((w.student.as_str(), w.college.as_str()), ("s1", "c1"));
        let json = serde_json::to_value(&report).unwrap();
        assert!(json.get("pareto_efficient").is_none());
    }
}
