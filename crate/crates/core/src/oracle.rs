//! Independent reference computations: exhaustive enumeration of matchings,
//! verification of the small impossibility tables, strategyproofness search
//! over unilateral misreports, and brute force master list optimization.
//! Kept deliberately separate from the mechanisms they cross-check.

use itertools::Itertools;
use serde::Serialize;

use crate::constraints::{ConstraintError, FeasibilitySpec};
use crate::harness::gen::{one_seat_market, one_seat_profiles, two_box_market, two_box_profiles};
use crate::model::{AssignVec, CollegeId, Market, Matching, StudentId};
use crate::properties;

/// Assignment choices per student: stay unassigned or take any contract the
/// student lists, in preference order.
fn student_options(market: &Market) -> Vec<Vec<Option<CollegeId>>> {
    (0..market.n())
        .map(|s| {
            let mut opts = vec![None];
            for &c in market.student_prefs(s) {
                if market.is_contract(s, c) {
                    opts.push(Some(c));
                }
            }
            opts
        })
        .collect()
}

/// Walks every feasible matching in a fixed order. The callback returns
/// false to stop early. Errs when the raw assignment space exceeds `limit`.
pub fn visit_matchings(
    market: &Market,
    limit: u64,
    mut f: impl FnMut(&Matching) -> bool,
) -> Result<(), ConstraintError> {
    let options = student_options(market);
    let mut size: u128 = 1;
    for o in &options {
        size = size.saturating_mul(o.len() as u128);
    }
    if size > limit as u128 {
        return Err(ConstraintError::EnumerationLimit { size, limit });
    }
    let prune = !matches!(market.spec(), FeasibilitySpec::Explicit { .. });
    let mut nu = AssignVec::zero(market.m());
    let mut assignment: Vec<Option<CollegeId>> = vec![None; market.n()];
    walk(market, &options, 0, prune, &mut nu, &mut assignment, &mut f);
    Ok(())
}

fn walk(
    market: &Market,
    options: &[Vec<Option<CollegeId>>],
    s: usize,
    prune: bool,
    nu: &mut AssignVec,
    assignment: &mut Vec<Option<CollegeId>>,
    f: &mut impl FnMut(&Matching) -> bool,
) -> bool {
    if s == options.len() {
        if market.is_feasible(nu) {
            let y = Matching::new(market, assignment.clone()).expect("options are contracts");
            return f(&y);
        }
        return true;
    }
    for &opt in &options[s] {
        if let Some(c) = opt {
            nu.0[c] += 1;
        }
        let viable = opt.is_none() || !prune || market.is_feasible(nu);
        assignment[s] = opt;
        let keep_going = !viable || walk(market, options, s + 1, prune, nu, assignment, f);
        if let Some(c) = opt {
            nu.0[c] -= 1;
        }
        if !keep_going {
            return false;
        }
    }
    true
}

/// All feasible matchings, materialized. Prefer [`visit_matchings`] when the
/// count could be large.
pub fn enumerate_matchings(market: &Market, limit: u64) -> Result<Vec<Matching>, ConstraintError> {
    let mut out = Vec::new();
    visit_matchings(market, limit, |y| {
        out.push(y.clone());
        true
    })?;
    Ok(out)
}

/// A conjunction of properties a matching must satisfy.
#[derive(Clone, Debug, Default)]
pub struct RequiredProps {
    pub fair: bool,
    pub ef_k: Option<usize>,
    pub nonwasteful: bool,
    pub cutoff_nonwasteful: bool,
    pub weakly_nonwasteful: bool,
    pub no_vacant_college: bool,
    pub no_empty_matching: bool,
    pub hm_stable: bool,
    pub pareto_efficient: bool,
}

impl RequiredProps {
    /// Parses a comma separated token list, e.g. "fair,nonwasteful".
    /// Underscores and dashes are interchangeable.
    pub fn parse(tokens: &str) -> Result<RequiredProps, String> {
        let mut req = RequiredProps::default();
        for raw in tokens.split(',') {
            let token = raw.trim().replace('_', "-");
            if token.is_empty() {
                continue;
            }
            match token.as_str() {
                "fair" => req.fair = true,
                "nonwasteful" => req.nonwasteful = true,
                "cutoff-nonwasteful" => req.cutoff_nonwasteful = true,
                "weakly-nonwasteful" => req.weakly_nonwasteful = true,
                "no-vacant-college" => req.no_vacant_college = true,
                "no-empty-matching" => req.no_empty_matching = true,
                "hm-stable" => req.hm_stable = true,
                "pareto-efficient" => req.pareto_efficient = true,
                other => return Err(format!("unknown property \"{other}\"")),
            }
        }
        Ok(req)
    }

    pub fn satisfied(
        &self,
        y: &Matching,
        market: &Market,
        limit: u64,
    ) -> Result<bool, ConstraintError> {
        if self.fair && !properties::is_fair(y, market) {
            return Ok(false);
        }
        if let Some(k) = self.ef_k {
            if !properties::is_ef_k(y, market, k) {
                return Ok(false);
            }
        }
        if self.nonwasteful && !properties::is_nonwasteful(y, market) {
            return Ok(false);
        }
        if self.cutoff_nonwasteful && !properties::is_cutoff_nonwasteful(y, market) {
            return Ok(false);
        }
        if self.weakly_nonwasteful && !properties::is_weakly_nonwasteful(y, market) {
            return Ok(false);
        }
        if self.no_vacant_college && !properties::no_vacant_college(y, market) {
            return Ok(false);
        }
        if self.no_empty_matching && !properties::no_empty_matching(y, market) {
            return Ok(false);
        }
        if self.hm_stable && !properties::is_hm_stable(y, market) {
            return Ok(false);
        }
        if self.pareto_efficient && !properties::is_pareto_efficient(y, market, limit)? {
            return Ok(false);
        }
        Ok(true)
    }
}

/// Exhaustive existence check: the first feasible matching satisfying the
/// required properties, or None when no matching qualifies.
pub fn exists_matching(
    market: &Market,
    req: &RequiredProps,
    limit: u64,
) -> Result<Option<Matching>, ConstraintError> {
    let mut found = None;
    let mut failed = None;
    visit_matchings(market, limit, |y| match req.satisfied(y, market, limit) {
        Ok(true) => {
            found = Some(y.clone());
            false
        }
        Ok(false) => true,
        Err(e) => {
            failed = Some(e);
            false
        }
    })?;
    if let Some(e) = failed {
        return Err(e);
    }
    Ok(found)
}

/// The two hand-checkable profile tables. Tokens follow the CLI interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileTable {
    /// Two students, two colleges, one seat: fairness with cut-off
    /// nonwastefulness. Token "thm4.1".
    OneSeat,
    /// Two students, four colleges, two boxes: fairness with the
    /// no-vacant-college property. Token "thm4.2".
    TwoBox,
}

impl ProfileTable {
    pub fn parse(token: &str) -> Option<ProfileTable> {
        match token {
            "thm4.1" => Some(ProfileTable::OneSeat),
            "thm4.2" => Some(ProfileTable::TwoBox),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            ProfileTable::OneSeat => "thm4.1",
            ProfileTable::TwoBox => "thm4.2",
        }
    }

    fn profiles(self) -> usize {
        match self {
            ProfileTable::OneSeat => one_seat_profiles().len(),
            ProfileTable::TwoBox => two_box_profiles().len(),
        }
    }

    fn market(self, profile: usize) -> Market {
        match self {
            ProfileTable::OneSeat => one_seat_market(profile),
            ProfileTable::TwoBox => two_box_market(profile),
        }
        .expect("fixture profiles build")
    }

    fn keeps(self, y: &Matching, market: &Market) -> bool {
        match self {
            ProfileTable::OneSeat => {
                properties::is_fair(y, market) && properties::is_cutoff_nonwasteful(y, market)
            }
            ProfileTable::TwoBox => {
                properties::is_fair(y, market) && properties::no_vacant_college(y, market)
            }
        }
    }

    /// Expected possible-matching sets, one per profile, rendered like the
    /// computed rows. Frozen from hand checks.
    fn expected(self) -> Vec<Vec<&'static str>> {
        match self {
            ProfileTable::OneSeat => vec![
                vec!["[c1,-]"],
                vec!["[-,c2]"],
                vec!["[c1,-]", "[-,c2]"],
            ],
            ProfileTable::TwoBox => vec![
                vec!["[c2,c1]"],
                vec!["[c2,c1]", "[-,c3]"],
                vec!["[c1,-]", "[-,c3]"],
                vec!["[c1,-]", "[-,c3]"],
                vec!["[c1,-]", "[-,c3]"],
                vec!["[c1,-]", "[c3,c4]"],
                vec!["[c3,c4]"],
            ],
        }
    }
}

fn render(y: &Matching, market: &Market) -> String {
    let parts: Vec<String> = (0..market.n())
        .map(|s| match y.college_of(s) {
            Some(c) => market.college_name(c).to_string(),
            None => "-".to_string(),
        })
        .collect();
    format!("[{}]", parts.join(","))
}

#[derive(Serialize, Debug)]
pub struct TableRow {
    pub profile: usize,
    pub computed: Vec<String>,
    pub expected: Vec<String>,
    pub matches: bool,
}

#[derive(Serialize, Debug)]
pub struct TableReport {
    pub table: String,
    pub rows: Vec<TableRow>,
    pub rows_match: bool,
    /// Ways to pick one surviving matching per profile.
    pub selections: usize,
    /// Selections where some student gains by misreporting into an adjacent
    /// profile. Equality with `selections` proves the impossibility.
    pub manipulable_selections: usize,
    pub strategyproof_selection_exists: bool,
}

/// Recomputes a profile table from scratch and checks that every way of
/// selecting one surviving matching per profile is manipulable.
pub fn verify_profile_table(table: ProfileTable) -> TableReport {
    let count = table.profiles();
    let markets: Vec<Market> = (1..=count).map(|p| table.market(p)).collect();
    let survivors: Vec<Vec<Matching>> = markets
        .iter()
        .map(|market| {
            enumerate_matchings(market, 1 << 20)
                .expect("tiny market enumerates")
                .into_iter()
                .filter(|y| table.keeps(y, market))
                .collect()
        })
        .collect();

    let mut rows = Vec::new();
    for (idx, market) in markets.iter().enumerate() {
        let computed: Vec<String> = survivors[idx].iter().map(|y| render(y, market)).collect();
        let expected: Vec<String> = table.expected()[idx].iter().map(|s| s.to_string()).collect();
        let matches = {
            let mut a = computed.clone();
            let mut b = expected.clone();
            a.sort();
            b.sort();
            a == b
        };
        rows.push(TableRow {
            profile: idx + 1,
            computed,
            expected,
            matches,
        });
    }
    let rows_match = rows.iter().all(|r| r.matches);

    // profiles adjacent when exactly one student's list differs; moving from
    // a to b is then a unilateral misreport by that student
    let mut edges: Vec<(usize, StudentId, usize)> = Vec::new();
    for a in 0..count {
        for b in 0..count {
            if a == b {
                continue;
            }
            let differing: Vec<StudentId> = (0..markets[a].n())
                .filter(|&s| markets[a].student_prefs(s) != markets[b].student_prefs(s))
                .collect();
            if let [s] = differing[..] {
                edges.push((a, s, b));
            }
        }
    }

    let mut selections = 0usize;
    let mut manipulable = 0usize;
    let mut pick = vec![0usize; count];
    let selectable = survivors.iter().all(|s| !s.is_empty());
    while selectable {
        selections += 1;
        let chosen: Vec<&Matching> = (0..count).map(|p| &survivors[p][pick[p]]).collect();
        let bad = edges.iter().any(|&(a, s, b)| {
            markets[a].student_prefers(s, chosen[b].college_of(s), chosen[a].college_of(s))
        });
        if bad {
            manipulable += 1;
        }
        // odometer over the survivor sets
        let mut p = 0;
        loop {
            if p == count {
                break;
            }
            pick[p] += 1;
            if pick[p] < survivors[p].len() {
                break;
            }
            pick[p] = 0;
            p += 1;
        }
        if p == count {
            break;
        }
    }

    TableReport {
        table: table.token().to_string(),
        rows,
        rows_match,
        selections,
        manipulable_selections: manipulable,
        strategyproof_selection_exists: manipulable < selections,
    }
}

/// Misreport lists per student, truth first. Covers every strict ordering of
/// every subset of the truly acceptable colleges, optionally capped.
pub struct PreferenceUniverse {
    pub per_student: Vec<Vec<Vec<CollegeId>>>,
}

pub fn full_universe(market: &Market, cap: Option<usize>) -> PreferenceUniverse {
    let per_student = (0..market.n())
        .map(|s| {
            let truth: Vec<CollegeId> = market.student_prefs(s).to_vec();
            let k = truth.len();
            assert!(k < 16, "universe over {k} acceptable colleges is too big");
            let mut lists = vec![truth.clone()];
            for mask in 0u32..(1u32 << k) {
                let subset: Vec<CollegeId> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| truth[i])
                    .collect();
                let len = subset.len();
                for perm in subset.into_iter().permutations(len) {
                    if perm != truth {
                        lists.push(perm);
                    }
                }
            }
            if let Some(cap) = cap {
                lists.truncate(cap.max(1));
            }
            lists
        })
        .collect();
    PreferenceUniverse { per_student }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpViolation {
    pub student: StudentId,
    pub misreport: Vec<CollegeId>,
    pub truthful_outcome: Option<CollegeId>,
    pub deviant_outcome: Option<CollegeId>,
}

/// Runs the mechanism once truthfully and once per unilateral misreport in
/// the universe; returns the first misreport that strictly helps its student
/// under the true preferences.
pub fn check_strategyproof<F>(
    mechanism: F,
    market: &Market,
    universe: &PreferenceUniverse,
) -> Option<SpViolation>
where
    F: Fn(&Market) -> Matching,
{
    let truth = mechanism(market);
    for s in 0..market.n() {
        for alt in &universe.per_student[s] {
            if alt == market.student_prefs(s) {
                continue;
            }
            let deviated = market
                .with_student_prefs(s, alt.clone())
                .expect("universe lists are valid preference lists");
            let outcome = mechanism(&deviated);
            if market.student_prefers(s, outcome.college_of(s), truth.college_of(s)) {
                return Some(SpViolation {
                    student: s,
                    misreport: alt.clone(),
                    truthful_outcome: truth.college_of(s),
                    deviant_outcome: outcome.college_of(s),
                });
            }
        }
    }
    None
}

/// Minimum over every master list of the worst disagreement count. Factorial
/// in the number of students; the greedy construction is checked against it.
pub fn bruteforce_optimal_masterlist(market: &Market) -> usize {
    let n = market.n();
    assert!(n <= 9, "factorial search over {n} students");
    let edge = crate::mechanisms::preference_edges(market);
    (0..n)
        .permutations(n)
        .map(|order| {
            let mut position = vec![0usize; n];
            for (i, &s) in order.iter().enumerate() {
                position[s] = i;
            }
            (0..n)
                .map(|s| {
                    (0..n)
                        .filter(|&t| t != s && position[t] < position[s] && edge[s][t])
                        .count()
                })
                .max()
                .unwrap_or(0)
        })
        .min()
        .unwrap_or(0)
}
