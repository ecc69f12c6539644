//! Fixed counterexample markets and randomized instance generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::constraints::{FeasibilitySpec, Resource};
use crate::model::{BuildError, CollegeId, Market, StudentId};

use super::mallows::sample_around;

pub(crate) fn student_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}

pub(crate) fn college_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("c{i}")).collect()
}

/// Cyclic market with n students and n colleges: student i ranks colleges
/// i+1, i+2, .., wrapping around to i; college i ranks students i, i+1, ..
/// wrapping. Every college holds one seat and only n-1 seats exist overall,
/// so someone always stays unassigned.
pub fn example1_market(n: usize) -> Result<Market, BuildError> {
    let student_prefs = (0..n)
        .map(|i| (1..=n).map(|k| (i + k) % n).collect())
        .collect();
    let college_prefs = (0..n)
        .map(|j| (0..n).map(|k| (j + k) % n).collect())
        .collect();
    Market::from_parts(
        student_names(n),
        college_names(n),
        student_prefs,
        college_prefs,
        FeasibilitySpec::UnitTotal {
            total: n as u64 - 1,
        },
    )
}

/// Two students, two colleges, one seat overall. College c1 ranks s2 first,
/// c2 ranks s1 first. Student profiles (1-based) follow the impossibility
/// table for fairness with cut-off nonwastefulness.
pub fn one_seat_market(profile: usize) -> Result<Market, BuildError> {
    let prefs = one_seat_profiles()
        .into_iter()
        .nth(profile - 1)
        .expect("profile in 1..=3");
    Market::from_parts(
        student_names(2),
        college_names(2),
        prefs.to_vec(),
        vec![vec![1, 0], vec![0, 1]],
        FeasibilitySpec::UnionBoxes {
            tops: vec![
                crate::model::AssignVec(vec![1, 0]),
                crate::model::AssignVec(vec![0, 1]),
            ],
        },
    )
}

/// Student preference profiles of the 2x2 impossibility table, in order.
pub fn one_seat_profiles() -> Vec<[Vec<CollegeId>; 2]> {
    vec![
        [vec![0, 1], vec![1]], // s1: c1 c2, s2: c2
        [vec![0], vec![1, 0]], // s1: c1,    s2: c2 c1
        [vec![0], vec![1]],    // s1: c1,    s2: c2
    ]
}

/// Two students, four colleges, feasible occupancy inside {c1,c2} or inside
/// {c3,c4}. Colleges c1, c2 rank s1 first; c3, c4 rank s2 first. Student
/// profiles (1-based) follow the impossibility table for fairness with the
/// no-vacant-college property.
pub fn two_box_market(profile: usize) -> Result<Market, BuildError> {
    let prefs = two_box_profiles()
        .into_iter()
        .nth(profile - 1)
        .expect("profile in 1..=7");
    Market::from_parts(
        student_names(2),
        college_names(4),
        prefs.to_vec(),
        vec![vec![0, 1], vec![0, 1], vec![1, 0], vec![1, 0]],
        FeasibilitySpec::UnionBoxes {
            tops: vec![
                crate::model::AssignVec(vec![1, 1, 0, 0]),
                crate::model::AssignVec(vec![0, 0, 1, 1]),
            ],
        },
    )
}

/// Student preference profiles of the 2x4 impossibility table, in order.
pub fn two_box_profiles() -> Vec<[Vec<CollegeId>; 2]> {
    vec![
        [vec![1], vec![0]],             // c2        | c1
        [vec![1], vec![0, 2]],          // c2        | c1 c3
        [vec![0, 1, 2], vec![0, 2]],    // c1 c2 c3  | c1 c3
        [vec![0, 1, 2], vec![0, 2, 3]], // c1 c2 c3  | c1 c3 c4
        [vec![2, 0], vec![0, 2, 3]],    // c3 c1     | c1 c3 c4
        [vec![2, 0], vec![3]],          // c3 c1     | c4
        [vec![2], vec![3]],             // c3        | c4
    ]
}

/// College preference lists drawn around a shared uniform central order:
/// each college samples a Mallows ranking with dispersion `phi_c` and keeps
/// the first floor(rho * n) students, at least one. Returns the lists and
/// the central order.
pub fn gen_college_prefs(
    n: usize,
    m: usize,
    phi_c: f64,
    rho: f64,
    rng: &mut impl Rng,
) -> (Vec<Vec<StudentId>>, Vec<StudentId>) {
    assert!(rho > 0.0 && rho < 1.0, "acceptability cut must be in (0,1)");
    let mut central: Vec<StudentId> = (0..n).collect();
    central.shuffle(rng);
    let keep = (((rho * n as f64).floor() as usize).max(1)).min(n);
    let prefs = (0..m)
        .map(|_| {
            let mut full = sample_around(&central, phi_c, rng);
            full.truncate(keep);
            full
        })
        .collect();
    (prefs, central)
}

/// Full student preference lists drawn around a shared uniform central order
/// over colleges with dispersion `phi_s`; every college is acceptable.
pub fn gen_student_prefs(
    n: usize,
    m: usize,
    phi_s: f64,
    rng: &mut impl Rng,
) -> (Vec<Vec<CollegeId>>, Vec<CollegeId>) {
    let mut central: Vec<CollegeId> = (0..m).collect();
    central.shuffle(rng);
    let prefs = (0..n).map(|_| sample_around(&central, phi_s, rng)).collect();
    (prefs, central)
}

/// Resource constraints: `counts[k]` resources of capacity k+1, each
/// compatible with every college independently with probability 0.3;
/// resources with no compatible college are redrawn.
pub fn gen_resource_constraints(
    counts: [usize; 3],
    m: usize,
    rng: &mut impl Rng,
) -> FeasibilitySpec {
    let mut resources = Vec::new();
    for (k, &count) in counts.iter().enumerate() {
        for _ in 0..count {
            let compatible = loop {
                let t: Vec<CollegeId> = (0..m).filter(|_| rng.gen_bool(0.3)).collect();
                if !t.is_empty() {
                    break t;
                }
            };
            resources.push(Resource {
                capacity: k as u32 + 1,
                compatible,
            });
        }
    }
    FeasibilitySpec::Resources { resources }
}

/// Resource counts in the 2:1:2 capacity split whose total capacity is n.
/// n = 200 gives 40/20/40, the desk scale n = 40 gives 8/4/8.
pub fn resource_counts_for(n: usize) -> [usize; 3] {
    [n / 5, n / 10, n / 5]
}

/// Market with Mallows preferences on both sides and resource constraints
/// scaled to n. College lists are cut at `rho`; student lists are full.
pub fn mallows_market(
    n: usize,
    m: usize,
    phi_s: f64,
    phi_c: f64,
    rho: f64,
    rng: &mut impl Rng,
) -> Result<Market, BuildError> {
    let (college_prefs, _) = gen_college_prefs(n, m, phi_c, rho, rng);
    let (student_prefs, _) = gen_student_prefs(n, m, phi_s, rng);
    let spec = gen_resource_constraints(resource_counts_for(n), m, rng);
    Market::from_parts(
        student_names(n),
        college_names(m),
        student_prefs,
        college_prefs,
        spec,
    )
}

/// Uniformly random preference lists: each pairing is acceptable with the
/// given probability, list orders are uniform.
pub fn random_prefs(k: usize, accept_p: f64, rng: &mut impl Rng) -> Vec<usize> {
    let mut list: Vec<usize> = (0..k).filter(|_| rng.gen_bool(accept_p)).collect();
    list.shuffle(rng);
    list
}

/// Random market over a given constraint. Students and colleges list the
/// other side with the given acceptance probabilities, orders uniform.
pub fn random_market(
    n: usize,
    m: usize,
    student_accept_p: f64,
    college_accept_p: f64,
    spec: FeasibilitySpec,
    rng: &mut impl Rng,
) -> Result<Market, BuildError> {
    let student_prefs = (0..n).map(|_| random_prefs(m, student_accept_p, rng)).collect();
    let college_prefs = (0..m).map(|_| random_prefs(n, college_accept_p, rng)).collect();
    Market::from_parts(
        student_names(n),
        college_names(m),
        student_prefs,
        college_prefs,
        spec,
    )
}
