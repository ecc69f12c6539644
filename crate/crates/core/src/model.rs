//! Markets, matchings, and occupancy vectors.

use std::collections::HashMap;
use std::fmt;
use std::ops::Index;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::{ConstraintError, Feasibility, FeasibilitySpec, Resource};

/// Dense student index, assigned in document order.
pub type StudentId = usize;

/// Dense college index, assigned in document order.
pub type CollegeId = usize;

/// Per-college occupancy counts. Feasibility of a matching depends on it
/// only through this vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct AssignVec(pub Vec<u32>);

impl AssignVec {
    pub fn zero(m: usize) -> Self {
        AssignVec(vec![0; m])
    }

    /// Unit vector with a single occupied seat at college `c`.
    pub fn unit(m: usize, c: CollegeId) -> Self {
        let mut v = vec![0; m];
        v[c] = 1;
        AssignVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Total number of occupied seats.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    /// Coordinatewise order. Distinct from the derived `Ord`, which is
    /// lexicographic and used only for deterministic sorting.
    pub fn dominated_by(&self, other: &AssignVec) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Coordinatewise maximum.
    pub fn join(&self, other: &AssignVec) -> AssignVec {
        debug_assert_eq!(self.len(), other.len());
        AssignVec(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Copy with coordinate `c` incremented.
    pub fn plus_unit(&self, c: CollegeId) -> AssignVec {
        let mut v = self.clone();
        v.0[c] += 1;
        v
    }

    /// Copy with coordinate `c` decremented. Panics if the coordinate is zero.
    pub fn minus_unit(&self, c: CollegeId) -> AssignVec {
        let mut v = self.clone();
        assert!(v.0[c] > 0, "decrement of empty coordinate {c}");
        v.0[c] -= 1;
        v
    }
}

impl Index<usize> for AssignVec {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for AssignVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A market: students and colleges with strict preference lists, the contract
/// set derived from college lists, and a feasibility family over occupancy
/// vectors. Identifiers are opaque strings; internally both sides use dense
/// indices in document order.
#[derive(Clone, Debug)]
pub struct Market {
    students: Vec<String>,
    colleges: Vec<String>,
    student_prefs: Vec<Vec<CollegeId>>,
    college_prefs: Vec<Vec<StudentId>>,
    student_rank: Vec<Vec<Option<u32>>>,
    college_rank: Vec<Vec<Option<u32>>>,
    feas: Feasibility,
}

/// Instance document construction failure, reported with the offending
/// field path.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("{path}: duplicate identifier \"{name}\"")]
    DuplicateId { path: String, name: String },
    #[error("{path}: unknown student \"{name}\"")]
    UnknownStudent { path: String, name: String },
    #[error("{path}: unknown college \"{name}\"")]
    UnknownCollege { path: String, name: String },
    #[error("{path}: \"{name}\" listed more than once")]
    RepeatedEntry { path: String, name: String },
    #[error("{path}: index {index} out of range")]
    IndexOutOfRange { path: String, index: usize },
    #[error("students: at least one student required")]
    NoStudents,
    #[error("colleges: at least one college required")]
    NoColleges,
    #[error("{0}")]
    Constraint(#[from] ConstraintError),
}

impl Market {
    /// Build a market from dense-index parts. Generators and tests use this;
    /// documents go through [`build_market`].
    pub fn from_parts(
        students: Vec<String>,
        colleges: Vec<String>,
        student_prefs: Vec<Vec<CollegeId>>,
        college_prefs: Vec<Vec<StudentId>>,
        spec: FeasibilitySpec,
    ) -> Result<Market, BuildError> {
        if students.is_empty() {
            return Err(BuildError::NoStudents);
        }
        if colleges.is_empty() {
            return Err(BuildError::NoColleges);
        }
        let n = students.len();
        let m = colleges.len();
        check_unique(&students, "students")?;
        check_unique(&colleges, "colleges")?;
        if student_prefs.len() != n || college_prefs.len() != m {
            return Err(BuildError::IndexOutOfRange {
                path: "prefs".into(),
                index: student_prefs.len().max(college_prefs.len()),
            });
        }
        let student_rank = rank_table(&student_prefs, m, "student_prefs")?;
        let college_rank = rank_table(&college_prefs, n, "college_prefs")?;
        let feas = Feasibility::new(spec, m)?;
        Ok(Market {
            students,
            colleges,
            student_prefs,
            college_prefs,
            student_rank,
            college_rank,
            feas,
        })
    }

    pub fn n(&self) -> usize {
        self.students.len()
    }

    pub fn m(&self) -> usize {
        self.colleges.len()
    }

    pub fn student_name(&self, s: StudentId) -> &str {
        &self.students[s]
    }

    pub fn college_name(&self, c: CollegeId) -> &str {
        &self.colleges[c]
    }

    pub fn student_names(&self) -> &[String] {
        &self.students
    }

    pub fn college_names(&self) -> &[String] {
        &self.colleges
    }

    /// Strict descending list of colleges acceptable to `s`.
    pub fn student_prefs(&self, s: StudentId) -> &[CollegeId] {
        &self.student_prefs[s]
    }

    /// Strict descending list of students acceptable to `c`.
    pub fn college_prefs(&self, c: CollegeId) -> &[StudentId] {
        &self.college_prefs[c]
    }

    /// 1-based rank of `c` in s's list, `None` if unacceptable.
    pub fn student_rank(&self, s: StudentId, c: CollegeId) -> Option<u32> {
        self.student_rank[s][c]
    }

    /// 1-based rank of `s` in c's list, `None` if unacceptable.
    pub fn college_rank(&self, c: CollegeId, s: StudentId) -> Option<u32> {
        self.college_rank[c][s]
    }

    /// Whether the contract (s, c) exists, i.e. `c` lists `s`.
    pub fn is_contract(&self, s: StudentId, c: CollegeId) -> bool {
        self.college_rank[c][s].is_some()
    }

    /// Whether `s` finds `c` acceptable.
    pub fn acceptable(&self, s: StudentId, c: CollegeId) -> bool {
        self.student_rank[s][c].is_some()
    }

    /// Number of contracts naming college `c`.
    pub fn college_contract_count(&self, c: CollegeId) -> u32 {
        self.college_prefs[c].len() as u32
    }

    /// Strict preference of `s` between two outcomes; `None` is being
    /// unassigned. An unacceptable college ranks below unassignment.
    pub fn student_prefers(&self, s: StudentId, a: Option<CollegeId>, b: Option<CollegeId>) -> bool {
        self.outcome_utility(s, a) > self.outcome_utility(s, b)
    }

    fn outcome_utility(&self, s: StudentId, o: Option<CollegeId>) -> i64 {
        match o {
            None => 0,
            Some(c) => match self.student_rank[s][c] {
                Some(r) => 1 + self.m() as i64 - r as i64,
                None => -1,
            },
        }
    }

    pub fn feasibility(&self) -> &Feasibility {
        &self.feas
    }

    pub fn spec(&self) -> &FeasibilitySpec {
        self.feas.spec()
    }

    pub fn is_feasible(&self, v: &AssignVec) -> bool {
        self.feas.is_feasible(v)
    }

    /// Copy of the market with student `s` reporting a different list.
    /// The feasibility memo is shared; constraints are unchanged.
    pub fn with_student_prefs(&self, s: StudentId, prefs: Vec<CollegeId>) -> Result<Market, BuildError> {
        let mut market = self.clone();
        let row = rank_row(&prefs, self.m(), &format!("student_prefs[{s}]"))?;
        market.student_prefs[s] = prefs;
        market.student_rank[s] = row;
        Ok(market)
    }

    /// Copy with a different feasibility family over the same colleges.
    pub fn with_spec(&self, spec: FeasibilitySpec) -> Result<Market, BuildError> {
        let mut market = self.clone();
        market.feas = Feasibility::new(spec, self.m())?;
        Ok(market)
    }
}

fn check_unique(names: &[String], path: &str) -> Result<(), BuildError> {
    let mut seen = HashMap::new();
    for name in names {
        if seen.insert(name.clone(), ()).is_some() {
            return Err(BuildError::DuplicateId {
                path: path.into(),
                name: name.clone(),
            });
        }
    }
    Ok(())
}

fn rank_row(prefs: &[usize], bound: usize, path: &str) -> Result<Vec<Option<u32>>, BuildError> {
    let mut row = vec![None; bound];
    for (pos, &x) in prefs.iter().enumerate() {
        if x >= bound {
            return Err(BuildError::IndexOutOfRange {
                path: path.into(),
                index: x,
            });
        }
        if row[x].is_some() {
            return Err(BuildError::RepeatedEntry {
                path: path.into(),
                name: x.to_string(),
            });
        }
        row[x] = Some(pos as u32 + 1);
    }
    Ok(row)
}

fn rank_table(prefs: &[Vec<usize>], bound: usize, path: &str) -> Result<Vec<Vec<Option<u32>>>, BuildError> {
    prefs
        .iter()
        .enumerate()
        .map(|(i, row)| rank_row(row, bound, &format!("{path}[{i}]")))
        .collect()
}

/// A matching: each student is assigned to at most one college, each assigned
/// pair is a contract acceptable to the student.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matching {
    assignment: Vec<Option<CollegeId>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("assignment length {got}, market has {want} students")]
    WrongLength { got: usize, want: usize },
    #[error("assignment.{student}: unknown college \"{college}\"")]
    UnknownCollege { student: String, college: String },
    #[error("assignment: unknown student \"{student}\"")]
    UnknownStudent { student: String },
    #[error("assignment.{student}: no contract with \"{college}\"")]
    NotAContract { student: String, college: String },
    #[error("assignment.{student}: \"{college}\" is not acceptable to the student")]
    Unacceptable { student: String, college: String },
}

impl Matching {
    pub fn new(market: &Market, assignment: Vec<Option<CollegeId>>) -> Result<Matching, MatchingError> {
        if assignment.len() != market.n() {
            return Err(MatchingError::WrongLength {
                got: assignment.len(),
                want: market.n(),
            });
        }
        for (s, &a) in assignment.iter().enumerate() {
            if let Some(c) = a {
                if c >= market.m() {
                    return Err(MatchingError::UnknownCollege {
                        student: market.student_name(s).into(),
                        college: c.to_string(),
                    });
                }
                if !market.is_contract(s, c) {
                    return Err(MatchingError::NotAContract {
                        student: market.student_name(s).into(),
                        college: market.college_name(c).into(),
                    });
                }
                if !market.acceptable(s, c) {
                    return Err(MatchingError::Unacceptable {
                        student: market.student_name(s).into(),
                        college: market.college_name(c).into(),
                    });
                }
            }
        }
        Ok(Matching { assignment })
    }

    pub fn empty(n: usize) -> Matching {
        Matching {
            assignment: vec![None; n],
        }
    }

    pub fn college_of(&self, s: StudentId) -> Option<CollegeId> {
        self.assignment[s]
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn assigned_count(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_some()).count()
    }

    pub fn is_empty_matching(&self) -> bool {
        self.assignment.iter().all(|a| a.is_none())
    }

    /// Assigned (student, college) pairs in student order.
    pub fn pairs(&self) -> impl Iterator<Item = (StudentId, CollegeId)> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(s, a)| a.map(|c| (s, c)))
    }

    /// Students assigned to each college, in student order.
    pub fn occupants(&self, m: usize) -> Vec<Vec<StudentId>> {
        let mut by_college = vec![Vec::new(); m];
        for (s, c) in self.pairs() {
            by_college[c].push(s);
        }
        by_college
    }

    /// Occupancy vector.
    pub fn nu(&self, market: &Market) -> AssignVec {
        let mut v = AssignVec::zero(market.m());
        for (_, c) in self.pairs() {
            v.0[c] += 1;
        }
        v
    }

    pub fn is_feasible(&self, market: &Market) -> bool {
        market.is_feasible(&self.nu(market))
    }
}

/// Per-student Borda scores and their mean. An assignment to the i-th ranked
/// college scores m - i + 1; unassigned students score 0.
pub fn borda_scores(y: &Matching, market: &Market) -> (Vec<u32>, f64) {
    let m = market.m() as u32;
    let scores: Vec<u32> = (0..market.n())
        .map(|s| match y.college_of(s) {
            Some(c) => m - market.student_rank(s, c).expect("assigned college must be ranked") + 1,
            None => 0,
        })
        .collect();
    let mean = scores.iter().map(|&x| x as f64).sum::<f64>() / scores.len() as f64;
    (scores, mean)
}

/// Instance document. Preference maps may omit entities, which then have
/// empty lists; every key must name a known entity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub students: Vec<String>,
    pub colleges: Vec<String>,
    pub student_prefs: IndexMap<String, Vec<String>>,
    pub college_prefs: IndexMap<String, Vec<String>>,
    pub constraints: ConstraintDoc,
}

/// Constraint block of an instance document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintDoc {
    MaxQuotas { q: Vec<u32> },
    UnionBoxes { tops: Vec<Vec<u32>> },
    UnitTotal { total: u64 },
    Resources { resources: Vec<ResourceDoc> },
    Explicit { vectors: Vec<Vec<u32>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResourceDoc {
    pub capacity: u32,
    pub compatible: Vec<String>,
}

/// Validate an instance document and build the market.
pub fn build_market(doc: &InstanceDoc) -> Result<Market, BuildError> {
    if doc.students.is_empty() {
        return Err(BuildError::NoStudents);
    }
    if doc.colleges.is_empty() {
        return Err(BuildError::NoColleges);
    }
    check_unique(&doc.students, "students")?;
    check_unique(&doc.colleges, "colleges")?;
    let student_ids: HashMap<&str, usize> = doc
        .students
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let college_ids: HashMap<&str, usize> = doc
        .colleges
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();

    let mut student_prefs = vec![Vec::new(); doc.students.len()];
    for (name, list) in &doc.student_prefs {
        let &s = student_ids
            .get(name.as_str())
            .ok_or_else(|| BuildError::UnknownStudent {
                path: "student_prefs".into(),
                name: name.clone(),
            })?;
        student_prefs[s] = resolve_list(list, &college_ids, &format!("student_prefs.{name}"), false)?;
    }
    let mut college_prefs = vec![Vec::new(); doc.colleges.len()];
    for (name, list) in &doc.college_prefs {
        let &c = college_ids
            .get(name.as_str())
            .ok_or_else(|| BuildError::UnknownCollege {
                path: "college_prefs".into(),
                name: name.clone(),
            })?;
        college_prefs[c] = resolve_list(list, &student_ids, &format!("college_prefs.{name}"), true)?;
    }

    let spec = constraint_from_doc(&doc.constraints, &college_ids, doc.colleges.len())?;
    Market::from_parts(
        doc.students.clone(),
        doc.colleges.clone(),
        student_prefs,
        college_prefs,
        spec,
    )
}

fn resolve_list(
    list: &[String],
    ids: &HashMap<&str, usize>,
    path: &str,
    entries_are_students: bool,
) -> Result<Vec<usize>, BuildError> {
    let mut out = Vec::with_capacity(list.len());
    let mut seen = vec![false; ids.len()];
    for name in list {
        let &i = ids.get(name.as_str()).ok_or_else(|| {
            if entries_are_students {
                BuildError::UnknownStudent {
                    path: path.into(),
                    name: name.clone(),
                }
            } else {
                BuildError::UnknownCollege {
                    path: path.into(),
                    name: name.clone(),
                }
            }
        })?;
        if seen[i] {
            return Err(BuildError::RepeatedEntry {
                path: path.into(),
                name: name.clone(),
            });
        }
        seen[i] = true;
        out.push(i);
    }
    Ok(out)
}

fn constraint_from_doc(
    doc: &ConstraintDoc,
    college_ids: &HashMap<&str, usize>,
    m: usize,
) -> Result<FeasibilitySpec, BuildError> {
    let spec = match doc {
        ConstraintDoc::MaxQuotas { q } => FeasibilitySpec::MaxQuotas { q: q.clone() },
        ConstraintDoc::UnionBoxes { tops } => FeasibilitySpec::UnionBoxes {
            tops: tops.iter().map(|t| AssignVec(t.clone())).collect(),
        },
        ConstraintDoc::UnitTotal { total } => FeasibilitySpec::UnitTotal { total: *total },
        ConstraintDoc::Resources { resources } => {
            let mut out = Vec::with_capacity(resources.len());
            for (i, r) in resources.iter().enumerate() {
                let mut compatible = Vec::with_capacity(r.compatible.len());
                let path = format!("constraints.resources[{i}].compatible");
                let mut seen = vec![false; m];
                for name in &r.compatible {
                    let &c = college_ids
                        .get(name.as_str())
                        .ok_or_else(|| BuildError::UnknownCollege {
                            path: path.clone(),
                            name: name.clone(),
                        })?;
                    if seen[c] {
                        return Err(BuildError::RepeatedEntry {
                            path: path.clone(),
                            name: name.clone(),
                        });
                    }
                    seen[c] = true;
                    compatible.push(c);
                }
                out.push(Resource {
                    capacity: r.capacity,
                    compatible,
                });
            }
            FeasibilitySpec::Resources { resources: out }
        }
        ConstraintDoc::Explicit { vectors } => FeasibilitySpec::Explicit {
            vectors: vectors.iter().map(|v| AssignVec(v.clone())).collect(),
        },
    };
    Ok(spec)
}

/// Emit the instance document for a market.
pub fn market_to_doc(market: &Market) -> InstanceDoc {
    let name_of_college = |&c: &CollegeId| market.college_name(c).to_string();
    let name_of_student = |&s: &StudentId| market.student_name(s).to_string();
    let student_prefs = (0..market.n())
        .map(|s| {
            (
                market.student_name(s).to_string(),
                market.student_prefs(s).iter().map(name_of_college).collect(),
            )
        })
        .collect();
    let college_prefs = (0..market.m())
        .map(|c| {
            (
                market.college_name(c).to_string(),
                market.college_prefs(c).iter().map(name_of_student).collect(),
            )
        })
        .collect();
    let constraints = match market.spec() {
        FeasibilitySpec::MaxQuotas { q } => ConstraintDoc::MaxQuotas { q: q.clone() },
        FeasibilitySpec::UnionBoxes { tops } => ConstraintDoc::UnionBoxes {
            tops: tops.iter().map(|t| t.0.clone()).collect(),
        },
        FeasibilitySpec::UnitTotal { total } => ConstraintDoc::UnitTotal { total: *total },
        FeasibilitySpec::Resources { resources } => ConstraintDoc::Resources {
            resources: resources
                .iter()
                .map(|r| ResourceDoc {
                    capacity: r.capacity,
                    compatible: r.compatible.iter().map(name_of_college).collect(),
                })
                .collect(),
        },
        FeasibilitySpec::Explicit { vectors } => ConstraintDoc::Explicit {
            vectors: vectors.iter().map(|v| v.0.clone()).collect(),
        },
    };
    InstanceDoc {
        students: market.student_names().to_vec(),
        colleges: market.college_names().to_vec(),
        student_prefs,
        college_prefs,
        constraints,
    }
}

/// Matching document: every student mapped to a college name or null.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatchingDoc {
    pub assignment: IndexMap<String, Option<String>>,
}

/// Parse a matching document against a market. Students absent from the map
/// are unassigned.
pub fn matching_from_doc(market: &Market, doc: &MatchingDoc) -> Result<Matching, MatchingError> {
    let student_ids: HashMap<&str, usize> = market
        .student_names()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let college_ids: HashMap<&str, usize> = market
        .college_names()
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    let mut assignment = vec![None; market.n()];
    for (name, college) in &doc.assignment {
        let &s = student_ids
            .get(name.as_str())
            .ok_or_else(|| MatchingError::UnknownStudent {
                student: name.clone(),
            })?;
        if let Some(cname) = college {
            let &c = college_ids
                .get(cname.as_str())
                .ok_or_else(|| MatchingError::UnknownCollege {
                    student: name.clone(),
                    college: cname.clone(),
                })?;
            assignment[s] = Some(c);
        }
    }
    Matching::new(market, assignment)
}

/// Emit the matching document, listing every student explicitly.
pub fn matching_to_doc(market: &Market, y: &Matching) -> MatchingDoc {
    let assignment = (0..market.n())
        .map(|s| {
            (
                market.student_name(s).to_string(),
                y.college_of(s).map(|c| market.college_name(c).to_string()),
            )
        })
        .collect();
    MatchingDoc { assignment }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::gen;

    #[test]
    fn assign_vec_ops() {
        let a = AssignVec(vec![1, 0, 2]);
        let b = AssignVec(vec![1, 1, 1]);
        assert!(!a.dominated_by(&b));
        assert!(AssignVec(vec![1, 0, 1]).dominated_by(&a));
        assert_eq!(a.join(&b), AssignVec(vec![1, 1, 2]));
        assert_eq!(a.total(), 3);
        assert_eq!(AssignVec::unit(3, 1), AssignVec(vec![0, 1, 0]));
        assert_eq!(a.plus_unit(1), AssignVec(vec![1, 1, 2]));
        assert_eq!(a.minus_unit(2), AssignVec(vec![1, 0, 1]));
        assert_eq!(a.to_string(), "(1,0,2)");
    }

    #[test]
    fn nu_counts_per_college() {
        let market = gen::example1_market(3).unwrap();
        // s2 at c3, s3 at c1
        let y = Matching::new(&market, vec![None, Some(2), Some(0)]).unwrap();
        assert_eq!(y.nu(&market), AssignVec(vec![1, 0, 1]));
        assert_eq!(y.assigned_count(), 2);
    }

    #[test]
    fn rank_is_one_based() {
        let market = gen::one_seat_market(1).unwrap();
        // c1 lists [s2, s1]
        assert_eq!(market.college_rank(0, 0), Some(2));
        assert_eq!(market.college_rank(0, 1), Some(1));
        // profile 1: s2 lists only c2
        assert_eq!(market.student_rank(1, 0), None);
    }

    #[test]
    fn borda_scores_examples() {
        let market = gen::example1_market(3).unwrap();
        // s1 unassigned, s2 at her 1st choice c3, s3 at her 1st choice c1
        let y = Matching::new(&market, vec![None, Some(2), Some(0)]).unwrap();
        let (scores, mean) = borda_scores(&y, &market);
        assert_eq!(scores, vec![0, 3, 3]);
        assert!((mean - 2.0).abs() < 1e-12);
        // second choice with m=3 scores 2
        let y2 = Matching::new(&market, vec![None, None, Some(1)]).unwrap();
        assert_eq!(borda_scores(&y2, &market).0[2], 2);
    }

    #[test]
    fn matching_rejects_non_contract_and_unacceptable() {
        let market = gen::one_seat_market(1).unwrap();
        // profile 1: s2 lists only c2, so c1 is unacceptable to s2
        let err = Matching::new(&market, vec![None, Some(0)]).unwrap_err();
        assert_eq!(
            err,
            MatchingError::Unacceptable {
                student: "s2".into(),
                college: "c1".into(),
            }
        );
        // a student missing from a college's list has no contract there
        let market = Market::from_parts(
            vec!["s1".into()],
            vec!["c1".into()],
            vec![vec![0]],
            vec![vec![]],
            FeasibilitySpec::MaxQuotas { q: vec![1] },
        )
        .unwrap();
        let err = Matching::new(&market, vec![Some(0)]).unwrap_err();
        assert!(matches!(err, MatchingError::NotAContract { .. }));
    }

    fn sample_doc() -> InstanceDoc {
        serde_json::from_str(
            r#"{
              "students": ["s1", "s2"],
              "colleges": ["c1", "c2"],
              "student_prefs": {"s1": ["c1", "c2"], "s2": ["c2"]},
              "college_prefs": {"c1": ["s2", "s1"], "c2": ["s1", "s2"]},
              "constraints": {"kind": "union_boxes", "tops": [[1, 0], [0, 1]]}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn build_market_from_doc() {
        let market = build_market(&sample_doc()).unwrap();
        assert_eq!(market.n(), 2);
        assert_eq!(market.m(), 2);
        assert_eq!(market.student_prefs(0), &[0, 1]);
        assert_eq!(market.college_prefs(0), &[1, 0]);
        assert!(market.is_contract(0, 1));
        assert!(!market.is_feasible(&AssignVec(vec![1, 1])));
    }

    #[test]
    fn doc_round_trip() {
        let market = build_market(&sample_doc()).unwrap();
        let doc = market_to_doc(&market);
        let json = serde_json::to_string(&doc).unwrap();
        let reparsed: InstanceDoc = serde_json::from_str(&json).unwrap();
        let market2 = build_market(&reparsed).unwrap();
        assert_eq!(market.student_prefs(1), market2.student_prefs(1));
        assert_eq!(market.college_prefs(1), market2.college_prefs(1));
    }

    #[test]
    fn build_errors_carry_field_paths() {
        let mut doc = sample_doc();
        doc.students = vec!["s1".into(), "s1".into()];
        assert_eq!(
            build_market(&doc).unwrap_err().to_string(),
            "students: duplicate identifier \"s1\""
        );

        let mut doc = sample_doc();
        doc.college_prefs.insert("c1".into(), vec!["s9".into()]);
        assert_eq!(
            build_market(&doc).unwrap_err().to_string(),
            "college_prefs.c1: unknown student \"s9\""
        );

        let mut doc = sample_doc();
        doc.student_prefs.insert("s1".into(), vec!["c1".into(), "c1".into()]);
        assert_eq!(
            build_market(&doc).unwrap_err().to_string(),
            "student_prefs.s1: \"c1\" listed more than once"
        );

        let mut doc = sample_doc();
        doc.constraints = ConstraintDoc::MaxQuotas { q: vec![1] };
        assert!(build_market(&doc)
            .unwrap_err()
            .to_string()
            .contains("length 1"));

        let mut doc = sample_doc();
        doc.constraints = ConstraintDoc::Resources {
            resources: vec![ResourceDoc {
                capacity: 1,
                compatible: vec!["c9".into()],
            }],
        };
        assert_eq!(
            build_market(&doc).unwrap_err().to_string(),
            "constraints.resources[0].compatible: unknown college \"c9\""
        );

        let mut doc = sample_doc();
        doc.students.clear();
        doc.student_prefs.clear();
        assert_eq!(build_market(&doc).unwrap_err(), BuildError::NoStudents);
    }

    #[test]
    fn explicit_requires_zero_vector() {
        let mut doc = sample_doc();
        doc.constraints = ConstraintDoc::Explicit {
            vectors: vec![vec![1, 0]],
        };
        assert!(build_market(&doc)
            .unwrap_err()
            .to_string()
            .contains("zero vector"));
    }

    #[test]
    fn matching_doc_round_trip() {
        let market = build_market(&sample_doc()).unwrap();
        let doc: MatchingDoc =
            serde_json::from_str(r#"{"assignment": {"s1": "c1", "s2": null}}"#).unwrap();
        let y = matching_from_doc(&market, &doc).unwrap();
        assert_eq!(y.college_of(0), Some(0));
        assert_eq!(y.college_of(1), None);
        let out = matching_to_doc(&market, &y);
        assert_eq!(out.assignment.len(), 2);
        assert_eq!(out.assignment["s1"], Some("c1".to_string()));
        assert_eq!(out.assignment["s2"], None);

        let bad: MatchingDoc =
            serde_json::from_str(r#"{"assignment": {"s9": "c1"}}"#).unwrap();
        assert!(matches!(
            matching_from_doc(&market, &bad),
            Err(MatchingError::UnknownStudent { .. })
        ));
    }

    #[test]
    fn misreport_copy_shares_constraints() {
        let market = build_market(&sample_doc()).unwrap();
        let alt = market.with_student_prefs(1, vec![1, 0]).unwrap();
        assert_eq!(alt.student_prefs(1), &[1, 0]);
        assert_eq!(alt.student_rank(1, 0), Some(2));
        assert_eq!(market.student_prefs(1), &[1]);
        assert!(!alt.is_feasible(&AssignVec(vec![1, 1])));
    }
}
