//! Feasibility families over occupancy vectors and structural checks.
//!
//! A family is the set F of occupancy vectors the constraint accepts. All
//! built-in kinds are downward closed by construction except `Explicit`,
//! which is exactly the listed set; [`Feasibility::check_hereditary`]
//! verifies closure and [`Feasibility::check_mnatural_convex`] verifies the
//! exchange property that deferred acceptance needs.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AssignVec, CollegeId};

/// One resource: its capacity can serve any single compatible college.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resource {
    pub capacity: u32,
    pub compatible: Vec<CollegeId>,
}

/// Parametric constraint kinds. `UnitTotal` caps every college at one seat
/// and the sum at `total`; `Resources` accepts a vector when whole resources
/// can be assigned, one college each, covering every college's occupancy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeasibilitySpec {
    MaxQuotas { q: Vec<u32> },
    UnionBoxes { tops: Vec<AssignVec> },
    UnitTotal { total: u64 },
    Resources { resources: Vec<Resource> },
    Explicit { vectors: Vec<AssignVec> },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("{path}: length {got}, expected number of colleges {want}")]
    WrongLength { path: String, got: usize, want: usize },
    #[error("constraints.tops: at least one box required")]
    EmptyUnion,
    #[error("constraints.vectors: zero vector required")]
    MissingZero,
    #[error("constraints.resources[{resource}].compatible: college index {index} out of range")]
    CompatOutOfRange { resource: usize, index: usize },
    #[error("enumeration space holds {size} candidates, over the limit {limit}")]
    EnumerationLimit { size: u128, limit: u64 },
    #[error("lower bound {lower} is not feasible")]
    InfeasibleLower { lower: String },
}

/// A validated feasibility family bound to a number of colleges, with the
/// memoized solver state for the `Resources` kind. Clones share the memo.
#[derive(Clone, Debug)]
pub struct Feasibility {
    spec: FeasibilitySpec,
    m: usize,
    explicit_set: Option<Arc<HashSet<AssignVec>>>,
    solver: Option<Arc<ResourceSolver>>,
}

/// Default cap on the number of vectors [`Feasibility::enumerate_feasible`]
/// will scan.
pub const DEFAULT_ENUM_LIMIT: u64 = 10_000_000;

impl Feasibility {
    pub fn new(spec: FeasibilitySpec, m: usize) -> Result<Feasibility, ConstraintError> {
        let mut explicit_set = None;
        let mut solver = None;
        match &spec {
            FeasibilitySpec::MaxQuotas { q } => {
                if q.len() != m {
                    return Err(ConstraintError::WrongLength {
                        path: "constraints.q".into(),
                        got: q.len(),
                        want: m,
                    });
                }
            }
            FeasibilitySpec::UnionBoxes { tops } => {
                if tops.is_empty() {
                    return Err(ConstraintError::EmptyUnion);
                }
                for (i, t) in tops.iter().enumerate() {
                    if t.len() != m {
                        return Err(ConstraintError::WrongLength {
                            path: format!("constraints.tops[{i}]"),
                            got: t.len(),
                            want: m,
                        });
                    }
                }
            }
            FeasibilitySpec::UnitTotal { .. } => {}
            FeasibilitySpec::Resources { resources } => {
                for (i, r) in resources.iter().enumerate() {
                    if let Some(&c) = r.compatible.iter().find(|&&c| c >= m) {
                        return Err(ConstraintError::CompatOutOfRange {
                            resource: i,
                            index: c,
                        });
                    }
                }
                solver = Some(Arc::new(ResourceSolver::new(resources, m)));
            }
            FeasibilitySpec::Explicit { vectors } => {
                for (i, v) in vectors.iter().enumerate() {
                    if v.len() != m {
                        return Err(ConstraintError::WrongLength {
                            path: format!("constraints.vectors[{i}]"),
                            got: v.len(),
                            want: m,
                        });
                    }
                }
                if !vectors.iter().any(|v| v.is_zero()) {
                    return Err(ConstraintError::MissingZero);
                }
                explicit_set = Some(Arc::new(vectors.iter().cloned().collect()));
            }
        }
        Ok(Feasibility {
            spec,
            m,
            explicit_set,
            solver,
        })
    }

    pub fn spec(&self) -> &FeasibilitySpec {
        &self.spec
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_feasible(&self, v: &AssignVec) -> bool {
        debug_assert_eq!(v.len(), self.m);
        match &self.spec {
            FeasibilitySpec::MaxQuotas { q } => v.0.iter().zip(q).all(|(a, b)| a <= b),
            FeasibilitySpec::UnionBoxes { tops } => tops.iter().any(|t| v.dominated_by(t)),
            FeasibilitySpec::UnitTotal { total } => {
                v.0.iter().all(|&x| x <= 1) && v.total() <= *total
            }
            FeasibilitySpec::Resources { .. } => {
                self.solver.as_ref().expect("solver built for resources").covers(v)
            }
            FeasibilitySpec::Explicit { .. } => self
                .explicit_set
                .as_ref()
                .expect("set built for explicit")
                .contains(v),
        }
    }

    /// Componentwise bound outside which no vector of the family can sit.
    pub fn natural_cap(&self) -> AssignVec {
        match &self.spec {
            FeasibilitySpec::MaxQuotas { q } => AssignVec(q.clone()),
            FeasibilitySpec::UnionBoxes { tops } => tops
                .iter()
                .fold(AssignVec::zero(self.m), |acc, t| acc.join(t)),
            FeasibilitySpec::UnitTotal { .. } => AssignVec(vec![1; self.m]),
            FeasibilitySpec::Resources { resources } => {
                let mut cap = vec![0u64; self.m];
                for r in resources {
                    for &c in &r.compatible {
                        cap[c] += r.capacity as u64;
                    }
                }
                AssignVec(cap.into_iter().map(|x| x.min(u32::MAX as u64) as u32).collect())
            }
            FeasibilitySpec::Explicit { vectors } => vectors
                .iter()
                .fold(AssignVec::zero(self.m), |acc, v| acc.join(v)),
        }
    }

    /// All feasible vectors inside the box `0..=cap`, ascending lexicographic.
    /// Fails when the box holds more than `limit` vectors.
    pub fn enumerate_feasible(
        &self,
        cap: &AssignVec,
        limit: u64,
    ) -> Result<Vec<AssignVec>, ConstraintError> {
        let size: u128 = cap.0.iter().map(|&c| c as u128 + 1).product();
        if size > limit as u128 {
            return Err(ConstraintError::EnumerationLimit { size, limit });
        }
        let mut out = Vec::new();
        let mut v = AssignVec::zero(self.m);
        loop {
            if self.is_feasible(&v) {
                out.push(v.clone());
            }
            // odometer with the last coordinate fastest
            let mut i = self.m;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if v.0[i] < cap.0[i] {
                    v.0[i] += 1;
                    v.0[i + 1..].iter_mut().for_each(|x| *x = 0);
                    break;
                }
            }
        }
    }

    /// Downward closure inside the box `0..=cap`: the zero vector is feasible
    /// and every single decrement of a feasible vector stays feasible. On
    /// failure the witness is the first offender in descending lexicographic
    /// scan order, paired with its missing subvector.
    pub fn check_hereditary(
        &self,
        cap: &AssignVec,
        limit: u64,
    ) -> Result<HereditaryCheck, ConstraintError> {
        let feasible = self.enumerate_feasible(cap, limit)?;
        let set: HashSet<&AssignVec> = feasible.iter().collect();
        for v in feasible.iter().rev() {
            for i in (0..self.m).rev() {
                if v.0[i] > 0 {
                    let sub = v.minus_unit(i);
                    if !set.contains(&sub) {
                        return Ok(HereditaryCheck {
                            holds: false,
                            witness: Some((v.clone(), sub)),
                        });
                    }
                }
            }
        }
        Ok(HereditaryCheck {
            holds: !feasible.is_empty() && feasible[0].is_zero(),
            witness: None,
        })
    }

    /// Exchange property inside the box `0..=cap`: for feasible v, w and any
    /// i with v_i > w_i there is j, either none or with v_j < w_j, such that
    /// moving a seat from i (to j) keeps both vectors feasible. The witness
    /// is the first failing (v, w, i) in descending lexicographic scan order.
    pub fn check_mnatural_convex(
        &self,
        cap: &AssignVec,
        limit: u64,
    ) -> Result<MConvexCheck, ConstraintError> {
        let feasible = self.enumerate_feasible(cap, limit)?;
        let set: HashSet<&AssignVec> = feasible.iter().collect();
        for v in feasible.iter().rev() {
            for w in feasible.iter().rev() {
                for i in 0..self.m {
                    if v.0[i] <= w.0[i] {
                        continue;
                    }
                    if !exchange_possible(v, w, i, &set) {
                        return Ok(MConvexCheck {
                            holds: false,
                            witness: Some((v.clone(), w.clone(), i)),
                        });
                    }
                }
            }
        }
        Ok(MConvexCheck {
            holds: true,
            witness: None,
        })
    }

    /// Restriction to at most one seat overall: keeps the zero vector and the
    /// feasible unit vectors.
    pub fn unit_restriction(&self) -> FeasibilitySpec {
        let mut vectors = vec![AssignVec::zero(self.m)];
        for c in 0..self.m {
            let unit = AssignVec::unit(self.m, c);
            if self.is_feasible(&unit) {
                vectors.push(unit);
            }
        }
        FeasibilitySpec::Explicit { vectors }
    }

    /// Maximal feasible vector above `lower` by coordinate ascent, repeatedly
    /// incrementing the lowest-index coordinate whose increment stays
    /// feasible.
    pub fn maximal_feasible_above(&self, lower: &AssignVec) -> Result<AssignVec, ConstraintError> {
        if !self.is_feasible(lower) {
            return Err(ConstraintError::InfeasibleLower {
                lower: lower.to_string(),
            });
        }
        let mut v = lower.clone();
        'ascent: loop {
            for i in 0..self.m {
                let up = v.plus_unit(i);
                if self.is_feasible(&up) {
                    v = up;
                    continue 'ascent;
                }
            }
            return Ok(v);
        }
    }
}

/// Whether one exchange step repairs the pair (v, w) at coordinate i.
fn exchange_possible(v: &AssignVec, w: &AssignVec, i: usize, set: &HashSet<&AssignVec>) -> bool {
    let v_down = v.minus_unit(i);
    let w_up = w.plus_unit(i);
    if set.contains(&v_down) && set.contains(&w_up) {
        return true;
    }
    for j in 0..v.len() {
        if v.0[j] < w.0[j]
            && set.contains(&v_down.plus_unit(j))
            && set.contains(&w_up.minus_unit(j))
        {
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HereditaryCheck {
    pub holds: bool,
    /// (feasible vector, its infeasible subvector)
    pub witness: Option<(AssignVec, AssignVec)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MConvexCheck {
    pub holds: bool,
    /// (v, w, college index i) with no valid exchange
    pub witness: Option<(AssignVec, AssignVec, usize)>,
}

/// Backtracking solver deciding whether whole resources can be assigned to
/// compatible colleges so that every college's demand is covered. Resources
/// are tried in descending capacity order; results are memoized per
/// (resource index, residual demand), and query-level verdicts are kept in
/// dominance lists, since covering a demand also covers anything below it.
///
/// Before branching, each node is screened two ways: a greedy assignment
/// that can certify yes, and a max-flow bound on the divisible relaxation
/// that can certify no. Splitting resources can only help, so a demand the
/// relaxation cannot ship is unreachable for whole resources too. The flow
/// bound is what keeps the search from drowning in demands that overload a
/// group of colleges without overloading any single one.
#[derive(Debug)]
struct ResourceSolver {
    caps: Vec<u32>,
    compat: Vec<Vec<usize>>,
    /// suffix[i][c]: total capacity of resources i.. compatible with c
    suffix: Vec<Vec<u64>>,
    suffix_total: Vec<u64>,
    /// suffix_cnt[i][c][q]: resources i.. compatible with c of capacity q+1
    suffix_cnt: Vec<Vec<[u32; 3]>>,
    /// largest capacity, for sizing the waste bound
    max_cap: u32,
    /// smallest index from which all remaining capacities are equal
    uniform_from: usize,
    /// capacity classes, largest first, for the profile search
    classes: Vec<CapClass>,
    /// class index of each sorted resource, MAX for zero capacity
    class_of: Vec<u32>,
    memo: Mutex<SolverMemo>,
}

/// What the saturating relaxation said about a demand.
enum LpScreen {
    /// an exactly verified witness rules the demand out
    Infeasible,
    /// the relaxation ships everything; class anchors were recorded
    Shipped,
    /// the solve was abandoned, nothing learned
    Unknown,
}

/// Resources of one capacity, seen as a block of interchangeable members.
#[derive(Debug)]
struct CapClass {
    cap: u32,
    /// members occupy caps[lo..hi] in the sorted resource arrays
    lo: usize,
    hi: usize,
    /// how many members are compatible with each college
    compat_cnt: Vec<u32>,
}

/// Node memo entries are capped so a hostile query degrades to slower
/// search instead of unbounded memory growth.
const NODE_MEMO_CAP: usize = 1 << 20;

/// Query-local state for the profile search.
struct ProfileCtx<'a> {
    /// colleges with positive demand, largest first
    cols: Vec<usize>,
    /// demand per position
    need: Vec<u32>,
    /// total demand from each position on
    need_suffix: Vec<u64>,
    /// per class and position: count bounds and the counts chosen so far
    lb: Vec<Vec<u32>>,
    ub: Vec<Vec<u32>>,
    take: Vec<Vec<u32>>,
    /// unassigned members per class
    rem: Vec<u32>,
    /// college id to position, usize::MAX when inactive
    pos: Vec<usize>,
    /// least members of each class every undecided college still needs,
    /// given the members and budget left; refreshed as the search moves
    dyn_lb: Vec<[u32; 3]>,
    /// running totals of the floors and forced overshoot from each
    /// position to the end, valid for the undecided range
    floor_suf: Vec<[u64; 3]>,
    wneed_suf: Vec<u64>,
    /// rounded relaxation counts per college and class, empty when absent
    anchor: Vec<[u32; 3]>,
    /// per-depth buffers holding the value order
    ord: Vec<Vec<u32>>,
    want: Vec<u32>,
    /// floor refresh outcomes by (position, members left, budget); the
    /// refresh reads nothing else, and colleges splitting the same class
    /// totals differently land on the same key
    fd_seen: &'a mut HashMap<(u32, [u32; 3], u64), Option<u64>>,
    flow: &'a mut MaxFlow,
    mcf: &'a mut MinCostFlow,
    nodes: u64,
}

#[derive(Debug, Default)]
struct SolverMemo {
    feasible: Vec<AssignVec>,
    infeasible: Vec<AssignVec>,
    nodes: HashMap<(u32, AssignVec), bool>,
    flow: MaxFlow,
    mcf: MinCostFlow,
    scratch: Vec<u32>,
    lp: Vec<f64>,
    anchor: Vec<[u32; 3]>,
    fd_seen: HashMap<(u32, [u32; 3], u64), Option<u64>>,
    stat_nodes: u64,
    stat_calls: u64,
    stat_frontier: u64,
    stat_greedy: u64,
    stat_flowno: u64,
    stat_lpno: u64,
    stat_search: u64,
    stat_node_total: u64,
}

impl ResourceSolver {
    fn new(resources: &[Resource], m: usize) -> ResourceSolver {
        let mut order: Vec<usize> = (0..resources.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(resources[i].capacity));
        let caps: Vec<u32> = order.iter().map(|&i| resources[i].capacity).collect();
        let compat: Vec<Vec<usize>> = order
            .iter()
            .map(|&i| resources[i].compatible.clone())
            .collect();
        let mut suffix = vec![vec![0u64; m]; caps.len() + 1];
        let mut suffix_total = vec![0u64; caps.len() + 1];
        for i in (0..caps.len()).rev() {
            suffix[i] = suffix[i + 1].clone();
            for &c in &compat[i] {
                suffix[i][c] += caps[i] as u64;
            }
            suffix_total[i] = suffix_total[i + 1] + caps[i] as u64;
        }
        let max_cap = caps.first().copied().unwrap_or(0);
        // the waste bound needs per-capacity counts; only worth tabulating
        // for the small capacities it knows how to reason about
        let suffix_cnt = if max_cap <= 3 {
            let mut cnt = vec![vec![[0u32; 3]; m]; caps.len() + 1];
            for i in (0..caps.len()).rev() {
                cnt[i] = cnt[i + 1].clone();
                if caps[i] == 0 {
                    continue;
                }
                for &c in &compat[i] {
                    cnt[i][c][(caps[i] - 1) as usize] += 1;
                }
            }
            cnt
        } else {
            Vec::new()
        };
        let uniform_from = match caps.last() {
            Some(&low) => caps.partition_point(|&q| q != low),
            None => 0,
        };
        let mut classes = Vec::new();
        let mut class_of = vec![u32::MAX; caps.len()];
        let mut i = 0;
        while i < caps.len() {
            let q = caps[i];
            let mut j = i + 1;
            while j < caps.len() && caps[j] == q {
                j += 1;
            }
            if q > 0 {
                let mut cnt = vec![0u32; m];
                for r in i..j {
                    class_of[r] = classes.len() as u32;
                    for &c in &compat[r] {
                        cnt[c] += 1;
                    }
                }
                classes.push(CapClass { cap: q, lo: i, hi: j, compat_cnt: cnt });
            }
            i = j;
        }
        ResourceSolver {
            caps,
            compat,
            suffix,
            suffix_total,
            suffix_cnt,
            max_cap,
            uniform_from,
            classes,
            class_of,
            memo: Mutex::new(SolverMemo::default()),
        }
    }

    fn covers(&self, demand: &AssignVec) -> bool {
        if demand.is_zero() {
            return true;
        }
        if demand.0.iter().enumerate().any(|(c, &d)| (d as u64) > self.suffix[0][c]) {
            return false;
        }
        if demand.total() > self.suffix_total[0] {
            return false;
        }
        let mut memo = self.memo.lock().unwrap();
        memo.stat_calls += 1;
        if memo.stat_calls % 20000 == 0 {
            eprintln!(
                "STATS calls={} frontier={} greedy={} flowno={} lpno={} search={} nodes_total={} memo_len={} feas_len={} infeas_len={}",
                memo.stat_calls, memo.stat_frontier, memo.stat_greedy, memo.stat_flowno,
                memo.stat_lpno, memo.stat_search, memo.stat_node_total, memo.nodes.len(),
                memo.feasible.len(), memo.infeasible.len()
            );
        }
        if memo.feasible.iter().any(|f| demand.dominated_by(f)) {
            memo.stat_frontier += 1;
            return true;
        }
        if memo.infeasible.iter().any(|i| i.dominated_by(demand)) {
            memo.stat_frontier += 1;
            return false;
        }
        let memo = &mut *memo;
        memo.anchor.clear();
        let ok = if self.greedy_covers(0, demand, &mut memo.scratch) {
            memo.stat_greedy += 1;
            true
        } else if !self.fractional_covers(0, demand, &mut memo.flow) {
            memo.stat_flowno += 1;
            false
        } else {
            let memo = &mut *memo;
            match self.saturating_screen(demand, &mut memo.lp, &mut memo.anchor) {
                LpScreen::Infeasible => {
                    memo.stat_lpno += 1;
                    false
                }
                _ => {
                    memo.stat_search += 1;
                    memo.stat_nodes = 0;
                    let t0 = std::time::Instant::now();
                    let r = if self.max_cap <= 3 && !self.classes.is_empty() {
                        self.count_cover(demand, memo)
                    } else {
                        self.search(0, demand.clone(), memo)
                    };
                    memo.stat_node_total += memo.stat_nodes;
                    if t0.elapsed().as_millis() > 100 {
                        eprintln!(
                            "SLOW covers: total={} verdict={} nodes={} elapsed={:?} memo_len={}",
                            demand.total(),
                            r,
                            memo.stat_nodes,
                            t0.elapsed(),
                            memo.nodes.len()
                        );
                    }
                    r
                }
            }
        };
        if ok {
            memo.feasible.retain(|f| !f.dominated_by(demand));
            memo.feasible.push(demand.clone());
        } else {
            memo.infeasible.retain(|i| !demand.dominated_by(i));
            memo.infeasible.push(demand.clone());
        }
        ok
    }

    fn search(&self, idx: usize, demand: AssignVec, memo: &mut SolverMemo) -> bool {
        if demand.is_zero() {
            return true;
        }
        if idx == self.caps.len() {
            return false;
        }
        let suffix = &self.suffix[idx];
        if demand.0.iter().enumerate().any(|(c, &d)| (d as u64) > suffix[c]) {
            return false;
        }
        if demand.total() > self.suffix_total[idx] {
            return false;
        }
        let key = (idx as u32, demand);
        if let Some(&hit) = memo.nodes.get(&key) {
            return hit;
        }
        if idx >= self.uniform_from {
            return self.uniform_covers(idx, &key.1, &mut memo.flow);
        }
        if !self.suffix_cnt.is_empty() {
            // whole resources overshoot: a college whose residual no exact
            // subset of capacities can hit forces waste, and the combined
            // waste cannot exceed the capacity slack
            let slack = self.suffix_total[idx] - key.1.total();
            let cnts = &self.suffix_cnt[idx];
            let mut need = 0u64;
            for (c, &d) in key.1 .0.iter().enumerate() {
                if d > 0 {
                    match min_waste(d as u64, &cnts[c]) {
                        Some(w) => need += w,
                        None => return false,
                    }
                    if need > slack {
                        return false;
                    }
                }
            }
        }
        memo.stat_nodes += 1;
        let ok = if self.greedy_covers(idx, &key.1, &mut memo.scratch) {
            true
        } else if !self.fractional_covers(idx, &key.1, &mut memo.flow) {
            false
        } else {
            let demand = key.1.clone();
            // largest residual first: tight packings tend to appear much
            // sooner, and overshoot branches wait their turn
            let mut order: Vec<usize> = self
                .compat[idx]
                .iter()
                .copied()
                .filter(|&c| demand.0[c] > 0)
                .collect();
            order.sort_by_key(|&c| (std::cmp::Reverse(demand.0[c]), c));
            let mut found = false;
            for c in order {
                let mut next = demand.clone();
                next.0[c] = next.0[c].saturating_sub(self.caps[idx]);
                if self.search(idx + 1, next, memo) {
                    found = true;
                    break;
                }
            }
            if !found {
                found = self.search(idx + 1, demand, memo);
            }
            found
        };
        if memo.nodes.len() >= NODE_MEMO_CAP {
            memo.nodes.clear();
        }
        memo.nodes.insert(key, ok);
        ok
    }

    /// Decide coverage by searching per-college count profiles instead of
    /// per-resource assignments. Within one capacity class the members are
    /// interchangeable up to compatibility, which a matching per class
    /// settles exactly, so all that matters is how many of each capacity a
    /// college takes. Complete for capacities up to 3 because a college
    /// never keeps a resource it could drop, which caps its overshoot below
    /// the largest capacity.
    fn count_cover(&self, demand: &AssignVec, memo: &mut SolverMemo) -> bool {
        let m = demand.0.len();
        let kn = self.classes.len();
        let mut cols: Vec<usize> = (0..m).filter(|&c| demand.0[c] > 0).collect();
        cols.sort_by_key(|&c| (std::cmp::Reverse(demand.0[c]), c));
        let need: Vec<u32> = cols.iter().map(|&c| demand.0[c]).collect();
        let mut pos = vec![usize::MAX; m];
        for (ci, &c) in cols.iter().enumerate() {
            pos[c] = ci;
        }
        let mut lb = vec![vec![0u32; cols.len()]; kn];
        let mut ub: Vec<Vec<u32>> = (0..kn)
            .map(|k| cols.iter().map(|&c| self.classes[k].compat_cnt[c]).collect())
            .collect();
        // tighten the bounds to a fixpoint: a college that cannot reach its
        // demand through the other classes must claim members here, and
        // every claim shrinks what is left for the rest
        loop {
            let mut changed = false;
            for k in 0..kn {
                let size = (self.classes[k].hi - self.classes[k].lo) as u32;
                let claimed: u32 = lb[k].iter().sum();
                for ci in 0..cols.len() {
                    let avail = size.saturating_sub(claimed - lb[k][ci]);
                    if ub[k][ci] > avail {
                        ub[k][ci] = avail;
                        changed = true;
                    }
                    let mut rest = 0u32;
                    for j in 0..kn {
                        if j != k {
                            rest += self.classes[j].cap * ub[j][ci];
                        }
                    }
                    let q = self.classes[k].cap;
                    let low = (need[ci].saturating_sub(rest) + q - 1) / q;
                    if low > ub[k][ci] {
                        return false;
                    }
                    if low > lb[k][ci] {
                        lb[k][ci] = low;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // overshoot the bounds already force must fit the capacity slack
        let budget = self.suffix_total[0] - demand.total();
        let mut forced = 0u64;
        for ci in 0..cols.len() {
            let low: u64 = (0..kn)
                .map(|k| self.classes[k].cap as u64 * lb[k][ci] as u64)
                .sum();
            let over = low.saturating_sub(need[ci] as u64);
            if over > 2 {
                return false;
            }
            forced += over;
            if forced > budget {
                return false;
            }
        }
        let rem: Vec<u32> = self
            .classes
            .iter()
            .map(|k| (k.hi - k.lo) as u32)
            .collect();
        let need_suffix = {
            let mut s = vec![0u64; cols.len() + 1];
            for i in (0..cols.len()).rev() {
                s[i] = s[i + 1] + need[i] as u64;
            }
            s
        };
        let mut ctx = ProfileCtx {
            take: vec![vec![0u32; cols.len()]; kn],
            need_suffix,
            dyn_lb: vec![[0u32; 3]; cols.len()],
            floor_suf: vec![[0u64; 3]; cols.len() + 1],
            wneed_suf: vec![0u64; cols.len() + 1],
            anchor: memo.anchor.clone(),
            ord: vec![Vec::new(); cols.len() * kn],
            cols,
            need,
            lb,
            ub,
            rem,
            pos,
            want: Vec::new(),
            flow: &mut memo.flow,
            mcf: &mut memo.mcf,
            nodes: 0,
        };
        // the floors alone must already fit and be matchable
        if !self.fill_dyn(&mut ctx, 0, budget) {
            memo.stat_nodes += ctx.nodes;
            return false;
        }
        for k in 0..kn {
            if !self.class_hall(&mut ctx, k, 0) {
                memo.stat_nodes += ctx.nodes;
                return false;
            }
        }
        let r = self.profile_rec(&mut ctx, 0, budget);
        memo.stat_nodes += ctx.nodes;
        r
    }

    /// Recompute, for every college from `from` on, the least members of
    /// each class it can get away with, given the members and overshoot
    /// budget still available. Fails when some college has no profile
    /// left, when the overshoot the colleges force outruns the budget,
    /// when a class cannot supply its floors, or when the members left
    /// cannot carry the remaining load. Outcomes are remembered per
    /// (position, members left, budget), the whole refresh reads nothing
    /// else, so a repeat skips straight to the remembered verdict.
    fn fill_dyn(&self, ctx: &mut ProfileCtx, from: usize, budget: u64) -> bool {
        let key = (
            from as u32,
            [
                ctx.rem.first().copied().unwrap_or(0),
                ctx.rem.get(1).copied().unwrap_or(0),
                ctx.rem.get(2).copied().unwrap_or(0),
            ],
            budget,
        );
        let cached = ctx.fd_seen.get(&key).copied();
        if let Some(None) = cached {
            return false;
        }
        let hit = matches!(cached, Some(Some(_)));
        let r = self.fill_dyn_raw(ctx, from, budget, cached.flatten());
        if !hit && ctx.fd_seen.len() < NODE_MEMO_CAP {
            ctx.fd_seen.insert(key, r);
        }
        r.is_some()
    }

    /// The floor refresh itself. On success the boost the unit-demand tail
    /// forces onto the overshoot totals comes back, so a later repeat can
    /// apply it without re-solving the routing.
    fn fill_dyn_raw(
        &self,
        ctx: &mut ProfileCtx,
        from: usize,
        budget: u64,
        known_extra: Option<u64>,
    ) -> Option<u64> {
        let kn = ctx.lb.len();
        let wallow = budget.min(2);
        let mut fit = 0u64;
        for k in 0..kn {
            fit += self.classes[k].cap as u64 * ctx.rem[k] as u64;
        }
        let mut floor_sum = [0u64; 3];
        let mut load = 0u64;
        let mut wneed = 0u64;
        for pf in from..ctx.cols.len() {
            let d = ctx.need[pf] as u64;
            let mut cnts = [0u64; 3];
            for k in 0..kn {
                let a = ctx.ub[k][pf].min(ctx.rem[k]);
                cnts[(self.classes[k].cap - 1) as usize] = a as u64;
            }
            let w0 = (0..=wallow)
                .find(|&w| exact_sum(d + w, cnts[0], cnts[1], cnts[2]))?;
            wneed += w0;
            load += d;
            if wneed > budget || load + wneed > fit {
                return None;
            }
            for k in 0..kn {
                let q = self.classes[k].cap as u64;
                let qi = (q - 1) as usize;
                let save = cnts[qi];
                cnts[qi] = 0;
                let mut lbk = u64::MAX;
                't: for t in 0..=save {
                    for w in 0..=wallow {
                        let goal = d + w;
                        if goal >= q * t
                            && exact_sum(goal - q * t, cnts[0], cnts[1], cnts[2])
                        {
                            lbk = t;
                            break 't;
                        }
                    }
                }
                cnts[qi] = save;
                if lbk == u64::MAX {
                    return false;
                }
                ctx.dyn_lb[pf][k] = lbk as u32;
                floor_sum[k] += lbk;
                if floor_sum[k] > ctx.rem[k] as u64 {
                    return false;
                }
            }
            ctx.wneed_suf[pf] = w0;
        }
        for pf in (from..ctx.cols.len()).rev() {
            ctx.wneed_suf[pf] += ctx.wneed_suf[pf + 1];
            for k in 0..kn {
                ctx.floor_suf[pf][k] =
                    ctx.floor_suf[pf + 1][k] + ctx.dyn_lb[pf][k] as u64;
            }
        }
        // the unit-demand tail adds overshoot jointly, not college by
        // college; bound it once and spread it over the suffix totals
        let sp = (from..ctx.cols.len())
            .find(|&pf| ctx.need[pf] == 1)
            .unwrap_or(ctx.cols.len());
        if sp > from && sp < ctx.cols.len() {
            let limit = budget - (ctx.wneed_suf[from] - ctx.wneed_suf[sp]);
            let wsing = match self.singles_bound(ctx, from, sp, limit) {
                Some(w) => w,
                None => return false,
            };
            let extra = wsing.saturating_sub(ctx.wneed_suf[sp]);
            if extra > 0 {
                for pf in from..=sp {
                    ctx.wneed_suf[pf] += extra;
                }
                if ctx.wneed_suf[from] > budget || load + ctx.wneed_suf[from] > fit {
                    return false;
                }
            }
        }
        true
    }

    /// Lower-bound the overshoot the unit-demand colleges from position
    /// `sp` on must add together: each needs one distinct compatible
    /// member, a class can spare only what the floors of the undecided
    /// colleges before them leave, and a member of capacity q adds q - 1.
    /// The routing relaxes everything else, so its cost never exceeds the
    /// overshoot of a real completion within `limit`.
    fn singles_bound(
        &self,
        ctx: &mut ProfileCtx,
        from: usize,
        sp: usize,
        limit: u64,
    ) -> Option<u64> {
        let kn = ctx.lb.len();
        let members: usize = self.classes.iter().map(|cl| cl.hi - cl.lo).sum();
        let nsing = ctx.cols.len() - sp;
        // node ids: source, class gates, members, singles, sink
        let mem_base = 1 + kn;
        let sing_base = mem_base + members;
        let sink = sing_base + nsing;
        let mcf = &mut *ctx.mcf;
        mcf.reset(sink + 1);
        for pf in sp..ctx.cols.len() {
            mcf.add_edge(sing_base + (pf - sp), sink, 1, 0);
        }
        let mut mid = 0usize;
        for k in 0..kn {
            let cl = &self.classes[k];
            let held = ctx.floor_suf[from][k] - ctx.floor_suf[sp][k];
            let spare = (ctx.rem[k] as u64).saturating_sub(held);
            let over = (cl.cap - 1) as u64;
            if spare == 0 || over > limit {
                mid += cl.hi - cl.lo;
                continue;
            }
            let gate = 1 + k;
            let mut used = false;
            for i in cl.lo..cl.hi {
                let node = mem_base + mid;
                mid += 1;
                let mut linked = false;
                for &c in &self.compat[i] {
                    let ci = ctx.pos[c];
                    if ci != usize::MAX && ci >= sp {
                        mcf.add_edge(node, sing_base + (ci - sp), 1, over);
                        linked = true;
                    }
                }
                if linked {
                    mcf.add_edge(gate, node, 1, 0);
                    used = true;
                }
            }
            if used {
                mcf.add_edge(0, gate, spare, 0);
            }
        }
        mcf.route(0, sink, nsing as u64, limit)
    }

    /// Pick a count profile for each remaining college in turn. Once only
    /// unit demands remain, one assignment problem settles them exactly.
    fn profile_rec(&self, ctx: &mut ProfileCtx, p: usize, budget: u64) -> bool {
        if p == ctx.cols.len() {
            return true;
        }
        if ctx.need[p] == 1 {
            return self.singles_tail(ctx, p, budget);
        }
        // the floors and forced overshoot of the later colleges; valid for
        // any choice made here, since shrinking the pool only raises them
        let fsuf = ctx.floor_suf[p + 1];
        let wsuf = ctx.wneed_suf[p + 1];
        let wmax = budget.saturating_sub(wsuf).min(2) as u32;
        self.profile_enum(ctx, p, budget, 0, 0, wmax, fsuf)
    }

    /// Every remaining college needs one unit, hence exactly one member of
    /// some class, at an overshoot of capacity minus one. Decide the
    /// remaining colleges and the chosen counts of the decided ones in a
    /// single assignment: members route either into a decided college's
    /// count for their class or into one remaining college, and the
    /// cheapest complete routing must respect the budget.
    fn singles_tail(&self, ctx: &mut ProfileCtx, p: usize, budget: u64) -> bool {
        let kn = ctx.lb.len();
        let ncols = ctx.cols.len();
        let members: usize = self.classes.iter().map(|cl| cl.hi - cl.lo).sum();
        // node ids: source, members, decided (college, class) pairs,
        // remaining colleges, sink
        let pair_base = 1 + members;
        let single_base = pair_base + p * kn;
        let sink = single_base + (ncols - p);
        let mcf = &mut *ctx.mcf;
        mcf.reset(sink + 1);
        let mut want = 0u64;
        for ci in 0..p {
            for k in 0..kn {
                let t = ctx.take[k][ci];
                if t > 0 {
                    mcf.add_edge(pair_base + ci * kn + k, sink, t as u64, 0);
                    want += t as u64;
                }
            }
        }
        for pf in p..ncols {
            mcf.add_edge(single_base + (pf - p), sink, 1, 0);
            want += 1;
        }
        let mut mid = 0usize;
        for k in 0..kn {
            let cl = &self.classes[k];
            let over = (cl.cap - 1) as u64;
            for i in cl.lo..cl.hi {
                let node = 1 + mid;
                mid += 1;
                let mut linked = false;
                for &c in &self.compat[i] {
                    let ci = ctx.pos[c];
                    if ci == usize::MAX {
                        continue;
                    }
                    if ci < p {
                        if ctx.take[k][ci] > 0 {
                            mcf.add_edge(node, pair_base + ci * kn + k, 1, 0);
                            linked = true;
                        }
                    } else if over <= budget {
                        mcf.add_edge(node, single_base + (ci - p), 1, over);
                        linked = true;
                    }
                }
                if linked {
                    mcf.add_edge(0, node, 1, 0);
                }
            }
        }
        mcf.route(0, sink, want, budget).is_some()
    }

    /// Enumerate how many members of class k the college at position p
    /// takes, within its bounds, the unassigned members, and the college's
    /// overshoot allowance. Values are tried outward from an anchor: the
    /// relaxation's rounded counts when it shipped the demand, otherwise a
    /// proportional share, so likely packings come up first.
    fn profile_enum(
        &self,
        ctx: &mut ProfileCtx,
        p: usize,
        budget: u64,
        k: usize,
        sum: u32,
        wmax: u32,
        fsuf: [u64; 3],
    ) -> bool {
        let d = ctx.need[p];
        if k == ctx.lb.len() {
            return self.profile_leaf(ctx, p, budget - (sum - d) as u64);
        }
        let q = self.classes[k].cap;
        // counts the later classes can still offer this college once the
        // floors of the later colleges are set aside
        let mut tail = [0u64; 3];
        let mut rest = 0u32;
        for j in k + 1..ctx.lb.len() {
            let free = (ctx.rem[j] as u64).saturating_sub(fsuf[j]) as u32;
            let u = ctx.ub[j][p].min(free);
            tail[(self.classes[j].cap - 1) as usize] = u as u64;
            rest += self.classes[j].cap * u;
        }
        let free_k = (ctx.rem[k] as u64).saturating_sub(fsuf[k]) as u32;
        let hi = ctx.ub[k][p].min(free_k).min((d + wmax - sum) / q);
        let lo = ctx.lb[k][p].max((d.saturating_sub(sum + rest) + q - 1) / q);
        if lo > hi {
            return false;
        }
        let a = if ctx.anchor.is_empty() {
            let left = d.saturating_sub(sum) as u64;
            (ctx.rem[k] as u64 * left / ctx.need_suffix[p].max(1)) as u32
        } else {
            ctx.anchor[ctx.cols[p]][k]
        }
        .clamp(lo, hi);
        let depth = p * ctx.lb.len() + k;
        {
            let buf = &mut ctx.ord[depth];
            buf.clear();
            buf.push(a);
            let (mut up, mut down) = (a, a);
            loop {
                let mut moved = false;
                if up < hi {
                    up += 1;
                    buf.push(up);
                    moved = true;
                }
                if down > lo {
                    down -= 1;
                    buf.push(down);
                    moved = true;
                }
                if !moved {
                    break;
                }
            }
        }
        for n in 0..ctx.ord[depth].len() {
            let t = ctx.ord[depth][n];
            // the later classes must be able to land the sum in the window
            let s2 = sum + q * t;
            let lo_t = d.saturating_sub(s2) as u64;
            let hi_t = (d + wmax - s2) as u64;
            if !(lo_t..=hi_t).any(|g| exact_sum(g, tail[0], tail[1], tail[2])) {
                continue;
            }
            ctx.take[k][p] = t;
            ctx.rem[k] -= t;
            let ok = self.profile_enum(ctx, p, budget, k + 1, s2, wmax, fsuf);
            ctx.rem[k] += t;
            if ok {
                return true;
            }
        }
        false
    }

    /// A full profile is chosen for the college at position p. Refresh the
    /// floors of the remaining colleges under what is left, re-check every
    /// class matching against them, and move on.
    fn profile_leaf(&self, ctx: &mut ProfileCtx, p: usize, budget: u64) -> bool {
        ctx.nodes += 1;
        if ctx.nodes % (1 << 14) == 0 {
            eprintln!("PROFILE nodes={} p={} budget={}", ctx.nodes, p, budget);
        }
        if !self.fill_dyn(ctx, p + 1, budget) {
            return false;
        }
        for k in 0..ctx.lb.len() {
            if !self.class_hall(ctx, k, p + 1) {
                return false;
            }
        }
        self.profile_rec(ctx, p + 1, budget)
    }

    /// Can the members of class k serve the counts the first `upto`
    /// colleges chose and every later college's floor at once? A unit
    /// matching per member decides this exactly.
    fn class_hall(&self, ctx: &mut ProfileCtx, k: usize, upto: usize) -> bool {
        let cl = &self.classes[k];
        let size = cl.hi - cl.lo;
        let ncols = ctx.cols.len();
        ctx.want.clear();
        ctx.want.resize(ncols, 0);
        let mut total = 0u64;
        for ci in 0..ncols {
            let w = if ci < upto {
                ctx.take[k][ci]
            } else {
                ctx.lb[k][ci].max(ctx.dyn_lb[ci][k])
            };
            ctx.want[ci] = w;
            total += w as u64;
        }
        if total == 0 {
            return true;
        }
        let sink = 1 + size + ncols;
        ctx.flow.reset(sink + 1);
        for ci in 0..ncols {
            if ctx.want[ci] > 0 {
                ctx.flow.add_edge(1 + size + ci, sink, ctx.want[ci] as u64);
            }
        }
        for i in cl.lo..cl.hi {
            let node = 1 + (i - cl.lo);
            let mut linked = false;
            for &c in &self.compat[i] {
                let ci = ctx.pos[c];
                if ci != usize::MAX && ctx.want[ci] > 0 {
                    ctx.flow.add_edge(node, 1 + size + ci, 1);
                    linked = true;
                }
            }
            if linked {
                ctx.flow.add_edge(0, node, 1);
            }
        }
        ctx.flow.max_flow(0, sink, total) == total
    }

    /// Assign each remaining resource to its compatible college with the
    /// largest residual demand. Success certifies the demand is coverable;
    /// failure proves nothing.
    fn greedy_covers(&self, idx: usize, demand: &AssignVec, residual: &mut Vec<u32>) -> bool {
        residual.clear();
        residual.extend_from_slice(&demand.0);
        let mut left = demand.total();
        for i in idx..self.caps.len() {
            if left == 0 {
                return true;
            }
            let mut best: Option<usize> = None;
            for &c in &self.compat[i] {
                if residual[c] > 0 && best.map_or(true, |b| residual[c] > residual[b]) {
                    best = Some(c);
                }
            }
            if let Some(c) = best {
                let served = residual[c].min(self.caps[i]);
                residual[c] -= served;
                left -= served as u64;
            }
        }
        left == 0
    }

    /// Exact feasibility once every remaining resource has one capacity q:
    /// college c then needs ceil(d_c / q) distinct compatible resources, a
    /// unit matching that the flow decides with no integrality gap.
    fn uniform_covers(&self, idx: usize, demand: &AssignVec, flow: &mut MaxFlow) -> bool {
        let q = match self.caps.get(idx) {
            Some(&q) if q > 0 => q as u64,
            _ => return demand.is_zero(),
        };
        let m = demand.0.len();
        let sink = 1 + m + (self.caps.len() - idx);
        flow.reset(sink + 1);
        let mut total = 0u64;
        for (c, &d) in demand.0.iter().enumerate() {
            if d > 0 {
                let units = (d as u64 + q - 1) / q;
                flow.add_edge(1 + c, sink, units);
                total += units;
            }
        }
        for i in idx..self.caps.len() {
            let node = 1 + m + (i - idx);
            let mut linked = false;
            for &c in &self.compat[i] {
                if demand.0[c] > 0 {
                    flow.add_edge(node, 1 + c, 1);
                    linked = true;
                }
            }
            if linked {
                flow.add_edge(0, node, 1);
            }
        }
        flow.max_flow(0, sink, total) == total
    }

    /// Screen a demand through the saturating assignment relaxation. A
    /// resource splits one unit of presence across colleges and
    /// contributes min(capacity, demand) per full share, so serving a
    /// small demand consumes a whole share. That is tighter than the
    /// divisible-capacity flow, which is blind to this kind of waste. The
    /// relaxation is solved with a small dense simplex in floating point.
    /// An infeasible verdict comes from a rounded dual witness that is
    /// re-verified in exact integer arithmetic, so it is trustworthy no
    /// matter how the simplex behaved. When the relaxation instead ships
    /// the full demand, the fractional assignment is rounded into
    /// per-college class counts that seed the profile search's ordering.
    fn saturating_screen(
        &self,
        demand: &AssignVec,
        tab: &mut Vec<f64>,
        anchor: &mut Vec<[u32; 3]>,
    ) -> LpScreen {
        let m_all = demand.0.len();
        let mut cpos = vec![usize::MAX; m_all];
        let mut cols: Vec<usize> = Vec::new();
        for (c, &d) in demand.0.iter().enumerate() {
            if d > 0 {
                cpos[c] = cols.len();
                cols.push(c);
            }
        }
        let ma = cols.len();
        if ma == 0 {
            return LpScreen::Unknown;
        }
        // arcs: (presence row of the resource, college position, gain, class)
        let mut arcs: Vec<(u32, u32, u32, u32)> = Vec::new();
        let mut nres = 0u32;
        for i in 0..self.caps.len() {
            if self.caps[i] == 0 {
                continue;
            }
            let before = arcs.len();
            for &c in &self.compat[i] {
                if cpos[c] != usize::MAX {
                    arcs.push((
                        nres,
                        cpos[c] as u32,
                        self.caps[i].min(demand.0[c]),
                        self.class_of[i],
                    ));
                }
            }
            if arcs.len() > before {
                nres += 1;
            }
        }
        let na = nres as usize;
        let rows = 2 * ma + na;
        let ncols = ma + arcs.len() + rows;
        if rows > 512 || ncols > 8192 {
            return LpScreen::Unknown;
        }
        let stride = ncols + 1;
        tab.clear();
        tab.resize((rows + 1) * stride, 0.0);
        // maximize total coverage: objective row carries minus the costs
        for j in 0..ma {
            tab[j] = -1.0;
        }
        // coverage rows: s_c - sum of gains * shares <= 0
        for c in 0..ma {
            let r = 1 + c;
            tab[r * stride + c] = 1.0;
            tab[r * stride + ma + arcs.len() + c] = 1.0;
        }
        for (j, &(_, cp, g, _)) in arcs.iter().enumerate() {
            let r = 1 + cp as usize;
            tab[r * stride + ma + j] = -(g as f64);
        }
        // presence rows: a resource's shares sum to at most one
        for (j, &(rp, _, _, _)) in arcs.iter().enumerate() {
            let r = 1 + ma + rp as usize;
            tab[r * stride + ma + j] = 1.0;
        }
        for i in 0..na {
            let r = 1 + ma + i;
            tab[r * stride + ma + arcs.len() + ma + i] = 1.0;
            tab[r * stride + ncols] = 1.0;
        }
        // bound rows: s_c <= d_c
        for c in 0..ma {
            let r = 1 + ma + na + c;
            tab[r * stride + c] = 1.0;
            tab[r * stride + ma + arcs.len() + ma + na + c] = 1.0;
            tab[r * stride + ncols] = demand.0[cols[c]] as f64;
        }
        let mut basis: Vec<usize> = (0..rows).map(|r| ma + arcs.len() + r).collect();
        let mut iters = 0usize;
        loop {
            let mut e = usize::MAX;
            if iters < 3000 {
                let mut best = -1e-7;
                for j in 0..ncols {
                    if tab[j] < best {
                        best = tab[j];
                        e = j;
                    }
                }
            } else {
                for j in 0..ncols {
                    if tab[j] < -1e-9 {
                        e = j;
                        break;
                    }
                }
            }
            if e == usize::MAX {
                break;
            }
            let mut r = usize::MAX;
            let mut best = f64::INFINITY;
            for i in 1..=rows {
                let a = tab[i * stride + e];
                if a > 1e-9 {
                    let t = tab[i * stride + ncols] / a;
                    if t < best - 1e-12 {
                        best = t;
                        r = i;
                    }
                }
            }
            if r == usize::MAX {
                return LpScreen::Unknown;
            }
            iters += 1;
            if iters > 6000 {
                return LpScreen::Unknown;
            }
            basis[r - 1] = e;
            let piv = tab[r * stride + e];
            for j in 0..stride {
                tab[r * stride + j] /= piv;
            }
            for i in 0..=rows {
                if i == r {
                    continue;
                }
                let f = tab[i * stride + e];
                if f != 0.0 {
                    for j in 0..stride {
                        tab[i * stride + j] -= f * tab[r * stride + j];
                    }
                }
            }
        }
        let total: u64 = demand.total();
        if std::env::var_os("LP_DEBUG").is_some() {
            eprintln!(
                "LPDBG opt={} total={} iters={} rows={} ncols={}",
                tab[ncols], total, iters, rows, ncols
            );
        }
        // the optimum can be fractional, and any true value below the total
        // already rules a cover out, so only float noise gets absorbed here;
        // near-total fractional optima go on to the exact dual check
        if tab[ncols] > total as f64 - 1e-5 {
            // everything ships: round the shares into per-college counts
            // of each class to steer the profile search
            if self.classes.len() <= 3 {
                anchor.clear();
                anchor.resize(m_all, [0u32; 3]);
                let mut acc = vec![[0f64; 3]; ma];
                for (r, &b) in basis.iter().enumerate() {
                    if b >= ma && b < ma + arcs.len() {
                        let (_, cp, _, k) = arcs[b - ma];
                        acc[cp as usize][k as usize] += tab[(r + 1) * stride + ncols];
                    }
                }
                for c in 0..ma {
                    for k in 0..3 {
                        anchor[cols[c]][k] = acc[c][k].round().max(0.0) as u32;
                    }
                }
                return LpScreen::Shipped;
            }
            return LpScreen::Unknown;
        }
        // exact check of the dual witness: college weights y, share costs
        // derived from them, against the weighted demand
        const S: i128 = 1 << 16;
        let y: Vec<i128> = (0..ma)
            .map(|c| {
                let v = tab[ma + arcs.len() + c];
                ((v.max(0.0) * S as f64).round() as i128).min(8 * S)
            })
            .collect();
        let mut lhs: i128 = 0;
        for c in 0..ma {
            lhs += demand.0[cols[c]] as i128 * (S - y[c]).max(0);
        }
        for i in 0..self.caps.len() {
            if self.caps[i] == 0 {
                continue;
            }
            let mut z: i128 = 0;
            for &c in &self.compat[i] {
                if cpos[c] != usize::MAX {
                    let g = self.caps[i].min(demand.0[c]) as i128;
                    z = z.max(g * y[cpos[c]]);
                }
            }
            lhs += z;
        }
        if std::env::var_os("LP_DEBUG").is_some() {
            eprintln!("LPDBG dual lhs={} rhs={}", lhs, S * total as i128);
        }
        if lhs < S * total as i128 {
            LpScreen::Infeasible
        } else {
            LpScreen::Unknown
        }
    }

    /// Max-flow feasibility of the divisible relaxation, where a resource
    /// may split its capacity across colleges. If even the relaxation
    /// cannot ship the full demand, no whole-resource assignment can.
    fn fractional_covers(&self, idx: usize, demand: &AssignVec, flow: &mut MaxFlow) -> bool {
        let m = demand.0.len();
        let sink = 1 + m + (self.caps.len() - idx);
        flow.reset(sink + 1);
        let mut total = 0u64;
        for (c, &d) in demand.0.iter().enumerate() {
            if d > 0 {
                flow.add_edge(1 + c, sink, d as u64);
                total += d as u64;
            }
        }
        for i in idx..self.caps.len() {
            let node = 1 + m + (i - idx);
            let mut linked = false;
            for &c in &self.compat[i] {
                if demand.0[c] > 0 {
                    flow.add_edge(node, 1 + c, (demand.0[c].min(self.caps[i])) as u64);
                    linked = true;
                }
            }
            if linked {
                flow.add_edge(0, node, self.caps[i] as u64);
            }
        }
        flow.max_flow(0, sink, total) == total
    }
}

/// Can some multiset from n1 ones, n2 twos and n3 threes sum to exactly t?
/// Scanning the two largest viable counts of threes is enough: dropping six
/// from the remainder never breaks ones-and-twos reachability, so each
/// parity class of the count is settled by its smallest remainder.
fn exact_sum(t: u64, n1: u64, n2: u64, n3: u64) -> bool {
    if t > n1 + 2 * n2 + 3 * n3 {
        return false;
    }
    // ones and twos reach x iff the forced count of ones has x's parity
    // and fits; the forced count is x - 2*n2 once the twos run out
    let ones_twos = |x: u64| {
        let a = if x <= 2 * n2 { x % 2 } else { x - 2 * n2 };
        a <= n1.min(x)
    };
    let c_lo = (t.saturating_sub(n1 + 2 * n2) + 2) / 3;
    let c_hi = n3.min(t / 3);
    (c_lo <= c_hi && ones_twos(t - 3 * c_hi))
        || (c_lo + 1 <= c_hi && ones_twos(t - 3 * (c_hi - 1)))
}

/// Least overshoot when covering residual r from the given capacity counts,
/// or None when even overshooting cannot reach it. Capacities stop at 3, so
/// the answer is always within 0..=2 when it exists.
fn min_waste(r: u64, cnt: &[u32; 3]) -> Option<u64> {
    let (n1, n2, n3) = (cnt[0] as u64, cnt[1] as u64, cnt[2] as u64);
    (0..=2).find(|&w| exact_sum(r + w, n1, n2, n3))
}

/// Small reusable Dinic max-flow for the solver's relaxation graphs.
#[derive(Debug, Default)]
struct MaxFlow {
    n: usize,
    adj: Vec<Vec<u32>>,
    to: Vec<u32>,
    cap: Vec<u64>,
    level: Vec<i32>,
    iter: Vec<usize>,
    queue: Vec<u32>,
}

impl MaxFlow {
    fn reset(&mut self, n: usize) {
        self.n = n;
        for a in &mut self.adj {
            a.clear();
        }
        if self.adj.len() < n {
            self.adj.resize_with(n, Vec::new);
        }
        self.to.clear();
        self.cap.clear();
        self.level.resize(n, -1);
        self.iter.resize(n, 0);
    }

    fn add_edge(&mut self, a: usize, b: usize, c: u64) {
        let e = self.to.len() as u32;
        self.adj[a].push(e);
        self.to.push(b as u32);
        self.cap.push(c);
        self.adj[b].push(e + 1);
        self.to.push(a as u32);
        self.cap.push(0);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level[..self.n].fill(-1);
        self.queue.clear();
        self.level[s] = 0;
        self.queue.push(s as u32);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head] as usize;
            head += 1;
            for k in 0..self.adj[v].len() {
                let e = self.adj[v][k] as usize;
                let w = self.to[e] as usize;
                if self.cap[e] > 0 && self.level[w] < 0 {
                    self.level[w] = self.level[v] + 1;
                    self.queue.push(w as u32);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, f: u64) -> u64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.adj[v].len() {
            let e = self.adj[v][self.iter[v]] as usize;
            let w = self.to[e] as usize;
            if self.cap[e] > 0 && self.level[w] == self.level[v] + 1 {
                let d = self.dfs(w, t, f.min(self.cap[e]));
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    /// Flow from s to t, stopping early once `limit` is reached.
    fn max_flow(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        let mut flow = 0;
        while flow < limit && self.bfs(s, t) {
            self.iter[..self.n].fill(0);
            loop {
                let f = self.dfs(s, t, u64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
                if flow >= limit {
                    break;
                }
            }
        }
        flow
    }
}

/// Small reusable min-cost flow, augmenting along cheapest paths.
#[derive(Debug, Default)]
struct MinCostFlow {
    n: usize,
    adj: Vec<Vec<u32>>,
    to: Vec<u32>,
    cap: Vec<u64>,
    cost: Vec<i64>,
    dist: Vec<i64>,
    inq: Vec<bool>,
    prev: Vec<(u32, u32)>,
    queue: std::collections::VecDeque<u32>,
}

impl MinCostFlow {
    fn reset(&mut self, n: usize) {
        self.n = n;
        for a in &mut self.adj {
            a.clear();
        }
        if self.adj.len() < n {
            self.adj.resize_with(n, Vec::new);
        }
        self.to.clear();
        self.cap.clear();
        self.cost.clear();
        self.dist.resize(n, 0);
        self.inq.resize(n, false);
        self.prev.resize(n, (0, 0));
    }

    fn add_edge(&mut self, a: usize, b: usize, c: u64, w: u64) {
        let e = self.to.len() as u32;
        self.adj[a].push(e);
        self.to.push(b as u32);
        self.cap.push(c);
        self.cost.push(w as i64);
        self.adj[b].push(e + 1);
        self.to.push(a as u32);
        self.cap.push(0);
        self.cost.push(-(w as i64));
    }

    /// Can `want` units flow from s to t at a total cost within `limit`?
    /// Augments along cheapest paths, so cost grows as slowly as possible
    /// and the limit can cut the attempt short. On success the minimum
    /// cost comes back, since each augmentation was along a cheapest path.
    fn route(&mut self, s: usize, t: usize, want: u64, limit: u64) -> Option<u64> {
        let mut flow = 0u64;
        let mut spent = 0i64;
        while flow < want {
            self.dist[..self.n].fill(i64::MAX);
            self.inq[..self.n].fill(false);
            self.dist[s] = 0;
            self.queue.clear();
            self.queue.push_back(s as u32);
            while let Some(v) = self.queue.pop_front() {
                let v = v as usize;
                self.inq[v] = false;
                for x in 0..self.adj[v].len() {
                    let e = self.adj[v][x] as usize;
                    let w = self.to[e] as usize;
                    if self.cap[e] > 0 && self.dist[v] + self.cost[e] < self.dist[w] {
                        self.dist[w] = self.dist[v] + self.cost[e];
                        self.prev[w] = (v as u32, e as u32);
                        if !self.inq[w] {
                            self.inq[w] = true;
                            self.queue.push_back(w as u32);
                        }
                    }
                }
            }
            if self.dist[t] == i64::MAX {
                return None;
            }
            let mut push = want - flow;
            let mut v = t;
            while v != s {
                let (pv, pe) = self.prev[v];
                push = push.min(self.cap[pe as usize]);
                v = pv as usize;
            }
            let mut v = t;
            while v != s {
                let (pv, pe) = self.prev[v];
                self.cap[pe as usize] -= push;
                self.cap[(pe as usize) ^ 1] += push;
                v = pv as usize;
            }
            flow += push;
            spent += self.dist[t] * push as i64;
            if spent > limit as i64 {
                return None;
            }
        }
        Some(spent as u64)
    }
}
