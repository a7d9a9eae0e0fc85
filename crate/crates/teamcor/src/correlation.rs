//! Correlation plans for the two team seats: the relevant-sequence-pair
//! index, the flow constraint system describing the plan polytope, the
//! triangle-freeness test, and plan constructors/classifiers.

use crate::efg::{
    Game, InfosetId, SeatAssignment, SequenceFormStrategy, SequenceIndex, SeqId, TerminalRecord,
    EMPTY_SEQ,
};
use std::collections::HashMap;

// ---------------------------------------------------------------------------
// Connectivity

/// For each pair of team infosets (I of T1, J of T2): whether some node of
/// one has an inclusive ancestor in the other (they can lie on a common
/// root-leaf path).
pub struct ConnectivityRelation {
    /// Global infoset id -> local index per team seat (usize::MAX if other
    /// seat's).
    t1_local: Vec<usize>,
    t2_local: Vec<usize>,
    pub t1_infosets: Vec<InfosetId>,
    pub t2_infosets: Vec<InfosetId>,
    /// Sorted adjacency, local indices.
    t1_adj: Vec<Vec<usize>>,
    t2_adj: Vec<Vec<usize>>,
}

impl ConnectivityRelation {
    pub fn connected(&self, i1: InfosetId, i2: InfosetId) -> bool {
        let a = self.t1_local[i1];
        let b = self.t2_local[i2];
        debug_assert!(a != usize::MAX && b != usize::MAX);
        self.t1_adj[a].binary_search(&b).is_ok()
    }

    pub fn neighbors_of_t1(&self, i1: InfosetId) -> impl Iterator<Item = InfosetId> + '_ {
        self.t1_adj[self.t1_local[i1]].iter().map(move |&b| self.t2_infosets[b])
    }

    pub fn neighbors_of_t2(&self, i2: InfosetId) -> impl Iterator<Item = InfosetId> + '_ {
        self.t2_adj[self.t2_local[i2]].iter().map(move |&a| self.t1_infosets[a])
    }
}

pub fn infoset_connectivity(game: &Game, assignment: SeatAssignment) -> ConnectivityRelation {
    let (t1, t2) = (assignment.t1(), assignment.t2());
    let mut t1_local = vec![usize::MAX; game.infosets.len()];
    let mut t2_local = vec![usize::MAX; game.infosets.len()];
    let mut t1_infosets = Vec::new();
    let mut t2_infosets = Vec::new();
    for (id, inf) in game.infosets.iter().enumerate() {
        if inf.seat == t1 {
            t1_local[id] = t1_infosets.len();
            t1_infosets.push(id);
        } else if inf.seat == t2 {
            t2_local[id] = t2_infosets.len();
            t2_infosets.push(id);
        }
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    // One traversal carrying each team seat's ancestral infoset stack.
    let mut stack1: Vec<usize> = Vec::new();
    let mut stack2: Vec<usize> = Vec::new();
    fn walk(
        game: &Game,
        node: usize,
        t1: usize,
        t2: usize,
        t1_local: &[usize],
        t2_local: &[usize],
        stack1: &mut Vec<usize>,
        stack2: &mut Vec<usize>,
        edges: &mut Vec<(usize, usize)>,
    ) {
        match &game.nodes[node] {
            crate::efg::NodeKind::Terminal { .. } => {}
            crate::efg::NodeKind::Chance { outcomes } => {
                for &(_, c) in outcomes {
                    walk(game, c, t1, t2, t1_local, t2_local, stack1, stack2, edges);
                }
            }
            crate::efg::NodeKind::Decision { seat, infoset, children } => {
                if *seat == t1 {
                    let a = t1_local[*infoset];
                    for &b in stack2.iter() {
                        edges.push((a, b));
                    }
                    stack1.push(a);
                } else if *seat == t2 {
                    let b = t2_local[*infoset];
                    for &a in stack1.iter() {
                        edges.push((a, b));
                    }
                    stack2.push(b);
                }
                for &c in children {
                    walk(game, c, t1, t2, t1_local, t2_local, stack1, stack2, edges);
                }
                if *seat == t1 {
                    stack1.pop();
                } else if *seat == t2 {
                    stack2.pop();
                }
            }
        }
    }
    walk(game, game.root, t1, t2, &t1_local, &t2_local, &mut stack1, &mut stack2, &mut edges);

    edges.sort_unstable();
    edges.dedup();
    let mut t1_adj = vec![Vec::new(); t1_infosets.len()];
    let mut t2_adj = vec![Vec::new(); t2_infosets.len()];
    for (a, b) in edges {
        t1_adj[a].push(b);
        t2_adj[b].push(a);
    }
    for adj in &mut t2_adj {
        adj.sort_unstable();
    }
    ConnectivityRelation { t1_local, t2_local, t1_infosets, t2_infosets, t1_adj, t2_adj }
}

// ---------------------------------------------------------------------------
// Relevant pairs

/// Dense index of the relevant sequence pairs of the two team seats. Layout:
/// id 0 is (∅,∅); ids 1..n2 are (∅,σ2); the next n1-1 ids are (σ1,∅); the
/// remaining ids are the cross pairs grouped by σ1.
pub struct RelevantPairIndex {
    pub t1_seat: usize,
    pub t2_seat: usize,
    pub num_seq1: usize,
    pub num_seq2: usize,
    pub pairs: Vec<(SeqId, SeqId)>,
    lookup: HashMap<(SeqId, SeqId), usize>,
    /// Pair id of each terminal record (aligned with the record list the
    /// index was built from).
    pub leaf_pairs: Vec<usize>,
    pub connectivity: ConnectivityRelation,
}

impl RelevantPairIndex {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn id(&self, s1: SeqId, s2: SeqId) -> Option<usize> {
        if s1 == EMPTY_SEQ {
            return (s2 < self.num_seq2).then_some(s2);
        }
        if s2 == EMPTY_SEQ {
            return (s1 < self.num_seq1).then_some(self.num_seq2 - 1 + s1);
        }
        self.lookup.get(&(s1, s2)).copied()
    }

    /// Pair id of (σ1, ∅).
    pub fn marginal1(&self, s1: SeqId) -> usize {
        self.id(s1, EMPTY_SEQ).unwrap()
    }

    /// Pair id of (∅, σ2).
    pub fn marginal2(&self, s2: SeqId) -> usize {
        self.id(EMPTY_SEQ, s2).unwrap()
    }
}

pub fn relevant_pairs(
    idx1: &SequenceIndex,
    idx2: &SequenceIndex,
    records: &[TerminalRecord],
    connectivity: ConnectivityRelation,
) -> RelevantPairIndex {
    let (n1, n2) = (idx1.num_sequences(), idx2.num_sequences());
    let mut pairs: Vec<(SeqId, SeqId)> = Vec::new();
    pairs.push((EMPTY_SEQ, EMPTY_SEQ));
    for s2 in 1..n2 {
        pairs.push((EMPTY_SEQ, s2));
    }
    for s1 in 1..n1 {
        pairs.push((s1, EMPTY_SEQ));
    }
    let mut lookup = HashMap::new();
    for s1 in 1..n1 {
        let (i1, _) = idx1.entries[s1].unwrap();
        let mut neigh: Vec<InfosetId> = connectivity.neighbors_of_t1(i1).collect();
        neigh.sort_by_key(|&i2| idx2.first_seq[i2]);
        for i2 in neigh {
            for a2 in 0..idx2.num_actions(i2) {
                let s2 = idx2.seq(i2, a2);
                lookup.insert((s1, s2), pairs.len());
                pairs.push((s1, s2));
            }
        }
    }
    let index = RelevantPairIndex {
        t1_seat: idx1.seat,
        t2_seat: idx2.seat,
        num_seq1: n1,
        num_seq2: n2,
        pairs,
        lookup,
        leaf_pairs: Vec::new(),
        connectivity,
    };
    let leaf_pairs = records
        .iter()
        .map(|r| {
            index
                .id(r.seq_t1, r.seq_t2)
                .expect("every leaf's sequence pair is relevant (leaves witness connectivity)")
        })
        .collect();
    RelevantPairIndex { leaf_pairs, ..index }
}

// ---------------------------------------------------------------------------
// Correlation plans

#[derive(Debug, Clone)]
pub struct CorrelationPlan {
    pub values: Vec<f64>,
}

impl CorrelationPlan {
    pub fn zeros(index: &RelevantPairIndex) -> Self {
        CorrelationPlan { values: vec![0.0; index.len()] }
    }

    /// Coordinatewise convex combination accumulator.
    pub fn add_scaled(&mut self, weight: f64, other: &CorrelationPlan) {
        for (v, o) in self.values.iter_mut().zip(&other.values) {
            *v += weight * o;
        }
    }
}

// ---------------------------------------------------------------------------
// Flow constraint system

#[derive(Debug, Clone)]
pub struct VsfRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// Sparse equality system over plan coordinates: the normalization row
/// ξ[∅,∅]=1 and the interlaced mass-conservation rows for both seats
/// (nonnegativity is carried as variable bounds by the solvers).
pub struct VsfSystem {
    pub rows: Vec<VsfRow>,
    /// Count of rows of the T1-infoset family (diagnostics/tests).
    pub t1_rows: usize,
    pub t2_rows: usize,
}

pub fn vsf_constraints(
    index: &RelevantPairIndex,
    idx1: &SequenceIndex,
    idx2: &SequenceIndex,
) -> VsfSystem {
    let mut rows = Vec::new();
    rows.push(VsfRow { coeffs: vec![(0usize, 1.0)], rhs: 1.0 });

    let mut t1_rows = 0;
    // For each T1 infoset and every σ2 relevant to it: child mass equals the
    // parent sequence's mass.
    for &i1 in &idx1.infosets {
        let parent = idx1.infoset_parent[i1];
        let mut sigma2: Vec<SeqId> = vec![EMPTY_SEQ];
        let mut neigh: Vec<InfosetId> = index.connectivity.neighbors_of_t1(i1).collect();
        neigh.sort_by_key(|&i2| idx2.first_seq[i2]);
        for i2 in neigh {
            for a2 in 0..idx2.num_actions(i2) {
                sigma2.push(idx2.seq(i2, a2));
            }
        }
        for s2 in sigma2 {
            let mut coeffs: Vec<(usize, f64)> = Vec::new();
            for a1 in 0..idx1.num_actions(i1) {
                let pid = index.id(idx1.seq(i1, a1), s2).expect("child pair relevant");
                coeffs.push((pid, 1.0));
            }
            let parent_pid = index.id(parent, s2).expect("parent pair relevant");
            coeffs.push((parent_pid, -1.0));
            rows.push(VsfRow { coeffs, rhs: 0.0 });
            t1_rows += 1;
        }
    }

    let mut t2_rows = 0;
    for &i2 in &idx2.infosets {
        let parent = idx2.infoset_parent[i2];
        let mut sigma1: Vec<SeqId> = vec![EMPTY_SEQ];
        let mut neigh: Vec<InfosetId> = index.connectivity.neighbors_of_t2(i2).collect();
        neigh.sort_by_key(|&i1| idx1.first_seq[i1]);
        for i1 in neigh {
            for a1 in 0..idx1.num_actions(i1) {
                sigma1.push(idx1.seq(i1, a1));
            }
        }
        for s1 in sigma1 {
            let mut coeffs: Vec<(usize, f64)> = Vec::new();
            for a2 in 0..idx2.num_actions(i2) {
                let pid = index.id(s1, idx2.seq(i2, a2)).expect("child pair relevant");
                coeffs.push((pid, 1.0));
            }
            let parent_pid = index.id(s1, parent).expect("parent pair relevant");
            coeffs.push((parent_pid, -1.0));
            rows.push(VsfRow { coeffs, rhs: 0.0 });
            t2_rows += 1;
        }
    }

    VsfSystem { rows, t1_rows, t2_rows }
}

impl VsfSystem {
    /// Max violation of the equality rows and nonnegativity.
    pub fn violation(&self, plan: &CorrelationPlan) -> f64 {
        let mut worst = 0.0f64;
        for v in &plan.values {
            worst = worst.max(-v);
        }
        for row in &self.rows {
            let lhs: f64 = row.coeffs.iter().map(|&(j, c)| c * plan.values[j]).sum();
            worst = worst.max((lhs - row.rhs).abs());
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// Triangle-freeness

/// True iff no two sibling T1 infosets and two sibling T2 infosets form the
/// connectivity pattern I1~J1, I2~J2, I1~J2 — the condition under which the
/// flow system exactly describes the set of correlation plans.
pub fn triangle_freeness(
    connectivity: &ConnectivityRelation,
    idx1: &SequenceIndex,
    idx2: &SequenceIndex,
) -> bool {
    // Group T2 infosets into sibling sets by parent sequence.
    let mut groups2: HashMap<SeqId, Vec<InfosetId>> = HashMap::new();
    for &i2 in &idx2.infosets {
        groups2.entry(idx2.infoset_parent[i2]).or_default().push(i2);
    }
    for group2 in groups2.values() {
        if group2.len() < 2 {
            continue;
        }
        // Count, per T1 infoset, its neighbors inside this sibling set.
        let mut count: HashMap<InfosetId, usize> = HashMap::new();
        for &j in group2 {
            for i1 in connectivity.neighbors_of_t2(j) {
                *count.entry(i1).or_insert(0) += 1;
            }
        }
        for &j2 in group2 {
            // Bucket J2's T1 neighbors by their parent sequence (siblings).
            let mut buckets: HashMap<SeqId, (usize, usize)> = HashMap::new(); // (size, max count)
            for i1 in connectivity.neighbors_of_t2(j2) {
                let e = buckets.entry(idx1.infoset_parent[i1]).or_insert((0, 0));
                e.0 += 1;
                e.1 = e.1.max(count[&i1]);
            }
            // Two sibling T1 infosets see J2 and one of them also sees a
            // sibling of J2: that is exactly the forbidden pattern.
            if buckets.values().any(|&(size, maxc)| size >= 2 && maxc >= 2) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Plan constructors / classifiers

/// A reduced deterministic plan: one action per reachable infoset of the
/// seat, `None` elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PurePlan {
    pub seat: usize,
    pub actions: Vec<Option<usize>>,
}

#[derive(Debug, thiserror::Error)]
#[error("plan for seat {seat} lacks an action at reachable infoset {infoset}")]
pub struct PlanIncomplete {
    pub seat: usize,
    pub infoset: usize,
}

/// Marks each sequence of the seat as consistent with the plan (prescribed
/// by or ancestral under it).
pub fn consistent_sequences(plan: &PurePlan, idx: &SequenceIndex) -> Result<Vec<bool>, PlanIncomplete> {
    let mut cons = vec![false; idx.num_sequences()];
    cons[EMPTY_SEQ] = true;
    // Sequence ids are discovery-ordered, so parents precede children.
    for s in 1..idx.num_sequences() {
        let (infoset, action) = idx.entries[s].unwrap();
        let parent_ok = cons[idx.infoset_parent[infoset]];
        if !parent_ok {
            continue;
        }
        match plan.actions[infoset] {
            Some(a) => cons[s] = a == action,
            None => return Err(PlanIncomplete { seat: plan.seat, infoset }),
        }
    }
    Ok(cons)
}

pub fn plan_from_pure_profile(
    p1: &PurePlan,
    p2: &PurePlan,
    index: &RelevantPairIndex,
    idx1: &SequenceIndex,
    idx2: &SequenceIndex,
) -> Result<CorrelationPlan, PlanIncomplete> {
    let c1 = consistent_sequences(p1, idx1)?;
    let c2 = consistent_sequences(p2, idx2)?;
    let values = index
        .pairs
        .iter()
        .map(|&(s1, s2)| if c1[s1] && c2[s2] { 1.0 } else { 0.0 })
        .collect();
    Ok(CorrelationPlan { values })
}

pub fn plan_from_product(
    y1: &SequenceFormStrategy,
    y2: &SequenceFormStrategy,
    index: &RelevantPairIndex,
) -> CorrelationPlan {
    let values = index.pairs.iter().map(|&(s1, s2)| y1.values[s1] * y2.values[s2]).collect();
    CorrelationPlan { values }
}

pub fn is_product_plan(plan: &CorrelationPlan, index: &RelevantPairIndex, tol: f64) -> bool {
    index.pairs.iter().enumerate().all(|(pid, &(s1, s2))| {
        let prod = plan.values[index.marginal1(s1)] * plan.values[index.marginal2(s2)];
        (plan.values[pid] - prod).abs() <= tol
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TeamMember {
    TeamOne,
    TeamTwo,
}

/// True iff the named member's marginal coordinates are all within `tol` of
/// {0,1} — i.e. that member plays a deterministic strategy.
pub fn is_semi_randomized(
    plan: &CorrelationPlan,
    deterministic_member: TeamMember,
    index: &RelevantPairIndex,
    tol: f64,
) -> bool {
    let check = |pid: usize| {
        let v = plan.values[pid];
        v.abs() <= tol || (v - 1.0).abs() <= tol
    };
    match deterministic_member {
        TeamMember::TeamOne => (1..index.num_seq1).all(|s1| check(index.marginal1(s1))),
        TeamMember::TeamTwo => (1..index.num_seq2).all(|s2| check(index.marginal2(s2))),
    }
}
