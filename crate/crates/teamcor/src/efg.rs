//! Three-seat extensive-form game trees: validation, sequence-form indices,
//! terminal records, and the opponent best-response computation.

use std::collections::HashMap;

pub type NodeId = usize;
pub type InfosetId = usize;
pub type SeqId = usize;

/// Sequence id of the empty sequence in every [`SequenceIndex`].
pub const EMPTY_SEQ: SeqId = 0;

pub const NUM_SEATS: usize = 3;

#[derive(Debug, Clone)]
pub enum NodeKind {
    /// Children are aligned with the owning infoset's action list.
    Decision { seat: usize, infoset: InfosetId, children: Vec<NodeId> },
    Chance { outcomes: Vec<(f64, NodeId)> },
    Terminal { payoffs: [f64; NUM_SEATS], chance_reach: f64 },
}

#[derive(Debug, Clone)]
pub struct Infoset {
    pub seat: usize,
    pub label: String,
    pub actions: Vec<String>,
    pub members: Vec<NodeId>,
}

#[derive(Debug, Clone)]
pub struct Game {
    pub nodes: Vec<NodeKind>,
    pub infosets: Vec<Infoset>,
    pub root: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlayerRole {
    TeamOne,
    TeamTwo,
    Opponent,
    Chance,
}

/// Maps the three seats (0-based internally, 1-based in every user-facing
/// surface) onto team/opponent roles. The two non-opponent seats are TeamOne
/// (lower index) and TeamTwo (higher index).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeatAssignment {
    pub opponent: usize,
}

impl SeatAssignment {
    pub fn new(opponent: usize) -> Self {
        assert!(opponent < NUM_SEATS, "opponent seat out of range");
        SeatAssignment { opponent }
    }

    pub fn t1(&self) -> usize {
        (0..NUM_SEATS).find(|&s| s != self.opponent).unwrap()
    }

    pub fn t2(&self) -> usize {
        (0..NUM_SEATS).rev().find(|&s| s != self.opponent).unwrap()
    }

    pub fn role_of(&self, seat: usize) -> PlayerRole {
        if seat == self.opponent {
            PlayerRole::Opponent
        } else if seat == self.t1() {
            PlayerRole::TeamOne
        } else {
            PlayerRole::TeamTwo
        }
    }

    pub fn seat_of(&self, role: PlayerRole) -> usize {
        match role {
            PlayerRole::TeamOne => self.t1(),
            PlayerRole::TeamTwo => self.t2(),
            PlayerRole::Opponent => self.opponent,
            PlayerRole::Chance => panic!("chance has no seat"),
        }
    }
}

// ---------------------------------------------------------------------------
// Construction

/// Incremental tree builder used by the generators and the JSON loader.
/// Infosets are keyed by (seat, label); members must agree on actions.
#[derive(Default)]
pub struct GameBuilder {
    nodes: Vec<NodeKind>,
    infosets: Vec<Infoset>,
    by_key: HashMap<(usize, String), InfosetId>,
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn terminal(&mut self, payoffs: [f64; NUM_SEATS], chance_reach: f64) -> NodeId {
        self.nodes.push(NodeKind::Terminal { payoffs, chance_reach });
        self.nodes.len() - 1
    }

    pub fn chance(&mut self, outcomes: Vec<(f64, NodeId)>) -> NodeId {
        self.nodes.push(NodeKind::Chance { outcomes });
        self.nodes.len() - 1
    }

    pub fn decision(
        &mut self,
        seat: usize,
        label: impl Into<String>,
        actions: &[String],
        children: Vec<NodeId>,
    ) -> NodeId {
        let label = label.into();
        let infoset = match self.by_key.get(&(seat, label.clone())) {
            Some(&id) => id,
            None => {
                let id = self.infosets.len();
                self.infosets.push(Infoset { seat, label: label.clone(), actions: actions.to_vec(), members: Vec::new() });
                self.by_key.insert((seat, label), id);
                id
            }
        };
        let id = self.nodes.len();
        self.nodes.push(NodeKind::Decision { seat, infoset, children });
        self.infosets[infoset].members.push(id);
        id
    }

    /// Finishes the tree. The root is whatever node id the caller built last
    /// (or passes explicitly).
    pub fn finish(self, root: NodeId) -> Game {
        Game { nodes: self.nodes, infosets: self.infosets, root }
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectCategory {
    NonNormalizedChance,
    ActionMismatch,
    PerfectRecallViolation,
    NotZeroSum,
    BadChanceReach,
}

#[derive(Debug, Clone)]
pub struct Defect {
    pub category: DefectCategory,
    pub node: Option<NodeId>,
    pub infoset: Option<InfosetId>,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub defects: Vec<Defect>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.defects.is_empty()
    }
}

pub fn validate(game: &Game) -> ValidationReport {
    let mut report = ValidationReport::default();

    for (id, node) in game.nodes.iter().enumerate() {
        match node {
            NodeKind::Chance { outcomes } => {
                let sum: f64 = outcomes.iter().map(|&(p, _)| p).sum();
                if outcomes.iter().any(|&(p, _)| p < 0.0) || (sum - 1.0).abs() > 1e-12 {
                    report.defects.push(Defect {
                        category: DefectCategory::NonNormalizedChance,
                        node: Some(id),
                        infoset: None,
                        detail: format!("chance probabilities sum to {sum}"),
                    });
                }
            }
            NodeKind::Terminal { payoffs, .. } => {
                let sum: f64 = payoffs.iter().sum();
                if sum.abs() > 1e-9 {
                    report.defects.push(Defect {
                        category: DefectCategory::NotZeroSum,
                        node: Some(id),
                        infoset: None,
                        detail: format!("payoffs sum to {sum}"),
                    });
                }
            }
            NodeKind::Decision { infoset, children, .. } => {
                let expected = game.infosets[*infoset].actions.len();
                if children.len() != expected {
                    report.defects.push(Defect {
                        category: DefectCategory::ActionMismatch,
                        node: Some(id),
                        infoset: Some(*infoset),
                        detail: format!("{} children vs {} infoset actions", children.len(), expected),
                    });
                }
            }
        }
    }
    if !report.is_clean() {
        // Structure is broken; recall/reach walks below assume aligned arity.
        return report;
    }

    // One walk checking chance_reach and collecting per-seat own histories.
    let mut infoset_history: Vec<Option<Vec<(InfosetId, usize)>>> = vec![None; game.infosets.len()];
    let mut stack: Vec<(NodeId, f64, [Vec<(InfosetId, usize)>; NUM_SEATS])> =
        vec![(game.root, 1.0, Default::default())];
    while let Some((id, reach, hist)) = stack.pop() {
        match &game.nodes[id] {
            NodeKind::Terminal { chance_reach, .. } => {
                if (chance_reach - reach).abs() > 1e-12 {
                    report.defects.push(Defect {
                        category: DefectCategory::BadChanceReach,
                        node: Some(id),
                        infoset: None,
                        detail: format!("stored {chance_reach}, path product {reach}"),
                    });
                }
            }
            NodeKind::Chance { outcomes } => {
                for &(p, c) in outcomes {
                    stack.push((c, reach * p, hist.clone()));
                }
            }
            NodeKind::Decision { seat, infoset, children } => {
                match &infoset_history[*infoset] {
                    None => infoset_history[*infoset] = Some(hist[*seat].clone()),
                    Some(first) => {
                        if *first != hist[*seat] {
                            report.defects.push(Defect {
                                category: DefectCategory::PerfectRecallViolation,
                                node: Some(id),
                                infoset: Some(*infoset),
                                detail: "members reached with different own histories".into(),
                            });
                        }
                    }
                }
                for (a, &c) in children.iter().enumerate() {
                    let mut h = hist.clone();
                    h[*seat].push((*infoset, a));
                    stack.push((c, reach, h));
                }
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Sequence form

/// Per-seat sequence enumeration: id 0 is the empty sequence, every other id
/// is an (infoset, action) pair in tree discovery order.
#[derive(Debug, Clone)]
pub struct SequenceIndex {
    pub seat: usize,
    /// entries[s] = None for the empty sequence, else (infoset, action).
    pub entries: Vec<Option<(InfosetId, usize)>>,
    /// parent[s] = the seat's last sequence strictly before s on any path.
    pub parent: Vec<SeqId>,
    /// First sequence id of each infoset's action block (usize::MAX for
    /// infosets of other seats).
    pub first_seq: Vec<SeqId>,
    /// Parent sequence of each infoset (usize::MAX for other seats).
    pub infoset_parent: Vec<SeqId>,
    /// Infosets whose parent sequence is the given sequence.
    pub children_infosets: Vec<Vec<InfosetId>>,
    /// This seat's infosets in discovery order.
    pub infosets: Vec<InfosetId>,
}

impl SequenceIndex {
    pub fn num_sequences(&self) -> usize {
        self.entries.len()
    }

    pub fn seq(&self, infoset: InfosetId, action: usize) -> SeqId {
        debug_assert_ne!(self.first_seq[infoset], usize::MAX);
        self.first_seq[infoset] + action
    }

    /// Number of actions of one of this seat's infosets.
    pub fn num_actions(&self, infoset: InfosetId) -> usize {
        let base = self.first_seq[infoset];
        let mut count = 0;
        while base + count < self.entries.len() && self.entries[base + count] == Some((infoset, count)) {
            count += 1;
        }
        count
    }
}

pub fn build_sequence_index(game: &Game, seat: usize) -> SequenceIndex {
    let mut idx = SequenceIndex {
        seat,
        entries: vec![None],
        parent: vec![EMPTY_SEQ],
        first_seq: vec![usize::MAX; game.infosets.len()],
        infoset_parent: vec![usize::MAX; game.infosets.len()],
        children_infosets: vec![Vec::new()],
        infosets: Vec::new(),
    };
    // Depth-first, children in order, so discovery order is deterministic.
    let mut stack: Vec<(NodeId, SeqId)> = vec![(game.root, EMPTY_SEQ)];
    while let Some((id, cur)) = stack.pop() {
        match &game.nodes[id] {
            NodeKind::Terminal { .. } => {}
            NodeKind::Chance { outcomes } => {
                for &(_, c) in outcomes.iter().rev() {
                    stack.push((c, cur));
                }
            }
            NodeKind::Decision { seat: s, infoset, children } => {
                if *s != seat {
                    for &c in children.iter().rev() {
                        stack.push((c, cur));
                    }
                    continue;
                }
                if idx.first_seq[*infoset] == usize::MAX {
                    let base = idx.entries.len();
                    idx.first_seq[*infoset] = base;
                    idx.infoset_parent[*infoset] = cur;
                    idx.infosets.push(*infoset);
                    for a in 0..children.len() {
                        idx.entries.push(Some((*infoset, a)));
                        idx.parent.push(cur);
                        idx.children_infosets.push(Vec::new());
                    }
                    idx.children_infosets[cur].push(*infoset);
                } else {
                    debug_assert_eq!(idx.infoset_parent[*infoset], cur, "perfect recall");
                }
                let base = idx.first_seq[*infoset];
                for (a, &c) in children.iter().enumerate().rev() {
                    stack.push((c, base + a));
                }
            }
        }
    }
    idx
}

// ---------------------------------------------------------------------------
// Terminal records

/// Per-leaf data under a seat assignment: the last sequence of each player
/// on the path and the chance-weighted team payoff.
#[derive(Debug, Clone, Copy)]
pub struct TerminalRecord {
    pub leaf: NodeId,
    pub seq_t1: SeqId,
    pub seq_t2: SeqId,
    pub seq_opp: SeqId,
    pub team_payoff: f64,
}

pub fn terminal_records(
    game: &Game,
    assignment: SeatAssignment,
    indices: &[SequenceIndex; NUM_SEATS],
) -> Vec<TerminalRecord> {
    let (t1, t2, opp) = (assignment.t1(), assignment.t2(), assignment.opponent);
    let mut out = Vec::new();
    let mut stack: Vec<(NodeId, [SeqId; NUM_SEATS])> = vec![(game.root, [EMPTY_SEQ; NUM_SEATS])];
    while let Some((id, seqs)) = stack.pop() {
        match &game.nodes[id] {
            NodeKind::Terminal { payoffs, chance_reach } => {
                out.push(TerminalRecord {
                    leaf: id,
                    seq_t1: seqs[t1],
                    seq_t2: seqs[t2],
                    seq_opp: seqs[opp],
                    team_payoff: (payoffs[t1] + payoffs[t2]) * chance_reach,
                });
            }
            NodeKind::Chance { outcomes } => {
                for &(_, c) in outcomes.iter().rev() {
                    stack.push((c, seqs));
                }
            }
            NodeKind::Decision { seat, infoset, children } => {
                for (a, &c) in children.iter().enumerate().rev() {
                    let mut s = seqs;
                    s[*seat] = indices[*seat].seq(*infoset, a);
                    stack.push((c, s));
                }
            }
        }
    }
    // Leaf order: sort by node id for a stable, traversal-independent order.
    out.sort_by_key(|r| r.leaf);
    out
}

// ---------------------------------------------------------------------------
// Sequence-form strategies

#[derive(Debug, Clone)]
pub struct SequenceFormStrategy {
    pub seat: usize,
    pub values: Vec<f64>,
}

impl SequenceFormStrategy {
    /// Max violation of the flow constraints (values[∅]=1, per-infoset mass
    /// conservation, nonnegativity).
    pub fn flow_violation(&self, idx: &SequenceIndex) -> f64 {
        let mut worst = (self.values[EMPTY_SEQ] - 1.0).abs();
        for &v in &self.values {
            worst = worst.max(-v);
        }
        for &i in &idx.infosets {
            let base = idx.first_seq[i];
            let count = idx.num_actions(i);
            let sum: f64 = (0..count).map(|a| self.values[base + a]).sum();
            worst = worst.max((sum - self.values[idx.infoset_parent[i]]).abs());
        }
        worst
    }

    /// Uniform behavioral play in sequence form.
    pub fn uniform(game: &Game, idx: &SequenceIndex) -> Self {
        let mut values = vec![0.0; idx.num_sequences()];
        values[EMPTY_SEQ] = 1.0;
        for &i in &idx.infosets {
            let base = idx.first_seq[i];
            let n = game.infosets[i].actions.len();
            let share = values[idx.infoset_parent[i]] / n as f64;
            for a in 0..n {
                values[base + a] = share;
            }
        }
        values.iter().for_each(|v| debug_assert!(*v >= 0.0));
        SequenceFormStrategy { seat: idx.seat, values }
    }
}

// ---------------------------------------------------------------------------
// Opponent best response

/// Minimum over opponent sequence-form strategies of Σ_leaf coeff(leaf) ·
/// y[σ_opp(leaf)], by bottom-up dynamic programming over the opponent's
/// sequence tree. `leaf_values` is aligned with `records`.
pub fn best_response_value(
    opp_index: &SequenceIndex,
    records: &[TerminalRecord],
    leaf_values: &[f64],
) -> f64 {
    assert_eq!(records.len(), leaf_values.len());
    let mut direct = vec![0.0; opp_index.num_sequences()];
    for (r, &v) in records.iter().zip(leaf_values) {
        direct[r.seq_opp] += v;
    }
    seq_value(opp_index, &direct, EMPTY_SEQ)
}

fn seq_value(idx: &SequenceIndex, direct: &[f64], seq: SeqId) -> f64 {
    let mut v = direct[seq];
    for &i in &idx.children_infosets[seq] {
        let base = idx.first_seq[i];
        let mut best = f64::INFINITY;
        for a in 0..idx.num_actions(i) {
            best = best.min(seq_value(idx, direct, base + a));
        }
        v += best;
    }
    v
}

/// Expected utilities of all three seats when every decision node plays
/// uniformly; used as an independent cross-check of terminal records.
pub fn uniform_play_values(game: &Game) -> [f64; NUM_SEATS] {
    fn walk(game: &Game, id: NodeId, w: f64, acc: &mut [f64; NUM_SEATS]) {
        match &game.nodes[id] {
            NodeKind::Terminal { payoffs, .. } => {
                for s in 0..NUM_SEATS {
                    acc[s] += w * payoffs[s];
                }
            }
            NodeKind::Chance { outcomes } => {
                for &(p, c) in outcomes {
                    walk(game, c, w * p, acc);
                }
            }
            NodeKind::Decision { children, .. } => {
                let share = w / children.len() as f64;
                for &c in children {
                    walk(game, c, share, acc);
                }
            }
        }
    }
    let mut acc = [0.0; NUM_SEATS];
    walk(game, game.root, 1.0, &mut acc);
    acc
}
