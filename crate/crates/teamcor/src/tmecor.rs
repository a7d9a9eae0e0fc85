//! Team-maxmin solvers with a coordination device, for two team seats
//! against one opponent in a zero-sum three-seat game.
//!
//! Three algorithms over the same instance data: a direct LP (exact only on
//! triangle-free instances, refused otherwise), a fixed-support MIP over a
//! bounded number of semi-randomized plan copies, and column generation with
//! self-play seeding whose pricing problem tries an LP relaxation first and
//! falls back to a MIP over semi-randomized plans.

use crate::cfr::{seed_columns, SeedConfig};
use crate::correlation::{
    is_semi_randomized, CorrelationPlan, PurePlan, RelevantPairIndex, TeamMember, VsfSystem,
    infoset_connectivity, relevant_pairs, triangle_freeness, vsf_constraints,
};
use crate::efg::{
    best_response_value, build_sequence_index, terminal_records, Game, SeatAssignment,
    SequenceFormStrategy, SequenceIndex, TerminalRecord, EMPTY_SEQ, NUM_SEATS,
};
use linsolve::backend::{BackendError, SolverBackend};
use linsolve::{Model, Relation, Sense, Status, VarKind};

/// Columns or plan coordinates below this weight are dropped from reported
/// supports.
pub const SUPPORT_EPS: f64 = 1e-9;

/// Everything the solvers need about one (game, opponent-seat) instance.
pub struct TeamInstance {
    pub game: Game,
    pub assignment: SeatAssignment,
    pub indices: [SequenceIndex; NUM_SEATS],
    pub records: Vec<TerminalRecord>,
    pub pairs: RelevantPairIndex,
    pub vsf: VsfSystem,
    pub triangle_free: bool,
}

impl TeamInstance {
    pub fn new(game: Game, opponent_seat: usize) -> Self {
        let assignment = SeatAssignment::new(opponent_seat);
        let indices = [
            build_sequence_index(&game, 0),
            build_sequence_index(&game, 1),
            build_sequence_index(&game, 2),
        ];
        let records = terminal_records(&game, assignment, &indices);
        let connectivity = infoset_connectivity(&game, assignment);
        let idx1 = &indices[assignment.t1()];
        let idx2 = &indices[assignment.t2()];
        let triangle_free = triangle_freeness(&connectivity, idx1, idx2);
        let pairs = relevant_pairs(idx1, idx2, &records, connectivity);
        let vsf = vsf_constraints(&pairs, idx1, idx2);
        TeamInstance { game, assignment, indices, records, pairs, vsf, triangle_free }
    }

    pub fn idx1(&self) -> &SequenceIndex {
        &self.indices[self.assignment.t1()]
    }

    pub fn idx2(&self) -> &SequenceIndex {
        &self.indices[self.assignment.t2()]
    }

    pub fn opp_idx(&self) -> &SequenceIndex {
        &self.indices[self.assignment.opponent]
    }

    /// Value the opponent can hold the team to when it plays `plan`.
    pub fn best_response(&self, plan: &CorrelationPlan) -> f64 {
        let leaf_values: Vec<f64> = self
            .records
            .iter()
            .zip(&self.pairs.leaf_pairs)
            .map(|(r, &pid)| r.team_payoff * plan.values[pid])
            .collect();
        best_response_value(self.opp_idx(), &self.records, &leaf_values)
    }

    /// Chance-weighted team payoff aggregated per opponent sequence.
    pub fn beta_coefficients(&self, plan: &CorrelationPlan) -> Vec<f64> {
        let mut beta = vec![0.0; self.opp_idx().num_sequences()];
        for (r, &pid) in self.records.iter().zip(&self.pairs.leaf_pairs) {
            beta[r.seq_opp] += r.team_payoff * plan.values[pid];
        }
        beta
    }
}

/// Size and shape figures for one (game, opponent-seat) instance.
#[derive(Debug, Clone, Copy)]
pub struct StructureSummary {
    /// Sequence count per seat (empty sequence included).
    pub num_sequences: [usize; NUM_SEATS],
    pub num_leaves: usize,
    pub relevant_pairs: usize,
    pub triangle_free: bool,
    /// Relevant pairs per leaf.
    pub pairs_per_leaf: f64,
    /// Full team sequence product over relevant pairs: how much the
    /// relevance restriction shrinks the joint space.
    pub product_per_pair: f64,
}

impl TeamInstance {
    pub fn structure(&self) -> StructureSummary {
        let num_sequences = [
            self.indices[0].num_sequences(),
            self.indices[1].num_sequences(),
            self.indices[2].num_sequences(),
        ];
        let pairs = self.pairs.len();
        let product = self.pairs.num_seq1 * self.pairs.num_seq2;
        StructureSummary {
            num_sequences,
            num_leaves: self.records.len(),
            relevant_pairs: pairs,
            triangle_free: self.triangle_free,
            pairs_per_leaf: pairs as f64 / self.records.len() as f64,
            product_per_pair: product as f64 / pairs as f64,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TmecorError {
    #[error("instance is not triangle-free; the direct LP is exact only on triangle-free instances")]
    NotTriangleFree,
    #[error("column generation did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("solver returned status {0:?}")]
    Solver(Status),
}

#[derive(Debug, Clone)]
pub struct SupportEntry {
    pub weight: f64,
    pub plan: CorrelationPlan,
}

#[derive(Debug, Clone)]
pub struct TmecorSolution {
    pub value: f64,
    pub plan: CorrelationPlan,
    /// Opponent best-response value against `plan`.
    pub best_response: f64,
    /// |value - best_response|: how tight the reported plan certifies the
    /// reported value.
    pub certificate_gap: f64,
    /// Mixture support: the weighted plans whose convex combination is
    /// `plan` (a single unit-weight entry for the direct LP).
    pub support: Vec<SupportEntry>,
    pub iterations: usize,
    pub relaxation_count: usize,
    pub mip_count: usize,
    /// Master objective after each column-generation iteration (empty for
    /// the other algorithms); nondecreasing.
    pub master_values: Vec<f64>,
    pub seeded_columns: usize,
}

fn check_optimal(status: Status) -> Result<(), TmecorError> {
    if status == Status::Optimal {
        Ok(())
    } else {
        Err(TmecorError::Solver(status))
    }
}

// ---------------------------------------------------------------------------
// Direct LP

/// Builds the one-shot LP: maximize the root value variable subject to the
/// plan flow system and, per opponent sequence, the constraint that the
/// opponent's sequence values dominate the team's realized payoff.
///
/// Variable layout: plan coordinates first, then the root value variable,
/// then one value variable per opponent infoset.
pub fn direct_model(inst: &TeamInstance) -> Model {
    let np = inst.pairs.len();
    let opp = inst.opp_idx();
    let mut m = Model::new(Sense::Maximize);
    for _ in 0..np {
        m.add_var(0.0, 0.0, f64::INFINITY, VarKind::Continuous);
    }
    let v_root = m.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY, VarKind::Continuous);
    let mut v_of = vec![usize::MAX; inst.game.infosets.len()];
    for &i in &opp.infosets {
        v_of[i] = m.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY, VarKind::Continuous);
    }

    for row in &inst.vsf.rows {
        m.add_row(Relation::Eq, row.rhs, &row.coeffs);
    }

    let mut leaf_terms: Vec<Vec<(usize, f64)>> = vec![Vec::new(); opp.num_sequences()];
    for (r, &pid) in inst.records.iter().zip(&inst.pairs.leaf_pairs) {
        leaf_terms[r.seq_opp].push((pid, -r.team_payoff));
    }
    for s in 0..opp.num_sequences() {
        let mut coeffs = leaf_terms[s].clone();
        let v_s = if s == EMPTY_SEQ { v_root } else { v_of[opp.entries[s].unwrap().0] };
        coeffs.push((v_s, 1.0));
        for &i in &opp.children_infosets[s] {
            coeffs.push((v_of[i], -1.0));
        }
        m.add_row(Relation::Le, 0.0, &coeffs);
    }
    m
}

pub fn direct_lp(
    inst: &TeamInstance,
    backend: &dyn SolverBackend,
) -> Result<TmecorSolution, TmecorError> {
    if !inst.triangle_free {
        return Err(TmecorError::NotTriangleFree);
    }
    let model = direct_model(inst);
    let sol = backend.solve_lp(&model)?;
    check_optimal(sol.status)?;
    let plan = CorrelationPlan { values: sol.primal[..inst.pairs.len()].to_vec() };
    let best_response = inst.best_response(&plan);
    Ok(TmecorSolution {
        value: sol.objective,
        best_response,
        certificate_gap: (sol.objective - best_response).abs(),
        support: vec![SupportEntry { weight: 1.0, plan: plan.clone() }],
        plan,
        iterations: 0,
        relaxation_count: 0,
        mip_count: 0,
        master_values: Vec::new(),
        seeded_columns: 0,
    })
}

// ---------------------------------------------------------------------------
// Column generation

#[derive(Debug, Clone)]
pub struct CgConfig {
    pub seed: SeedConfig,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Alternate which team member the pricing step forces deterministic
    /// (experimental; off by default).
    pub alternate_pricing: bool,
}

impl Default for CgConfig {
    fn default() -> Self {
        CgConfig {
            seed: SeedConfig::default(),
            tolerance: 1e-6,
            max_iterations: 10_000,
            alternate_pricing: false,
        }
    }
}

/// Restricted master over the given per-column payoff aggregates: maximize
/// the root value subject to the opponent's value constraints against the
/// column mixture and a convexity row.
///
/// Row layout: one row per opponent sequence (in sequence order), then the
/// convexity row; the duals are read back in the same order.
pub fn build_master(inst: &TeamInstance, betas: &[Vec<f64>]) -> Model {
    let opp = inst.opp_idx();
    let mut m = Model::new(Sense::Maximize);
    let lambdas: Vec<usize> = betas
        .iter()
        .map(|_| m.add_var(0.0, 0.0, f64::INFINITY, VarKind::Continuous))
        .collect();
    let v_root = m.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY, VarKind::Continuous);
    let mut v_of = vec![usize::MAX; inst.game.infosets.len()];
    for &i in &opp.infosets {
        v_of[i] = m.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY, VarKind::Continuous);
    }
    for s in 0..opp.num_sequences() {
        let mut coeffs: Vec<(usize, f64)> = Vec::new();
        let v_s = if s == EMPTY_SEQ { v_root } else { v_of[opp.entries[s].unwrap().0] };
        coeffs.push((v_s, 1.0));
        for &i in &opp.children_infosets[s] {
            coeffs.push((v_of[i], -1.0));
        }
        for (i, beta) in betas.iter().enumerate() {
            if beta[s] != 0.0 {
                coeffs.push((lambdas[i], -beta[s]));
            }
        }
        m.add_row(Relation::Le, 0.0, &coeffs);
    }
    let convexity: Vec<(usize, f64)> = lambdas.iter().map(|&j| (j, 1.0)).collect();
    m.add_row(Relation::Eq, 1.0, &convexity);
    m
}

/// Pricing problem: maximize the dual-weighted team payoff over the plan
/// flow polytope. With `binary_member` set, that member's marginal
/// coordinates are binary, restricting the search to semi-randomized plans.
pub fn pricing_model(
    inst: &TeamInstance,
    objective: &[f64],
    binary_member: Option<TeamMember>,
) -> Model {
    let mut m = Model::new(Sense::Maximize);
    for &c in objective {
        m.add_var(c, 0.0, 1.0, VarKind::Continuous);
    }
    if let Some(member) = binary_member {
        match member {
            TeamMember::TeamOne => {
                for s1 in 1..inst.pairs.num_seq1 {
                    m.set_kind(inst.pairs.marginal1(s1), VarKind::Binary);
                }
            }
            TeamMember::TeamTwo => {
                for s2 in 1..inst.pairs.num_seq2 {
                    m.set_kind(inst.pairs.marginal2(s2), VarKind::Binary);
                }
            }
        }
    }
    for row in &inst.vsf.rows {
        m.add_row(Relation::Eq, row.rhs, &row.coeffs);
    }
    m
}

fn column_key(values: &[f64]) -> Vec<i64> {
    values.iter().map(|v| (v * 1e9).round() as i64).collect()
}

pub fn column_generation(
    inst: &TeamInstance,
    backend: &dyn SolverBackend,
    config: &CgConfig,
) -> Result<TmecorSolution, TmecorError> {
    let mut columns =
        seed_columns(&inst.game, inst.assignment, &inst.indices, &inst.pairs, &config.seed);
    let seeded_columns = columns.len();
    let mut betas: Vec<Vec<f64>> = columns.iter().map(|c| inst.beta_coefficients(c)).collect();
    let mut known: std::collections::HashSet<Vec<i64>> =
        columns.iter().map(|c| column_key(&c.values)).collect();

    let n_opp = inst.opp_idx().num_sequences();
    let np = inst.pairs.len();
    let mut master_values = Vec::new();
    let mut relaxation_count = 0usize;
    let mut mip_count = 0usize;

    for iteration in 1..=config.max_iterations {
        let master = build_master(inst, &betas);
        let sol = backend.solve_lp(&master)?;
        check_optimal(sol.status)?;
        master_values.push(sol.objective);
        let gamma = &sol.duals[..n_opp];
        let gamma_conv = sol.duals[n_opp];

        // Pricing objective over plan coordinates.
        let mut price = vec![0.0; np];
        for (r, &pid) in inst.records.iter().zip(&inst.pairs.leaf_pairs) {
            price[pid] += r.team_payoff * gamma[r.seq_opp];
        }
        let member = if config.alternate_pricing && iteration % 2 == 0 {
            TeamMember::TeamOne
        } else {
            TeamMember::TeamTwo
        };

        let finish = |sol: &linsolve::Solution,
                      columns: &[CorrelationPlan],
                      master_values: Vec<f64>,
                      relaxation_count: usize,
                      mip_count: usize,
                      iteration: usize| {
            let mut plan = CorrelationPlan { values: vec![0.0; np] };
            let mut support = Vec::new();
            for (i, col) in columns.iter().enumerate() {
                let w = sol.primal[i];
                if w > SUPPORT_EPS {
                    plan.add_scaled(w, col);
                    support.push(SupportEntry { weight: w, plan: col.clone() });
                }
            }
            let best_response = inst.best_response(&plan);
            TmecorSolution {
                value: sol.objective,
                best_response,
                certificate_gap: (sol.objective - best_response).abs(),
                support,
                plan,
                iterations: iteration,
                relaxation_count,
                mip_count,
                master_values,
                seeded_columns,
            }
        };

        let relax = backend.solve_lp(&pricing_model(inst, &price, None))?;
        check_optimal(relax.status)?;
        if relax.objective - gamma_conv <= config.tolerance {
            return Ok(finish(&sol, &columns, master_values, relaxation_count, mip_count, iteration));
        }

        let candidate = CorrelationPlan { values: relax.primal[..np].to_vec() };
        let mut added = false;
        if is_semi_randomized(&candidate, member, &inst.pairs, 1e-6) {
            relaxation_count += 1;
            if known.insert(column_key(&candidate.values)) {
                betas.push(inst.beta_coefficients(&candidate));
                columns.push(candidate);
                added = true;
            }
        } else {
            mip_count += 1;
            let (mip_sol, pool) =
                backend.solve_mip(&pricing_model(inst, &price, Some(member)))?;
            check_optimal(mip_sol.status)?;
            if mip_sol.objective - gamma_conv <= config.tolerance {
                return Ok(finish(
                    &sol,
                    &columns,
                    master_values,
                    relaxation_count,
                    mip_count,
                    iteration,
                ));
            }
            // Every integer-feasible plan found during the search is a valid
            // column; add them all.
            for entry in &pool.entries {
                let col = CorrelationPlan { values: entry.primal[..np].to_vec() };
                if known.insert(column_key(&col.values)) {
                    betas.push(inst.beta_coefficients(&col));
                    columns.push(col);
                    added = true;
                }
            }
        }
        if !added {
            // Numerically stalled: the pricer claims an improving column that
            // the master already holds. Accept the current master solution.
            return Ok(finish(&sol, &columns, master_values, relaxation_count, mip_count, iteration));
        }
    }
    Err(TmecorError::NonConvergence { iterations: config.max_iterations })
}

// ---------------------------------------------------------------------------
// Fixed support

/// Exact MIP over a mixture of `n` semi-randomized plan copies. Copies
/// alternate which member is deterministic, starting with the second seat.
pub fn fixed_support_model(inst: &TeamInstance, n: usize) -> Model {
    assert!(n >= 1);
    let np = inst.pairs.len();
    let opp = inst.opp_idx();
    let mut m = Model::new(Sense::Maximize);

    // Per copy: a scaled plan block plus one binary per sequence of the
    // copy's deterministic member.
    let mut blocks = Vec::with_capacity(n);
    for copy in 0..n {
        let base = m.num_vars();
        for _ in 0..np {
            m.add_var(0.0, 0.0, 1.0, VarKind::Continuous);
        }
        let member = if copy % 2 == 0 { TeamMember::TeamTwo } else { TeamMember::TeamOne };
        let marginals: Vec<usize> = match member {
            TeamMember::TeamOne => (1..inst.pairs.num_seq1).map(|s| inst.pairs.marginal1(s)).collect(),
            TeamMember::TeamTwo => (1..inst.pairs.num_seq2).map(|s| inst.pairs.marginal2(s)).collect(),
        };
        let binaries: Vec<usize> =
            marginals.iter().map(|_| m.add_var(0.0, 0.0, 1.0, VarKind::Binary)).collect();
        blocks.push((base, marginals, binaries));
    }
    let v_root = m.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY, VarKind::Continuous);
    let mut v_of = vec![usize::MAX; inst.game.infosets.len()];
    for &i in &opp.infosets {
        v_of[i] = m.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY, VarKind::Continuous);
    }

    for (copy, (base, marginals, binaries)) in blocks.iter().enumerate() {
        let member = if copy % 2 == 0 { TeamMember::TeamTwo } else { TeamMember::TeamOne };
        let idx = match member {
            TeamMember::TeamOne => inst.idx1(),
            TeamMember::TeamTwo => inst.idx2(),
        };
        // Homogeneous flow rows; the copy's total weight is its root
        // coordinate, constrained only by the mixture row below.
        for row in &inst.vsf.rows[1..] {
            let coeffs: Vec<(usize, f64)> =
                row.coeffs.iter().map(|&(j, c)| (base + j, c)).collect();
            m.add_row(Relation::Eq, row.rhs, &coeffs);
        }
        // Deterministic-member linearization: marginal = 0 when its binary
        // is 0, = the copy weight when 1.
        for (&pid, &b) in marginals.iter().zip(binaries) {
            m.add_row(Relation::Le, 0.0, &[(base + pid, 1.0), (b, -1.0)]);
            m.add_row(Relation::Le, 1.0, &[(*base, 1.0), (base + pid, -1.0), (b, 1.0)]);
        }
        // Pure-strategy flow on the binaries: a reduced deterministic
        // strategy picks at most one action per infoset and only below its
        // selected sequences. Off-path binaries of any integral solution can
        // be zeroed without changing the plan, so this is valid — and it
        // tightens the relaxation from a box to the strategy polytope.
        for s in 0..idx.num_sequences() {
            for &i in &idx.children_infosets[s] {
                let mut coeffs: Vec<(usize, f64)> = (0..idx.num_actions(i))
                    .map(|a| (binaries[idx.seq(i, a) - 1], 1.0))
                    .collect();
                let rhs = if s == EMPTY_SEQ {
                    1.0
                } else {
                    coeffs.push((binaries[s - 1], -1.0));
                    0.0
                };
                m.add_row(Relation::Le, rhs, &coeffs);
            }
        }
    }
    // Copy weights mix to one.
    let mix: Vec<(usize, f64)> = blocks.iter().map(|&(base, _, _)| (base, 1.0)).collect();
    m.add_row(Relation::Eq, 1.0, &mix);
    // Values are reported to 1e-4; accept incumbents within a far smaller
    // relative gap of the bound rather than closing the last slice of the
    // tree exactly.
    m.set_mip_gap(2e-5);

    // Opponent value rows against the summed plan.
    let mut leaf_terms: Vec<Vec<(usize, f64)>> = vec![Vec::new(); opp.num_sequences()];
    for (r, &pid) in inst.records.iter().zip(&inst.pairs.leaf_pairs) {
        leaf_terms[r.seq_opp].push((pid, -r.team_payoff));
    }
    for s in 0..opp.num_sequences() {
        let mut coeffs: Vec<(usize, f64)> = Vec::new();
        let v_s = if s == EMPTY_SEQ { v_root } else { v_of[opp.entries[s].unwrap().0] };
        coeffs.push((v_s, 1.0));
        for &i in &opp.children_infosets[s] {
            coeffs.push((v_of[i], -1.0));
        }
        for &(pid, c) in &leaf_terms[s] {
            for &(base, _, _) in &blocks {
                coeffs.push((base + pid, c));
            }
        }
        m.add_row(Relation::Le, 0.0, &coeffs);
    }
    m
}

/// Which member is deterministic in the given mixture copy. Copies
/// alternate, starting with the second seat.
fn copy_member(copy: usize) -> TeamMember {
    if copy % 2 == 0 { TeamMember::TeamTwo } else { TeamMember::TeamOne }
}

/// Greedily splits a scaled sequence-form flow (`y[∅]` carries the total
/// mass) into at most `cap` pure-strategy footprints: each round traces the
/// largest-mass action at every reachable infoset, subtracts the bottleneck
/// weight along the trace, and repeats. The first footprint is the plain
/// argmax rounding of `y`.
fn pure_decomposition(idx: &SequenceIndex, y: &[f64], cap: usize) -> Vec<Vec<bool>> {
    let mut y = y.to_vec();
    let mut out: Vec<Vec<bool>> = Vec::new();
    while out.len() < cap && y[EMPTY_SEQ] > 1e-6 {
        let mut foot = vec![false; idx.num_sequences()];
        foot[EMPTY_SEQ] = true;
        let mut selected = vec![EMPTY_SEQ];
        let mut weight = y[EMPTY_SEQ];
        let mut stack = vec![EMPTY_SEQ];
        while let Some(s) = stack.pop() {
            for &i in &idx.children_infosets[s] {
                let mut pick = 0usize;
                let mut best = f64::NEG_INFINITY;
                for a in 0..idx.num_actions(i) {
                    let v = y[idx.seq(i, a)];
                    if v > best {
                        best = v;
                        pick = a;
                    }
                }
                let sel = idx.seq(i, pick);
                foot[sel] = true;
                selected.push(sel);
                // Only sequences that still carry mass bound the weight;
                // below exhausted branches the argmax is an arbitrary
                // completion.
                if y[s] > 1e-9 {
                    weight = weight.min(best.max(0.0));
                }
                stack.push(sel);
            }
        }
        if out.contains(&foot) {
            break;
        }
        out.push(foot);
        for &s in &selected {
            y[s] = (y[s] - weight).max(0.0);
        }
    }
    out
}

/// LP value of a fixed profile of pure strategies, one per copy, for the
/// copies' deterministic members. With those fixed, each copy's plan is the
/// product of the footprint and the randomizing member's scaled strategy,
/// so only the strategy vectors and the opponent's values remain — a model
/// two orders of magnitude smaller than the full fixed-support MIP.
///
/// Variable layout: one scaled strategy block per copy (the randomizing
/// member's sequences), then the root value variable, then one value
/// variable per opponent infoset — mirroring the tail of the MIP layout.
fn profile_model(inst: &TeamInstance, footprints: &[Vec<bool>]) -> Model {
    let opp = inst.opp_idx();
    let mut m = Model::new(Sense::Maximize);
    let mut bases = Vec::with_capacity(footprints.len());
    for (copy, _) in footprints.iter().enumerate() {
        let idx = match copy_member(copy) {
            TeamMember::TeamTwo => inst.idx1(),
            TeamMember::TeamOne => inst.idx2(),
        };
        let base = m.num_vars();
        for _ in 0..idx.num_sequences() {
            m.add_var(0.0, 0.0, 1.0, VarKind::Continuous);
        }
        for &i in &idx.infosets {
            let mut coeffs: Vec<(usize, f64)> =
                (0..idx.num_actions(i)).map(|a| (base + idx.seq(i, a), 1.0)).collect();
            coeffs.push((base + idx.infoset_parent[i], -1.0));
            m.add_row(Relation::Eq, 0.0, &coeffs);
        }
        bases.push(base);
    }
    let v_root = m.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY, VarKind::Continuous);
    let mut v_of = vec![usize::MAX; inst.game.infosets.len()];
    for &i in &opp.infosets {
        v_of[i] = m.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY, VarKind::Continuous);
    }
    let mix: Vec<(usize, f64)> = bases.iter().map(|&b| (b + EMPTY_SEQ, 1.0)).collect();
    m.add_row(Relation::Eq, 1.0, &mix);

    let mut leaf_terms: Vec<Vec<(usize, f64)>> = vec![Vec::new(); opp.num_sequences()];
    for r in &inst.records {
        for (copy, foot) in footprints.iter().enumerate() {
            let (det_seq, mix_seq) = match copy_member(copy) {
                TeamMember::TeamTwo => (r.seq_t2, r.seq_t1),
                TeamMember::TeamOne => (r.seq_t1, r.seq_t2),
            };
            if foot[det_seq] {
                leaf_terms[r.seq_opp].push((bases[copy] + mix_seq, -r.team_payoff));
            }
        }
    }
    for s in 0..opp.num_sequences() {
        let mut coeffs = leaf_terms[s].clone();
        let v_s = if s == EMPTY_SEQ { v_root } else { v_of[opp.entries[s].unwrap().0] };
        coeffs.push((v_s, 1.0));
        for &i in &opp.children_infosets[s] {
            coeffs.push((v_of[i], -1.0));
        }
        m.add_row(Relation::Le, 0.0, &coeffs);
    }
    m
}

/// Expands a profile LP solution into a primal vector for the full
/// fixed-support MIP: each copy's pair block is the product of its strategy
/// block and footprint, the binaries are the footprint, and the value
/// variables carry over.
fn profile_hint(
    inst: &TeamInstance,
    footprints: &[Vec<bool>],
    sol: &linsolve::Solution,
    num_vars: usize,
) -> Vec<f64> {
    let np = inst.pairs.len();
    let mut hint = vec![0.0; num_vars];
    let mut mip_base = 0usize;
    let mut lp_base = 0usize;
    for (copy, foot) in footprints.iter().enumerate() {
        let mix_len = match copy_member(copy) {
            TeamMember::TeamTwo => inst.pairs.num_seq1,
            TeamMember::TeamOne => inst.pairs.num_seq2,
        };
        for (pid, &(s1, s2)) in inst.pairs.pairs.iter().enumerate() {
            let (det_seq, mix_seq) = match copy_member(copy) {
                TeamMember::TeamTwo => (s2, s1),
                TeamMember::TeamOne => (s1, s2),
            };
            if foot[det_seq] {
                hint[mip_base + pid] = sol.primal[lp_base + mix_seq];
            }
        }
        for (k, &f) in foot[1..].iter().enumerate() {
            hint[mip_base + np + k] = if f { 1.0 } else { 0.0 };
        }
        mip_base += np + copy_binary_count(inst, copy);
        lp_base += mix_len;
    }
    // Both layouts end with the root value then the opponent infoset values.
    hint[mip_base..].copy_from_slice(&sol.primal[lp_base..]);
    hint
}

/// Builds an integer-feasible starting point for the fixed-support search.
///
/// Candidate pure strategies for each copy's deterministic member come from
/// greedy decompositions of that member's marginals in the MIP relaxation
/// and in the one-shot LP (the latter is a relaxation of the true value on
/// instances that are not triangle-free, but its vertices are still good
/// candidates). A profile — one candidate per copy — is scored exactly by
/// the small profile LP, and coordinate ascent over the candidate sets
/// picks the start. In practice this lands at or very near the relaxation
/// bound, letting the branch-and-bound prune almost everything.
fn fixed_support_start(
    inst: &TeamInstance,
    backend: &dyn SolverBackend,
    model: &Model,
    n: usize,
) -> Option<Vec<f64>> {
    const CANDIDATE_CAP: usize = 8;
    let relax = backend.solve_lp(model).ok()?;
    if relax.status != Status::Optimal {
        return None;
    }
    let direct = backend
        .solve_lp(&direct_model(inst))
        .ok()
        .filter(|s| s.status == Status::Optimal);

    let mut candidates: Vec<Vec<Vec<bool>>> = Vec::with_capacity(n);
    let mut base = 0usize;
    for copy in 0..n {
        let member = copy_member(copy);
        let idx = match member {
            TeamMember::TeamTwo => inst.idx2(),
            TeamMember::TeamOne => inst.idx1(),
        };
        let marginal = |s: usize| match member {
            TeamMember::TeamTwo => inst.pairs.marginal2(s),
            TeamMember::TeamOne => inst.pairs.marginal1(s),
        };
        let y: Vec<f64> =
            (0..idx.num_sequences()).map(|s| relax.primal[base + marginal(s)]).collect();
        let mut list = pure_decomposition(idx, &y, CANDIDATE_CAP);
        if let Some(d) = &direct {
            let yd: Vec<f64> = (0..idx.num_sequences()).map(|s| d.primal[marginal(s)]).collect();
            for foot in pure_decomposition(idx, &yd, CANDIDATE_CAP) {
                if !list.contains(&foot) {
                    list.push(foot);
                }
            }
        }
        candidates.push(list);
        base += inst.pairs.len() + copy_binary_count(inst, copy);
    }

    let eval = |profile: &[Vec<bool>]| -> Option<(f64, linsolve::Solution)> {
        let sol = backend.solve_lp(&profile_model(inst, profile)).ok()?;
        (sol.status == Status::Optimal).then(|| (sol.objective, sol))
    };
    let mut profile: Vec<Vec<bool>> = candidates.iter().map(|c| c[0].clone()).collect();
    let (mut best_val, mut best_sol) = eval(&profile)?;
    for _pass in 0..2 {
        let mut improved = false;
        for copy in 0..n {
            for cand in &candidates[copy] {
                if *cand == profile[copy] {
                    continue;
                }
                let mut trial = profile.clone();
                trial[copy] = cand.clone();
                if let Some((v, s)) = eval(&trial) {
                    if v > best_val + 1e-9 {
                        best_val = v;
                        best_sol = s;
                        profile = trial;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    if std::env::var("LINSOLVE_MIP_DEBUG").is_ok() {
        eprintln!("start profile value {best_val} (relaxation {})", relax.objective);
    }
    Some(profile_hint(inst, &profile, &best_sol, model.num_vars()))
}

pub fn fixed_support_mip(
    inst: &TeamInstance,
    backend: &dyn SolverBackend,
    n: usize,
) -> Result<TmecorSolution, TmecorError> {
    let mut model = fixed_support_model(inst, n);
    if let Some(hint) = fixed_support_start(inst, backend, &model, n) {
        model.set_start_hint(hint);
    }
    let (sol, _pool) = backend.solve_mip(&model)?;
    check_optimal(sol.status)?;
    let np = inst.pairs.len();
    let mut plan = CorrelationPlan { values: vec![0.0; np] };
    let mut support = Vec::new();
    // Block bases depend on per-copy binary counts; recompute the layout.
    let mut base = 0usize;
    for copy in 0..n {
        let weight = sol.primal[base];
        for j in 0..np {
            plan.values[j] += sol.primal[base + j];
        }
        if weight > SUPPORT_EPS {
            // Report the copy as an unscaled plan with its mixture weight.
            let values = (0..np).map(|j| sol.primal[base + j] / weight).collect();
            support.push(SupportEntry { weight, plan: CorrelationPlan { values } });
        }
        base += np + copy_binary_count(inst, copy);
    }
    let best_response = inst.best_response(&plan);
    Ok(TmecorSolution {
        value: sol.objective,
        best_response,
        certificate_gap: (sol.objective - best_response).abs(),
        support,
        plan,
        iterations: 0,
        relaxation_count: 0,
        mip_count: 1,
        master_values: Vec::new(),
        seeded_columns: 0,
    })
}

fn copy_binary_count(inst: &TeamInstance, copy: usize) -> usize {
    if copy % 2 == 0 {
        inst.pairs.num_seq2 - 1
    } else {
        inst.pairs.num_seq1 - 1
    }
}

// ---------------------------------------------------------------------------
// Decomposition

/// Splits a semi-randomized plan into the randomizing member's sequence-form
/// strategy and the deterministic member's pure plan.
pub fn decompose_semi_randomized(
    inst: &TeamInstance,
    plan: &CorrelationPlan,
    deterministic_member: TeamMember,
) -> (SequenceFormStrategy, PurePlan) {
    let (mix_idx, det_idx) = match deterministic_member {
        TeamMember::TeamTwo => (inst.idx1(), inst.idx2()),
        TeamMember::TeamOne => (inst.idx2(), inst.idx1()),
    };
    let mix_marginal = |s: usize| match deterministic_member {
        TeamMember::TeamTwo => plan.values[inst.pairs.marginal1(s)],
        TeamMember::TeamOne => plan.values[inst.pairs.marginal2(s)],
    };
    let det_marginal = |s: usize| match deterministic_member {
        TeamMember::TeamTwo => plan.values[inst.pairs.marginal2(s)],
        TeamMember::TeamOne => plan.values[inst.pairs.marginal1(s)],
    };

    let mix = SequenceFormStrategy {
        seat: mix_idx.seat,
        values: (0..mix_idx.num_sequences()).map(mix_marginal).collect(),
    };

    let mut actions = vec![None; inst.game.infosets.len()];
    for &i in &det_idx.infosets {
        if det_marginal(det_idx.infoset_parent[i]).round() != 1.0 {
            continue;
        }
        let base = det_idx.first_seq[i];
        for a in 0..det_idx.num_actions(i) {
            if det_marginal(base + a).round() == 1.0 {
                actions[i] = Some(a);
                break;
            }
        }
    }
    (mix, PurePlan { seat: det_idx.seat, actions })
}
