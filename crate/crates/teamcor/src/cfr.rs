//! Regret-matching⁺ self-play used to seed the column-generation master with
//! an initial set of deterministic team plans.
//!
//! All three seats update simultaneously each iteration: the two team seats
//! maximize the summed team payoff, the opponent its own. After each update
//! one pure plan per team seat is sampled from the current strategies; the
//! deduplicated pairs become initial columns.

use crate::correlation::{
    plan_from_pure_profile, CorrelationPlan, PurePlan, RelevantPairIndex,
};
use crate::efg::{
    Game, NodeKind, SeatAssignment, SequenceIndex, EMPTY_SEQ, NUM_SEATS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::HashSet;

/// Cumulative clamped regrets per seat, indexed by sequence id.
pub struct CfrState {
    regrets: [Vec<f64>; NUM_SEATS],
}

impl CfrState {
    pub fn new(indices: &[SequenceIndex; NUM_SEATS]) -> Self {
        let regrets = [
            vec![0.0; indices[0].num_sequences()],
            vec![0.0; indices[1].num_sequences()],
            vec![0.0; indices[2].num_sequences()],
        ];
        CfrState { regrets }
    }

    /// Current behavioral strategy of one seat: probability of each
    /// (infoset, action) sequence at its infoset, by regret matching with a
    /// uniform fallback.
    pub fn behavioral(&self, idx: &SequenceIndex) -> Vec<f64> {
        let reg = &self.regrets[idx.seat];
        let mut probs = vec![0.0; idx.num_sequences()];
        probs[EMPTY_SEQ] = 1.0;
        for &i in &idx.infosets {
            let base = idx.first_seq[i];
            let n = idx.num_actions(i);
            let total: f64 = (0..n).map(|a| reg[base + a].max(0.0)).sum();
            for a in 0..n {
                probs[base + a] = if total > 0.0 {
                    reg[base + a].max(0.0) / total
                } else {
                    1.0 / n as f64
                };
            }
        }
        probs
    }

    /// One simultaneous regret-matching⁺ update of all three seats.
    pub fn step(
        &mut self,
        game: &Game,
        assignment: SeatAssignment,
        indices: &[SequenceIndex; NUM_SEATS],
    ) {
        let strategies: [Vec<f64>; NUM_SEATS] = [
            self.behavioral(&indices[0]),
            self.behavioral(&indices[1]),
            self.behavioral(&indices[2]),
        ];
        for hero in 0..NUM_SEATS {
            let mut delta = vec![0.0; indices[hero].num_sequences()];
            walk(game, game.root, hero, assignment, &strategies, indices, 1.0, &mut delta);
            for (r, d) in self.regrets[hero].iter_mut().zip(&delta) {
                *r = (*r + d).max(0.0);
            }
        }
    }
}

/// Counterfactual-regret walk for one seat; returns the subtree value for
/// the hero under the current profile and accumulates regret deltas.
#[allow(clippy::too_many_arguments)]
fn walk(
    game: &Game,
    node: usize,
    hero: usize,
    assignment: SeatAssignment,
    strategies: &[Vec<f64>; NUM_SEATS],
    indices: &[SequenceIndex; NUM_SEATS],
    reach_other: f64,
    delta: &mut [f64],
) -> f64 {
    match &game.nodes[node] {
        NodeKind::Terminal { payoffs, .. } => {
            if hero == assignment.opponent {
                payoffs[hero]
            } else {
                payoffs[assignment.t1()] + payoffs[assignment.t2()]
            }
        }
        NodeKind::Chance { outcomes } => outcomes
            .iter()
            .map(|&(p, c)| {
                if p == 0.0 {
                    0.0
                } else {
                    p * walk(game, c, hero, assignment, strategies, indices, reach_other * p, delta)
                }
            })
            .sum(),
        NodeKind::Decision { seat, infoset, children } => {
            let idx = &indices[*seat];
            let base = idx.first_seq[*infoset];
            if *seat == hero {
                let values: Vec<f64> = children
                    .iter()
                    .map(|&c| walk(game, c, hero, assignment, strategies, indices, reach_other, delta))
                    .collect();
                let node_value: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(a, v)| strategies[*seat][base + a] * v)
                    .sum();
                for (a, v) in values.iter().enumerate() {
                    delta[base + a] += reach_other * (v - node_value);
                }
                node_value
            } else {
                children
                    .iter()
                    .enumerate()
                    .map(|(a, &c)| {
                        let p = strategies[*seat][base + a];
                        if p == 0.0 {
                            0.0
                        } else {
                            p * walk(
                                game,
                                c,
                                hero,
                                assignment,
                                strategies,
                                indices,
                                reach_other * p,
                                delta,
                            )
                        }
                    })
                    .sum()
            }
        }
    }
}

/// Samples a reduced pure plan from a behavioral strategy: one action at
/// each own-reachable infoset (parents first), `None` elsewhere.
pub fn sample_pure_plan(
    game: &Game,
    idx: &SequenceIndex,
    behavioral: &[f64],
    rng: &mut impl Rng,
) -> PurePlan {
    let mut actions: Vec<Option<usize>> = vec![None; game.infosets.len()];
    let mut consistent = vec![false; idx.num_sequences()];
    consistent[EMPTY_SEQ] = true;
    // Discovery order puts each infoset after its parent sequence's infoset.
    for &i in &idx.infosets {
        if !consistent[idx.infoset_parent[i]] {
            continue;
        }
        let base = idx.first_seq[i];
        let n = idx.num_actions(i);
        let draw: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = n - 1;
        for a in 0..n {
            acc += behavioral[base + a];
            if draw < acc {
                chosen = a;
                break;
            }
        }
        actions[i] = Some(chosen);
        consistent[base + chosen] = true;
    }
    PurePlan { seat: idx.seat, actions }
}

#[derive(Debug, Clone)]
pub struct SeedConfig {
    pub iterations: usize,
    pub rng_seed: u64,
}

impl Default for SeedConfig {
    fn default() -> Self {
        SeedConfig { iterations: 1000, rng_seed: 0 }
    }
}

/// Self-play seeding: returns the deduplicated sampled team plans as
/// correlation-plan columns.
pub fn seed_columns(
    game: &Game,
    assignment: SeatAssignment,
    indices: &[SequenceIndex; NUM_SEATS],
    pairs: &RelevantPairIndex,
    config: &SeedConfig,
) -> Vec<CorrelationPlan> {
    let idx1 = &indices[assignment.t1()];
    let idx2 = &indices[assignment.t2()];
    let mut state = CfrState::new(indices);
    let mut rng = ChaCha20Rng::seed_from_u64(config.rng_seed);
    let mut seen: HashSet<(PurePlan, PurePlan)> = HashSet::new();
    let mut columns = Vec::new();
    for _ in 0..config.iterations {
        state.step(game, assignment, indices);
        let p1 = sample_pure_plan(game, idx1, &state.behavioral(idx1), &mut rng);
        let p2 = sample_pure_plan(game, idx2, &state.behavioral(idx2), &mut rng);
        if seen.insert((p1.clone(), p2.clone())) {
            let plan = plan_from_pure_profile(&p1, &p2, pairs, idx1, idx2)
                .expect("sampled plans cover every reachable infoset");
            columns.push(plan);
        }
    }
    if columns.is_empty() {
        // Degenerate configuration (zero iterations): fall back to the
        // all-first-action profile so the master is never empty.
        let first = |idx: &SequenceIndex| PurePlan {
            seat: idx.seat,
            actions: (0..game.infosets.len())
                .map(|i| (game.infosets[i].seat == idx.seat).then_some(0))
                .collect(),
        };
        let plan = plan_from_pure_profile(&first(idx1), &first(idx2), pairs, idx1, idx2)
            .expect("all-first-action profile is complete");
        columns.push(plan);
    }
    columns
}
