//! Brute-force normal-form cross-check on three-card Kuhn poker.
//!
//! Enumerates every reduced pure plan of each team seat, forms all plan
//! pairs, and solves the full master linear program over those columns —
//! the normal-form game restricted to deterministic team strategies, whose
//! mixed equilibria are exactly the coordinated team strategies. Column
//! generation must reach the same value without enumerating.

use std::collections::HashSet;

use teamcor::correlation::{consistent_sequences, plan_from_pure_profile, PurePlan};
use teamcor::efg::SequenceIndex;
use teamcor::games::GameSpec;
use teamcor::tmecor::{build_master, column_generation, CgConfig, TeamInstance};

/// All reduced pure plans of one seat: full action assignments deduplicated
/// by the sequence-reachability footprint they induce.
fn reduced_pure_plans(inst: &TeamInstance, seat: usize, idx: &SequenceIndex) -> Vec<PurePlan> {
    let members: Vec<usize> = (0..inst.game.infosets.len())
        .filter(|&i| inst.game.infosets[i].seat == seat)
        .collect();
    let radix: Vec<usize> = members.iter().map(|&i| inst.game.infosets[i].actions.len()).collect();
    let mut counter = vec![0usize; members.len()];
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut plans = Vec::new();
    loop {
        let mut actions = vec![None; inst.game.infosets.len()];
        for (k, &i) in members.iter().enumerate() {
            actions[i] = Some(counter[k]);
        }
        let plan = PurePlan { seat, actions };
        let footprint = consistent_sequences(&plan, idx).expect("full assignment");
        if seen.insert(footprint) {
            plans.push(plan);
        }
        // Mixed-radix increment.
        let mut pos = 0;
        loop {
            if pos == counter.len() {
                return plans;
            }
            counter[pos] += 1;
            if counter[pos] < radix[pos] {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
    }
}

fn quantized(beta: &[f64]) -> Vec<i64> {
    beta.iter().map(|v| (v * 1e9).round() as i64).collect()
}

#[test]
fn kuhn3_normal_form_oracle_matches_column_generation() {
    for opponent in 0..3 {
        let inst =
            TeamInstance::new(GameSpec::from_name("kuhn3").unwrap().build().unwrap(), opponent);
        let plans1 = reduced_pure_plans(&inst, inst.assignment.t1(), inst.idx1());
        let plans2 = reduced_pure_plans(&inst, inst.assignment.t2(), inst.idx2());
        // Reduced plans per card: seat 1 has 9 (bet, or check followed by
        // one of 8 response combinations), seat 2 has 10 (2 on the bet
        // branch times 5 on the check branch), seat 3 has 16 (4 infosets,
        // none gated by its own earlier choice).
        for (plans, seat) in [(&plans1, inst.assignment.t1()), (&plans2, inst.assignment.t2())] {
            let expect = [729, 1000, 4096][seat];
            assert_eq!(plans.len(), expect, "reduced plan count of seat {}", seat + 1);
        }

        let mut keys: HashSet<Vec<i64>> = HashSet::new();
        let mut betas: Vec<Vec<f64>> = Vec::new();
        for p1 in &plans1 {
            for p2 in &plans2 {
                let plan = plan_from_pure_profile(p1, p2, &inst.pairs, inst.idx1(), inst.idx2())
                    .expect("full profile");
                let beta = inst.beta_coefficients(&plan);
                if keys.insert(quantized(&beta)) {
                    betas.push(beta);
                }
            }
        }

        let master = build_master(&inst, &betas);
        let oracle = linsolve::solve_lp(&master).expect("well-formed master");
        assert_eq!(oracle.status, linsolve::Status::Optimal);

        let backend = linsolve::backend::backend("embedded").expect("embedded backend");
        let cg = column_generation(&inst, backend.as_ref(), &CgConfig::default())
            .expect("column generation");

        assert!(
            (oracle.objective - cg.value).abs() < 1e-6,
            "opponent {}: oracle {} vs column generation {}",
            opponent + 1,
            oracle.objective,
            cg.value
        );
        // Three-card Kuhn is known to be worth zero to the team for every
        // choice of opponent seat.
        assert!(oracle.objective.abs() < 1e-6, "opponent {}: value {}", opponent + 1, oracle.objective);
    }
}
