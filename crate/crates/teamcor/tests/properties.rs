//! Invariant checks on solver outputs across the small benchmark games:
//! feasibility of produced plans, the semi-randomized/product structure of
//! mixture support entries, best-response certificates, monotonicity of the
//! master objective and of fixed-support values, and strong duality.

use teamcor::correlation::{is_product_plan, is_semi_randomized, TeamMember};
use teamcor::games::GameSpec;
use teamcor::tmecor::{
    build_master, column_generation, direct_lp, direct_model, fixed_support_mip, CgConfig,
    TeamInstance, TmecorSolution,
};

fn instance(name: &str, opponent: usize) -> TeamInstance {
    TeamInstance::new(GameSpec::from_name(name).unwrap().build().unwrap(), opponent)
}

fn solve_cg(name: &str, opponent: usize) -> (TeamInstance, TmecorSolution) {
    let inst = instance(name, opponent);
    let backend = linsolve::backend::backend("embedded").unwrap();
    let sol = column_generation(&inst, backend.as_ref(), &CgConfig::default()).unwrap();
    (inst, sol)
}

#[test]
fn produced_plans_satisfy_flow_constraints() {
    let backend = linsolve::backend::backend("embedded").unwrap();
    for (name, opponent) in [("kuhn3", 0), ("kuhn3", 2), ("kuhn4", 1), ("kuhn4", 2)] {
        let (inst, cg) = solve_cg(name, opponent);
        assert!(
            inst.vsf.violation(&cg.plan) < 1e-8,
            "{name} opp {}: column generation plan violates flow by {}",
            opponent + 1,
            inst.vsf.violation(&cg.plan)
        );
        for entry in &cg.support {
            assert!(inst.vsf.violation(&entry.plan) < 1e-8);
        }
        let fs = fixed_support_mip(&inst, backend.as_ref(), 2).unwrap();
        assert!(inst.vsf.violation(&fs.plan) < 1e-8);
    }
    // The direct linear program is exact (and offered) only on
    // triangle-free instances.
    let inst = instance("goofspiel-limited", 2);
    let direct = direct_lp(&inst, backend.as_ref()).unwrap();
    assert!(inst.vsf.violation(&direct.plan) < 1e-8);
}

#[test]
fn support_entries_are_semi_randomized_products() {
    for (name, opponent) in [("kuhn3", 2), ("kuhn4", 0), ("kuhn4", 2)] {
        let (inst, cg) = solve_cg(name, opponent);
        assert!(!cg.support.is_empty());
        let mut total = 0.0;
        for entry in &cg.support {
            assert!(entry.weight > 0.0);
            total += entry.weight;
            let semi = is_semi_randomized(&entry.plan, TeamMember::TeamOne, &inst.pairs, 1e-6)
                || is_semi_randomized(&entry.plan, TeamMember::TeamTwo, &inst.pairs, 1e-6);
            assert!(semi, "{name} opp {}: support entry with no deterministic member", opponent + 1);
            // One deterministic member forces independence: a
            // semi-randomized plan is a product of its marginals.
            assert!(is_product_plan(&entry.plan, &inst.pairs, 1e-6));
        }
        assert!((total - 1.0).abs() < 1e-6, "support weights sum to {total}");
    }
}

#[test]
fn certificates_match_reported_values() {
    let backend = linsolve::backend::backend("embedded").unwrap();
    for (name, opponent) in [("kuhn3", 0), ("kuhn3", 1), ("kuhn3", 2), ("kuhn4", 2)] {
        let (inst, cg) = solve_cg(name, opponent);
        assert!(cg.certificate_gap < 1e-5, "{name}: gap {}", cg.certificate_gap);
        let br = inst.best_response(&cg.plan);
        assert!((br - cg.value).abs() < 1e-5, "{name}: value {} vs best response {br}", cg.value);
    }
    // The direct linear program applies only to triangle-free instances;
    // there it must agree with column generation.
    let (inst, cg) = solve_cg("goofspiel-limited", 2);
    let direct = direct_lp(&inst, backend.as_ref()).unwrap();
    assert!(direct.certificate_gap < 1e-5);
    assert!((direct.value - cg.value).abs() < 1e-5, "direct vs column generation");
}

#[test]
fn master_values_are_monotone() {
    for (name, opponent) in [("kuhn3", 2), ("kuhn4", 0), ("kuhn4", 1), ("kuhn4", 2)] {
        let (_, cg) = solve_cg(name, opponent);
        assert!(!cg.master_values.is_empty());
        for w in cg.master_values.windows(2) {
            assert!(
                w[1] >= w[0] - 1e-9,
                "{name} opp {}: master value fell from {} to {}",
                opponent + 1,
                w[0],
                w[1]
            );
        }
        let last = *cg.master_values.last().unwrap();
        assert!((last - cg.value).abs() < 1e-9);
    }
}

#[test]
fn fixed_support_value_is_monotone_in_support_size() {
    let backend = linsolve::backend::backend("embedded").unwrap();
    for opponent in 0..3 {
        let inst = instance("kuhn4", opponent);
        let mut prev = f64::NEG_INFINITY;
        for n in 1..=3 {
            let sol = fixed_support_mip(&inst, backend.as_ref(), n).unwrap();
            // Slack covers the solver's accepted relative optimality gap.
            assert!(
                sol.value >= prev - 1e-4,
                "opp {}: value fell from {prev} to {} at n={n}",
                opponent + 1,
                sol.value
            );
            prev = sol.value;
        }
    }
}

#[test]
fn strong_duality_holds_on_optimal_solves() {
    for (name, opponent) in [("kuhn3", 0), ("kuhn3", 2), ("kuhn4", 2), ("goofspiel-limited", 2)] {
        let inst = instance(name, opponent);
        let model = direct_model(&inst);
        let sol = linsolve::solve_lp(&model).unwrap();
        assert_eq!(sol.status, linsolve::Status::Optimal);
        let dual = linsolve::dual_objective(&model, &sol);
        assert!(
            (dual - sol.objective).abs() < 1e-7,
            "{name} opp {}: primal {} vs dual {dual}",
            opponent + 1,
            sol.objective
        );
    }
    // The restricted master from a column-generation run must satisfy
    // strong duality as well.
    let (inst, cg) = solve_cg("kuhn4", 2);
    let betas: Vec<Vec<f64>> =
        cg.support.iter().map(|e| inst.beta_coefficients(&e.plan)).collect();
    let master = build_master(&inst, &betas);
    let sol = linsolve::solve_lp(&master).unwrap();
    assert_eq!(sol.status, linsolve::Status::Optimal);
    let dual = linsolve::dual_objective(&master, &sol);
    assert!((dual - sol.objective).abs() < 1e-7);
}
