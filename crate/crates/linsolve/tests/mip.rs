use linsolve::{solve_mip, Model, Relation, Sense, Status, VarKind};

const INF: f64 = f64::INFINITY;

#[test]
fn two_binary_knapsack() {
    // max x1+x2, x1+x2 <= 1.5, both binary
    let mut m = Model::new(Sense::Maximize);
    let x1 = m.add_var(1.0, 0.0, 1.0, VarKind::Binary);
    let x2 = m.add_var(1.0, 0.0, 1.0, VarKind::Binary);
    m.add_row(Relation::Le, 1.5, &[(x1, 1.0), (x2, 1.0)]);
    let (s, pool) = solve_mip(&m).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.objective - 1.0).abs() < 1e-9);
    assert!(!pool.entries.is_empty());
    for e in &pool.entries {
        assert!(m.primal_infeasibility(&e.primal) < 1e-6);
        for &j in &[x1, x2] {
            assert!((e.primal[j] - e.primal[j].round()).abs() < 1e-6);
        }
    }
}

#[test]
fn unconstrained_binary() {
    let mut m = Model::new(Sense::Maximize);
    m.add_var(0.0, 0.0, 1.0, VarKind::Binary);
    let (s, pool) = solve_mip(&m).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!(s.objective.abs() < 1e-12);
    assert!(!pool.entries.is_empty());
}

#[test]
fn knapsack_vs_bruteforce() {
    let values = [9.0, 14.0, 5.0, 11.0, 7.0, 3.0, 12.0, 6.0];
    let weights = [3.0, 5.0, 2.0, 4.0, 3.0, 1.0, 5.0, 2.0];
    let cap = 11.0;
    let mut m = Model::new(Sense::Maximize);
    let xs: Vec<usize> = values.iter().map(|&v| m.add_var(v, 0.0, 1.0, VarKind::Binary)).collect();
    let row: Vec<_> = xs.iter().zip(&weights).map(|(&x, &w)| (x, w)).collect();
    m.add_row(Relation::Le, cap, &row);
    let (s, pool) = solve_mip(&m).unwrap();
    assert_eq!(s.status, Status::Optimal);

    let mut best = 0.0f64;
    for mask in 0u32..256 {
        let (mut v, mut w) = (0.0, 0.0);
        for i in 0..8 {
            if mask >> i & 1 == 1 {
                v += values[i];
                w += weights[i];
            }
        }
        if w <= cap {
            best = best.max(v);
        }
    }
    assert!((s.objective - best).abs() < 1e-9, "{} vs brute force {}", s.objective, best);
    // Pool is best-first and every entry is integral-feasible.
    for pair in pool.entries.windows(2) {
        assert!(pair[0].objective >= pair[1].objective - 1e-9);
    }
    for e in &pool.entries {
        assert!(m.primal_infeasibility(&e.primal) < 1e-6);
    }
}

#[test]
fn mixed_integer_with_continuous() {
    // max 3b + y s.t. y <= 2 - 2b, y >= 0, b binary. b=1,y=0 -> 3.
    let mut m = Model::new(Sense::Maximize);
    let b = m.add_var(3.0, 0.0, 1.0, VarKind::Binary);
    let y = m.add_var(1.0, 0.0, INF, VarKind::Continuous);
    m.add_row(Relation::Le, 2.0, &[(y, 1.0), (b, 2.0)]);
    let (s, _) = solve_mip(&m).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.objective - 3.0).abs() < 1e-9);
    assert!((s.primal[b] - 1.0).abs() < 1e-9);
}

#[test]
fn infeasible_mip() {
    let mut m = Model::new(Sense::Minimize);
    let b1 = m.add_var(1.0, 0.0, 1.0, VarKind::Binary);
    let b2 = m.add_var(1.0, 0.0, 1.0, VarKind::Binary);
    m.add_row(Relation::Ge, 1.5, &[(b1, 1.0), (b2, 1.0)]);
    m.add_row(Relation::Le, 0.5, &[(b1, 1.0), (b2, 1.0)]);
    let (s, _) = solve_mip(&m).unwrap();
    assert_eq!(s.status, Status::Infeasible);
}

#[test]
fn pool_collects_suboptimal_incumbents() {
    // Equality-partition: exactly one of three binaries on, distinct values.
    let mut m = Model::new(Sense::Maximize);
    let xs: Vec<usize> = [1.0, 2.0, 3.0].iter().map(|&v| m.add_var(v, 0.0, 1.0, VarKind::Binary)).collect();
    let row: Vec<_> = xs.iter().map(|&x| (x, 1.0)).collect();
    m.add_row(Relation::Eq, 1.0, &row);
    let (s, pool) = solve_mip(&m).unwrap();
    assert!((s.objective - 3.0).abs() < 1e-9);
    assert!(pool.entries.first().map(|e| (e.objective - 3.0).abs() < 1e-9).unwrap_or(false));
}
