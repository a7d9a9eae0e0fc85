//! Scratch: evaluate rounding schedules for the two-copy fixed-support
//! start on limited-information goofspiel.

use teamcor::correlation::TeamMember;
use teamcor::efg::EMPTY_SEQ;
use teamcor::games::GameSpec;
use teamcor::tmecor::{fixed_support_model, TeamInstance};

fn member_of(copy: usize) -> TeamMember {
    if copy % 2 == 0 {
        TeamMember::TeamTwo
    } else {
        TeamMember::TeamOne
    }
}

#[test]
#[ignore]
fn rounding_schedules() {
    let inst = TeamInstance::new(
        GameSpec::from_name("goofspiel-limited").unwrap().build().unwrap(),
        2,
    );
    let backend = linsolve::backend::backend("embedded").unwrap();
    let n = 2;
    let model = fixed_support_model(&inst, n);
    let np = inst.pairs.len();

    let counts: Vec<usize> = (0..n)
        .map(|c| match member_of(c) {
            TeamMember::TeamTwo => inst.pairs.num_seq2 - 1,
            TeamMember::TeamOne => inst.pairs.num_seq1 - 1,
        })
        .collect();
    let bases: Vec<usize> = {
        let mut v = vec![0usize];
        for c in 0..n - 1 {
            let last = *v.last().unwrap();
            v.push(last + np + counts[c]);
        }
        v
    };

    // Rounds `copy`'s deterministic-member marginals in `primal` to a pure
    // strategy, returning the binary values to fix.
    let round_copy = |copy: usize, primal: &[f64]| -> Vec<f64> {
        let member = member_of(copy);
        let idx = match member {
            TeamMember::TeamTwo => inst.idx2(),
            TeamMember::TeamOne => inst.idx1(),
        };
        let marginal = |s: usize| match member {
            TeamMember::TeamTwo => inst.pairs.marginal2(s),
            TeamMember::TeamOne => inst.pairs.marginal1(s),
        };
        let mut chosen = vec![false; idx.num_sequences()];
        let mut stack = vec![EMPTY_SEQ];
        while let Some(s) = stack.pop() {
            for &i in &idx.children_infosets[s] {
                let mut pick = 0usize;
                let mut best = f64::NEG_INFINITY;
                for a in 0..idx.num_actions(i) {
                    let v = primal[bases[copy] + marginal(idx.seq(i, a))];
                    if v > best {
                        best = v;
                        pick = a;
                    }
                }
                let sel = idx.seq(i, pick);
                chosen[sel] = true;
                stack.push(sel);
            }
        }
        (1..idx.num_sequences()).map(|s| if chosen[s] { 1.0 } else { 0.0 }).collect()
    };

    let apply = |m: &mut linsolve::Model, copy: usize, vals: &[f64]| {
        for (k, &v) in vals.iter().enumerate() {
            m.set_bounds(bases[copy] + np + k, v, v);
        }
    };
    let free = |m: &mut linsolve::Model, copy: usize| {
        for k in 0..counts[copy] {
            m.set_bounds(bases[copy] + np + k, 0.0, 1.0);
        }
    };

    let relax = backend.solve_lp(&model).unwrap();
    println!("relax bound {}", relax.objective);

    for order in [[0usize, 1], [1, 0]] {
        let mut m = model.clone();
        let mut cur = relax.clone();
        for &c in &order {
            let vals = round_copy(c, &cur.primal);
            apply(&mut m, c, &vals);
            cur = backend.solve_lp(&m).unwrap();
            println!("order {order:?}: fixed copy {c}, value {}", cur.objective);
        }
        // Alternating improvement passes.
        for pass in 0..3 {
            let mut improved = false;
            for &c in &order {
                let mut probe = m.clone();
                free(&mut probe, c);
                let freed = backend.solve_lp(&probe).unwrap();
                let vals = round_copy(c, &freed.primal);
                apply(&mut probe, c, &vals);
                let sol = backend.solve_lp(&probe).unwrap();
                println!("order {order:?} pass {pass}: re-rounded copy {c}, value {}", sol.objective);
                if sol.objective > cur.objective + 1e-9 {
                    cur = sol;
                    m = probe;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        println!("order {order:?}: final {}", cur.objective);
    }
}
