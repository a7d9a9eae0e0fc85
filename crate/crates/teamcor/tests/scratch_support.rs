//! Scratch: inspect the member-wise structure of the column-generation
//! support on limited-information goofspiel.

use std::collections::HashMap;

use teamcor::games::GameSpec;
use teamcor::tmecor::{column_generation, CgConfig, TeamInstance};

#[test]
#[ignore]
fn inspect_goofspiel_limited_support() {
    let inst = TeamInstance::new(
        GameSpec::from_name("goofspiel-limited").unwrap().build().unwrap(),
        2,
    );
    let backend = linsolve::backend::backend("embedded").unwrap();
    let cg = column_generation(&inst, backend.as_ref(), &CgConfig::default()).unwrap();
    println!("value {}, support {}", cg.value, cg.support.len());

    let quant = |v: f64| (v * 1e9).round() as i64;
    let mut m1: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let mut m2: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (k, e) in cg.support.iter().enumerate() {
        let f1: Vec<i64> =
            (0..inst.pairs.num_seq1).map(|s| quant(e.plan.values[inst.pairs.marginal1(s)])).collect();
        let f2: Vec<i64> =
            (0..inst.pairs.num_seq2).map(|s| quant(e.plan.values[inst.pairs.marginal2(s)])).collect();
        m1.entry(f1).or_default().push(k);
        m2.entry(f2).or_default().push(k);
    }
    println!("distinct member-1 strategies: {}", m1.len());
    for (i, (_, v)) in m1.iter().enumerate() {
        println!("  s1 group {i}: entries {v:?}");
    }
    println!("distinct member-2 strategies: {}", m2.len());
    for (i, (_, v)) in m2.iter().enumerate() {
        println!("  s2 group {i}: entries {v:?}");
    }
}
