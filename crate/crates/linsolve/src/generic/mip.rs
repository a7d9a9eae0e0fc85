//! Branch and bound over binary variables: best-bound node selection,
//! most-fractional branching, lowest-index tie-breaks, and a pool of every
//! integer-feasible incumbent met along the way.

use super::simplex::{self, WarmBasis};
use super::{Model, PoolEntry, Scalar, Sense, Solution, SolutionPool, Status, VarKind};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const INT_TOL: f64 = 1e-6;
/// Absolute slack when pruning against the incumbent: subtrees that cannot
/// improve the incumbent by more than this are cut, so reported optima carry
/// at most this much objective gap.
const BOUND_EPS: f64 = 1e-7;
const MAX_NODES: usize = 1_000_000;
/// Try the round-and-fix heuristic whenever a node has at most this many
/// fractional binaries.
const ROUND_TRY: usize = 96;

struct Node<S> {
    bound: S,
    fixes: Vec<(usize, S, S)>,
}

struct NodeKey<S> {
    // Bound normalized so larger is better; id breaks ties deterministically
    // (newer node first, so equal-bound exploration plunges depth-first and
    // reaches integer-feasible incumbents early).
    bound: S,
    id: usize,
}

impl<S: Scalar> PartialEq for NodeKey<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_key(other) == Ordering::Equal
    }
}
impl<S: Scalar> Eq for NodeKey<S> {}
impl<S: Scalar> PartialOrd for NodeKey<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_key(other))
    }
}
impl<S: Scalar> Ord for NodeKey<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_key(other)
    }
}
impl<S: Scalar> NodeKey<S> {
    fn cmp_key(&self, other: &Self) -> Ordering {
        match self.bound.partial_cmp(&other.bound) {
            Some(Ordering::Equal) | None => self.id.cmp(&other.id),
            Some(ord) => ord,
        }
    }
}

/// Most fractional binary in `primal`, lowest index on ties.
fn most_fractional<S: Scalar>(binaries: &[usize], primal: &[S]) -> Option<(usize, S)> {
    let mut branch: Option<(usize, S)> = None;
    for &j in binaries {
        let x = primal[j];
        let frac = (x - x.round()).abs();
        if frac > S::c(INT_TOL) {
            match branch {
                Some((_, bscore)) if frac <= bscore => {}
                _ => branch = Some((j, frac)),
            }
        }
    }
    branch
}

/// Least fractional binary in `primal` that is still fractional, lowest
/// index on ties.
fn least_fractional<S: Scalar>(binaries: &[usize], primal: &[S]) -> Option<(usize, S)> {
    let mut pick: Option<(usize, S)> = None;
    for &j in binaries {
        let x = primal[j];
        let frac = (x - x.round()).abs();
        if frac > S::c(INT_TOL) {
            match pick {
                Some((_, best)) if frac >= best => {}
                _ => pick = Some((j, frac)),
            }
        }
    }
    pick
}

/// Guided dive toward an integer-feasible point near the root bound.
///
/// Each round first pins every binary already integral in the current
/// relaxation (a free move: the LP point itself satisfies the pins), then
/// fixes the least fractional remaining binary to its nearest value and
/// re-solves warm. Fixing the near-integral variable first lets the LP
/// propagate structural rows (flows, SOS-like sums) instead of fighting
/// them, and each re-solve typically snaps many more binaries to their
/// bounds, so the dive needs few LPs. A step that would drop the objective
/// below the root bound minus the model's accepted gap tries the opposite
/// value; if both sides fail the dive gives up and the search proceeds
/// without an incumbent.
fn dive<S: Scalar>(
    model: &Model<S>,
    binaries: &[usize],
    root: &Solution<S>,
    warm: &mut Option<WarmBasis>,
    debug: bool,
) -> Option<Solution<S>> {
    let maximize = model.sense() == Sense::Maximize;
    let norm = |obj: S| if maximize { obj } else { -obj };
    let scale = S::one() + root.objective.abs();
    let target = norm(root.objective) - (model.mip_gap * scale).max(S::c(BOUND_EPS));

    let mut fixes: Vec<(usize, S, S)> = Vec::new();
    let mut pinned = vec![false; model.num_vars()];
    let mut relax = root.clone();
    let mut lps = 0usize;
    loop {
        // Pin everything already integral.
        for &j in binaries {
            let v = relax.primal[j];
            if !pinned[j] && (v - v.round()).abs() <= S::c(INT_TOL) {
                let r = v.round().max(S::zero()).min(S::one());
                fixes.push((j, r, r));
                pinned[j] = true;
            }
        }
        let (j, _) = match least_fractional(binaries, &relax.primal) {
            None => {
                if debug {
                    eprintln!("mip: dive reached {:?} after {lps} LPs", relax.objective);
                }
                return Some(relax);
            }
            Some(b) => b,
        };
        let near = relax.primal[j].round().max(S::zero()).min(S::one());
        let mut accepted = None;
        for v in [near, S::one() - near] {
            fixes.push((j, v, v));
            let (r, basis) = simplex::solve_warm(model, Some(&fixes), warm.as_ref());
            fixes.pop();
            lps += 1;
            if r.status == Status::Optimal {
                if basis.is_some() {
                    *warm = basis;
                }
                if norm(r.objective) >= target {
                    accepted = Some((v, r));
                    break;
                }
            }
        }
        match accepted {
            None => {
                if debug {
                    eprintln!("mip: dive dead-ended after {lps} LPs");
                }
                return None;
            }
            Some((v, r)) => {
                fixes.push((j, v, v));
                pinned[j] = true;
                relax = r;
            }
        }
    }
}

pub(crate) fn solve<S: Scalar>(model: &Model<S>) -> (Solution<S>, SolutionPool<S>) {
    let binaries: Vec<usize> =
        (0..model.num_vars()).filter(|&j| model.var_kind(j) == VarKind::Binary).collect();
    let maximize = model.sense() == Sense::Maximize;
    let norm = |obj: S| if maximize { obj } else { -obj };

    let mut pool: Vec<PoolEntry<S>> = Vec::new();
    let mut incumbent: Option<Solution<S>> = None;

    // Records an integer-feasible solution into the pool and as incumbent.
    fn record<S: Scalar>(
        sol: Solution<S>,
        binaries: &[usize],
        pool: &mut Vec<PoolEntry<S>>,
        incumbent: &mut Option<Solution<S>>,
        maximize: bool,
    ) {
        let norm = |obj: S| if maximize { obj } else { -obj };
        let mut entry = sol.primal.clone();
        for &j in binaries {
            entry[j] = entry[j].round();
        }
        let duplicate = pool.iter().any(|p| {
            binaries.iter().all(|&j| (p.primal[j] - entry[j]).abs() < S::c(0.5))
                && p.primal.iter().zip(&entry).all(|(&a, &b)| (a - b).abs() < S::c(1e-9))
        });
        if !duplicate {
            pool.push(PoolEntry { objective: sol.objective, primal: entry });
        }
        let better = match incumbent {
            None => true,
            Some(ref inc) => norm(sol.objective) > norm(inc.objective),
        };
        if better {
            *incumbent = Some(sol);
        }
    }

    // Basis of the most recently solved node: all node LPs share the same
    // rows and differ only in bound fixes, so the previous optimal basis is
    // a short repair away from any node's optimum.
    let (root, mut warm): (_, Option<WarmBasis>) = simplex::solve_warm(model, None, None);
    match root.status {
        Status::Optimal => {}
        _ => return (root, SolutionPool { entries: pool }),
    }
    let debug = std::env::var("LINSOLVE_MIP_DEBUG").is_ok();
    if debug {
        let nfrac = binaries
            .iter()
            .filter(|&&j| (root.primal[j] - root.primal[j].round()).abs() > S::c(INT_TOL))
            .count();
        eprintln!("mip: root bound {:?}, {} fractional of {} binaries", root.objective, nfrac, binaries.len());
    }
    // A caller-provided start: validate and adopt as the first incumbent.
    if let Some(hint) = &model.start_hint {
        let feasible = hint.len() == model.num_vars()
            && model.primal_infeasibility(hint) <= S::c(1e-6)
            && most_fractional(&binaries, hint).is_none();
        if feasible {
            let sol = Solution {
                status: Status::Optimal,
                objective: model.objective_value(hint),
                primal: hint.clone(),
                duals: Vec::new(),
            };
            if debug {
                eprintln!("mip: start hint accepted at {:?}", sol.objective);
            }
            record(sol, &binaries, &mut pool, &mut incumbent, maximize);
        } else if debug {
            eprintln!("mip: start hint rejected");
        }
    }
    if incumbent.is_none() && most_fractional(&binaries, &root.primal).is_some() {
        if let Some(found) = dive(model, &binaries, &root, &mut warm, debug) {
            record(found, &binaries, &mut pool, &mut incumbent, maximize);
        }
    }

    let mut heap: BinaryHeap<NodeKey<S>> = BinaryHeap::new();
    let mut nodes: Vec<Option<Node<S>>> = Vec::new();
    let mut relaxations: Vec<Option<Solution<S>>> = Vec::new();
    nodes.push(Some(Node { bound: root.objective, fixes: Vec::new() }));
    relaxations.push(Some(root));
    heap.push(NodeKey { bound: norm(nodes[0].as_ref().unwrap().bound), id: 0 });

    let mut processed = 0usize;
    let mut hit_node_limit = false;
    // Fractional-count threshold below which the round-and-fix heuristic is
    // attempted; halved after each attempt so failures are not retried at
    // the same depth.
    let mut round_gate = ROUND_TRY;

    while let Some(key) = heap.pop() {
        let node = nodes[key.id].take().expect("node queued once");
        let relax = relaxations[key.id].take();
        // Pruning slack: the hard numerical epsilon plus the model's
        // accepted relative optimality gap.
        let slack = |inc: S| S::c(BOUND_EPS) + model.mip_gap * (S::one() + inc.abs());
        if let Some(ref inc) = incumbent {
            if norm(node.bound) <= norm(inc.objective) + slack(inc.objective) {
                continue;
            }
        }
        processed += 1;
        if debug && processed % 200 == 0 {
            eprintln!(
                "mip: node {}, bound {:?}, incumbent {:?}, open {}",
                processed,
                node.bound,
                incumbent.as_ref().map(|i| i.objective),
                heap.len()
            );
        }
        if processed > MAX_NODES {
            hit_node_limit = true;
            break;
        }

        let relax = match relax {
            Some(r) => r,
            None => {
                let (r, basis) = simplex::solve_warm(model, Some(&node.fixes), warm.as_ref());
                if basis.is_some() {
                    warm = basis;
                }
                r
            }
        };
        match relax.status {
            Status::Optimal => {}
            Status::Infeasible => continue,
            _ => {
                // Numerical failure in a subproblem: surface it.
                return (relax, SolutionPool { entries: pool });
            }
        }
        if let Some(ref inc) = incumbent {
            if norm(relax.objective) <= norm(inc.objective) + slack(inc.objective) {
                continue;
            }
        }

        match most_fractional(&binaries, &relax.primal) {
            None => {
                // Integer feasible.
                record(relax, &binaries, &mut pool, &mut incumbent, maximize);
            }
            Some((j, _)) => {
                // Round-and-fix heuristic: once few binaries are fractional,
                // fix them all at their rounded values and re-solve once; an
                // integral optimum of that restriction is an incumbent.
                let fractional: Vec<usize> = binaries
                    .iter()
                    .copied()
                    .filter(|&j| (relax.primal[j] - relax.primal[j].round()).abs() > S::c(INT_TOL))
                    .collect();
                if debug && processed % 200 == 0 {
                    eprintln!("mip: node {}: {} fractional", processed, fractional.len());
                }
                if fractional.len() <= round_gate {
                    let mut fixes = node.fixes.clone();
                    for &j in &fractional {
                        let v = relax.primal[j].round().max(S::zero()).min(S::one());
                        fixes.push((j, v, v));
                    }
                    let (r, basis) = simplex::solve_warm(model, Some(&fixes), warm.as_ref());
                    if basis.is_some() {
                        warm = basis;
                    }
                    if r.status == Status::Optimal && most_fractional(&binaries, &r.primal).is_none()
                    {
                        if debug {
                            eprintln!(
                                "mip: round-and-fix of {} binaries gave incumbent {:?}",
                                fractional.len(),
                                r.objective
                            );
                        }
                        record(r, &binaries, &mut pool, &mut incumbent, maximize);
                    }
                    round_gate = fractional.len() / 2;
                }
                // Push the round-nearest branch last so the newest-first
                // tie-break explores it first.
                let near = relax.primal[j].round().max(S::zero()).min(S::one());
                for v in [S::one() - near, near] {
                    let mut fixes = node.fixes.clone();
                    fixes.push((j, v, v));
                    let id = nodes.len();
                    nodes.push(Some(Node { bound: relax.objective, fixes }));
                    relaxations.push(None);
                    heap.push(NodeKey { bound: norm(relax.objective), id });
                }
            }
        }
    }

    pool.sort_by(|a, b| match norm(b.objective).partial_cmp(&norm(a.objective)) {
        Some(o) => o,
        None => Ordering::Equal,
    });

    let mut solution = match incumbent {
        Some(mut inc) => {
            inc.duals = Vec::new();
            inc
        }
        None => Solution { status: Status::Infeasible, objective: S::zero(), primal: Vec::new(), duals: Vec::new() },
    };
    if hit_node_limit {
        solution.status = Status::NodeLimit;
    } else if !solution.primal.is_empty() {
        solution.status = Status::Optimal;
        for j in &binaries {
            solution.primal[*j] = solution.primal[*j].round();
        }
    }
    (solution, SolutionPool { entries: pool })
}
