//! Bounded-variable revised simplex with a two-phase start.
//!
//! Phase 1 drives artificial variables (added only on rows whose slack can't
//! absorb the initial residual) to zero; phase 2 optimizes the real
//! objective. Pricing is Dantzig with lowest-index tie-breaks, switching to
//! Bland's rule after a long degenerate streak. The basis inverse is a
//! sparse LU plus an eta file, refactorized periodically.

use super::lu::{factorize, LuFactors};
use super::{Model, Relation, Scalar, Sense, Solution, Status};

const FEAS_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-8;
const RATIO_TIE: f64 = 1e-9;
const DEGEN_STEP: f64 = 1e-10;
const PIVOT_MIN: f64 = 1e-7;
const REFACTOR_EVERY: usize = 100;
const BLAND_AFTER: usize = 2000;
const MAX_ITERS: usize = 10_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    Free,
}

enum LoopResult {
    Optimal,
    Unbounded,
    Failed,
}

/// A starting basis carried between related solves (the branch-and-bound
/// layer reuses the last optimal basis so each node only needs a short
/// repair instead of a full two-phase solve). Column ids cover structural
/// variables followed by one slack per row; artificials are never recorded.
#[derive(Clone)]
pub(crate) struct WarmBasis {
    basis: Vec<usize>,
    state: Vec<VarState>,
}

struct Worker<S: Scalar> {
    m: usize,
    cols: Vec<Vec<(usize, S)>>,
    lower: Vec<S>,
    upper: Vec<S>,
    b: Vec<S>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    xb: Vec<S>,
    lu: LuFactors<S>,
    etas: Vec<(usize, Vec<(usize, S)>)>,
    scratch: Vec<S>,
    iters: usize,
}

/// Solves the LP relaxation of `model` (binary vars are treated as their
/// bounds). `overrides` tightens selected variable bounds; the MIP layer
/// uses this for branching without cloning the model.
pub(crate) fn solve<S: Scalar>(model: &Model<S>, overrides: Option<&[(usize, S, S)]>) -> Solution<S> {
    solve_warm(model, overrides, None).0
}

/// Like [`solve`], but optionally starts from a previous basis and returns
/// the optimal basis for reuse. The warm path repairs basic variables pushed
/// outside their (possibly newly tightened) bounds and then reoptimizes; it
/// falls back to the cold two-phase solve whenever the repair is
/// inconclusive.
pub(crate) fn solve_warm<S: Scalar>(
    model: &Model<S>,
    overrides: Option<&[(usize, S, S)]>,
    warm: Option<&WarmBasis>,
) -> (Solution<S>, Option<WarmBasis>) {
    let nstruct = model.num_vars();
    let m = model.num_rows();
    let flip = model.sense == Sense::Maximize;
    let sgn = if flip { -S::one() } else { S::one() };

    let mut lower = model.lower.clone();
    let mut upper = model.upper.clone();
    if let Some(ovr) = overrides {
        for &(j, lo, up) in ovr {
            lower[j] = lower[j].max(lo);
            upper[j] = upper[j].min(up);
            if lower[j] > upper[j] {
                return (infeasible(), None);
            }
        }
    }

    let mut cost: Vec<S> = model.obj.iter().map(|&c| sgn * c).collect();

    if m == 0 {
        return (solve_unconstrained(model, &lower, &upper, &cost, flip), None);
    }

    // Column-major structural matrix plus one slack per row.
    let mut cols: Vec<Vec<(usize, S)>> = vec![Vec::new(); nstruct + m];
    for (i, row) in model.rows.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            cols[j].push((i, a));
        }
    }
    let inf = S::infinity();
    for (i, row) in model.rows.iter().enumerate() {
        cols[nstruct + i].push((i, S::one()));
        let (sl, su) = match row.rel {
            Relation::Le => (S::zero(), inf),
            Relation::Ge => (-inf, S::zero()),
            Relation::Eq => (S::zero(), S::zero()),
        };
        lower.push(sl);
        upper.push(su);
        cost.push(S::zero());
    }
    let b: Vec<S> = model.rows.iter().map(|r| r.rhs).collect();

    if let Some(wb) = warm {
        if let Some(out) = try_warm(model, &cols, &lower, &upper, &b, &cost, overrides, wb) {
            return out;
        }
    }

    // Start nonbasic variables at a finite bound where one exists.
    let mut state = Vec::with_capacity(cols.len());
    for j in 0..cols.len() {
        state.push(if lower[j].is_finite() {
            VarState::AtLower
        } else if upper[j].is_finite() {
            VarState::AtUpper
        } else {
            VarState::Free
        });
    }

    // Row activity of the nonbasic point decides slack vs artificial basis.
    let mut activity = vec![S::zero(); m];
    for j in 0..nstruct {
        let v = nb_value(j, &state, &lower, &upper);
        if v != S::zero() {
            for &(i, a) in &cols[j] {
                activity[i] = activity[i] + a * v;
            }
        }
    }
    let mut basis = vec![0usize; m];
    let mut xb = vec![S::zero(); m];
    let mut artificials: Vec<usize> = Vec::new();
    for i in 0..m {
        let slack = nstruct + i;
        let v = b[i] - activity[i];
        if v >= lower[slack] - S::c(FEAS_TOL) && v <= upper[slack] + S::c(FEAS_TOL) {
            basis[i] = slack;
            state[i + nstruct] = VarState::Basic;
            xb[i] = v.max(lower[slack]).min(upper[slack]);
        } else {
            // Slack pinned at its nearest bound; an artificial absorbs the rest.
            let sv = if v < lower[slack] { lower[slack] } else { upper[slack] };
            state[slack] = if sv == lower[slack] { VarState::AtLower } else { VarState::AtUpper };
            let resid = v - sv;
            let dir = if resid >= S::zero() { S::one() } else { -S::one() };
            let art = cols.len();
            cols.push(vec![(i, dir)]);
            lower.push(S::zero());
            upper.push(inf);
            cost.push(S::zero());
            state.push(VarState::Basic);
            basis[i] = art;
            xb[i] = resid.abs();
            artificials.push(art);
            if sv != S::zero() {
                for &(ii, a) in &cols[slack] {
                    activity[ii] = activity[ii] + a * sv;
                }
            }
        }
    }

    let lu = match factorize(m, &basis.iter().map(|&c| cols[c].clone()).collect::<Vec<_>>()) {
        Ok(lu) => lu,
        Err(_) => return (failed(), None),
    };
    let mut w = Worker {
        m,
        cols,
        lower,
        upper,
        b,
        state,
        basis,
        xb,
        lu,
        etas: Vec::new(),
        scratch: Vec::new(),
        iters: 0,
    };

    if !artificials.is_empty() {
        let mut phase1_cost = vec![S::zero(); w.cols.len()];
        for &a in &artificials {
            phase1_cost[a] = S::one();
        }
        match w.optimize(&phase1_cost) {
            LoopResult::Optimal => {}
            LoopResult::Unbounded | LoopResult::Failed => return (failed(), None),
        }
        let infeas: S = artificials
            .iter()
            .map(|&a| w.value_of(a))
            .fold(S::zero(), |acc, v| acc + v);
        if infeas > S::c(1e-7) {
            return (infeasible(), None);
        }
        for &a in &artificials {
            w.lower[a] = S::zero();
            w.upper[a] = S::zero();
        }
    }

    debug_assert_eq!(cost.len(), w.cols.len());
    let full_cost = cost;

    match w.optimize(&full_cost) {
        LoopResult::Optimal => {}
        LoopResult::Unbounded => {
            return (
                Solution { status: Status::Unbounded, objective: S::zero(), primal: Vec::new(), duals: Vec::new() },
                None,
            )
        }
        LoopResult::Failed => return (failed(), None),
    }

    finish(&mut w, model, overrides, &full_cost, sgn, nstruct)
}

/// Extracts the solution (and a reusable basis) from an optimal worker.
fn finish<S: Scalar>(
    w: &mut Worker<S>,
    model: &Model<S>,
    overrides: Option<&[(usize, S, S)]>,
    full_cost: &[S],
    sgn: S,
    nstruct: usize,
) -> (Solution<S>, Option<WarmBasis>) {
    if std::env::var("LINSOLVE_LP_DEBUG").is_ok() {
        eprintln!("lp: {} rows, {} cols, {} iterations", w.m, w.cols.len(), w.iters);
    }
    let mut slot_of = vec![usize::MAX; w.cols.len()];
    for (slot, &c) in w.basis.iter().enumerate() {
        slot_of[c] = slot;
    }
    let primal: Vec<S> = (0..nstruct)
        .map(|j| {
            if slot_of[j] != usize::MAX {
                w.xb[slot_of[j]]
            } else {
                nb_value(j, &w.state, &w.lower, &w.upper)
            }
        })
        .collect();
    let mut infeas = model.primal_infeasibility(&primal);
    if let Some(ovr) = overrides {
        for &(j, lo, up) in ovr {
            infeas = infeas.max(lo - primal[j]).max(primal[j] - up);
        }
    }
    if infeas > S::c(1e-7) {
        return (failed(), None);
    }

    // Duals from the final basis: y = B⁻ᵀ c_B, flipped back for Maximize.
    let mut cb = vec![S::zero(); w.m];
    for slot in 0..w.m {
        cb[slot] = full_cost[w.basis[slot]];
    }
    let y = w.btran(&cb);
    let duals: Vec<S> = y.iter().map(|&v| sgn * v).collect();

    let warm = extract_basis(w, nstruct);
    (
        Solution { status: Status::Optimal, objective: model.objective_value(&primal), primal, duals },
        warm,
    )
}

/// Records the final basis over structural + slack columns. Basic
/// artificials (cold path only, stuck at zero) are swapped for the slack of
/// their row when that slack is nonbasic; otherwise no basis is returned.
fn extract_basis<S: Scalar>(w: &Worker<S>, nstruct: usize) -> Option<WarmBasis> {
    let plain = nstruct + w.m;
    let mut basis = w.basis.clone();
    let mut state: Vec<VarState> = w.state[..plain].to_vec();
    for entry in &mut basis {
        if *entry >= plain {
            let row = w.cols[*entry].first()?.0;
            let slack = nstruct + row;
            if state[slack] == VarState::Basic {
                return None;
            }
            state[slack] = VarState::Basic;
            *entry = slack;
        }
    }
    Some(WarmBasis { basis, state })
}

/// Attempts the warm-started solve. `None` means the attempt was
/// inconclusive and the caller should run the cold two-phase method.
///
/// Basic variables that the inherited basis leaves outside their bounds are
/// repaired first: each gets its violated side relaxed to infinity, capped
/// at the nearest true bound, with a unit cost pulling it back. Every term
/// of that repair objective is nonnegative, so a zero optimum restores
/// feasibility exactly. A nonzero optimum proves infeasibility only when all
/// repaired variables are fixed (then the cap loses no feasible point) —
/// branch-and-bound bound fixes, the intended use. Anything else falls back.
#[allow(clippy::too_many_arguments)]
fn try_warm<S: Scalar>(
    model: &Model<S>,
    cols: &[Vec<(usize, S)>],
    lower: &[S],
    upper: &[S],
    b: &[S],
    cost: &[S],
    overrides: Option<&[(usize, S, S)]>,
    wb: &WarmBasis,
) -> Option<(Solution<S>, Option<WarmBasis>)> {
    let m = b.len();
    let nstruct = model.num_vars();
    let plain = cols.len();
    if wb.basis.len() != m || wb.state.len() != plain {
        return None;
    }
    if wb.state.iter().filter(|&&s| s == VarState::Basic).count() != m {
        return None;
    }
    for &c in &wb.basis {
        if c >= plain || wb.state[c] != VarState::Basic {
            return None;
        }
    }

    let mut state = wb.state.clone();
    for j in 0..plain {
        if state[j] == VarState::Basic {
            continue;
        }
        // Nonbasic variables must rest on a finite bound where one exists.
        state[j] = if lower[j].is_finite() {
            match state[j] {
                VarState::AtUpper if upper[j].is_finite() => VarState::AtUpper,
                _ => VarState::AtLower,
            }
        } else if upper[j].is_finite() {
            VarState::AtUpper
        } else {
            VarState::Free
        };
    }

    let lu = match factorize(m, &wb.basis.iter().map(|&c| cols[c].clone()).collect::<Vec<_>>()) {
        Ok(lu) => lu,
        Err(_) => return None,
    };

    let mut rhs = b.to_vec();
    for j in 0..plain {
        if state[j] == VarState::Basic {
            continue;
        }
        let v = nb_value(j, &state, lower, upper);
        if v != S::zero() {
            for &(i, a) in &cols[j] {
                rhs[i] = rhs[i] - a * v;
            }
        }
    }
    let mut w = Worker {
        m,
        cols: cols.to_vec(),
        lower: lower.to_vec(),
        upper: upper.to_vec(),
        b: b.to_vec(),
        state,
        basis: wb.basis.clone(),
        xb: Vec::new(),
        lu,
        etas: Vec::new(),
        scratch: Vec::new(),
        iters: 0,
    };
    let mut xb = rhs;
    w.lu.ftran(&mut xb, &mut w.scratch);
    w.xb = xb;

    let inf = S::infinity();
    let tol = S::c(FEAS_TOL);
    // (var, true lower, true upper, violated-above?)
    let mut repairs: Vec<(usize, S, S, bool)> = Vec::new();
    for slot in 0..m {
        let j = w.basis[slot];
        let v = w.xb[slot];
        if v > w.upper[j] + tol {
            repairs.push((j, w.lower[j], w.upper[j], true));
            w.lower[j] = w.upper[j];
            w.upper[j] = inf;
        } else if v < w.lower[j] - tol {
            repairs.push((j, w.lower[j], w.upper[j], false));
            w.upper[j] = w.lower[j];
            w.lower[j] = -inf;
        }
    }

    if !repairs.is_empty() {
        let mut rcost = vec![S::zero(); plain];
        for &(j, _, _, above) in &repairs {
            rcost[j] = if above { S::one() } else { -S::one() };
        }
        match w.optimize(&rcost) {
            LoopResult::Optimal => {}
            LoopResult::Unbounded | LoopResult::Failed => return None,
        }
        let mut viol = S::zero();
        for &(j, lo, up, above) in &repairs {
            let target = if above { up } else { lo };
            viol = viol + (w.value_of(j) - target).abs();
        }
        if viol > S::c(1e-7) {
            if repairs.iter().all(|&(_, lo, up, _)| lo == up) {
                return Some((infeasible(), None));
            }
            return None;
        }
        for &(j, lo, up, above) in &repairs {
            w.lower[j] = lo;
            w.upper[j] = up;
            if w.state[j] != VarState::Basic {
                // A repaired variable can only leave the basis at its cap,
                // which is the true bound on the side it came from.
                w.state[j] = if above { VarState::AtUpper } else { VarState::AtLower };
            }
        }
    }

    let sgn = if model.sense == Sense::Maximize { -S::one() } else { S::one() };
    match w.optimize(cost) {
        LoopResult::Optimal => Some(finish(&mut w, model, overrides, cost, sgn, nstruct)),
        LoopResult::Unbounded => Some((
            Solution { status: Status::Unbounded, objective: S::zero(), primal: Vec::new(), duals: Vec::new() },
            None,
        )),
        LoopResult::Failed => None,
    }
}

fn infeasible<S: Scalar>() -> Solution<S> {
    Solution { status: Status::Infeasible, objective: S::zero(), primal: Vec::new(), duals: Vec::new() }
}

fn failed<S: Scalar>() -> Solution<S> {
    Solution { status: Status::IterationLimit, objective: S::zero(), primal: Vec::new(), duals: Vec::new() }
}

fn nb_value<S: Scalar>(j: usize, state: &[VarState], lower: &[S], upper: &[S]) -> S {
    match state[j] {
        VarState::AtLower => lower[j],
        VarState::AtUpper => upper[j],
        VarState::Free => S::zero(),
        VarState::Basic => unreachable!("basic variable has no nonbasic value"),
    }
}

fn solve_unconstrained<S: Scalar>(
    model: &Model<S>,
    lower: &[S],
    upper: &[S],
    cost: &[S],
    flip: bool,
) -> Solution<S> {
    let mut primal = Vec::with_capacity(model.num_vars());
    for j in 0..model.num_vars() {
        let c = cost[j];
        let v = if c > S::zero() {
            if !lower[j].is_finite() {
                return Solution { status: Status::Unbounded, objective: S::zero(), primal: Vec::new(), duals: Vec::new() };
            }
            lower[j]
        } else if c < S::zero() {
            if !upper[j].is_finite() {
                return Solution { status: Status::Unbounded, objective: S::zero(), primal: Vec::new(), duals: Vec::new() };
            }
            upper[j]
        } else if lower[j].is_finite() {
            lower[j]
        } else if upper[j].is_finite() {
            upper[j]
        } else {
            S::zero()
        };
        primal.push(v);
    }
    let _ = flip;
    Solution { status: Status::Optimal, objective: model.objective_value(&primal), primal, duals: Vec::new() }
}

impl<S: Scalar> Worker<S> {
    fn value_of(&self, j: usize) -> S {
        if self.state[j] == VarState::Basic {
            let slot = self.basis.iter().position(|&c| c == j).expect("basic column in basis");
            self.xb[slot]
        } else {
            nb_value(j, &self.state, &self.lower, &self.upper)
        }
    }

    fn ftran(&mut self, col: &[(usize, S)]) -> Vec<S> {
        let mut v = vec![S::zero(); self.m];
        for &(i, a) in col {
            v[i] = a;
        }
        self.lu.ftran(&mut v, &mut self.scratch);
        for &(r, ref wv) in &self.etas {
            let t = v[r] / wv.iter().find(|&&(i, _)| i == r).expect("eta pivot entry").1;
            for &(i, wi) in wv {
                if i != r {
                    v[i] = v[i] - wi * t;
                }
            }
            v[r] = t;
        }
        v
    }

    fn btran(&mut self, c: &[S]) -> Vec<S> {
        let mut v = c.to_vec();
        for &(r, ref wv) in self.etas.iter().rev() {
            let mut dot = S::zero();
            let mut wr = S::one();
            for &(i, wi) in wv {
                if i == r {
                    wr = wi;
                } else {
                    dot = dot + wi * v[i];
                }
            }
            v[r] = (v[r] - dot) / wr;
        }
        self.lu.btran(&mut v, &mut self.scratch);
        v
    }

    fn refactor(&mut self) -> Result<(), ()> {
        let cols: Vec<Vec<(usize, S)>> = self.basis.iter().map(|&c| self.cols[c].clone()).collect();
        self.lu = factorize(self.m, &cols).map_err(|_| ())?;
        self.etas.clear();
        // Recompute basic values from scratch to shed accumulated drift.
        let mut rhs = self.b.clone();
        for j in 0..self.cols.len() {
            if self.state[j] == VarState::Basic {
                continue;
            }
            let v = nb_value(j, &self.state, &self.lower, &self.upper);
            if v != S::zero() {
                for &(i, a) in &self.cols[j] {
                    rhs[i] = rhs[i] - a * v;
                }
            }
        }
        self.lu.ftran(&mut rhs, &mut self.scratch);
        self.xb = rhs;
        Ok(())
    }

    fn optimize(&mut self, cost: &[S]) -> LoopResult {
        let mut bland = false;
        let mut degen_streak = 0usize;
        let dual_tol = S::c(DUAL_TOL);
        loop {
            self.iters += 1;
            if self.iters > MAX_ITERS {
                return LoopResult::Failed;
            }
            if self.etas.len() >= REFACTOR_EVERY {
                if self.refactor().is_err() {
                    return LoopResult::Failed;
                }
            }

            let mut cb = vec![S::zero(); self.m];
            for slot in 0..self.m {
                cb[slot] = cost[self.basis[slot]];
            }
            let y = self.btran(&cb);

            // Pricing.
            let mut entering = None;
            let mut best_viol = dual_tol;
            for j in 0..self.cols.len() {
                let st = self.state[j];
                if st == VarState::Basic || self.lower[j] >= self.upper[j] {
                    continue;
                }
                let mut d = cost[j];
                for &(i, a) in &self.cols[j] {
                    d = d - a * y[i];
                }
                let (viol, dir) = match st {
                    VarState::AtLower => (-d, S::one()),
                    VarState::AtUpper => (d, -S::one()),
                    VarState::Free => {
                        if d < S::zero() {
                            (-d, S::one())
                        } else {
                            (d, -S::one())
                        }
                    }
                    VarState::Basic => unreachable!(),
                };
                if viol > best_viol {
                    entering = Some((j, dir));
                    if bland {
                        break;
                    }
                    best_viol = viol;
                }
            }
            let (q, dir) = match entering {
                Some(e) => e,
                None => return LoopResult::Optimal,
            };

            let col = self.cols[q].clone();
            let w = self.ftran(&col);

            // Ratio test over basic variables.
            let tie = S::c(RATIO_TIE);
            let mut best_t = S::infinity();
            let mut leaving: Option<(usize, bool, S)> = None; // slot, hit-upper, |w|
            for slot in 0..self.m {
                let wi = w[slot];
                if wi.abs() <= S::c(1e-9) {
                    continue;
                }
                let bj = self.basis[slot];
                let delta = dir * wi; // rate at which xb[slot] falls
                let (bound, hit_upper) = if delta > S::zero() {
                    (self.lower[bj], false)
                } else {
                    (self.upper[bj], true)
                };
                if !bound.is_finite() {
                    continue;
                }
                let t = ((self.xb[slot] - bound) / delta).max(S::zero());
                let mag = wi.abs();
                let take = match leaving {
                    None => true,
                    Some((lslot, _, lmag)) => {
                        if t < best_t - tie {
                            true
                        } else if t <= best_t + tie {
                            if bland {
                                self.basis[slot] < self.basis[lslot]
                            } else {
                                mag > lmag || (mag == lmag && self.basis[slot] < self.basis[lslot])
                            }
                        } else {
                            false
                        }
                    }
                };
                if take {
                    best_t = best_t.min(t);
                    leaving = Some((slot, hit_upper, mag));
                }
            }

            // The entering variable's own opposite bound may bind first.
            let range = self.upper[q] - self.lower[q];
            if range.is_finite() && range <= best_t {
                self.apply_step(&w, dir, range);
                self.state[q] = match self.state[q] {
                    VarState::AtLower => VarState::AtUpper,
                    VarState::AtUpper => VarState::AtLower,
                    _ => unreachable!("free variables have no bound flip"),
                };
                continue;
            }

            match leaving {
                None => return LoopResult::Unbounded,
                Some((slot, hit_upper, mag)) => {
                    // Tiny pivots on a stale factorization: refactor and retry.
                    if mag < S::c(PIVOT_MIN) && !self.etas.is_empty() {
                        if self.refactor().is_err() {
                            return LoopResult::Failed;
                        }
                        continue;
                    }
                    let t = best_t;
                    let enter_val = nb_value(q, &self.state, &self.lower, &self.upper) + dir * t;
                    self.apply_step(&w, dir, t);
                    let out = self.basis[slot];
                    self.state[out] = if hit_upper { VarState::AtUpper } else { VarState::AtLower };
                    self.basis[slot] = q;
                    self.state[q] = VarState::Basic;
                    self.xb[slot] = enter_val;
                    let sparse: Vec<(usize, S)> =
                        w.iter().enumerate().filter(|&(_, &v)| v != S::zero()).map(|(i, &v)| (i, v)).collect();
                    self.etas.push((slot, sparse));

                    if t <= S::c(DEGEN_STEP) {
                        degen_streak += 1;
                        if degen_streak > BLAND_AFTER {
                            bland = true;
                        }
                    } else {
                        degen_streak = 0;
                        bland = false;
                    }
                }
            }
        }
    }

    fn apply_step(&mut self, w: &[S], dir: S, t: S) {
        if t == S::zero() {
            return;
        }
        for slot in 0..self.m {
            if w[slot] != S::zero() {
                self.xb[slot] = self.xb[slot] - dir * t * w[slot];
            }
        }
    }
}
