//! Three-player limit Leduc hold'em with `ranks` ranks, two copies of each
//! rank in the deck.
//!
//! One-chip ante each; every seat gets a private card; one board card is
//! dealt between the two betting rounds. Bet size is 2 in round one and 4
//! in round two; at most `max_raises` aggressive actions (the opening bet
//! included) per round, the counter resetting between rounds. Betting order
//! is seat 1 -> 2 -> 3; after a bet or raise the other active seats respond
//! in cyclic order. The hand ends as soon as one active seat remains (no
//! board is dealt in that case). Showdown: pairing the board beats high
//! card; the pot splits evenly among tied winners.

use crate::efg::{Game, GameBuilder};

pub fn build(ranks: usize, max_raises: usize) -> Game {
    let mut b = GameBuilder::new();
    let deck = 2 * ranks;
    let denom = (deck * (deck - 1) * (deck - 2)) as f64;
    let mut outcomes = Vec::new();
    for c0 in 0..ranks {
        for c1 in 0..ranks {
            for c2 in 0..ranks {
                let mut cnt = vec![2i32; ranks];
                let mut weight = 1.0;
                let mut ok = true;
                for &c in &[c0, c1, c2] {
                    if cnt[c] == 0 {
                        ok = false;
                        break;
                    }
                    weight *= cnt[c] as f64;
                    cnt[c] -= 1;
                }
                if !ok {
                    continue;
                }
                let prob = weight / denom;
                let ctx = Ctx { ranks, max_raises, private: [c0, c1, c2], remaining: cnt };
                let child = start_round(&mut b, &ctx, 0, None, String::new(), [true; 3], [1.0; 3], prob);
                outcomes.push((prob, child));
            }
        }
    }
    let root = b.chance(outcomes);
    b.finish(root)
}

struct Ctx {
    ranks: usize,
    max_raises: usize,
    private: [usize; 3],
    /// Copies left per rank after the private deal.
    remaining: Vec<i32>,
}

struct RoundState {
    hist: String,
    active: [bool; 3],
    paid: [f64; 3],
    /// Chips each seat has put in during this round.
    contrib: [f64; 3],
    level: f64,
    raises: usize,
    queue: Vec<usize>,
}

fn start_round(
    b: &mut GameBuilder,
    ctx: &Ctx,
    round: usize,
    board: Option<usize>,
    prefix: String,
    active: [bool; 3],
    paid: [f64; 3],
    reach: f64,
) -> usize {
    let st = RoundState {
        hist: String::new(),
        active,
        paid,
        contrib: [0.0; 3],
        level: 0.0,
        raises: 0,
        queue: (0..3).filter(|&s| active[s]).collect(),
    };
    step(b, ctx, round, board, &prefix, st, reach)
}

fn step(
    b: &mut GameBuilder,
    ctx: &Ctx,
    round: usize,
    board: Option<usize>,
    prefix: &str,
    mut st: RoundState,
    reach: f64,
) -> usize {
    let alive = st.active.iter().filter(|&&a| a).count();
    if alive == 1 || st.queue.is_empty() {
        return end_round(b, ctx, round, board, prefix, st, reach);
    }
    let seat = st.queue.remove(0);
    if !st.active[seat] {
        return step(b, ctx, round, board, prefix, st, reach);
    }
    let owe = st.level - st.contrib[seat];
    let can_raise = st.raises < ctx.max_raises;
    let amt = if round == 0 { 2.0 } else { 4.0 };
    let actions: Vec<&str> = if owe <= 0.0 {
        if can_raise {
            vec!["k", "b"]
        } else {
            vec!["k"]
        }
    } else if can_raise {
        vec!["f", "c", "r"]
    } else {
        vec!["f", "c"]
    };

    let mut children = Vec::with_capacity(actions.len());
    for &a in &actions {
        let mut next = RoundState {
            hist: format!("{}{}", st.hist, a),
            active: st.active,
            paid: st.paid,
            contrib: st.contrib,
            level: st.level,
            raises: st.raises,
            queue: st.queue.clone(),
        };
        match a {
            "k" => {}
            "f" => next.active[seat] = false,
            "c" => {
                next.paid[seat] += owe;
                next.contrib[seat] = st.level;
            }
            "b" | "r" => {
                next.level = st.level + amt;
                let pay = next.level - st.contrib[seat];
                next.paid[seat] += pay;
                next.contrib[seat] = next.level;
                next.raises += 1;
                next.queue = (1..3).map(|i| (seat + i) % 3).filter(|&s| next.active[s]).collect();
            }
            _ => unreachable!(),
        }
        children.push(step(b, ctx, round, board, prefix, next, reach));
    }
    let labels: Vec<String> = actions.iter().map(|s| s.to_string()).collect();
    let board_tag = board.map(|x| x.to_string()).unwrap_or_default();
    let label = format!("r{round}|c{}|b{board_tag}|{prefix}|{}", ctx.private[seat], st.hist);
    b.decision(seat, label, &labels, children)
}

fn end_round(
    b: &mut GameBuilder,
    ctx: &Ctx,
    round: usize,
    board: Option<usize>,
    _prefix: &str,
    st: RoundState,
    reach: f64,
) -> usize {
    let alive = st.active.iter().filter(|&&a| a).count();
    if round == 0 && alive > 1 {
        // Deal the board from the three undealt cards, then bet again.
        let total: i32 = ctx.remaining.iter().sum();
        let mut outcomes = Vec::new();
        for r in 0..ctx.ranks {
            if ctx.remaining[r] == 0 {
                continue;
            }
            let p = ctx.remaining[r] as f64 / total as f64;
            let child = start_round(b, ctx, 1, Some(r), st.hist.clone(), st.active, st.paid, reach * p);
            outcomes.push((p, child));
        }
        return b.chance(outcomes);
    }
    showdown(b, ctx, board, &st, reach)
}

fn showdown(b: &mut GameBuilder, ctx: &Ctx, board: Option<usize>, st: &RoundState, reach: f64) -> usize {
    let actives: Vec<usize> = (0..3).filter(|&s| st.active[s]).collect();
    let winners: Vec<usize> = if actives.len() == 1 {
        actives.clone()
    } else {
        let paired: Vec<usize> =
            actives.iter().copied().filter(|&s| Some(ctx.private[s]) == board).collect();
        if !paired.is_empty() {
            paired
        } else {
            let top = actives.iter().map(|&s| ctx.private[s]).max().unwrap();
            actives.iter().copied().filter(|&s| ctx.private[s] == top).collect()
        }
    };
    let pot: f64 = st.paid.iter().sum();
    let share = pot / winners.len() as f64;
    let mut payoffs = [0.0; 3];
    for s in 0..3 {
        payoffs[s] = if winners.contains(&s) { share } else { 0.0 } - st.paid[s];
    }
    b.terminal(payoffs, reach)
}
