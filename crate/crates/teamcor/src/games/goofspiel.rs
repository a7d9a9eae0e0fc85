//! Goofspiel with 3 prize cards valued {1, 2, 3}.
//!
//! Chance shuffles the prize deck (6 equiprobable orders). Each turn the
//! current prize is revealed and the three seats bid one card from their own
//! {1, 2, 3} hand, simultaneously — modeled as sequential moves whose
//! infosets hide the within-turn earlier choices. The highest bid wins the
//! prize; ties split it evenly among the tying highest bidders. The last
//! card is forced. Raw score is the sum of won prize values; payoffs are
//! zero-summed by subtracting the mean score.
//!
//! The card values are pinned by the benchmark equilibrium values
//! (0.252422 limited / 0.253439 full, for every opponent seat): value sets
//! like {-1, 0, 1} produce an identical tree but a team value of 0.

use crate::efg::{Game, GameBuilder};

const VALUES: [i32; 3] = [1, 2, 3];

pub fn build(limited_info: bool) -> Game {
    let mut b = GameBuilder::new();
    let mut outcomes = Vec::new();
    let orders: Vec<[usize; 3]> = permutations();
    let prob = 1.0 / orders.len() as f64;
    for order in orders {
        let child = turn(
            &mut b,
            limited_info,
            order,
            0,
            [[true; 3]; 3],
            [String::new(), String::new(), String::new()],
            [0.0; 3],
            prob,
        );
        outcomes.push((prob, child));
    }
    let root = b.chance(outcomes);
    b.finish(root)
}

fn permutations() -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..3 {
        for bb in 0..3 {
            for c in 0..3 {
                if a != bb && a != c && bb != c {
                    out.push([a, bb, c]);
                }
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn turn(
    b: &mut GameBuilder,
    limited: bool,
    order: [usize; 3],
    t: usize,
    hands: [[bool; 3]; 3],
    obs: [String; 3],
    score: [f64; 3],
    reach: f64,
) -> usize {
    if t == 3 {
        let mean = (score[0] + score[1] + score[2]) / 3.0;
        return b.terminal([score[0] - mean, score[1] - mean, score[2] - mean], reach);
    }
    choose(b, limited, order, t, hands, obs, score, reach, [usize::MAX; 3], 0)
}

#[allow(clippy::too_many_arguments)]
fn choose(
    b: &mut GameBuilder,
    limited: bool,
    order: [usize; 3],
    t: usize,
    hands: [[bool; 3]; 3],
    obs: [String; 3],
    score: [f64; 3],
    reach: f64,
    chosen: [usize; 3],
    seat: usize,
) -> usize {
    if seat == 3 {
        let bids: Vec<i32> = (0..3).map(|s| VALUES[chosen[s]]).collect();
        let top = *bids.iter().max().unwrap();
        let winners: Vec<usize> = (0..3).filter(|&s| bids[s] == top).collect();
        let prize = VALUES[order[t]] as f64;
        let share = prize / winners.len() as f64;
        let mut score2 = score;
        for &w in &winners {
            score2[w] += share;
        }
        let mut hands2 = hands;
        let mut obs2 = obs;
        for s in 0..3 {
            hands2[s][chosen[s]] = false;
            let signal = if limited {
                format!("w{winners:?}")
            } else {
                format!("b{:?}", bids)
            };
            obs2[s].push_str(&format!("({},{signal})", VALUES[chosen[s]]));
        }
        return turn(b, limited, order, t + 1, hands2, obs2, score2, reach);
    }
    let cards: Vec<usize> = (0..3).filter(|&c| hands[seat][c]).collect();
    let labels: Vec<String> = cards.iter().map(|&c| VALUES[c].to_string()).collect();
    let children: Vec<usize> = cards
        .iter()
        .map(|&c| {
            let mut ch = chosen;
            ch[seat] = c;
            choose(b, limited, order, t, hands, obs.clone(), score, reach, ch, seat + 1)
        })
        .collect();
    let prizes: Vec<i32> = order[..=t].iter().map(|&i| VALUES[i]).collect();
    let label = format!("p{prizes:?}|{}", obs[seat]);
    b.decision(seat, label, &labels, children)
}
