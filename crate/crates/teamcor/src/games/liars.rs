//! Three-player liar's dice with one k-faced die each.
//!
//! Bids are (count, face) with count 1..3, ordered by index
//! (count-1)*k + face. Seat 1 opens with any bid; thereafter each seat in
//! turn raises to a strictly higher bid or challenges. A challenge ends the
//! hand: if at least `count` dice show `face`, the last bidder wins +1 from
//! the challenger, otherwise the challenger wins +1 from the last bidder;
//! the third seat gets 0.

use crate::efg::{Game, GameBuilder};

pub fn build(faces: usize) -> Game {
    let mut b = GameBuilder::new();
    let rolls = faces * faces * faces;
    let prob = 1.0 / rolls as f64;
    let mut outcomes = Vec::with_capacity(rolls);
    for d0 in 0..faces {
        for d1 in 0..faces {
            for d2 in 0..faces {
                let child = bid(&mut b, faces, [d0, d1, d2], prob, &mut Vec::new());
                outcomes.push((prob, child));
            }
        }
    }
    let root = b.chance(outcomes);
    b.finish(root)
}

fn bid(b: &mut GameBuilder, faces: usize, roll: [usize; 3], reach: f64, hist: &mut Vec<usize>) -> usize {
    let nbids = 3 * faces;
    let seat = hist.len() % 3;
    let from = hist.last().map(|&x| x + 1).unwrap_or(0);
    let mut labels: Vec<String> = (from..nbids).map(|x| format!("b{x}")).collect();
    let opening = hist.is_empty();
    if !opening {
        labels.push("x".into());
    }
    let mut children = Vec::with_capacity(labels.len());
    for x in from..nbids {
        hist.push(x);
        children.push(bid(b, faces, roll, reach, hist));
        hist.pop();
    }
    if !opening {
        children.push(challenge(b, faces, roll, reach, hist, seat));
    }
    let label = format!("d{}|h{hist:?}", roll[seat]);
    b.decision(seat, label, &labels, children)
}

fn challenge(
    b: &mut GameBuilder,
    faces: usize,
    roll: [usize; 3],
    reach: f64,
    hist: &[usize],
    challenger: usize,
) -> usize {
    let last = *hist.last().unwrap();
    let count = last / faces + 1;
    let face = last % faces;
    let shown = roll.iter().filter(|&&d| d == face).count();
    let bidder = (challenger + 2) % 3;
    let mut payoffs = [0.0; 3];
    if shown >= count {
        payoffs[bidder] = 1.0;
        payoffs[challenger] = -1.0;
    } else {
        payoffs[challenger] = 1.0;
        payoffs[bidder] = -1.0;
    }
    b.terminal(payoffs, reach)
}
