//! Three-player Kuhn poker with `ranks` cards.
//!
//! One-chip ante each; an ordered distinct triple of cards is dealt
//! uniformly. Seats check or bet (1 chip) in order; once someone bets, the
//! other two seats — in cyclic order after the bettor — fold or call.
//! Highest card among the non-folded seats takes the pot. 13 betting lines
//! per deal.

use crate::efg::{Game, GameBuilder};

pub fn build(ranks: usize) -> Game {
    let mut b = GameBuilder::new();
    let n = ranks * (ranks - 1) * (ranks - 2);
    let prob = 1.0 / n as f64;
    let mut outcomes = Vec::with_capacity(n);
    for c0 in 0..ranks {
        for c1 in 0..ranks {
            for c2 in 0..ranks {
                if c0 == c1 || c0 == c2 || c1 == c2 {
                    continue;
                }
                let child = betting(&mut b, [c0, c1, c2], prob, String::new());
                outcomes.push((prob, child));
            }
        }
    }
    let root = b.chance(outcomes);
    b.finish(root)
}

fn betting(b: &mut GameBuilder, deal: [usize; 3], reach: f64, hist: String) -> usize {
    let (seat, actions): (usize, &[&str]) = match hist.find('b') {
        None => {
            if hist.len() == 3 {
                return terminal(b, deal, reach, &hist);
            }
            (hist.len(), &["k", "b"])
        }
        Some(pos) => {
            let responses = hist.len() - pos - 1;
            if responses == 2 {
                return terminal(b, deal, reach, &hist);
            }
            ((pos + 1 + responses) % 3, &["f", "c"])
        }
    };
    let labels: Vec<String> = actions.iter().map(|s| s.to_string()).collect();
    let children: Vec<usize> = actions
        .iter()
        .map(|a| betting(b, deal, reach, format!("{hist}{a}")))
        .collect();
    b.decision(seat, format!("{}|{}", deal[seat], hist), &labels, children)
}

fn terminal(b: &mut GameBuilder, deal: [usize; 3], reach: f64, hist: &str) -> usize {
    let mut contrib = [1.0f64; 3];
    let mut active = [true; 3];
    match hist.find('b') {
        None => {}
        Some(pos) => {
            contrib[pos] += 1.0;
            for (i, ch) in hist[pos + 1..].chars().enumerate() {
                let seat = (pos + 1 + i) % 3;
                match ch {
                    'f' => active[seat] = false,
                    'c' => contrib[seat] += 1.0,
                    _ => unreachable!(),
                }
            }
        }
    }
    let pot: f64 = contrib.iter().sum();
    let winner = (0..3).filter(|&s| active[s]).max_by_key(|&s| deal[s]).unwrap();
    let mut payoffs = [0.0; 3];
    for s in 0..3 {
        payoffs[s] = if s == winner { pot } else { 0.0 } - contrib[s];
    }
    b.terminal(payoffs, reach)
}
