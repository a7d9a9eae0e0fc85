//! JSON game format for user-supplied trees.
//!
//! Top level: `{"seats": 3, "nodes": [...]}` with node 0 the root. Nodes are
//! `{"kind":"decision","seat":1..3,"infoset":"<label>","actions":[{"label":..,
//! "child":<index>}]}`, `{"kind":"chance","outcomes":[{"prob":..,"child":..}]}`
//! or `{"kind":"terminal","payoffs":[a,b,c]}`. Infosets group by (seat,
//! label); chance reach is derived from the tree. Defective games are
//! rejected with the validation report.

use crate::efg::{validate, Game, GameBuilder, NodeKind, ValidationReport};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
struct FileGame {
    seats: usize,
    nodes: Vec<FileNode>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FileNode {
    Decision { seat: usize, infoset: String, actions: Vec<FileAction> },
    Chance { outcomes: Vec<FileOutcome> },
    Terminal { payoffs: [f64; 3] },
}

#[derive(Debug, Deserialize)]
struct FileAction {
    label: String,
    child: usize,
}

#[derive(Debug, Deserialize)]
struct FileOutcome {
    prob: f64,
    child: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("malformed game file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("game must have exactly 3 seats, found {0}")]
    BadSeatCount(usize),
    #[error("node {0} references missing node {1}")]
    DanglingChild(usize, usize),
    #[error("node {0} is referenced more than once (not a tree)")]
    NotATree(usize),
    #[error("decision node {0} has seat {1}, expected 1..=3")]
    BadSeat(usize, usize),
    #[error("game failed validation: {0:?}")]
    Invalid(ValidationReport),
}

pub fn load(text: &str) -> Result<Game, LoadError> {
    let file: FileGame = serde_json::from_str(text)?;
    if file.seats != 3 {
        return Err(LoadError::BadSeatCount(file.seats));
    }
    let n = file.nodes.len();
    let mut referenced = vec![false; n];
    for (i, node) in file.nodes.iter().enumerate() {
        let children: Vec<usize> = match node {
            FileNode::Decision { actions, seat, .. } => {
                if *seat < 1 || *seat > 3 {
                    return Err(LoadError::BadSeat(i, *seat));
                }
                actions.iter().map(|a| a.child).collect()
            }
            FileNode::Chance { outcomes } => outcomes.iter().map(|o| o.child).collect(),
            FileNode::Terminal { .. } => Vec::new(),
        };
        for c in children {
            if c >= n {
                return Err(LoadError::DanglingChild(i, c));
            }
            if referenced[c] {
                return Err(LoadError::NotATree(c));
            }
            referenced[c] = true;
        }
    }

    // Chance reach per node, top-down from the root.
    let mut reach = vec![0.0f64; n];
    reach[0] = 1.0;
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        match &file.nodes[i] {
            FileNode::Decision { actions, .. } => {
                for a in actions {
                    reach[a.child] = reach[i];
                    stack.push(a.child);
                }
            }
            FileNode::Chance { outcomes } => {
                for o in outcomes {
                    reach[o.child] = reach[i] * o.prob;
                    stack.push(o.child);
                }
            }
            FileNode::Terminal { .. } => {}
        }
    }

    // Rebuild bottom-up through the builder so infosets group correctly.
    let mut b = GameBuilder::new();
    let mut built = vec![usize::MAX; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        order.push(i);
        match &file.nodes[i] {
            FileNode::Decision { actions, .. } => stack.extend(actions.iter().map(|a| a.child)),
            FileNode::Chance { outcomes } => stack.extend(outcomes.iter().map(|o| o.child)),
            FileNode::Terminal { .. } => {}
        }
    }
    for &i in order.iter().rev() {
        built[i] = match &file.nodes[i] {
            FileNode::Terminal { payoffs } => b.terminal(*payoffs, reach[i]),
            FileNode::Chance { outcomes } => {
                let outs = outcomes.iter().map(|o| (o.prob, built[o.child])).collect();
                b.chance(outs)
            }
            FileNode::Decision { seat, infoset, actions } => {
                let labels: Vec<String> = actions.iter().map(|a| a.label.clone()).collect();
                let children: Vec<usize> = actions.iter().map(|a| built[a.child]).collect();
                b.decision(seat - 1, infoset.clone(), &labels, children)
            }
        };
    }
    let game = b.finish(built[0]);
    debug_assert!(matches!(game.nodes[game.root], NodeKind::Terminal { .. } | NodeKind::Chance { .. } | NodeKind::Decision { .. }));
    let report = validate(&game);
    if !report.is_clean() {
        return Err(LoadError::Invalid(report));
    }
    Ok(game)
}
