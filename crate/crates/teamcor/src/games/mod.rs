//! Benchmark game generators. Conventions that the rules text leaves open
//! (bet reaction order, bid ordering, tie handling, deck composition) are
//! pinned by the structural tests in `tests/structure.rs`.

use crate::efg::Game;

mod goofspiel;
mod kuhn;
mod leduc;
mod liars;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameSpec {
    Kuhn { ranks: usize },
    Goofspiel { limited_info: bool },
    LiarsDice { faces: usize },
    Leduc { ranks: usize, max_raises: usize },
}

#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("unknown game name {0:?}")]
    UnknownName(String),
}

pub const GAME_NAMES: &[&str] = &[
    "kuhn3",
    "kuhn4",
    "kuhn12",
    "goofspiel-limited",
    "goofspiel",
    "liars3",
    "liars4",
    "leduc31",
    "leduc41",
    "leduc22",
];

impl GameSpec {
    pub fn from_name(name: &str) -> Result<Self, GameError> {
        Ok(match name {
            "kuhn3" => GameSpec::Kuhn { ranks: 3 },
            "kuhn4" => GameSpec::Kuhn { ranks: 4 },
            "kuhn12" => GameSpec::Kuhn { ranks: 12 },
            "goofspiel" => GameSpec::Goofspiel { limited_info: false },
            "goofspiel-limited" => GameSpec::Goofspiel { limited_info: true },
            "liars3" => GameSpec::LiarsDice { faces: 3 },
            "liars4" => GameSpec::LiarsDice { faces: 4 },
            "leduc31" => GameSpec::Leduc { ranks: 3, max_raises: 1 },
            "leduc41" => GameSpec::Leduc { ranks: 4, max_raises: 1 },
            "leduc22" => GameSpec::Leduc { ranks: 2, max_raises: 2 },
            other => return Err(GameError::UnknownName(other.to_string())),
        })
    }

    pub fn name(&self) -> String {
        match *self {
            GameSpec::Kuhn { ranks } => format!("kuhn{ranks}"),
            GameSpec::Goofspiel { limited_info: false } => "goofspiel".into(),
            GameSpec::Goofspiel { limited_info: true } => "goofspiel-limited".into(),
            GameSpec::LiarsDice { faces } => format!("liars{faces}"),
            GameSpec::Leduc { ranks, max_raises } => format!("leduc{ranks}{max_raises}"),
        }
    }

    pub fn build(&self) -> Result<Game, GameError> {
        match *self {
            GameSpec::Kuhn { ranks } => {
                if ranks < 3 {
                    return Err(GameError::UnsupportedParameters("kuhn needs at least 3 ranks".into()));
                }
                Ok(kuhn::build(ranks))
            }
            GameSpec::Goofspiel { limited_info } => Ok(goofspiel::build(limited_info)),
            GameSpec::LiarsDice { faces } => {
                if faces < 2 {
                    return Err(GameError::UnsupportedParameters("liar's dice needs at least 2 faces".into()));
                }
                Ok(liars::build(faces))
            }
            GameSpec::Leduc { ranks, max_raises } => {
                if ranks < 2 || max_raises < 1 {
                    return Err(GameError::UnsupportedParameters(
                        "leduc needs at least 2 ranks and 1 raise".into(),
                    ));
                }
                Ok(leduc::build(ranks, max_raises))
            }
        }
    }
}
