use std::cmp::Ordering;
use std::fmt;

/// A coordinate of the chart `(t, z^{ri}, zbar^{ri})`.
///
/// `level` is the extension level `r` (0 on the base manifold) and `index`
/// is the 1-based fiber index `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Time,
    Z { level: u32, index: u32 },
    ZBar { level: u32, index: u32 },
}

impl Coord {
    pub fn z(level: u32, index: u32) -> Self {
        Coord::Z { level, index }
    }

    pub fn zbar(level: u32, index: u32) -> Self {
        Coord::ZBar { level, index }
    }

    pub fn is_time(&self) -> bool {
        matches!(self, Coord::Time)
    }

    pub fn is_fiber(&self) -> bool {
        !self.is_time()
    }

    pub fn level(&self) -> Option<u32> {
        match *self {
            Coord::Time => None,
            Coord::Z { level, .. } | Coord::ZBar { level, .. } => Some(level),
        }
    }

    pub fn index(&self) -> Option<u32> {
        match *self {
            Coord::Time => None,
            Coord::Z { index, .. } | Coord::ZBar { index, .. } => Some(index),
        }
    }

    /// Same axis and index, moved to `level`. Time is returned unchanged.
    pub fn at_level(&self, level: u32) -> Self {
        match *self {
            Coord::Time => Coord::Time,
            Coord::Z { index, .. } => Coord::Z { level, index },
            Coord::ZBar { index, .. } => Coord::ZBar { level, index },
        }
    }

    /// The formal conjugate partner: `z^{ri} <-> zbar^{ri}`.
    pub fn conjugate(&self) -> Self {
        match *self {
            Coord::Time => Coord::Time,
            Coord::Z { level, index } => Coord::ZBar { level, index },
            Coord::ZBar { level, index } => Coord::Z { level, index },
        }
    }

    fn sort_key(&self) -> (u8, u32, u32, u8) {
        match *self {
            Coord::Time => (0, 0, 0, 0),
            Coord::Z { level, index } => (1, level, index, 0),
            Coord::ZBar { level, index } => (1, level, index, 1),
        }
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Coord::Time => f.write_str("t"),
            Coord::Z { level, index } => write!(f, "z{level}_{index}"),
            Coord::ZBar { level, index } => write!(f, "zb{level}_{index}"),
        }
    }
}
