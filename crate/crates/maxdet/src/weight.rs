use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A weight from the max-plus domain: an integer, or bottom standing for
/// "no accepting run" (the semiring's -infinity).
///
/// Bottom is absorbing under addition and the minimum of the order, so
/// `max` and `plus` below implement the (Z u {-inf}, max, +) semiring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtendedWeight {
    Bottom,
    Finite(i64),
}

pub use ExtendedWeight::{Bottom, Finite};

impl ExtendedWeight {
    pub fn is_bottom(self) -> bool {
        matches!(self, Bottom)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Bottom => None,
            Finite(x) => Some(x),
        }
    }

    /// Semiring addition: max, with bottom as neutral element.
    pub fn max(self, other: ExtendedWeight) -> ExtendedWeight {
        match (self, other) {
            (Bottom, w) | (w, Bottom) => w,
            (Finite(a), Finite(b)) => Finite(a.max(b)),
        }
    }

    /// Semiring multiplication: checked integer addition, with bottom absorbing.
    pub fn plus(self, w: i64) -> Result<ExtendedWeight> {
        match self {
            Bottom => Ok(Bottom),
            Finite(a) => a.checked_add(w).map(Finite).ok_or(Error::Overflow),
        }
    }
}

impl PartialOrd for ExtendedWeight {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedWeight {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Bottom, Bottom) => std::cmp::Ordering::Equal,
            (Bottom, Finite(_)) => std::cmp::Ordering::Less,
            (Finite(_), Bottom) => std::cmp::Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl From<i64> for ExtendedWeight {
    fn from(x: i64) -> Self {
        Finite(x)
    }
}

impl fmt::Display for ExtendedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bottom => write!(f, "undefined"),
            Finite(x) => write!(f, "{x}"),
        }
    }
}

pub(crate) fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bottom_is_absorbing_and_least() {
        assert_eq!(Bottom.plus(5).unwrap(), Bottom);
        assert_eq!(Bottom.max(Finite(-7)), Finite(-7));
        assert!(Bottom < Finite(i64::MIN));
    }

    #[test]
    fn plus_checks_overflow() {
        assert!(Finite(i64::MAX).plus(1).is_err());
        assert_eq!(Finite(3).plus(4).unwrap(), Finite(7));
    }
}
