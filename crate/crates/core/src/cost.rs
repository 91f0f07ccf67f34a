use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A nonnegative path cost where `UNREACHABLE` behaves as +∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(u64);

impl Cost {
    pub const ZERO: Cost = Cost(0);
    pub const UNREACHABLE: Cost = Cost(u64::MAX);

    pub fn new(value: u64) -> Self {
        assert!(value < u64::MAX, "finite cost overflow");
        Cost(value)
    }

    pub fn is_finite(self) -> bool {
        self.0 != u64::MAX
    }

    pub fn value(self) -> Option<u64> {
        self.is_finite().then_some(self.0)
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        if !self.is_finite() || !rhs.is_finite() {
            return Cost::UNREACHABLE;
        }
        match self.0.checked_add(rhs.0) {
            Some(v) if v < u64::MAX => Cost(v),
            _ => Cost::UNREACHABLE,
        }
    }
}

impl Add<u64> for Cost {
    type Output = Cost;

    fn add(self, rhs: u64) -> Cost {
        self + Cost::new(rhs.min(u64::MAX - 1))
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("UNREACHABLE"),
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Option::<u64>::deserialize(d)?.map_or(Cost::UNREACHABLE, Cost::new))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unreachable_absorbs_addition() {
        assert_eq!(Cost::UNREACHABLE + Cost::new(3), Cost::UNREACHABLE);
        assert_eq!(Cost::new(2) + 5, Cost::new(7));
        assert!(Cost::new(u64::MAX - 2) + 5 == Cost::UNREACHABLE);
        assert_eq!(Cost::UNREACHABLE.max(Cost::new(1)), Cost::UNREACHABLE);
    }
}
