use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;

/// Inclusive integer range written `a..b`, or a single value `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub start: i64,
    pub end: i64,
}

impl IntRange {
    pub fn single(v: i64) -> Self {
        IntRange { start: v, end: v }
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + Clone {
        self.start..=self.end
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl FromStr for IntRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidParameters(format!("bad range {s:?}, expected a or a..b"));
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
        // search after the first character so a leading minus sign is not a separator
        let range = match s.get(1..).and_then(|rest| rest.find("..")) {
            Some(i) => {
                let (a, b) = (&s[..i + 1], &s[i + 3..]);
                let b = b.strip_prefix('=').unwrap_or(b);
                IntRange {
                    start: parse(a)?,
                    end: parse(b)?,
                }
            }
            None => IntRange::single(parse(s)?),
        };
        if range.start > range.end {
            return Err(Error::InvalidParameters(format!("empty range {s:?}")));
        }
        Ok(range)
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

impl Serialize for IntRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
