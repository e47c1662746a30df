use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Identifier of an item, design alternative, vertex or cluster.
///
/// Ordering is natural: digit runs compare numerically, so `2 < 10` and
/// `R2 < R10`. Purely numeric ids serialize as JSON numbers, everything else
/// as strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Id(String);

impl Id {
    pub fn new(s: impl Into<String>) -> Id {
        Id(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn is_numeric(&self) -> bool {
        !self.0.is_empty() && self.0.bytes().all(|b| b.is_ascii_digit())
    }
}

impl From<&str> for Id {
    fn from(s: &str) -> Id {
        Id(s.to_string())
    }
}

impl From<String> for Id {
    fn from(s: String) -> Id {
        Id(s)
    }
}

impl From<u32> for Id {
    fn from(v: u32) -> Id {
        Id(v.to_string())
    }
}

impl Borrow<str> for Id {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn chunks(s: &str) -> impl Iterator<Item = (bool, &str)> {
    let bytes = s.as_bytes();
    let mut start = 0;
    std::iter::from_fn(move || {
        if start >= bytes.len() {
            return None;
        }
        let digit = bytes[start].is_ascii_digit();
        let mut end = start + 1;
        while end < bytes.len() && bytes[end].is_ascii_digit() == digit {
            end += 1;
        }
        let out = (digit, &s[start..end]);
        start = end;
        Some(out)
    })
}

fn cmp_digits(a: &str, b: &str) -> Ordering {
    let a = a.trim_start_matches('0');
    let b = b.trim_start_matches('0');
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Ord for Id {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = chunks(&self.0);
        let mut b = chunks(&other.0);
        loop {
            match (a.next(), b.next()) {
                (None, None) => return self.0.cmp(&other.0),
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((da, sa)), Some((db, sb))) => {
                    let ord = match (da, db) {
                        (true, true) => cmp_digits(sa, sb),
                        (true, false) => Ordering::Less,
                        (false, true) => Ordering::Greater,
                        (false, false) => sa.cmp(sb),
                    };
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Id {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Id {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.parse::<u64>() {
            Ok(v) if self.is_numeric() && v.to_string() == self.0 => serializer.serialize_u64(v),
            _ => serializer.serialize_str(&self.0),
        }
    }
}

impl<'de> Deserialize<'de> for Id {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct IdVisitor;

        impl Visitor<'_> for IdVisitor {
            type Value = Id;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a string or non-negative integer identifier")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Id, E> {
                if v.is_empty() {
                    return Err(E::custom("empty identifier"));
                }
                Ok(Id(v.to_string()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Id, E> {
                Ok(Id(v.to_string()))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Id, E> {
                u64::try_from(v)
                    .map(|v| Id(v.to_string()))
                    .map_err(|_| E::custom("negative identifier"))
            }
        }

        deserializer.deserialize_any(IdVisitor)
    }
}

/// Build a list of ids from anything displayable.
pub fn ids<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<Id> {
    items.into_iter().map(|x| Id(x.to_string())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut v = ids(["10", "2", "R10", "R2", "a", "1", "L3"]);
        v.sort();
        let got: Vec<&str> = v.iter().map(Id::as_str).collect();
        assert_eq!(got, ["1", "2", "10", "L3", "R2", "R10", "a"]);
    }

    #[test]
    fn leading_zeros_do_not_collapse_equality() {
        let a = Id::new("01");
        let b = Id::new("1");
        assert_ne!(a.cmp(&b), Ordering::Equal);
    }
}
