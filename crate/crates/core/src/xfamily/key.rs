use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{format_rat, parse_rat, Rat};

/// Deformation indices `m` paired with their rational parameters `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FamilyKey {
    m: Vec<usize>,
    t: Vec<Rat>,
}

impl FamilyKey {
    pub fn new(m: Vec<usize>, t: Vec<Rat>) -> Result<Self> {
        if m.len() != t.len() {
            return Err(Error::InvalidKey(format!(
                "{} indices but {} parameters",
                m.len(),
                t.len()
            )));
        }
        Ok(FamilyKey { m, t })
    }

    /// The undeformed classical family.
    pub fn classical() -> Self {
        Self::default()
    }

    /// Parses comma-separated lists such as `"1,2"` and `"2,-8/5"`. Empty
    /// strings give the empty key.
    pub fn parse(m: &str, t: &str) -> Result<Self> {
        let split = |s: &str| -> Vec<String> {
            if s.trim().is_empty() {
                Vec::new()
            } else {
                s.split(',').map(|x| x.trim().to_string()).collect()
            }
        };
        let m = split(m)
            .iter()
            .map(|x| {
                x.parse::<usize>()
                    .map_err(|_| Error::InvalidKey(format!("bad index {x:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let t = split(t)
            .iter()
            .map(|x| parse_rat(x))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, t)
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn t(&self) -> &[Rat] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// Parameter attached to index `i`, if `i` occurs in the key.
    pub fn param_of(&self, i: usize) -> Option<&Rat> {
        self.m.iter().position(|&x| x == i).map(|k| &self.t[k])
    }

    pub fn contains(&self, i: usize) -> bool {
        self.m.contains(&i)
    }

    /// Appends `(i, t_i)` without canonicalizing.
    pub fn extended(&self, i: usize, ti: Rat) -> FamilyKey {
        let mut out = self.clone();
        out.m.push(i);
        out.t.push(ti);
        out
    }

    /// Key with entry `k` removed.
    pub fn without(&self, k: usize) -> FamilyKey {
        let mut out = self.clone();
        out.m.remove(k);
        out.t.remove(k);
        out
    }

    /// First `j` entries.
    pub fn prefix(&self, j: usize) -> FamilyKey {
        FamilyKey {
            m: self.m[..j].to_vec(),
            t: self.t[..j].to_vec(),
        }
    }

    /// Merges repeated indices by adding their parameters, drops zero
    /// parameters and sorts by index.
    pub fn canonicalize(&self) -> FamilyKey {
        let mut merged: BTreeMap<usize, Rat> = BTreeMap::new();
        for (&i, ti) in self.m.iter().zip(&self.t) {
            *merged.entry(i).or_insert_with(Rat::zero) += ti;
        }
        let (m, t) = merged.into_iter().filter(|(_, ti)| !ti.is_zero()).unzip();
        FamilyKey { m, t }
    }

    pub fn is_canonical(&self) -> bool {
        self.m.windows(2).all(|w| w[0] < w[1]) && self.t.iter().all(|ti| !ti.is_zero())
    }

    /// `2 * sum(m) + n`: the degree of tau and the codimension of the family.
    pub fn codimension(&self) -> usize {
        2 * self.m.iter().sum::<usize>() + self.m.len()
    }
}

impl fmt::Display for FamilyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.m.iter().map(ToString::to_string).collect();
        let t: Vec<String> = self.t.iter().map(format_rat).collect();
        write!(f, "m=({}) t=({})", m.join(","), t.join(","))
    }
}

/// JSON shape `{"m": [...], "t": ["p/q", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyJson {
    pub m: Vec<usize>,
    pub t: Vec<String>,
}

impl From<&FamilyKey> for KeyJson {
    fn from(k: &FamilyKey) -> Self {
        KeyJson {
            m: k.m.clone(),
            t: k.t.iter().map(format_rat).collect(),
        }
    }
}

impl TryFrom<&KeyJson> for FamilyKey {
    type Error = Error;
    fn try_from(k: &KeyJson) -> Result<Self> {
        let t = k.t.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
        FamilyKey::new(k.m.clone(), t)
    }
}
