use serde::{Deserialize, Serialize};

use crate::polyring::{format_rat, Poly, Rat};

use super::{KeyJson, XFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyEntry {
    pub i: usize,
    pub degree: Option<usize>,
    pub coeffs: Poly,
}

/// On-disk family record. `norms` runs parallel to `polys` and is empty when
/// the parameters are inadmissible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub m: Vec<usize>,
    pub t: Vec<String>,
    pub tau: Poly,
    pub polys: Vec<PolyEntry>,
    pub norms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible: Option<bool>,
    /// Key as supplied, when canonicalization changed it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub original_key: Option<KeyJson>,
}

impl FamilyJson {
    pub fn from_family(
        family: &XFamily,
        indices: impl IntoIterator<Item = usize>,
        norms: Option<&[Rat]>,
        admissible: Option<bool>,
    ) -> Self {
        let key = KeyJson::from(family.key());
        let polys = indices
            .into_iter()
            .map(|i| {
                let coeffs = family.poly(i);
                PolyEntry {
                    i,
                    degree: coeffs.degree(),
                    coeffs,
                }
            })
            .collect();
        FamilyJson {
            m: key.m,
            t: key.t,
            tau: family.tau().clone(),
            polys,
            norms: norms.unwrap_or_default().iter().map(format_rat).collect(),
            admissible,
            original_key: family
                .was_canonicalized()
                .then(|| KeyJson::from(family.original_key())),
        }
    }
}
