//! The central object: a group with `m` pairwise-disjoint subsets and
//! declared lambda values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{canonical_set, AbelianGroup, DirectProduct, GroupElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyFile", into = "FamilyFile")]
pub struct DiffFamily {
    group: AbelianGroup,
    sets: Vec<Vec<GroupElement>>,
    lambdas: Vec<u64>,
}

impl DiffFamily {
    /// Validates and canonicalizes (each set sorted ascending).
    pub fn new(group: AbelianGroup, sets: Vec<Vec<GroupElement>>, lambdas: Vec<u64>) -> Result<Self> {
        if sets.len() < 2 {
            return Err(Error::InvalidFamily(format!("need at least 2 sets, got {}", sets.len())));
        }
        if lambdas.len() != sets.len() {
            return Err(Error::InvalidFamily(format!(
                "{} sets but {} lambda values",
                sets.len(),
                lambdas.len()
            )));
        }
        if let Some(i) = lambdas.iter().position(|&l| l == 0) {
            return Err(Error::InvalidFamily(format!("lambda_{} must be positive", i + 1)));
        }
        let mut owner = vec![usize::MAX; group.len()];
        let mut canon = Vec::with_capacity(sets.len());
        for (i, set) in sets.into_iter().enumerate() {
            let n = set.len();
            let set = canonical_set(set);
            if set.is_empty() {
                return Err(Error::InvalidFamily(format!("set {} is empty", i + 1)));
            }
            if set.len() != n {
                return Err(Error::InvalidFamily(format!("set {} repeats an element", i + 1)));
            }
            for r in group.ranks(&set)? {
                if owner[r] != usize::MAX {
                    return Err(Error::NotDisjoint(owner[r] + 1, i + 1));
                }
                owner[r] = i;
            }
            canon.push(set);
        }
        Ok(DiffFamily { group, sets: canon, lambdas })
    }

    /// Builds a family from rank lists.
    pub fn from_ranks(group: AbelianGroup, sets: &[Vec<usize>], lambdas: Vec<u64>) -> Result<Self> {
        if let Some(&r) = sets.iter().flatten().find(|&&r| r >= group.len()) {
            return Err(Error::InvalidFamily(format!("rank {r} outside group of order {}", group.order())));
        }
        let sets = sets.iter().map(|s| s.iter().map(|&r| group.element(r)).collect()).collect();
        Self::new(group, sets, lambdas)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn sets(&self) -> &[Vec<GroupElement>] {
        &self.sets
    }

    pub fn lambdas(&self) -> &[u64] {
        &self.lambdas
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn v(&self) -> u64 {
        self.group.order()
    }

    pub fn ks(&self) -> Vec<u64> {
        self.sets.iter().map(|s| s.len() as u64).collect()
    }

    pub fn total_size(&self) -> u64 {
        self.ks().iter().sum()
    }

    pub fn set_ranks(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|s| s.iter().map(|e| self.group.rank_of(e)).collect()).collect()
    }

    /// True when the sets partition the whole group.
    pub fn partitions_group(&self) -> bool {
        self.total_size() == self.v()
    }

    /// True when the sets partition the group minus the identity.
    pub fn partitions_nonzero(&self) -> bool {
        let zero = self.group.zero();
        self.total_size() + 1 == self.v() && self.sets.iter().all(|s| !s.contains(&zero))
    }

    /// The counting relation `k_i (k - k_i) = lambda_i (v - 1)` for every i.
    pub fn counting_relation_holds(&self) -> bool {
        let k = self.total_size();
        self.ks().iter().zip(&self.lambdas).all(|(&ki, &li)| ki * (k - ki) == li * (self.v() - 1))
    }

    /// A copy with every set translated by `g`.
    pub fn translate(&self, g: &GroupElement) -> Result<Self> {
        let sets = self
            .sets
            .iter()
            .map(|s| s.iter().map(|x| self.group.add(x, g)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.group.clone(), sets, self.lambdas.clone())
    }
}

/// On-disk form: `{"group": [d...], "lambda": [l...], "sets": [[[coords]...]...]}`.
///
/// The group may be given as any direct product; coordinates are read in
/// that presentation and mapped to the invariant-factor form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub group: Vec<u64>,
    pub lambda: Vec<u64>,
    pub sets: Vec<Vec<Vec<u64>>>,
}

impl TryFrom<FamilyFile> for DiffFamily {
    type Error = Error;
    fn try_from(file: FamilyFile) -> Result<Self> {
        let product = DirectProduct::new(&file.group)?;
        let sets = file
            .sets
            .iter()
            .map(|s| s.iter().map(|c| product.embed(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        DiffFamily::new(product.group().clone(), sets, file.lambda)
    }
}

impl From<DiffFamily> for FamilyFile {
    fn from(f: DiffFamily) -> Self {
        FamilyFile {
            group: f.group.factors().to_vec(),
            lambda: f.lambdas,
            sets: f.sets.into_iter().map(|s| s.into_iter().map(|e| e.0).collect()).collect(),
        }
    }
}

impl DiffFamily {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
