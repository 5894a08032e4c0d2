//! Finite abelian groups in invariant-factor form.
//!
//! A group is `Z_{d_1} x ... x Z_{d_r}` with `d_1 | d_2 | ... | d_r`. Elements
//! are coordinate tuples; the canonical order is mixed-radix lexicographic
//! with the first coordinate most significant, and the position of an
//! element in that order is its *rank*. Hot loops work on ranks.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, mod_inv, partitions};
use crate::error::{Error, Result};

/// Upper bound on the group order accepted by subgroup enumeration.
pub const SUBGROUP_ORDER_BOUND: u64 = 10_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u64>> for GroupElement {
    fn from(v: Vec<u64>) -> Self {
        GroupElement(v)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct AbelianGroup {
    factors: Vec<u64>,
    order: u64,
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.factors)
    }
}

impl TryFrom<Vec<u64>> for AbelianGroup {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        AbelianGroup::new(&v)
    }
}

impl From<AbelianGroup> for Vec<u64> {
    fn from(g: AbelianGroup) -> Self {
        g.factors
    }
}

impl AbelianGroup {
    /// Builds the group `Z_{f_1} x ... x Z_{f_n}`, normalized to invariant
    /// factors. Factors below 2 are rejected.
    pub fn new(factors: &[u64]) -> Result<Self> {
        Ok(DirectProduct::new(factors)?.group)
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidOrder(0)),
            1 => Ok(Self::trivial()),
            _ => Self::new(&[n]),
        }
    }

    pub fn trivial() -> Self {
        AbelianGroup { factors: Vec::new(), order: 1 }
    }

    fn from_chain(factors: Vec<u64>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[1] % w[0] == 0));
        let order = factors.iter().product();
        AbelianGroup { factors, order }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Number of elements as a `usize`, for indexing rank tables.
    pub fn len(&self) -> usize {
        self.order as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The exponent: the largest invariant factor (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.factors.len()])
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.0.len() == self.factors.len() && e.0.iter().zip(&self.factors).all(|(c, d)| c < d)
    }

    pub fn check(&self, e: &GroupElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::WrongGroup { element: e.0.clone(), group: self.factors.clone() })
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElement(
            a.0.iter().zip(&b.0).zip(&self.factors).map(|((x, y), d)| (x + y) % d).collect(),
        ))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement(a.0.iter().zip(&self.factors).map(|(x, d)| (d - x) % d).collect()))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b)?)
    }

    /// Position of `e` in the canonical order. `e` must belong to the group.
    pub fn rank_of(&self, e: &GroupElement) -> usize {
        e.0.iter().zip(&self.factors).fold(0u64, |acc, (c, d)| acc * d + c) as usize
    }

    pub fn element(&self, rank: usize) -> GroupElement {
        let mut x = rank as u64;
        let mut coords = vec![0; self.factors.len()];
        for (c, d) in coords.iter_mut().zip(&self.factors).rev() {
            *c = x % d;
            x /= d;
        }
        GroupElement(coords)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.len()).map(|r| self.element(r))
    }

    /// Rank of `a + b` for ranks `a`, `b`.
    pub fn add_rank(&self, a: usize, b: usize) -> usize {
        self.combine_ranks(a, b, |x, y, d| (x + y) % d)
    }

    /// Rank of `a - b` for ranks `a`, `b`.
    pub fn sub_rank(&self, a: usize, b: usize) -> usize {
        self.combine_ranks(a, b, |x, y, d| (x + d - y) % d)
    }

    pub fn neg_rank(&self, a: usize) -> usize {
        self.sub_rank(0, a)
    }

    fn combine_ranks(&self, a: usize, b: usize, op: impl Fn(u64, u64, u64) -> u64) -> usize {
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut stride = 1u64;
        for &d in self.factors.iter().rev() {
            out += op(a % d, b % d, d) * stride;
            stride *= d;
            a /= d;
            b /= d;
        }
        out as usize
    }

    /// Ranks of the elements of `set`, validating membership.
    pub fn ranks(&self, set: &[GroupElement]) -> Result<Vec<usize>> {
        set.iter()
            .map(|e| {
                self.check(e)?;
                Ok(self.rank_of(e))
            })
            .collect()
    }

    /// The external difference multiset `{a - b : a in A, b in B}`.
    pub fn delta(&self, a: &[GroupElement], b: &[GroupElement]) -> Result<Multiset> {
        let (ra, rb) = (self.ranks(a)?, self.ranks(b)?);
        let mut counts = vec![0u64; self.len()];
        for &x in &ra {
            for &y in &rb {
                counts[self.sub_rank(x, y)] += 1;
            }
        }
        Ok(Multiset::from_rank_counts(self, &counts))
    }

    /// Ranks of the subgroup generated by `gens` (given as ranks), ascending.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.len()];
        member[0] = true;
        let mut elems = vec![0usize];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.add_rank(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    /// Every proper subgroup, as ascending rank lists, sorted by (size, ranks).
    ///
    /// Cyclic subgroups are closed under pairwise joins until no new subgroup
    /// appears. Only intended for small groups.
    pub fn proper_subgroup_ranks(&self) -> Result<Vec<Vec<usize>>> {
        if self.order > SUBGROUP_ORDER_BOUND {
            return Err(Error::TooLarge { what: "group", size: self.order, bound: SUBGROUP_ORDER_BOUND });
        }
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut subgroups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for x in 0..self.len() {
            let h = self.generated_subgroup(&[x]);
            if seen.insert(h.clone()) {
                subgroups.push((h, vec![x]));
            }
        }
        let mut start = 0;
        while start < subgroups.len() {
            let end = subgroups.len();
            for i in start..end {
                for j in 0..i {
                    let mut gens = subgroups[i].1.clone();
                    gens.extend_from_slice(&subgroups[j].1);
                    let h = self.generated_subgroup(&gens);
                    if seen.insert(h.clone()) {
                        subgroups.push((h, gens));
                    }
                }
            }
            start = end;
        }
        let mut out: Vec<Vec<usize>> =
            subgroups.into_iter().map(|(h, _)| h).filter(|h| h.len() < self.len()).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    pub fn proper_subgroups(&self) -> Result<Vec<Vec<GroupElement>>> {
        Ok(self
            .proper_subgroup_ranks()?
            .into_iter()
            .map(|h| h.into_iter().map(|r| self.element(r)).collect())
            .collect())
    }
}

/// One representative per isomorphism class of abelian groups of order `v`.
///
/// For each prime `p^e || v` a partition of `e` is chosen; partitions run
/// from the cyclic `[e]` down to `[1, ..., 1]`, with the smallest prime
/// varying slowest.
pub fn abelian_groups_of_order(v: u64) -> Result<Vec<AbelianGroup>> {
    if v == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let primes = factorize(v);
    let mut choices: Vec<Vec<(u64, Vec<u32>)>> = vec![Vec::new()];
    for &(p, e) in &primes {
        let mut next = Vec::new();
        for prefix in &choices {
            for part in partitions(e) {
                let mut c = prefix.clone();
                c.push((p, part));
                next.push(c);
            }
        }
        choices = next;
    }
    Ok(choices
        .into_iter()
        .map(|choice| {
            let r = choice.iter().map(|(_, part)| part.len()).max().unwrap_or(0);
            let mut factors = vec![1u64; r];
            for (p, part) in &choice {
                // part is descending; largest exponent goes to the last factor
                for (i, &e) in part.iter().enumerate() {
                    factors[r - 1 - i] *= p.pow(e);
                }
            }
            AbelianGroup::from_chain(factors)
        })
        .collect())
}

/// Multiset of group elements with multiplicities. Serialized as a list of
/// `[element, count]` pairs in element order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<(GroupElement, u64)>", into = "Vec<(GroupElement, u64)>")]
pub struct Multiset {
    counts: BTreeMap<GroupElement, u64>,
}

impl From<Vec<(GroupElement, u64)>> for Multiset {
    fn from(pairs: Vec<(GroupElement, u64)>) -> Self {
        let mut m = Multiset::new();
        for (e, n) in pairs {
            m.insert(e, n);
        }
        m
    }
}

impl From<Multiset> for Vec<(GroupElement, u64)> {
    fn from(m: Multiset) -> Self {
        m.counts.into_iter().collect()
    }
}

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn from_rank_counts(g: &AbelianGroup, counts: &[u64]) -> Self {
        let counts = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(r, &c)| (g.element(r), c))
            .collect();
        Multiset { counts }
    }

    pub fn insert(&mut self, e: GroupElement, n: u64) {
        if n > 0 {
            *self.counts.entry(e).or_insert(0) += n;
        }
    }

    pub fn multiplicity(&self, e: &GroupElement) -> u64 {
        self.counts.get(e).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Distinct elements with nonzero multiplicity.
    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, u64)> {
        self.counts.iter().map(|(e, &c)| (e, c))
    }

    /// The elementwise negation image.
    pub fn negated(&self, g: &AbelianGroup) -> Result<Multiset> {
        let mut out = Multiset::new();
        for (e, c) in self.iter() {
            out.insert(g.neg(e)?, c);
        }
        Ok(out)
    }
}

/// A direct product `Z_{f_1} x ... x Z_{f_n}` together with an explicit
/// isomorphism onto its invariant-factor normal form.
///
/// Each cyclic factor splits into its primary components by CRT; the
/// components of each prime are sorted by exponent and stacked into the
/// invariant factors, which are reassembled by CRT.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    input: Vec<u64>,
    group: AbelianGroup,
    // (input coordinate, prime power, target factor)
    components: Vec<(usize, u64, usize)>,
    // CRT weight of each component inside its target factor
    weights: Vec<u64>,
}

impl DirectProduct {
    pub fn new(factors: &[u64]) -> Result<Self> {
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::InvalidFactors(factors.to_vec()));
        }
        let mut by_prime: BTreeMap<u64, Vec<(u32, usize, u64)>> = BTreeMap::new();
        for (i, &d) in factors.iter().enumerate() {
            for (p, e) in factorize(d) {
                by_prime.entry(p).or_default().push((e, i, p.pow(e)));
            }
        }
        let r = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut target = vec![1u64; r];
        let mut components = Vec::new();
        for comps in by_prime.values_mut() {
            // ascending exponent, ties by input position; aligned to the end
            comps.sort();
            let offset = r - comps.len();
            for (j, &(_, i, pe)) in comps.iter().enumerate() {
                target[offset + j] *= pe;
                components.push((i, pe, offset + j));
            }
        }
        let weights = components
            .iter()
            .map(|&(_, pe, t)| {
                let rest = target[t] / pe;
                rest * mod_inv(rest % pe, pe) % target[t]
            })
            .collect();
        Ok(DirectProduct {
            input: factors.to_vec(),
            group: AbelianGroup::from_chain(target),
            components,
            weights,
        })
    }

    /// The product of several groups, coordinates concatenated in order.
    pub fn of(parts: &[&AbelianGroup]) -> Result<Self> {
        let factors: Vec<u64> = parts.iter().flat_map(|g| g.factors().iter().copied()).collect();
        Self::new(&factors)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn input_factors(&self) -> &[u64] {
        &self.input
    }

    /// Maps coordinates of the product presentation into the normal form.
    pub fn embed(&self, coords: &[u64]) -> Result<GroupElement> {
        if coords.len() != self.input.len() || coords.iter().zip(&self.input).any(|(c, d)| c >= d) {
            return Err(Error::WrongGroup { element: coords.to_vec(), group: self.input.clone() });
        }
        let mut out = vec![0u64; self.group.factors.len()];
        for (&(i, pe, t), &w) in self.components.iter().zip(&self.weights) {
            let d = self.group.factors[t];
            let term = ((coords[i] % pe) as u128 * w as u128 % d as u128) as u64;
            out[t] = (out[t] + term) % d;
        }
        Ok(GroupElement(out))
    }

    /// Rank (in the normal form) of the element with product coordinates.
    pub fn embed_rank(&self, coords: &[u64]) -> Result<usize> {
        Ok(self.group.rank_of(&self.embed(coords)?))
    }
}

/// Sorted, deduplicated copy of a set of elements.
pub fn canonical_set(set: impl IntoIterator<Item = GroupElement>) -> Vec<GroupElement> {
    set.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}
