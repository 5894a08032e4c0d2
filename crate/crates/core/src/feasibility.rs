//! Parameter tuples, nonexistence filters, the literature catalog,
//! enumeration of counting-feasible tuples and the alpha-root probe.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{big_omega, factorize, is_prime, is_prime_power};
use crate::construct::{recipe_parameters, twin_factor, ConstructionRecipe, RecipeName};
use crate::error::{Error, Result};

/// Largest `v` accepted by [`enumerate_params`].
pub const ENUMERATION_V_BOUND: u64 = 10_000;

pub const DEFAULT_C_MAX: f64 = 1e6;
pub const DEFAULT_GRID: usize = 100_000;
pub const BISECTION_TOL: f64 = 1e-12;

/// Candidate parameters `(v, m; k_1 <= ... <= k_m; lambda_1, ..., lambda_m)`.
///
/// Lambdas may be left undeclared, in which case the counting relation
/// determines them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamTuple {
    pub v: u64,
    pub ks: Vec<u64>,
    pub lambdas: Option<Vec<u64>>,
}

impl ParamTuple {
    /// Sorts `ks` ascending, carrying declared lambdas along.
    pub fn new(v: u64, ks: Vec<u64>, lambdas: Option<Vec<u64>>) -> Result<Self> {
        if ks.len() < 2 {
            return Err(Error::InvalidArgument(format!("need m >= 2 block sizes, got {ks:?}")));
        }
        if ks.contains(&0) {
            return Err(Error::InvalidArgument(format!("block sizes must be positive, got {ks:?}")));
        }
        if v < 2 {
            return Err(Error::InvalidArgument(format!("v must be at least 2, got {v}")));
        }
        let (ks, lambdas) = match lambdas {
            None => {
                let mut ks = ks;
                ks.sort_unstable();
                (ks, None)
            }
            Some(ls) => {
                if ls.len() != ks.len() {
                    return Err(Error::InvalidArgument(format!("{} block sizes but {} lambdas", ks.len(), ls.len())));
                }
                if ls.contains(&0) {
                    return Err(Error::InvalidArgument(format!("lambdas must be positive, got {ls:?}")));
                }
                let mut pairs: Vec<(u64, u64)> = ks.into_iter().zip(ls).collect();
                pairs.sort_unstable();
                let (ks, ls) = pairs.into_iter().unzip();
                (ks, Some(ls))
            }
        };
        Ok(ParamTuple { v, ks, lambdas })
    }

    /// A tuple whose lambdas come from the counting relation.
    pub fn solved(v: u64, ks: Vec<u64>) -> Option<Self> {
        let t = ParamTuple::new(v, ks, None).ok()?;
        let ls = counting_solve(t.v, &t.ks)?;
        Some(ParamTuple { lambdas: Some(ls), ..t })
    }

    pub fn m(&self) -> usize {
        self.ks.len()
    }

    pub fn k_sum(&self) -> u64 {
        self.ks.iter().sum()
    }

    /// Declared lambdas, else the counting solution if it exists.
    pub fn resolved_lambdas(&self) -> Option<Vec<u64>> {
        self.lambdas.clone().or_else(|| counting_solve(self.v, &self.ks))
    }
}

impl fmt::Display for ParamTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({},{};{}", self.v, self.m(), join(&self.ks))?;
        match self.resolved_lambdas() {
            Some(ls) => write!(f, ";{})", join(&ls)),
            None => write!(f, ")"),
        }
    }
}

/// `lambda_i = k_i (k - k_i) / (v - 1)` when every value is a positive integer.
pub fn counting_solve(v: u64, ks: &[u64]) -> Option<Vec<u64>> {
    if v < 2 {
        return None;
    }
    let k: u64 = ks.iter().sum();
    ks.iter()
        .map(|&ki| {
            let num = ki.checked_mul(k.checked_sub(ki)?)?;
            (num % (v - 1) == 0 && num > 0).then_some(num / (v - 1))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityStatus {
    RuledOut,
    ExistsByConstruction,
    DeniedByCatalog,
    Open,
}

impl FeasibilityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FeasibilityStatus::RuledOut => "ruled_out",
            FeasibilityStatus::ExistsByConstruction => "exists_by_construction",
            FeasibilityStatus::DeniedByCatalog => "denied_by_catalog",
            FeasibilityStatus::Open => "open",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub status: FeasibilityStatus,
    pub reason: String,
}

impl FeasibilityVerdict {
    fn new(status: FeasibilityStatus, reason: impl Into<String>) -> Self {
        FeasibilityVerdict { status, reason: reason.into() }
    }

    pub fn open() -> Self {
        Self::new(FeasibilityStatus::Open, "")
    }
}

/// The filters of [`rule_out`], in the order they are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleOutStage {
    /// Disjoint subsets: `sum k_i <= v`.
    Capacity,
    /// `k_i (k - k_i) = lambda_i (v - 1)` with positive integer lambdas.
    Counting,
    /// Two sets force `lambda_1 = lambda_2`.
    EqualLambda,
    /// `m >= 3`: lambdas ordered like the block sizes.
    LambdaMonotone,
    /// `m >= 3`: `lambda_1 + ... + lambda_{m-1} > lambda_m`.
    LambdaStrictSum,
    /// `lambda_i <= k_i` when `k <= v`, strict when `k < v`.
    LambdaBelowK,
    /// All lambdas 1: only `m = 2, v = k_1 k_2 + 1` or `k_i = 1, v = m`.
    LambdaOne,
    /// Three sets with `k < v` never exist.
    Gsedf3,
    /// Three sets with `k = v` and a repeated size or a singleton must be
    /// `(1, (v-1)/2, (v-1)/2)` with `v = 3 (mod 4)`.
    Gsedf3Shape,
    /// `v = p + 1` with `p` prime and `k <= p`.
    PrimePlusOne,
    /// `v = p_1 p_2 + 1` with distinct primes, `m >= 3`, `k <= p_1 p_2`.
    TwoPrimesPlusOne,
}

impl RuleOutStage {
    pub const ORDER: [RuleOutStage; 11] = [
        RuleOutStage::Capacity,
        RuleOutStage::Counting,
        RuleOutStage::EqualLambda,
        RuleOutStage::LambdaMonotone,
        RuleOutStage::LambdaStrictSum,
        RuleOutStage::LambdaBelowK,
        RuleOutStage::LambdaOne,
        RuleOutStage::Gsedf3,
        RuleOutStage::Gsedf3Shape,
        RuleOutStage::PrimePlusOne,
        RuleOutStage::TwoPrimesPlusOne,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleOutStage::Capacity => "capacity",
            RuleOutStage::Counting => "counting",
            RuleOutStage::EqualLambda => "equal_lambda",
            RuleOutStage::LambdaMonotone => "lambda_monotone",
            RuleOutStage::LambdaStrictSum => "lambda_strict_sum",
            RuleOutStage::LambdaBelowK => "lambda_below_k",
            RuleOutStage::LambdaOne => "lambda_one",
            RuleOutStage::Gsedf3 => "gsedf3",
            RuleOutStage::Gsedf3Shape => "gsedf3_shape",
            RuleOutStage::PrimePlusOne => "prime_plus_one",
            RuleOutStage::TwoPrimesPlusOne => "two_primes_plus_one",
        }
    }

    /// True when this filter rules `t` out. `ls` are the lambdas the later
    /// stages reason about (declared, else solved).
    fn fires(self, t: &ParamTuple, ls: &[u64]) -> bool {
        let (v, m, k) = (t.v, t.m(), t.k_sum());
        let ks = &t.ks;
        match self {
            RuleOutStage::Capacity => k > v,
            RuleOutStage::Counting => match counting_solve(v, ks) {
                None => true,
                Some(solved) => t.lambdas.as_ref().is_some_and(|d| *d != solved),
            },
            RuleOutStage::EqualLambda => m == 2 && ls[0] != ls[1],
            RuleOutStage::LambdaMonotone => m >= 3 && ls.windows(2).any(|w| w[0] > w[1]),
            RuleOutStage::LambdaStrictSum => m >= 3 && ls[..m - 1].iter().sum::<u64>() <= ls[m - 1],
            RuleOutStage::LambdaBelowK => {
                ks.iter().zip(ls).any(|(&ki, &li)| if k < v { li >= ki } else { li > ki })
            }
            RuleOutStage::LambdaOne => {
                ls.iter().all(|&l| l == 1)
                    && !((m == 2 && v == ks[0] * ks[1] + 1) || (ks.iter().all(|&ki| ki == 1) && v == m as u64))
            }
            RuleOutStage::Gsedf3 => m == 3 && k < v,
            RuleOutStage::Gsedf3Shape => {
                let distinct = {
                    let mut d = ks.clone();
                    d.dedup();
                    d.len()
                };
                let constrained = m == 3 && k == v && (distinct == 2 || ks.contains(&1));
                let canonical = v % 4 == 3
                    && *ks == [1, (v - 1) / 2, (v - 1) / 2]
                    && ls == [1, (v + 1) / 4, (v + 1) / 4];
                constrained && !canonical
            }
            RuleOutStage::PrimePlusOne => is_prime(v - 1) && k < v,
            RuleOutStage::TwoPrimesPlusOne => {
                m >= 3 && k < v && matches!(factorize(v - 1).as_slice(), [(_, 1), (_, 1)])
            }
        }
    }
}

/// Applies the nonexistence filters in [`RuleOutStage::ORDER`] and reports
/// the first that fires, else `open`.
pub fn rule_out(t: &ParamTuple) -> FeasibilityVerdict {
    let ruled = |s: RuleOutStage| FeasibilityVerdict::new(FeasibilityStatus::RuledOut, s.as_str());
    for stage in &RuleOutStage::ORDER[..2] {
        if stage.fires(t, &[]) {
            return ruled(*stage);
        }
    }
    let ls = t.resolved_lambdas().expect("counting stage passed");
    RuleOutStage::ORDER[2..]
        .iter()
        .find(|s| s.fires(t, &ls))
        .map_or_else(FeasibilityVerdict::open, |&s| ruled(s))
}

// Catalog data: only statuses stated alongside the constructions above.

const M3_OPEN: [u64; 4] = [15, 35, 63, 99];
const M3_NO_DS: [u64; 7] = [39, 51, 55, 75, 87, 91, 95];
const M3_PRIME_POWER: [u64; 13] = [7, 11, 19, 23, 27, 31, 43, 47, 59, 67, 71, 79, 83];

/// The 25 three-set partitions with `sqrt(v) < k_1 < k_2 < k_3`, `v <= 200`,
/// all denied because a block is not a difference set. The v = 85 entry is
/// the one that actually sums to 85.
pub const M3_PARTITION_DENIED: [(u64, u64, u64, u64); 25] = [
    (31, 6, 10, 15),
    (43, 7, 15, 21),
    (67, 12, 22, 33),
    (71, 15, 21, 35),
    (79, 13, 27, 39),
    (85, 21, 28, 36),
    (91, 10, 36, 45),
    (103, 18, 34, 51),
    (106, 15, 21, 70),
    (111, 11, 45, 55),
    (115, 19, 39, 57),
    (127, 28, 36, 63),
    (131, 26, 40, 65),
    (133, 12, 33, 88),
    (139, 24, 46, 69),
    (151, 25, 51, 75),
    (155, 22, 56, 77),
    (166, 45, 55, 66),
    (171, 35, 51, 85),
    (175, 30, 58, 87),
    (181, 36, 45, 100),
    (183, 14, 78, 91),
    (187, 31, 63, 93),
    (191, 20, 76, 95),
    (199, 45, 55, 99),
];

/// Two-set parameters `(v, k_1, k_2, lambda)` with `v <= 21`, `lambda >= 2`,
/// grouped by how their status is settled.
pub const M2_EXIST: [(u64, u64, u64, u64, &str); 14] = [
    (21, 4, 10, 2, "two_n [7,3]"),
    (21, 8, 10, 4, "family_4m1 [2,3]"),
    (15, 4, 7, 2, "two_n [5,3]"),
    (16, 5, 9, 3, "g16"),
    (13, 4, 9, 3, "(13,4,1)-DS and its complement partition the group"),
    (15, 7, 8, 4, "twin_prime [3]"),
    (16, 6, 10, 4, "(16,6,2)-DS and its complement partition the group"),
    (21, 5, 16, 4, "(21,5,1)-DS and its complement partition the group"),
    (7, 3, 4, 2, "paley_odd [7]"),
    (9, 4, 4, 2, "paley_even [9]"),
    (11, 5, 6, 3, "paley_odd [11]"),
    (13, 6, 6, 3, "paley_even [13]"),
    (17, 8, 8, 4, "paley_even [17]"),
    (19, 9, 10, 5, "paley_odd [19]"),
];

pub const M2_DENIED_BY_SEARCH: [(u64, u64, u64, u64); 19] = [
    (10, 3, 6, 2),
    (11, 4, 5, 2),
    (13, 3, 8, 2),
    (13, 4, 6, 2),
    (15, 6, 7, 3),
    (16, 3, 10, 2),
    (16, 5, 6, 2),
    (17, 4, 8, 2),
    (17, 4, 12, 3),
    (17, 6, 8, 3),
    (19, 3, 12, 2),
    (19, 4, 9, 2),
    (19, 6, 6, 2),
    (19, 6, 9, 3),
    (19, 8, 9, 4),
    (21, 5, 8, 2),
    (21, 4, 15, 3),
    (21, 5, 12, 3),
    (21, 6, 10, 3),
];

pub const M2_DENIED_SEDF: (u64, u64, u64, u64) = (21, 10, 10, 5);

/// The two-set tuples with `v <= 21` and `lambda >= 2` whose status the
/// catalog records, as `(v, k_1, k_2, lambda)` sorted by `(v, k_1, k_2)`.
pub fn catalog_two_set_tuples() -> Vec<(u64, u64, u64, u64)> {
    let mut out: Vec<_> = M2_EXIST
        .iter()
        .map(|&(v, a, b, l, _)| (v, a, b, l))
        .chain(M2_DENIED_BY_SEARCH)
        .chain([M2_DENIED_SEDF])
        .collect();
    out.sort_unstable();
    out
}

/// Static lookup of literature statuses keyed by the exact tuple.
pub fn catalog_lookup(t: &ParamTuple) -> FeasibilityVerdict {
    use FeasibilityStatus::*;
    let Some(ls) = t.resolved_lambdas() else {
        return FeasibilityVerdict::open();
    };
    let (v, ks) = (t.v, t.ks.as_slice());
    match ks.len() {
        3 if v % 4 == 3 && ks == [1, (v - 1) / 2, (v - 1) / 2] && ls == [1, (v + 1) / 4, (v + 1) / 4] => {
            if M3_NO_DS.contains(&v) {
                return FeasibilityVerdict::new(DeniedByCatalog, format!("no ({v},{},{})-DS", (v - 1) / 2, (v - 3) / 4));
            }
            if M3_PRIME_POWER.contains(&v) {
                return FeasibilityVerdict::new(ExistsByConstruction, format!("m3_prime_power [{v}]"));
            }
            if M3_OPEN.contains(&v) {
                return FeasibilityVerdict::new(Open, "existence open");
            }
        }
        3 => {
            if let Some(&(v, a, b, c)) = M3_PARTITION_DENIED.iter().find(|&&(w, a, b, c)| (w, ks) == (v, &[a, b, c][..])) {
                let reason = match (v, a, b, c) {
                    (171, ..) => "no (171,35,7)-DS".to_string(),
                    (175, ..) => "no (175,87,43)-DS".to_string(),
                    _ => "a block is not a difference set of the required parameters".to_string(),
                };
                return FeasibilityVerdict::new(DeniedByCatalog, reason);
            }
        }
        2 if ls[0] == ls[1] => {
            let key = (v, ks[0], ks[1], ls[0]);
            if let Some(&(.., why)) = M2_EXIST.iter().find(|&&(w, a, b, l, _)| (w, a, b, l) == key) {
                return FeasibilityVerdict::new(ExistsByConstruction, why);
            }
            if M2_DENIED_BY_SEARCH.contains(&key) {
                return FeasibilityVerdict::new(DeniedByCatalog, "exhaustive computer search");
            }
            if key == M2_DENIED_SEDF {
                return FeasibilityVerdict::new(DeniedByCatalog, "no (21,2,10,5)-SEDF");
            }
        }
        _ => {}
    }
    FeasibilityVerdict::open()
}

/// Odd factor lists of `t` with exactly `n` entries: the first `n - 1`
/// primes individually, the rest multiplied into the last entry.
fn odd_factor_list(t: u64, n: u32) -> Option<Vec<u64>> {
    if t.is_multiple_of(2) || n == 0 || big_omega(t) < n {
        return None;
    }
    let mut primes: Vec<u64> = factorize(t).into_iter().flat_map(|(p, e)| std::iter::repeat_n(p, e as usize)).collect();
    let tail: u64 = primes.split_off(n as usize - 1).iter().product();
    primes.push(tail);
    Some(primes)
}

/// A construction recipe whose output has exactly these parameters, if any.
pub fn known_construction(t: &ParamTuple) -> Option<ConstructionRecipe> {
    let ls = t.resolved_lambdas()?;
    let v = t.v;
    let mut candidates: Vec<(RecipeName, Vec<u64>)> = Vec::new();
    if t.m() == 2 && ls == [1, 1] {
        candidates.push((RecipeName::C1, t.ks.clone()));
    }
    candidates.push((RecipeName::G16, vec![]));
    for name in [RecipeName::PaleyEven, RecipeName::PaleyOdd, RecipeName::M3PrimePower] {
        candidates.push((name, vec![v]));
    }
    if let Some(q) = twin_factor(v) {
        candidates.push((RecipeName::TwinPrime, vec![q]));
    }
    for n in 1..=big_omega(v) {
        if let Some(ps) = odd_factor_list(v, n) {
            candidates.push((RecipeName::TwoN, ps));
        }
    }
    for d in (3..=v).filter(|d| v.is_multiple_of(*d)) {
        let rest = v / d;
        let mut lists: Vec<Vec<u64>> = if rest == 1 { vec![vec![]] } else { vec![] };
        lists.extend((1..=big_omega(rest)).filter_map(|n| odd_factor_list(rest, n)));
        for ps in lists {
            if d % 4 == 1 && is_prime_power(d) {
                candidates.push((RecipeName::Q4Lift, [vec![d], ps.clone()].concat()));
            }
            if d % 4 == 3 {
                candidates.push((RecipeName::Family4m1, [vec![(d + 1) / 4], ps].concat()));
            }
        }
    }
    candidates.into_iter().find_map(|(name, args)| {
        let r = ConstructionRecipe::new(name, args).ok()?;
        let (rv, rks, rls) = recipe_parameters(&r)?;
        let rt = ParamTuple::new(rv, rks, Some(rls)).ok()?;
        (rt.v == v && rt.ks == t.ks && rt.lambdas.as_deref() == Some(&ls[..])).then_some(r)
    })
}

/// Combined status: filters, then known constructions, then the catalog.
pub fn classify(t: &ParamTuple) -> FeasibilityVerdict {
    let verdict = rule_out(t);
    if verdict.status == FeasibilityStatus::RuledOut {
        return verdict;
    }
    if let Some(r) = known_construction(t) {
        let args = r.args.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        return FeasibilityVerdict::new(FeasibilityStatus::ExistsByConstruction, format!("{} [{args}]", r.name));
    }
    catalog_lookup(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum K1Bound {
    /// `k_1 >= 1`.
    #[default]
    Any,
    /// `k_1 > 1`.
    AboveOne,
    /// `k_1 > sqrt(v)`.
    AboveSqrtV,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraints {
    pub lambda_min: u64,
    pub sum_k_eq_v: bool,
    pub k1_bound: K1Bound,
    pub strictly_increasing: bool,
}

impl Default for Constraints {
    fn default() -> Self {
        Constraints { lambda_min: 1, sum_k_eq_v: false, k1_bound: K1Bound::Any, strictly_increasing: false }
    }
}

impl Constraints {
    /// Three-set partitions `k_1 + k_2 + k_3 = v` with `sqrt(v) < k_1 < k_2 < k_3`.
    pub fn m3_partitions() -> Self {
        Constraints { lambda_min: 1, sum_k_eq_v: true, k1_bound: K1Bound::AboveSqrtV, strictly_increasing: true }
    }

    fn k1_ok(&self, v: u64, k1: u64) -> bool {
        match self.k1_bound {
            K1Bound::Any => true,
            K1Bound::AboveOne => k1 > 1,
            K1Bound::AboveSqrtV => k1 * k1 > v,
        }
    }
}

/// All counting-feasible tuples with `2 <= v <= v_max` and `m` sets that
/// meet `c`, sorted by `(v, ks)`.
pub fn enumerate_params(v_max: u64, m: usize, c: &Constraints) -> Result<Vec<ParamTuple>> {
    if v_max > ENUMERATION_V_BOUND {
        return Err(Error::TooLarge { what: "v_max", size: v_max, bound: ENUMERATION_V_BOUND });
    }
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m must be at least 2, got {m}")));
    }
    let per_v: Vec<Vec<ParamTuple>> = (2..=v_max.max(1))
        .into_par_iter()
        .map(|v| {
            let mut out = Vec::new();
            let mut ks = Vec::with_capacity(m);
            enumerate_ks(v, m, c, &mut ks, &mut out);
            out
        })
        .collect();
    Ok(per_v.into_iter().flatten().collect())
}

fn enumerate_ks(v: u64, m: usize, c: &Constraints, ks: &mut Vec<u64>, out: &mut Vec<ParamTuple>) {
    let used: u64 = ks.iter().sum();
    let slots_left = (m - ks.len()) as u64;
    if slots_left == 0 {
        if c.sum_k_eq_v && used != v {
            return;
        }
        if let Some(t) = ParamTuple::solved(v, ks.clone()) {
            if t.lambdas.as_ref().is_some_and(|ls| ls.iter().all(|&l| l >= c.lambda_min)) {
                out.push(t);
            }
        }
        return;
    }
    let lo = match ks.last() {
        None => 1,
        Some(&prev) if c.strictly_increasing => prev + 1,
        Some(&prev) => prev,
    };
    let mut k = lo;
    // remaining slots each take at least k (k + 1, ... when strict)
    let min_rest = |k: u64| {
        if c.strictly_increasing {
            (0..slots_left).map(|i| k + i).sum::<u64>()
        } else {
            k * slots_left
        }
    };
    while used + min_rest(k) <= v {
        if !(ks.is_empty() && !c.k1_ok(v, k)) {
            ks.push(k);
            enumerate_ks(v, m, c, ks, out);
            ks.pop();
        }
        k += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternScan {
    /// `+1` selects the `alpha^+` root for that index, `-1` the `alpha^-` root.
    pub signs: Vec<i8>,
    /// Bisection-refined brackets `[lo, hi]` around each sign change.
    pub roots: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub lambdas: Vec<u64>,
    pub c_min: f64,
    pub c_max: f64,
    pub grid: usize,
    /// Two-set scans say nothing about nonexistence.
    pub informational: bool,
    pub patterns: Vec<PatternScan>,
}

impl AlphaReport {
    pub fn any_root(&self) -> bool {
        self.patterns.iter().any(|p| !p.roots.is_empty())
    }
}

fn alpha_sum(lambdas: &[u64], signs: &[i8], c: f64) -> f64 {
    lambdas
        .iter()
        .zip(signs)
        .map(|(&l, &s)| 0.5 * (1.0 + s as f64 * (1.0 + c * l as f64).sqrt()))
        .sum::<f64>()
        - 1.0
}

/// Scans `f(c) = sum_j (1 + e_j sqrt(1 + c lambda_j)) / 2 - 1` for sign
/// changes over `c` in `[4/k^2, c_max]` on a log-spaced grid, for every
/// mixed sign pattern `e`. No sign change anywhere is numeric evidence, not
/// a proof, that no family with these lambdas and `sum k_i < v` exists.
pub fn alpha_scan(lambdas: &[u64], k: u64, c_max: f64, grid: usize) -> Result<AlphaReport> {
    let m = lambdas.len();
    if !(2..=16).contains(&m) {
        return Err(Error::InvalidArgument(format!("alpha_scan needs 2..=16 lambdas, got {m}")));
    }
    if k == 0 || grid < 2 {
        return Err(Error::InvalidArgument(format!("need k >= 1 and grid >= 2, got k = {k}, grid = {grid}")));
    }
    let c_min = 4.0 / (k as f64 * k as f64);
    if !(c_max > c_min) {
        return Err(Error::EmptyRange { c_min, c_max });
    }
    let ratio = (c_max / c_min).ln();
    let cs: Vec<f64> = (0..grid).map(|i| c_min * (ratio * i as f64 / (grid - 1) as f64).exp()).collect();
    let roots_of: Vec<Vec<f64>> =
        lambdas.iter().map(|&l| cs.iter().map(|&c| (1.0 + c * l as f64).sqrt()).collect()).collect();

    let patterns = (1..(1u32 << m) - 1)
        .into_par_iter()
        .map(|mask| {
            let signs: Vec<i8> = (0..m).map(|j| if mask >> j & 1 == 1 { 1 } else { -1 }).collect();
            let values: Vec<f64> = (0..grid)
                .map(|i| {
                    (0..m).map(|j| 0.5 * (1.0 + signs[j] as f64 * roots_of[j][i])).sum::<f64>() - 1.0
                })
                .collect();
            let mut roots = Vec::new();
            for i in 0..grid {
                if values[i] == 0.0 {
                    roots.push((cs[i], cs[i]));
                } else if i + 1 < grid && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0) {
                    roots.push(bisect(lambdas, &signs, cs[i], cs[i + 1], values[i] < 0.0));
                }
            }
            PatternScan { signs, roots }
        })
        .collect();
    Ok(AlphaReport { lambdas: lambdas.to_vec(), c_min, c_max, grid, informational: m == 2, patterns })
}

fn bisect(lambdas: &[u64], signs: &[i8], mut lo: f64, mut hi: f64, lo_negative: bool) -> (f64, f64) {
    for _ in 0..200 {
        if hi - lo <= BISECTION_TOL * lo.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = alpha_sum(lambdas, signs, mid);
        if fm == 0.0 {
            return (mid, mid);
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(v: u64, ks: &[u64], ls: Option<&[u64]>) -> ParamTuple {
        ParamTuple::new(v, ks.to_vec(), ls.map(<[u64]>::to_vec)).unwrap()
    }

    #[test]
    fn counting_examples() {
        assert_eq!(counting_solve(19, &[6, 6, 6]), Some(vec![4, 4, 4]));
        assert_eq!(counting_solve(8, &[2, 3]), None);
        assert_eq!(counting_solve(16, &[5, 9]), Some(vec![3, 3]));
        assert_eq!(counting_solve(1, &[1, 1]), None);
    }

    #[test]
    fn param_tuple_sorts_and_validates() {
        let t = tuple(16, &[9, 5], Some(&[3, 3]));
        assert_eq!(t.ks, vec![5, 9]);
        assert!(ParamTuple::new(16, vec![5], None).is_err());
        assert!(ParamTuple::new(16, vec![5, 0], None).is_err());
        assert!(ParamTuple::new(16, vec![5, 9], Some(vec![3])).is_err());
        assert!(ParamTuple::new(16, vec![5, 9], Some(vec![3, 0])).is_err());
        assert_eq!(t.to_string(), "(16,2;5,9;3,3)");
    }

    #[test]
    fn rule_out_examples() {
        // counting already fails for (20; 2, 3, 4): 2 * 7 / 19 is not integral
        let v = rule_out(&tuple(20, &[2, 3, 4], None));
        assert_eq!(v.status, FeasibilityStatus::RuledOut);
        assert_eq!(v.reason, "counting");

        let v = rule_out(&tuple(19, &[6, 6, 6], Some(&[4, 4, 4])));
        assert_eq!((v.status, v.reason.as_str()), (FeasibilityStatus::RuledOut, "gsedf3"));

        assert_eq!(rule_out(&tuple(16, &[5, 9], Some(&[3, 3]))).status, FeasibilityStatus::Open);
    }

    #[test]
    fn rule_out_individual_stages() {
        let reason = |t: ParamTuple| rule_out(&t).reason;
        assert_eq!(reason(tuple(5, &[3, 4], None)), "capacity");
        assert_eq!(reason(tuple(16, &[5, 9], Some(&[3, 4]))), "counting");
        // later stages are exercised through `fires` with explicit lambdas
        let t = tuple(13, &[1, 4, 8], None);
        assert!(RuleOutStage::Gsedf3Shape.fires(&t, &counting_solve(13, &t.ks).unwrap_or(vec![1, 1, 1])));
        let t = tuple(7, &[1, 3, 3], None);
        assert_eq!(rule_out(&t).status, FeasibilityStatus::Open);
        let t = tuple(3, &[1, 1, 1], None);
        assert_eq!(rule_out(&t).status, FeasibilityStatus::Open);
        assert!(RuleOutStage::LambdaOne.fires(&tuple(5, &[2, 2, 1], None), &[1, 1, 1]));
        assert!(RuleOutStage::PrimePlusOne.fires(&tuple(8, &[2, 3], None), &[1, 1]));
        assert!(RuleOutStage::TwoPrimesPlusOne.fires(&tuple(16, &[2, 3, 4], None), &[1, 1, 1]));
        assert!(!RuleOutStage::TwoPrimesPlusOne.fires(&tuple(16, &[2, 3], None), &[1, 1]));
        assert!(RuleOutStage::LambdaStrictSum.fires(&tuple(40, &[1, 2, 3], None), &[1, 1, 2]));
        assert!(RuleOutStage::LambdaMonotone.fires(&tuple(40, &[1, 2, 3], None), &[2, 1, 3]));
        assert!(RuleOutStage::LambdaBelowK.fires(&tuple(40, &[2, 3], None), &[2, 2]));
        assert!(RuleOutStage::EqualLambda.fires(&tuple(40, &[2, 3], None), &[1, 2]));
    }

    #[test]
    fn catalog_examples() {
        let v = catalog_lookup(&tuple(39, &[1, 19, 19], None));
        assert_eq!(v.status, FeasibilityStatus::DeniedByCatalog);
        assert_eq!(v.reason, "no (39,19,9)-DS");
        assert_eq!(catalog_lookup(&tuple(15, &[1, 7, 7], None)).status, FeasibilityStatus::Open);
        let v = catalog_lookup(&tuple(21, &[10, 10], Some(&[5, 5])));
        assert_eq!(v.status, FeasibilityStatus::DeniedByCatalog);
        assert_eq!(catalog_lookup(&tuple(10, &[3, 6], None)).status, FeasibilityStatus::DeniedByCatalog);
        assert_eq!(
            catalog_lookup(&tuple(171, &[35, 51, 85], None)).reason,
            "no (171,35,7)-DS"
        );
        assert_eq!(catalog_lookup(&tuple(11, &[1, 5, 5], None)).status, FeasibilityStatus::ExistsByConstruction);
        assert_eq!(catalog_lookup(&tuple(100, &[3, 6], None)).status, FeasibilityStatus::Open);
    }

    #[test]
    fn catalog_tuples_are_counting_feasible() {
        for (v, a, b, l) in catalog_two_set_tuples() {
            assert_eq!(counting_solve(v, &[a, b]), Some(vec![l, l]), "({v},{a},{b},{l})");
        }
        for (v, a, b, c) in M3_PARTITION_DENIED {
            assert_eq!(a + b + c, v);
            assert!(counting_solve(v, &[a, b, c]).is_some(), "({v},{a},{b},{c})");
        }
        assert_eq!(catalog_two_set_tuples().len(), 34);
    }

    #[test]
    fn known_constructions_recognized() {
        let name = |v, ks: &[u64]| known_construction(&tuple(v, ks, None)).map(|r| r.name);
        assert_eq!(name(16, &[5, 9]), Some(RecipeName::G16));
        assert_eq!(name(7, &[3, 4]), Some(RecipeName::PaleyOdd));
        assert_eq!(name(13, &[3, 4]), Some(RecipeName::C1));
        assert_eq!(name(21, &[4, 10]), Some(RecipeName::TwoN));
        assert_eq!(name(21, &[8, 10]), Some(RecipeName::Family4m1));
        assert_eq!(name(39, &[12, 19]), Some(RecipeName::Q4Lift));
        assert_eq!(name(15, &[7, 8]), Some(RecipeName::TwinPrime));
        assert_eq!(name(19, &[1, 9, 9]), Some(RecipeName::M3PrimePower));
        assert_eq!(name(10, &[3, 6]), None);
        let v = classify(&tuple(16, &[5, 9], None));
        assert_eq!((v.status, v.reason.as_str()), (FeasibilityStatus::ExistsByConstruction, "g16 []"));
    }

    #[test]
    fn enumerate_small_m2() {
        let c = Constraints { lambda_min: 2, ..Constraints::default() };
        let got = enumerate_params(7, 2, &c).unwrap();
        assert_eq!(got, vec![tuple(7, &[3, 4], Some(&[2, 2]))]);

        // brute-force oracle over all k1 <= k2 with k1 + k2 <= v
        let mut oracle = Vec::new();
        for v in 2..=30u64 {
            for k1 in 1..v {
                for k2 in k1..=v - k1 {
                    if (k1 * k2) % (v - 1) == 0 && k1 * k2 / (v - 1) >= 2 {
                        oracle.push((v, k1, k2));
                    }
                }
            }
        }
        let got: Vec<_> = enumerate_params(30, 2, &c).unwrap().iter().map(|t| (t.v, t.ks[0], t.ks[1])).collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn enumerate_rejects_large_bound() {
        assert!(enumerate_params(ENUMERATION_V_BOUND + 1, 2, &Constraints::default()).is_err());
    }

    #[test]
    fn alpha_examples() {
        let r = alpha_scan(&[1, 1, 1], 6, 1e3, 10_000).unwrap();
        assert!(!r.any_root());
        assert_eq!(r.patterns.len(), 6);
        assert!(!r.informational);

        let r = alpha_scan(&[1, 1, 1, 1], 8, 1e3, 1_000).unwrap();
        assert!(!r.any_root());
        for p in r.patterns.iter().filter(|p| p.signs.iter().filter(|&&s| s == 1).count() == 2) {
            for c in [0.1, 1.0, 10.0, 500.0] {
                assert!((alpha_sum(&[1, 1, 1, 1], &p.signs, c) - 1.0).abs() < 1e-12);
            }
        }

        let r = alpha_scan(&[1, 2], 4, 1e3, 100).unwrap();
        assert!(r.informational);
        assert!(matches!(alpha_scan(&[1, 1, 1], 2, 0.5, 100), Err(Error::EmptyRange { .. })));
    }

    #[test]
    fn alpha_finds_planted_root() {
        // four sets, pattern (+, +, -, -): 1 + s1 + s2 - s3 - s4 = 0 has a root
        // when lambda_3 + lambda_4 is large compared with lambda_1 + lambda_2
        let ls = [1, 1, 30, 30];
        let r = alpha_scan(&ls, 100, 1e3, 5_000).unwrap();
        let p = r.patterns.iter().find(|p| p.signs == [1, 1, -1, -1]).unwrap();
        assert_eq!(p.roots.len(), 1);
        let (lo, hi) = p.roots[0];
        let f = |c: f64| alpha_sum(&ls, &[1, 1, -1, -1], c);
        assert!(f(lo) * f(hi) <= 0.0);
        assert!(hi - lo <= 1e-9 * lo.max(1.0));
    }
}
