//! Exact and spectral verification of GSEDF, difference-set and
//! partial-difference-set properties.
//!
//! The exact integer checks are authoritative. The spectral check evaluates
//! every character of the group on the sets and is meant as an independent
//! second route.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::DiffFamily;
use crate::group::{AbelianGroup, GroupElement, Multiset, SUBGROUP_ORDER_BOUND};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Zero-based set index.
    pub index: usize,
    pub element: GroupElement,
    pub observed: u64,
    pub expected: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub is_gsedf: bool,
    /// For each i, the multiset union of `Delta(D_i, D_j)` over `j != i`.
    pub per_index_counts: Vec<Multiset>,
    pub first_violation: Option<Violation>,
}

/// Difference counts by rank: `out[i][r]` is how often the element of rank
/// `r` occurs in the union of `Delta(D_i, D_j)` over `j != i`.
pub(crate) fn external_counts(g: &AbelianGroup, sets: &[Vec<usize>]) -> Vec<Vec<u64>> {
    sets.iter()
        .enumerate()
        .map(|(i, di)| {
            let mut counts = vec![0u64; g.len()];
            for (j, dj) in sets.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &x in di {
                    for &y in dj {
                        counts[g.sub_rank(x, y)] += 1;
                    }
                }
            }
            counts
        })
        .collect()
}

/// Checks the defining multiset equation for every index. Violations are
/// searched in (index, element rank) order and the first one is reported.
pub fn verify_gsedf(f: &DiffFamily) -> VerifyReport {
    let g = f.group();
    let counts = external_counts(g, &f.set_ranks());
    let mut first_violation = None;
    'outer: for (i, c) in counts.iter().enumerate() {
        for (r, &observed) in c.iter().enumerate() {
            let expected = if r == 0 { 0 } else { f.lambdas()[i] };
            if observed != expected {
                first_violation = Some(Violation { index: i, element: g.element(r), observed, expected });
                break 'outer;
            }
        }
    }
    VerifyReport {
        is_gsedf: first_violation.is_none(),
        per_index_counts: counts.iter().map(|c| Multiset::from_rank_counts(g, c)).collect(),
        first_violation,
    }
}

fn internal_counts(g: &AbelianGroup, set: &[GroupElement]) -> Result<(Vec<usize>, Vec<u64>)> {
    let ranks = g.ranks(set)?;
    let mut counts = vec![0u64; g.len()];
    for &x in &ranks {
        for &y in &ranks {
            counts[g.sub_rank(x, y)] += 1;
        }
    }
    Ok((ranks, counts))
}

/// `Delta(D, D) = k{0} + lambda(G \ {0})`.
pub fn verify_ds(g: &AbelianGroup, set: &[GroupElement], k: u64, lambda: u64) -> Result<bool> {
    if set.len() as u64 != k {
        return Ok(false);
    }
    let (_, counts) = internal_counts(g, set)?;
    Ok(counts[0] == k && counts[1..].iter().all(|&c| c == lambda))
}

/// `Delta(D, D) = k{0} + lambda(D \ {0}) + mu(G \ (D u {0}))`.
pub fn verify_pds(g: &AbelianGroup, set: &[GroupElement], k: u64, lambda: u64, mu: u64) -> Result<bool> {
    if set.len() as u64 != k {
        return Ok(false);
    }
    let (ranks, counts) = internal_counts(g, set)?;
    let mut in_set = vec![false; g.len()];
    for r in ranks {
        in_set[r] = true;
    }
    Ok(counts[0] == k
        && (1..g.len()).all(|r| counts[r] == if in_set[r] { lambda } else { mu }))
}

/// Cross-checks the exact verifier against the per-set characterization:
/// a partition of G is a GSEDF iff each `D_i` is a `(v, k_i, k_i - lambda_i)`
/// difference set; a partition of `G \ {0}` is one iff each `D_i` is a
/// `(v, k_i, k_i - lambda_i - 1, k_i - lambda_i)` partial difference set.
///
/// Returns whether both sides agree.
pub fn partition_equivalence_check(f: &DiffFamily) -> Result<bool> {
    let g = f.group();
    let per_set: Vec<bool> = if f.partitions_group() {
        f.sets()
            .iter()
            .zip(f.lambdas())
            .map(|(s, &l)| {
                let k = s.len() as u64;
                Ok(k >= l && verify_ds(g, s, k, k - l)?)
            })
            .collect::<Result<_>>()?
    } else if f.partitions_nonzero() {
        f.sets()
            .iter()
            .zip(f.lambdas())
            .map(|(s, &l)| {
                let k = s.len() as u64;
                Ok(k > l && verify_pds(g, s, k, k - l - 1, k - l)?)
            })
            .collect::<Result<_>>()?
    } else {
        return Err(Error::NotApplicable("sets partition neither G nor G \\ {0}".into()));
    };
    Ok(verify_gsedf(f).is_gsedf == per_set.iter().all(|&b| b))
}

/// Default spectral tolerance, `1e-6 * v`.
pub fn default_spectral_tol(f: &DiffFamily) -> f64 {
    1e-6 * f.v() as f64
}

/// Character table helper: `chi_a(x) = exp(2 pi i sum_t a_t x_t / d_t)`,
/// evaluated through integer phases modulo the group exponent.
struct Characters<'a> {
    g: &'a AbelianGroup,
    roots: Vec<Complex64>,
    scale: Vec<u64>,
}

impl<'a> Characters<'a> {
    fn new(g: &'a AbelianGroup) -> Self {
        let l = g.exponent();
        let roots = (0..l).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / l as f64)).collect();
        let scale = g.factors().iter().map(|d| l / d).collect();
        Characters { g, roots, scale }
    }

    fn eval(&self, a: &GroupElement, set: &[GroupElement]) -> Complex64 {
        let l = self.g.exponent();
        set.iter()
            .map(|x| {
                let phase = a.0.iter().zip(&x.0).zip(&self.scale).fold(0u64, |acc, ((ai, xi), s)| {
                    (acc + ai * xi % l * s) % l
                });
                self.roots[phase as usize]
            })
            .sum()
    }
}

/// Largest deviation `|chi(D_j) conj(chi(D)) - |chi(D_j)|^2 + lambda_j|`
/// over non-principal characters and all j. `None` when the principal
/// character identity `sum_{j != i} k_i k_j = lambda_i (v - 1)` fails.
pub fn spectral_deviation(f: &DiffFamily) -> Option<f64> {
    if !f.counting_relation_holds() {
        return None;
    }
    let g = f.group();
    let chars = Characters::new(g);
    let union: Vec<GroupElement> = f.sets().iter().flatten().cloned().collect();
    let dev = (1..g.len())
        .into_par_iter()
        .map(|r| {
            let a = g.element(r);
            let whole = chars.eval(&a, &union);
            f.sets()
                .iter()
                .zip(f.lambdas())
                .map(|(s, &l)| {
                    let cj = chars.eval(&a, s);
                    (cj * whole.conj() - cj.norm_sqr() + l as f64).norm()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Some(dev)
}

/// Accepts iff every character equation holds within `tol`. Advisory only;
/// [`verify_gsedf`] is authoritative.
pub fn spectral_verify(f: &DiffFamily, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    Ok(spectral_deviation(f).is_some_and(|d| d <= tol))
}

/// False iff some `D_i` lies inside a coset of a proper subgroup, i.e. the
/// differences `D_i - d` for a fixed `d` in `D_i` generate a proper subgroup.
pub fn coset_check(f: &DiffFamily) -> Result<bool> {
    if f.partitions_group() {
        return Err(Error::NotApplicable("the sets cover the whole group".into()));
    }
    let g = f.group();
    if g.order() > SUBGROUP_ORDER_BOUND {
        return Err(Error::TooLarge { what: "group", size: g.order(), bound: SUBGROUP_ORDER_BOUND });
    }
    Ok(f.set_ranks().iter().all(|s| {
        let base = s[0];
        let gens: Vec<usize> = s[1..].iter().map(|&x| g.sub_rank(x, base)).collect();
        g.generated_subgroup(&gens).len() == g.len()
    }))
}
