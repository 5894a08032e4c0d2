//! Cyclic complete-bipartite decompositions of complete multigraphs induced
//! by two-set families with equal lambdas.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::DiffFamily;
use crate::group::AbelianGroup;
use crate::verify::verify_gsedf;

/// `(D_1 + g; D_2 + g)` with vertices given as element ranks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteBlock {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub shift: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub group: AbelianGroup,
    pub v: u64,
    pub k1: u64,
    pub k2: u64,
    /// Every pair of distinct vertices is covered this many times (`2 lambda`).
    pub multiplicity: u64,
    pub blocks: Vec<BipartiteBlock>,
}

/// One block per group element.
pub fn decompose(f: &DiffFamily) -> Result<Decomposition> {
    if f.m() != 2 {
        return Err(Error::NotApplicable(format!("decomposition needs 2 sets, got {}", f.m())));
    }
    let ls = f.lambdas();
    if ls[0] != ls[1] {
        return Err(Error::NotApplicable(format!("lambdas differ: {ls:?}")));
    }
    if !verify_gsedf(f).is_gsedf {
        return Err(Error::NotApplicable("family does not verify".into()));
    }
    let g = f.group();
    let ranks = f.set_ranks();
    let shifted = |set: &[usize], s: usize| {
        let mut out: Vec<usize> = set.iter().map(|&x| g.add_rank(x, s)).collect();
        out.sort_unstable();
        out
    };
    let blocks = (0..g.len())
        .into_par_iter()
        .map(|s| BipartiteBlock { left: shifted(&ranks[0], s), right: shifted(&ranks[1], s), shift: s })
        .collect();
    let ks = f.ks();
    Ok(Decomposition { group: g.clone(), v: f.v(), k1: ks[0], k2: ks[1], multiplicity: 2 * ls[0], blocks })
}

/// Exact pair coverage plus invariance of the block multiset under
/// translation by each generator of the group.
pub fn verify_decomposition(d: &Decomposition) -> bool {
    let v = d.group.len();
    if d.v != v as u64 || d.blocks.len() != v {
        return false;
    }
    let mut cover = vec![0u64; v * v];
    for b in &d.blocks {
        if b.left.len() as u64 != d.k1 || b.right.len() as u64 != d.k2 {
            return false;
        }
        if b.left.iter().chain(&b.right).any(|&x| x >= v) || b.left.iter().any(|x| b.right.contains(x)) {
            return false;
        }
        for &u in &b.left {
            for &w in &b.right {
                cover[u.min(w) * v + u.max(w)] += 1;
            }
        }
    }
    let pairs_ok = (0..v).all(|u| (u + 1..v).all(|w| cover[u * v + w] == d.multiplicity));
    if !pairs_ok {
        return false;
    }

    let key = |b: &BipartiteBlock, s: usize| {
        let shift = |xs: &[usize]| {
            let mut out: Vec<usize> = xs.iter().map(|&x| d.group.add_rank(x, s)).collect();
            out.sort_unstable();
            out
        };
        (shift(&b.left), shift(&b.right))
    };
    let tally = |s: usize| {
        let mut m: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
        for b in &d.blocks {
            *m.entry(key(b, s)).or_default() += 1;
        }
        m
    };
    let base = tally(0);
    generators(&d.group).into_iter().all(|s| tally(s) == base)
}

/// Ranks of the unit vectors of the invariant-factor coordinates.
fn generators(g: &AbelianGroup) -> Vec<usize> {
    let n = g.factors().len();
    (0..n)
        .map(|i| {
            let mut coords = vec![0; n];
            coords[i] = 1;
            g.rank_of(&crate::group::GroupElement(coords))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmitFormat {
    Edges,
    Dot,
}

impl FromStr for EmitFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" | "edge-list" | "edge_list" => Ok(EmitFormat::Edges),
            "dot" => Ok(EmitFormat::Dot),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Edge list: `g: u1 u2 ... | w1 w2 ...` per block. Dot: one cluster per block.
pub fn emit(d: &Decomposition, format: EmitFormat) -> String {
    let mut out = String::new();
    match format {
        EmitFormat::Edges => {
            for b in &d.blocks {
                writeln!(out, "{}: {} | {}", b.shift, join(&b.left), join(&b.right)).unwrap();
            }
        }
        EmitFormat::Dot => {
            writeln!(out, "graph decomposition {{").unwrap();
            for b in &d.blocks {
                writeln!(out, "  subgraph cluster_{} {{", b.shift).unwrap();
                writeln!(out, "    label=\"{}\";", b.shift).unwrap();
                let right = join(&b.right);
                for u in &b.left {
                    writeln!(out, "    {u} -- {{ {right} }};").unwrap();
                }
                writeln!(out, "  }}").unwrap();
            }
            writeln!(out, "}}").unwrap();
        }
    }
    out
}
