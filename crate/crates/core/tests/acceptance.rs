//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use gsedf::arith::is_prime_power;
use gsedf::construct::{c1, family_4m1, g16, m3_prime_power, paley_even, paley_odd, q4_lift, twin_prime, two_n};
use gsedf::feasibility::{catalog_two_set_tuples, DEFAULT_C_MAX, DEFAULT_GRID};
use gsedf::search::aggregate_status;
use gsedf::verify::default_spectral_tol;
use gsedf::{
    alpha_scan, coset_check, decompose, enumerate_params, partition_equivalence_check, rule_out, search_all_groups,
    spectral_verify, verify_decomposition, verify_gsedf, Constraints, DiffFamily, FeasibilityStatus, ParamTuple,
    SearchConfig, SearchStatus,
};

const MAX_GRID_V: u64 = 315;
const SEARCH_BUDGET: u64 = 1_000_000_000;
const DENIAL_TIME_LIMIT: Duration = Duration::from_secs(60);
const FIND_TIME_LIMIT: Duration = Duration::from_secs(1);
const ALPHA_TIME_LIMIT: Duration = Duration::from_secs(60);
const ALPHA_K: u64 = 1000;
const ALPHA_LAMBDA_MAX: u64 = 20;
const SPECTRAL_V_MAX: u64 = 100;
const SPECTRAL_MIN_INSTANCES: usize = 100;
const COSET_V_MAX: u64 = 50;
const SOUNDNESS_V_MAX: u64 = 50;
const RNG_SEED: u64 = 20_240_601;

/// The three-set list as printed, including its v = 85 entry.
const PRINTED_PARTITIONS: [(u64, u64, u64, u64); 25] = [
    (31, 6, 10, 15),
    (43, 7, 15, 21),
    (67, 12, 22, 33),
    (71, 15, 21, 35),
    (79, 13, 27, 39),
    (85, 21, 28, 26),
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

/// Two-set tuples `(v, k_1, k_2, lambda)` for `v <= 21`, `lambda >= 2`, as printed.
const PRINTED_TWO_SET: [(u64, u64, u64, u64); 34] = [
    (21, 4, 10, 2),
    (21, 8, 10, 4),
    (15, 4, 7, 2),
    (16, 5, 9, 3),
    (13, 4, 9, 3),
    (15, 7, 8, 4),
    (16, 6, 10, 4),
    (21, 5, 16, 4),
    (7, 3, 4, 2),
    (9, 4, 4, 2),
    (11, 5, 6, 3),
    (13, 6, 6, 3),
    (17, 8, 8, 4),
    (19, 9, 10, 5),
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
    (21, 10, 10, 5),
];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Ordered lists of odd factors `>= 3` with product at most `bound`,
/// including the empty list.
fn odd_factor_lists(bound: u64, max_len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![(vec![], 1u64)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (list, prod) in &frontier {
            let mut p = 3;
            while prod * p <= bound {
                let mut l: Vec<u64> = list.clone();
                l.push(p);
                out.push(l.clone());
                next.push((l, prod * p));
                p += 2;
            }
        }
        frontier = next;
    }
    out
}

/// Every family of the construction grid, labelled.
fn construction_grid() -> Vec<(String, DiffFamily)> {
    let mut out = Vec::new();
    for a in 1..=12 {
        for b in 1..=12 {
            out.push((format!("c1({a},{b})"), c1(a, b).unwrap()));
        }
    }
    for q in (3..=200).filter(|&q| is_prime_power(q)) {
        match q % 4 {
            1 => out.push((format!("paley_even({q})"), paley_even(q).unwrap())),
            3 => {
                out.push((format!("paley_odd({q})"), paley_odd(q).unwrap()));
                out.push((format!("m3_prime_power({q})"), m3_prime_power(q).unwrap()));
            }
            _ => {}
        }
    }
    for ps in odd_factor_lists(MAX_GRID_V, 3).into_iter().filter(|ps| !ps.is_empty()) {
        out.push((format!("two_n({ps:?})"), two_n(&ps).unwrap()));
    }
    out.push(("g16".into(), g16()));
    for q in [3, 5, 7, 9] {
        out.push((format!("twin_prime({q})"), twin_prime(q).unwrap()));
    }
    for q in (5..=MAX_GRID_V).filter(|&q| is_prime_power(q) && q % 4 == 1) {
        for ps in odd_factor_lists(MAX_GRID_V / q, 8) {
            out.push((format!("q4_lift({q},{ps:?})"), q4_lift(q, &ps).unwrap()));
        }
    }
    for m in 1..=(MAX_GRID_V + 1) / 4 {
        let b = 4 * m - 1;
        if family_4m1(m, &[]).is_err() {
            continue;
        }
        for ps in odd_factor_lists(MAX_GRID_V / b, 8) {
            out.push((format!("family_4m1({m},{ps:?})"), family_4m1(m, &ps).unwrap()));
        }
    }
    out
}

fn criterion_1(grid: &[(String, DiffFamily)]) -> Check {
    let failed: Vec<&str> = grid
        .par_iter()
        .filter(|(_, f)| !verify_gsedf(f).is_gsedf)
        .map(|(name, _)| name.as_str())
        .collect();
    ensure(failed.is_empty(), || format!("failed: {failed:?}"))?;
    Ok(format!("{} families verified", grid.len()))
}

fn criterion_2() -> Check {
    let c = Constraints { lambda_min: 2, ..Constraints::default() };
    let got: BTreeSet<(u64, u64, u64, u64)> = enumerate_params(21, 2, &c)
        .unwrap()
        .iter()
        .map(|t| {
            let ls = t.lambdas.as_ref().unwrap();
            assert_eq!(ls[0], ls[1]);
            (t.v, t.ks[0], t.ks[1], ls[0])
        })
        .collect();
    let printed: BTreeSet<_> = PRINTED_TWO_SET.into_iter().collect();
    assert_eq!(printed, catalog_two_set_tuples().into_iter().collect());
    let extra: Vec<_> = got.difference(&printed).collect();
    let missing: Vec<_> = printed.difference(&got).collect();
    ensure(extra.is_empty() && missing.is_empty(), || {
        format!("enumerated {} tuples; not in printed list: {extra:?}; printed but not enumerated: {missing:?}", got.len())
    })?;
    Ok(format!("{} tuples, exact match", got.len()))
}

fn criterion_3() -> Check {
    let got: Vec<(u64, u64, u64, u64)> = enumerate_params(200, 3, &Constraints::m3_partitions())
        .unwrap()
        .iter()
        .map(|t| (t.v, t.ks[0], t.ks[1], t.ks[2]))
        .collect();
    ensure(got.len() == 25, || format!("expected 25 tuples, got {}", got.len()))?;
    let matching = got.iter().zip(&PRINTED_PARTITIONS).filter(|(a, b)| a == b).count();
    ensure(matching == 24, || format!("{matching} positions match, expected 24"))?;
    let (v, a, b, c) = *got.iter().find(|t| t.0 == 85).ok_or("no v = 85 entry")?;
    ensure(a + b + c == 85, || format!("v = 85 entry ({v},{a},{b},{c}) does not sum to 85"))?;
    let ls = gsedf::counting_solve(v, &[a, b, c]).ok_or("v = 85 entry has non-integral lambdas")?;
    let printed = PRINTED_PARTITIONS[5];
    ensure(printed.1 + printed.2 + printed.3 != 85, || "printed v = 85 entry unexpectedly sums to 85".into())?;
    Ok(format!("25 tuples, 24 positions match; v = 85 entry is ({v},{a},{b},{c}) with lambdas {ls:?}"))
}

fn criterion_4() -> Check {
    let cfg = SearchConfig { budget: SEARCH_BUDGET, workers: 0 };
    let mut notes = Vec::new();
    for (v, k1, k2) in [(10, 3, 6), (11, 4, 5), (13, 3, 8), (13, 4, 6)] {
        let t = ParamTuple::new(v, vec![k1, k2], Some(vec![2, 2])).unwrap();
        let start = Instant::now();
        let outs = search_all_groups(&t, &cfg).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        let nodes: u64 = outs.iter().map(|o| o.nodes_explored).sum();
        ensure(aggregate_status(&outs) == SearchStatus::Exhausted, || format!("{t} not exhausted"))?;
        ensure(took < DENIAL_TIME_LIMIT, || format!("{t} took {took:?}"))?;
        notes.push(format!("({v},{k1},{k2},2) {nodes} nodes"));
    }
    Ok(notes.join(", "))
}

fn criterion_5() -> Result<(String, Vec<DiffFamily>), String> {
    let cfg = SearchConfig { budget: SEARCH_BUDGET, workers: 0 };
    let mut found = Vec::new();
    for (v, k1, k2) in [(7, 3, 4), (9, 4, 4)] {
        let t = ParamTuple::new(v, vec![k1, k2], Some(vec![2, 2])).unwrap();
        let start = Instant::now();
        let outs = search_all_groups(&t, &cfg).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        ensure(took < FIND_TIME_LIMIT, || format!("{t} took {took:?}"))?;
        let hit = outs.iter().find(|o| o.status == SearchStatus::Found).ok_or_else(|| format!("{t} not found"))?;
        let f = hit.family.clone().unwrap();
        ensure(verify_gsedf(&f).is_gsedf, || format!("{t} hit does not verify"))?;
        found.push(f);
    }
    Ok(("both found and verified".into(), found))
}

fn criterion_6(grid: &[(String, DiffFamily)]) -> Check {
    let mut partition_cases = 0;
    let mut coset_cases = 0;
    for (name, f) in grid {
        if f.partitions_group() || f.partitions_nonzero() {
            partition_cases += 1;
            ensure(partition_equivalence_check(f) == Ok(true), || format!("{name}: equivalence disagrees"))?;
        }
        if f.total_size() < f.v() && f.v() <= COSET_V_MAX {
            coset_cases += 1;
            ensure(coset_check(f) == Ok(true), || format!("{name}: coset check false"))?;
        }
    }
    Ok(format!("{partition_cases} partition-shaped families agree, {coset_cases} coset checks true"))
}

/// Moves one element of a random set to a random other slot: a free
/// element if there is one, else into another set.
fn perturb(f: &DiffFamily, rng: &mut StdRng) -> DiffFamily {
    let mut sets = f.set_ranks();
    let used: BTreeSet<usize> = sets.iter().flatten().copied().collect();
    let free: Vec<usize> = (0..f.group().len()).filter(|r| !used.contains(r)).collect();
    let i = rng.gen_range(0..sets.len());
    let pos = rng.gen_range(0..sets[i].len());
    if !free.is_empty() {
        sets[i][pos] = free[rng.gen_range(0..free.len())];
    } else {
        let j = (i + 1 + rng.gen_range(0..sets.len() - 1)) % sets.len();
        let pos_j = rng.gen_range(0..sets[j].len());
        let (x, y) = (sets[i][pos], sets[j][pos_j]);
        sets[i][pos] = y;
        sets[j][pos_j] = x;
        if sets[i].len() == sets[j].len() || sets[j].len() == 1 {
            // swapping between equal-size sets can preserve the property; move instead
            if sets[i].len() > 1 {
                let x = sets[i].remove(pos);
                sets[j].push(x);
            }
        }
    }
    DiffFamily::from_ranks(f.group().clone(), &sets, f.lambdas().to_vec()).unwrap()
}

fn criterion_7(grid: &[(String, DiffFamily)]) -> Check {
    let mut rng = StdRng::seed_from_u64(RNG_SEED);
    let mut instances = Vec::new();
    for (name, f) in grid.iter().filter(|(_, f)| f.v() <= SPECTRAL_V_MAX) {
        instances.push((name.clone(), f.clone()));
        instances.push((format!("{name} perturbed"), perturb(f, &mut rng)));
    }
    ensure(instances.len() >= SPECTRAL_MIN_INSTANCES, || format!("only {} instances", instances.len()))?;
    let disagreements: Vec<&str> = instances
        .par_iter()
        .filter(|(_, f)| spectral_verify(f, default_spectral_tol(f)).unwrap() != verify_gsedf(f).is_gsedf)
        .map(|(n, _)| n.as_str())
        .collect();
    ensure(disagreements.is_empty(), || format!("disagree on {disagreements:?}"))?;
    let rejected = instances.iter().filter(|(_, f)| !verify_gsedf(f).is_gsedf).count();
    Ok(format!("{} instances agree ({rejected} rejected by both)", instances.len()))
}

fn criterion_8(grid: &[(String, DiffFamily)]) -> Check {
    let two_set: Vec<_> = grid.iter().filter(|(_, f)| f.m() == 2 && f.lambdas()[0] == f.lambdas()[1]).collect();
    let failed: Vec<&str> = two_set
        .par_iter()
        .filter(|(_, f)| !decompose(f).map(|d| verify_decomposition(&d)).unwrap_or(false))
        .map(|(n, _)| n.as_str())
        .collect();
    ensure(failed.is_empty(), || format!("failed: {failed:?}"))?;
    for (f, v, mult) in [(c1(2, 3).unwrap(), 7, 2), (g16(), 16, 6), (twin_prime(3).unwrap(), 15, 8)] {
        let d = decompose(&f).unwrap();
        ensure(d.v == v && d.multiplicity == mult && verify_decomposition(&d), || {
            format!("{v}: multiplicity {} (expected {mult})", d.multiplicity)
        })?;
    }
    Ok(format!("{} decompositions verified; 2K_7, 6K_16, 8K_15 multiplicities match", two_set.len()))
}

fn criterion_9() -> Check {
    let mut triples = Vec::new();
    for l1 in 1..=ALPHA_LAMBDA_MAX {
        for l2 in l1..=ALPHA_LAMBDA_MAX {
            for l3 in l2..=ALPHA_LAMBDA_MAX {
                if l1 + l2 > l3 {
                    triples.push([l1, l2, l3]);
                }
            }
        }
    }
    let start = Instant::now();
    let with_roots: Vec<[u64; 3]> = triples
        .par_iter()
        .filter(|ls| alpha_scan(&ls[..], ALPHA_K, DEFAULT_C_MAX, DEFAULT_GRID).unwrap().any_root())
        .copied()
        .collect();
    let took = start.elapsed();
    ensure(with_roots.is_empty(), || format!("roots for {with_roots:?}"))?;
    ensure(took < ALPHA_TIME_LIMIT, || format!("scan took {took:?}"))?;
    Ok(format!("{} triples, no sign change, {:.1}s", triples.len(), took.as_secs_f64()))
}

fn criterion_10(grid: &[(String, DiffFamily)], hits: &[DiffFamily]) -> Check {
    let realized: BTreeSet<(u64, Vec<u64>, Vec<u64>)> = grid
        .iter()
        .map(|(_, f)| f)
        .chain(hits)
        .filter(|f| f.v() <= SOUNDNESS_V_MAX)
        .map(|f| {
            let t = ParamTuple::new(f.v(), f.ks(), Some(f.lambdas().to_vec())).unwrap();
            (t.v, t.ks, t.lambdas.unwrap())
        })
        .collect();
    let mut checked = 0;
    for m in 2..=4 {
        for t in enumerate_params(SOUNDNESS_V_MAX, m, &Constraints::default()).unwrap() {
            let key = (t.v, t.ks.clone(), t.lambdas.clone().unwrap());
            if realized.contains(&key) {
                checked += 1;
                let verdict = rule_out(&t);
                ensure(verdict.status != FeasibilityStatus::RuledOut, || format!("{t} ruled out by {}", verdict.reason))?;
            }
        }
    }
    ensure(checked == realized.len(), || format!("{} realized tuples, {checked} enumerated", realized.len()))?;
    Ok(format!("{checked} realized tuples, none ruled out"))
}

fn report(n: u32, title: &str, result: std::thread::Result<Check>) -> bool {
    let (ok, detail) = match result {
        Ok(Ok(s)) => (true, s),
        Ok(Err(s)) => (false, s),
        Err(p) => (false, format!("panic: {}", p.downcast_ref::<String>().cloned().unwrap_or_default())),
    };
    println!("criterion {n:>2} [{}] {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() -> ExitCode {
    let grid = construction_grid();
    let mut ok = true;
    ok &= report(1, "construction grid", catch_unwind(|| criterion_1(&grid)));
    ok &= report(2, "two-set tuples v <= 21", catch_unwind(criterion_2));
    ok &= report(3, "three-set partitions v <= 200", catch_unwind(criterion_3));
    ok &= report(4, "search denials", catch_unwind(criterion_4));
    let mut hits = Vec::new();
    ok &= report(
        5,
        "search finds",
        catch_unwind(AssertUnwindSafe(|| {
            criterion_5().map(|(s, f)| {
                hits = f;
                s
            })
        })),
    );
    ok &= report(6, "equivalence and coset checks", catch_unwind(|| criterion_6(&grid)));
    ok &= report(7, "spectral agreement", catch_unwind(|| criterion_7(&grid)));
    ok &= report(8, "decompositions", catch_unwind(|| criterion_8(&grid)));
    ok &= report(9, "alpha probe", catch_unwind(criterion_9));
    ok &= report(10, "filter soundness", catch_unwind(|| criterion_10(&grid, &hits)));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
