use gsedf::search::{aggregate_status, DEFAULT_BUDGET};
use gsedf::{
    abelian_groups_of_order, exhaustive_search, search_all_groups, verify_gsedf, AbelianGroup, DiffFamily, Error,
    ParamTuple, SearchConfig, SearchStatus,
};

fn tuple(v: u64, ks: &[u64]) -> ParamTuple {
    ParamTuple::new(v, ks.to_vec(), None).unwrap()
}

fn cfg(workers: usize) -> SearchConfig {
    SearchConfig { budget: DEFAULT_BUDGET, workers }
}

/// Every ordered choice of disjoint subsets with the given sizes, checked
/// directly with the exact verifier.
fn brute_force_exists(g: &AbelianGroup, ks: &[u64], lambdas: &[u64]) -> bool {
    fn subsets(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if pool.len() < k {
            return vec![];
        }
        let mut out = subsets(&pool[1..], k);
        for mut s in subsets(&pool[1..], k - 1) {
            s.insert(0, pool[0]);
            out.push(s);
        }
        out
    }
    fn go(g: &AbelianGroup, ks: &[u64], ls: &[u64], chosen: &mut Vec<Vec<usize>>) -> bool {
        if chosen.len() == ks.len() {
            let f = DiffFamily::from_ranks(g.clone(), chosen, ls.to_vec()).unwrap();
            return verify_gsedf(&f).is_gsedf;
        }
        let used: Vec<usize> = chosen.iter().flatten().copied().collect();
        let pool: Vec<usize> = (0..g.len()).filter(|x| !used.contains(x)).collect();
        for s in subsets(&pool, ks[chosen.len()] as usize) {
            chosen.push(s);
            if go(g, ks, ls, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(g, ks, lambdas, &mut Vec::new())
}

#[test]
fn denials_and_finds_in_cyclic_groups() {
    for (v, ks, want) in [
        (10, [3, 6], SearchStatus::Exhausted),
        (7, [3, 4], SearchStatus::Found),
        (11, [4, 5], SearchStatus::Exhausted),
        (13, [4, 6], SearchStatus::Exhausted),
        (13, [3, 8], SearchStatus::Exhausted),
        (13, [4, 9], SearchStatus::Found),
    ] {
        let t = tuple(v, &ks);
        let out = exhaustive_search(&AbelianGroup::cyclic(v).unwrap(), &t, &cfg(1)).unwrap();
        assert_eq!(out.status, want, "{t}");
        if let Some(f) = &out.family {
            assert!(verify_gsedf(f).is_gsedf);
        }
    }
}

#[test]
fn search_matches_brute_force_oracle() {
    for (v, ks) in [(7, vec![3, 4]), (10, vec![3, 6]), (11, vec![4, 5]), (13, vec![4, 6]), (9, vec![4, 4])] {
        let t = tuple(v, &ks);
        let ls = t.resolved_lambdas().unwrap();
        for g in abelian_groups_of_order(v).unwrap() {
            let out = exhaustive_search(&g, &t, &cfg(1)).unwrap();
            let exists = brute_force_exists(&g, &t.ks, &ls);
            assert_eq!(out.status == SearchStatus::Found, exists, "{t} in {:?}", g.factors());
        }
    }
}

#[test]
fn all_groups_of_order_16_and_9() {
    let outs = search_all_groups(&tuple(16, &[5, 9]), &cfg(0)).unwrap();
    assert_eq!(outs.len(), 5);
    let hit = outs.iter().find(|o| o.group == [2, 8]).unwrap();
    assert_eq!(hit.status, SearchStatus::Found);
    assert!(verify_gsedf(hit.family.as_ref().unwrap()).is_gsedf);

    let outs = search_all_groups(&tuple(9, &[4, 4]), &cfg(0)).unwrap();
    assert_eq!(outs.iter().find(|o| o.group == [3, 3]).unwrap().status, SearchStatus::Found);
    assert_eq!(aggregate_status(&outs), SearchStatus::Found);

    let outs = search_all_groups(&tuple(13, &[4, 6]), &cfg(0)).unwrap();
    assert_eq!(outs.len(), 1);
    assert_eq!(aggregate_status(&outs), SearchStatus::Exhausted);
}

#[test]
fn node_counts_independent_of_workers() {
    for (v, ks) in [(13, vec![4, 6]), (16, vec![5, 9]), (7, vec![3, 4]), (19, vec![6, 6, 6])] {
        let t = ParamTuple::new(v, ks, None).unwrap();
        for g in abelian_groups_of_order(v).unwrap() {
            let seq = exhaustive_search(&g, &t, &cfg(1)).unwrap();
            for w in [2, 3, 8] {
                let par = exhaustive_search(&g, &t, &cfg(w)).unwrap();
                assert_eq!(par.status, seq.status);
                assert_eq!(par.nodes_explored, seq.nodes_explored, "{t} {:?} workers {w}", g.factors());
                assert_eq!(par.family, seq.family);
            }
        }
    }
}

#[test]
fn budget_semantics() {
    let t = tuple(13, &[4, 6]);
    let g = AbelianGroup::cyclic(13).unwrap();
    let full = exhaustive_search(&g, &t, &cfg(1)).unwrap();
    assert!(full.nodes_explored > 10);
    for w in [1, 4] {
        let tight = SearchConfig { budget: full.nodes_explored - 1, workers: w };
        let out = exhaustive_search(&g, &t, &tight).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
        assert_eq!(out.nodes_explored, full.nodes_explored);
        let exact = SearchConfig { budget: full.nodes_explored, workers: w };
        assert_eq!(exhaustive_search(&g, &t, &exact).unwrap().status, SearchStatus::Exhausted);
    }
}

#[test]
fn rejects_infeasible_parameters() {
    let g = AbelianGroup::cyclic(20).unwrap();
    let t = tuple(20, &[2, 3, 4]);
    assert!(matches!(exhaustive_search(&g, &t, &cfg(1)), Err(Error::RejectedBeforeSearch(_))));
    let t = ParamTuple::new(7, vec![3, 4], Some(vec![1, 1])).unwrap();
    let g = AbelianGroup::cyclic(7).unwrap();
    assert!(matches!(exhaustive_search(&g, &t, &cfg(1)), Err(Error::RejectedBeforeSearch(_))));
    assert!(exhaustive_search(&AbelianGroup::cyclic(8).unwrap(), &tuple(7, &[3, 4]), &cfg(1)).is_err());
}

#[test]
fn outcome_serializes() {
    let out = exhaustive_search(&AbelianGroup::cyclic(10).unwrap(), &tuple(10, &[3, 6]), &cfg(1)).unwrap();
    let json = serde_json::to_value(&out).unwrap();
    assert_eq!(json["status"], "exhausted");
    assert!(json["nodes_explored"].as_u64().unwrap() > 0);
    assert!(json["symmetry"].as_str().unwrap().contains("translation"));
}

#[test]
fn counting_feasible_tuple_missing_from_printed_list_is_exhausted() {
    let t = tuple(19, &[6, 12]);
    assert_eq!(t.resolved_lambdas(), Some(vec![4, 4]));
    let outs = search_all_groups(&t, &cfg(0)).unwrap();
    assert_eq!(aggregate_status(&outs), SearchStatus::Exhausted);
}
