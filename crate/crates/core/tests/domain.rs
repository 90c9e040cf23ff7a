mod common;

use std::collections::BTreeSet;

use drayplan::pipeline::{generate_synthetic, SyntheticSpec};
use drayplan::{derive_subsets, next_time, validate_instance, AccessMatrix, Instance, TimeGrid};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn three_trucks() -> Instance {
    generate_synthetic(&SyntheticSpec {
        trucks: 3,
        stations: 2,
        substations: 2,
        k_nearest: 2,
        seed: 7,
        ..Default::default()
    })
    .unwrap()
}

#[test]
fn well_formed_synthetic_instance_has_empty_report() {
    let inst = three_trucks();
    assert!(validate_instance(&inst).is_empty(), "{}", validate_instance(&inst));
    // The same invariants, checked by hand.
    let n = inst.grid.step_count;
    for tr in &inst.trucks {
        assert_eq!(tr.stop_fraction.len(), n);
        assert_eq!(tr.consumption.len(), n);
        for t in 0..n {
            assert!((0.0..=1.0).contains(&tr.stop_fraction[t]));
            assert!(tr.consumption[t] >= 0.0);
            if tr.stop_fraction[t] == 1.0 {
                assert_eq!(tr.consumption[t], 0.0);
            }
        }
    }
    for &(i, j, t) in &inst.access.truck_station {
        assert!(inst.trucks[i].stop_fraction[t] > 0.0);
        assert!(inst.stations[j].admits(&inst.trucks[i].id));
    }
    for s in &inst.stations {
        assert_eq!(s.kind == drayplan::SiteKind::Depot, !s.owner_truck_ids.is_empty());
    }
}

#[test]
fn stop_fraction_out_of_range_is_one_issue() {
    let mut inst = three_trucks();
    inst.trucks[1].stop_fraction[3] = 1.2;
    inst.trucks[1].consumption[3] = 0.0;
    let r = validate_instance(&inst);
    assert_eq!(r.len(), 1, "{r}");
    assert_eq!(r.issues[0].id, inst.trucks[1].id);
    assert_eq!(r.issues[0].field, "stop_fraction[3]");
}

#[test]
fn access_without_stop_is_reported() {
    let mut inst = three_trucks();
    let t = (0..inst.grid.step_count).find(|&t| inst.trucks[0].stop_fraction[t] == 0.0).unwrap();
    let j = (0..inst.stations.len()).find(|&j| inst.stations[j].is_public()).unwrap_or(0);
    inst.stations[j].owner_truck_ids.clear();
    inst.stations[j].kind = drayplan::SiteKind::TruckStop;
    inst.access.truck_station.insert((0, j, t));
    let r = validate_instance(&inst);
    assert!(r.issues.iter().any(|v| v.message == "access without stop"), "{r}");
}

#[test]
fn validation_is_idempotent() {
    let mut inst = three_trucks();
    inst.params.soc_min = 2.0;
    inst.substations[0].remaining_capacity = -1.0;
    let before = inst.clone();
    let a = validate_instance(&inst);
    let b = validate_instance(&inst);
    assert_eq!(a, b);
    assert_eq!(inst, before);
    assert_eq!(a.len(), 2);
}

#[test]
fn depot_without_owner_and_public_with_owner() {
    let mut inst = three_trucks();
    inst.stations[0].kind = drayplan::SiteKind::Depot;
    inst.stations[0].owner_truck_ids.clear();
    inst.stations[1].kind = drayplan::SiteKind::Intermodal;
    inst.stations[1].owner_truck_ids = BTreeSet::from(["truck-0".to_string()]);
    let r = validate_instance(&inst);
    assert!(r.issues.iter().any(|v| v.message == "depot without owners"));
    assert!(r.issues.iter().any(|v| v.message == "public site with owners"));
}

#[test]
fn instance_json_round_trip() {
    let inst = three_trucks();
    let back = Instance::from_json(&inst.to_json()).unwrap();
    assert_eq!(back, inst);
    let v: serde_json::Value = serde_json::from_str(&inst.to_json()).unwrap();
    assert_eq!(v["schema"], 1);
    let first = &v["access"]["truck_station"][0];
    assert!(first[0].is_string() && first[1].is_string() && first[2].is_u64());
}

#[test]
fn json_with_unknown_reference_fails() {
    let inst = three_trucks();
    let mut v: serde_json::Value = serde_json::from_str(&inst.to_json()).unwrap();
    v["access"]["truck_station"][0][0] = "nobody".into();
    assert!(Instance::from_json(&v.to_string()).is_err());
}

#[test]
fn all_zero_access_gives_empty_subsets() {
    let s = derive_subsets(&AccessMatrix::new(5), 3, 2, 1, 4);
    assert!(s.j_it.iter().flatten().all(Vec::is_empty));
    assert!(s.i_jt.iter().flatten().all(Vec::is_empty));
    assert!(s.k_j.iter().all(Vec::is_empty));
    assert!(s.j_k.iter().all(Vec::is_empty));
}

#[test]
fn random_sparse_subsets_match_double_loop() {
    let (ni, nj, nk, nt) = (5, 4, 3, 8);
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = AccessMatrix::new(5);
        let mut dense = vec![vec![vec![false; nt]; nj]; ni];
        for i in 0..ni {
            for j in 0..nj {
                for t in 0..nt {
                    if rng.gen_bool(0.2) {
                        a.truck_station.insert((i, j, t));
                        dense[i][j][t] = true;
                    }
                }
            }
        }
        for j in 0..nj {
            for k in 0..nk {
                if rng.gen_bool(0.5) {
                    a.station_substation.push(drayplan::domain::StationLink {
                        station: j,
                        substation: k,
                        distance_miles: rng.gen_range(0.0..5.0),
                    });
                }
            }
        }
        let s = derive_subsets(&a, ni, nj, nk, nt);
        for i in 0..ni {
            for t in 0..nt {
                let want: Vec<usize> = (0..nj).filter(|&j| dense[i][j][t]).collect();
                assert_eq!(s.j_it[i][t], want);
            }
        }
        for j in 0..nj {
            for t in 0..nt {
                let want: Vec<usize> = (0..ni).filter(|&i| dense[i][j][t]).collect();
                assert_eq!(s.i_jt[j][t], want);
            }
            for &(k, _) in &s.k_j[j] {
                assert!(s.j_k[k].contains(&j));
            }
        }
        // Rebuilding the relation from J_it reproduces it.
        let mut rebuilt = BTreeSet::new();
        for i in 0..ni {
            for t in 0..nt {
                rebuilt.extend(s.j_it[i][t].iter().map(|&j| (i, j, t)));
            }
        }
        assert_eq!(rebuilt, a.truck_station);
    }
}

proptest! {
    #[test]
    fn next_time_is_a_cyclic_bijection(n in 2usize..200) {
        let g = TimeGrid::new(n, 24.0 / n as f64).unwrap();
        let image: BTreeSet<usize> = (0..n).map(|t| next_time(&g, t).unwrap()).collect();
        prop_assert_eq!(image.len(), n);
        for start in [0, n / 2, n - 1] {
            let mut t = start;
            for _ in 0..n {
                t = next_time(&g, t).unwrap();
            }
            prop_assert_eq!(t, start);
        }
    }

    #[test]
    fn generated_instances_validate(seed in 0u64..500) {
        let inst = generate_synthetic(&common::tiny_spec(seed)).unwrap();
        prop_assert!(validate_instance(&inst).is_empty());
    }
}
