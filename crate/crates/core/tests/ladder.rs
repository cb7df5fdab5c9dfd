use cleandirty::ladder::*;
use cleandirty::ZString;
use proptest::prelude::*;

fn z(s: &str) -> ZString {
    s.parse().unwrap()
}

#[test]
fn single_step_mappings() {
    assert_eq!(cnot_ladder_step(&z("ZZ")).unwrap(), z("IZ"));
    assert_eq!(cnot_ladder_step(&z("IZ")).unwrap(), z("ZZ"));
    assert_eq!(cnot_ladder_step(&z("ZI")).unwrap(), z("ZI"));
    assert_eq!(cnot_ladder_step(&z("ZIZZ")).unwrap(), z("ZZIZ"));
    assert_eq!(cnot_ladder_step(&z("IIIII")).unwrap(), z("IIIII"));
    assert!(cnot_ladder_step(&z("Z")).is_err());
}

#[test]
fn zizz_chain() {
    let r = cycle_of(&z("ZIZZ"), 1).unwrap();
    let chain: Vec<String> = r.cycle.iter().map(|s| s.to_string()).collect();
    assert_eq!(chain, ["ZIZZ", "ZZIZ", "IZZZ", "ZIIZ"]);
    assert_eq!(r.period, 4);
    assert_eq!(r.z_hits_first_nd, 3);
}

#[test]
fn small_cycles() {
    assert_eq!(cycle_of(&z("IIII"), 4).unwrap().period, 1);
    let p = cycle_of(&z("ZII"), 1).unwrap().period;
    assert!(p.is_power_of_two() && p <= 4);
    // brute force: iterate until recurrence
    let mut s = z("ZII");
    let mut k = 0;
    loop {
        s = cnot_ladder_step(&s).unwrap();
        k += 1;
        if s == z("ZII") {
            break;
        }
    }
    assert_eq!(p, k);
}

#[test]
fn bijective_up_to_12() {
    for n in 2..=12usize {
        let mut seen = vec![false; 1 << n];
        for b in 0..1u64 << n {
            let img = cnot_ladder_step(&ZString::new(n, b).unwrap()).unwrap();
            assert!(!std::mem::replace(&mut seen[img.bits() as usize], true));
        }
    }
}

#[test]
fn period_law_up_to_12() {
    for n in 2..=12usize {
        let cap = n.next_power_of_two();
        for b in 1..1u64 << n {
            let r = cycle_of(&ZString::new(n, b).unwrap(), 0).unwrap();
            assert!(r.period.is_power_of_two() && r.period <= cap, "n={n} b={b:b}");
        }
    }
}

#[test]
fn drawn_triangle() {
    let rows = xor_triangle(&[true, false, true, true, false, false, false], 4);
    let got: Vec<String> = rows.iter().map(|r| r.to_string()).collect();
    assert_eq!(got, ["1011000", "110100", "01110", "1001"]);
    let rows = pascal_triangle(&z("ZIZZ"), 4);
    assert_eq!(rows[0].to_string(), "1011000");
    assert!(xor_triangle(&[false; 5], 5).iter().all(|r| r.0.iter().all(|b| !b)));
}

#[test]
fn gamma_examples() {
    assert_eq!(gamma(8, 2, 8).unwrap(), 2);
    assert_eq!(gamma(8, 8, 1).unwrap(), 1);
    assert_eq!(gamma(6, 1, 7).unwrap(), 1);
    assert_eq!(gamma(5, 0, 100).unwrap(), 0);
    assert!(gamma(1, 0, 1).is_err());
    assert!(gamma(4, 5, 1).is_err());
}

#[test]
fn min_hits_examples() {
    assert_eq!(min_z_hits(4, 1, 4).unwrap(), 1);
    let s = construction_string(4).unwrap();
    assert_eq!(z_hits(&s, 1, 4).unwrap(), 1);
    assert_eq!(min_z_hits(4, 4, 1).unwrap(), 1);
    assert!(min_z_hits(6, 2, 8).unwrap() >= gamma(6, 2, 8).unwrap());
    assert!(matches!(
        min_z_hits(13, 1, 1),
        Err(cleandirty::Error::ResourceLimit { .. })
    ));
    assert!(min_z_hits_with_limit(13, 1, 1, 13).is_ok());
}

#[test]
fn no_dirty_no_hits() {
    for b in 1..16 {
        assert_eq!(z_hits(&ZString::new(4, b).unwrap(), 0, 20).unwrap(), 0);
    }
}

#[test]
fn single_dirty_oracle_and_construction() {
    for n in [2usize, 4, 8] {
        let s = construction_string(n).unwrap();
        for layers in 0..=32 {
            assert!(min_z_hits(n, 1, layers).unwrap() >= gamma(n, 1, layers).unwrap(), "n={n} L={layers}");
            assert_eq!(z_hits(&s, 1, layers).unwrap(), gamma(n, 1, layers).unwrap());
        }
    }
}

#[test]
fn floor_exponent_overshoots_short_horizons() {
    // A Z on the last qubit needs n − 1 steps to reach qubit 0, which the floor
    // formula does not account for when n is not a power of two or n_d > 1.
    assert_eq!(gamma(3, 1, 2).unwrap(), 1);
    assert_eq!(min_z_hits(3, 1, 2).unwrap(), 0);
    let (hits, s) = min_z_hits_with_limit(4, 2, 2, 12).unwrap();
    assert_eq!((hits, gamma(4, 2, 2).unwrap()), (0, 1));
    assert_eq!(z_hits(&s, 2, 2).unwrap(), 0);
}

#[test]
fn bitwise_addition_corollary() {
    for x in 0..=4u32 {
        let half = 1usize << x;
        for a in 0..1u64 << half {
            for b in [0u64, 1, (1 << half) - 1, a.rotate_left(1) & ((1 << half) - 1)] {
                let row0: Vec<bool> = (0..half).map(|i| a >> i & 1 == 1).chain((0..half).map(|i| b >> i & 1 == 1)).collect();
                let rows = xor_triangle(&row0, half + 1);
                let prefix: Vec<bool> = (0..half).map(|i| (a ^ b) >> i & 1 == 1).collect();
                assert_eq!(rows[half].0[..half], prefix[..]);
            }
        }
    }
}

proptest! {
    #[test]
    fn pascal_prefixes_are_ladder_images(n in 2usize..=16, bits in any::<u64>(), rows in 1usize..=16) {
        let s = ZString::new(n, bits & ((1u64 << n) - 1)).unwrap();
        let tri = pascal_triangle(&s, rows);
        let mut cur = s;
        for row in tri.iter().take(n) {
            prop_assert_eq!(&row.0[..n], &cur.to_bools()[..]);
            cur = cnot_ladder_step(&cur).unwrap();
        }
    }

    #[test]
    fn gamma_rhs_monotone(n in 2usize..=12, nd in 0usize..=12, layers in 0usize..=64, p in 0.0f64..=1.0, dp in 0.0f64..=0.5) {
        let nd = nd.min(n);
        let rhs = |nd: usize, l: usize, p: f64| (1.0 - p).powi(gamma(n, nd, l).unwrap() as i32);
        let base = rhs(nd, layers, p);
        prop_assert!(rhs(nd, layers + 1, p) <= base);
        prop_assert!(rhs(nd, layers, (p + dp).min(1.0)) <= base);
        if nd < n {
            prop_assert!(rhs(nd + 1, layers, p) <= base);
        }
    }

    #[test]
    fn all_dirty_power_of_two_recovers_full_noise(k in 1u32..=5, layers in 0usize..=100) {
        let n = 1usize << k;
        prop_assert_eq!(gamma(n, n, layers).unwrap(), layers as u64);
    }

    #[test]
    fn cycle_closes(n in 2usize..=20, bits in any::<u64>(), nd in 0usize..=20) {
        let s = ZString::new(n, bits & ((1u64 << n) - 1)).unwrap();
        let r = cycle_of(&s, nd.min(n)).unwrap();
        prop_assert_eq!(r.cycle[0], s);
        prop_assert_eq!(cnot_ladder_step(r.cycle.last().unwrap()).unwrap(), s);
        prop_assert!(r.period.is_power_of_two() && r.period <= n.next_power_of_two());
    }
}
