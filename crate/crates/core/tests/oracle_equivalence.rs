use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sepsparse::{
    brute_force_project, dp_folklore, dp_improved, head_approx_2, is_feasible, lassp, lassp_value_only, recover,
    recover_with_trace, ProjectionInstance, SeparatedSupports,
};

fn random_costs(rng: &mut ChaCha8Rng, d: usize, hi: i64) -> Vec<i64> {
    (0..d).map(|_| rng.random_range(0..=hi)).collect()
}

#[test]
fn all_engines_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in 1..=10 {
        for delta in 1..=4 {
            for k in 0..=d {
                if !is_feasible(d, k, delta) {
                    continue;
                }
                for _ in 0..12 {
                    let c = random_costs(&mut rng, d, 15);
                    let inst = ProjectionInstance::from_i64(&c, k, delta).unwrap();
                    let want = brute_force_project(&inst).unwrap().value;
                    let ctx = format!("c={c:?} k={k} delta={delta}");
                    let out = lassp(&inst, &mut rng).unwrap().projection;
                    assert_eq!(out.value, want, "lassp {ctx}");
                    assert!(out.support.is_in_model(d, k, delta), "lassp support {ctx}");
                    let rec = recover(&inst).unwrap();
                    assert_eq!(rec.value, want, "recover {ctx}");
                    assert!(rec.support.is_in_model(d, k, delta), "recover support {ctx}");
                    assert_eq!(dp_folklore(&inst).unwrap().value, want, "dp {ctx}");
                    assert_eq!(dp_improved(&inst).unwrap().value, want, "dp_improved {ctx}");
                    if k > 0 {
                        assert_eq!(lassp_value_only(&inst).unwrap(), want, "dual {ctx}");
                    }
                }
            }
        }
    }
}

#[test]
fn recursion_is_sound_and_shallow() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..400 {
        let d = rng.random_range(1..=40);
        let delta = rng.random_range(1..=5);
        let kmax = (d - 1) / delta + 1;
        let k = rng.random_range(0..=kmax);
        let c = random_costs(&mut rng, d, 30);
        let inst = ProjectionInstance::from_i64(&c, k, delta).unwrap();
        let (p, trace) = recover_with_trace(&inst).unwrap();
        assert!(p.support.is_in_model(d, k, delta));
        assert_eq!(p.value, dp_improved(&inst).unwrap().value);
        let bound = (usize::BITS - d.saturating_sub(1).leading_zeros()) as usize + 2;
        for node in &trace {
            let fixed = usize::from(node.r.is_some());
            assert_eq!(node.split.k_left + node.split.k_right + fixed, node.k);
            let left = node.split.s - node.start;
            let right = node.start + node.len - 1 - node.split.e;
            assert!(is_feasible(left.max(1), node.split.k_left, delta) || node.split.k_left == 0);
            assert!(is_feasible(right.max(1), node.split.k_right, delta) || node.split.k_right == 0);
            assert!(node.depth <= bound, "depth {} > {bound} for d={d}", node.depth);
        }
    }
}

#[test]
fn masking_matches_restricted_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..300 {
        let d = rng.random_range(1..=10);
        let delta = rng.random_range(1..=4);
        let k = rng.random_range(1..=(d - 1) / delta + 1);
        let j_s = rng.random_range(1..=d);
        let c: Vec<i128> = (0..d).map(|_| rng.random_range(0..=15)).collect();
        let j_e = (j_s + delta - 1).min(d);
        let r = sepsparse::delta_recovery(&c, delta, k, j_s).unwrap();
        let costs: Vec<i64> = c.iter().map(|&v| v as i64).collect();
        let opt = brute_force_project(&ProjectionInstance::from_i64(&costs, k, delta).unwrap())
            .unwrap()
            .value;
        let value = |s: &sepsparse::Support| s.indices().iter().map(|&i| BigInt::from(c[i - 1])).sum::<BigInt>();
        let avoiding = SeparatedSupports::new(d, k, delta)
            .filter(|s| s.indices().iter().all(|i| !(j_s..=j_e).contains(i)))
            .map(|s| value(&s))
            .max();
        match r {
            None => assert_eq!(avoiding, Some(opt.clone()), "c={c:?} k={k} delta={delta} j_s={j_s}"),
            Some(r) => {
                assert!((j_s..=j_e).contains(&r));
                assert_ne!(avoiding, Some(opt.clone()), "c={c:?} k={k} delta={delta} j_s={j_s}");
                let using = SeparatedSupports::new(d, k, delta)
                    .filter(|s| s.contains(r))
                    .map(|s| value(&s))
                    .max();
                assert_eq!(using, Some(opt), "c={c:?} k={k} delta={delta} j_s={j_s} r={r}");
            }
        }
    }
}

#[test]
fn approximation_is_within_factor_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for d in 1..=12 {
        for delta in 1..=4 {
            for k in 1..=(d - 1) / delta + 1 {
                for _ in 0..10 {
                    let c = random_costs(&mut rng, d, 15);
                    let inst = ProjectionInstance::from_i64(&c, k, delta).unwrap();
                    let approx = head_approx_2(&inst).unwrap();
                    let opt = brute_force_project(&inst).unwrap().value;
                    assert!(approx.support.is_separated(delta));
                    assert!(approx.support.len() <= k);
                    assert!(BigInt::from(2) * &approx.value >= opt, "c={c:?} k={k} delta={delta}");
                }
            }
        }
    }
}
