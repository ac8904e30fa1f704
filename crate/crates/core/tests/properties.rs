use proptest::prelude::*;

use rwre_core::lil::running_extremes;
use rwre_core::regeneration::{detect_regenerations, detect_regenerations_by_oracle, CensorPolicy};

fn path(steps: &[i8]) -> Vec<i64> {
    let mut p = vec![0i64];
    for &s in steps {
        let last = *p.last().unwrap();
        p.push(last + s as i64);
    }
    p
}

fn lattice_steps() -> impl Strategy<Value = Vec<i8>> {
    // Biased towards +1 so regenerations actually happen.
    prop::collection::vec(prop_oneof![4 => Just(1i8), 1 => Just(-1i8), 5 => Just(0i8)], 0..400)
}

proptest! {
    #[test]
    fn single_pass_equals_oracle(steps in lattice_steps(), guard in 0usize..50) {
        let p = path(&steps);
        let policy = CensorPolicy::new(guard);
        prop_assert_eq!(detect_regenerations(&p, policy).times, detect_regenerations_by_oracle(&p, policy));
        let pf: Vec<f64> = p.iter().map(|&x| x as f64 * 0.7).collect();
        prop_assert_eq!(detect_regenerations(&pf, policy).times, detect_regenerations_by_oracle(&pf, policy));
    }

    #[test]
    fn regenerations_are_strict_records_never_revisited(steps in lattice_steps(), guard in 0usize..50) {
        let p = path(&steps);
        let r = detect_regenerations(&p, CensorPolicy::new(guard));
        let mut prev = 0;
        for &tau in &r.times {
            prop_assert!(tau > prev || (prev == 0 && tau >= 1));
            prop_assert!(p[..tau].iter().all(|&x| x < p[tau]));
            prop_assert!(p[tau..].iter().all(|&x| x >= p[tau]));
            prop_assert!(tau + guard < p.len());
            prev = tau;
        }
    }

    #[test]
    fn larger_guard_only_truncates(steps in lattice_steps(), g1 in 0usize..40, extra in 0usize..40) {
        let p = path(&steps);
        let small = detect_regenerations(&p, CensorPolicy::new(g1)).times;
        let large = detect_regenerations(&p, CensorPolicy::new(g1 + extra)).times;
        prop_assert!(large.len() <= small.len());
        prop_assert_eq!(&small[..large.len()], &large[..]);
    }

    #[test]
    fn shift_consistency(steps in lattice_steps(), guard in 0usize..30) {
        let p = path(&steps);
        let policy = CensorPolicy::new(guard);
        let r = detect_regenerations(&p, policy);
        if let Some(&tau1) = r.times.first() {
            let shifted: Vec<i64> = p[tau1..].iter().map(|x| x - p[tau1]).collect();
            let rs = detect_regenerations(&shifted, policy);
            let expect: Vec<usize> = r.times[1..].iter().map(|t| t - tau1).collect();
            prop_assert_eq!(rs.times, expect);
        }
    }

    #[test]
    fn running_extremes_are_monotone(v in prop::collection::vec(-1e6f64..1e6, 1..200)) {
        let (mx, mn) = running_extremes(&v);
        prop_assert!(mx.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(mn.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(mx.iter().zip(&mn).zip(&v).all(|((a, b), x)| a >= x && b <= x));
    }
}
