use cubicwa_core::rat::{self, frac, int, ints};
use cubicwa_core::wa::{
    count, crt_shift, search, shifted_poly, ApproximationTask, AxisBox, CountQuery, LocalTarget, Region,
};
use cubicwa_core::{CubicForm, Poly, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn poly(n: usize, terms: &[(&[u32], i64)]) -> Poly {
    let mut p = Poly::zero(n);
    for (e, c) in terms {
        p.add_term(e.to_vec(), int(*c));
    }
    p
}

fn swd() -> CubicForm {
    CubicForm::from_poly(&poly(
        4,
        &[
            (&[1, 2, 0, 0], 1),
            (&[1, 0, 2, 0], 1),
            (&[0, 0, 0, 3], -4),
            (&[2, 0, 0, 1], 8),
            (&[1, 0, 0, 2], 7),
            (&[3, 0, 0, 0], -14),
        ],
    ))
    .unwrap()
}

fn ord5(x: &Rat) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let count = |mut v: BigInt| {
        let mut k = 0;
        while v.is_multiple_of(&BigInt::from(5)) {
            v /= 5;
            k += 1;
        }
        k
    };
    Some(count(x.numer().clone()) - count(x.denom().clone()))
}

#[test]
fn approximates_five_adic_and_real_targets() {
    let c = CubicForm::from_poly(&poly(4, &[(&[3, 0, 0, 0], 1), (&[0, 3, 0, 0], 1), (&[0, 0, 3, 0], -1), (&[0, 0, 0, 3], -1)]))
        .unwrap();
    let target = ints(&[1, 2, 1, 2]);
    let task = ApproximationTask::new(
        c,
        vec![
            LocalTarget::prime(5, target.clone(), 3).unwrap(),
            LocalTarget::real(target.clone(), frac(1, 100)).unwrap(),
        ],
    );
    let out = search(&task).unwrap();
    let x = out.point.expect("hit on the plane x1 = x3, x2 = x4");
    let cube = |v: &Rat| v * v * v;
    assert!((cube(&x.point[0]) + cube(&x.point[1]) - cube(&x.point[2]) - cube(&x.point[3])).is_zero());
    for (xi, ti) in x.point.iter().zip(&target) {
        assert!(ord5(&(xi - ti)).is_none_or(|o| o >= 3));
        assert!(rat::abs(&(xi - ti)) < frac(1, 100));
    }
    assert!(out.transcript.checks.iter().all(|c| c.holds));
    assert_eq!(out.transcript.modulus, BigInt::from(125));
}

#[test]
fn shift_keeps_cubic_part_of_swd_form() {
    let c = swd();
    let a = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    let f = shifted_poly(&c, &a).unwrap();
    assert_eq!(f.homogeneous_part(3), c.to_poly());
    // f(e1 − a) = C(e1) = −14 at the origin shift
    assert_eq!(f.eval(&ints(&[0, 0, 0, 0])).unwrap(), int(-14));
}

fn oracle_count(coeffs: &[(Vec<u32>, i64)], region: &Region, m: i64, p: i64, bound: i64) -> u64 {
    let n = coeffs.first().map_or(0, |(e, _)| e.len());
    let inside = |x: &[i64]| -> bool {
        match region {
            Region::Box(b) => x.iter().zip(&b.center).all(|(&xi, ci)| {
                let d = Rat::from_integer(BigInt::from(xi)) - Rat::from_integer(BigInt::from(p)) * ci;
                rat::abs(&d) * int(2) < &b.side * int(p)
            }),
            Region::Intervals(iv) => x.iter().zip(iv).all(|(&xi, (lo, hi))| {
                let v = Rat::from_integer(BigInt::from(xi));
                let pr = int(p);
                &pr * lo <= v && v <= &pr * hi
            }),
        }
    };
    let mut total = 0;
    let mut x = vec![-bound; n];
    loop {
        if x.iter().all(|v| v % m == 0) && inside(&x) {
            let val: i128 = coeffs
                .iter()
                .map(|(e, c)| *c as i128 * e.iter().zip(&x).map(|(&k, &v)| (v as i128).pow(k)).product::<i128>())
                .sum();
            if val == 0 {
                total += 1;
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return total;
            }
            i -= 1;
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = -bound;
        }
    }
}

fn arb_query() -> impl Strategy<Value = (Vec<(Vec<u32>, i64)>, Region, i64, i64)> {
    (1usize..=3).prop_flat_map(|n| {
        let term = (proptest::collection::vec(0u32..=2, n), -3i64..=3);
        let region = prop_oneof![
            proptest::collection::vec((-4i64..=4, 1i64..=4), n).prop_map(|v| {
                Region::Intervals(v.into_iter().map(|(lo, w)| (frac(lo, 4), frac(lo + w, 4))).collect())
            }),
            (proptest::collection::vec(-4i64..=4, n), 1i64..=7).prop_map(|(c, s)| {
                Region::Box(AxisBox::new(c.into_iter().map(|v| frac(v, 4)).collect(), frac(s, 8)).unwrap())
            }),
        ];
        (proptest::collection::vec(term, 0..=4), region, 1i64..=3, 1i64..=12)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn count_matches_nested_loops((terms, region, m, p) in arb_query()) {
        let n = match &region {
            Region::Box(b) => b.center.len(),
            Region::Intervals(iv) => iv.len(),
        };
        let mut psi = Poly::zero(n);
        for (e, c) in &terms {
            psi.add_term(e.clone(), int(*c));
        }
        let coeffs: Vec<(Vec<u32>, i64)> = psi
            .terms()
            .map(|(e, c)| (e.clone(), i64::try_from(c.to_integer()).unwrap()))
            .collect();
        let q = CountQuery::new(psi.clone(), region.clone(), BigInt::from(m), BigInt::from(p));
        let expected = if coeffs.is_empty() {
            oracle_count(&[(vec![0; n], 0)], &region, m, p, 2 * p)
        } else {
            oracle_count(&coeffs, &region, m, p, 2 * p)
        };
        prop_assert_eq!(count(&q).unwrap(), BigInt::from(expected));
    }

    #[test]
    fn crt_recovers_every_target(
        t2 in proptest::collection::vec(-50i64..50, 3),
        t3 in proptest::collection::vec(-50i64..50, 3),
        t7 in proptest::collection::vec(-50i64..50, 3),
        r in proptest::collection::vec(1u32..=4, 3),
    ) {
        let targets = vec![
            LocalTarget::prime(2, ints(&t2), r[0]).unwrap(),
            LocalTarget::prime(3, ints(&t3), r[1]).unwrap(),
            LocalTarget::prime(7, ints(&t7), r[2]).unwrap(),
        ];
        let s = crt_shift(&targets, 3).unwrap();
        let big_m: BigInt = [(2u32, r[0]), (3, r[1]), (7, r[2])].iter().map(|&(p, k)| BigInt::from(p).pow(k)).product();
        prop_assert_eq!(&s.m, &big_m);
        for (p, k, t) in [(2u32, r[0], &t2), (3, r[1], &t3), (7, r[2], &t7)] {
            let pk = BigInt::from(p).pow(k);
            for (ai, ti) in s.a.iter().zip(t.iter()) {
                prop_assert!(!ai.is_negative() && ai < &big_m);
                prop_assert_eq!(ai.mod_floor(&pk), BigInt::from(*ti).mod_floor(&pk));
            }
        }
    }

    #[test]
    fn shift_preserves_cubic_part(a in proptest::collection::vec(-20i64..20, 4)) {
        let c = swd();
        let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
        prop_assert_eq!(shifted_poly(&c, &a).unwrap().homogeneous_part(3), c.to_poly());
    }

    #[test]
    fn projectivized_results_are_zeros(
        r in 1u32..=2,
        extra_t in 0u32..=2,
        eps_den in 10i64..=200,
        rho_num in 1i64..=3,
        t1 in 1i64..=3,
        t2 in 1i64..=3,
    ) {
        // x1³ + x2³ − x3³ − x4³ contains the plane x1 = x3, x2 = x4
        let c = CubicForm::from_poly(&poly(4, &[(&[3, 0, 0, 0], 1), (&[0, 3, 0, 0], 1), (&[0, 0, 3, 0], -1), (&[0, 0, 0, 3], -1)])).unwrap();
        let target = ints(&[t1, t2, t1, t2]);
        let mut task = ApproximationTask::new(c.clone(), vec![
            LocalTarget::prime(7, target.clone(), r).unwrap(),
            LocalTarget::real(target, frac(1, eps_den)).unwrap(),
        ]);
        task.t = Some(r + extra_t);
        task.rho = frac(rho_num, 4);
        let out = search(&task).unwrap();
        let x = out.point.expect("plane points exist at every scale");
        let lead = x.point.iter().find(|v| !v.is_zero()).unwrap().clone();
        let proj: Vec<Rat> = x.point.iter().map(|v| v / &lead).collect();
        prop_assert!(c.eval(&proj).unwrap().is_zero());
        prop_assert!(out.transcript.checks.iter().all(|c| c.holds || !c.required));
    }
}
