use super::*;
use num_rational::Ratio;
use proptest::prelude::*;

type Q = Ratio<i128>;

fn dy(n: u64) -> Dyadic {
    Dyadic::new(n).unwrap()
}

/// Independent rational-arithmetic oracle, scanning a generous degree box.
fn oracle(n: u64, l: u64, beta: i128, theta: i128, model: &SpectrumModel, m: i64) -> u64 {
    let mu = |k: i128| -> Q {
        match *model {
            SpectrumModel::Sphere { dim } => Q::from_integer(k * (k + dim as i128 - 1)),
            SpectrumModel::Zoll { z0, .. } => {
                let s = Q::new(4 * k + z0 as i128, 4);
                s * s
            }
        }
    };
    let in_block = |x: Q, n: u64| {
        let n4 = Q::from_integer((n as i128).pow(4));
        let b = Q::from_integer(1) + x * x;
        n4 <= b && b < n4 * Q::from_integer(16)
    };
    let sigma = Q::new(beta, theta);
    let half = Q::new(1, 2);
    let mut count = 0;
    for k in 0..(3 * n as i128 + 4) {
        if !in_block(mu(k), n) {
            continue;
        }
        for j in 0..(3 * l as i128 + 4) {
            if !in_block(mu(j), l) {
                continue;
            }
            let x = mu(k) / sigma - mu(j);
            let diff = Q::from_integer(m as i128) - x;
            if -half <= diff && diff <= half {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn unit_cell_at_sigma_one() {
    let t = counting_table(dy(1), dy(1), SigmaRational::ONE, &SpectrumModel::S2);
    assert_eq!(count_lambda(dy(1), dy(1), SigmaRational::ONE, &SpectrumModel::S2, 0), 2);
    assert_eq!(t.count_at(0), 2);
    assert!(t.sup >= 2);
    assert_eq!(sup_count(dy(1), dy(1), SigmaRational::ONE, &SpectrumModel::S2), (t.argmax, t.sup));
    assert_eq!(t.sup, *t.counts.iter().max().unwrap());
    assert_eq!(t.pairs, 4);
}

#[test]
fn outside_admissible_range_is_empty() {
    let s = SigmaRational::new(1, 4).unwrap();
    for (n, l) in [(1, 1), (4, 2), (8, 16)] {
        let r = admissible_range(dy(n), dy(l), s);
        let t = counting_table(dy(n), dy(l), s, &SpectrumModel::S2);
        assert!(r.contains(t.m_range().start()) && r.contains(t.m_range().end()));
        assert_eq!(count_lambda(dy(n), dy(l), s, &SpectrumModel::S2, r.start() - 1), 0);
        assert_eq!(count_lambda(dy(n), dy(l), s, &SpectrumModel::S2, r.end() + 1), 0);
    }
}

#[test]
fn quarter_sigma_sweep_matches_oracle() {
    let s = SigmaRational::new(1, 4).unwrap();
    let model = SpectrumModel::S2;
    let t = counting_table(dy(4), dy(2), s, &model);
    for m in admissible_range(dy(4), dy(2), s) {
        assert_eq!(t.count_at(m), oracle(4, 2, 1, 4, &model, m), "m = {m}");
        assert_eq!(count_lambda(dy(4), dy(2), s, &model, m), t.count_at(m));
    }
}

#[test]
fn zoll_and_higher_dimension_match_oracle() {
    let s = SigmaRational::new(9, 4).unwrap();
    for model in [SpectrumModel::zoll(2, 0.5).unwrap(), SpectrumModel::sphere(3).unwrap()] {
        for (n, l) in [(2, 2), (4, 8)] {
            let t = counting_table(dy(n), dy(l), s, &model);
            for m in admissible_range(dy(n), dy(l), s) {
                assert_eq!(t.count_at(m), oracle(n, l, 9, 4, &model, m), "{model} m = {m}");
            }
        }
    }
}

#[test]
fn diagonal_table_is_symmetric_at_sigma_one() {
    let t = counting_table(dy(8), dy(8), SigmaRational::ONE, &SpectrumModel::S2);
    for m in t.m_range() {
        assert_eq!(t.count_at(m), t.count_at(-m));
    }
}

#[test]
fn transformed_inequality_holds_on_members() {
    for n in [2, 4, 8] {
        let c = verify_transformed_equation(dy(n), dy(n), SigmaRational::ONE, 2, None).unwrap();
        assert!(c.holds && c.checked > 0 && c.witness.is_none());
    }
    let c = verify_transformed_equation(dy(8), dy(4), SigmaRational::new(1, 4).unwrap(), 2, None).unwrap();
    assert!(c.holds);
    let c = verify_transformed_equation(dy(4), dy(4), SigmaRational::new(9, 4).unwrap(), 3, None).unwrap();
    assert!(c.holds);
    // The unit block contains degree 0, below N/2.
    let c = verify_transformed_equation(dy(1), dy(1), SigmaRational::ONE, 2, None).unwrap();
    assert!(c.holds && c.outside_degree_box > 0);
}

#[test]
fn fabricated_member_is_caught() {
    let s = SigmaRational::ONE;
    // (k, ℓ, m) = (5, 0, 0): μ_5 − μ_0 = 30, far from m = 0.
    let c = verify_members(&[(1, 1, 0), (5, 0, 0)], s, 2, None).unwrap();
    assert!(!c.holds);
    let w = c.witness.unwrap();
    assert_eq!((w.k, w.l, w.m), (5, 0, 0));
    assert_eq!(w.residual, 120);
    assert_eq!(w.bound, 2);
}

#[test]
fn non_square_sigma_is_rejected() {
    let s = SigmaRational::new(2, 1).unwrap();
    assert!(matches!(
        verify_transformed_equation(dy(2), dy(2), s, 2, None),
        Err(crate::Error::Precondition(_))
    ));
}

fn naive_divisors(n: u64) -> u64 {
    let mut c = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            c += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    c
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn count_matches_oracle(jn in 0u32..4, jl in 0u32..4, m in -80i64..300, which in 0usize..3) {
        let (beta, theta) = [(1, 1), (1, 4), (9, 4)][which];
        let s = SigmaRational::new(beta, theta).unwrap();
        let (n, l) = (1u64 << jn, 1u64 << jl);
        prop_assert_eq!(
            count_lambda(dy(n), dy(l), s, &SpectrumModel::S2, m),
            oracle(n, l, beta as i128, theta as i128, &SpectrumModel::S2, m)
        );
    }

    #[test]
    fn divisor_count_is_multiplicative(a in 1u64..5000, b in 1u64..5000) {
        prop_assume!(gcd(a, b) == 1);
        prop_assert_eq!(
            divisor_count(a * b).unwrap(),
            divisor_count(a).unwrap() * divisor_count(b).unwrap()
        );
        prop_assert_eq!(divisor_count(a).unwrap(), naive_divisors(a));
    }

    #[test]
    fn every_member_satisfies_transformed_form(jn in 0u32..5, jl in 0u32..5, which in 0usize..3) {
        let s = [SigmaRational::ONE, SigmaRational::new(1, 4).unwrap(), SigmaRational::new(9, 4).unwrap()][which];
        let c = verify_transformed_equation(dy(1 << jn), dy(1 << jl), s, 2, None).unwrap();
        prop_assert!(c.holds, "{:?}", c.witness);
    }
}
