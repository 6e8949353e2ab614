mod support;

use std::collections::BTreeSet;

use bch_resum::perm::*;
use bch_resum::Error;
use proptest::prelude::*;
use support::shuffles;

fn one_lines(s: &PermSum) -> BTreeSet<Vec<usize>> {
    s.terms().map(|(p, c)| {
        assert_eq!(c, 1);
        p.one_line().to_vec()
    }).collect()
}

#[test]
fn marching_is_the_set_of_interleavings() {
    for n in 1..=8 {
        for m in 0..=n {
            let expect: BTreeSet<Vec<usize>> = shuffles(n, m).into_iter().collect();
            assert_eq!(one_lines(&marching(n, m).unwrap()), expect, "M_{{{n},{m}}}");
        }
    }
}

#[test]
fn marching_annihilates_p() {
    for n in 2..=8 {
        let p = expand_p(n);
        for m in 1..n {
            let prod = marching(n, m).unwrap().try_mul(&p).unwrap();
            assert!(prod.is_zero(), "M_{{{n},{m}}} P_{n} = {prod}");
        }
    }
}

#[test]
fn p_has_power_of_two_unit_terms() {
    for n in 1..=9 {
        let p = expand_p(n);
        assert_eq!(p.len(), 1 << (n - 1));
        assert!(p.terms().all(|(_, c)| c == 1 || c == -1));
    }
}

#[test]
fn reversal_absorbs_into_p() {
    for n in 1..=8 {
        let p = expand_p(n);
        let r = PermSum::from_perm(1, reversal_in(n, n));
        let sign = if n % 2 == 1 { 1 } else { -1 };
        assert_eq!(&r * &p, p.scale(sign), "N={n}");
    }
}

#[test]
fn p3_terms() {
    let lines = expand_p(3).to_lines();
    assert_eq!(lines, vec!["+1 1 2 3", "-1 2 1 3", "-1 2 3 1", "+1 3 2 1"]);
}

#[test]
fn s_sum_rebuilds_p() {
    for n in 1..=8 {
        assert_eq!(alternating_s_sum(n), expand_p(n), "N={n}");
    }
}

#[test]
fn s_sizes_are_binomial() {
    for n in 1..=8usize {
        for r in 1..=n {
            let binom = (0..r - 1).fold(1usize, |a, i| a * (n - 1 - i) / (i + 1));
            assert_eq!(s_perms(n, r).unwrap().len(), binom, "S_{{{n},{r}}}");
        }
    }
    assert!(matches!(s_perms(3, 0), Err(Error::OutOfRange(_))));
    assert!(s_perms(3, 4).is_err());
}

#[test]
fn marching_out_of_range() {
    assert!(matches!(marching(3, 4), Err(Error::OutOfRange(_))));
}

#[test]
fn arity_mismatch() {
    let a = PermSum::identity(3);
    let b = PermSum::identity(4);
    assert!(matches!(a.try_mul(&b), Err(Error::ArityMismatch { left: 3, right: 4 })));
    assert!(a.try_add(&b).is_err());
    assert_eq!(a.mul_promoted(&b).arity(), 4);
}

fn perm_of(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_one_line(v).unwrap())
}

fn triple() -> impl Strategy<Value = (Perm, Perm, Perm)> {
    (1usize..8).prop_flat_map(|n| (perm_of(n), perm_of(n), perm_of(n)))
}

proptest! {
    #[test]
    fn composition_is_associative((a, b, c) in triple()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn inverse_cancels((a, _, _) in triple()) {
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert!(a.inverse().compose(&a).is_identity());
    }

    #[test]
    fn action_respects_composition((a, b, _) in triple()) {
        // σ(τf)(L) = (τf)(σ·L) = f(τ·(σ·L)) must equal (στ)f(L).
        let args: Vec<usize> = (0..a.arity()).map(|i| 10 * i).collect();
        let direct = a.compose(&b).apply(&args);
        let staged = b.apply(&a.apply(&args));
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn sums_form_a_ring((a, b, c) in triple()) {
        let sa = &PermSum::from_perm(2, a) - &PermSum::identity(b.arity());
        let sb = PermSum::from_perm(-1, b);
        let sc = &PermSum::from_perm(3, c) + &PermSum::identity(sa.arity());
        prop_assert_eq!(&(&sa * &sb) * &sc, &sa * &(&sb * &sc));
        prop_assert_eq!(&sa * &(&sb + &sc), &(&sa * &sb) + &(&sa * &sc));
        prop_assert!((&sa - &sa).is_zero());
    }
}
