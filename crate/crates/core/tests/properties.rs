use std::collections::BTreeSet;

use proptest::prelude::*;

use fschar::char_d::restricted_char;
use fschar::colors::{energy, realizable};
use fschar::monomial::{minimal_monomial, Direction, StartRule};
use fschar::{
    enumerate_basis, enumerate_character, AlgebraSpec, Color, EnumRequest, Factor, ICVariant, Monomial, Partition,
    RestrictedSet, Weight,
};

/// `(rank, m)` with `rank <= max_rank`.
fn a_spec(max_rank: usize) -> impl Strategy<Value = AlgebraSpec> {
    (1..=max_rank).prop_flat_map(|l| (1..=l).prop_map(move |m| AlgebraSpec::type_a(l, m).unwrap()))
}

/// A realizable weight for `spec` with entries `<= bound`.
fn chain_weight(spec: AlgebraSpec, bound: i64) -> impl Strategy<Value = Weight> {
    prop::collection::vec(0..=bound, spec.rank())
        .prop_map(Weight)
        .prop_filter("realizable", move |w| realizable(&spec, w))
}

fn spec_and_weight(max_rank: usize, bound: i64) -> impl Strategy<Value = (AlgebraSpec, Weight)> {
    a_spec(max_rank).prop_flat_map(move |s| (Just(s), chain_weight(s, bound)))
}

fn basis(spec: AlgebraSpec, ic: ICVariant, w: &Weight, dmax: i64) -> BTreeSet<Monomial> {
    enumerate_basis(&EnumRequest::new(spec, ic, w.clone(), dmax as usize), dmax)
        .into_iter()
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Every admissible monomial is its path's minimal monomial plus a
    /// partition, and every partition added to a minimal monomial stays
    /// admissible.
    #[test]
    fn path_fibration((spec, w) in spec_and_weight(3, 2)) {
        let dmax = 14;
        let all = basis(spec, ICVariant::LambdaK(0), &w, dmax);
        // the empty monomial is its own path
        let mut rebuilt: BTreeSet<Monomial> = all.iter().filter(|x| x.is_empty()).cloned().collect();
        let paths: BTreeSet<_> = all.iter().filter(|x| !x.is_empty()).map(|x| x.path()).collect();
        for p in &paths {
            let min = minimal_monomial(&spec, p, StartRule::Unit).unwrap();
            for lam in Partition::all_bounded(p.len(), dmax - min.degree()) {
                let x = min.apply_partition(&lam).unwrap();
                prop_assert!(x.satisfies_dc(), "{x} from {min} + {lam:?}");
                prop_assert!(x.is_sorted());
                rebuilt.insert(x);
            }
        }
        prop_assert_eq!(rebuilt, all);
    }

    /// For the edge weights, `x` satisfies DC iff `x^+` satisfies the shifted
    /// conditions `r_{t+1} - r_t >= E - 1`; the staircase lowers the degree by
    /// `n(n-1)/2`.
    #[test]
    fn staircase_shifts_difference_conditions(
        l in 1usize..=4,
        last in any::<bool>(),
        raw in prop::collection::vec((0usize..64, 0i64..3), 1..7),
    ) {
        let m = if last { l } else { 1 };
        let spec = AlgebraSpec::type_a(l, m).unwrap();
        let colors = spec.colors();
        let mut r = 0;
        let factors: Vec<Factor> = raw
            .iter()
            .enumerate()
            .map(|(t, &(c, step))| {
                r += step + i64::from(t > 0);
                Factor::new(colors[c % colors.len()], r.max(1) + t as i64)
            })
            .collect();
        let x = Monomial::transient(spec, factors).unwrap();
        let plus = x.staircase(Direction::Plus).unwrap();
        let dc_prime = plus
            .factors()
            .windows(2)
            .all(|p| p[1].r - p[0].r >= energy(&spec, p[1].color, p[0].color) - 1);
        prop_assert_eq!(x.satisfies_dc(), dc_prime);
        let n = x.len() as i64;
        prop_assert_eq!(plus.degree(), x.degree() - n * (n - 1) / 2);
        prop_assert_eq!(plus.staircase(Direction::Minus).unwrap(), x);
    }

    /// Allowing more first colors never lowers a coefficient.
    #[test]
    fn wider_initial_conditions_dominate((spec, w) in spec_and_weight(3, 2)) {
        let (l, m) = (spec.rank(), spec.m());
        let chi = |ic| enumerate_character(&EnumRequest::new(spec, ic, w.clone(), 16));
        let zero = chi(ICVariant::Zero);
        for i in 1..=m {
            for j in m..=l {
                let inner = chi(ICVariant::IJ { i, j });
                for (a, b) in zero.coeffs().iter().zip(inner.coeffs()) {
                    prop_assert!(a <= b);
                }
                for (i2, j2) in [(i.saturating_sub(1).max(1), j), (i, (j + 1).min(l))] {
                    let outer = chi(ICVariant::IJ { i: i2, j: j2 });
                    for (a, b) in inner.coeffs().iter().zip(outer.coeffs()) {
                        prop_assert!(a <= b, "ij:{i},{j} vs ij:{i2},{j2}");
                    }
                }
            }
        }
    }

    /// `B_{i+1,j}` and `B_{i,j-1}` meet in `B_{i+1,j-1}`.
    #[test]
    fn ij_sets_intersect((spec, w) in spec_and_weight(4, 2)) {
        let (l, m) = (spec.rank(), spec.m());
        let dmax = 10;
        for i in 1..m {
            for j in m + 1..=l {
                let a = basis(spec, ICVariant::IJ { i: i + 1, j }, &w, dmax);
                let b = basis(spec, ICVariant::IJ { i, j: j - 1 }, &w, dmax);
                let c = basis(spec, ICVariant::IJ { i: i + 1, j: j - 1 }, &w, dmax);
                let meet: BTreeSet<_> = a.intersection(&b).cloned().collect();
                prop_assert_eq!(meet, c);
            }
        }
    }

    /// Inclusion-exclusion over the restricted first colors of `G'`.
    #[test]
    fn restricted_inclusion_exclusion(n in prop::collection::vec(0i64..=3, 4)) {
        let n = Weight(n);
        let q = 16;
        let f = |s| restricted_char(s, &n, q).unwrap();
        let lhs = f(RestrictedSet::PrimeU4B4B2);
        let rhs = &(&f(RestrictedSet::PrimeU4B2) + &f(RestrictedSet::PrimeB4B2)) - &f(RestrictedSet::PrimeB2);
        prop_assert_eq!(lhs.coeffs(), rhs.coeffs());
        let spec = AlgebraSpec::type_d(4).unwrap();
        let oracle = |s: RestrictedSet| {
            enumerate_character(
                &EnumRequest::new(spec, ICVariant::Restricted(s), n.clone(), q).with_colors(s.colors()),
            )
        };
        let o = &(&oracle(RestrictedSet::PrimeU4B2) + &oracle(RestrictedSet::PrimeB4B2)) - &oracle(RestrictedSet::PrimeB2);
        let full = oracle(RestrictedSet::PrimeU4B4B2);
        prop_assert_eq!(full.coeffs(), o.coeffs());
        prop_assert_eq!(full.coeffs(), lhs.coeffs());
    }
}

/// The `LambdaK` initial conditions agree with their `IJ`/`Zero` forms on
/// every color, for all `l <= 5` and all `m`.
#[test]
fn lambda_dictionary() {
    for l in 1..=5 {
        for m in 1..=l {
            let spec = AlgebraSpec::type_a(l, m).unwrap();
            for k in 0..=l {
                let expect = if k == 0 {
                    ICVariant::IJ { i: 1, j: l }
                } else if k == m {
                    ICVariant::Zero
                } else if k < m {
                    ICVariant::IJ { i: k + 1, j: l }
                } else {
                    ICVariant::IJ { i: 1, j: k - 1 }
                };
                for c in spec.colors() {
                    let x = Monomial::new(spec, vec![Factor::new(c, 1)]).unwrap();
                    assert_eq!(
                        x.satisfies_ic(&ICVariant::LambdaK(k)).unwrap(),
                        x.satisfies_ic(&expect).unwrap(),
                        "A{l} m={m} k={k} {c}"
                    );
                }
            }
        }
    }
}

#[test]
fn d4_lambda_dictionary() {
    let spec = AlgebraSpec::type_d(4).unwrap();
    let routes = [
        (0, ICVariant::Gamma(Color::Unbar(2))),
        (1, ICVariant::Zero),
        (3, ICVariant::Gamma(Color::Unbar(4))),
        (4, ICVariant::Gamma(Color::Bar(4))),
    ];
    for (k, ic) in routes {
        for c in spec.colors() {
            let x = Monomial::new(spec, vec![Factor::new(c, 1)]).unwrap();
            assert_eq!(
                x.satisfies_ic(&ICVariant::LambdaK(k)).unwrap(),
                x.satisfies_ic(&ic).unwrap(),
                "k={k} {c}"
            );
        }
    }
}
