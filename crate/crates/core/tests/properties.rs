use num_rational::BigRational;
use proptest::prelude::*;

use loopwitt::coeffalg::{b_add, b_mul, eval_psi, ideal_membership};
use loopwitt::linalg::{Span, SparseVec};
use loopwitt::loopalg::jacobi_residual;
use loopwitt::{BElem, BKind, BPresentation, BRef, Degree, GaussRat, LoopElem, Matrix};

fn pres(kind: u8) -> BRef {
    let q = |s: &str| s.parse::<GaussRat>().unwrap();
    match kind {
        0 => BPresentation::trivial(),
        1 => BPresentation::polyquot(vec![q("-8"), q("12"), q("-6"), q("1")], q("2")).unwrap(),
        _ => BPresentation::laurent(q("3")).unwrap(),
    }
}

/// Rationals spanning the inline range and well past it.
fn big_scalar() -> impl Strategy<Value = GaussRat> {
    let part = (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| GaussRat::frac(n, d));
    (part.clone(), part, any::<bool>()).prop_map(|(re, im, complex)| {
        if complex {
            &re + &(&im * &GaussRat::i())
        } else {
            re
        }
    })
}

fn small_scalar() -> impl Strategy<Value = GaussRat> {
    (-4i64..=4, 1i64..=3, -2i64..=2)
        .prop_map(|(n, d, im)| &GaussRat::frac(n, d) + &(&GaussRat::from_int(im) * &GaussRat::i()))
}

fn belem(p: BRef) -> impl Strategy<Value = BElem> {
    prop::collection::vec((-2i64..=3, small_scalar()), 0..4).prop_map(move |terms| {
        let mut acc = BElem::zero(&p);
        for (e, c) in terms {
            // Negative powers only exist in the Laurent ring, and the
            // trivial ring has no generator at all.
            let m = match p.kind() {
                BKind::Trivial => BElem::one(&p),
                BKind::Laurent => BElem::monomial(&p, e).unwrap(),
                _ => BElem::monomial(&p, e.abs()).unwrap(),
            };
            acc = b_add(&acc, &m.scale(&c)).unwrap();
        }
        acc
    })
}

fn degree(n: usize) -> impl Strategy<Value = Degree> {
    prop::collection::vec(-2i64..=2, n).prop_map(Degree)
}

/// A homogeneous element with its degree, which the element alone does not
/// determine when its coefficient vanishes.
fn homogeneous_at(n: usize, p: BRef) -> impl Strategy<Value = (Degree, LoopElem)> {
    (
        degree(n),
        prop::collection::vec(small_scalar(), n),
        any::<bool>(),
        belem(p.clone()),
    )
        .prop_map(move |(r, u, is_t, b)| {
            let x = if is_t {
                LoopElem::t(r.clone(), b)
            } else {
                LoopElem::d(&u, r.clone(), b).unwrap()
            };
            (r, x)
        })
}

fn homogeneous(n: usize, p: BRef) -> impl Strategy<Value = LoopElem> {
    homogeneous_at(n, p).prop_map(|(_, x)| x)
}

fn element(n: usize, p: BRef) -> impl Strategy<Value = LoopElem> {
    prop::collection::vec(homogeneous(n, p.clone()), 1..3).prop_map(move |xs| {
        xs.iter()
            .skip(1)
            .fold(xs[0].clone(), |acc, x| acc.try_add(x).unwrap())
    })
}

fn rank_and_pres() -> impl Strategy<Value = (usize, BRef)> {
    (1usize..=3, 0u8..3).prop_map(|(n, k)| (n, pres(k)))
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(64)
    })]

    #[test]
    fn scalar_ops_match_big_rationals(x in big_scalar(), y in big_scalar()) {
        let (a, b, c, d) = (x.re(), x.im(), y.re(), y.im());
        let prod = &x * &y;
        prop_assert_eq!(prod.re(), &a * &c - &b * &d);
        prop_assert_eq!(prod.im(), &a * &d + &b * &c);
        let sum = &x + &y;
        prop_assert_eq!(sum.re(), &a + &c);
        prop_assert_eq!(sum.im(), &b + &d);
        prop_assert_eq!(&x - &x, GaussRat::zero());
        if !y.is_zero() {
            prop_assert_eq!(&x.checked_div(&y).unwrap() * &y, x.clone());
        }
        prop_assert_eq!(GaussRat::new(a, b), x.clone());
        let back: GaussRat = x.to_exact_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn scalar_ring_axioms(x in big_scalar(), y in big_scalar(), z in big_scalar()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        let zero = BigRational::default();
        prop_assert_eq!(GaussRat::new(zero.clone(), zero), GaussRat::zero());
    }

    #[test]
    fn psi_is_a_ring_homomorphism(
        (p, x, y) in (0u8..3).prop_flat_map(|k| { let p = pres(k); (Just(p.clone()), belem(p.clone()), belem(p)) })
    ) {
        prop_assert_eq!(eval_psi(&b_mul(&x, &y).unwrap()), &eval_psi(&x) * &eval_psi(&y));
        prop_assert_eq!(eval_psi(&b_add(&x, &y).unwrap()), &eval_psi(&x) + &eval_psi(&y));
        prop_assert_eq!(eval_psi(&BElem::one(&p)), GaussRat::one());
    }

    #[test]
    fn kernel_powers_are_ideals(x in belem(pres(1)), y in belem(pres(1)), z in belem(pres(1))) {
        let p = pres(1);
        // x - ψ(x) lies in M; products of j such elements lie in M^j.
        let centred = |b: &BElem| b_add(b, &BElem::scalar(&p, -eval_psi(b))).unwrap();
        let (a, b) = (centred(&x), centred(&y));
        prop_assert!(ideal_membership(&a, 1).unwrap());
        let ab = b_mul(&a, &b).unwrap();
        prop_assert!(ideal_membership(&ab, 2).unwrap());
        prop_assert!(ideal_membership(&b_mul(&ab, &z).unwrap(), 2).unwrap());
        // M^3 = 0 in this quotient.
        prop_assert!(b_mul(&ab, &centred(&z)).unwrap().is_zero());
        prop_assert_eq!(ideal_membership(&x, 1).unwrap(), eval_psi(&x).is_zero());
    }

    #[test]
    fn bracket_is_antisymmetric_and_jacobi(
        (x, y, z) in rank_and_pres().prop_flat_map(|(n, p)| (element(n, p.clone()), element(n, p.clone()), element(n, p)))
    ) {
        let xy = x.bracket(&y).unwrap();
        let yx = y.bracket(&x).unwrap();
        prop_assert!(xy.try_add(&yx).unwrap().is_zero());
        prop_assert!(x.bracket(&x).unwrap().is_zero());
        prop_assert!(jacobi_residual(&x, &y, &z).unwrap().is_zero());
    }

    #[test]
    fn bracket_is_homogeneous(
        ((r, x), (s, y)) in rank_and_pres().prop_flat_map(|(n, p)| (homogeneous_at(n, p.clone()), homogeneous_at(n, p)))
    ) {
        let z = x.bracket(&y).unwrap();
        let rs = Degree(r.0.iter().zip(&s.0).map(|(a, b)| a + b).collect());
        for d in z.degrees() {
            prop_assert_eq!(&d, &rs);
        }
    }

    #[test]
    fn span_dimension_is_matrix_rank(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 5), 0..7)) {
        let mut span: Span<usize> = Span::new();
        for row in &rows {
            let v: SparseVec<usize> = row
                .iter()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(|(k, x)| (k, GaussRat::from_int(*x)))
                .collect();
            span.insert(&v);
        }
        let m = Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|x| GaussRat::from_int(*x)).collect()).collect(),
        );
        let rank = if rows.is_empty() { 0 } else { m.rank() };
        prop_assert_eq!(span.dim(), rank);
        for row in &rows {
            let v: SparseVec<usize> = row
                .iter()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(|(k, x)| (k, GaussRat::from_int(*x)))
                .collect();
            prop_assert!(span.contains(&v));
        }
    }
}
