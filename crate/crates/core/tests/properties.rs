//! Randomized checks of algebraic identities.

use knotwist::fpgroup::{abelianization_map, fox_derivative, FreeWord, GroupRingElement};
use knotwist::knot_codec::{braid_to_presentation, parse_braid};
use knotwist::laurent::pid::module_order_pid;
use knotwist::laurent::{associated, gcd_polys, normalize_unit, LaurentPoly, PolyMatrix};
use knotwist::perm::{rep_classes, Permutation, Rep};
use knotwist::scalar::{Fp, Integer, Scalar};
use knotwist::twisted::{build_complex, routes_agree, twisted_alexander, TwistRing};
use proptest::prelude::*;

type F13 = Fp<13>;

fn signed_word(gens: i32, max_len: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((1..=gens, any::<bool>()), 0..max_len)
        .prop_map(|v| FreeWord::from_signed(&v.into_iter().map(|(g, s)| if s { g } else { -g }).collect::<Vec<_>>()))
}

fn poly<C: Scalar>(max_terms: usize) -> impl Strategy<Value = LaurentPoly<C>> {
    (-2i64..3, prop::collection::vec(-4i64..5, 1..max_terms))
        .prop_map(|(low, c)| LaurentPoly::from_coeffs(low, c.into_iter().map(C::from_i64).collect()))
}

fn matrix<C: Scalar>(n: usize, m: usize) -> impl Strategy<Value = PolyMatrix<C>> {
    prop::collection::vec(prop::collection::vec(poly::<C>(3), m), n).prop_map(|rows| PolyMatrix::from_rows(1, rows))
}

fn permutation(k: usize) -> impl Strategy<Value = Permutation> {
    Just((0..k).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(&v).unwrap())
}

/// Braid words on three strands.
fn braid() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 1..7).prop_map(|v| {
        let letters: Vec<String> = v.iter().map(|x: &i32| x.to_string()).collect();
        format!("3: {}", letters.join(" "))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_reduce_idempotent(w in signed_word(3, 12)) {
        let r = w.free_reduce();
        prop_assert!(r.is_reduced());
        prop_assert!(r.len() <= w.len());
        prop_assert_eq!(r.free_reduce(), r);
    }

    #[test]
    fn fox_product_rule(u in signed_word(3, 8), v in signed_word(3, 8), j in 0usize..3) {
        let (u, v) = (u.free_reduce(), v.free_reduce());
        let lhs = fox_derivative(&u.mul(&v), j);
        let rhs = fox_derivative(&u, j).add(&GroupRingElement::word(u.clone(), 1).mul(&fox_derivative(&v, j)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fundamental_formula(w in signed_word(2, 10)) {
        // sum_j (d w / d x_j)(x_j - 1) = w - 1
        let w = w.free_reduce();
        let mut total = GroupRingElement::zero();
        for j in 0..2 {
            let xj = GroupRingElement::word(FreeWord::generator(j), 1).add(&GroupRingElement::word(FreeWord::empty(), -1));
            total = total.add(&fox_derivative(&w, j).mul(&xj));
        }
        let want = GroupRingElement::word(w, 1).add(&GroupRingElement::word(FreeWord::empty(), -1));
        prop_assert_eq!(total, want);
    }

    #[test]
    fn det_multiplicative_f13(a in matrix::<F13>(3, 3), b in matrix::<F13>(3, 3)) {
        prop_assert_eq!(a.mul(&b).det(), &a.det() * &b.det());
    }

    #[test]
    fn det_multiplicative_z(a in matrix::<Integer>(2, 2), b in matrix::<Integer>(2, 2)) {
        prop_assert_eq!(a.mul(&b).det(), &a.det() * &b.det());
    }

    #[test]
    fn gcd_scales(f in poly::<F13>(4), g in poly::<F13>(4), h in poly::<F13>(3)) {
        prop_assume!(!h.is_zero() && !(f.is_zero() && g.is_zero()));
        let lhs = gcd_polys(&(&f * &h), &(&g * &h));
        let rhs = &h * &gcd_polys(&f, &g);
        prop_assert!(associated(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gcd_scales_over_z(f in poly::<Integer>(4), g in poly::<Integer>(4), h in poly::<Integer>(3)) {
        prop_assume!(!h.is_zero() && !(f.is_zero() && g.is_zero()));
        let lhs = gcd_polys(&(&f * &h), &(&g * &h));
        let rhs = &h * &gcd_polys(&f, &g);
        prop_assert!(associated(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gcd_reduction_compatible(f in poly::<Integer>(4), g in poly::<Integer>(4)) {
        let fp = f.reduce::<13>();
        let gp = g.reduce::<13>();
        // leading and trailing coefficients must survive reduction
        prop_assume!(!fp.is_zero() && !gp.is_zero());
        prop_assume!(fp.degree_span() == f.degree_span() && gp.degree_span() == g.degree_span());
        let gz = gcd_polys(&f, &g).reduce::<13>();
        let gf = gcd_polys(&fp, &gp);
        prop_assert!(gz.divides(&gf), "{} does not divide {}", gz, gf);
    }

    #[test]
    fn normalize_ignores_units(f in poly::<F13>(5), s in -3i64..4, c in 1i64..13) {
        let g = f.shift(&[s]).scale(&F13::from_i64(c));
        prop_assert_eq!(normalize_unit(&f).poly, normalize_unit(&g).poly);
        let n = normalize_unit(&f);
        prop_assert_eq!(normalize_unit(&n.poly).poly, n.poly);
    }

    #[test]
    fn order_matches_minors(b2 in matrix::<F13>(3, 2)) {
        // with B1 = 0 the module is the cokernel of B2, whose order is the
        // gcd of its maximal minors
        let b1 = PolyMatrix::<F13>::zeros(2, 1, 1);
        let order = module_order_pid(&b2, &b1).unwrap();
        prop_assert!(associated(&order, &b2.gcd_of_minors(2)), "{} vs {}", order, b2.gcd_of_minors(2));
    }

    #[test]
    fn canonical_form_is_conjugation_invariant(a in permutation(4), b in permutation(4), s in permutation(4)) {
        let rep = Rep::new(4, vec![a, b]);
        prop_assert_eq!(rep.canonical(), rep.conjugate_by(&s).canonical());
    }

    #[test]
    fn braid_closures(word in braid()) {
        let b = parse_braid(&word).unwrap();
        let p = braid_to_presentation(&b).unwrap();
        let phi = abelianization_map(&p).unwrap();
        // one meridian variable per cycle of the braid permutation
        let perm = b.permutation();
        let mut seen = vec![false; perm.len()];
        let mut cycles = 0;
        for i in 0..perm.len() {
            if !seen[i] {
                cycles += 1;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                }
            }
        }
        prop_assert_eq!(p.num_components, cycles);
        prop_assert_eq!(p.deficiency(), 1);
        for k in 1..=3 {
            for class in rep_classes(&p, k) {
                let c = build_complex::<F13>(&p, &class.rep, &phi).unwrap();
                prop_assert!(c.check_chain().is_ok());
                if phi.nvars == 1 {
                    prop_assert_ne!(routes_agree(&c).unwrap(), Some(false));
                    let z = twisted_alexander::<Integer>(&p, &class.rep, &phi).unwrap();
                    let f = twisted_alexander::<F13>(&p, &class.rep, &phi).unwrap();
                    prop_assert_eq!(normalize_unit(&z.poly.reduce::<13>()), f);
                }
            }
        }
    }

    #[test]
    fn wada_columns_agree_on_links(word in braid()) {
        let p = braid_to_presentation(&parse_braid(&word).unwrap()).unwrap();
        let phi = abelianization_map(&p).unwrap();
        for class in rep_classes(&p, 2) {
            let c = build_complex::<F13>(&p, &class.rep, &phi).unwrap();
            let pairs = knotwist::twisted::all_wada_pairs(&c);
            for w in pairs.iter().skip(1) {
                let lhs = &w.numerator * &pairs[0].denominator;
                let rhs = &pairs[0].numerator * &w.denominator;
                prop_assert!(associated(&lhs, &rhs));
            }
            let _ = <F13 as TwistRing>::delta0(&c);
        }
    }
}
