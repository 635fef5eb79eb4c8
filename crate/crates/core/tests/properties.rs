use pkh_core::homalg::group_ring::{cyclic_mul_q, cyclotomic, idempotent};
use pkh_core::homalg::qpoly::Poly;
use pkh_core::homalg::{smith_normal_form, SparseMat};
use pkh_core::num::{divisors, int, Int, Rat};
use pkh_core::oracles;
use pkh_core::poly::LaurentPoly;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..7, c), r))
}

proptest! {
    #[test]
    fn smith_form_is_equivalent_and_divisible(m in matrix()) {
        let a = SparseMat::from_dense(&m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<Vec<Int>>>());
        let s = smith_normal_form(&a, true);
        let u = SparseMat::from_dense(s.u.as_ref().unwrap());
        let v = SparseMat::from_dense(s.v.as_ref().unwrap());
        let d = u.mul(&a).mul(&v);
        let want = SparseMat::from_triplets(a.rows, a.cols, s.diag.iter().enumerate().map(|(k, x)| (k, k, x.clone())));
        prop_assert_eq!(d, want);
        prop_assert!(s.diag.iter().all(|x| *x > int(0)));
        prop_assert!(s.diag.windows(2).all(|w| &w[1] % &w[0] == int(0)));
        // U and V are unimodular: their own Smith forms are the identity
        for t in [&u, &v] {
            let st = smith_normal_form(t, false);
            prop_assert_eq!(st.rank(), t.rows);
            prop_assert!(st.diag.iter().all(|x| *x == int(1)));
        }
    }

    #[test]
    fn idempotents_split_the_group_algebra(n in 1usize..13) {
        let mut sum = vec![Rat::ZERO; n];
        for d in divisors(n as u64) {
            let e = idempotent(d as usize, n).unwrap();
            prop_assert_eq!(cyclic_mul_q(&e, &e), e.clone());
            for (x, y) in sum.iter_mut().zip(&e) {
                *x += y;
            }
        }
        let mut one = vec![Rat::ZERO; n];
        one[0] = Rat::ONE;
        prop_assert_eq!(sum, one);
    }

    #[test]
    fn cyclotomics_factor_t_n_minus_one(n in 1usize..40) {
        let prod = divisors(n as u64).into_iter().fold(Poly::<Int>::one(), |acc, d| acc.mul(&cyclotomic(d as usize)));
        prop_assert_eq!(prod, Poly::t_pow_minus_one(n));
    }

    #[test]
    fn orbit_modules_sum_to_the_unknot_power(p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1u32..4, k in 1u32..4) {
        prop_assume!(p.pow(n) * k as u64 <= 64);
        let mut total = LaurentPoly::zero();
        for s in 0..=n {
            let m = oracles::qdim_m(p, n, s, k, 0).unwrap();
            prop_assert!(m.terms().all(|(_, c)| *c >= int(0)));
            total = total.add(&m.scale(&int(p.pow(s) as i64)));
        }
        prop_assert_eq!(total, LaurentPoly::unknot().pow(k * p.pow(n) as u32));
    }
}
