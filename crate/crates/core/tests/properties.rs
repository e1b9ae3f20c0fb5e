use std::sync::OnceLock;

use csl_lab::arith::{coprime, factorize, is_prime};
use csl_lab::counting::{check_multiplicative, check_supermultiplicative, Series, WitnessKind};
use csl_lab::csl::{csl_lattice, is_coincidence, mcsl, sigma};
use csl_lab::enumerate::{enumerate_cubic, enumerate_square, EnumerationResult};
use csl_lab::isometry::{den, PointGroup};
use csl_lab::linalg::{int, IntMatrix};
use csl_lab::ssl::{is_similar, primitive_ssl};
use csl_lab::theorems::{check_divisibility, check_intersection_identity};
use proptest::prelude::*;

struct Pool {
    pool: EnumerationResult,
    p: PointGroup,
}

fn square() -> &'static Pool {
    static CELL: OnceLock<Pool> = OnceLock::new();
    CELL.get_or_init(|| {
        let pool = enumerate_square(300).unwrap();
        let p = PointGroup::of(&pool.lattice).unwrap();
        Pool { pool, p }
    })
}

fn cubic() -> &'static Pool {
    static CELL: OnceLock<Pool> = OnceLock::new();
    CELL.get_or_init(|| {
        let pool = enumerate_cubic(45).unwrap();
        let p = PointGroup::of(&pool.lattice).unwrap();
        Pool { pool, p }
    })
}

fn pools() -> [&'static Pool; 2] {
    [square(), cubic()]
}

fn unimodular(d: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(d);
    for &(i, j, k) in ops {
        if i % d == j % d {
            continue;
        }
        let mut e = IntMatrix::identity(d);
        e.set(i % d, j % d, int(k));
        u = u.mul(&e).unwrap();
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn twisted_representatives_share_everything(which in 0usize..2, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let Pool { pool, p } = pools()[which];
        let l = &pool.lattice;
        let rec = i.get(&pool.records);
        let q = j.get(p.elements());
        let rq = rec.isometry.compose(q);
        prop_assert!(is_coincidence(l, &rq).unwrap());
        prop_assert_eq!(sigma(l, &rq).unwrap(), rec.sigma);
        prop_assert_eq!(&csl_lattice(l, &rq).unwrap(), &rec.csl);
        prop_assert_eq!(den(l, &rq).unwrap(), den(l, &rec.isometry).unwrap());
        prop_assert_eq!(sigma(l, &rec.isometry.inverse()).unwrap(), rec.sigma);
        prop_assert!(rec.csl.is_sublattice_of(l).unwrap());
        prop_assert!(rec.csl.is_sublattice_of(&l.transform(rec.isometry.mat()).unwrap()).unwrap());
    }

    #[test]
    fn products_stay_coincidences(which in 0usize..2, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let Pool { pool, .. } = pools()[which];
        let l = &pool.lattice;
        let (r1, r2) = (&a.get(&pool.records).isometry, &b.get(&pool.records).isometry);
        let prod = r1.compose(r2);
        prop_assert!(is_coincidence(l, &prod).unwrap());
        prop_assert!(check_divisibility(l, r1, r2).unwrap());
        let (m, n) = (sigma(l, r1).unwrap(), sigma(l, r2).unwrap());
        if coprime(m, n) {
            prop_assert_eq!(sigma(l, &prod).unwrap(), m * n);
            prop_assert!(check_intersection_identity(l, r1, r2).unwrap());
        }
    }

    #[test]
    fn mcsl_ignores_order(which in 0usize..2, idx in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let Pool { pool, .. } = pools()[which];
        let rs: Vec<_> = idx.iter().map(|i| i.get(&pool.records).isometry.clone()).collect();
        let base = mcsl(&pool.lattice, &rs).unwrap();
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let other: Vec<_> = perm.iter().map(|&k| rs[k].clone()).collect();
            let rec = mcsl(&pool.lattice, &other).unwrap();
            prop_assert_eq!(&rec.mcsl, &base.mcsl);
            prop_assert_eq!(rec.sigma_multi, base.sigma_multi);
        }
    }

    #[test]
    fn similar_sublattices_survive_rebasing(
        which in 0usize..2,
        i in any::<prop::sample::Index>(),
        ops in prop::collection::vec((0usize..3, 0usize..3, -3i64..=3), 0..6),
    ) {
        let Pool { pool, .. } = pools()[which];
        let l = &pool.lattice;
        let rec = i.get(&pool.records);
        prop_assume!(rec.sigma <= if l.dim() == 2 { 300 } else { 15 });
        let s = primitive_ssl(l, &rec.isometry).unwrap();
        let u = unimodular(l.dim(), &ops).to_rational();
        let rebased = csl_lab::lattice::Lattice::from_basis(&s.sublattice.basis().mul(&u).unwrap()).unwrap();
        prop_assert_eq!(&rebased, &s.sublattice);
        prop_assert!(is_similar(l, &s.sublattice).unwrap());
        prop_assert!(is_similar(l, &rebased).unwrap());
    }

    #[test]
    fn multiplicative_series_have_no_witnesses(values in prop::collection::vec(0u64..4, 30), bump in 2u64..=60) {
        // a(p^k) drawn at random, extended multiplicatively
        let primes: Vec<u64> = (2..=60).filter(|&n| is_prime(n)).collect();
        let local = |p: u64, k: u32| values[(primes.iter().position(|&q| q == p).unwrap() + k as usize) % values.len()];
        let a: Vec<u64> = (1..=60u64).map(|m| factorize(m).iter().map(|&(p, k)| local(p, k)).product()).collect();
        let s = Series::new("a", a.clone());
        prop_assert!(check_multiplicative(&s).is_empty());
        prop_assert!(check_supermultiplicative(&s).is_none());

        let mut raised = a;
        raised[bump as usize - 1] += 1;
        let w = check_multiplicative(&Series::new("a", raised));
        let at_bump: Vec<_> = w.iter().filter(|w| w.m * w.n == bump).collect();
        prop_assert_eq!(at_bump.is_empty(), factorize(bump).len() < 2);
        prop_assert!(at_bump.iter().all(|w| w.kind == WitnessKind::StrictSupermultiplicative));
    }
}
