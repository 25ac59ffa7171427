//! Property checks over random holonomies, cuts and representations.

use gerbe_core::detline::{delta_triviality, CechTriple};
use gerbe_core::linalg::random_special_unitary;
use gerbe_core::moduli::{conjugate, holonomy, irreducibility_check, relation_check, LoopWord, SurfaceGroupRep};
use gerbe_core::spectral::{band, dirac_spectrum, Holonomy, SpectralCut};
use gerbe_core::seeded_rng;
use proptest::prelude::*;

fn phases() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 1..4)
}

/// Three ordered cuts with denominator 7, away from the window edge.
fn cuts() -> impl Strategy<Value = [SpectralCut; 3]> {
    prop::collection::btree_set(-20i64..20, 3).prop_map(|s| {
        let v: Vec<i64> = s.into_iter().collect();
        [SpectralCut::new(v[0], 7), SpectralCut::new(v[1], 7), SpectralCut::new(v[2], 7)]
    })
}

fn word(genus: usize) -> impl Strategy<Value = LoopWord> {
    prop::collection::vec((1..=2 * genus, prop::bool::ANY), 1..8).prop_map(|letters| {
        LoopWord::new(letters.into_iter().map(|(g, inv)| (g, if inv { -1 } else { 1 })).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn band_additivity(p in phases(), c in cuts()) {
        let h = Holonomy::from_fractional_phases(&p).unwrap();
        let s = dirac_spectrum(&h, 4).unwrap();
        let lo = band(&s, &c[0], &c[1]);
        let hi = band(&s, &c[1], &c[2]);
        let all = band(&s, &c[0], &c[2]);
        if let (Ok(lo), Ok(hi), Ok(all)) = (lo, hi, all) {
            let joined: Vec<_> = lo.iter().chain(hi.iter()).map(|m| m.label()).collect();
            let whole: Vec<_> = all.iter().map(|m| m.label()).collect();
            prop_assert_eq!(joined, whole);
        }
    }

    #[test]
    fn delta_is_trivial(p in phases(), c in cuts()) {
        let h = Holonomy::from_fractional_phases(&p).unwrap();
        let s = dirac_spectrum(&h, 4).unwrap();
        if let Ok(t) = CechTriple::new(&s, c) {
            prop_assert!((delta_triviality(&t).unwrap() - 1.0).norm() <= 1e-12);
        }
    }

    #[test]
    fn conjugation_preserves_verdict(seed in 0u64..1000) {
        let mut rng = seeded_rng(seed);
        let r = SurfaceGroupRep::su2_anticommuting().unwrap();
        let s = conjugate(&r, &random_special_unitary(2, &mut rng)).unwrap();
        let (a, b) = (irreducibility_check(&r), irreducibility_check(&s));
        prop_assert_eq!(a.irreducible, b.irreducible);
        prop_assert_eq!(a.commutant_dim, b.commutant_dim);
        prop_assert!(relation_check(&s) <= 1e-12);
        let blocks = conjugate(&SurfaceGroupRep::su4_blocks().unwrap(), &random_special_unitary(4, &mut rng)).unwrap();
        prop_assert_eq!(irreducibility_check(&blocks).commutant_dim, 4);
    }

    #[test]
    fn words_multiply(u in word(2), v in word(2)) {
        let r = SurfaceGroupRep::su2_anticommuting().unwrap();
        let joined = holonomy(&r, &u.concat(&v)).unwrap();
        let product = holonomy(&r, &u).unwrap() * holonomy(&r, &v).unwrap();
        prop_assert!((joined - product).iter().all(|z| z.norm() <= 1e-12));
    }
}
