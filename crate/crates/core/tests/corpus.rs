use lieder_core::catalog::{self, FamilyId};
use lieder_core::certcheck;
use lieder_core::derivation;
use lieder_core::maxrank::{self, build_solvable, construct_outer, verify_theorem};
use lieder_core::torus;
use proptest::prelude::*;

fn max_rank_families() -> Vec<FamilyId> {
    catalog::standard_corpus()
        .into_iter()
        .filter(|f| catalog::spec_of(*f).is_ok())
        .collect()
}

#[test]
fn catalog_specs_match_their_nilradicals() {
    for family in max_rank_families() {
        let spec = catalog::spec_of(family).unwrap();
        let nil = maxrank::build_nilradical(&spec).unwrap();
        assert_eq!(
            nil.structure_constants(),
            family.nilradical().unwrap().structure_constants()
        );
        assert!(torus::has_max_rank(&nil).unwrap());
        assert!(maxrank::verify_nilradical_maximality(&spec));
        for (t, w) in catalog::additive_weights(&spec) {
            if t >= spec.k() {
                for (j, wj) in w.iter().enumerate() {
                    assert_eq!(wj, spec.alpha().alpha(t, j), "{family} e{}", t + 1);
                }
            }
        }
    }
}

#[test]
fn heisenberg_above_three_dimensions_is_not_max_rank() {
    for m in 2..=3 {
        let nil = FamilyId::Heisenberg(m).nilradical().unwrap();
        assert_eq!(torus::diagonal_derivations(&nil).dim(), m + 1);
        assert_eq!(nil.generator_count().unwrap(), 2 * m);
        assert!(matches!(
            catalog::spec_of(FamilyId::Heisenberg(m)),
            Err(catalog::CatalogError::NotMaxRank { .. })
        ));
    }
}

#[test]
fn theorem_on_every_proper_subset() {
    for family in max_rank_families() {
        let spec = catalog::spec_of(family).unwrap();
        assert_eq!(verify_theorem(&spec).unwrap().outer_dim, 0, "{family}");
        for subset in catalog::proper_subsets(spec.k()) {
            let sub = catalog::restrict_selection(&spec, catalog::subset_selection(spec.k(), &subset)).unwrap();
            let report = verify_theorem(&sub).unwrap();
            assert!(report.outer_dim >= 1, "{family} {subset:?}");
            assert!(report.certificate.unwrap().is_valid());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_selections_admit_certified_outer_derivations(seed in any::<u64>(), pick in 0usize..5) {
        let families: Vec<FamilyId> = max_rank_families().into_iter().filter(|f| {
            catalog::spec_of(*f).unwrap().k() >= 2
        }).collect();
        let family = families[pick % families.len()];
        let k = catalog::spec_of(family).unwrap().k();
        let s = 1 + (seed as usize) % (k - 1);
        let spec = catalog::random_spec(seed, family, s).unwrap();
        prop_assert_eq!(spec.s(), s);
        let ext = build_solvable(&spec).unwrap();
        let r = ext.algebra();
        let (cert, _) = match construct_outer(&ext, Some(spec.alpha())) {
            Ok(found) => found,
            Err(maxrank::ConstructError::ProofGap(d)) => (d.fallback.unwrap(), d.trace),
            Err(e) => panic!("{e}"),
        };
        prop_assert!(certcheck::verify_outer(r.dim(), r.structure_constants(), cert.derivation.matrix()).accepted());
        prop_assert!(derivation::outer_dimension(r).unwrap() >= 1);
    }

    #[test]
    fn random_spec_is_deterministic(seed in any::<u64>()) {
        let a = catalog::random_spec(seed, FamilyId::Abelian(3), 2).unwrap();
        let b = catalog::random_spec(seed, FamilyId::Abelian(3), 2).unwrap();
        prop_assert_eq!(a, b);
    }
}
