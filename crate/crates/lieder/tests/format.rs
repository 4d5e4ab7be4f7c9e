use lieder::format::{to_json, AlgebraFile, CertificateFile, RationalText, SpecFile};
use lieder_core::catalog::{self, FamilyId};
use lieder_core::maxrank;

#[test]
fn catalog_algebras_round_trip() {
    for family in catalog::standard_corpus() {
        let nil = family.nilradical().unwrap();
        let text = to_json(&AlgebraFile::from_algebra(&nil, None));
        let parsed: AlgebraFile = serde_json::from_str(&text).unwrap();
        assert_eq!(
            parsed.to_algebra().unwrap().structure_constants(),
            nil.structure_constants(),
            "{family}"
        );
        assert_eq!(to_json(&parsed), text);
    }
}

#[test]
fn certificate_round_trip_and_recheck() {
    let spec = catalog::restrict_selection(
        &catalog::spec_of(FamilyId::Filiform(5)).unwrap(),
        catalog::subset_selection(2, &[1]),
    )
    .unwrap();
    let ext = maxrank::build_solvable(&spec).unwrap();
    let (cert, trace) = maxrank::construct_outer(&ext, Some(spec.alpha())).unwrap();
    let file = CertificateFile::verified(ext.algebra(), ext.nil_dim(), &cert, &trace);
    let parsed: CertificateFile = serde_json::from_str(&to_json(&file)).unwrap();
    assert_eq!(parsed, file);
    assert!(parsed.reverify().unwrap().accepted());

    // Any tampering with the derivation is caught.
    let mut tampered = parsed.clone();
    let d = tampered.derivation.as_mut().unwrap();
    d[1] = RationalText(lieder_core::exactlin::int(5));
    assert!(!tampered.reverify().unwrap().accepted());
}

#[test]
fn emitted_rationals_are_canonical() {
    let spec = catalog::random_spec(3, FamilyId::Filiform(4), 1).unwrap();
    let text = to_json(&SpecFile::from_spec(&spec));
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    for row in value["selection"].as_array().unwrap() {
        for entry in row.as_array().unwrap() {
            let s = entry.as_str().unwrap();
            assert!(!s.ends_with("/1") && !s.contains("/-"), "{s}");
            let r: RationalText = s.parse().unwrap();
            assert_eq!(String::from(r), s);
        }
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"dim": 1, "brackets": [], "extra": 1}"#;
    assert!(serde_json::from_str::<AlgebraFile>(text)
        .unwrap_err()
        .to_string()
        .contains("extra"));
}
