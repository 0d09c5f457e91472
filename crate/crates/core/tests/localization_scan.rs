use hfdlab::blockmonoid::enumerate_atoms;
use hfdlab::certify::{classify_exact, CertifyOptions};
use hfdlab::localization::{
    claim_star_witness, divisor_closed_generator_sets, localized_lattice, nagata_instance_check, InsertionSearch,
    LocalizationSetup,
};
use hfdlab::survey::survey_instances;
use hfdlab::{ClassSubset, FiniteAbelianGroup};

#[test]
fn localization_never_gains_half_factoriality() {
    let mut cases = 0;
    for cs in survey_instances(5) {
        let t = enumerate_atoms(&cs);
        let c = classify_exact(&t, &[2, 3, 4], &CertifyOptions::default()).unwrap();
        for gens in divisor_closed_generator_sets(&t, &c).into_iter().filter(|g| !g.is_empty()) {
            let setup = LocalizationSetup::new(&t, &c, &gens).unwrap();
            assert!(nagata_instance_check(&t, &setup, &[2, 3, 4]).unwrap().consistent());
            cases += 1;
        }
    }
    assert!(cases > 100);
}

#[test]
fn setup_is_idempotent_and_disjoint() {
    for cs in survey_instances(5) {
        let t = enumerate_atoms(&cs);
        let c = classify_exact(&t, &[], &CertifyOptions::default()).unwrap();
        for gens in divisor_closed_generator_sets(&t, &c) {
            let setup = LocalizationSetup::new(&t, &c, &gens).unwrap();
            let again = LocalizationSetup::new(&t, &c, setup.b()).unwrap();
            assert_eq!(setup.b(), again.b());
            assert_eq!(setup.c(), again.c());
            assert!(setup.b().iter().all(|a| !setup.c().contains(a)));
        }
    }
}

#[test]
fn insertion_witnesses_exist_at_four_times_the_order() {
    let mut found = 0;
    for cs in survey_instances(6) {
        let t = enumerate_atoms(&cs);
        let c = classify_exact(&t, &[], &CertifyOptions::default()).unwrap();
        for gens in divisor_closed_generator_sets(&t, &c).into_iter().filter(|g| !g.is_empty()) {
            let setup = LocalizationSetup::new(&t, &c, &gens).unwrap();
            if !localized_lattice(&t, &setup).preserves_length() {
                continue;
            }
            for g in setup.split_atoms(&t) {
                match claim_star_witness(&t, &setup, g, 4 * cs.group().order()).unwrap() {
                    InsertionSearch::Found(w) => {
                        assert!(w.verify(&t, &setup));
                        assert_eq!(w.factors.length(), w.units.length() + 1);
                        found += 1;
                    }
                    InsertionSearch::Exhausted { bound } => {
                        panic!("{} {:?} at {}: nothing up to {bound}", cs.group(), cs.classes(), t.render(g))
                    }
                }
            }
        }
    }
    assert_eq!(found, 132);
}

#[test]
fn recorded_insertion_fixtures() {
    let g = FiniteAbelianGroup::cyclic(4).unwrap();
    let t = enumerate_atoms(&ClassSubset::from_residues(&g, &[0, 1, 2]).unwrap());
    let c = classify_exact(&t, &[], &CertifyOptions::default()).unwrap();
    let at = |s: &str| t.position(&t.classes().parse_sequence(s).unwrap()).unwrap();
    let setup = LocalizationSetup::new(&t, &c, &[at("(0)"), at("(1,1,1,1)")]).unwrap();
    let InsertionSearch::Found(w) = claim_star_witness(&t, &setup, at("(2,2)"), 16).unwrap() else {
        panic!("expected a witness");
    };
    assert_eq!(w.render(&t), "(2,2)(1,1,1,1) = (1,1,2)^2");
}
