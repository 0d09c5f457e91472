//! The fixed worked-example suite behind `verify-examples`.

use hfdlab::blockmonoid::enumerate_atoms;
use hfdlab::certify::{classify_exact, CertifyOptions};
use hfdlab::quadratic::{parse_quadratic, verify_atomic_equality, verify_polynomial_example};
use hfdlab::report::SCHEMA;
use hfdlab::{ClassSubset, FiniteAbelianGroup, Result};
use serde_json::{json, Value};

pub struct Fixture {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
}

pub fn sqrt14_fixture(threes: usize) -> Result<Fixture> {
    let three = parse_quadratic("3", 14)?;
    let lhs = vec![three; threes];
    let rhs = vec![parse_quadratic("5+2i14", 14)?, parse_quadratic("5-2i14", 14)?];
    let check = verify_atomic_equality(&lhs, &rhs)?;
    let passed = check.equal && check.all_atoms && check.lengths == (4, 2) && check.irredundant;
    Ok(Fixture {
        name: "sqrt-14 unbalanced equality",
        passed,
        detail: json!({
            "equal": check.equal,
            "all_atoms": check.all_atoms,
            "lengths": [check.lengths.0, check.lengths.1],
            "irredundant": check.irredundant,
        }),
    })
}

pub fn polynomial_fixture() -> Result<Fixture> {
    let ex = verify_polynomial_example()?;
    let atoms: Vec<Value> = ex.atoms.iter().map(|(p, ok)| json!({ "factor": p.to_string(), "atom": ok })).collect();
    Ok(Fixture {
        name: "sqrt-3 polynomial equality",
        passed: ex.passed(),
        detail: json!({
            "lhs_product": ex.lhs_product.to_string(),
            "rhs_product": ex.rhs_product.to_string(),
            "atoms": atoms,
            "irredundant": ex.check.irredundant,
            "lengths": [ex.check.lengths.0, ex.check.lengths.1],
            "two_is_bad": ex.two_is_bad(),
        }),
    })
}

pub fn cyclic_six_fixture() -> Result<Fixture> {
    let g = FiniteAbelianGroup::cyclic(6)?;
    let cs = ClassSubset::from_residues(&g, &[2, 3, 4])?;
    let t = enumerate_atoms(&cs);
    let c = classify_exact(&t, &[], &CertifyOptions::default())?;
    let literals: Vec<String> = (0..t.len()).map(|i| t.render(i)).collect();
    let mut expected_atoms = vec!["(3,3)", "(2,2,2)", "(4,4,4)", "(2,4)"];
    let mut got_atoms: Vec<&str> = literals.iter().map(String::as_str).collect();
    expected_atoms.sort();
    got_atoms.sort();
    let good: Vec<String> = c.good_atoms().iter().map(|&i| t.render(i)).collect();

    let idx = |s: &str| t.position(&cs.parse_sequence(s).expect("fixture literal")).expect("fixture atom");
    let mut two_sides = vec![0u32; t.len()];
    two_sides[idx("(2,2,2)")] = 1;
    two_sides[idx("(4,4,4)")] = 1;
    let mut mixed = vec![0u32; t.len()];
    mixed[idx("(2,4)")] = 3;
    let witness_ok = c.bad_atoms().iter().all(|&a| {
        c.witness(a).is_some_and(|w| w.lhs().counts() == two_sides && w.rhs().counts() == mixed)
    });
    let passed = expected_atoms == got_atoms && good == ["(3,3)"] && c.bad_atoms().len() == 3 && witness_ok;
    Ok(Fixture {
        name: "Z/6 classes 2,3,4",
        passed,
        detail: json!({
            "atoms": literals,
            "good": good,
            "witness": c.bad_atoms().first().and_then(|&a| c.witness(a)).map(|w| w.render(&t)),
            "witness_matches": witness_ok,
        }),
    })
}

pub fn run_suite() -> Result<(bool, Value)> {
    let fixtures = [sqrt14_fixture(4)?, polynomial_fixture()?, cyclic_six_fixture()?];
    let all = fixtures.iter().all(|f| f.passed);
    let rows: Vec<Value> =
        fixtures.iter().map(|f| json!({ "name": f.name, "passed": f.passed, "detail": f.detail })).collect();
    Ok((all, json!({ "schema": SCHEMA, "kind": "examples", "passed": all, "fixtures": rows })))
}
