//! The JSON fixtures are the serialized core catalog. Set `SKEWCAT_BLESS=1` to rewrite them.

use std::path::PathBuf;

use skewcat_cli::InputDoc;
use skewcat_core::fixtures;
use skewcat_core::lincat::json::{action_to_doc, category_to_doc};
use skewcat_core::lincat::GActionOnCat;
use skewcat_core::linalg::Field;

#[test]
fn fixtures_match_the_catalog() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let bless = std::env::var_os("SKEWCAT_BLESS").is_some();
    for fx in fixtures::catalog(Field::Prime(101)) {
        let trivial = GActionOnCat::trivial(&fx.cat, fx.group().clone());
        let action = action_to_doc(&fx.cat, &fx.action);
        let doc = InputDoc {
            field: None,
            group: fx.group().to_doc(),
            category: category_to_doc(&fx.cat, None),
            action: (action != action_to_doc(&fx.cat, &trivial)).then_some(action),
            transversal: None,
        };
        let text = serde_json::to_string_pretty(&doc).unwrap() + "\n";
        let path = dir.join(format!("{}.json", fx.name));
        if bless {
            std::fs::write(&path, &text).unwrap();
        } else {
            let on_disk = std::fs::read_to_string(&path).unwrap();
            assert_eq!(on_disk, text, "{} is stale; rerun with SKEWCAT_BLESS=1", fx.name);
        }
    }
}

#[test]
fn sign_action_reads_the_same_in_every_odd_characteristic() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let doc = InputDoc::from_path(&dir.join("dual_numbers_c2.json")).unwrap();
    for f in [Field::Prime(3), Field::Prime(7), Field::Rational] {
        let loaded = skewcat_cli::Loaded::new(&doc, Some(f)).unwrap();
        loaded.validate().unwrap();
    }
}
