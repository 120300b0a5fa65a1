//! The shipped category files describe the built-in categories.

mod common;

use stringnet::category::builtins;
use stringnet::category::io::category_to_json;
use stringnet::category::validate::validate_all;

#[test]
fn data_files_match_builtins() {
    for name in builtins::NAMES {
        let text = std::fs::read_to_string(common::data_file(name)).unwrap();
        let builtin = builtins::by_name(name).unwrap();
        assert_eq!(text.trim_end(), category_to_json(&builtin), "{name}.cat is stale");
        let loaded = common::load(name);
        assert_eq!(loaded.fsymbols().entries(), builtin.fsymbols().entries());
        assert_eq!(loaded.dims().as_slice(), builtin.dims().as_slice());
    }
}

#[test]
fn shipped_categories_with_data_validate() {
    for cat in common::standard_files() {
        for rep in validate_all(&cat, 1e-9) {
            assert!(rep.passed, "{}: {rep}", cat.name());
        }
    }
}
