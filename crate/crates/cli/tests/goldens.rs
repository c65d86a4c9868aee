//! The committed DOT goldens are byte-exact renderings of the five
//! reference trees.

use std::path::Path;

use pdt_cli::repro;

#[test]
fn goldens_are_byte_exact_renderings() {
    for check in repro::figure_checks() {
        assert!(check.structure_pass, "ordering {} structure", check.name);
        assert_eq!(
            check.tree.to_dot(),
            repro::golden_dot(&check.name),
            "ordering {} golden drifted",
            check.name
        );
    }
}

/// Rewrites the golden files from the current renderer. Run manually after
/// an intentional format change:
/// `cargo test -p pdt-cli --test goldens -- --ignored`
#[test]
#[ignore]
fn regenerate_goldens() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens");
    for check in repro::figure_checks() {
        let path = dir.join(format!("perm_{}.dot", check.name.to_lowercase()));
        std::fs::write(&path, check.tree.to_dot()).unwrap();
        eprintln!("wrote {}", path.display());
    }
}
