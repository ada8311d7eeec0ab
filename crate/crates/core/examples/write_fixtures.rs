//! Regenerate the JSON files under `fixtures/` from their code definitions.

use std::path::Path;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for (name, text) in entcap::fixtures::build::catalog() {
        std::fs::write(dir.join(format!("{name}.json")), text)?;
        println!("wrote {name}.json");
    }
    Ok(())
}
