//! Building a JSON document and running CLI commands in-process.

use dgglue::cli::{run, Command, Options};
use dgglue::json::Document;
use dgglue::random;
use dgglue::Field;
use serde_json::json;

fn main() -> dgglue::Result<()> {
    let f7 = Field::Prime(7);
    let mut rng = random::rng(17);
    let mut doc = Document::new(f7);
    doc.add_dg_cube("square", &random::dg_cube(f7, &mut rng, 2, true))?;
    doc.add_complex_cube("cc", &random::complex_cube(f7, &mut rng, 2, 8))?;
    let mut v = doc.to_json();
    v["params"] = json!({ "cube": "square" });
    let doc = Document::from_json(&v, None)?;
    let opts = Options::default();
    for cmd in [Command::CheckAcyclic, Command::CheckQff] {
        let r = run(cmd, &doc, &opts)?;
        println!("{}: {}", cmd.name(), serde_json::to_string(&r).unwrap_or_default().chars().take(160).collect::<String>());
    }
    let text = serde_json::to_string_pretty(&doc.to_json()).unwrap_or_default();
    println!("document: {} bytes, round trip equal: {}", text.len(), Document::parse(&text, None)? == doc);
    Ok(())
}
