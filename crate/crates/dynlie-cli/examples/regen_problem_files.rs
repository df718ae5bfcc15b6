//! Regenerate the shipped problem files from the canned examples:
//! `cargo run -p dynlie-cli --example regen_problem_files`

use dynlie_cli::schema::ProblemFile;

fn main() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("problems");
    std::fs::create_dir_all(&dir).expect("create problems dir");
    for spec in dynlie::all_examples() {
        let file = ProblemFile::from_problem(&spec.problem, Some(7));
        let mut json = serde_json::to_string_pretty(&file).expect("serialize");
        json.push('\n');
        let path = dir.join(format!("{}.json", spec.name));
        std::fs::write(&path, json).expect("write fixture");
        println!("wrote {}", path.display());
    }
}
