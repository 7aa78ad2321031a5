use std::path::Path;

use psyrisk::config::RunConfig;

fn load(name: &str) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name);
    RunConfig::load(&path).unwrap().unwrap()
}

#[test]
fn default_file_matches_builtin() {
    assert_eq!(load("default.toml"), RunConfig::default());
}

#[test]
fn shipped_configs_are_valid() {
    for name in ["tiered.toml", "honest.toml"] {
        load(name).to_episode().unwrap();
    }
}
