use hform_core::acceptance::{run_all, DEFAULT_SEED};

fn main() {
    println!("acceptance suite, seed {DEFAULT_SEED}");
    let results = run_all(DEFAULT_SEED, |c| println!("{}", c.summary()));
    let failed: Vec<usize> = results.iter().filter(|c| !c.passed()).map(|c| c.id).collect();
    if failed.is_empty() {
        println!("all {} criteria pass", results.len());
    } else {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
