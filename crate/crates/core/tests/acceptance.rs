//! Runs every acceptance criterion and prints one line per criterion.
//! `QUIVAR_CRITERIA=1,4` restricts the run.

use quivar::acceptance::{run_criterion, CRITERIA};
use quivar::EngineConfig;

fn main() {
    let only: Option<Vec<usize>> = std::env::var("QUIVAR_CRITERIA")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let ids: Vec<usize> = (1..=CRITERIA).filter(|i| only.as_ref().is_none_or(|o| o.contains(i))).collect();
    let mut failed = 0;
    for id in ids {
        let r = run_criterion(id, EngineConfig::default());
        println!("{r}");
        failed += !r.passed as usize;
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
