use std::process::ExitCode;

use tautring::acceptance;

fn main() -> ExitCode {
    // criterion 8 reads counters filled by 3 and 4, so keep the order
    let results = acceptance::run_all();
    for o in &results {
        println!("{}", o.line());
    }
    let failed: Vec<u32> = results.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
