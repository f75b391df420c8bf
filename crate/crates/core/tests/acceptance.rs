use std::process::ExitCode;

use monoidlab_core::battery::{run_battery, BatteryOptions};

fn main() -> ExitCode {
    let report = match run_battery(BatteryOptions::default(), |r| println!("{}", r.line())) {
        Ok(r) => r,
        Err(e) => {
            println!("battery could not start: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!("total {:.1}s over {} suite functions", report.total_seconds, report.suite_size);
    match report.first_failure() {
        None => {
            println!("acceptance: all {} criteria passed", report.results.len());
            ExitCode::SUCCESS
        }
        Some(r) => {
            println!("acceptance: criterion {} ({}) failed", r.id, r.name);
            ExitCode::FAILURE
        }
    }
}
