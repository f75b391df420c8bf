use monoidlab_core::battery::{run_battery, BatteryOptions};
use monoidlab_core::monoids::GRule;

#[test]
fn sabotaged_gn_rule_is_caught_by_the_oracle() {
    let opts = BatteryOptions { full: false, rule: GRule::Sabotaged, ..BatteryOptions::default() };
    let report = run_battery(opts, |_| {}).unwrap();
    let first = report.first_failure().expect("sabotage must be detected");
    assert_eq!(first.name, "gn-oracle-agreement");
}
