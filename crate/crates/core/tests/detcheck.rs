use std::time::Instant;

use trigonal_core::detcheck::{verify_identity, DetCase, PRIMES};
use trigonal_core::par::Exec;

#[test]
fn all_three_identities_hold_on_the_grid() {
    let start = Instant::now();
    for case in DetCase::ALL {
        let report = verify_identity(case, Exec::default());
        assert!(report.pass, "{case}: {report:?}");
        assert_eq!(report.primes.len(), PRIMES.len());
        let sign = report.primes[0].sign;
        assert!(report.primes.iter().all(|r| r.sign == sign && r.mismatches == 0));
    }
    assert!(start.elapsed().as_secs() < 60, "took {:?}", start.elapsed());
}
