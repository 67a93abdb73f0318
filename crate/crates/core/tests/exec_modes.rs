//! Sequential and parallel execution must give bit-identical results.

use sqfree::charfn::empirical_charfn_with;
use sqfree::classical::{sample_theta_with, SmoothnessSieve};
use sqfree::ensemble::{EnsembleSpec, HalfProductTable};
use sqfree::primes::PrimeTable;
use sqfree::Execution::{Parallel, Sequential};

#[test]
fn sieves_agree() {
    for limit in [1000, 1_000_000, 12_000_000] {
        let a = PrimeTable::sieve_with(limit, Sequential).unwrap();
        let b = PrimeTable::sieve_with(limit, Parallel).unwrap();
        assert_eq!(a.primes(), b.primes(), "limit {limit}");
    }
    let sieve = SmoothnessSieve::new(200_000).unwrap();
    assert_eq!(
        sieve.psi_with(200_000, 50, Sequential).unwrap(),
        sieve.psi_with(200_000, 50, Parallel).unwrap()
    );
}

#[test]
fn exact_masses_agree() {
    let spec = EnsembleSpec::build(&PrimeTable::sieve(200).unwrap(), 36).unwrap();
    let a = HalfProductTable::build_with(&spec, Sequential).unwrap();
    let b = HalfProductTable::build_with(&spec, Parallel).unwrap();
    for (lo, hi) in [(0.0, 0.25), (0.5, 1.0), (1.0, 3.0), (-1.0, 40.0)] {
        let x = a.exact_interval_mass(lo, hi).unwrap();
        let y = b.exact_interval_mass(lo, hi).unwrap();
        assert_eq!(x.to_bits(), y.to_bits());
    }
    assert_eq!(a.count_mm(151.0), b.count_mm(151.0));
}

#[test]
fn monte_carlo_agrees() {
    let spec = EnsembleSpec::build(&PrimeTable::with_at_least(5000).unwrap(), 5000).unwrap();
    let a = spec.sample_zeta_with(8, 50_000, Sequential);
    let b = spec.sample_zeta_with(8, 50_000, Parallel);
    assert_eq!(a, b);
    let x = empirical_charfn_with(&a, 2.5, Sequential).unwrap();
    let y = empirical_charfn_with(&a, 2.5, Parallel).unwrap();
    assert_eq!(
        (x.re.to_bits(), x.im.to_bits()),
        (y.re.to_bits(), y.im.to_bits())
    );
    let ta = sample_theta_with(1000, 8, 30_000, Sequential).unwrap();
    let tb = sample_theta_with(1000, 8, 30_000, Parallel).unwrap();
    assert_eq!(ta, tb);
}

#[test]
fn seeds_change_draws() {
    let spec = EnsembleSpec::build(&PrimeTable::sieve(1000).unwrap(), 100).unwrap();
    assert_ne!(spec.sample_zeta(1, 100), spec.sample_zeta(2, 100));
    assert_eq!(spec.sample_zeta(1, 100)[..50], spec.sample_zeta(1, 50)[..]);
}
