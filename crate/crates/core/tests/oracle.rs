use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use squeezelab::fock::{convergence_check, solve_adaptive, FockConfig};
use squeezelab::{closed_form_moments, effective_drift, SqueezeError, SystemParams};

const LADDER: [usize; 5] = [16, 24, 32, 48, 64];

#[test]
fn oracle_matches_closed_form_on_random_sets() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
    let mut checked = 0;
    while checked < 25 {
        let p = SystemParams::from_dispersive_coupling(
            rng.gen_range(0.2..4.0),
            50.0,
            rng.gen_range(0.0..2.0),
            1.0,
            rng.gen_range(0.0..3.0),
        )
        .unwrap();
        let d = effective_drift(&p);
        if d.determinant() < 0.2 {
            continue;
        }
        let exact = closed_form_moments(&d).unwrap();
        if exact.photon_number() > 2.0 {
            continue;
        }
        let (n_max, m) = solve_adaptive(&p, &LADDER, &FockConfig::default()).unwrap();
        assert!(exact.photon_number() < n_max as f64 / 4.0);
        assert!((m.sym_number / exact.sym_number - 1.0).abs() < 1e-6, "{p:?}");
        assert!((m.a_sq - exact.a_sq).norm() < 1e-6 * exact.sym_number, "{p:?}");
        checked += 1;
    }
}

#[test]
fn strong_coupling_converges_by_thirty_levels() {
    let p = SystemParams::from_dispersive_coupling(1.0, 100.0, 1.1, 1.0, 1.2).unwrap();
    let report = convergence_check(&p, &[10, 15, 20, 25, 30], &FockConfig::default()).unwrap();
    assert!(report.converged_at <= 30);
    let last = report.rows.last().unwrap();
    assert!((last.moments.sym_number - 3.0736 / 2.88).abs() < 1e-9);
}

#[test]
fn near_critical_state_leaks_out_of_every_truncation() {
    let p = SystemParams::from_dispersive_coupling(1.0, 10.0, 0.499, 1.0, 0.0).unwrap();
    assert!(matches!(
        solve_adaptive(&p, &LADDER, &FockConfig::default()),
        Err(SqueezeError::TruncationLeak { .. })
    ));
}
