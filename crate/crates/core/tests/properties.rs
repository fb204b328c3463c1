use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qsphere::algebra::random_element;
use qsphere::axioms::{faithfulness_residual, CompressionRule};
use qsphere::operators::{block_norms, decay_fit, DEFAULT_FLOOR};
use qsphere::qcore::half_int;
use qsphere::spectral::{DiracProfile, IndexReading, SpectralData};
use qsphere::{HilbertSpec, LinearOperator, QParam};

fn data(q: f64, l2: i32) -> SpectralData {
    SpectralData::calibrated(
        HilbertSpec::new(half_int(l2)).unwrap(),
        QParam::new(q).unwrap(),
        DiracProfile::standard(),
        IndexReading::Corrected,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // π(x)π(y) = π(normal_form(xy)) away from the truncation edge.
    #[test]
    fn representation_is_multiplicative(seed in any::<u64>(), qi in 0usize..3) {
        let d = data([0.3, 0.5, 0.8][qi], 13);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&mut rng, 3, 3);
        let y = random_element(&mut rng, 3, 3);
        let scale = 1.0 + x.max_coefficient() * y.max_coefficient();
        let r = faithfulness_residual(&d, CompressionRule::default(), &x, &y).unwrap();
        prop_assert!(r < 1e-10 * scale, "{x} · {y}: {r:e}");
    }

    #[test]
    fn decay_fit_recovers_rates(q in 0.2f64..0.95, c in 0.1f64..10.0, power in 1u32..4) {
        let samples: Vec<(f64, f64)> = (0..12)
            .map(|k| {
                let l = k as f64 + 0.5;
                (l, c * q.powf(f64::from(power) * l))
            })
            .collect();
        let fit = decay_fit(&samples, DEFAULT_FLOOR).unwrap();
        prop_assert!((fit.rate - f64::from(power) * q.ln()).abs() < 1e-6);
        prop_assert!(fit.residual < 1e-9);
    }

    #[test]
    fn block_norms_bound_the_norm(seed in any::<u64>()) {
        let d = data(0.5, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&mut rng, 3, 3);
        let op: LinearOperator = d.pi.represent(&x).unwrap();
        let blocks = block_norms(&op).unwrap();
        let max_block = blocks.iter().map(|b| b.norm).fold(0.0, f64::max);
        let bands = blocks
            .iter()
            .filter(|b| b.norm > 0.0)
            .map(|b| (b.l_row - b.l_col).twice())
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        let norm = op.norm().unwrap();
        prop_assert!(max_block <= norm * (1.0 + 1e-9));
        prop_assert!(norm <= bands as f64 * max_block * (1.0 + 1e-9));
    }
}
