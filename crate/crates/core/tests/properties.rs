use altes::chirplet::{classic_to_modern, modern_to_classic, ChirpletParams};
use altes::io::{read_signal_binary, write_signal_binary};
use altes::sweep::{pareto_frontier, SweepRecord};
use altes::AnalyticSignal;
use num_complex::Complex64;
use proptest::prelude::*;

fn record(spread: f64, bandwidth: f64) -> SweepRecord {
    SweepRecord {
        params: ChirpletParams::new(0.5, 2.0, 0.5).unwrap(),
        bandwidth,
        delay_spread: spread,
        oscillations: 0.0,
        n_fft_used: 256,
        flagged: false,
    }
}

proptest! {
    #[test]
    fn parameterizations_round_trip(
        w0 in 0.01f64..2.0,
        ratio in 1.2f64..30.0,
        lambda in prop_oneof![0.05f64..0.95, 1.05f64..8.0],
    ) {
        let p = ChirpletParams::new(w0, w0 * ratio, lambda).unwrap();
        let back = classic_to_modern(&modern_to_classic(&p).unwrap(), p.kc_level()).unwrap();
        prop_assert!((back.omega0() - p.omega0()).abs() <= 1e-12 * p.omega0());
        prop_assert!((back.omega_c() - p.omega_c()).abs() <= 1e-12 * p.omega_c());
        prop_assert!((back.lambda() - p.lambda()).abs() <= 1e-12 * p.lambda());
    }

    #[test]
    fn binary_signal_round_trip(values in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 0..300)) {
        let sig = AnalyticSignal::new(values.iter().map(|&(re, im)| Complex64::new(re, im)).collect());
        let mut buf = Vec::new();
        write_signal_binary(&mut buf, &sig).unwrap();
        prop_assert_eq!(read_signal_binary(buf.as_slice()).unwrap(), sig);
    }

    #[test]
    fn frontier_matches_quadratic_oracle(points in prop::collection::vec((0u8..20, 0u8..20), 1..80)) {
        // small integer coordinates force plenty of ties
        let records: Vec<SweepRecord> = points.iter().map(|&(s, b)| record(s as f64, b as f64)).collect();
        let result = pareto_frontier(&records).unwrap();
        let oracle: Vec<usize> = (0..records.len())
            .filter(|&i| {
                let r = &records[i];
                !records.iter().any(|q| {
                    q.delay_spread <= r.delay_spread
                        && q.bandwidth <= r.bandwidth
                        && (q.delay_spread < r.delay_spread || q.bandwidth < r.bandwidth)
                })
            })
            .collect();
        prop_assert_eq!(result.frontier, oracle);
    }
}
