//! Quantized min-sum decoding and FER estimation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use qclets::qc::{lift_matrix, ExponentMatrix, TannerGraph};
use qclets::sim::{fer_point, noise_sigma, support_class, DecoderConfig, MinSumDecoder, StopRule};

fn tanner() -> TannerGraph {
    let p: ExponentMatrix = "3 5 31\n1 2 4 8 16\n5 10 20 9 18\n25 19 7 14 28\n".parse().unwrap();
    lift_matrix(&p)
}

fn syndrome_zero(t: &TannerGraph, bits: &[u8]) -> bool {
    (0..t.num_checks() as u32).all(|c| t.check_vars(c).iter().map(|&v| bits[v as usize]).sum::<u8>() % 2 == 0)
}

#[test]
fn noiseless_word_decodes_at_once() {
    let t = tanner();
    let mut dec = MinSumDecoder::new(&t, &DecoderConfig::default());
    let out = dec.decode(&vec![1.0; t.num_vars()]);
    assert!(out.converged);
    assert_eq!(out.iterations, 0);
    assert!(out.bits.iter().all(|&b| b == 0));
}

#[test]
fn converged_words_satisfy_every_check() {
    let t = tanner();
    let mut dec = MinSumDecoder::new(&t, &DecoderConfig::default());
    let normal = Normal::new(0.0, noise_sigma(1.5, 0.4)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut y = vec![0.0; t.num_vars()];
    let (mut converged, mut wrong) = (0, 0);
    for _ in 0..3000 {
        for s in y.iter_mut() {
            *s = 1.0 + normal.sample(&mut rng);
        }
        let out = dec.decode(&y);
        if out.converged {
            converged += 1;
            assert!(syndrome_zero(&t, &out.bits));
            if out.bits.contains(&1) {
                wrong += 1;
            }
        } else {
            assert_eq!(out.iterations, 100);
        }
    }
    assert!(converged > 0 && converged < 3000, "{converged}");
    // Undetected errors are codewords; allowed but should be rare.
    assert!(wrong < 30);
}

#[test]
fn support_class_counts_odd_checks() {
    let t = tanner();
    let v = 0u32;
    assert_eq!(support_class(&t, &[v]), (1, 3));
    let w = t
        .check_vars(t.var_checks(v)[0])
        .iter()
        .copied()
        .find(|&w| w != v)
        .unwrap();
    assert_eq!(support_class(&t, &[v, w]), (2, 4));
}

#[test]
fn fer_falls_with_snr_and_ignores_thread_count() {
    let t = tanner();
    let stop = StopRule {
        min_errors: 40,
        max_frames: 200_000,
    };
    let cfg = DecoderConfig::default();
    let lo = fer_point(&t, 2.0, &stop, &cfg, 5, 12).unwrap();
    let hi = fer_point(&t, 3.5, &stop, &cfg, 5, 12).unwrap();
    assert!(lo.reached(&stop) && hi.reached(&stop));
    assert!(hi.fer < lo.fer, "{} vs {}", hi.fer, lo.fer);
    assert_eq!(lo.errors, lo.failures.values().sum::<u64>() + lo.unclassified);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let again = pool.install(|| fer_point(&t, 2.0, &stop, &cfg, 5, 12).unwrap());
    assert_eq!(again, lo);
}
