use bcc_core::bounds::{
    pairwise_error, single_term_approx, uncoded_bpsk, uncoded_qam, BoundPoint,
};
use bcc_core::{
    bep_union_bound, compute_spectrum, fer_union_bound, q_function, BoundQuery, DistanceSpectrum,
    ModulationSpec, StandardRate,
};
use proptest::prelude::*;
use std::sync::OnceLock;

/// `Q(x) = phi(x) * int_0^inf exp(-x s - s^2 / 2) ds`, by composite Simpson.
fn q_oracle(x: f64) -> f64 {
    q_quadrature(x, 400.0)
}

fn q_quadrature(x: f64, per_unit: f64) -> f64 {
    assert!(x >= 0.0);
    let upper = if x > 0.0 { (60.0 / x).min(40.0) } else { 40.0 };
    let h0 = if x > 1.0 { 1.0 / x } else { 1.0 } / per_unit;
    let n = ((upper / h0).ceil() as usize).next_multiple_of(2);
    let h = upper / n as f64;
    let f = |s: f64| (-x * s - 0.5 * s * s).exp();
    let mut sum = f(0.0) + f(upper);
    for i in 1..n {
        sum += f(i as f64 * h) * if !i.is_multiple_of(2) { 4.0 } else { 2.0 };
    }
    let phi = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    phi * sum * h / 3.0
}

fn spectra() -> &'static Vec<DistanceSpectrum> {
    static S: OnceLock<Vec<DistanceSpectrum>> = OnceLock::new();
    S.get_or_init(|| {
        StandardRate::ALL
            .iter()
            .map(|r| compute_spectrum(&r.schedule(), 130).unwrap())
            .collect()
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn q_function_matches_quadrature() {
    for i in 0..=74 {
        let x = 0.5 * i as f64;
        let (q, o) = (q_function(x), q_quadrature(x, 4000.0));
        assert!(rel(q, o) < 1e-12, "x = {x}: {q:e} vs {o:e}");
    }
    assert!(q_function(40.0) >= 0.0);
}

#[test]
fn reference_points() {
    // Published four- and five-digit values.
    assert!(rel(q_function(20f64.sqrt()), 3.8721e-6) < 2e-5);
    assert!(rel(uncoded_bpsk(0.0), 7.8650e-2) < 2e-5);
    assert!(rel(uncoded_qam(4, 10.0).unwrap(), 3.8721e-6) < 2e-5);
    assert!(rel(uncoded_qam(16, 12.0).unwrap(), 1.3866e-4) < 5e-5);
    assert!(rel(uncoded_qam(256, 18.0).unwrap(), 3.4721e-3) < 2e-5);
}

#[test]
fn unit_delta_is_the_bpsk_kernel() {
    for s in spectra() {
        let grid = vec![1.0, 4.0, 7.5];
        let a = bep_union_bound(&BoundQuery::new(s, ModulationSpec::BPSK, grid.clone())).unwrap();
        let b = bep_union_bound(&BoundQuery::new(s, ModulationSpec::QPSK, grid)).unwrap();
        assert_eq!(a.points, b.points);
    }
    let d = 24.0 / 510.0;
    let want = q_oracle((2.0 * 0.5 * 10.0 * d * 10f64.powf(1.7)).sqrt());
    assert!(rel(pairwise_error(10, 0.5, d, 17.0), want) < 1e-9);
}

#[test]
fn bounds_match_direct_summation() {
    for (rate, s) in StandardRate::ALL.iter().zip(spectra()) {
        let r = s.schedule().rate_f64();
        for m in [ModulationSpec::QPSK, ModulationSpec::QAM16, ModulationSpec::QAM256] {
            let delta = m.delta_f64();
            let grid: Vec<f64> = (0..8).map(|i| m.penalty_db() + 2.0 + i as f64).collect();
            let q = BoundQuery::new(s, m, grid.clone()).with_terms(30).with_frame_bits(1024);
            let bep = bep_union_bound(&q).unwrap();
            let fer = fer_union_bound(&q).unwrap();
            for (k, &x) in grid.iter().enumerate() {
                let g = 10f64.powf(x / 10.0);
                let (mut b, mut f) = (0.0, 0.0);
                for e in &s.entries()[..30] {
                    let p2 = q_oracle((2.0 * r * e.d as f64 * delta * g).sqrt());
                    b += e.beta_f64() * p2;
                    f += e.alpha_f64() * p2;
                }
                f *= 1024.0;
                assert!(rel(bep.points[k].raw, b) < 1e-8, "{rate} {m} {x}");
                assert!(rel(fer.points[k].raw, f) < 1e-8, "{rate} {m} {x}");
                assert_eq!(bep.points[k].value, bep.points[k].raw.min(1.0));
            }
        }
    }
}

#[test]
fn uncoded_references_match_direct_formulas() {
    for x in [0.0, 4.0, 10.0, 18.0] {
        let g = 10f64.powf(x / 10.0);
        assert!(rel(uncoded_bpsk(x), q_oracle((2.0 * g).sqrt())) < 1e-9);
        for m in [4u32, 16, 64, 256] {
            let k = m.trailing_zeros() as f64;
            let mf = m as f64;
            let want = 4.0 / k * (1.0 - 1.0 / mf.sqrt()) * q_oracle((3.0 * k / (mf - 1.0) * g).sqrt());
            assert!(rel(uncoded_qam(m, x).unwrap(), want) < 1e-9, "M={m} x={x}");
        }
    }
}

#[test]
fn pairwise_and_single_term() {
    let p = pairwise_error(10, 0.5, 1.0, 5.0);
    assert!(rel(p, q_oracle((10.0 * 10f64.powf(0.5)).sqrt())) < 1e-9);
    let half = &spectra()[0];
    let single = single_term_approx(half, 0.5, 1.0, 5.0).unwrap();
    assert!(rel(single, 36.0 * p) < 1e-12);
    let full = bep_union_bound(&BoundQuery::new(half, ModulationSpec::QPSK, vec![5.0]).with_terms(30))
        .unwrap()
        .points[0]
        .raw;
    // The leading term carries most, but not all, of the bound at 5 dB.
    assert!(single < full && single > 0.7 * full, "{single:e} vs {full:e}");

    let five_sixths = &spectra()[3];
    let want = 92.0 * q_oracle((2.0 * (5.0 / 6.0) * 4.0 * 10f64.powf(0.4)).sqrt());
    assert!(rel(single_term_approx(five_sixths, 5.0 / 6.0, 1.0, 4.0).unwrap(), want) < 1e-9);
}

#[test]
fn clamped_at_low_snr() {
    let s = &spectra()[3];
    let c = bep_union_bound(&BoundQuery::new(s, ModulationSpec::QPSK, vec![-2.0, 0.0, 8.0]).with_terms(30))
        .unwrap();
    let BoundPoint { value, raw, .. } = c.points[0];
    assert!(raw > 1.0 && value == 1.0);
    assert!(c.points[2].value < 1e-6 && c.points[2].value == c.points[2].raw);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bep_decreases_with_snr(rate in 0usize..4, x in 0.0f64..12.0, step in 0.01f64..2.0) {
        let s = &spectra()[rate];
        let c = bep_union_bound(&BoundQuery::new(s, ModulationSpec::QPSK, vec![x, x + step]).with_terms(30)).unwrap();
        prop_assert!(c.points[1].raw < c.points[0].raw);
        prop_assert!(c.points[1].value <= c.points[0].value);
    }

    #[test]
    fn more_terms_never_lower_the_bound(rate in 0usize..4, x in 2.0f64..10.0, t in 1usize..30) {
        let s = &spectra()[rate];
        let eval = |n: usize| bep_union_bound(&BoundQuery::new(s, ModulationSpec::QPSK, vec![x]).with_terms(n)).unwrap().points[0].raw;
        prop_assert!(eval(t + 1) >= eval(t));
    }

    #[test]
    fn qam_is_a_pure_snr_shift(rate in 0usize..4, m in 1usize..5, x in 2.0f64..8.0) {
        let s = &spectra()[rate];
        let modulation = ModulationSpec::ALL[m];
        let base = bep_union_bound(&BoundQuery::new(s, ModulationSpec::QPSK, vec![x]).with_terms(30)).unwrap().points[0].raw;
        let shifted = bep_union_bound(&BoundQuery::new(s, modulation, vec![x + modulation.penalty_db()]).with_terms(30)).unwrap().points[0].raw;
        prop_assert!(rel(shifted, base) < 1e-9);
    }
}
