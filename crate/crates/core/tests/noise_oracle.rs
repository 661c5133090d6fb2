use magphon_core::noise::{
    closed_form_factors, closed_form_response, linear_system_response, psd, response_to_sources, ClosedForm,
    NoiseChannel, NoiseParams,
};
use magphon_core::{SystemConfig, C64};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn relative_gap(a: &[C64; 4], b: &[C64; 4]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let scale: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (diff / scale).sqrt()
}

fn coefficients(t: &magphon_core::noise::TransferCoefficients) -> [C64; 4] {
    NoiseChannel::ALL.map(|c| t.get(c).unwrap())
}

fn draw() -> impl Strategy<Value = (SystemConfig, f64)> {
    (
        (1e6f64..5e7, 1e6f64..5e7, 1e6f64..5e7, 1e6f64..5e7),
        (0.5e9f64..1.5e9, 0.5e9f64..1.5e9),
        (0.0f64..4e12, 0.0f64..4e12),
        (-5e7f64..5e7, -5e7f64..5e7),
        0.3e9f64..1.7e9,
    )
        .prop_map(|((ka, kb, km, kr), (wm, wr), (sa, sb), (da, db), w)| {
            let mut c = SystemConfig::symmetric(1e7, wm, wr, 0.0).unwrap();
            c.tm_photon.gamma = ka;
            c.tm_photon.gamma_ext = 0.5 * ka;
            c.te_photon.gamma = kb;
            c.te_photon.gamma_ext = 0.5 * kb;
            c.magnon.gamma = km;
            c.phonon.gamma = kr;
            c.tm_drive.effective_strength = sa;
            c.te_drive.effective_strength = sb;
            c.tm_drive.detuning = da;
            c.te_drive.detuning = db;
            c.validate().unwrap();
            (c, w)
        })
}

#[test]
fn exact_elimination_matches_direct_solve() {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        ..Config::default()
    });
    runner
        .run(&draw(), |(c, w)| {
            let f = closed_form_factors(w, &c);
            prop_assume!(f.denominator.norm() > 1e-6);
            let direct = linear_system_response(w, &c, &NoiseParams::default());
            prop_assume!(direct.is_ok());
            let direct = coefficients(&direct.unwrap());
            let closed = coefficients(&closed_form_response(w, &c, ClosedForm::Exact).unwrap());
            let gap = relative_gap(&closed, &direct);
            prop_assert!(gap <= 1e-10, "relative gap {gap}");
            Ok(())
        })
        .unwrap();
}

#[test]
fn printed_form_drops_the_reflected_magnon_channel() {
    let c = SystemConfig::symmetric(2e7, 0.85e9, 1.15e9, 1.5e12)
        .unwrap()
        .with_te_detuning(-1e7);
    let w = 0.9e9;
    let direct = coefficients(&linear_system_response(w, &c, &NoiseParams::default()).unwrap());
    let printed = coefficients(&closed_form_response(w, &c, ClosedForm::AsPrinted).unwrap());
    assert_eq!(printed[3], C64::new(0.0, 0.0));
    assert!(direct[3].norm() > 0.0);
    assert!(relative_gap(&printed, &direct) > 1e-6);
}

proptest! {
    #[test]
    fn response_is_linear_in_sources(
        (c, w) in draw(),
        amps in proptest::array::uniform4((-1.0f64..1.0, -1.0f64..1.0)),
    ) {
        let amps = amps.map(|(re, im)| C64::new(re, im));
        let Ok(t) = linear_system_response(w, &c, &NoiseParams::default()) else {
            return Ok(());
        };
        let superposed: C64 = NoiseChannel::ALL
            .iter()
            .zip(&amps)
            .map(|(ch, a)| t.get(*ch).unwrap() * a)
            .sum();
        let direct = response_to_sources(w, &c, &amps).unwrap();
        prop_assert!((direct - superposed).norm() <= 1e-12 * (1.0 + superposed.norm()));
    }

    #[test]
    fn psd_is_non_negative_and_scales_with_unit(
        (c, w) in draw(),
        unit in 1e-3f64..1e3,
    ) {
        let base = NoiseParams::default();
        let scaled = NoiseParams { unit_psd: unit * base.unit_psd, ..base };
        if let (Ok(a), Ok(b)) = (psd(w, &c, &base), psd(w, &c, &scaled)) {
            prop_assert!(a >= 0.0);
            prop_assert!((b - unit * a).abs() <= 1e-12 * b.abs().max(1e-300));
        }
    }
}
