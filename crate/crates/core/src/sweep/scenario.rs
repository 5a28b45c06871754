use std::f64::consts::TAU;

use super::{Axis, LzsChannel, RelaxChannel, SweepSpec, TimeMode, WeakChannel};
use crate::dynamics::InitialPopulation;
use crate::error::{Error, Result};
use crate::params::{temp_from_millikelvin, BathParams, QubitParams, WeakField};
use crate::rates::RoiiCoupling;

/// Default axis range in caption units.
pub const DEFAULT_AXIS: (f64, f64) = (0.0, 10.0);
pub const DEFAULT_COUNT: usize = 401;

const NAMES: [&str; 18] = [
    "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f", "fig4g", "fig4h", "fig5a",
    "fig5b", "fig5d", "fig5e", "fig7c", "fig7d", "fig7e",
];

pub fn scenario_names() -> &'static [&'static str] {
    &NAMES
}

fn base(name: &str) -> SweepSpec {
    let axis = Axis::new(DEFAULT_AXIS.0, DEFAULT_AXIS.1, DEFAULT_COUNT);
    SweepSpec {
        name: Some(name.to_string()),
        eps_axis: axis,
        amp_axis: axis,
        lzs: LzsChannel::Lorentzian,
        relaxation: RelaxChannel::Ohmic,
        weak_field: WeakChannel::Off,
        time_mode: TimeMode::Stationary,
        init: InitialPopulation::PaperTanh,
        qubit: QubitParams {
            delta: TAU * 0.013,
            eps0: 0.0,
            gamma2: TAU * 0.06,
        },
        omega: TAU * 0.6,
        bath: BathParams {
            alpha: 0.0002,
            phi: 1.0,
            omega_c: TAU * 0.05,
            temperature: temp_from_millikelvin(20.0).expect("valid constant"),
        },
        weak: WeakField {
            amp_tilde: 0.9 * TAU * 2.0,
            omega_tilde: TAU * 2.0,
        },
    }
}

/// Parameter set of a published figure panel.
pub fn scenario(name: &str) -> Result<SweepSpec> {
    let mut s = base(name);
    let transient = TimeMode::Transient { t_ns: 500.0 };
    let set_bath = |s: &mut SweepSpec, phi2alpha: f64, omega_c_ghz: f64| {
        s.bath.alpha = phi2alpha;
        s.bath.omega_c = TAU * omega_c_ghz;
    };
    match name {
        "fig3a" | "fig3b" | "fig3c" => {
            s.lzs = LzsChannel::Off;
            s.qubit.delta = 0.0;
            if name == "fig3b" {
                s.bath.omega_c = TAU * 6.0;
            }
            if name == "fig3c" {
                s.bath.temperature = temp_from_millikelvin(2e-5)?;
            }
        }
        "fig4a" => {}
        "fig4b" => set_bath(&mut s, 0.02, 0.05),
        "fig4c" => set_bath(&mut s, 0.000002, 6.0),
        "fig4d" => set_bath(&mut s, 0.0002, 6.0),
        "fig4e" => s.time_mode = transient,
        "fig4f" => {
            set_bath(&mut s, 0.000002, 6.0);
            s.time_mode = transient;
        }
        "fig4g" => {
            set_bath(&mut s, 0.02, 0.05);
            s.time_mode = transient;
        }
        "fig4h" => {
            set_bath(&mut s, 0.0002, 6.0);
            s.time_mode = transient;
        }
        "fig5a" | "fig5b" | "fig5d" | "fig5e" => {
            let g = if matches!(name, "fig5a" | "fig5b") { 8e-6 } else { 0.001 };
            s.relaxation = RelaxChannel::Phenomenological { gamma01: TAU * g };
            if matches!(name, "fig5a" | "fig5d") {
                s.time_mode = transient;
            }
        }
        "fig7c" | "fig7d" | "fig7e" => {
            s.lzs = LzsChannel::Off;
            s.relaxation = RelaxChannel::Phenomenological { gamma01: TAU * 8e-6 };
            let which = match name {
                "fig7c" => RoiiCoupling::Both,
                "fig7d" => RoiiCoupling::APrimeOnly,
                _ => RoiiCoupling::BPrimeOnly,
            };
            s.weak_field = WeakChannel::On { which };
        }
        _ => return Err(Error::UnknownScenario(name.to_string())),
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in scenario_names() {
            let s = scenario(name).unwrap();
            s.validate().unwrap();
            assert_eq!(s.name.as_deref(), Some(*name));
        }
        assert!(matches!(scenario("nope"), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn fig4_family() {
        let a = scenario("fig4a").unwrap();
        assert_eq!(a.qubit.delta, TAU * 0.013);
        assert_eq!(a.qubit.gamma2, TAU * 0.06);
        assert_eq!(a.omega, TAU * 0.6);
        assert_eq!(a.bath.alpha * a.bath.phi * a.bath.phi, 0.0002);
        assert_eq!(a.bath.omega_c, TAU * 0.05);
        assert_eq!(a.relaxation, RelaxChannel::Ohmic);
        assert_eq!(a.lzs, LzsChannel::Lorentzian);
        assert_eq!(a.time_mode, TimeMode::Stationary);
        let e = scenario("fig4e").unwrap();
        assert_eq!(e.time_mode, TimeMode::Transient { t_ns: 500.0 });
        assert_eq!(
            SweepSpec {
                time_mode: TimeMode::Stationary,
                name: a.name.clone(),
                ..e
            },
            a
        );
        assert_eq!(a.eps_axis, Axis::new(0.0, 10.0, 401));
    }

    #[test]
    fn fig7_family() {
        let c = scenario("fig7c").unwrap();
        assert_eq!(
            c.weak_field,
            WeakChannel::On {
                which: RoiiCoupling::Both
            }
        );
        assert_eq!(c.weak.omega_tilde, TAU * 2.0);
        assert!((c.weak.amp_tilde / c.weak.omega_tilde - 0.9).abs() < 1e-15);
        assert_eq!(c.relaxation, RelaxChannel::Phenomenological { gamma01: TAU * 8e-6 });
        assert_eq!(c.lzs, LzsChannel::Off);
        assert_eq!(c.qubit, scenario("fig4a").unwrap().qubit);
    }
}
