//! Closed-form time-dependent forcing functions with exact derivatives.
//!
//! Forcings are built from a small expression grammar (constants, sinusoids,
//! tanh steps and affine combinations) so that first and second derivatives
//! are available analytically; no numerical differentiation anywhere.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForcingError {
    #[error("unsupported derivative order {0}, expected 0, 1 or 2")]
    UnsupportedOrder(u32),
}

/// Which way a tanh step faces.
///
/// `Falling` is `amplitude * tanh(center - tau)` (high before `center`, low
/// after when the amplitude is positive); `Rising` is
/// `amplitude * tanh(tau - center)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepOrientation {
    Falling,
    Rising,
}

/// One weighted child of an affine combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineTerm {
    pub coefficient: f64,
    pub child: TimeFunction,
}

/// A scalar function of scaled time with exact derivatives up to order 2.
///
/// Immutable after construction; evaluation is pure, so values can be shared
/// freely across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TimeFunction {
    Constant {
        value: f64,
    },
    /// `amplitude * sin(angular_frequency * tau + phase)`
    Sinusoid {
        amplitude: f64,
        angular_frequency: f64,
        phase: f64,
    },
    /// `amplitude * tanh(center - tau)` or `amplitude * tanh(tau - center)`.
    TanhStep {
        amplitude: f64,
        center: f64,
        orientation: StepOrientation,
    },
    /// `offset + sum(coefficient_i * child_i)`
    Affine {
        offset: f64,
        terms: Vec<AffineTerm>,
    },
}

impl TimeFunction {
    pub fn constant(value: f64) -> Self {
        TimeFunction::Constant { value }
    }

    pub fn sinusoid(amplitude: f64, angular_frequency: f64, phase: f64) -> Self {
        TimeFunction::Sinusoid {
            amplitude,
            angular_frequency,
            phase,
        }
    }

    pub fn tanh_step(amplitude: f64, center: f64, orientation: StepOrientation) -> Self {
        TimeFunction::TanhStep {
            amplitude,
            center,
            orientation,
        }
    }

    pub fn affine(offset: f64, terms: Vec<AffineTerm>) -> Self {
        TimeFunction::Affine { offset, terms }
    }

    /// `coefficient * f`, as a single-term affine combination.
    pub fn scaled(coefficient: f64, f: TimeFunction) -> Self {
        TimeFunction::Affine {
            offset: 0.0,
            terms: vec![AffineTerm {
                coefficient,
                child: f,
            }],
        }
    }

    pub fn eval(&self, tau: f64) -> f64 {
        match self {
            TimeFunction::Constant { value } => *value,
            TimeFunction::Sinusoid {
                amplitude,
                angular_frequency,
                phase,
            } => amplitude * (angular_frequency * tau + phase).sin(),
            TimeFunction::TanhStep {
                amplitude,
                center,
                orientation,
            } => amplitude * step_arg(*center, tau, *orientation).tanh(),
            TimeFunction::Affine { offset, terms } => {
                let mut acc = *offset;
                for t in terms {
                    acc += t.coefficient * t.child.eval(tau);
                }
                acc
            }
        }
    }

    /// First derivative with respect to `tau`.
    pub fn deriv1(&self, tau: f64) -> f64 {
        match self {
            TimeFunction::Constant { .. } => 0.0,
            TimeFunction::Sinusoid {
                amplitude,
                angular_frequency,
                phase,
            } => amplitude * angular_frequency * (angular_frequency * tau + phase).cos(),
            TimeFunction::TanhStep {
                amplitude,
                center,
                orientation,
            } => {
                let u = step_arg(*center, tau, *orientation);
                let sech2 = 1.0 - u.tanh().powi(2);
                amplitude * sech2 * step_sign(*orientation)
            }
            TimeFunction::Affine { terms, .. } => {
                let mut acc = 0.0;
                for t in terms {
                    acc += t.coefficient * t.child.deriv1(tau);
                }
                acc
            }
        }
    }

    /// Second derivative with respect to `tau`.
    pub fn deriv2(&self, tau: f64) -> f64 {
        match self {
            TimeFunction::Constant { .. } => 0.0,
            TimeFunction::Sinusoid {
                amplitude,
                angular_frequency,
                phase,
            } => {
                -amplitude
                    * angular_frequency.powi(2)
                    * (angular_frequency * tau + phase).sin()
            }
            TimeFunction::TanhStep {
                amplitude,
                center,
                orientation,
            } => {
                // d/dtau sech^2(u) = -2 sech^2(u) tanh(u) * du/dtau, with
                // du/dtau = step_sign; the two sign factors square away.
                let u = step_arg(*center, tau, *orientation);
                let th = u.tanh();
                let sech2 = 1.0 - th * th;
                -2.0 * amplitude * sech2 * th
            }
            TimeFunction::Affine { terms, .. } => {
                let mut acc = 0.0;
                for t in terms {
                    acc += t.coefficient * t.child.deriv2(tau);
                }
                acc
            }
        }
    }

    /// Derivative of the requested order; order 0 is plain evaluation.
    pub fn eval_deriv(&self, tau: f64, order: u32) -> Result<f64, ForcingError> {
        match order {
            0 => Ok(self.eval(tau)),
            1 => Ok(self.deriv1(tau)),
            2 => Ok(self.deriv2(tau)),
            n => Err(ForcingError::UnsupportedOrder(n)),
        }
    }

    /// Replace the function by the constant it takes at `tau0`.
    ///
    /// The result has exactly zero derivatives of every order.
    pub fn freeze(&self, tau0: f64) -> TimeFunction {
        TimeFunction::Constant {
            value: self.eval(tau0),
        }
    }

    /// Structurally constant: evaluation cannot depend on `tau`.
    pub fn is_constant(&self) -> bool {
        match self {
            TimeFunction::Constant { .. } => true,
            TimeFunction::Sinusoid { amplitude, .. }
            | TimeFunction::TanhStep { amplitude, .. } => *amplitude == 0.0,
            TimeFunction::Affine { terms, .. } => terms
                .iter()
                .all(|t| t.coefficient == 0.0 || t.child.is_constant()),
        }
    }
}

fn step_arg(center: f64, tau: f64, orientation: StepOrientation) -> f64 {
    match orientation {
        StepOrientation::Falling => center - tau,
        StepOrientation::Rising => tau - center,
    }
}

fn step_sign(orientation: StepOrientation) -> f64 {
    match orientation {
        StepOrientation::Falling => -1.0,
        StepOrientation::Rising => 1.0,
    }
}

/// The bundled inflow profile behind the built-in scenarios.
///
/// `r` ramps from ~0.5 to ~100 through two smooth step fronts at tau = 20 and
/// 40 with a small sinusoidal ripple; `mu` is the constant asymmetric
/// component; `p2`, `q2` are the scaled n = 2 harmonics `mu/100` and `r/100`.
#[derive(Debug, Clone)]
pub struct InflowForcings {
    pub r: TimeFunction,
    pub mu: TimeFunction,
    pub p2: TimeFunction,
    pub q2: TimeFunction,
}

impl InflowForcings {
    /// r(tau) = 50 + 0.5 sin(10 tau) - 21.5 tanh(20 - tau) - 28 tanh(40 - tau),
    /// mu = 1, p2 = mu/100, q2 = r/100.
    pub fn reference() -> Self {
        let r = TimeFunction::affine(
            50.0,
            vec![
                AffineTerm {
                    coefficient: 1.0,
                    child: TimeFunction::sinusoid(0.5, 10.0, 0.0),
                },
                AffineTerm {
                    coefficient: 1.0,
                    child: TimeFunction::tanh_step(-21.5, 20.0, StepOrientation::Falling),
                },
                AffineTerm {
                    coefficient: 1.0,
                    child: TimeFunction::tanh_step(-28.0, 40.0, StepOrientation::Falling),
                },
            ],
        );
        let mu = TimeFunction::constant(1.0);
        let p2 = TimeFunction::scaled(0.01, mu.clone());
        let q2 = TimeFunction::scaled(0.01, r.clone());
        InflowForcings { r, mu, p2, q2 }
    }
}
