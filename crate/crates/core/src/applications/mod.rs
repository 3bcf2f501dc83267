//! The three counting families: numbers oddly divisible by `m`, square-free
//! multiples of a square-free `t`, and sums of `φ(n)/n` over multiples of
//! `m`. Each family has a direct counter, an exact checker for the identity
//! that places it in the recursion framework, and its closed-form density.

mod oddly;
mod phi;
mod squarefree;

pub use oddly::{
    count_oddly_divisible_by_levels, count_oddly_divisible_fast, count_oddly_divisible_oracle,
    oddly_recursion_check, predicted_density_oddly, MAX_ODDLY_ORACLE_N,
};
pub use phi::{
    phi_claim_identity_check, phi_ratio_sum, phi_ratio_sum_exact, phi_ratio_sum_float,
    phi_ratio_sums_exact, phi_ratio_sums_float, predicted_phi_density, PhiSum, SumMode,
    MAX_CLAIM_X, MAX_EXACT_N, MAX_FLOAT_N,
};
pub use squarefree::{
    brown_identity_check, count_squarefree_multiples, predicted_density_squarefree,
    squarefree_multiple_counts, MAX_BROWN_X, MAX_SQUAREFREE_N,
};

use serde::Serialize;

use crate::rational::Rational;

/// π² to 20 significant digits (rounds to the nearest `f64`).
#[allow(clippy::excessive_precision)]
pub const PI_SQUARED: f64 = 9.869_604_401_089_358_618_8;

/// A closed-form density `exact_factor · π^(2·pi_squared_power)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPrediction {
    /// The rational part; for the π-dependent densities the factor 6 lives here.
    pub exact_factor: Rational,
    /// `0` or `-1`.
    pub pi_squared_power: i32,
    pub float_value: f64,
}

impl DensityPrediction {
    pub(crate) fn rational(exact_factor: Rational) -> Self {
        DensityPrediction {
            float_value: exact_factor.to_f64(),
            exact_factor,
            pi_squared_power: 0,
        }
    }

    pub(crate) fn over_pi_squared(exact_factor: Rational) -> Self {
        DensityPrediction {
            float_value: exact_factor.to_f64() / PI_SQUARED,
            exact_factor,
            pi_squared_power: -1,
        }
    }
}

/// Outcome of an exhaustive identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    /// Number of arguments examined.
    pub checked: u64,
    /// The smallest argument at which the identity failed.
    pub counterexample: Option<u64>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}
