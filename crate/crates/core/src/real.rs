//! Scalar abstraction for the numerical core.

use std::fmt;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the whole crate is generic over.
///
/// `f64` is what the CLI and the acceptance suite run at; `f32` is available
/// for quick low-precision experiments. The stated accuracy targets
/// (integrator tolerances, Bessel accuracy, table reproduction) assume `f64`.
pub trait Real:
    Float + FromPrimitive + fmt::Debug + fmt::Display + fmt::LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` constant (tableau entries, tolerances, tabulated
    /// reference values) into the working scalar type.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("constant not representable in this scalar type")
    }

    /// Widens to `f64` for reporting.
    fn into_f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
