//! Discretised functional data and the numerical primitives shared by the
//! regression, analysis and simulation modules.

mod derivative;
mod kernel;
mod quadrature;
mod semimetric;
mod types;

pub use derivative::{derivative, first_derivative, second_derivative};
pub use kernel::{kernel_eval, KernelKind, KernelSpec};
pub use quadrature::{integrated_squared_error, trapezoid_integral, trapezoid_weights};
pub use semimetric::{semi_metric, SemiMetricSpec};
pub use types::{Curve, CurveSeries, Grid};

pub(crate) use quadrature::{trapezoid_unchecked, weighted_sq_dist};
pub(crate) use semimetric::{DistanceMatrix, TransformedCurves};
