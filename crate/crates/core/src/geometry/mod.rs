//! Array coordinates, placements, sampled densities and their
//! discretization, and the flexible-curve array.

mod arrays;
mod curve;
mod density;
mod placement;

pub use arrays::{antenna_coordinates, receive_coordinates, Point3, ReceiveArray, TransmitArray};
pub use curve::{flexible_curve, place_on_curve, FlexibleCurve};
pub use density::{discretize_adf, empirical_adf, trapezoid_weights, Grid, SampledFunction};
pub use placement::{uniform_apf, Placement};
