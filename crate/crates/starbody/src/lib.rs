//! Radial set-distances for star bodies in R^d.
//!
//! Star bodies are represented by their radial functions (extended-real maps
//! on unit directions). On top of that single representation the crate
//! computes the radial distance functional and the metrics built from it
//! (radial metric, radial Attouch-Wets distance), their classical
//! counterparts (Hausdorff, Attouch-Wets), the star/flower/polar dualities,
//! and classifies convergence of parametrized star-body sequences under all
//! five notions.
//!
//! Every sup/inf over the sphere is evaluated on a deterministic finite
//! direction grid ([`grid::SphereGrid`]); grid slack is explicit and reported,
//! never silently absorbed.

pub mod body;
pub mod bodyspec;
pub mod checks;
pub mod convergence;
pub mod corpus;
pub mod direction;
pub mod dual;
pub mod error;
pub mod euclid;
pub mod grid;
pub mod profile;
pub mod radial;
pub mod report;
pub mod seed;
pub mod shapes;
pub mod xreal;

pub use body::{Hints, StarBody};
pub use direction::Direction;
pub use error::{Error, Result};
pub use grid::{make_grid, SphereGrid};
pub use profile::RadialProfile;
pub use seed::{ConvexSeed, SeedShape};
pub use shapes::Shape;
pub use xreal::XReal;
