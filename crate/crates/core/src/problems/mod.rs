//! Built-in problem instances.

mod american;
mod manufactured;
mod models;

pub use american::{american_put, american_put_benchmark, put_payoff};
pub use manufactured::{manufactured_smooth, ManufacturedKind, SLACK_OBSTACLE};
pub use models::{model1, model2, model2_theta, ExplicitModel, GhostPolicy, Jet, ModelKind, ModelParams};
