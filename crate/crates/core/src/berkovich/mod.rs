//! The half-plane of balls `eta_{a,r}`: metric, group action, reduction to
//! the ray `eta_{0,r}, r <= 0`, and promenades.

mod mobius;
mod point;
mod prefix;
mod ray;

pub use mobius::{radius_shift, Generator, Matrix, MobiusElt};
pub use point::{Ball, BallKind, BerkPoint};
pub use prefix::{ball_of_prefix, prefix_radius, prefix_representation, rho_word, PrefixRepresentation};
pub use ray::{
    doubled_sums, ray_value, reduce_to_ray, Promenade, PromenadeTail, Reduction, DEFAULT_REDUCTION_STEPS,
};
