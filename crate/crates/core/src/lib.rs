//! Veech groups of square-tiled surfaces.
//!
//! The crate models origamis as pairs of permutations, enumerates their
//! orbits under SL2(Z), builds the quaternion origami and the torsion-point
//! double covers `D_P`, and checks their Veech groups against explicit
//! congruence-group models. A separate module handles exact computations in
//! the quartic family `x⁴ + y⁴ + z⁴ + 2a x²y² + 2b x²z² + 2c y²z²`.

pub mod covers;
pub mod gf2;
pub mod modular;
pub mod orbit;
pub mod origami;
pub mod perm;
pub mod quartic;
pub mod sl2;

pub use orbit::{act_generator, orbit, veech_action, veech_contains, veech_generators, CosetAction, OrbitGraph};
pub use origami::{MinusOneLift, Origami, OrigamiError, Stratum};
pub use perm::Permutation;
pub use sl2::{decompose_word, Generator, GeneratorWord, MatZ};
