//! Construction and classification machinery for binary self-dual codes of
//! length 76 with an automorphism of order 9 and type 9-(8,0,4).

pub mod bitword;
pub mod code;
pub mod distance;
pub mod error;
pub mod hermitian;
pub mod perm;
pub mod ring;
pub mod shadow;
pub mod decomposition;
pub mod fixed_part;
pub mod equivalence;
pub mod analytics;

pub use bitword::BitWord;
pub use code::BinaryCode;
pub use distance::{min_distance, weight_distribution, DistancePlan, DistanceVerdict, Symmetry, WeightDistribution};
pub use error::{Error, Result};
