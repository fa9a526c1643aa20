//! Finite hypergraph limit theory.
//!
//! Homomorphism counts and densities between `k`-uniform hypergraphs, step
//! hypergraphons with their density integral, `W`-random sampling with
//! latent coordinates, hyperpartition and regularity diagnostics, and
//! removal experiments driven by minimum hitting sets.

pub mod error;
pub mod homomorphism;
pub mod hypergraph;
pub mod hypergraphon;
mod io;
pub mod regularity;
pub mod removal;
pub mod rng;
pub mod sampling;
pub mod simplicial;
pub mod subsets;

pub use error::{Error, Result};
pub use homomorphism::{
    disjoint_union, enumerate_hom_images, hom_count, hom_density, HomCount, HomDensity,
    HomImageSet,
};
pub use hypergraph::UniformHypergraph;
pub use hypergraphon::{DensityEstimate, StepHypergraphon, ValueKind};
pub use removal::{removal_experiment, Method, RemovalResult};
pub use sampling::{sample_w_random, Latent, LatentSample};
pub use simplicial::SimplicialSupport;
pub use subsets::{SubsetIndexing, MAX_ARITY};
