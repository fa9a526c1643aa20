//! Hyperpartitions and the finite regularity diagnostics built on them.
//!
//! Class sizes at level `r` are measured against `C(n, r)`, the number of
//! unordered `r`-subsets. Level 1 has no cylinder intersections (they need
//! `0`-uniform parts) and is assessed by equitability alone.

mod cells;
mod cylinder;
mod independence;
mod partition;

pub use cells::{
    cell_approximation, cell_density, cell_stats, extract_step_hypergraphon, induce_cells,
    CellApproximation, CellProfile, CellStats,
};
pub use cylinder::{
    check_regularity_exhaustive, check_regularity_family, check_regularity_sampled,
    regularity_deviation, CheckMode, CylinderIntersection, Deviation, RegularityReport,
    DEFAULT_DENSITY_GRID,
};
pub use independence::{independence_test, IndependenceStatistic};
pub use partition::{
    equitability, latent_hyperpartition, random_hyperpartition, Equitability, Hyperpartition,
};
