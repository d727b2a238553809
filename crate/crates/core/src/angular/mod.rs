//! Exact angular-momentum algebra: coefficients, N-spin reduction,
//! democratic coupling and binary coupling trees.

mod coeffs;
mod democratic;
mod exact;
mod spin;
mod tables;
mod trees;

pub use coeffs::{clebsch_gordan, nine_j, nine_j_sum, racah_w, six_j, triangle, wigner_3j, HalfInt};
pub use democratic::{
    democratic_coupling, irreducibility_norm, k_operator, permutation_operator, single_spin,
    DemocraticBasis, DemocraticState,
};
pub use exact::{rational_sqrt, ExactReal, ExactRepr, RadicalSum};
pub use spin::{
    decompose_product, decompose_product_with_cap, spin_multiplicity, total_spin_operators,
    total_spin_operators_with_cap, total_spin_squared, twice_projection, BlockRange, BlockSpec,
    ColumnLabel, ProductDecomposition,
};
pub use tables::{cg_row, cg_table, nine_j_row, six_j_row, CgRow, NineJRow, SixJRow};
pub use trees::{
    count_unordered, coupling_counts, double_factorial_count, enumerate_trees, recoupling_amplitude,
    recoupling_sum, CouplingCounts, CouplingNode, CouplingTree, TreeKind, TreeShape,
};
