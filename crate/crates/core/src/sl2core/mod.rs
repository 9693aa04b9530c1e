//! 2x2 matrices over Q_p, the distinguished subgroups and centralizers.

mod matrix;
mod subgroups;

pub use matrix::{Mat2, SL2Mat};
pub use subgroups::{
    borel_factor, centralizer_tag, commutant_basis, normalizer_checks, subgroup_membership,
    Centralizer, CommutantBasis, SubgroupTag,
};
