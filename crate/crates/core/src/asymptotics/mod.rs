//! Closed-form large-k asymptotics and their comparison with the solver.

mod counting;
mod liouville;
mod wkb;
mod zeros;

pub use counting::{counting_bound_check, counting_constant, distance_to_pi_lattice, CountingCheck};
pub use liouville::{
    liouville_build, liouville_compare, p_of_r, pt_expansion, LiouvilleFrame, LiouvilleSample, MonotoneCubic,
    TABLE_POINTS,
};
pub use wkb::{wkb_compare, wkb_trace, WkbComparison, WkbPrediction};
pub use zeros::{asymptote_convergence, interlaces, zero_asymptote, AsymptoteRow, AsymptoteTable};
