//! Combined propagators for `C(X) ∧ C(Y) ∧ X ≤lex Y`.

pub mod generic;
pub mod regular;
pub mod sequence;

pub use generic::{
    c_max, c_min, clex_lb, clex_ub, mark_consistent_values, propagate_clex, ClexPropagator, Marks,
    RegularRow, RowConstraint, RowPropagator, SumRow, Unconstrained,
};
pub use regular::{
    build_product_dfa, clex_lb_regular, clex_ub_regular, interleave, mark_consistent_arcs,
    post_clex_regular_product, post_product, propagate_clex_regular, ClexRegularPropagator, Phase,
    ProductDfa, ProductState,
};
pub use sequence::{
    bit_domains, check_consistency_max, check_consistency_min, post_clex_sequence,
    propagate_clex_sequence, smallest_supports, Channel, ClexSequencePropagator, SequenceDfa,
    SequenceError, SequenceRow, SequenceSpec,
};
