// Negated float comparisons reject NaN in parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod field;
pub mod gossip;
pub mod graph;
pub mod parallel;
pub mod queue;
pub mod rng;
pub mod stats;
pub mod bounds;
pub mod cli;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/gossip.md")]
    mod gossip {}
    #[doc = include_str!("../../../book/src/queues.md")]
    mod queues {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/scaling.md")]
    mod scaling {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
