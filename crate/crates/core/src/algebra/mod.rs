//! Exact arithmetic over finite abelian groups: homomorphisms, length-one
//! chain complexes, their homology, and truncated tensor products.

mod complex;
mod group;
pub mod snf;
mod tensor;

pub use complex::{ChainMap, Homology, TruncComplex1};
pub use group::{
    gcd, lcm, AbHom, Elem, Elements, FinAbGroup, Quotient, Ring, Subgroup, DEFAULT_ENUM_BOUND,
};
pub use tensor::{tensor_groups, tensor_hom, truncated_tensor, tensor_map, TruncTensor};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("modulus {0} is not at least 2")]
    BadModulus(u64),
    #[error("component {0} has order 0; only finite groups are supported")]
    InfiniteComponent(usize),
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    TooLarge { order: u128, bound: u128 },
    #[error("matrix shape {got:?} does not match expected {expected:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error(
        "entry ({row},{col}) = {entry} is not a homomorphism Z/{source_order} -> Z/{target_order}"
    )]
    Incompatible {
        row: usize,
        col: usize,
        entry: i64,
        source_order: u64,
        target_order: u64,
    },
    #[error("homomorphisms are not composable")]
    NotComposable,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
}
