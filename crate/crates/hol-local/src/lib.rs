pub mod algebra;
pub mod chain;
pub mod error;
pub mod lattice;
pub mod lmat;
pub mod modules;
pub mod morita;
pub mod order;
pub mod phi;
pub mod pi;
pub mod torus;

pub use algebra::{FiniteAlgebra, Quotient, VecQuotient, ENUMERATION_BUDGET};
pub use chain::{ChainDescriptor, LatticeChain};
pub use error::{LocalError, Result};
pub use lattice::Lattice;
pub use lmat::LMat;
pub use modules::{stably_free_test, Decomposition};
pub use morita::{BChain, BimoduleChain, ChainChecks, IsoCertificate};
pub use order::{ChainOrder, OrderInvariants};
pub use phi::{PhiBimodule, PhiEndomorphisms, PowerScalar, ResidueReport};
pub use pi::{PiElem, PiOrder};
pub use torus::{MaxTorus, TorusReport};
