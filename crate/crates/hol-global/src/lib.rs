//! Global orders over the projective line `P^1 / F_q`.

pub mod descriptor;
pub mod error;
pub mod idele;
pub mod level;
pub mod pic;
pub mod torsor;
pub mod units;

pub use descriptor::{
    morita_equivalent, numeric_invariants, validate_csa, CsaDescriptor, MoritaReport, NumericInvariants, OrderDescriptor,
    OrderJson, PlaceJson,
};
pub use error::{GlobalError, Result};
pub use idele::{idele_trivial, Idele, LevelDivisor, LevelJson};
pub use level::{w_level_group, WLevelGroup};
pub use pic::{pic_canonicalize, pic_group, w_group, DivElem, PicElem, PicGroup, WGroup};
pub use torsor::{
    admissible_pairs, se_exists, torsor, twist_datum, AdmissiblePairs, DegreeZeroStatus, SlopeDivisor, SlopeJson,
    ThetaElem, ThetaGroup, TorsorDescriptor, TwistDatum, WFrobGroup,
};
pub use units::unit_group_order;
