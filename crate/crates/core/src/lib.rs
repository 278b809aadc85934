//! Mod-2 homology verification of torsion generating sets for the twist
//! subgroup of nonorientable mapping class groups.
//!
//! Layers, bottom up: [`gf2`] (bit-packed linear algebra), [`surface`]
//! (crosscap model and named curves), [`homology`] (twists as transvections,
//! word evaluation, signed determinants), [`stabchain`] (Schreier–Sims), and
//! [`ledger`] / [`report`] (the identity ledger and full verification run).

pub mod gf2;
pub mod homology;
pub mod ledger;
pub mod stabchain;
pub mod surface;
pub mod report;

pub use gf2::{BitMat, BitVec};
pub use homology::{eval_word, transvection, MappingClassWord};
pub use report::{verify, Report, VerifyError};
pub use stabchain::{bsgs, sp_order, target_isometry_order, StabChain};
pub use surface::{build_model, default_table, load_curves, CurveTable};
