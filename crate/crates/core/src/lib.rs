pub mod affine;
pub mod bp;
pub mod bruhat;
pub mod classify;
pub mod error;
pub mod gens;
pub mod harness;
pub mod group;
pub mod indexed;
pub mod system;
pub mod weyl;

pub use error::{Error, Result};
pub use gens::{GenSet, Side};
pub use group::Coxeter;
pub use indexed::IndexedGroup;
pub use system::{CoxeterSystem, SubDiagram, SystemKey, TypeLabel};
pub use weyl::{Element, WeylGroup};
pub use bruhat::{BruhatInterval, Engine, Polynomial};
pub use bp::{BPRecord, BPWitness, Mode, RelativeDescentSet, Verdicts};
pub use classify::{
    table_elements, table_rows, verify_almostmax_lemmas, GrassStatus, GrassmannianClassification,
    SmoothnessVerdict, TableRow, Tower, TowerFactor,
};
pub use affine::{contains_pattern, AffineGroup, AffinePermutation, AffineVerdict, PatternVerdict};
pub use harness::{cmd_analyze, cmd_table, cmd_verify, replay, RunConfig, Suite, VerificationReport};
