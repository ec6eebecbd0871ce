pub mod calculus;
pub mod cli;
pub mod error;
pub mod extend;
pub mod gen;
pub mod io;
pub mod lexcore;
pub mod mvalg;
pub mod spectral;
pub mod stepfun;

pub use calculus::{marginal, meet_joint, neutral_observable, sum_observables, ObservableFamily};
pub use error::{Error, Result};
pub use extend::{
    extend_observable, observable_eval, oracle_observable, ExtensionMode, Observable, RegionSet,
};
pub use lexcore::{GVec, LexElem, LexOrdering, Rat};
pub use mvalg::{block_of, mv_validate, MvContext, MvElem};
pub use spectral::{
    characteristic_points, ordering_property, validate_spectral, CharPoint, Kind,
    SpectralResolution, ValidationReport,
};
pub use stepfun::{dec_normalize, Bound, DecReal, DiffOp, Grid, RawDec, StepFn};
