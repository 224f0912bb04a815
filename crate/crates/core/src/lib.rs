//! Weighted-average ensembles of classifier probability outputs, with the
//! member weights chosen by randomized search over Dirichlet-distributed
//! points of the probability simplex.
//!
//! The pipeline works on exported prediction matrices, never on models:
//!
//! 1. [`split`] assigns samples to train / validation / test per class.
//! 2. Each trained member exports its validation and test probabilities
//!    ([`io`] formats, tied together by a manifest).
//! 3. [`ensemble::search_weights`] scores the simplex vertices and then
//!    `trials` Dirichlet draws on the validation split.
//! 4. [`ensemble::evaluate_ensemble`] scores the chosen weights on test;
//!    [`ensemble::run_repeated`] repeats 3–4 with consecutive seeds.
//!
//! [`synth`] builds members with exact accuracies so all of this can be
//! exercised without any training.
//!
//! ```
//! use dirichlet_ensemble::prelude::*;
//!
//! let labels = synth::gen_labels(1000, 4, 1)?;
//! let (a, b) = synth::gen_complementary_pair(&labels, 0.9, 0.6, 2)?;
//! let both = ensemble::combine(&[&a, &b], &WeightVector::uniform(2))?;
//! assert_eq!(metrics::accuracy(&a, &labels)?, 0.5);
//! assert_eq!(metrics::accuracy(&both, &labels)?, 1.0);
//! # Ok::<(), dirichlet_ensemble::Error>(())
//! ```

pub mod ensemble;
pub mod error;
pub mod io;
pub mod metrics;
pub mod model;
pub mod report;
pub mod rng;
pub mod split;
pub mod synth;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::ensemble::{self, SearchConfig, SearchResult};
    pub use crate::io::{self, Dataset};
    pub use crate::metrics::{self, ConfusionMatrix, MetricSummary};
    pub use crate::model::{
        argmax_class, ClassCatalog, LabelVector, Member, MemberSet, PredictionMatrix, WeightVector,
    };
    pub use crate::report::{self, ReportDocument, ReportFormat};
    pub use crate::split::{self, SplitAssignment, SplitSpec, SplitTag};
    pub use crate::synth::{self, SynthMemberSpec};
    pub use crate::{Error, Result};
}
