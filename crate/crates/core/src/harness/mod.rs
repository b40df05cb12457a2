//! Experiment harness: configuration, coverage campaigns, lemma checks and
//! figure data, all written as CSV with a metadata line carrying the config
//! hash and seed.

pub mod campaign;
pub mod config;
pub mod figures;
pub mod lemmas;
pub mod report;

pub use campaign::{run_campaign, write_campaign, CampaignReport};
pub use config::{ExperimentConfig, RawConfig, Theorem};
pub use figures::{emit_figure_data, FigureId};
pub use lemmas::{verify_lemma, write_lemma, LemmaId, LemmaReport};
