//! Survival estimation under independent and Clayton-dependent censoring.

pub mod concordance;
pub mod copula;
pub mod cox;
pub mod curve;
pub mod dependent;
mod optim;
pub mod record;
pub mod select;

pub use concordance::harrell_c;
pub use copula::{alpha_of_tau, clayton, tau_of_alpha};
pub use cox::{cox_partial_loglik, cox_univariate, CoxEstimate};
pub use curve::{cg_curve, kaplan_meier, CurvePoint, StepSurvivalCurve};
pub use dependent::{dependent_cox, dependent_cox_with, CumulativeHazard, DependentCoxEstimate, DependentCoxOptions};
pub use record::{records_from_table, SurvivalRecord};
pub use select::{select_alpha, select_features_dependent, AlphaSelection, SignificantFeature};
