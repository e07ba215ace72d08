//! Property predicates, hermitian-form extraction, completeness ranks and the
//! aggregated verification suite.

pub mod forms;
pub mod irreducibility;
pub mod suite;

pub use forms::{
    completeness_rank, completeness_rank_float, concomitant_forms, exact_rank, extract_forms, hermitian_form_matrix,
    independent_component_count, HermitianFormMatrix, Restriction,
};
pub use irreducibility::{duality_eigenvalue, irreducibility_report, DualitySign, IrreducibilityReport};
pub use suite::{completeness_report, run_suite, CompletenessReport, PropertyReport, PropertyResult, SuiteConfig, COUNT_TABLE};
