//! Quadratic observables and the three-way expectation engine.

mod engines;
mod observable;
mod uncertainty;

pub use engines::{
    density_weighted, ensemble_average_classical, ensemble_average_closed,
    ensemble_average_closed_with_order, ensemble_average_mc, fisher_term, mean_momentum,
    quantum_expectation, quantum_expectation_with_order, McEstimate,
};
pub use observable::{Coeff, ObservableBuilder, QuadraticObservable};
pub use uncertainty::{
    uncertainty_chain, uncertainty_product, uncertainty_product_mc, McUncertaintyReport,
    UncertaintyReport,
};

#[cfg(test)]
mod tests;
