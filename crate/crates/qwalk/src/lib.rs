//! Continuous-time quantum walks on Q-graphs of regular graphs: closed-form
//! spectra and projectors, transfer amplitudes, perfect-state-transfer
//! certificates, and pretty-good-state-transfer witness searches.

pub mod graph;
pub mod qgraph;
pub mod quadratic;
pub mod spectral;
pub mod transfer;
pub mod walk;

pub use graph::{classify, incidence, line_graph, make_family, q_graph, read_edge_list, write_edge_list, Graph};
pub use qgraph::{closed_form_eigenvectors, closed_form_spectrum, qgraph_context, qgraph_projectors};
pub use quadratic::{square_free_part, QuadraticNumber};
pub use spectral::{eigendecompose, eigenvalue_support, strong_cospectrality, SpectralDecomposition};
pub use transfer::{pgst_witness_search, pst_check, qgraph_no_pst_certificate, Tolerances};
pub use walk::{amplitude, fidelity_scan, qgraph_amplitude, transition_matrix};
