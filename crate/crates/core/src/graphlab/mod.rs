//! Graphs: model, I/O, random sampling, oracles, and the full-dimension
//! certificate for random graphs.

pub mod bes;
mod graph;
pub mod graph6;
pub mod iso;
pub mod metric;
pub mod random;
pub mod reconstruct;

pub use bes::{bes_certificate, bes_certificate_any_r, bes_statistics, bes_statistics_with_r, smallest_certifying_r, BesReport, Certificate, CertificateFailure};
pub use graph::Graph;
pub use graph6::{graph6_emit, graph6_parse, parse_corpus};
pub use iso::{are_isomorphic, enumerate_graphs, IsoVerdict};
pub use metric::{distance_and_diameter, intersection_array, srg_parameters, IntersectionArray, SrgParameters};
pub use random::random_gnp_half;
pub use reconstruct::{reconstruct, ReconstructFailure, Reconstruction};
