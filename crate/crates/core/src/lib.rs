pub mod slopes;
pub mod tangles;
pub mod diagrams;
pub mod manifolds;
pub mod covers;
pub mod harness;
