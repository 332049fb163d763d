pub mod bounds;
pub mod ensembles;
pub mod harness;
pub mod linalg;
pub mod numrad;
pub mod orlicz;
pub mod rng;
