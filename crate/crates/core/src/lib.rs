pub mod exactalg;
pub mod linalg;
pub mod lrs;
pub mod mahler;
pub mod multdecomp;
pub mod ore;
pub mod regular;
pub mod report;
pub mod sequence;
pub mod series;
