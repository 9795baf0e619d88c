pub mod error;
pub mod exec;
pub mod special;
pub mod linalg;
pub mod modes;
pub mod fields;
pub mod residual;
pub mod closures;
pub mod deviation;
