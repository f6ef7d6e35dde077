pub mod chevalley;
pub mod cohomology;
pub mod hochschild;
pub mod linalg;
pub mod multivec;
pub mod poisson;
pub mod quasiroot;
pub mod rootsys;
pub mod scalar;
pub mod verify;
