pub mod affine_weyl;
pub mod field;
pub mod puiseux;
pub mod rational;
pub mod gkm;
pub mod pi_map;
pub mod finite_cells;
