pub mod field;
pub mod combinatorics;
pub mod characters;
pub mod params;
pub mod shuffle;
pub mod module_k;
pub mod correspondences;
pub mod verify;
