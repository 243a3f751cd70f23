pub mod foliate;
pub mod lift;
pub mod mesh;
pub mod selftest;
pub mod stokes;
