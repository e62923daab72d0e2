//! Problem solvers plugged into the recursion driver.

pub mod coloring;
pub mod matching;
pub mod mis;
pub mod packing;
