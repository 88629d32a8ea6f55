//! Generators and checkers for fractal pointsets: Cantor crossbars, the discrete
//! Sierpiński carpet, spanners with grid-minor and tree-decomposition certificates,
//! and two hardness-reduction compilers (≤-CSP to unit balls, Exact Cover to TSP).

pub mod cli;
pub mod csp;
pub mod dimension;
pub mod fractal;
pub mod geometry;
pub mod spanner;
pub mod svg;
pub mod tsp;
