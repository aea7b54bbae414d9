//! Exact combinatorial engine for free knot diagrams: enumerate every
//! crossing assignment of a shape, identify the resultant knots by their
//! Jones polynomials, and check the closed-form counting laws for tangle
//! families and connected sums.

pub mod classify;
pub mod diagram;
pub mod enumerate;
pub mod formulas;
pub mod polynomial;
pub mod statesum;
pub mod tangle;
