//! Exact computation of Ext groups between finite conformal modules over the
//! Virasoro conformal algebra, current conformal algebras, their semidirect
//! sum, and the Virasoro-plus-abelian-current case, with every cocycle checked
//! against a truncated mode-algebra oracle.

pub mod exactnum;
pub mod multipoly;
pub mod liealg;
pub mod confmod;
pub mod extsolver;
pub mod modeoracle;
