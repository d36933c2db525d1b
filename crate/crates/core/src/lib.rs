//! Exact algebra over imperfect fields of positive characteristic: rational
//! function fields over GF(p^m), their differentials, and the two explicit
//! hypersurface families studied here (a degree-p family for odd p and a
//! cubic surface in characteristic 2).

pub mod cubic2;
pub mod differentials;
pub mod exactfield;
pub mod exprparse;
pub mod hyperkollar;
