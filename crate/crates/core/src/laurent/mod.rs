//! F_q[t], F_q(t) and windowed truncations of F_q((1/t)).

mod coeff;
mod poly;
mod psi;
mod ratfn;
pub(crate) mod series;
mod stream;

pub use coeff::{Coeff, Lazy, Provenance};
pub use poly::Poly;
pub use psi::{psi, psi_l, psi_pow, split, unsplit};
pub use ratfn::RatFn;
pub use series::{Order, Series};
pub use stream::{GapRule, IrrationalStream};
