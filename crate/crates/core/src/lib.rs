//! Decision procedures and constructive witnesses for submonoids of the
//! transformation monoid on `{0,1}*`, with total rational functions standing
//! in for arbitrary unary maps.

pub mod automata;
pub mod battery;
pub mod error;
pub mod expr;
pub mod monoids;
pub mod oracle;
pub mod profile;
pub mod regex;
pub mod suite;
pub mod transducer;
pub mod witnesses;
pub mod word;

pub use automata::{Lang, LangSummary};
pub use error::{Error, Result};
pub use profile::{fiber_profile, FiberProfile};
pub use transducer::{PartialFn, RationalFn};
pub use word::{Card, Word};
