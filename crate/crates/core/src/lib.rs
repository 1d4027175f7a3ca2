//! Online construction of run-length compressed Burrows-Wheeler transforms.
//!
//! The core is [`rle_string::RleString`], a dynamic string kept as maximal
//! runs that answers `rank`, `select`, `access` and `occ_<c` and accepts
//! inserts and deletes, all in time logarithmic in the number of runs. On
//! top of it [`bwt_builder::OnlineBwt`] reads a byte stream one character at
//! a time and maintains the run-length BWT of the reversed stream, so memory
//! follows the number of runs `r` rather than the input length.
//!
//! Building blocks:
//!
//! * [`spsi`]: B+trees over positive weights with prefix sums and weighted
//!   search.
//! * [`order_maintenance`]: a linked list whose items compare in O(1).
//! * [`io_format`]: text and binary files holding a run-length BWT.
//! * [`oracle`]: slow, obviously correct references used by the tests.
//!
//! ```
//! use online_rlbwt::bwt_builder::OnlineBwt;
//!
//! let mut bwt = OnlineBwt::new();
//! bwt.extend_all(b"abracadabra");
//! assert_eq!(bwt.invert(), b"abracadabra");
//! println!("{} runs", bwt.num_runs());
//! ```

pub mod bwt_builder;
pub mod cli;
pub mod error;
pub mod io_format;
pub mod oracle;
pub mod order_maintenance;
pub mod rle_string;
pub mod selftest;
pub mod spsi;
pub mod symbol;

pub use error::{Error, Result};
pub use symbol::{Run, Symbol};
