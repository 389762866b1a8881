//! Holds the `acceptance` test target; there is no library code.
//!
//! ```sh
//! cargo test -p mdag-verify --test acceptance
//! ```
