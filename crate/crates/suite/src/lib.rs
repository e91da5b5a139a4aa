//! Holds the acceptance target in `tests/acceptance.rs`; run it with
//! `cargo test -p exitplan-suite --test acceptance`.
