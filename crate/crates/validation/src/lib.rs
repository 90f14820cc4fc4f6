//! Acceptance checks over the worked examples in `corpus/`; see `tests/acceptance.rs`.
