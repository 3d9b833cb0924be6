//! Criterion benches for the field, surface and code kernels (`benches/`)
//! and the acceptance run (`tests/acceptance.rs`).
