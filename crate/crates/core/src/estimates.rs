//! Growth-exponent estimation and phase-transition sweeps.
