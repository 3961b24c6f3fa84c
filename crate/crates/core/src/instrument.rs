//! Counter for dense expansions of orthogonal factors.
//!
//! Factorization code applies reflector products only in factored form.
//! Every routine that materializes one as a dense matrix bumps a
//! thread-local counter, which tests read before and after a factorization.

use std::cell::Cell;

thread_local! {
    static DENSE_EXPANSIONS: Cell<usize> = const { Cell::new(0) };
}

pub(crate) fn record_dense_expansion() {
    DENSE_EXPANSIONS.with(|c| c.set(c.get() + 1));
}

/// Dense expansions performed on this thread so far.
pub fn dense_expansions() -> usize {
    DENSE_EXPANSIONS.with(Cell::get)
}
