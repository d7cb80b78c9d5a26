use crate::numerics::wrap_phase;
use crate::C64;

/// Accumulates a product of elementary factors in log-domain.
///
/// Factors are multiplied in small batches and logged per batch: one complex
/// log per ~24 factors, with an early flush whenever the running batch leaves
/// a safe magnitude band. Phases are summed as reals and wrapped at the end;
/// only the phase mod 2π is meaningful.
pub(crate) struct LogAccumulator {
    log_mod: f64,
    phase: f64,
    batch: C64,
    count: u32,
    pub is_zero: bool,
}

const BATCH: u32 = 24;

impl LogAccumulator {
    pub fn new() -> Self {
        LogAccumulator { log_mod: 0.0, phase: 0.0, batch: C64::new(1.0, 0.0), count: 0, is_zero: false }
    }

    #[inline]
    pub fn push(&mut self, factor: C64) {
        if factor.re == 0.0 && factor.im == 0.0 {
            self.is_zero = true;
            return;
        }
        self.batch *= factor;
        self.count += 1;
        let n = self.batch.norm_sqr();
        if self.count >= BATCH || !(1e-120..=1e120).contains(&n) {
            self.flush();
        }
    }

    /// Add a precomputed complex logarithm (re = log-modulus, im = phase).
    #[inline]
    pub fn push_log(&mut self, l: C64) {
        if l.re == f64::NEG_INFINITY {
            self.is_zero = true;
            return;
        }
        self.log_mod += l.re;
        self.phase += l.im;
    }

    fn flush(&mut self) {
        if self.count > 0 {
            self.log_mod += self.batch.norm().ln();
            self.phase += self.batch.arg();
            self.batch = C64::new(1.0, 0.0);
            self.count = 0;
        }
    }

    /// Total (log-modulus, phase wrapped into (-π, π]).
    pub fn finish(mut self) -> (f64, f64) {
        self.flush();
        (self.log_mod, wrap_phase(self.phase))
    }
}
