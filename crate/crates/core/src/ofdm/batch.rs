use num_complex::Complex;
use rayon::prelude::*;

use super::constellation::Constellation;
use super::frame::{ensemble_variance, fill_random};
use super::idft::IdftPlan;
use super::symbol::{Samples, TimeSymbol};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::scalar::Real;

/// Symbols per work unit in [`SymbolSource::fold`]. Partial results are
/// merged in chunk order, so output is independent of the thread count.
const CHUNK: u64 = 512;

/// Deterministic source of OFDM symbols: symbol `i` is drawn from substream
/// `i` of `seed`.
#[derive(Debug, Clone)]
pub struct SymbolSource<T> {
    constellation: Constellation<T>,
    seed: u64,
    hermitian: bool,
    plan: IdftPlan<T>,
}

impl<T: Real> SymbolSource<T> {
    pub fn new(n: usize, constellation: Constellation<T>, seed: u64, hermitian: bool) -> Result<Self> {
        Ok(Self {
            plan: IdftPlan::new(n)?,
            constellation,
            seed,
            hermitian,
        })
    }

    pub fn n(&self) -> usize {
        self.plan.n()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn constellation(&self) -> &Constellation<T> {
        &self.constellation
    }

    pub fn sigma2(&self) -> T {
        ensemble_variance(self.n(), self.hermitian)
    }

    fn empty_symbol(&self) -> TimeSymbol<T> {
        if self.hermitian {
            TimeSymbol::real(Vec::with_capacity(self.n()), self.sigma2())
        } else {
            TimeSymbol::complex(Vec::with_capacity(self.n()), self.sigma2())
        }
    }

    fn fill(&self, index: u64, work: &mut Vec<Complex<T>>, sym: &mut TimeSymbol<T>) -> Result<()> {
        let mut rng = substream(self.seed, index);
        work.resize(self.n(), Complex::new(T::zero(), T::zero()));
        fill_random(work, &self.constellation, &mut rng, self.hermitian);
        match &mut sym.samples {
            Samples::Real(out) => self.plan.transform_real_into(work, out),
            Samples::Complex(out) => {
                self.plan.process(work);
                out.clear();
                out.extend_from_slice(work);
                Ok(())
            }
        }
    }

    /// Symbol number `index` of this source.
    pub fn symbol(&self, index: u64) -> Result<TimeSymbol<T>> {
        let mut work = Vec::with_capacity(self.n());
        let mut sym = self.empty_symbol();
        self.fill(index, &mut work, &mut sym)?;
        Ok(sym)
    }

    /// Sequential stream of symbols `0..count`.
    pub fn stream(&self, count: u64) -> Result<SymbolStream<T>> {
        if count == 0 {
            return Err(Error::InvalidArgument("symbol count must be at least 1".into()));
        }
        Ok(SymbolStream {
            source: self.clone(),
            next: 0,
            count,
        })
    }

    /// Folds symbols `0..count` in parallel.
    ///
    /// Each chunk of consecutive indices is folded from `init()`; chunk
    /// results are then merged left to right. Memory is `O(N)` per worker
    /// plus one accumulator per chunk.
    pub fn fold<A, I, F, M>(&self, count: u64, init: I, fold: F, merge: M) -> Result<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, &TimeSymbol<T>) + Sync,
        M: Fn(&mut A, A),
    {
        if count == 0 {
            return Err(Error::InvalidArgument("symbol count must be at least 1".into()));
        }
        let chunks = count.div_ceil(CHUNK);
        let partials: Vec<Result<A>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = init();
                let mut work = Vec::with_capacity(self.n());
                let mut sym = self.empty_symbol();
                for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                    self.fill(i, &mut work, &mut sym)?;
                    fold(&mut acc, &sym);
                }
                Ok(acc)
            })
            .collect();
        let mut it = partials.into_iter();
        let mut total = it.next().expect("at least one chunk")?;
        for p in it {
            merge(&mut total, p?);
        }
        Ok(total)
    }
}

/// Iterator over consecutive symbols of a [`SymbolSource`].
#[derive(Debug, Clone)]
pub struct SymbolStream<T> {
    source: SymbolSource<T>,
    next: u64,
    count: u64,
}

impl<T: Real> Iterator for SymbolStream<T> {
    type Item = Result<TimeSymbol<T>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.count {
            return None;
        }
        let s = self.source.symbol(self.next);
        self.next += 1;
        Some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.count - self.next) as usize;
        (left, Some(left))
    }
}

/// Streams `count` independent symbols of `n` subcarriers drawn from
/// `constellation` under `seed`.
pub fn batch_generate<T: Real>(
    count: u64,
    n: usize,
    constellation: &Constellation<T>,
    seed: u64,
    hermitian: bool,
) -> Result<SymbolStream<T>> {
    SymbolSource::new(n, constellation.clone(), seed, hermitian)?.stream(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ofdm::{idft, FrequencyFrame};

    #[test]
    fn single_symbol_equals_frame_composition() {
        let c = Constellation::<f64>::new(64).unwrap();
        let mut s = batch_generate(1, 64, &c, 42, true).unwrap();
        let first = s.next().unwrap().unwrap();
        assert!(s.next().is_none());
        let frame = FrequencyFrame::random(64, &c, &mut substream(42, 0), true).unwrap();
        assert_eq!(first, idft(&frame).unwrap());
    }

    #[test]
    fn zero_count_is_rejected() {
        let c = Constellation::<f64>::new(4).unwrap();
        assert!(batch_generate(0, 64, &c, 1, true).is_err());
        let src = SymbolSource::new(64, c, 1, true).unwrap();
        assert!(src.fold(0, || 0, |_, _| {}, |_, _| {}).is_err());
    }

    #[test]
    fn parallel_fold_matches_sequential_stream() {
        let c = Constellation::<f64>::new(4).unwrap();
        let src = SymbolSource::new(32, c, 5, true).unwrap();
        let seq: Vec<f64> = src
            .stream(1500)
            .unwrap()
            .map(|s| s.unwrap().real_samples().unwrap()[3])
            .collect();
        let par = src
            .fold(
                1500,
                Vec::new,
                |v: &mut Vec<f64>, s| v.push(s.real_samples().unwrap()[3]),
                |a, b| a.extend(b),
            )
            .unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn complex_mode_stream() {
        let c = Constellation::<f64>::new(4).unwrap();
        let s = batch_generate(3, 16, &c, 9, false).unwrap().next().unwrap().unwrap();
        assert!(!s.is_real());
        assert_eq!(s.sigma2, 1.0);
        assert_eq!(s.n(), 16);
    }
}
