//! Shared enumeration engine: mixed-radix walks over roots-of-unity grids,
//! compensated summation, and a deterministic chunked executor.
//!
//! Determinism contract: work is partitioned into a chunk grid that depends
//! only on the problem (never on the thread count), each chunk is walked in
//! a fixed order, and chunk partials are reduced in chunk order. Results
//! are therefore bit-identical for any number of worker threads.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::contract_first_axis_into;
use crate::ExecPolicy;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Upper bound on the number of chunks handed to the executor.
const MAX_CHUNKS: u64 = 4096;

/// `order^(Σ dims)` as the enumeration point count, if representable.
pub(crate) fn grid_points(order: u32, dims: &[usize]) -> Option<u128> {
    let total: usize = dims.iter().sum();
    let mut acc: u128 = 1;
    for _ in 0..total {
        acc = acc.checked_mul(order as u128)?;
        if acc > u128::MAX / 2 {
            return None;
        }
    }
    Some(acc)
}

/// Checks an enumeration of `order^(Σ dims)` points against the budget.
pub(crate) fn check_budget(order: u32, dims: &[usize], policy: &ExecPolicy) -> Result<u128> {
    let required = grid_points(order, dims).ok_or(Error::Resource {
        required: u128::MAX,
        budget: policy.budget,
    })?;
    if required > policy.budget as u128 {
        return Err(Error::Resource { required, budget: policy.budget });
    }
    Ok(required)
}

/// Neumaier-compensated accumulator; deterministic for a fixed add order.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Odometer over the phase digits of one slot vector. Digits are
/// big-endian: the last index advances fastest.
pub(crate) struct PhaseOdometer {
    digits: Vec<u32>,
    pub vector: Vec<Complex64>,
}

impl PhaseOdometer {
    pub fn new(len: usize, roots: &[Complex64]) -> Self {
        Self { digits: vec![0; len], vector: vec![roots[0]; len] }
    }

    /// Starts at a given vector index (base-`M` big-endian digits).
    pub fn at_index(len: usize, roots: &[Complex64], index: u64) -> Self {
        let order = roots.len() as u64;
        let mut digits = vec![0u32; len];
        let mut rem = index;
        for k in (0..len).rev() {
            digits[k] = (rem % order) as u32;
            rem /= order;
        }
        let vector = digits.iter().map(|&d| roots[d as usize]).collect();
        Self { digits, vector }
    }

    /// Advances to the next assignment; `false` on wrap-around.
    pub fn advance(&mut self, roots: &[Complex64]) -> bool {
        let order = roots.len() as u32;
        for k in (0..self.digits.len()).rev() {
            self.digits[k] += 1;
            if self.digits[k] == order {
                self.digits[k] = 0;
                self.vector[k] = roots[0];
            } else {
                self.vector[k] = roots[self.digits[k] as usize];
                return true;
            }
        }
        false
    }
}

/// Walks every grid assignment of all axes but the last and hands the
/// contracted coefficient vector over the last axis to `f`.
///
/// `range` restricts the first axis to vector indices `[range.0, range.1)`;
/// the remaining axes are enumerated in full. Requires at least two axes.
pub(crate) fn walk_coeff_vectors<F: FnMut(&[Complex64])>(
    data: &[Complex64],
    dims: &[usize],
    roots: &[Complex64],
    range: (u64, u64),
    f: &mut F,
) {
    debug_assert!(dims.len() >= 2);
    let mut bufs: Vec<Vec<Complex64>> = Vec::with_capacity(dims.len() - 1);
    let mut rest: usize = dims[1..].iter().product();
    for &d in &dims[1..] {
        bufs.push(Vec::with_capacity(rest));
        rest /= d;
    }
    let (first_buf, deeper) = bufs.split_first_mut().expect("at least one buffer");
    let mut od = PhaseOdometer::at_index(dims[0], roots, range.0);
    for _ in range.0..range.1 {
        contract_first_axis_into(data, &od.vector, first_buf);
        walk_rec(first_buf, &dims[1..], roots, deeper, f);
        od.advance(roots);
    }
}

fn walk_rec<F: FnMut(&[Complex64])>(
    input: &[Complex64],
    dims: &[usize],
    roots: &[Complex64],
    bufs: &mut [Vec<Complex64>],
    f: &mut F,
) {
    if dims.len() == 1 {
        f(input);
        return;
    }
    let (buf, deeper) = bufs.split_first_mut().expect("buffer stack matches depth");
    let mut od = PhaseOdometer::new(dims[0], roots);
    loop {
        contract_first_axis_into(input, &od.vector, buf);
        walk_rec(buf, &dims[1..], roots, deeper, f);
        if !od.advance(roots) {
            break;
        }
    }
}

/// `max |c · v|` over all phase vectors `v` of the grid.
pub(crate) fn max_abs_over_phases(c: &[Complex64], roots: &[Complex64]) -> f64 {
    let mut od = PhaseOdometer::new(c.len(), roots);
    let mut best = 0.0f64;
    loop {
        let mut s = Complex64::new(0.0, 0.0);
        for (ck, vk) in c.iter().zip(&od.vector) {
            s += ck * vk;
        }
        let v = s.norm_sqr();
        if v > best {
            best = v;
        }
        if !od.advance(roots) {
            break;
        }
    }
    best.sqrt()
}

/// Adds `|c · v|^p` over all phase vectors `v` of the grid into `acc`.
pub(crate) fn sum_abs_pow_over_phases(
    c: &[Complex64],
    roots: &[Complex64],
    p: f64,
    acc: &mut CompensatedSum,
) {
    let half_p = 0.5 * p;
    let mut od = PhaseOdometer::new(c.len(), roots);
    loop {
        let mut s = Complex64::new(0.0, 0.0);
        for (ck, vk) in c.iter().zip(&od.vector) {
            s += ck * vk;
        }
        let m2 = s.norm_sqr();
        let v = if half_p == 1.0 {
            m2
        } else if half_p == 0.5 {
            m2.sqrt()
        } else {
            m2.powf(half_p)
        };
        acc.add(v);
        if !od.advance(roots) {
            break;
        }
    }
}

/// Splits the first-axis vector indices `0..total` into at most
/// [`MAX_CHUNKS`] contiguous ranges. The split depends only on `total`.
pub(crate) fn chunk_ranges(total: u64) -> Vec<(u64, u64)> {
    let n = total.min(MAX_CHUNKS).max(1);
    let base = total / n;
    let extra = total % n;
    let mut out = Vec::with_capacity(n as usize);
    let mut start = 0u64;
    for i in 0..n {
        let len = base + u64::from(i < extra);
        out.push((start, start + len));
        start += len;
    }
    debug_assert_eq!(start, total);
    out
}

/// Runs `work` over every chunk and returns the partials in chunk order.
///
/// With the `std` feature and more than one effective thread, chunks are
/// claimed from a shared cursor; the returned order is still the chunk
/// order, so reductions are scheduling-independent.
pub(crate) fn run_chunks<P, F>(chunks: usize, threads: usize, work: F) -> Vec<P>
where
    P: Send,
    F: Fn(usize) -> P + Sync,
{
    #[cfg(feature = "std")]
    {
        let effective = effective_threads(threads).min(chunks.max(1));
        if effective > 1 && chunks > 1 {
            use core::sync::atomic::{AtomicUsize, Ordering};
            let cursor = AtomicUsize::new(0);
            let mut labelled: Vec<(usize, P)> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..effective)
                    .map(|_| {
                        scope.spawn(|| {
                            let mut local = Vec::new();
                            loop {
                                let i = cursor.fetch_add(1, Ordering::Relaxed);
                                if i >= chunks {
                                    break;
                                }
                                local.push((i, work(i)));
                            }
                            local
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("enumeration worker panicked"))
                    .collect()
            });
            labelled.sort_unstable_by_key(|(i, _)| *i);
            return labelled.into_iter().map(|(_, p)| p).collect();
        }
    }
    #[cfg(not(feature = "std"))]
    let _ = threads;
    (0..chunks).map(work).collect()
}

#[cfg(feature = "std")]
fn effective_threads(threads: usize) -> usize {
    if threads == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        threads
    }
}
