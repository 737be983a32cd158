//! Minimal double-double arithmetic for the Kato-series accumulation.
//!
//! Odd-order corrections cancel exactly in exact arithmetic, but the
//! surviving terms reach `||S||^(s-1)` in magnitude, so plain f64 products
//! leave noise near `1e-11` for small level gaps. Error-free transformations
//! (TwoSum and an FMA-based TwoProd) push the accumulation error to around
//! 1e-28, far below every tolerance in the crate. Only the operations the
//! series needs are implemented.

use crate::cvec::C64;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let lo = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let lo = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, lo);
        Dd { hi, lo }
    }
}

/// Complex double-double scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub const ZERO: DdC = DdC {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn from_c64(z: C64) -> DdC {
        DdC {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    #[inline]
    pub fn to_c64(self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn add(self, other: DdC) -> DdC {
        DdC {
            re: self.re.add(other.re),
            im: self.im.add(other.im),
        }
    }

    #[inline]
    pub fn mul(self, other: DdC) -> DdC {
        DdC {
            re: self.re.mul(other.re).sub(self.im.mul(other.im)),
            im: self.re.mul(other.im).add(self.im.mul(other.re)),
        }
    }
}

/// Dense square matrix over [`DdC`], row-major, just large enough for the
/// perturbation series.
#[derive(Debug, Clone)]
pub(crate) struct DdMatrix {
    pub dim: usize,
    pub entries: Vec<DdC>,
}

impl DdMatrix {
    pub fn from_c64(dim: usize, entries: &[C64]) -> DdMatrix {
        DdMatrix {
            dim,
            entries: entries.iter().map(|&z| DdC::from_c64(z)).collect(),
        }
    }

    pub fn mul(&self, other: &DdMatrix) -> DdMatrix {
        let n = self.dim;
        let mut out = vec![DdC::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                for j in 0..n {
                    let prod = a.mul(other.entries[k * n + j]);
                    out[i * n + j] = out[i * n + j].add(prod);
                }
            }
        }
        DdMatrix {
            dim: n,
            entries: out,
        }
    }

    pub fn trace(&self) -> DdC {
        let mut acc = DdC::ZERO;
        for i in 0..self.dim {
            acc = acc.add(self.entries[i * self.dim + i]);
        }
        acc
    }
}

/// Pairwise sum over complex double-double terms.
pub(crate) fn pairwise_sum_ddc(xs: &[DdC]) -> DdC {
    match xs.len() {
        0 => DdC::ZERO,
        1 => xs[0],
        2 => xs[0].add(xs[1]),
        n => {
            let mid = n / 2;
            pairwise_sum_ddc(&xs[..mid]).add(pairwise_sum_ddc(&xs[mid..]))
        }
    }
}
