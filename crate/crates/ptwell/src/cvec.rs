//! Small helpers for dense complex vectors stored as slices.

use num_complex::Complex64;

/// Double-precision complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Euclidean norm.
pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Inner product `<a, b>`, conjugate-linear in the first argument.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Scales `v` to unit norm in place and returns the original norm.
pub fn normalize(v: &mut [C64]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// Index of the component with the largest modulus; ties resolve to the
/// lowest index so downstream gauge fixes are deterministic.
pub fn argmax_modulus(v: &[C64]) -> usize {
    let mut best = 0;
    let mut best_mod = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mod + 1e-12 * best_mod.max(1.0) {
            best = i;
            best_mod = m;
        }
    }
    best
}

/// Rotates the global phase so the largest-modulus component is real and
/// non-negative.
pub fn fix_phase(v: &mut [C64]) {
    let k = argmax_modulus(v);
    let m = v[k].norm();
    if m > 0.0 {
        let phase = v[k] / m;
        let rot = phase.conj();
        for z in v.iter_mut() {
            *z *= rot;
        }
        // kill rounding residue in the pivot component
        v[k] = C64::new(v[k].re.abs(), 0.0);
    }
}

/// Distance `min over theta of ||a - e^{i theta} b||`.
///
/// The optimal phase is evaluated explicitly and the residual is formed
/// componentwise; the closed form `sqrt(2 - 2|<a,b>|)` loses half the
/// significant digits near zero and is avoided on purpose.
pub fn aligned_distance(a: &[C64], b: &[C64]) -> f64 {
    let c = dot(b, a);
    let rot = if c.norm() > 0.0 {
        c / c.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - rot * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Deterministic pairwise summation; used where term order must not depend
/// on accumulation strategy.
pub fn pairwise_sum(xs: &[C64]) -> C64 {
    match xs.len() {
        0 => C64::new(0.0, 0.0),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}
