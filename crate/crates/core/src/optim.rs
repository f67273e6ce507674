//! Derivative-free optimization and scalar root bracketing: Nelder-Mead
//! simplex descent, golden-section maximization, and bisection.

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions<T> {
    /// Edge length of the initial simplex.
    pub initial_edge: T,
    /// Converged when the simplex diameter falls below this.
    pub diameter_tol: T,
    pub max_iterations: usize,
    pub restarts: usize,
}

impl<T: Scalar> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self {
            initial_edge: T::of(0.05),
            diameter_tol: T::of(1e-10),
            max_iterations: 500,
            restarts: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult<T> {
    pub x: Vec<T>,
    pub fx: T,
    pub converged: bool,
    pub evaluations: usize,
}

/// Minimize `f` starting from `x0`, restarting the simplex around the best
/// point after each convergence or iteration-budget exhaustion.
pub fn nelder_mead<T: Scalar>(
    mut f: impl FnMut(&[T]) -> T,
    x0: &[T],
    opts: &NelderMeadOptions<T>,
) -> NelderMeadResult<T> {
    let mut best_x = x0.to_vec();
    let mut best_f = f(&best_x);
    let mut evaluations = 1usize;
    let mut converged = false;
    let mut edge = opts.initial_edge;
    for _round in 0..=opts.restarts {
        let r = nm_single(&mut f, &best_x, edge, opts, &mut evaluations);
        if r.1 < best_f {
            best_x = r.0;
            best_f = r.1;
        }
        converged = r.2;
        // restart with a tighter simplex around the incumbent
        edge *= T::of(0.25);
    }
    NelderMeadResult {
        x: best_x,
        fx: best_f,
        converged,
        evaluations,
    }
}

fn nm_single<T: Scalar>(
    f: &mut impl FnMut(&[T]) -> T,
    x0: &[T],
    edge: T,
    opts: &NelderMeadOptions<T>,
    evaluations: &mut usize,
) -> (Vec<T>, T, bool) {
    let n = x0.len();
    let alpha = T::one(); // reflection
    let gamma = T::of(2.0); // expansion
    let rho = T::of(0.5); // contraction
    let sigma = T::of(0.5); // shrink

    let mut simplex: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += edge;
        simplex.push(v);
    }
    let mut fvals: Vec<T> = simplex.iter().map(|v| f(v)).collect();
    *evaluations += n + 1;

    let mut order: Vec<usize> = (0..=n).collect();
    for _iter in 0..opts.max_iterations {
        order.sort_by(|&a, &b| fvals[a].partial_cmp(&fvals[b]).unwrap());
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        // convergence on simplex diameter
        let mut diameter = T::zero();
        for i in 1..=n {
            let d: T = simplex[order[0]]
                .iter()
                .zip(&simplex[order[i]])
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<T>()
                .sqrt();
            diameter = diameter.max(d);
        }
        if diameter < opts.diameter_tol {
            return (simplex[best].clone(), fvals[best], true);
        }

        // centroid of all but the worst
        let mut centroid = vec![T::zero(); n];
        for &i in order.iter().take(n) {
            for (c, &xi) in centroid.iter_mut().zip(&simplex[i]) {
                *c += xi;
            }
        }
        for c in &mut centroid {
            *c /= T::of(n as f64);
        }

        let lerp = |from: &[T], towards: &[T], t: T| -> Vec<T> {
            from.iter()
                .zip(towards)
                .map(|(&a, &b)| a + t * (b - a))
                .collect()
        };

        // reflect the worst vertex through the centroid
        let reflected = lerp(&simplex[worst], &centroid, T::one() + alpha);
        let f_r = f(&reflected);
        *evaluations += 1;

        if f_r < fvals[best] {
            let expanded = lerp(&simplex[worst], &centroid, T::one() + alpha * gamma);
            let f_e = f(&expanded);
            *evaluations += 1;
            if f_e < f_r {
                simplex[worst] = expanded;
                fvals[worst] = f_e;
            } else {
                simplex[worst] = reflected;
                fvals[worst] = f_r;
            }
        } else if f_r < fvals[second_worst] {
            simplex[worst] = reflected;
            fvals[worst] = f_r;
        } else {
            let outside = f_r < fvals[worst];
            let contracted = if outside {
                lerp(&simplex[worst], &centroid, T::one() + alpha * rho)
            } else {
                lerp(&simplex[worst], &centroid, rho)
            };
            let f_c = f(&contracted);
            *evaluations += 1;
            let improved = if outside { f_c <= f_r } else { f_c < fvals[worst] };
            if improved {
                simplex[worst] = contracted;
                fvals[worst] = f_c;
            } else {
                // shrink towards the best vertex
                let best_point = simplex[best].clone();
                for &i in order.iter().skip(1) {
                    simplex[i] = lerp(&best_point, &simplex[i], sigma);
                    fvals[i] = f(&simplex[i]);
                }
                *evaluations += n;
            }
        }
    }
    order.sort_by(|&a, &b| fvals[a].partial_cmp(&fvals[b]).unwrap());
    (simplex[order[0]].clone(), fvals[order[0]], false)
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_section_max<T: Scalar>(mut f: impl FnMut(T) -> T, a: T, b: T, tol: T) -> (T, T) {
    let inv_phi = T::of(0.618_033_988_749_894_9);
    let (mut a, mut b) = (a, b);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    let xm = (a + b) / T::of(2.0);
    (xm, f(xm))
}

/// Bisection for a root of `f` inside a sign-changing bracket `[a, b]`.
pub fn bisect_root<T: Scalar>(mut f: impl FnMut(T) -> T, a: T, b: T, xtol: T) -> T {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    debug_assert!(fa * f(b) <= T::zero(), "bisect_root requires a sign change");
    while (b - a).abs() > xtol {
        let m = (a + b) / T::of(2.0);
        let fm = f(m);
        if fm == T::zero() {
            return m;
        }
        if (fa > T::zero()) == (fm > T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    (a + b) / T::of(2.0)
}

/// Scan `f` on a uniform grid over `[lo, hi]` and return every sign-change
/// bracket `(x_left, x_right)`.
pub fn sign_change_brackets<T: Scalar>(
    mut f: impl FnMut(T) -> T,
    lo: T,
    hi: T,
    steps: usize,
) -> Vec<(T, T)> {
    let mut out = Vec::new();
    let dx = (hi - lo) / T::of(steps as f64);
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..=steps {
        let x = lo + dx * T::of(i as f64);
        let fx = f(x);
        if f_prev.is_finite() && fx.is_finite() && f_prev * fx < T::zero() {
            out.push((x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let r = nelder_mead(
            |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2),
            &[0.0, 0.0],
            &NelderMeadOptions::default(),
        );
        assert!(r.converged);
        assert_relative_eq!(r.x[0], 1.5, epsilon = 1e-7);
        assert_relative_eq!(r.x[1], -0.5, epsilon = 1e-7);
        assert!(r.fx < 1e-14);
    }

    #[test]
    fn nelder_mead_handles_rosenbrock() {
        let r = nelder_mead(
            |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            &NelderMeadOptions {
                max_iterations: 2000,
                ..Default::default()
            },
        );
        assert_relative_eq!(r.x[0], 1.0, epsilon = 1e-5);
        assert_relative_eq!(r.x[1], 1.0, epsilon = 1e-5);
    }

    #[test]
    fn nelder_mead_one_dimensional() {
        let r = nelder_mead(
            |x: &[f64]| (x[0] - 0.25).powi(2),
            &[2.0],
            &NelderMeadOptions::default(),
        );
        assert_relative_eq!(r.x[0], 0.25, epsilon = 1e-7);
    }

    #[test]
    fn golden_section_maximizes() {
        let (x, fx) = golden_section_max(|x: f64| -(x - 2.0) * (x - 2.0) + 5.0, 0.0, 4.0, 1e-10);
        // the argument of a smooth maximum is only locatable to ~sqrt(eps)
        assert_relative_eq!(x, 2.0, epsilon = 1e-6);
        assert_relative_eq!(fx, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn bisection_and_bracketing() {
        let brackets = sign_change_brackets(|x: f64| x * x - 2.0, 0.0, 3.0, 300);
        assert_eq!(brackets.len(), 1);
        let (a, b) = brackets[0];
        let root = bisect_root(|x: f64| x * x - 2.0, a, b, 1e-13);
        assert_relative_eq!(root, 2f64.sqrt(), epsilon = 1e-12);
    }
}
