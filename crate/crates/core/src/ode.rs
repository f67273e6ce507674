//! Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)) for
//! complex state vectors, with dense output for sampling on a fixed grid.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl<T: Scalar> Default for OdeOptions<T> {
    fn default() -> Self {
        Self {
            rtol: T::of(1e-8),
            atol: T::of(1e-12),
            max_steps: 2_000_000,
        }
    }
}

struct Dp54<T> {
    a: [[T; 6]; 6],
    c: [T; 6],
    b: [T; 7],
    e: [T; 7],
    d: [T; 7],
}

fn tableau<T: Scalar>() -> Dp54<T> {
    let f = T::of;
    let z = T::zero();
    Dp54 {
        c: [
            f(1.0 / 5.0),
            f(3.0 / 10.0),
            f(4.0 / 5.0),
            f(8.0 / 9.0),
            f(1.0),
            f(1.0),
        ],
        a: [
            [f(1.0 / 5.0), z, z, z, z, z],
            [f(3.0 / 40.0), f(9.0 / 40.0), z, z, z, z],
            [f(44.0 / 45.0), f(-56.0 / 15.0), f(32.0 / 9.0), z, z, z],
            [
                f(19372.0 / 6561.0),
                f(-25360.0 / 2187.0),
                f(64448.0 / 6561.0),
                f(-212.0 / 729.0),
                z,
                z,
            ],
            [
                f(9017.0 / 3168.0),
                f(-355.0 / 33.0),
                f(46732.0 / 5247.0),
                f(49.0 / 176.0),
                f(-5103.0 / 18656.0),
                z,
            ],
            [
                f(35.0 / 384.0),
                z,
                f(500.0 / 1113.0),
                f(125.0 / 192.0),
                f(-2187.0 / 6784.0),
                f(11.0 / 84.0),
            ],
        ],
        b: [
            f(35.0 / 384.0),
            z,
            f(500.0 / 1113.0),
            f(125.0 / 192.0),
            f(-2187.0 / 6784.0),
            f(11.0 / 84.0),
            z,
        ],
        // b - b* (5th minus embedded 4th order weights)
        e: [
            f(35.0 / 384.0 - 5179.0 / 57600.0),
            z,
            f(500.0 / 1113.0 - 7571.0 / 16695.0),
            f(125.0 / 192.0 - 393.0 / 640.0),
            f(-2187.0 / 6784.0 + 92097.0 / 339200.0),
            f(11.0 / 84.0 - 187.0 / 2100.0),
            f(-1.0 / 40.0),
        ],
        // dense-output weights (Hairer DOPRI5 rcont5)
        d: [
            f(-12715105075.0 / 11282082432.0),
            z,
            f(87487479700.0 / 32700410799.0),
            f(-10690763975.0 / 1880347072.0),
            f(701980252875.0 / 199316789632.0),
            f(-1453857185.0 / 822651844.0),
            f(69997945.0 / 29380423.0),
        ],
    }
}

/// Integrate `dy/dt = f(t, y)` from `t0` to `t_end`, sampling the solution at
/// the (ascending) `outputs` times via 4th-order dense output. Returns one
/// state vector per output time.
pub fn integrate<T, F>(
    mut f: F,
    t0: T,
    t_end: T,
    y0: &[Complex<T>],
    outputs: &[T],
    opts: &OdeOptions<T>,
) -> Result<Vec<Vec<Complex<T>>>>
where
    T: Scalar,
    F: FnMut(T, &[Complex<T>], &mut [Complex<T>]),
{
    let n = y0.len();
    let tab = tableau::<T>();
    let zero = Complex::new(T::zero(), T::zero());

    debug_assert!(outputs.windows(2).all(|w| w[1] >= w[0]));
    let mut results: Vec<Vec<Complex<T>>> = Vec::with_capacity(outputs.len());
    let mut out_iter = outputs.iter().copied().peekable();

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<Complex<T>>> = (0..7).map(|_| vec![zero; n]).collect();
    let mut y_stage = vec![zero; n];
    let mut y_new = vec![zero; n];

    f(t, &y, &mut k[0]);

    // emit any output points at or before t0
    while let Some(&tq) = out_iter.peek() {
        if tq <= t {
            results.push(y.clone());
            out_iter.next();
        } else {
            break;
        }
    }
    if t >= t_end && out_iter.peek().is_none() {
        return Ok(results);
    }

    // initial step heuristic
    let span = t_end - t0;
    let mut h = (span / T::of(100.0)).min(T::of(0.1)).max(T::of(1e-6));
    let mut rejected_in_a_row = 0usize;

    for _step in 0..opts.max_steps {
        if t >= t_end {
            break;
        }
        if t + h > t_end {
            h = t_end - t;
        }

        // stages
        for s in 0..6 {
            for i in 0..n {
                let mut acc = zero;
                for (j, kj) in k.iter().enumerate().take(s + 1) {
                    let a = tab.a[s][j];
                    if a != T::zero() {
                        acc += kj[i] * a;
                    }
                }
                y_stage[i] = y[i] + acc * h;
            }
            let ts = t + tab.c[s] * h;
            let (head, tail) = k.split_at_mut(s + 1);
            let _ = head;
            f(ts, &y_stage, &mut tail[0]);
        }

        // 5th-order solution and error estimate
        let mut err_sq = T::zero();
        for i in 0..n {
            let mut acc = zero;
            let mut errc = zero;
            for (j, kj) in k.iter().enumerate() {
                if tab.b[j] != T::zero() {
                    acc += kj[i] * tab.b[j];
                }
                if tab.e[j] != T::zero() {
                    errc += kj[i] * tab.e[j];
                }
            }
            y_new[i] = y[i] + acc * h;
            let scale = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
            let e = (errc * h).norm() / scale;
            err_sq += e * e;
        }
        let err = (err_sq / T::of(n as f64)).sqrt();

        if err <= T::one() {
            // accept; k[6] already holds f(t_new, y_new) since the last stage
            // of DP54 is evaluated at the 5th-order solution (FSAL)
            let t_new = t + h;

            // dense output inside [t, t_new]
            while let Some(&tq) = out_iter.peek() {
                if tq > t_new {
                    break;
                }
                let theta = ((tq - t) / h).max(T::zero()).min(T::one());
                results.push(dense_eval(&tab, &y, &y_new, &k, h, theta));
                out_iter.next();
            }

            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6); // FSAL
            rejected_in_a_row = 0;

            // step-size update
            let order_root = T::of(0.2);
            let fac = if err > T::zero() {
                (T::one() / err).powf(order_root) * T::of(0.9)
            } else {
                T::of(5.0)
            };
            h *= fac.max(T::of(0.2)).min(T::of(5.0));
        } else {
            rejected_in_a_row += 1;
            if rejected_in_a_row > 60 {
                return Err(Error::Integration {
                    t: t.as_f64(),
                    reason: "step size underflow (too many rejected steps)".into(),
                });
            }
            let fac = (T::one() / err).powf(T::of(0.2)) * T::of(0.9);
            h *= fac.max(T::of(0.1));
            if !(h > T::zero()) || t + h == t {
                return Err(Error::Integration {
                    t: t.as_f64(),
                    reason: "step size underflow".into(),
                });
            }
        }

        if t >= t_end && out_iter.peek().is_none() {
            break;
        }
    }

    // flush trailing outputs exactly at t_end
    while let Some(&tq) = out_iter.peek() {
        if tq <= t + T::of(1e-9) {
            results.push(y.clone());
            out_iter.next();
        } else {
            return Err(Error::Integration {
                t: t.as_f64(),
                reason: format!("ran out of steps before reaching output time {:e}", tq.as_f64()),
            });
        }
    }
    Ok(results)
}

fn dense_eval<T: Scalar>(
    tab: &Dp54<T>,
    y0: &[Complex<T>],
    y1: &[Complex<T>],
    k: &[Vec<Complex<T>>],
    h: T,
    theta: T,
) -> Vec<Complex<T>> {
    let n = y0.len();
    let s = theta;
    let s1 = T::one() - theta;
    let mut out = vec![Complex::new(T::zero(), T::zero()); n];
    for i in 0..n {
        let ydiff = y1[i] - y0[i];
        let bspl = k[0][i] * h - ydiff;
        let r4 = ydiff - k[6][i] * h - bspl;
        let mut r5 = Complex::new(T::zero(), T::zero());
        for (j, kj) in k.iter().enumerate() {
            if tab.d[j] != T::zero() {
                r5 += kj[i] * tab.d[j];
            }
        }
        r5 *= h;
        out[i] = y0[i] + (ydiff + (bspl + (r4 + r5 * s1) * s) * s1) * s;
    }
    out
}

/// Convenience wrapper: integrate and return only the final state.
pub fn integrate_to<T, F>(
    f: F,
    t0: T,
    t_end: T,
    y0: &[Complex<T>],
    opts: &OdeOptions<T>,
) -> Result<Vec<Complex<T>>>
where
    T: Scalar,
    F: FnMut(T, &[Complex<T>], &mut [Complex<T>]),
{
    let outputs = [t_end];
    let mut r = integrate(f, t0, t_end, y0, &outputs, opts)?;
    Ok(r.pop().expect("one output requested"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let y0 = vec![Complex64::new(1.0, 0.0)];
        let lambda = Complex64::new(-0.7, 2.3);
        let outputs: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let res = integrate(
            |_t, y, dy| dy[0] = lambda * y[0],
            0.0,
            5.0,
            &y0,
            &outputs,
            &OdeOptions::default(),
        )
        .unwrap();
        for (i, r) in res.iter().enumerate() {
            let t = outputs[i];
            let exact = (lambda * t).exp();
            assert!((r[0] - exact).norm() < 1e-7, "t = {t}: {:?} vs {exact:?}", r[0]);
        }
    }

    #[test]
    fn harmonic_oscillator_with_dense_output() {
        // y'' = -y as 2-component complex system; dense samples off step ends
        let y0 = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let outputs: Vec<f64> = (0..=100).map(|i| i as f64 * 0.0973).collect();
        let res = integrate(
            |_t, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            10.0,
            &y0,
            &outputs,
            &OdeOptions::default(),
        )
        .unwrap();
        for (i, r) in res.iter().enumerate() {
            let t = outputs[i];
            assert_relative_eq!(r[0].re, t.cos(), epsilon = 1e-6);
            assert_relative_eq!(r[1].re, -t.sin(), epsilon = 1e-6);
        }
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = 2 t y  ->  y = exp(t^2)
        let y0 = vec![Complex64::new(1.0, 0.0)];
        let out = integrate_to(
            |t, y, dy| dy[0] = y[0] * (2.0 * t),
            0.0,
            1.5,
            &y0,
            &OdeOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(out[0].re, (1.5f64 * 1.5).exp(), max_relative = 1e-7);
    }

    #[test]
    fn output_at_start_time_is_initial_state() {
        let y0 = vec![Complex64::new(3.0, -1.0)];
        let res = integrate(
            |_t, y, dy| dy[0] = -y[0],
            0.0,
            1.0,
            &y0,
            &[0.0, 1.0],
            &OdeOptions::default(),
        )
        .unwrap();
        assert_eq!(res[0], y0);
        assert!((res[1][0] - y0[0] * (-1.0f64).exp()).norm() < 1e-8);
    }
}
