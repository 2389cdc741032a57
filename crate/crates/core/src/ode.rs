//! Classical fourth-order Runge–Kutta kernel shared by the PDE and the stationary ODE.

use std::ops::{Add, Mul};

/// Stage buffers for in-place RK4 steps of a system of fixed dimension.
#[derive(Debug, Clone)]
pub struct Rk4<T> {
    k1: Vec<T>,
    k2: Vec<T>,
    k3: Vec<T>,
    k4: Vec<T>,
    stage: Vec<T>,
}

impl<T> Rk4<T>
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    pub fn new(dim: usize) -> Self {
        let z = vec![T::default(); dim];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            stage: z,
        }
    }

    pub fn dim(&self) -> usize {
        self.stage.len()
    }

    /// Advances `y` by one step of size `h` for `y' = f(y)`.
    ///
    /// `f(y, out)` writes the derivative into `out`. On failure `y` is left unchanged and
    /// the error is returned together with the stage (1..=4) that failed.
    pub fn step<E>(
        &mut self,
        y: &mut [T],
        h: f64,
        mut f: impl FnMut(&[T], &mut [T]) -> Result<(), E>,
    ) -> Result<(), (u8, E)> {
        debug_assert_eq!(y.len(), self.stage.len());
        f(y, &mut self.k1).map_err(|e| (1, e))?;
        combine(&mut self.stage, y, &self.k1, 0.5 * h);
        f(&self.stage, &mut self.k2).map_err(|e| (2, e))?;
        combine(&mut self.stage, y, &self.k2, 0.5 * h);
        f(&self.stage, &mut self.k3).map_err(|e| (3, e))?;
        combine(&mut self.stage, y, &self.k3, h);
        f(&self.stage, &mut self.k4).map_err(|e| (4, e))?;
        let w = h / 6.0;
        for (i, yi) in y.iter_mut().enumerate() {
            let incr = (self.k1[i] + self.k2[i] * 2.0 + self.k3[i] * 2.0 + self.k4[i]) * w;
            *yi = *yi + incr;
        }
        Ok(())
    }
}

fn combine<T: Copy + Add<Output = T> + Mul<f64, Output = T>>(
    out: &mut [T],
    y: &[T],
    k: &[T],
    h: f64,
) {
    for ((o, &yi), &ki) in out.iter_mut().zip(y).zip(k) {
        *o = yi + ki * h;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_order() {
        // y' = -y on [0, 1]; error should drop ~16x per halving
        let err = |n: usize| {
            let mut rk = Rk4::<f64>::new(1);
            let mut y = [1.0];
            let h = 1.0 / n as f64;
            for _ in 0..n {
                rk.step(&mut y, h, |y, o| {
                    o[0] = -y[0];
                    Ok::<(), ()>(())
                })
                .unwrap();
            }
            (y[0] - (-1.0f64).exp()).abs()
        };
        let ratio = err(20) / err(40);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn reports_failing_stage() {
        let mut rk = Rk4::<f64>::new(1);
        let mut y = [0.9];
        let r = rk.step(&mut y, 1.0, |y, o| {
            if y[0] > 1.0 {
                return Err("too big");
            }
            o[0] = 1.0;
            Ok(())
        });
        assert_eq!(r, Err((2, "too big")));
        assert_eq!(y, [0.9]);
    }

    #[test]
    fn zero_step_is_identity() {
        let mut rk = Rk4::<f64>::new(2);
        let mut y = [0.3, -1.7];
        rk.step(&mut y, 0.0, |y, o| {
            o[0] = y[1] * 5.0;
            o[1] = -y[0];
            Ok::<(), ()>(())
        })
        .unwrap();
        assert_eq!(y, [0.3, -1.7]);
    }
}
