//! Classical fixed-step fourth-order Runge–Kutta.

/// RK4 stepper with reusable stage buffers.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }

    /// Advances `y` from `t` to `t + dt`. `rhs(t, y, dydt)` writes the derivative.
    pub fn step<F>(&mut self, t: f64, y: &mut [f64], dt: f64, mut rhs: F)
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let half = 0.5 * dt;
        rhs(t, y, &mut self.k1);
        axpy_into(&mut self.tmp, y, half, &self.k1);
        rhs(t + half, &self.tmp, &mut self.k2);
        axpy_into(&mut self.tmp, y, half, &self.k2);
        rhs(t + half, &self.tmp, &mut self.k3);
        axpy_into(&mut self.tmp, y, dt, &self.k3);
        rhs(t + dt, &self.tmp, &mut self.k4);
        let sixth = dt / 6.0;
        for i in 0..y.len() {
            y[i] += sixth * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

fn axpy_into(out: &mut [f64], y: &[f64], a: f64, k: &[f64]) {
    for ((o, yi), ki) in out.iter_mut().zip(y).zip(k) {
        *o = yi + a * ki;
    }
}
