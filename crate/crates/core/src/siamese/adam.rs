use serde::{Deserialize, Serialize};

/// Learning rate `lr0 * decay^(floor(iteration / every))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrSchedule {
    pub lr0: f64,
    pub decay: f64,
    pub every: usize,
}

impl LrSchedule {
    pub fn at(&self, iteration: usize) -> f64 {
        self.lr0 * self.decay.powi((iteration / self.every.max(1)) as i32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl Adam {
    pub fn new(n: usize) -> Self {
        Adam { beta1: 0.9, beta2: 0.999, eps: 1e-8, m: vec![0.0; n], v: vec![0.0; n], t: 0 }
    }

    /// One bias-corrected Adam update of `params` in place.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        assert_eq!(params.len(), grad.len(), "parameter and gradient lengths differ");
        assert_eq!(params.len(), self.m.len(), "optimizer state shaped for a different model");
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t as i32);
        let c2 = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            let g = grad[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let mh = self.m[i] / c1;
            let vh = self.v[i] / c2;
            params[i] -= lr * mh / (vh.sqrt() + self.eps);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_params() {
        let mut p = vec![1.0, -2.0];
        Adam::new(2).step(&mut p, &[0.0, 0.0], 0.1);
        assert_eq!(p, vec![1.0, -2.0]);
    }

    #[test]
    fn first_step_moves_by_lr() {
        let mut p = vec![0.0, 0.0];
        Adam::new(2).step(&mut p, &[3.0, -0.5], 1e-3);
        assert!((p[0] + 1e-3).abs() < 1e-10);
        assert!((p[1] - 1e-3).abs() < 1e-10);
    }

    #[test]
    fn reproducible() {
        let run = || {
            let mut p = vec![0.3, 0.1];
            let mut a = Adam::new(2);
            a.step(&mut p, &[0.2, -0.1], 0.01);
            a.step(&mut p, &[0.1, 0.4], 0.01);
            p
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn schedule_decays_in_steps() {
        let s = LrSchedule { lr0: 6e-5, decay: 0.99, every: 100 };
        assert_eq!(s.at(0), 6e-5);
        assert_eq!(s.at(99), 6e-5);
        assert!((s.at(250) - 6e-5 * 0.99 * 0.99).abs() < 1e-20);
    }
}
