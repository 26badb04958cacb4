use super::{NetError, Params, QNetwork, TENSOR_NAMES};
use crate::scalar::NetFloat;

/// `v ← decay·v + (1 - decay)·g²`, `θ ← θ - lr·g / √(v + eps)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RmsProp<F> {
    pub lr: F,
    pub decay: F,
    pub eps: F,
    pub square_avg: Params<F>,
}

impl<F: NetFloat> RmsProp<F> {
    pub fn new(net: &QNetwork<F>, lr: F, decay: F, eps: F) -> Self {
        Self {
            lr,
            decay,
            eps,
            square_avg: net.params().zeros_like(),
        }
    }

    pub fn with_defaults(net: &QNetwork<F>) -> Self {
        let c = |v: f64| F::from_f64(v).unwrap();
        Self::new(net, c(1e-5), c(0.99), c(1e-8))
    }

    pub fn step(&mut self, net: &mut QNetwork<F>, grads: &Params<F>) -> Result<(), NetError> {
        for (name, g) in TENSOR_NAMES.iter().zip(&grads.tensors) {
            if g.iter().any(|v| !v.is_finite()) {
                return Err(NetError::NonFinite(format!("gradient of {name}")));
            }
        }
        let one = F::one();
        let params = net.params_mut();
        for ((p, g), v) in params.tensors.iter_mut().zip(&grads.tensors).zip(&mut self.square_avg.tensors) {
            for ((p, &g), v) in p.iter_mut().zip(g).zip(v.iter_mut()) {
                *v = self.decay * *v + (one - self.decay) * g * g;
                if g != F::zero() {
                    *p = *p - self.lr * g / (*v + self.eps).sqrt();
                }
            }
        }
        net.check_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_example() {
        let mut net = QNetwork::<f64>::zeros(1, 1, "h");
        let mut opt = RmsProp::with_defaults(&net);
        let mut g = net.params().zeros_like();
        g.tensors[11][0] = 1.0;
        opt.step(&mut net, &g).unwrap();
        let expected = -1e-5 / (0.01f64 + 1e-8).sqrt();
        assert!((net.params().tensors[11][0] - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_gradient_is_a_no_op() {
        let mut rng = crate::rng::stream(0, "init");
        let mut net = QNetwork::<f64>::new(3, 4, "h", &mut rng);
        let before = net.params().clone();
        let mut opt = RmsProp::with_defaults(&net);
        let g = net.params().zeros_like();
        opt.step(&mut net, &g).unwrap();
        assert_eq!(*net.params(), before);
    }

    #[test]
    fn non_finite_gradient() {
        let mut net = QNetwork::<f64>::zeros(1, 1, "h");
        let mut opt = RmsProp::with_defaults(&net);
        let mut g = net.params().zeros_like();
        g.tensors[0][0] = f64::NAN;
        assert!(matches!(opt.step(&mut net, &g), Err(NetError::NonFinite(_))));
    }
}
