use crate::continuum::protocol::ResolvedProtocol;

/// Free transport of the Wigner function from the bipartite initial condition
/// `n(x, k, 0) = n^eq(k) Θ(−x)`, so that `n(x, k, t) = n^eq(k) Θ(kt − x)`.
#[derive(Debug, Clone, Copy)]
pub struct WignerField<'a> {
    protocol: &'a ResolvedProtocol,
}

/// Heaviside step with `Θ(0) = 1/2`.
#[inline]
pub fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

impl<'a> WignerField<'a> {
    pub fn new(protocol: &'a ResolvedProtocol) -> Self {
        Self { protocol }
    }

    pub fn initial(&self, x: f64, k: f64) -> f64 {
        self.protocol.n_eq(k) * heaviside(-x)
    }

    pub fn at(&self, x: f64, k: f64, t: f64) -> f64 {
        self.protocol.n_eq(k) * heaviside(k * t - x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::protocol::WignerProtocol;

    #[test]
    fn transport_shifts_the_initial_condition() {
        let p = WignerProtocol::thermal(2.0, 0.4).unwrap().resolve().unwrap();
        let field = WignerField::new(&p);
        for i in -20..=20 {
            for j in -10..=10 {
                let (x, k) = (0.37 * i as f64, 0.29 * j as f64);
                for t in [0.0, 0.5, 3.0] {
                    assert_eq!(field.at(x, k, t), field.initial(x - k * t, k));
                    assert_eq!(field.at(x, k, t), p.n_eq(k) * heaviside(k * t - x));
                }
            }
        }
        assert_eq!(field.at(0.0, 1.0, 0.0), 0.5 * p.n_eq(1.0));
    }
}
