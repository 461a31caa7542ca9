//! Fast paths for `|t|^p` and `J_p(t) = |t|^{p-2} t`.
//!
//! The solver and the pair sums evaluate these in inner loops; integer
//! exponents (the common case in the acceptance battery) avoid `powf`.

#[derive(Debug, Clone, Copy)]
pub enum PowKind {
    Two,
    Three,
    Four,
    Int(i32),
    General(f64),
}

impl PowKind {
    pub fn of(p: f64) -> Self {
        if p == 2.0 {
            PowKind::Two
        } else if p == 3.0 {
            PowKind::Three
        } else if p == 4.0 {
            PowKind::Four
        } else if p.fract() == 0.0 && p >= 1.0 && p <= 64.0 {
            PowKind::Int(p as i32)
        } else {
            PowKind::General(p)
        }
    }

    /// `|t|^p`
    #[inline]
    pub fn abs_pow(self, t: f64) -> f64 {
        match self {
            PowKind::Two => t * t,
            PowKind::Three => t * t * t.abs(),
            PowKind::Four => (t * t) * (t * t),
            PowKind::Int(k) => t.abs().powi(k),
            PowKind::General(p) => t.abs().powf(p),
        }
    }

    /// `J_p(t) = |t|^{p-2} t`, with the subgradient selection `J_p(0) = 0`.
    #[inline]
    pub fn j_p(self, t: f64) -> f64 {
        match self {
            PowKind::Two => t,
            PowKind::Three => t.abs() * t,
            PowKind::Four => t * t * t,
            PowKind::Int(k) => t.abs().powi(k - 2) * t,
            PowKind::General(p) => {
                if t == 0.0 {
                    0.0
                } else {
                    t.abs().powf(p - 2.0) * t
                }
            }
        }
    }

    /// `J_p'(t) = (p-1)|t|^{p-2}` where defined.
    #[inline]
    pub fn j_p_prime(self, t: f64, p: f64) -> f64 {
        match self {
            PowKind::Two => 1.0,
            PowKind::Three => 2.0 * t.abs(),
            PowKind::Four => 3.0 * t * t,
            PowKind::Int(k) => (p - 1.0) * t.abs().powi(k - 2),
            PowKind::General(_) => {
                if t == 0.0 {
                    0.0
                } else {
                    (p - 1.0) * t.abs().powf(p - 2.0)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_powf() {
        for &p in &[2.0, 3.0, 4.0, 7.0, 2.5, 16.0, 32.0] {
            let k = PowKind::of(p);
            for &t in &[-1.7, -0.3, 0.0, 0.4, 2.2] {
                let want = (t as f64).abs().powf(p);
                assert!((k.abs_pow(t) - want).abs() <= 1e-12 * want.max(1e-12));
                let want_j = if t == 0.0 {
                    0.0
                } else {
                    (t as f64).abs().powf(p - 2.0) * t
                };
                assert!((k.j_p(t) - want_j).abs() <= 1e-12 * want_j.abs().max(1e-12));
            }
        }
    }
}
