//! Scalars for the oracle: plain `f64` and a second-order truncated Taylor
//! number in one direction.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Num:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn cst(c: f64) -> Self;
    /// `self^p` for a positive base.
    fn powf(self, p: f64) -> Self;
    fn value(self) -> f64;

    fn zero() -> Self {
        Self::cst(0.0)
    }
    fn scale(self, c: f64) -> Self {
        self * Self::cst(c)
    }
}

impl Num for f64 {
    fn cst(c: f64) -> Self {
        c
    }
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    fn value(self) -> f64 {
        self
    }
}

/// `v + d1·t + d2·t²/2`, truncated after `t²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Taylor {
    pub fn new(v: f64, d1: f64, d2: f64) -> Self {
        Taylor { v, d1, d2 }
    }
}

impl Add for Taylor {
    type Output = Taylor;
    fn add(self, o: Taylor) -> Taylor {
        Taylor::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Taylor {
    type Output = Taylor;
    fn sub(self, o: Taylor) -> Taylor {
        Taylor::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Neg for Taylor {
    type Output = Taylor;
    fn neg(self) -> Taylor {
        Taylor::new(-self.v, -self.d1, -self.d2)
    }
}

impl Mul for Taylor {
    type Output = Taylor;
    fn mul(self, o: Taylor) -> Taylor {
        Taylor::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Taylor {
    type Output = Taylor;
    fn div(self, o: Taylor) -> Taylor {
        let v = self.v / o.v;
        let d1 = (self.d1 - v * o.d1) / o.v;
        let d2 = (self.d2 - 2.0 * d1 * o.d1 - v * o.d2) / o.v;
        Taylor::new(v, d1, d2)
    }
}

impl Num for Taylor {
    fn cst(c: f64) -> Self {
        Taylor::new(c, 0.0, 0.0)
    }

    fn powf(self, p: f64) -> Self {
        let f = self.v.powf(p);
        let f1 = p * self.v.powf(p - 1.0);
        let f2 = p * (p - 1.0) * self.v.powf(p - 2.0);
        Taylor::new(f, f1 * self.d1, f2 * self.d1 * self.d1 + f1 * self.d2)
    }

    fn value(self) -> f64 {
        self.v
    }

    fn scale(self, c: f64) -> Self {
        Taylor::new(self.v * c, self.d1 * c, self.d2 * c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_and_power_match_calculus() {
        // x = 2 + t: 1/x and x^3 at t = 0
        let x = Taylor::new(2.0, 1.0, 0.0);
        let r = Taylor::cst(1.0) / x;
        assert_eq!((r.v, r.d1, r.d2), (0.5, -0.25, 0.25));
        let c = x.powf(3.0);
        assert_eq!((c.v, c.d1, c.d2), (8.0, 12.0, 12.0));
    }
}
