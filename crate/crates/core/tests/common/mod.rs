//! Independent reference implementation for two-qubit noise: plain arrays,
//! explicit Kronecker products, no shared code with the library.

#![allow(dead_code)]

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C {
    pub re: f64,
    pub im: f64,
}

impl C {
    pub const ZERO: C = C { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        C { re, im }
    }

    fn mul(self, o: C) -> C {
        C::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }

    fn add(self, o: C) -> C {
        C::new(self.re + o.re, self.im + o.im)
    }

    fn conj(self) -> C {
        C::new(self.re, -self.im)
    }

    fn scale(self, s: f64) -> C {
        C::new(self.re * s, self.im * s)
    }
}

pub type M2 = [[C; 2]; 2];
pub type M4 = [[C; 4]; 4];

fn real2(a: f64, b: f64, c: f64, d: f64) -> M2 {
    [[C::new(a, 0.0), C::new(b, 0.0)], [C::new(c, 0.0), C::new(d, 0.0)]]
}

pub fn pauli_kraus(p0: f64, px: f64, py: f64, pz: f64) -> Vec<M2> {
    let y = [[C::ZERO, C::new(0.0, -1.0)], [C::new(0.0, 1.0), C::ZERO]];
    let scale = |m: M2, p: f64| m.map(|row| row.map(|z| z.scale(p.sqrt())));
    vec![
        scale(real2(1.0, 0.0, 0.0, 1.0), p0),
        scale(real2(0.0, 1.0, 1.0, 0.0), px),
        scale(y, py),
        scale(real2(1.0, 0.0, 0.0, -1.0), pz),
    ]
}

pub fn amplitude_damping_kraus(g: f64) -> Vec<M2> {
    vec![real2(1.0, 0.0, 0.0, (1.0 - g).sqrt()), real2(0.0, g.sqrt(), 0.0, 0.0)]
}

pub fn dephasing_kraus(g: f64) -> Vec<M2> {
    vec![real2(1.0, 0.0, 0.0, (1.0 - g).sqrt()), real2(0.0, 0.0, 0.0, g.sqrt())]
}

/// `k` acting on qubit `target` (0 = most significant) of a two-qubit space.
fn lift(k: &M2, target: usize) -> M4 {
    let id = real2(1.0, 0.0, 0.0, 1.0);
    let (a, b) = if target == 0 { (k, &id) } else { (&id, k) };
    let mut out = [[C::ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = a[r / 2][c / 2].mul(b[r % 2][c % 2]);
        }
    }
    out
}

fn matmul(x: &M4, y: &M4) -> M4 {
    let mut out = [[C::ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            for k in 0..4 {
                out[r][c] = out[r][c].add(x[r][k].mul(y[k][c]));
            }
        }
    }
    out
}

fn dagger(x: &M4) -> M4 {
    let mut out = [[C::ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = x[c][r].conj();
        }
    }
    out
}

pub fn psi_plus() -> M4 {
    let mut rho = [[C::ZERO; 4]; 4];
    for r in [1, 2] {
        for c in [1, 2] {
            rho[r][c] = C::new(0.5, 0.0);
        }
    }
    rho
}

pub fn apply(rho: &M4, kraus: &[M2], target: usize) -> M4 {
    let mut out = [[C::ZERO; 4]; 4];
    for k in kraus {
        let big = lift(k, target);
        let term = matmul(&matmul(&big, rho), &dagger(&big));
        for r in 0..4 {
            for c in 0..4 {
                out[r][c] = out[r][c].add(term[r][c]);
            }
        }
    }
    out
}

pub fn diagonal(rho: &M4) -> [f64; 4] {
    [rho[0][0].re, rho[1][1].re, rho[2][2].re, rho[3][3].re]
}
