//! Seeded random series for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use singkam_core::{Caps, Monomial, TruncatedSeries, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coeffs {
    /// Small Gaussian integers: sums and products of these stay exact.
    Integer,
    /// Uniform in the unit square.
    Float,
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coeff(&mut self, kind: Coeffs) -> C64 {
        match kind {
            Coeffs::Integer => loop {
                let a = self.rng.gen_range(-4i32..=4);
                let b = self.rng.gen_range(-2i32..=2);
                if a != 0 || b != 0 {
                    return C64::new(a as f64, b as f64);
                }
            },
            Coeffs::Float => C64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)),
        }
    }

    /// Weighted degree `≤ deg`; with `params`, `t` exponents up to
    /// `min(2, t_cap)` and `λ` exponents up to 1.
    pub fn monomial(&mut self, caps: Caps, deg: u32, params: bool) -> Monomial {
        let n = caps.n;
        let tmax = if params { caps.t_cap.min(2) } else { 0 };
        let lmax = u32::from(params);
        loop {
            let mut blocks = [[0u32; 4]; 4];
            for i in 0..n {
                blocks[0][i] = self.rng.gen_range(0..=tmax);
                blocks[1][i] = self.rng.gen_range(0..=lmax);
                blocks[2][i] = self.rng.gen_range(0..=deg);
                blocks[3][i] = self.rng.gen_range(0..=deg);
            }
            let m = Monomial::from_blocks(&blocks[0][..n], &blocks[1][..n], &blocks[2][..n], &blocks[3][..n]);
            if m.degree() <= deg {
                return m;
            }
        }
    }

    /// Between 1 and `terms` random terms.
    pub fn series(&mut self, caps: Caps, deg: u32, terms: usize, params: bool, kind: Coeffs) -> TruncatedSeries {
        let count = self.rng.gen_range(1..=terms);
        let t: Vec<_> = (0..count)
            .map(|_| (self.monomial(caps, deg, params), self.coeff(kind)))
            .collect();
        TruncatedSeries::from_terms(caps, t)
    }

    /// `B`-type terms `q^i p^j` with `i ≠ j`, disjoint supports and
    /// `‖i − j‖_∞ ≤ 2^level`, optionally times one `λ` or `t` per index.
    pub fn b_series(&mut self, caps: Caps, level: u32, terms: usize) -> TruncatedSeries {
        let n = caps.n;
        let r = 1i64 << level;
        let count = self.rng.gen_range(1..=terms);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let d: Vec<i64> = (0..n).map(|_| self.rng.gen_range(-r..=r)).collect();
            if d.iter().all(|&x| x == 0) {
                continue;
            }
            let q: Vec<u32> = d.iter().map(|&x| x.max(0) as u32).collect();
            let p: Vec<u32> = d.iter().map(|&x| (-x).max(0) as u32).collect();
            let l: Vec<u32> = (0..n).map(|_| self.rng.gen_range(0..=1)).collect();
            let t: Vec<u32> = (0..n).map(|_| self.rng.gen_range(0..=caps.t_cap.min(1))).collect();
            out.push((Monomial::from_blocks(&t, &l, &q, &p), self.coeff(Coeffs::Float)));
        }
        TruncatedSeries::from_terms(caps, out)
    }

    /// A point of the polydisc of radius `s` in `C^len`.
    pub fn point(&mut self, len: usize, s: f64) -> Vec<C64> {
        (0..len)
            .map(|_| {
                let r = self.rng.gen_range(0.0..1.0) * s;
                C64::from_polar(r, self.rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect()
    }
}
