//! Orthonormal DCT-II and its inverse (DCT-III).
//!
//! Direct-form transforms with a mod-4N cosine table. Block sizes here are
//! at most 1024, where the direct form is simple and plenty fast.

/// Precomputed transform for one block length.
pub struct Dct {
    n: usize,
    // cos(pi * j / (2N)) for j in 0..4N; the DCT argument (2i+1)k is
    // reduced mod 4N before lookup.
    table: Vec<f64>,
    scale0: f64,
    scale: f64,
}

impl Dct {
    pub fn new(n: usize) -> Dct {
        assert!(n > 0, "zero-length DCT");
        let table = (0..4 * n)
            .map(|j| (std::f64::consts::PI * j as f64 / (2.0 * n as f64)).cos())
            .collect();
        Dct {
            n,
            table,
            scale0: (1.0 / n as f64).sqrt(),
            scale: (2.0 / n as f64).sqrt(),
        }
    }

    /// Forward orthonormal DCT-II: `X_k = s_k * sum_i x_i cos(pi (2i+1) k / 2N)`.
    pub fn forward(&self, input: &[f64], output: &mut [f64]) {
        let n = self.n;
        assert_eq!(input.len(), n);
        assert_eq!(output.len(), n);
        let m = 4 * n;
        for (k, out) in output.iter_mut().enumerate() {
            let mut acc = 0.0;
            let mut idx = k; // (2*0 + 1) * k
            let step = 2 * k;
            for &x in input {
                acc += x * self.table[idx];
                idx += step;
                if idx >= m {
                    idx -= m;
                }
            }
            *out = acc * if k == 0 { self.scale0 } else { self.scale };
        }
    }

    /// Inverse (orthonormal DCT-III): `x_i = sum_k s_k X_k cos(pi (2i+1) k / 2N)`.
    pub fn inverse(&self, input: &[f64], output: &mut [f64]) {
        let n = self.n;
        assert_eq!(input.len(), n);
        assert_eq!(output.len(), n);
        let m = 4 * n;
        for (i, out) in output.iter_mut().enumerate() {
            // Term k uses table index (2i+1)k mod 4N; the index starts at
            // (2i+1) for k = 1 and advances by (2i+1) per coefficient.
            let row = 2 * i + 1;
            let mut acc = input[0] * self.scale0;
            let mut idx = row % m;
            for &coef in &input[1..] {
                acc += coef * self.scale * self.table[idx];
                idx += row;
                if idx >= m {
                    idx -= m;
                }
            }
            *out = acc;
        }
    }
}
