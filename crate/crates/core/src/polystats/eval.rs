//! Modular evaluation of integer polynomials over a full residue system.
//!
//! A single value f(x) mod p is computed by Horner's rule with pre-reduced
//! coefficients, double-width intermediate products, and Barrett reduction
//! (one multiply-high replaces the hardware divide).
//!
//! Evaluating at every x in 0..p is the hot path of the sweeps, and per-point
//! Horner costs deg(f) dependent multiply-reduce steps. Instead the sweep
//! seeds a forward-difference table with f(0), .., f(deg f) and advances it:
//! one step costs deg(f) independent modular additions and yields the next
//! value exactly. Horner remains the reference the table is seeded from and
//! tested against.

/// Barrett reducer for a fixed modulus 2 <= p < 2^31.
#[derive(Debug, Clone, Copy)]
pub struct Barrett {
    pub p: u64,
    m: u64,
}

impl Barrett {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 31), "modulus out of range: {p}");
        Barrett { p, m: (((1u128) << 64) / p as u128) as u64 }
    }

    /// (a * b) mod p for a, b < p.
    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let r = a * b;
        let q = ((r as u128 * self.m as u128) >> 64) as u64;
        let mut v = r - q * self.p;
        if v >= self.p {
            v -= self.p;
        }
        v
    }

    /// (a + b) mod p for a, b < p.
    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
}

/// f(x) mod p by Horner's rule. Coefficients ascending, already reduced mod p.
pub fn horner(coeffs: &[u64], bar: &Barrett, x: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = bar.add(bar.mul(acc, x), c);
    }
    acc
}

/// Multiplicity of every residue in the image of f over 0..p, accumulated
/// into `counts` (length p, caller-zeroed). Counts fit u16 because a value
/// has at most deg(f) preimages; f must be non-constant and of degree
/// below 2^16.
pub fn histogram_into(coeffs: &[u64], p: u64, counts: &mut [u16]) {
    debug_assert_eq!(counts.len(), p as usize);
    let bar = Barrett::new(p);
    let d = coeffs.len().saturating_sub(1);
    assert!(d >= 1, "histogram requires a non-constant polynomial");
    assert!(d <= u16::MAX as usize, "degree {d} overflows u16 counters");
    if p <= d as u64 + 1 {
        for x in 0..p {
            counts[horner(coeffs, &bar, x) as usize] += 1;
        }
        return;
    }

    // Seed the difference table: regs[i] starts as the i-th forward
    // difference of f at 0, built from d+1 Horner evaluations.
    let mut regs = vec![0u64; d + 1];
    for (x, r) in regs.iter_mut().enumerate() {
        *r = horner(coeffs, &bar, x as u64);
    }
    for level in 1..=d {
        for i in (level..=d).rev() {
            regs[i] = bar.add(regs[i], p - regs[i - 1]);
        }
    }

    match d {
        1 => step::<1>(&mut regs, p, counts),
        2 => step::<2>(&mut regs, p, counts),
        3 => step::<3>(&mut regs, p, counts),
        4 => step::<4>(&mut regs, p, counts),
        5 => step::<5>(&mut regs, p, counts),
        6 => step::<6>(&mut regs, p, counts),
        7 => step::<7>(&mut regs, p, counts),
        8 => step::<8>(&mut regs, p, counts),
        9 => step::<9>(&mut regs, p, counts),
        10 => step::<10>(&mut regs, p, counts),
        11 => step::<11>(&mut regs, p, counts),
        12 => step::<12>(&mut regs, p, counts),
        13 => step::<13>(&mut regs, p, counts),
        14 => step::<14>(&mut regs, p, counts),
        15 => step::<15>(&mut regs, p, counts),
        16 => step::<16>(&mut regs, p, counts),
        _ => step_dyn(&mut regs, d, p, counts),
    }
}

/// Advance the difference table across all of 0..p. regs[0] holds f(x); each
/// step adds the next-higher difference to every register, all reduced mod p.
/// The fixed-degree instantiations let the compiler unroll the inner loop.
fn step<const D: usize>(regs: &mut [u64], p: u64, counts: &mut [u16]) {
    let regs: &mut [u64] = &mut regs[..=D];
    for _ in 0..p {
        counts[regs[0] as usize] += 1;
        for i in 0..D {
            let s = regs[i] + regs[i + 1];
            regs[i] = if s >= p { s - p } else { s };
        }
    }
}

fn step_dyn(regs: &mut [u64], d: usize, p: u64, counts: &mut [u16]) {
    for _ in 0..p {
        counts[regs[0] as usize] += 1;
        for i in 0..d {
            let s = regs[i] + regs[i + 1];
            regs[i] = if s >= p { s - p } else { s };
        }
    }
}

/// Number of roots of a polynomial of degree <= 2 over F_p, given a table of
/// quadratic-residue indicators (qr[r] = 1 when r is a nonzero square).
/// Degenerate coefficient patterns fall out of the case split: a constant
/// nonzero polynomial has no roots and the zero polynomial has p of them.
#[inline]
pub fn quadratic_root_count(a: u64, b: u64, c: u64, bar: &Barrett, qr: &[u8]) -> u64 {
    let p = bar.p;
    if a == 0 {
        return if b != 0 {
            1
        } else if c == 0 {
            p
        } else {
            0
        };
    }
    if p == 2 {
        // Direct evaluation; the discriminant logic below assumes odd p.
        let mut n = 0;
        for x in 0..2u64 {
            if (a * x * x + b * x + c) % 2 == 0 {
                n += 1;
            }
        }
        return n;
    }
    // disc = b^2 - 4ac mod p
    let disc = bar.add(bar.mul(b, b), p - bar.mul(bar.mul(4 % p, a), c));
    if disc == 0 {
        1
    } else if qr[disc as usize] == 1 {
        2
    } else {
        0
    }
}

/// Indicator table of nonzero quadratic residues mod p.
pub fn qr_table(p: u64) -> Vec<u8> {
    let bar = Barrett::new(p);
    let mut qr = vec![0u8; p as usize];
    for x in 1..p {
        qr[bar.mul(x, x) as usize] = 1;
    }
    qr[0] = 0;
    qr
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barrett_matches_hardware_remainder() {
        for p in [2u64, 3, 7, 97, 65_537, (1 << 31) - 1] {
            let bar = Barrett::new(p);
            let samples = [0u64, 1, 2, p / 2, p.saturating_sub(2), p - 1];
            for &a in &samples {
                for &b in &samples {
                    let (a, b) = (a % p, b % p);
                    assert_eq!(bar.mul(a, b), a * b % p, "p={p} a={a} b={b}");
                    assert_eq!(bar.add(a, b), (a + b) % p);
                }
            }
        }
    }

    #[test]
    fn difference_table_matches_horner_exhaustively() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let primes = crate::numcore::sieve_primes(2000).unwrap();
        for _ in 0..200 {
            let d = rng.random_range(1..=20usize);
            let p = primes.primes()[rng.random_range(0..primes.len())];
            let bar = Barrett::new(p);
            let coeffs: Vec<u64> =
                (0..=d).map(|i| if i == d { rng.random_range(1..p.max(2)) } else { rng.random_range(0..p) }).collect();
            let mut counts = vec![0u16; p as usize];
            histogram_into(&coeffs, p, &mut counts);
            let mut expect = vec![0u16; p as usize];
            for x in 0..p {
                expect[horner(&coeffs, &bar, x) as usize] += 1;
            }
            assert_eq!(counts, expect, "p={p} coeffs={coeffs:?}");
        }
    }

    #[test]
    fn quadratic_root_count_matches_enumeration() {
        for p in [2u64, 3, 5, 7, 11, 13, 101] {
            let bar = Barrett::new(p);
            let qr = qr_table(p);
            for a in 0..p.min(8) {
                for b in 0..p.min(8) {
                    for c in 0..p.min(8) {
                        let direct = (0..p)
                            .filter(|&x| (a * x % p * x + b * x + c) % p == 0)
                            .count() as u64;
                        assert_eq!(
                            quadratic_root_count(a, b, c, &bar, &qr),
                            direct,
                            "p={p} {a} {b} {c}"
                        );
                    }
                }
            }
        }
    }
}
