//! Dense polynomial arithmetic over F_p for small odd primes, plus a
//! deterministic Berlekamp factorization of monic squarefree inputs. The
//! primes involved are the small auxiliary primes of the lifting engine, so
//! coefficients fit comfortably in u64 with u128 intermediates.

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0, "inverse of zero mod {p}");
    pow_mod(a, p - 2, p)
}

/// Polynomial over F_p, coefficients ascending and trimmed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct PolyZp {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl PolyZp {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut out = PolyZp { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        out.trim();
        out
    }

    pub fn zero(p: u64) -> Self {
        PolyZp { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        PolyZp::new(p, vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> u64 {
        *self.coeffs.last().expect("leading coefficient of zero")
    }

    pub fn sub_scalar(&self, c: u64) -> PolyZp {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        coeffs[0] = (coeffs[0] + self.p - c % self.p) % self.p;
        PolyZp::new(self.p, coeffs)
    }

    pub fn mul(&self, other: &PolyZp) -> PolyZp {
        assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return PolyZp::zero(self.p);
        }
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a as u128 * b as u128;
            }
        }
        PolyZp::new(self.p, acc.into_iter().map(|c| (c % self.p as u128) as u64).collect())
    }

    pub fn mul_scalar(&self, c: u64) -> PolyZp {
        let c = c % self.p;
        PolyZp::new(
            self.p,
            self.coeffs.iter().map(|&a| (a as u128 * c as u128 % self.p as u128) as u64).collect(),
        )
    }

    pub fn sub(&self, other: &PolyZp) -> PolyZp {
        assert_eq!(self.p, other.p);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        PolyZp::new(self.p, coeffs)
    }

    pub fn make_monic(&self) -> PolyZp {
        assert!(!self.is_zero());
        self.mul_scalar(inv_mod(self.lc(), self.p))
    }

    pub fn divmod(&self, divisor: &PolyZp) -> (PolyZp, PolyZp) {
        assert_eq!(self.p, divisor.p);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = divisor.degree().unwrap();
        if self.coeffs.len() <= dd {
            return (PolyZp::zero(p), self.clone());
        }
        let linv = inv_mod(divisor.lc(), p);
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = (rem[i] as u128 * linv as u128 % p as u128) as u64;
            if c == 0 {
                continue;
            }
            quo[i - dd] = c;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                let sub = (c as u128 * dj as u128 % p as u128) as u64;
                rem[i - dd + j] = (rem[i - dd + j] + p - sub) % p;
            }
        }
        rem.truncate(dd);
        (PolyZp::new(p, quo), PolyZp::new(p, rem))
    }

    pub fn rem(&self, divisor: &PolyZp) -> PolyZp {
        self.divmod(divisor).1
    }

    pub fn derivative(&self) -> PolyZp {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (c as u128 * (i as u64 % self.p) as u128 % self.p as u128) as u64)
            .collect();
        PolyZp::new(self.p, coeffs)
    }
}

/// Monic gcd.
pub(crate) fn gcd_zp(a: &PolyZp, b: &PolyZp) -> PolyZp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    if a.is_zero() { a } else { a.make_monic() }
}

/// Extended Euclid on coprime (a, b): returns (s, t) with s*a + t*b = 1,
/// deg s < deg b and deg t < deg a.
pub(crate) fn bezout_zp(a: &PolyZp, b: &PolyZp) -> (PolyZp, PolyZp) {
    let p = a.p;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (PolyZp::constant(p, 1), PolyZp::zero(p));
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1);
        let s = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    assert_eq!(r0.degree(), Some(0), "inputs must be coprime");
    let mut s = s0.mul_scalar(inv_mod(r0.lc(), p));
    if b.degree() > Some(0) {
        s = s.rem(b);
    }
    // Recover t = (1 - s*a) / b exactly, keeping the identity tight after
    // the reduction of s.
    let num = PolyZp::constant(p, 1).sub(&s.mul(a));
    let (t, zero) = num.divmod(b);
    assert!(zero.is_zero());
    (s, t)
}

fn pow_x_mod(modulus: &PolyZp, mut exp: u64) -> PolyZp {
    let p = modulus.p;
    let mut acc = PolyZp::constant(p, 1);
    let mut base = PolyZp::new(p, vec![0, 1]).rem(modulus);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc.mul(&base).rem(modulus);
        }
        base = base.mul(&base).rem(modulus);
        exp >>= 1;
    }
    acc
}

/// Basis of the right kernel of an n x n matrix over F_p, from reduced row
/// echelon form.
fn kernel_basis(mut mat: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = mat.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pivot) = (row..n).find(|&r| mat[r][col] != 0) else { continue };
        mat.swap(row, pivot);
        let inv = inv_mod(mat[row][col], p);
        for c in col..n {
            mat[row][c] = (mat[row][c] as u128 * inv as u128 % p as u128) as u64;
        }
        for r in 0..n {
            if r != row && mat[r][col] != 0 {
                let factor = mat[r][col];
                for c in col..n {
                    let sub = (factor as u128 * mat[row][c] as u128 % p as u128) as u64;
                    mat[r][c] = (mat[r][c] + p - sub) % p;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let mut basis = Vec::new();
    for col in 0..n {
        if pivot_cols.contains(&col) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[col] = 1;
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (p - mat[i][col]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Number of irreducible factors of a monic squarefree polynomial over F_p:
/// the dimension of the Berlekamp subalgebra.
pub(crate) fn factor_count(f: &PolyZp) -> usize {
    let n = f.degree().expect("nonzero polynomial");
    assert!(n >= 1);
    berlekamp_basis(f).len()
}

fn berlekamp_basis(f: &PolyZp) -> Vec<Vec<u64>> {
    let p = f.p;
    let n = f.degree().unwrap();
    let xp = pow_x_mod(f, p);
    let mut power = PolyZp::constant(p, 1);
    // transposed[j][i] = coeff_j(x^(i*p) mod f) - [i == j]
    let mut transposed = vec![vec![0u64; n]; n];
    for i in 0..n {
        for (j, col) in transposed.iter_mut().enumerate() {
            let mut entry = power.coeffs.get(j).copied().unwrap_or(0);
            if i == j {
                entry = (entry + p - 1) % p;
            }
            col[i] = entry;
        }
        if i + 1 < n {
            power = power.mul(&xp).rem(f);
        }
    }
    kernel_basis(transposed, p)
}

/// Deterministic Berlekamp: factor a monic squarefree polynomial over F_p
/// (p odd) into monic irreducibles, sorted canonically.
pub(crate) fn berlekamp(f: &PolyZp) -> Vec<PolyZp> {
    let p = f.p;
    let n = f.degree().expect("nonzero polynomial");
    assert!(n >= 1);
    assert_eq!(f.lc(), 1, "input must be monic");
    if n == 1 {
        return vec![f.clone()];
    }
    let basis = berlekamp_basis(f);
    let r = basis.len();
    let mut factors = vec![f.clone()];
    if r > 1 {
        'split: for v in &basis {
            let h = PolyZp::new(p, v.clone());
            if h.degree() == Some(0) {
                continue;
            }
            for c in 0..p {
                if factors.len() == r {
                    break 'split;
                }
                let shifted = h.sub_scalar(c);
                let mut next = Vec::with_capacity(factors.len());
                for g in &factors {
                    if g.degree() == Some(1) {
                        next.push(g.clone());
                        continue;
                    }
                    let w = gcd_zp(g, &shifted);
                    match w.degree() {
                        Some(d) if d > 0 && d < g.degree().unwrap() => {
                            let (q, rem) = g.divmod(&w);
                            assert!(rem.is_zero());
                            next.push(w);
                            next.push(q);
                        }
                        _ => next.push(g.clone()),
                    }
                }
                factors = next;
            }
        }
    }
    assert_eq!(factors.len(), r, "Berlekamp splitting must reach the factor count");
    factors.sort_unstable_by(|a, b| (a.coeffs.len(), &a.coeffs).cmp(&(b.coeffs.len(), &b.coeffs)));
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, coeffs: &[u64]) -> PolyZp {
        PolyZp::new(p, coeffs.to_vec())
    }

    fn add(a: &PolyZp, b: &PolyZp) -> PolyZp {
        a.sub(&PolyZp::zero(a.p).sub(b))
    }

    #[test]
    fn arithmetic_basics() {
        let a = poly(5, &[1, 1]); // x + 1
        assert_eq!(a.mul(&a), poly(5, &[1, 2, 1]));
        assert_eq!(a.mul_scalar(7), poly(5, &[2, 2]));
        let f = poly(7, &[3, 0, 1, 2]); // 2x^3 + x^2 + 3
        let divisor = poly(7, &[6, 1]); // x - 1
        let (q, r) = f.divmod(&divisor);
        assert!(r.degree() < divisor.degree() || r.is_zero());
        assert_eq!(add(&q.mul(&divisor), &r), f);
    }

    #[test]
    fn gcd_and_bezout() {
        let a = poly(7, &[6, 0, 1]); // x^2 - 1
        let b = poly(7, &[1, 2, 1]); // (x + 1)^2
        assert_eq!(gcd_zp(&a, &b), poly(7, &[1, 1]));

        let c = poly(7, &[3, 1]); // x + 3
        let d = poly(7, &[2, 0, 1]); // x^2 + 2, coprime to c
        let (s, t) = bezout_zp(&c, &d);
        assert_eq!(add(&s.mul(&c), &t.mul(&d)), PolyZp::constant(7, 1));
        assert!(s.degree() < d.degree());
        assert!(t.degree() < c.degree());
    }

    #[test]
    fn derivative_and_powers() {
        let f = poly(5, &[1, 0, 0, 1]); // x^3 + 1
        assert_eq!(f.derivative(), poly(5, &[0, 0, 3]));
        let modulus = poly(5, &[1, 0, 1]); // x^2 + 1
        // x^5 mod x^2+1: x^2 = -1, so x^4 = 1, x^5 = x.
        assert_eq!(pow_x_mod(&modulus, 5), poly(5, &[0, 1]));
    }

    #[test]
    fn berlekamp_splits_known_cases() {
        // x^2 - 1 = (x+1)(x+6) mod 7.
        let f = poly(7, &[6, 0, 1]);
        assert_eq!(berlekamp(&f), vec![poly(7, &[1, 1]), poly(7, &[6, 1])]);

        // x^2 + 1 irreducible mod 3.
        let g = poly(3, &[1, 0, 1]);
        assert_eq!(berlekamp(&g), vec![g.clone()]);
        assert_eq!(factor_count(&g), 1);

        // x^3 + x = x(x+2)(x+3) mod 5.
        let h = poly(5, &[0, 1, 0, 1]);
        assert_eq!(
            berlekamp(&h),
            vec![poly(5, &[0, 1]), poly(5, &[2, 1]), poly(5, &[3, 1])]
        );

        // x^4 + 1 = (x^2+2)(x^2+3) mod 5.
        let k = poly(5, &[1, 0, 0, 0, 1]);
        assert_eq!(berlekamp(&k), vec![poly(5, &[2, 0, 1]), poly(5, &[3, 0, 1])]);
        assert_eq!(factor_count(&k), 2);
    }

    #[test]
    fn berlekamp_products_reconstruct() {
        for (p, coeffs) in [
            (3u64, vec![2u64, 1, 0, 2, 1]),
            (5, vec![1, 4, 0, 0, 1]),
            (7, vec![3, 0, 2, 1]),
            (11, vec![1, 1, 1, 1, 1]),
        ] {
            let f = PolyZp::new(p, coeffs).make_monic();
            if gcd_zp(&f, &f.derivative()).degree() != Some(0) {
                continue;
            }
            let parts = berlekamp(&f);
            let mut prod = PolyZp::constant(p, 1);
            for part in &parts {
                assert_eq!(part.lc(), 1);
                prod = prod.mul(part);
            }
            assert_eq!(prod, f, "p = {p}");
        }
    }
}
