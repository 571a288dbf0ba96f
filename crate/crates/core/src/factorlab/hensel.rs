//! Quadratic Hensel lifting: a factorization modulo p is carried to modulo
//! p^(2^k) on a binary factor tree, every node holding a two-way split with
//! its Bezout cofactors. Each lifting round doubles the precision at every
//! node top-down, so a child's target is always known one round ahead.

use super::modp::{bezout_zp, PolyZp};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Arithmetic on coefficient vectors modulo a fixed integer.
pub(crate) struct ZCtx {
    pub m: BigInt,
}

impl ZCtx {
    fn red(&self, c: &BigInt) -> BigInt {
        c.mod_floor(&self.m)
    }

    pub fn reduce(&self, a: &[BigInt]) -> Vec<BigInt> {
        trim(a.iter().map(|c| self.red(c)).collect())
    }

    fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let len = a.len().max(b.len());
        trim(
            (0..len)
                .map(|i| {
                    let x = a.get(i).cloned().unwrap_or_default();
                    let y = b.get(i).cloned().unwrap_or_default();
                    self.red(&(x + y))
                })
                .collect(),
        )
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let len = a.len().max(b.len());
        trim(
            (0..len)
                .map(|i| {
                    let x = a.get(i).cloned().unwrap_or_default();
                    let y = b.get(i).cloned().unwrap_or_default();
                    self.red(&(x - y))
                })
                .collect(),
        )
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut acc = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                acc[i + j] += x * y;
            }
        }
        trim(acc.into_iter().map(|c| self.red(&c)).collect())
    }

    /// Division by a monic divisor.
    fn divmod_monic(&self, a: &[BigInt], h: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        debug_assert!(h.last().is_some_and(One::is_one), "divisor must be monic");
        let dh = h.len() - 1;
        let mut rem: Vec<BigInt> = a.iter().map(|c| self.red(c)).collect();
        if rem.len() <= dh {
            return (Vec::new(), trim(rem));
        }
        let mut quo = vec![BigInt::zero(); rem.len() - dh];
        for i in (dh..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for (j, hj) in h.iter().take(dh).enumerate() {
                let updated = self.red(&(&rem[i - dh + j] - &c * hj));
                rem[i - dh + j] = updated;
            }
            quo[i - dh] = c;
        }
        rem.truncate(dh);
        (trim(quo), trim(rem))
    }
}

/// Inverse of a modulo m, for a coprime to m.
pub(crate) fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one() || (-&e.gcd).is_one(), "unit required for inversion");
    let inv = if e.gcd.is_one() { e.x } else { -e.x };
    inv.mod_floor(m)
}

fn to_big(poly: &PolyZp) -> Vec<BigInt> {
    poly.coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

/// Binary split tree over a list of modular factors. A leaf stands for a
/// single factor whose running value lives in the parent (or in the root
/// polynomial when the list has length one, a case the caller short-cuts).
enum SplitTree {
    Leaf,
    Split(Box<SplitNode>),
}

struct SplitNode {
    g: Vec<BigInt>,
    h: Vec<BigInt>,
    s: Vec<BigInt>,
    t: Vec<BigInt>,
    left: SplitTree,
    right: SplitTree,
}

/// Split `target = lc * parts[0] * .. * parts[r-1] (mod p)` down the middle:
/// the left product absorbs the leading coefficient, the right one stays
/// monic, and the Bezout pair certifies coprimality.
fn build(target: &PolyZp, parts: &[PolyZp]) -> SplitTree {
    if parts.len() == 1 {
        return SplitTree::Leaf;
    }
    let p = target.p;
    let k = parts.len().div_ceil(2);
    let mut gp = PolyZp::constant(p, target.lc());
    for part in &parts[..k] {
        gp = gp.mul(part);
    }
    let mut hp = PolyZp::constant(p, 1);
    for part in &parts[k..] {
        hp = hp.mul(part);
    }
    let (s, t) = bezout_zp(&gp, &hp);
    let left = build(&gp, &parts[..k]);
    let right = build(&hp, &parts[k..]);
    SplitTree::Split(Box::new(SplitNode {
        g: to_big(&gp),
        h: to_big(&hp),
        s: to_big(&s),
        t: to_big(&t),
        left,
        right,
    }))
}

/// One quadratic step: from target ≡ g*h and s*g + t*h ≡ 1 modulo m to the
/// same congruences modulo m^2, with h kept monic and degrees unchanged.
fn hensel_step(target: &[BigInt], node: &mut SplitNode, m: &BigInt) {
    let ctx = ZCtx { m: m * m };
    let e = ctx.sub(&ctx.reduce(target), &ctx.mul(&node.g, &node.h));
    let (q, r) = ctx.divmod_monic(&ctx.mul(&node.s, &e), &node.h);
    let g_new = ctx.add(&ctx.add(&node.g, &ctx.mul(&node.t, &e)), &ctx.mul(&q, &node.g));
    let h_new = ctx.add(&node.h, &r);
    debug_assert!(h_new.last().is_some_and(One::is_one));

    let one = [BigInt::one()];
    let b = ctx.sub(
        &ctx.add(&ctx.mul(&node.s, &g_new), &ctx.mul(&node.t, &h_new)),
        &one,
    );
    let (c, d) = ctx.divmod_monic(&ctx.mul(&node.s, &b), &h_new);
    let s_new = ctx.sub(&node.s, &d);
    let t_new = ctx.sub(&node.t, &ctx.add(&ctx.mul(&node.t, &b), &ctx.mul(&c, &g_new)));
    node.g = g_new;
    node.h = h_new;
    node.s = s_new;
    node.t = t_new;
}

fn lift_round(tree: &mut SplitTree, target: &[BigInt], m: &BigInt) {
    if let SplitTree::Split(node) = tree {
        hensel_step(target, node, m);
        let g = node.g.clone();
        lift_round(&mut node.left, &g, m);
        let h = node.h.clone();
        lift_round(&mut node.right, &h, m);
    }
}

fn monicize(value: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    let lc = value.last().expect("nonzero leaf");
    let inv = modinv(lc, modulus);
    let ctx = ZCtx { m: modulus.clone() };
    ctx.mul(value, &[inv])
}

fn collect(tree: &SplitTree, value: &[BigInt], modulus: &BigInt, out: &mut Vec<Vec<BigInt>>) {
    match tree {
        SplitTree::Leaf => out.push(monicize(value, modulus)),
        SplitTree::Split(node) => {
            collect(&node.left, &node.g, modulus, out);
            collect(&node.right, &node.h, modulus, out);
        }
    }
}

/// Lift `f ≡ lc(f) * parts[0] * .. * parts[r-1] (mod p)` to a modulus
/// exceeding `limit`, returning the monic lifted factors in input order and
/// the modulus reached. Requires r ≥ 2, p odd, parts monic and pairwise
/// coprime modulo p.
pub(crate) fn lift_factorization(
    f: &[BigInt],
    f_mod_p: &PolyZp,
    parts: &[PolyZp],
    p: u64,
    limit: &BigInt,
) -> (Vec<Vec<BigInt>>, BigInt) {
    assert!(parts.len() >= 2, "lifting needs at least two factors");
    let mut tree = build(f_mod_p, parts);
    let mut m = BigInt::from(p);
    while m <= *limit {
        lift_round(&mut tree, f, &m);
        m = &m * &m;
    }
    let mut out = Vec::with_capacity(parts.len());
    let root_value = ZCtx { m: m.clone() }.reduce(f);
    collect(&tree, &root_value, &m, &mut out);
    (out, m)
}

/// Representative of `c mod m` in (-m/2, m/2), for odd m.
pub(crate) fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}
