//! Permutation groups at experiment scale: breadth-first closure from
//! generators, fixed-point densities of groups and cosets, Burnside orbit
//! counts, the rank of a transitive group, and the wreath-squaring step that
//! builds the iterated tower behind the squared family.
//!
//! Counting quantities are computed twice along independent routes wherever
//! the theory provides two (orbit counts, rank) and the routes are asserted
//! equal, so a bug must strike both paths identically to go unnoticed.

pub mod family;

use crate::numcore::{rat_u, Rat};
use num_bigint::BigUint;
use rand::Rng;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

/// Default ceiling on stored elements during closure.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("images do not form a bijection")]
    NotBijection,
    #[error("cycle notation error: {0}")]
    Parse(String),
    #[error("permutations act on different point counts ({a} vs {b})")]
    DegreeMismatch { a: usize, b: usize },
    #[error("generator list is empty")]
    NoGenerators,
    #[error("set of permutations is empty")]
    EmptySet,
    #[error("group elements are not enumerated (closure exceeded its cap)")]
    NotEnumerated,
    #[error("permutation does not belong to the group")]
    NotInGroup,
    #[error("subgroup check failed: not contained in the ambient group")]
    NotSubgroup,
    #[error("group is not transitive")]
    Intransitive,
    #[error("family index must be at least 1")]
    ZeroIndex,
}

// ---------------------------------------------------------------------------
// Permutations.
// ---------------------------------------------------------------------------

/// Permutation of {0, .., n-1} stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Box<[u32]>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if (y as usize) >= n || seen[y as usize] {
                return Err(GroupError::NotBijection);
            }
            seen[y as usize] = true;
        }
        Ok(Perm { images: images.into_boxed_slice() })
    }

    /// Parse 1-indexed disjoint cycle notation, e.g. "(1 2)(3 4)" or "()".
    /// The degree is the largest point mentioned unless given explicitly.
    pub fn from_cycles(text: &str, degree: Option<usize>) -> Result<Self, GroupError> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        for tok in text.replace('(', " ( ").replace(')', " ) ").split_whitespace() {
            match tok {
                "(" => {
                    if current.is_some() {
                        return Err(GroupError::Parse("nested '('".into()));
                    }
                    current = Some(Vec::new());
                }
                ")" => match current.take() {
                    Some(c) => cycles.push(c),
                    None => return Err(GroupError::Parse("unmatched ')'".into())),
                },
                point => {
                    let k: usize = point
                        .parse()
                        .map_err(|_| GroupError::Parse(format!("bad point '{point}'")))?;
                    if k == 0 {
                        return Err(GroupError::Parse("points are 1-indexed".into()));
                    }
                    match current.as_mut() {
                        Some(c) => c.push(k - 1),
                        None => return Err(GroupError::Parse(format!("point '{point}' outside a cycle"))),
                    }
                }
            }
        }
        if current.is_some() {
            return Err(GroupError::Parse("unterminated cycle".into()));
        }
        let max_point = cycles.iter().flatten().copied().max().map_or(0, |m| m + 1);
        let n = match degree {
            Some(n) if n < max_point => {
                return Err(GroupError::Parse(format!(
                    "degree {n} smaller than largest point {max_point}"
                )))
            }
            Some(n) => n,
            None => max_point,
        };
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cycle in &cycles {
            for &pt in cycle {
                if used[pt] {
                    return Err(GroupError::Parse(format!("point {} repeated", pt + 1)));
                }
                used[pt] = true;
            }
            for (i, &pt) in cycle.iter().enumerate() {
                images[pt] = cycle[(i + 1) % cycle.len()] as u32;
            }
        }
        Ok(Perm { images: images.into_boxed_slice() })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Composition acting right-to-left: (a.compose(b))(x) = a(b(x)).
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u32;
        }
        Perm { images: images.into_boxed_slice() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    pub fn fixed_points(&self) -> u64 {
        self.images.iter().enumerate().filter(|&(x, &y)| x as u32 == y).count() as u64
    }

    pub fn has_fixed_point(&self) -> bool {
        self.images.iter().enumerate().any(|(x, &y)| x as u32 == y)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut wrote = false;
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.apply(x);
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Groups.
// ---------------------------------------------------------------------------

/// Permutation group given by generators, with the full element list and
/// order stored when the breadth-first closure stayed within its cap. The
/// element list is sorted, so iteration order is deterministic and
/// membership is a binary search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Option<Vec<Perm>>,
    order: Option<BigUint>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: vec![Perm::identity(degree)],
            elements: Some(vec![Perm::identity(degree)]),
            order: Some(BigUint::from(1u32)),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> Option<&[Perm]> {
        self.elements.as_deref()
    }

    pub fn order(&self) -> Option<&BigUint> {
        self.order.as_ref()
    }

    pub fn contains(&self, perm: &Perm) -> Result<bool, GroupError> {
        let elements = self.elements.as_ref().ok_or(GroupError::NotEnumerated)?;
        Ok(elements.binary_search(perm).is_ok())
    }

    /// Number of orbits of the group on its points, from the generators
    /// alone (orbits do not require enumeration).
    pub fn orbit_count(&self) -> usize {
        orbit_count_of(self.degree, &self.generators)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_count() == 1
    }
}

fn orbit_count_of(degree: usize, perms: &[Perm]) -> usize {
    let mut parent: Vec<usize> = (0..degree).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in perms {
        for x in 0..degree {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
            if a != b {
                parent[a] = b;
            }
        }
    }
    (0..degree).filter(|&x| find(&mut parent, x) == x).count()
}

/// Breadth-first closure of the generators. When the closure exceeds `cap`
/// elements the group comes back with generators only: order unknown,
/// element-dependent operations unavailable.
pub fn close_generators(gens: &[Perm], cap: usize) -> Result<PermGroup, GroupError> {
    let first = gens.first().ok_or(GroupError::NoGenerators)?;
    let degree = first.degree();
    for g in gens {
        if g.degree() != degree {
            return Err(GroupError::DegreeMismatch { a: degree, b: g.degree() });
        }
    }
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue: VecDeque<Perm> = VecDeque::new();
    seen.insert(Perm::identity(degree));
    queue.push_back(Perm::identity(degree));
    while let Some(next) = queue.pop_front() {
        for g in gens {
            let prod = g.compose(&next);
            if !seen.contains(&prod) {
                if seen.len() >= cap {
                    return Ok(PermGroup {
                        degree,
                        generators: gens.to_vec(),
                        elements: None,
                        order: None,
                    });
                }
                seen.insert(prod.clone());
                queue.push_back(prod);
            }
        }
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort_unstable();
    let order = BigUint::from(elements.len());
    Ok(PermGroup { degree, generators: gens.to_vec(), elements: Some(elements), order: Some(order) })
}

/// Exact proportion of permutations in the multiset with a fixed point.
pub fn alpha_of_set(elements: &[Perm]) -> Result<Rat, GroupError> {
    if elements.is_empty() {
        return Err(GroupError::EmptySet);
    }
    let fixed = elements.iter().filter(|p| p.has_fixed_point()).count() as u64;
    Ok(rat_u(fixed, elements.len() as u64))
}

/// Fixed-point density of the coset sigma * Gstar inside G. Both groups must
/// be enumerated; sigma must lie in G and Gstar must be contained in G.
pub fn alpha_of_coset(g: &PermGroup, sigma: &Perm, gstar: &PermGroup) -> Result<Rat, GroupError> {
    if !g.contains(sigma)? {
        return Err(GroupError::NotInGroup);
    }
    let star_elements = gstar.elements().ok_or(GroupError::NotEnumerated)?;
    for h in star_elements {
        if !g.contains(h)? {
            return Err(GroupError::NotSubgroup);
        }
    }
    let coset: Vec<Perm> = star_elements.iter().map(|h| sigma.compose(h)).collect();
    alpha_of_set(&coset)
}

/// Number of orbits of G on its points by the averaged fixed-point count
/// (1/|G|) * sum of fix(g), cross-checked against the direct orbit partition
/// from the generators.
pub fn burnside_orbits(g: &PermGroup) -> Result<u64, GroupError> {
    let elements = g.elements().ok_or(GroupError::NotEnumerated)?;
    let fix_sum: u64 = elements.iter().map(|p| p.fixed_points()).sum();
    let order = elements.len() as u64;
    assert_eq!(fix_sum % order, 0, "Burnside sum must divide evenly");
    let averaged = fix_sum / order;
    let direct = g.orbit_count() as u64;
    assert_eq!(averaged, direct, "fixed-point average disagrees with orbit partition");
    Ok(averaged)
}

/// Rank of a transitive group: the number of orbits of a point stabilizer,
/// equal to (1/|G|) * sum of fix(g)^2. Both routes are computed and must
/// agree.
pub fn group_rank(g: &PermGroup) -> Result<u64, GroupError> {
    let elements = g.elements().ok_or(GroupError::NotEnumerated)?;
    if !g.is_transitive() {
        return Err(GroupError::Intransitive);
    }
    let sq_sum: u64 = elements.iter().map(|p| p.fixed_points().pow(2)).sum();
    let order = elements.len() as u64;
    assert_eq!(sq_sum % order, 0, "rank sum must divide evenly");
    let averaged = sq_sum / order;

    let stabilizer: Vec<Perm> = elements.iter().filter(|p| p.apply(0) == 0).cloned().collect();
    let direct = orbit_count_of(g.degree(), &stabilizer) as u64;
    assert_eq!(averaged, direct, "fix^2 average disagrees with stabilizer orbits");
    Ok(averaged)
}

// ---------------------------------------------------------------------------
// Wreath squaring.
// ---------------------------------------------------------------------------

/// The element of the squared group determined by (a, b, swap): without the
/// swap the halves transform independently by a and b; with it every point
/// changes halves, so no point is fixed.
pub fn wreath_embed(a: &Perm, b: &Perm, swap: bool) -> Perm {
    assert_eq!(a.degree(), b.degree());
    let k = a.degree();
    let mut images = vec![0u32; 2 * k];
    for x in 0..k {
        if swap {
            images[x] = (k + b.apply(x)) as u32;
            images[k + x] = a.apply(x) as u32;
        } else {
            images[x] = a.apply(x) as u32;
            images[k + x] = (k + b.apply(x)) as u32;
        }
    }
    Perm { images: images.into_boxed_slice() }
}

/// The wreath square of G: degree doubles, order becomes 2 * |G|^2. Elements
/// are enumerated when the result stays within `cap`; the order is tracked
/// whenever G's order is known, enumerated or not.
pub fn wreath_square(g: &PermGroup, cap: usize) -> PermGroup {
    let degree = 2 * g.degree();
    let mut generators: Vec<Perm> = g
        .generators()
        .iter()
        .map(|a| wreath_embed(a, &Perm::identity(g.degree()), false))
        .collect();
    generators.push(wreath_embed(
        &Perm::identity(g.degree()),
        &Perm::identity(g.degree()),
        true,
    ));
    let order = g.order().map(|o| BigUint::from(2u32) * o * o);
    let elements = match (g.elements(), &order) {
        (Some(base), Some(o)) if *o <= BigUint::from(cap) => {
            let mut out = Vec::with_capacity(2 * base.len() * base.len());
            for swap in [false, true] {
                for a in base {
                    for b in base {
                        out.push(wreath_embed(a, b, swap));
                    }
                }
            }
            out.sort_unstable();
            Some(out)
        }
        _ => None,
    };
    PermGroup { degree, generators, elements, order }
}

/// Exact uniform sample from the level-n iterated wreath tower (degree 2^n),
/// drawn recursively: one swap bit, then the first-half sample, then the
/// second-half sample. Level 1 is the symmetric group on two points.
pub fn sample_wreath_tower<R: Rng>(n: u32, rng: &mut R) -> Perm {
    assert!(n >= 1, "tower levels start at 1");
    if n == 1 {
        return if rng.random_range(0..2u8) == 0 {
            Perm::identity(2)
        } else {
            Perm::from_images(vec![1, 0]).unwrap()
        };
    }
    let swap = rng.random_range(0..2u8) == 1;
    let a = sample_wreath_tower(n - 1, rng);
    let b = sample_wreath_tower(n - 1, rng);
    wreath_embed(&a, &b, swap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::rat;
    use rand::SeedableRng;

    fn s(text: &str) -> Perm {
        Perm::from_cycles(text, None).unwrap()
    }

    fn group(gens: &[&str], degree: usize) -> PermGroup {
        let gens: Vec<Perm> =
            gens.iter().map(|t| Perm::from_cycles(t, Some(degree)).unwrap()).collect();
        close_generators(&gens, DEFAULT_CLOSURE_CAP).unwrap()
    }

    #[test]
    fn cycle_parsing() {
        assert_eq!(s("(1 2)").images(), &[1, 0]);
        assert_eq!(s("(1 2)(3 4)").images(), &[1, 0, 3, 2]);
        assert_eq!(s("(1 2 3)").images(), &[1, 2, 0]);
        assert_eq!(Perm::from_cycles("()", Some(3)).unwrap(), Perm::identity(3));
        assert_eq!(Perm::from_cycles("(1 2)", Some(4)).unwrap().images(), &[1, 0, 2, 3]);
        for bad in ["(1 2", "1 2)", "(0 1)", "(1 1)", "(1 2)(2 3)", "(1 x)"] {
            assert!(Perm::from_cycles(bad, None).is_err(), "{bad}");
        }
        assert!(Perm::from_cycles("(1 4)", Some(2)).is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["(1 2)", "(1 2 3)", "(1 3)(2 4)", "()"] {
            let p = Perm::from_cycles(text, Some(4)).unwrap();
            let shown = p.to_string();
            assert_eq!(Perm::from_cycles(&shown, Some(4)).unwrap(), p, "{text} -> {shown}");
        }
    }

    #[test]
    fn composition_is_right_to_left() {
        let a = s("(1 2 3)");
        let b = Perm::from_cycles("(1 2)", Some(3)).unwrap();
        // a(b(1)) = a(2) = 3, a(b(2)) = a(1) = 2, a(b(3)) = a(3) = 1.
        assert_eq!(a.compose(&b).images(), &[2, 1, 0]);
        assert_eq!(b.compose(&a).images(), &[0, 2, 1]);
        let inv = a.inverse();
        assert!(a.compose(&inv).is_identity());
        assert!(inv.compose(&a).is_identity());
    }

    #[test]
    fn closure_orders() {
        assert_eq!(group(&["(1 2)"], 2).order().unwrap(), &BigUint::from(2u32));
        assert_eq!(group(&["(1 2)", "(1 2 3)"], 3).order().unwrap(), &BigUint::from(6u32));
        assert_eq!(group(&["(1 2 3 4)", "(2 4)"], 4).order().unwrap(), &BigUint::from(8u32));
        assert_eq!(group(&["(1 2 3 4)"], 4).order().unwrap(), &BigUint::from(4u32));
        assert_eq!(
            group(&["(1 2 3)", "(2 3 4)"], 4).order().unwrap(),
            &BigUint::from(12u32)
        );
        assert_eq!(
            group(&["(1 2)", "(1 2 3 4 5)"], 5).order().unwrap(),
            &BigUint::from(120u32)
        );
    }

    #[test]
    fn closure_cap_gives_unenumerated_group() {
        let gens = vec![
            Perm::from_cycles("(1 2)", Some(5)).unwrap(),
            Perm::from_cycles("(1 2 3 4 5)", None).unwrap(),
        ];
        let g = close_generators(&gens, 10).unwrap();
        assert!(g.elements().is_none());
        assert!(g.order().is_none());
        assert!(matches!(burnside_orbits(&g), Err(GroupError::NotEnumerated)));
    }

    #[test]
    fn fixed_point_densities() {
        let s3 = group(&["(1 2)", "(1 2 3)"], 3);
        assert_eq!(alpha_of_set(s3.elements().unwrap()).unwrap(), rat(2, 3));
        let s4 = group(&["(1 2)", "(1 2 3 4)"], 4);
        assert_eq!(alpha_of_set(s4.elements().unwrap()).unwrap(), rat(5, 8));
        let a4 = group(&["(1 2 3)", "(2 3 4)"], 4);
        assert_eq!(alpha_of_set(a4.elements().unwrap()).unwrap(), rat(3, 4));
        let d4 = group(&["(1 2 3 4)", "(2 4)"], 4);
        assert_eq!(alpha_of_set(d4.elements().unwrap()).unwrap(), rat(3, 8));
        let trivial = PermGroup::trivial(5);
        assert_eq!(alpha_of_set(trivial.elements().unwrap()).unwrap(), rat(1, 1));
        assert!(matches!(alpha_of_set(&[]), Err(GroupError::EmptySet)));
    }

    #[test]
    fn coset_densities() {
        let s3 = group(&["(1 2)", "(1 2 3)"], 3);
        assert_eq!(alpha_of_coset(&s3, &Perm::identity(3), &s3).unwrap(), rat(2, 3));

        let s2 = group(&["(1 2)"], 2);
        let trivial = PermGroup::trivial(2);
        assert_eq!(alpha_of_coset(&s2, &s("(1 2)"), &trivial).unwrap(), rat(0, 1));

        // D_4 over its rotations: the reflection coset has two vertex
        // reflections (fixed points) and two edge reflections (none).
        let d4 = group(&["(1 2 3 4)", "(2 4)"], 4);
        let c4 = group(&["(1 2 3 4)"], 4);
        let reflection = Perm::from_cycles("(2 4)", Some(4)).unwrap();
        assert_eq!(alpha_of_coset(&d4, &reflection, &c4).unwrap(), rat(1, 2));

        let outside = Perm::from_cycles("(1 2)", Some(4)).unwrap();
        assert!(matches!(
            alpha_of_coset(&d4, &outside, &c4),
            Err(GroupError::NotInGroup)
        ));
        assert!(matches!(
            alpha_of_coset(&c4, &Perm::identity(4), &d4),
            Err(GroupError::NotSubgroup)
        ));
    }

    #[test]
    fn burnside_counts() {
        assert_eq!(burnside_orbits(&group(&["(1 2)", "(1 2 3)"], 3)).unwrap(), 1);
        assert_eq!(burnside_orbits(&PermGroup::trivial(4)).unwrap(), 4);
        assert_eq!(burnside_orbits(&group(&["(1 2 3 4)", "(2 4)"], 4)).unwrap(), 1);
        assert_eq!(burnside_orbits(&group(&["(1 2)"], 3)).unwrap(), 2);
        assert_eq!(burnside_orbits(&group(&["(1 2)", "(3 4)"], 4)).unwrap(), 2);
    }

    #[test]
    fn ranks() {
        for d in 3..=6usize {
            let mut big = vec!["(1 2)".to_string()];
            let cycle: Vec<String> = (1..=d).map(|k| k.to_string()).collect();
            big.push(format!("({})", cycle.join(" ")));
            let refs: Vec<&str> = big.iter().map(String::as_str).collect();
            assert_eq!(group_rank(&group(&refs, d)).unwrap(), 2, "S_{d}");
        }
        assert_eq!(group_rank(&group(&["(1 2 3 4)", "(2 4)"], 4)).unwrap(), 3);
        assert_eq!(group_rank(&group(&["(1 2 3 4)"], 4)).unwrap(), 4);
        assert!(matches!(
            group_rank(&group(&["(1 2)"], 3)),
            Err(GroupError::Intransitive)
        ));
    }

    #[test]
    fn wreath_square_census() {
        let g1 = group(&["(1 2)"], 2);
        let g2 = wreath_square(&g1, DEFAULT_CLOSURE_CAP);
        assert_eq!(g2.degree(), 4);
        assert_eq!(g2.order().unwrap(), &BigUint::from(8u32));
        assert_eq!(alpha_of_set(g2.elements().unwrap()).unwrap(), rat(3, 8));
        assert_eq!(group_rank(&g2).unwrap(), 3);

        // Same fixed-point census as D_4 even as an abstract isomorph.
        let d4 = group(&["(1 2 3 4)", "(2 4)"], 4);
        let census = |g: &PermGroup| {
            let mut counts = vec![0usize; 5];
            for p in g.elements().unwrap() {
                counts[p.fixed_points() as usize] += 1;
            }
            counts
        };
        assert_eq!(census(&g2), census(&d4));

        let g3 = wreath_square(&g2, DEFAULT_CLOSURE_CAP);
        assert_eq!(g3.degree(), 8);
        assert_eq!(g3.order().unwrap(), &BigUint::from(128u32));
        assert_eq!(alpha_of_set(g3.elements().unwrap()).unwrap(), rat(39, 128));

        // Closure from the constructed generators agrees with enumeration.
        let closed = close_generators(g3.generators(), DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(closed.order(), g3.order());
        assert_eq!(closed.elements(), g3.elements());
    }

    #[test]
    fn wreath_order_tracked_past_enumeration_cap() {
        let g1 = group(&["(1 2)"], 2);
        let g2 = wreath_square(&g1, 4); // cap below 8 forces generator-only
        assert!(g2.elements().is_none());
        assert_eq!(g2.order().unwrap(), &BigUint::from(8u32));
    }

    #[test]
    fn swapped_elements_have_no_fixed_points() {
        let a = s("(1 2 3)");
        let b = Perm::from_cycles("()", Some(3)).unwrap();
        let w = wreath_embed(&a, &b, true);
        assert_eq!(w.degree(), 6);
        assert!(!w.has_fixed_point());
        let plain = wreath_embed(&a, &b, false);
        assert_eq!(plain.fixed_points(), b.fixed_points() + a.fixed_points());
    }

    #[test]
    fn tower_samples_are_deterministic_and_uniform_enough() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let samples: Vec<Perm> = (0..8000).map(|_| sample_wreath_tower(2, &mut rng)).collect();
        let alpha = alpha_of_set(&samples).unwrap();
        let observed = crate::numcore::rat_to_f64(&alpha);
        // 3 sigma for a proportion of 3/8 over 8000 draws.
        assert!((observed - 0.375).abs() < 3.0 * (0.375f64 * 0.625 / 8000.0).sqrt());

        let mut rng2 = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let again: Vec<Perm> = (0..8000).map(|_| sample_wreath_tower(2, &mut rng2)).collect();
        assert_eq!(samples, again);

        // Every level-2 sample lies in the enumerated level-2 group.
        let g2 = wreath_square(&group(&["(1 2)"], 2), DEFAULT_CLOSURE_CAP);
        for p in samples.iter().take(64) {
            assert!(g2.contains(p).unwrap());
        }
    }
}
