//! Finite permutation groups given by generators, surjections onto cyclic
//! groups, and an executable check of the free-action lemma: a transitive
//! action with two equal point stabilizers and a surjection pi onto a
//! cyclic group always contains an element acting freely whose image
//! generates the cyclic group.

pub mod catalog;

use num::integer::gcd;
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("group closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("expected {expected} generator images, got {got}")]
    ImageCountMismatch { expected: usize, got: usize },
    #[error("cyclic target order must be at least 1")]
    ZeroModulus,
    #[error("generator images do not extend to a homomorphism: {0}")]
    InconsistentImages(String),
    #[error("the map is not surjective onto Z/{modulus}")]
    NotSurjective { modulus: u64 },
    #[error("cyclic map does not belong to this group")]
    MapGroupMismatch,
    #[error("hypothesis violated: the group does not act transitively")]
    NotTransitive,
    #[error("hypothesis violated: stabilizers of points 1 and 2 differ")]
    UnequalStabilizers,
    #[error("hypothesis violated: the action needs at least 2 points, degree is {0}")]
    DegreeTooSmall(usize),
    #[error(
        "exhausted the group without finding a free element with generating image \
         (order {order}, modulus {modulus}); this refutes the implementation, \
         not the lemma"
    )]
    NoFreeWitness { order: usize, modulus: u64 },
    #[error("instance {index} failed: {source}")]
    SweepFailure {
        index: usize,
        #[source]
        source: Box<GroupError>,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A permutation of {1..n}, stored as 0-based images.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            map: (0..n).collect(),
        }
    }

    /// Build from 0-based images, checking bijectivity.
    pub fn from_images(map: Vec<usize>) -> Result<Self, GroupError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &i in &map {
            if i >= n || seen[i] {
                return Err(GroupError::NotAPermutation(format!("images {:?}", map)));
            }
            seen[i] = true;
        }
        Ok(Perm { map })
    }

    /// Parse disjoint cycles in 1-based notation, e.g. "(1 2 3)(4 5)";
    /// "()" is the identity.
    pub fn from_cycle_str(n: usize, s: &str) -> Result<Self, GroupError> {
        let bad = |msg: String| GroupError::NotAPermutation(msg);
        let mut map: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let s = s.trim();
        if !s.starts_with('(') || !s.ends_with(')') {
            return Err(bad(format!("cycles must be parenthesized, got {:?}", s)));
        }
        for cycle in s[1..s.len() - 1].split(")(") {
            let points: Vec<usize> = cycle
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| bad(format!("bad point {:?}", t)))
                })
                .collect::<Result<_, _>>()?;
            for &p in &points {
                if p == 0 || p > n {
                    return Err(bad(format!("point {} outside 1..={}", p, n)));
                }
                if seen[p - 1] {
                    return Err(bad(format!("point {} repeated across cycles", p)));
                }
                seen[p - 1] = true;
            }
            for (i, &p) in points.iter().enumerate() {
                map[p - 1] = points[(i + 1) % points.len()] - 1;
            }
        }
        Ok(Perm { map })
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// self after other: (self.compose(other))(x) = self(other(x)).
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            map[j] = i;
        }
        Perm { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// 0-based fixed points.
    pub fn fixed_points(&self) -> Vec<usize> {
        self.map
            .iter()
            .enumerate()
            .filter(|(i, &j)| *i == j)
            .map(|(i, _)| i)
            .collect()
    }

    /// 1-based disjoint-cycle notation; the identity prints as "()".
    pub fn cycle_string(&self) -> String {
        let n = self.map.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.map[start] == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut p = start;
            loop {
                seen[p] = true;
                out.push_str(&(p + 1).to_string());
                p = self.map[p];
                if p == start {
                    break;
                }
                out.push(' ');
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// A finite permutation group: generators plus the fully enumerated closure
/// in breadth-first order (identity first), which makes every downstream
/// choice deterministic given the generator order.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PermGroup {
    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Result<Self, GroupError> {
        Self::from_generators_capped(degree, generators, DEFAULT_CLOSURE_CAP)
    }

    pub fn from_generators_capped(
        degree: usize,
        generators: Vec<Perm>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::NotAPermutation(format!(
                    "generator degree {} does not match {}",
                    g.degree(),
                    degree
                )));
            }
        }
        let identity = Perm::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0usize);
        let mut next = 0usize;
        while next < elements.len() {
            let current = elements[next].clone();
            for g in &generators {
                let product = g.compose(&current);
                if !index.contains_key(&product) {
                    if elements.len() >= cap {
                        return Err(GroupError::ClosureCapExceeded { cap });
                    }
                    index.insert(product.clone(), elements.len());
                    elements.push(product);
                }
            }
            next += 1;
        }
        Ok(PermGroup {
            degree,
            generators,
            elements,
            index,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Elements in breadth-first enumeration order, identity first.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Orbit of a 1-based point, ascending.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        assert!(point >= 1 && point <= self.degree, "point out of range");
        let mut in_orbit = vec![false; self.degree];
        in_orbit[point - 1] = true;
        let mut stack = vec![point - 1];
        while let Some(p) = stack.pop() {
            for g in &self.generators {
                let q = g.apply(p);
                if !in_orbit[q] {
                    in_orbit[q] = true;
                    stack.push(q);
                }
            }
        }
        (0..self.degree)
            .filter(|&p| in_orbit[p])
            .map(|p| p + 1)
            .collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.degree >= 1 && self.orbit(1).len() == self.degree
    }

    /// Stabilizer of a 1-based point: every element fixing it, in
    /// enumeration order.
    pub fn stabilizer(&self, point: usize) -> Vec<Perm> {
        assert!(point >= 1 && point <= self.degree, "point out of range");
        self.elements
            .iter()
            .filter(|g| g.apply(point - 1) == point - 1)
            .cloned()
            .collect()
    }
}

/// A surjection from a permutation group onto Z/m, stored as the image of
/// every group element (indexed in enumeration order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicMap {
    modulus: u64,
    images: Vec<u64>,
}

impl CyclicMap {
    /// Extend generator images to the whole group and verify the result is
    /// a well-defined surjective homomorphism by checking the full
    /// multiplication table.
    pub fn from_generator_images(
        group: &PermGroup,
        modulus: u64,
        generator_images: &[u64],
    ) -> Result<Self, GroupError> {
        if modulus == 0 {
            return Err(GroupError::ZeroModulus);
        }
        if generator_images.len() != group.generators.len() {
            return Err(GroupError::ImageCountMismatch {
                expected: group.generators.len(),
                got: generator_images.len(),
            });
        }
        let n = group.order();
        let mut images: Vec<Option<u64>> = vec![None; n];
        images[0] = Some(0);
        // Breadth-first enumeration guarantees every element is first
        // reached from an earlier index, so one ascending pass assigns all
        // images; revisits are consistency checks.
        for i in 0..n {
            let base = images[i].expect("assigned by an earlier index");
            for (g, &g_img) in group.generators.iter().zip(generator_images) {
                let j = group.index[&g.compose(&group.elements[i])];
                let expected = (base + g_img) % modulus;
                match images[j] {
                    None => images[j] = Some(expected),
                    Some(existing) if existing != expected => {
                        return Err(GroupError::InconsistentImages(format!(
                            "element {} receives both {} and {}",
                            group.elements[j].cycle_string(),
                            existing,
                            expected
                        )));
                    }
                    _ => {}
                }
            }
        }
        let images: Vec<u64> = images.into_iter().map(|v| v.unwrap()).collect();
        for (i, a) in group.elements.iter().enumerate() {
            for (j, b) in group.elements.iter().enumerate() {
                let prod = group.index[&a.compose(b)];
                if images[prod] != (images[i] + images[j]) % modulus {
                    return Err(GroupError::InconsistentImages(format!(
                        "pi({} * {}) != pi({}) + pi({})",
                        a.cycle_string(),
                        b.cycle_string(),
                        a.cycle_string(),
                        b.cycle_string()
                    )));
                }
            }
        }
        let mut hit = vec![false; modulus as usize];
        for &v in &images {
            hit[v as usize] = true;
        }
        if !hit.iter().all(|&b| b) {
            return Err(GroupError::NotSurjective { modulus });
        }
        Ok(CyclicMap { modulus, images })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Image of the element at enumeration index `i`.
    pub fn image_at(&self, i: usize) -> u64 {
        self.images[i]
    }

    pub fn image_of(&self, group: &PermGroup, p: &Perm) -> Option<u64> {
        group.index_of(p).map(|i| self.images[i])
    }
}

/// Find mu acting freely (no fixed points) whose image generates Z/m.
///
/// Hypotheses checked up front: the action is transitive and the
/// stabilizers of points 1 and 2 coincide. The lemma guarantees a witness;
/// the refusal branch exists only to surface implementation bugs.
/// Ties break to the first qualifying element in enumeration order.
pub fn find_mu(group: &PermGroup, pi: &CyclicMap) -> Result<Perm, GroupError> {
    if pi.images.len() != group.order() {
        return Err(GroupError::MapGroupMismatch);
    }
    if group.degree() < 2 {
        return Err(GroupError::DegreeTooSmall(group.degree()));
    }
    if !group.is_transitive() {
        return Err(GroupError::NotTransitive);
    }
    let mut stab1 = group.stabilizer(1);
    let mut stab2 = group.stabilizer(2);
    stab1.sort();
    stab2.sort();
    if stab1 != stab2 {
        return Err(GroupError::UnequalStabilizers);
    }
    for (i, g) in group.elements.iter().enumerate() {
        if g.fixed_points().is_empty() && gcd(pi.images[i], pi.modulus) == 1 {
            return Ok(g.clone());
        }
    }
    Err(GroupError::NoFreeWitness {
        order: group.order(),
        modulus: pi.modulus,
    })
}

/// One (group, surjection) pair for the sweep.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub group: PermGroup,
    pub map: CyclicMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRecord {
    pub name: String,
    pub degree: usize,
    pub group_order: usize,
    pub modulus: u64,
    pub mu: String,
    pub image: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub instance_count: usize,
    pub witnesses: Vec<WitnessRecord>,
}

/// Run `find_mu` on every instance; any failure aborts the sweep with the
/// offending instance serialized into the error.
pub fn verify_lemma_sweep(instances: &[Instance]) -> Result<SweepReport, GroupError> {
    let witnesses: Vec<WitnessRecord> = instances
        .par_iter()
        .enumerate()
        .map(|(index, inst)| {
            let mu = find_mu(&inst.group, &inst.map).map_err(|e| GroupError::SweepFailure {
                index,
                source: Box::new(e),
            })?;
            let image = inst
                .map
                .image_of(&inst.group, &mu)
                .expect("mu is a group element");
            Ok(WitnessRecord {
                name: inst.name.clone(),
                degree: inst.group.degree(),
                group_order: inst.group.order(),
                modulus: inst.map.modulus(),
                mu: mu.cycle_string(),
                image,
            })
        })
        .collect::<Result<_, GroupError>>()?;
    Ok(SweepReport {
        instance_count: instances.len(),
        witnesses,
    })
}

/// Parse instances from plain text. Blocks are separated by blank lines:
///
/// ```text
/// # free-action check over C4
/// degree 4
/// cyclic 2
/// gen (1 2 3 4) -> 1
/// ```
///
/// `degree n` fixes the acted-on set {1..n}, `cyclic m` the target Z/m, and
/// each `gen` line gives one generator in cycle notation together with its
/// image under pi.
pub fn parse_instances(text: &str) -> Result<Vec<Instance>, GroupError> {
    let mut instances = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .collect::<Vec<_>>();
    lines.push((usize::MAX, "")); // flush the final block
    for (line_no, line) in lines {
        if line.is_empty() {
            if !block.is_empty() {
                instances.push(parse_block(&block)?);
                block.clear();
            }
        } else {
            block.push((line_no, line));
        }
    }
    Ok(instances)
}

fn parse_block(block: &[(usize, &str)]) -> Result<Instance, GroupError> {
    let mut degree: Option<usize> = None;
    let mut modulus: Option<u64> = None;
    let mut gens: Vec<(usize, String, u64)> = Vec::new();
    for &(line, text) in block {
        let err = |msg: String| GroupError::Parse { line, msg };
        let (keyword, rest) = text.split_once(' ').unwrap_or((text, ""));
        match keyword {
            "degree" => {
                degree = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| err(format!("bad degree {:?}", rest)))?,
                );
            }
            "cyclic" => {
                modulus = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| err(format!("bad cyclic order {:?}", rest)))?,
                );
            }
            "gen" => {
                let (cycles, image) = rest
                    .rsplit_once("->")
                    .ok_or_else(|| err("gen line needs '<cycles> -> <image>'".into()))?;
                let image: u64 = image
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad image {:?}", image)))?;
                gens.push((line, cycles.trim().to_string(), image));
            }
            other => return Err(err(format!("unknown keyword {:?}", other))),
        }
    }
    let first_line = block[0].0;
    let degree = degree.ok_or(GroupError::Parse {
        line: first_line,
        msg: "missing 'degree'".into(),
    })?;
    let modulus = modulus.ok_or(GroupError::Parse {
        line: first_line,
        msg: "missing 'cyclic'".into(),
    })?;
    if gens.is_empty() {
        return Err(GroupError::Parse {
            line: first_line,
            msg: "at least one 'gen' line is required".into(),
        });
    }
    let mut perms = Vec::new();
    let mut images = Vec::new();
    for (line, cycles, image) in &gens {
        let p = Perm::from_cycle_str(degree, cycles).map_err(|e| GroupError::Parse {
            line: *line,
            msg: e.to_string(),
        })?;
        perms.push(p);
        images.push(*image);
    }
    let group = PermGroup::from_generators(degree, perms)?;
    let map = CyclicMap::from_generator_images(&group, modulus, &images)?;
    Ok(Instance {
        name: format!("degree-{} order-{} mod-{}", degree, group.order(), modulus),
        group,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_phi;

    fn cyclic_group(n: usize) -> PermGroup {
        let gen = Perm::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap();
        PermGroup::from_generators(n, vec![gen]).unwrap()
    }

    fn s3_natural() -> PermGroup {
        let a = Perm::from_cycle_str(3, "(1 2 3)").unwrap();
        let b = Perm::from_cycle_str(3, "(1 2)").unwrap();
        PermGroup::from_generators(3, vec![a, b]).unwrap()
    }

    #[test]
    fn cycle_parsing_roundtrip() {
        let p = Perm::from_cycle_str(5, "(1 2 3)(4 5)").unwrap();
        assert_eq!(p.cycle_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::from_cycle_str(3, "()").unwrap(), Perm::identity(3));
        assert!(Perm::from_cycle_str(3, "(1 4)").is_err());
        assert!(Perm::from_cycle_str(3, "(1 2)(2 3)").is_err());
    }

    #[test]
    fn stabilizer_examples() {
        let c4 = cyclic_group(4);
        for point in 1..=4 {
            assert_eq!(c4.stabilizer(point), vec![Perm::identity(4)]);
        }
        let s3 = s3_natural();
        assert_eq!(s3.stabilizer(1).len(), 2);
        let c2 = cyclic_group(2);
        assert_eq!(c2.stabilizer(1), vec![Perm::identity(2)]);
    }

    #[test]
    fn orbit_stabilizer_theorem() {
        for group in [cyclic_group(4), s3_natural(), cyclic_group(6)] {
            for point in 1..=group.degree() {
                assert_eq!(
                    group.orbit(point).len() * group.stabilizer(point).len(),
                    group.order()
                );
            }
        }
    }

    #[test]
    fn stabilizers_conjugate_under_transitivity() {
        let s3 = s3_natural();
        for i in 1..=3usize {
            for j in 1..=3usize {
                // Some g with g(i) = j conjugates stab(i) onto stab(j).
                let g = s3
                    .elements()
                    .iter()
                    .find(|g| g.apply(i - 1) == j - 1)
                    .unwrap();
                let mut conjugated: Vec<Perm> = s3
                    .stabilizer(i)
                    .iter()
                    .map(|h| g.compose(h).compose(&g.inverse()))
                    .collect();
                conjugated.sort();
                let mut stab_j = s3.stabilizer(j);
                stab_j.sort();
                assert_eq!(conjugated, stab_j);
            }
        }
    }

    #[test]
    fn find_mu_on_c2_swap() {
        let c2 = cyclic_group(2);
        let pi = CyclicMap::from_generator_images(&c2, 2, &[1]).unwrap();
        let mu = find_mu(&c2, &pi).unwrap();
        assert_eq!(mu.cycle_string(), "(1 2)");
        assert_eq!(pi.image_of(&c2, &mu), Some(1));
    }

    #[test]
    fn find_mu_on_regular_c4_onto_z2() {
        let c4 = cyclic_group(4);
        let pi = CyclicMap::from_generator_images(&c4, 2, &[1]).unwrap();
        let mu = find_mu(&c4, &pi).unwrap();
        // g and g^3 both qualify; enumeration order picks g.
        assert_eq!(mu.cycle_string(), "(1 2 3 4)");
        assert!(mu.fixed_points().is_empty());
    }

    #[test]
    fn find_mu_rejects_unequal_stabilizers() {
        let s3 = s3_natural();
        let pi = CyclicMap::from_generator_images(&s3, 2, &[0, 1]).unwrap();
        assert_eq!(find_mu(&s3, &pi), Err(GroupError::UnequalStabilizers));
    }

    #[test]
    fn find_mu_rejects_intransitive_action() {
        // C2 acting on 3 points, fixing the third.
        let g = Perm::from_cycle_str(3, "(1 2)").unwrap();
        let group = PermGroup::from_generators(3, vec![g]).unwrap();
        let pi = CyclicMap::from_generator_images(&group, 2, &[1]).unwrap();
        assert_eq!(find_mu(&group, &pi), Err(GroupError::NotTransitive));
    }

    #[test]
    fn cyclic_map_requires_consistency_and_surjectivity() {
        let c4 = cyclic_group(4);
        // The generator has order 4, so mapping it to 1 in Z/3 cannot extend.
        assert!(matches!(
            CyclicMap::from_generator_images(&c4, 3, &[1]),
            Err(GroupError::InconsistentImages(_))
        ));
        assert_eq!(
            CyclicMap::from_generator_images(&c4, 2, &[0]),
            Err(GroupError::NotSurjective { modulus: 2 })
        );
    }

    #[test]
    fn preimage_count_of_generators() {
        // |pi^{-1}(generators of Z/m)| = phi(m)/m * |G|.
        let c4 = cyclic_group(4);
        for (m, images) in [(2u64, vec![1u64]), (4, vec![1]), (1, vec![0])] {
            let pi = CyclicMap::from_generator_images(&c4, m, &images).unwrap();
            let count = (0..c4.order())
                .filter(|&i| gcd(pi.image_at(i), m) == 1)
                .count();
            assert_eq!(
                count as u64 * m,
                euler_phi(m) * c4.order() as u64,
                "m={}",
                m
            );
        }
    }

    #[test]
    fn sweep_trivial_and_small() {
        assert_eq!(verify_lemma_sweep(&[]).unwrap().instance_count, 0);
        let c2 = cyclic_group(2);
        let pi = CyclicMap::from_generator_images(&c2, 2, &[1]).unwrap();
        let report = verify_lemma_sweep(&[Instance {
            name: "C2 regular".into(),
            group: c2,
            map: pi,
        }])
        .unwrap();
        assert_eq!(report.witnesses.len(), 1);
        assert_eq!(report.witnesses[0].mu, "(1 2)");
    }

    #[test]
    fn closure_cap_is_enforced() {
        // S5 has order 120, above the cap of 100.
        let a = Perm::from_cycle_str(5, "(1 2 3 4 5)").unwrap();
        let b = Perm::from_cycle_str(5, "(1 2)").unwrap();
        let result = PermGroup::from_generators_capped(5, vec![a, b], 100);
        assert!(matches!(
            result,
            Err(GroupError::ClosureCapExceeded { cap: 100 })
        ));
    }

    #[test]
    fn parse_instances_roundtrip() {
        let text = "\
# two worked instances
degree 2
cyclic 2
gen (1 2) -> 1

degree 4
cyclic 2
gen (1 2 3 4) -> 1
";
        let instances = parse_instances(text).unwrap();
        assert_eq!(instances.len(), 2);
        let report = verify_lemma_sweep(&instances).unwrap();
        assert_eq!(report.instance_count, 2);
        assert_eq!(report.witnesses[1].mu, "(1 2 3 4)");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(
            parse_instances("degree 2\ncyclic 2\nfoo bar"),
            Err(GroupError::Parse { .. })
        ));
        assert!(matches!(
            parse_instances("degree 2\ngen (1 2) -> 1"),
            Err(GroupError::Parse { .. })
        ));
    }
}
