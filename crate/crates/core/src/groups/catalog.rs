//! Catalog of every group of order 2..=16 up to isomorphism (41 classes),
//! built as multiplication tables from explicit element models, together
//! with their regular permutation representations and the enumeration of
//! all surjections onto cyclic groups. The sweep feeds these to `find_mu`.

use super::{CyclicMap, GroupError, Perm, PermGroup};

/// A finite group as a multiplication table over 0..order, with element 0
/// the identity and a designated generating set.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    name: String,
    mul: Vec<Vec<usize>>,
    gens: Vec<usize>,
}

impl GroupSpec {
    fn new(name: &str, mul: Vec<Vec<usize>>, gens: Vec<usize>) -> Self {
        GroupSpec {
            name: name.to_string(),
            mul,
            gens,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// Regular representation: each generator becomes the permutation
    /// h -> g*h of the element set.
    pub fn regular_rep(&self) -> Result<PermGroup, GroupError> {
        let n = self.order();
        let mut gens = Vec::with_capacity(self.gens.len());
        for &g in &self.gens {
            gens.push(Perm::from_images((0..n).map(|h| self.mul[g][h]).collect())?);
        }
        PermGroup::from_generators(n, gens)
    }

    /// Check the table axioms and that the marked generators generate.
    /// Used by tests; catalog construction is formula-driven.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.order();
        for row in &self.mul {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(format!("{}: malformed table", self.name));
            }
        }
        for a in 0..n {
            if self.mul[0][a] != a || self.mul[a][0] != a {
                return Err(format!("{}: element 0 is not the identity", self.name));
            }
            if !(0..n).any(|b| self.mul[a][b] == 0) {
                return Err(format!("{}: element {} has no inverse", self.name, a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return Err(format!("{}: not associative", self.name));
                    }
                }
            }
        }
        let mut reached = vec![false; n];
        reached[0] = true;
        let mut stack = vec![0usize];
        while let Some(a) = stack.pop() {
            for &g in &self.gens {
                let b = self.mul[g][a];
                if !reached[b] {
                    reached[b] = true;
                    stack.push(b);
                }
            }
        }
        if !reached.iter().all(|&r| r) {
            return Err(format!("{}: marked generators do not generate", self.name));
        }
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }
}

fn table_from<T, F>(name: &str, elements: Vec<T>, mul: F, gens: &[T]) -> GroupSpec
where
    T: PartialEq + Clone,
    F: Fn(&T, &T) -> T,
{
    let n = elements.len();
    let idx = |t: &T| elements.iter().position(|e| e == t).expect("closed table");
    let table = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| idx(&mul(&elements[a], &elements[b])))
                .collect()
        })
        .collect();
    let gens = gens.iter().map(|g| idx(g)).collect();
    GroupSpec::new(name, table, gens)
}

/// Cyclic group C_n.
pub fn cyclic(n: usize) -> GroupSpec {
    table_from(
        &format!("C{}", n),
        (0..n).collect(),
        |a, b| (a + b) % n,
        &[1 % n],
    )
}

/// Direct product, with the factors' generators embedded on each side.
pub fn direct(name: &str, a: &GroupSpec, b: &GroupSpec) -> GroupSpec {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let mul = (0..n)
        .map(|x| {
            let (xa, xb) = (x / nb, x % nb);
            (0..n)
                .map(|y| {
                    let (ya, yb) = (y / nb, y % nb);
                    a.mul[xa][ya] * nb + b.mul[xb][yb]
                })
                .collect()
        })
        .collect();
    let mut gens: Vec<usize> = a.gens.iter().map(|&g| g * nb).collect();
    gens.extend(b.gens.iter().copied());
    GroupSpec::new(name, mul, gens)
}

/// Metacyclic group <a, b | a^m = b^n = 1, b a b^-1 = a^t> with t^n = 1 mod m,
/// realized on pairs (i, j) = a^i b^j.
pub fn metacyclic(name: &str, m: usize, n: usize, t: usize) -> GroupSpec {
    assert!(pow_mod_usize(t, n, m) == 1 % m, "t^n must be 1 mod m");
    let elements: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (0..m).map(move |i| (i, j)))
        .collect();
    table_from(
        name,
        elements,
        |x, y| ((x.0 + pow_mod_usize(t, x.1, m) * y.0) % m, (x.1 + y.1) % n),
        &[(1, 0), (0, 1)],
    )
}

/// Dicyclic group of order 4n: <a, b | a^(2n) = 1, b^2 = a^n, b a b^-1 = a^-1>,
/// realized on pairs (i, j) = a^i b^j with j in {0, 1}. Dic_2 is the
/// quaternion group Q8, Dic_4 the generalized quaternion group Q16.
pub fn dicyclic(name: &str, n: usize) -> GroupSpec {
    let two_n = 2 * n;
    let elements: Vec<(usize, usize)> = (0..2usize)
        .flat_map(|j| (0..two_n).map(move |i| (i, j)))
        .collect();
    table_from(
        name,
        elements,
        |x, y| {
            if x.1 == 0 {
                ((x.0 + y.0) % two_n, y.1)
            } else if y.1 == 0 {
                ((x.0 + two_n - y.0 % two_n) % two_n, 1)
            } else {
                ((x.0 + two_n - y.0 % two_n + n) % two_n, 0)
            }
        },
        &[(1, 0), (0, 1)],
    )
}

/// Central product C4 o D4 of order 16 (the one-qubit Pauli group):
/// elements i^a X^b Z^c with X Z = i^2 Z X, multiplied by
/// (a,b,c)(a',b',c') = (a + a' + 2cb', b + b', c + c').
pub fn pauli() -> GroupSpec {
    let elements: Vec<(usize, usize, usize)> = (0..4usize)
        .flat_map(|a| (0..2usize).flat_map(move |b| (0..2usize).map(move |c| (a, b, c))))
        .collect();
    table_from(
        "C4oD4",
        elements,
        |x, y| ((x.0 + y.0 + 2 * x.2 * y.1) % 4, (x.1 + y.1) % 2, (x.2 + y.2) % 2),
        &[(0, 1, 0), (0, 0, 1), (1, 0, 0)],
    )
}

/// (C2 x C2) : C4 of order 16, with the C4 generator acting by swapping
/// the two C2 coordinates (the action has order 2).
pub fn swap_semidirect() -> GroupSpec {
    type E = ((usize, usize), usize);
    let elements: Vec<E> = (0..4usize)
        .flat_map(|z| {
            (0..2usize).flat_map(move |x| (0..2usize).map(move |y| ((x, y), z)))
        })
        .collect();
    let act = |(x, y): (usize, usize), z: usize| if z % 2 == 1 { (y, x) } else { (x, y) };
    table_from(
        "(C2xC2):C4",
        elements,
        move |p: &E, q: &E| {
            let (vx, vy) = act(q.0, p.1);
            (((p.0 .0 + vx) % 2, (p.0 .1 + vy) % 2), (p.1 + q.1) % 4)
        },
        &[((1, 0), 0), ((0, 0), 1)],
    )
}

/// The alternating group A4 as a table, from its natural degree-4 action.
pub fn alternating4() -> GroupSpec {
    let a = Perm::from_cycle_str(4, "(1 2 3)").expect("valid cycles");
    let b = Perm::from_cycle_str(4, "(1 2)(3 4)").expect("valid cycles");
    let group = PermGroup::from_generators(4, vec![a, b]).expect("small closure");
    from_perm_group("A4", &group)
}

/// Multiplication table of an explicitly enumerated permutation group.
pub fn from_perm_group(name: &str, group: &PermGroup) -> GroupSpec {
    let n = group.order();
    let elements = group.elements();
    let mul = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    group
                        .index_of(&elements[a].compose(&elements[b]))
                        .expect("closed")
                })
                .collect()
        })
        .collect();
    let gens = group
        .generators()
        .iter()
        .map(|g| group.index_of(g).expect("generator enumerated"))
        .collect();
    GroupSpec::new(name, mul, gens)
}

fn pow_mod_usize(mut base: usize, mut exp: usize, m: usize) -> usize {
    if m == 1 {
        return 0;
    }
    let mut acc = 1usize;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Every group of order 2..=max_order up to isomorphism. The catalog stops
/// at 16, which covers 41 isomorphism classes; order 1 is omitted because
/// the lemma needs at least two points to compare stabilizers.
pub fn small_groups(max_order: usize) -> Vec<GroupSpec> {
    assert!(
        (2..=16).contains(&max_order),
        "catalog covers orders 2..=16"
    );
    let mut all: Vec<GroupSpec> = Vec::new();
    let c2 = cyclic(2);
    let c3 = cyclic(3);
    let c4 = cyclic(4);
    let c6 = cyclic(6);
    let c8 = cyclic(8);
    let d4 = metacyclic("D4", 4, 2, 3);
    let q8 = dicyclic("Q8", 2);
    let c2c2 = direct("C2xC2", &c2, &c2);

    all.push(c2.clone()); // order 2
    all.push(c3.clone()); // order 3
    all.push(c4.clone()); // order 4
    all.push(c2c2.clone());
    all.push(cyclic(5)); // order 5
    all.push(c6.clone()); // order 6
    all.push(metacyclic("S3", 3, 2, 2));
    all.push(cyclic(7)); // order 7
    all.push(c8.clone()); // order 8
    all.push(direct("C4xC2", &c4, &c2));
    all.push(direct("C2xC2xC2", &c2c2, &c2));
    all.push(d4.clone());
    all.push(q8.clone());
    all.push(cyclic(9)); // order 9
    all.push(direct("C3xC3", &c3, &c3));
    all.push(cyclic(10)); // order 10
    all.push(metacyclic("D5", 5, 2, 4));
    all.push(cyclic(11)); // order 11
    all.push(cyclic(12)); // order 12
    all.push(direct("C6xC2", &c6, &c2));
    all.push(metacyclic("D6", 6, 2, 5));
    all.push(alternating4());
    all.push(dicyclic("Dic3", 3));
    all.push(cyclic(13)); // order 13
    all.push(cyclic(14)); // order 14
    all.push(metacyclic("D7", 7, 2, 6));
    all.push(cyclic(15)); // order 15
    all.push(cyclic(16)); // order 16
    all.push(direct("C8xC2", &c8, &c2));
    all.push(direct("C4xC4", &c4, &c4));
    all.push(direct("C4xC2xC2", &c4, &c2c2));
    all.push(direct("C2^4", &c2c2, &c2c2));
    all.push(metacyclic("D8", 8, 2, 7));
    all.push(metacyclic("SD16", 8, 2, 3));
    all.push(metacyclic("M4(2)", 8, 2, 5));
    all.push(dicyclic("Q16", 4));
    all.push(metacyclic("C4:C4", 4, 4, 3));
    all.push(direct("D4xC2", &d4, &c2));
    all.push(direct("Q8xC2", &q8, &c2));
    all.push(pauli());
    all.push(swap_semidirect());

    all.retain(|g| g.order() <= max_order);
    all
}

/// Every surjection from the group onto Z/m over every m dividing the
/// order, enumerated through generator-image assignments. Each candidate
/// assignment is validated by the full multiplication-table check.
pub fn all_cyclic_quotients(group: &PermGroup) -> Vec<CyclicMap> {
    let order = group.order() as u64;
    let gen_count = group.generators().len();
    let mut maps = Vec::new();
    for m in 1..=order {
        if order % m != 0 {
            continue;
        }
        let mut images = vec![0u64; gen_count];
        loop {
            if let Ok(map) = CyclicMap::from_generator_images(group, m, &images) {
                maps.push(map);
            }
            // Mixed-radix increment over [0, m)^gen_count.
            let mut pos = 0;
            loop {
                if pos == gen_count {
                    break;
                }
                images[pos] += 1;
                if images[pos] < m {
                    break;
                }
                images[pos] = 0;
                pos += 1;
            }
            if pos == gen_count {
                break;
            }
        }
    }
    maps
}
