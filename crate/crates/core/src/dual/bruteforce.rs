use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{collect_sparse, DualAlgebra, Sparse};
use crate::coalgebra::{CheckReport, CoalgebraSpec, Witness};
use crate::error::{Error, Result};
use crate::exactlin::{FormalTensor, Scalar};
use crate::identities::{IdentityOptions, NAMonomial, NAPoly, NAVariable, SignRule};

/// Largest arity evaluated by brute force.
pub const MAX_ARITY: usize = 4;

/// A monomial tree with every subtree given a shape id, so that subtree
/// values can be shared between monomials and tuples.
enum Compiled {
    Leaf(u32),
    Node { shape: usize, left_degree: usize, left: Box<Compiled>, right: Box<Compiled> },
}

fn compile(m: &NAMonomial, shapes: &mut HashMap<NAMonomial, usize>) -> Compiled {
    match m {
        NAMonomial::Leaf(v) => Compiled::Leaf(v.derivative),
        NAMonomial::Node(a, b) => {
            let normal = m.relabel(&mut |pos, v| NAVariable { slot: pos + 1, derivative: v.derivative });
            let next = shapes.len();
            let shape = *shapes.entry(normal).or_insert(next);
            Compiled::Node {
                shape,
                left_degree: a.degree(),
                left: Box::new(compile(a, shapes)),
                right: Box::new(compile(b, shapes)),
            }
        }
    }
}

struct Evaluator<'a, 'b> {
    alg: &'b DualAlgebra<'a>,
    arity: usize,
    memo: HashMap<(usize, Vec<u32>), Sparse>,
}

impl Evaluator<'_, '_> {
    /// Value of `c` on coordinate functionals `leaves`, given in leaf order.
    fn eval(&mut self, c: &Compiled, leaves: &[u32]) -> Result<Sparse> {
        match c {
            Compiled::Leaf(m) => {
                let mut v: Sparse = vec![(leaves[0], Scalar::one())];
                for _ in 0..*m {
                    v = self.alg.derivation_sparse(&v)?;
                }
                Ok(v)
            }
            Compiled::Node { shape, left_degree, left, right } => {
                let shared = leaves.len() < self.arity;
                if shared {
                    if let Some(v) = self.memo.get(&(*shape, leaves.to_vec())) {
                        return Ok(v.clone());
                    }
                }
                let a = self.eval(left, &leaves[..*left_degree])?;
                let b = if a.is_empty() { Vec::new() } else { self.eval(right, &leaves[*left_degree..])? };
                let v = if b.is_empty() { Vec::new() } else { self.alg.product_sparse(&a, &b)? };
                if shared {
                    self.memo.insert((*shape, leaves.to_vec()), v.clone());
                }
                Ok(v)
            }
        }
    }
}

/// Evaluates `p` on every tuple of coordinate functionals with index at
/// most `max` (respecting the parity signature) and requires each result
/// to be the zero functional. Products are exact: the dual is inverted
/// over a window wide enough for every intermediate product.
pub fn bruteforce_identity(spec: &CoalgebraSpec, name: &str, p: &NAPoly, max: u64, opts: IdentityOptions) -> Result<CheckReport> {
    p.check_multilinear()?;
    let arity = p.arity();
    if arity > MAX_ARITY {
        return Err(Error::Unsupported(format!("brute force handles arity up to {MAX_ARITY}, got {arity}")));
    }
    let window = DualAlgebra::window_for(spec, max, arity, p.total_derivatives());
    let alg = DualAlgebra::new(spec, window, opts)?;
    let coords: Vec<u32> = spec.labels_up_to(max).iter().map(|l| alg.id(l)).collect::<Result<_>>()?;
    let slots: Vec<Vec<u32>> = p
        .signature()
        .iter()
        .map(|s| coords.iter().copied().filter(|&id| s.admits(alg.parity(id))).collect())
        .collect();

    let mut shapes = HashMap::new();
    let monomials: Vec<(Scalar, Vec<usize>, Compiled)> =
        p.terms().iter().map(|(c, m)| (c.clone(), m.leaf_order(), compile(m, &mut shapes))).collect();
    let koszul = p.sign_rule() == SignRule::Super;
    let mut ev = Evaluator { alg: &alg, arity, memo: HashMap::new() };

    let mut report = CheckReport::new(name).with_intervals(spec.intervals_up_to(max));
    let mut tuples = 0usize;
    if slots.iter().all(|s| !s.is_empty()) {
        let mut pos = vec![0usize; arity];
        loop {
            let tuple: Vec<u32> = pos.iter().zip(&slots).map(|(&k, s)| s[k]).collect();
            tuples += 1;
            let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
            for (c, order, tree) in &monomials {
                let leaves: Vec<u32> = order.iter().map(|s| tuple[s - 1]).collect();
                let mut coeff = c.clone();
                if koszul && odd_inversions(order, &tuple, &alg) % 2 == 1 {
                    coeff = -coeff;
                }
                for (k, x) in ev.eval(tree, &leaves)? {
                    *acc.entry(k).or_insert_with(Scalar::zero) += &coeff * x;
                }
            }
            let value = collect_sparse(acc);
            if !value.is_empty() {
                let context: Vec<String> = tuple.iter().enumerate().map(|(k, id)| format!("x{} = ξ[{}]", k + 1, alg.label(*id))).collect();
                report.fail(Witness {
                    label: None,
                    context: context.join(", "),
                    residual: Some(FormalTensor::from_vector(&alg.to_functional(&value))),
                });
            }
            if !advance(&mut pos, &slots) {
                break;
            }
        }
    }
    report.note(format!("identity {p}"));
    report.note(format!("{tuples} tuples of coordinate functionals, products exact up to index {window}"));
    Ok(report)
}

/// Odd pairs that the leaf order puts out of slot order.
fn odd_inversions(order: &[usize], tuple: &[u32], alg: &DualAlgebra<'_>) -> usize {
    let odd: Vec<bool> = order.iter().map(|s| alg.parity(tuple[s - 1]).is_odd()).collect();
    let mut n = 0;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] && odd[a] && odd[b] {
                n += 1;
            }
        }
    }
    n
}

fn advance(pos: &mut [usize], slots: &[Vec<u32>]) -> bool {
    for k in (0..pos.len()).rev() {
        pos[k] += 1;
        if pos[k] < slots[k].len() {
            return true;
        }
        pos[k] = 0;
    }
    false
}
