//! Sparse tensors over binary indices and pairwise contraction.

use std::collections::HashMap;

use crate::scalar::ExactScalar;

/// Results of rank up to this size are accumulated densely.
const DENSE_ACC_RANK: usize = 16;

#[derive(Debug, Clone)]
enum Data {
    Sparse(HashMap<u64, ExactScalar>),
    Dense(Vec<ExactScalar>),
}

/// A tensor whose `j`-th index is `idx[j]`, stored at bit `j` of the key.
#[derive(Debug, Clone)]
pub(crate) struct Tensor {
    pub(crate) idx: Vec<usize>,
    data: Data,
}

impl Tensor {
    pub(crate) fn from_map(idx: Vec<usize>, mut map: HashMap<u64, ExactScalar>) -> Self {
        map.retain(|_, v| !v.is_zero());
        let rank = idx.len();
        if rank <= DENSE_ACC_RANK && map.len() * 2 > 1usize << rank {
            let mut dense = vec![ExactScalar::zero(); 1 << rank];
            for (k, v) in map {
                dense[k as usize] = v;
            }
            Tensor { idx, data: Data::Dense(dense) }
        } else {
            Tensor { idx, data: Data::Sparse(map) }
        }
    }

    fn from_dense(idx: Vec<usize>, dense: Vec<ExactScalar>) -> Self {
        let nnz = dense.iter().filter(|v| !v.is_zero()).count();
        if nnz * 2 > dense.len() {
            Tensor { idx, data: Data::Dense(dense) }
        } else {
            let map = dense
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| (k as u64, v))
                .collect();
            Tensor { idx, data: Data::Sparse(map) }
        }
    }

    pub(crate) fn scalar(s: ExactScalar) -> Self {
        Tensor::from_map(Vec::new(), HashMap::from([(0, s)]))
    }

    pub(crate) fn rank(&self) -> usize {
        self.idx.len()
    }

    pub(crate) fn nnz(&self) -> usize {
        match &self.data {
            Data::Sparse(m) => m.len(),
            Data::Dense(v) => v.iter().filter(|x| !x.is_zero()).count(),
        }
    }

    pub(crate) fn entries(&self) -> Box<dyn Iterator<Item = (u64, &ExactScalar)> + '_> {
        match &self.data {
            Data::Sparse(m) => Box::new(m.iter().map(|(&k, v)| (k, v))),
            Data::Dense(v) => Box::new(
                v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k as u64, x)),
            ),
        }
    }
}

/// Collects the bits of `key` at `positions` into a packed key.
#[inline]
fn gather(key: u64, positions: &[usize]) -> u64 {
    positions.iter().enumerate().fold(0, |acc, (j, &p)| acc | (((key >> p) & 1) << j))
}

/// Sums over every index the two tensors share. The result carries the
/// free indices of `a` followed by those of `b`.
pub(crate) fn contract(a: &Tensor, b: &Tensor) -> Tensor {
    let split = |t: &Tensor, other: &Tensor| {
        let mut shared = Vec::new();
        let mut free = Vec::new();
        for (p, i) in t.idx.iter().enumerate() {
            match other.idx.iter().position(|j| j == i) {
                Some(q) => shared.push((p, q)),
                None => free.push(p),
            }
        }
        (shared, free)
    };
    let (shared, a_free) = split(a, b);
    let a_sh: Vec<usize> = shared.iter().map(|&(p, _)| p).collect();
    let b_sh: Vec<usize> = shared.iter().map(|&(_, q)| q).collect();
    let b_free: Vec<usize> = (0..b.rank()).filter(|p| !b_sh.contains(p)).collect();

    let idx: Vec<usize> =
        a_free.iter().map(|&p| a.idx[p]).chain(b_free.iter().map(|&p| b.idx[p])).collect();
    let shift = a_free.len();

    let mut groups: HashMap<u64, Vec<(u64, &ExactScalar)>> = HashMap::new();
    for (k, v) in b.entries() {
        groups.entry(gather(k, &b_sh)).or_default().push((gather(k, &b_free) << shift, v));
    }

    if idx.len() <= DENSE_ACC_RANK {
        let mut acc = vec![ExactScalar::zero(); 1 << idx.len()];
        for (k, va) in a.entries() {
            if let Some(list) = groups.get(&gather(k, &a_sh)) {
                let fa = gather(k, &a_free);
                for &(fb, vb) in list {
                    acc[(fa | fb) as usize] += va * vb;
                }
            }
        }
        Tensor::from_dense(idx, acc)
    } else {
        let mut acc: HashMap<u64, ExactScalar> = HashMap::new();
        for (k, va) in a.entries() {
            if let Some(list) = groups.get(&gather(k, &a_sh)) {
                let fa = gather(k, &a_free);
                for &(fb, vb) in list {
                    *acc.entry(fa | fb).or_default() += va * vb;
                }
            }
        }
        Tensor::from_map(idx, acc)
    }
}
