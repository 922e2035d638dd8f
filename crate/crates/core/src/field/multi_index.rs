use serde::{Deserialize, Serialize};

/// Multi-index α = (α_1, …, α_N); the last entry is the boundary-normal order α_N.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        MultiIndex(v)
    }

    /// `order` derivatives along a single axis.
    pub fn axis(dim: usize, axis: usize, order: u32) -> Self {
        let mut v = vec![0; dim];
        v[axis] = order;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// α_N.
    pub fn normal(&self) -> u32 {
        *self.0.last().unwrap_or(&0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All α in `dim` variables with |α| = k, in lexicographically decreasing order of α_1.
    pub fn all_of_order(dim: usize, k: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; dim];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            let dim = cur.len();
            if pos + 1 == dim {
                cur[pos] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for a in (0..=left).rev() {
                cur[pos] = a;
                rec(pos + 1, left - a, cur, out);
            }
        }
        if dim == 0 {
            if k == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(0, k, &mut cur, &mut out);
        out
    }

    /// Tangential multi-indices (α' , j) in `dim` variables: |α'| = k over the first dim−1 axes, α_N = j.
    pub fn tangential_with_normal(dim: usize, k: u32, j: u32) -> Vec<MultiIndex> {
        MultiIndex::all_of_order(dim - 1, k)
            .into_iter()
            .map(|mut a| {
                a.0.push(j);
                a
            })
            .collect()
    }

    /// All β ≤ α componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(vec![])];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for b in &out {
                for k in 0..=a {
                    let mut v = b.0.clone();
                    v.push(k);
                    next.push(MultiIndex(v));
                }
            }
            out = next;
        }
        out
    }

    /// Π C(α_i, β_i).
    pub fn binomial(&self, beta: &MultiIndex) -> f64 {
        self.0.iter().zip(&beta.0).map(|(&a, &b)| binomial(a, b)).product()
    }

    pub fn sub(&self, beta: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&beta.0).map(|(a, b)| a - b).collect())
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

pub fn factorial(k: u32) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}
