//! Classical decompositions of KR modules: the closed forms for the verified
//! cases and an independent Kleber-tree computation for simply-laced types.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::classrep::ClassicalRootSystem;
use crate::error::{Error, Result};
use crate::rootdata::{AffineDiagram, Family};
use crate::verify::CaseId;

/// Multiset of dominant classical weights, sorted by weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    entries: Vec<(Vec<i64>, u64)>,
}

impl Decomposition {
    pub fn from_entries<I: IntoIterator<Item = (Vec<i64>, u64)>>(items: I) -> Self {
        let mut map: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
        for (w, m) in items {
            *map.entry(w).or_insert(0) += m;
        }
        Self {
            entries: map.into_iter().filter(|(_, m)| *m > 0).collect(),
        }
    }

    pub fn entries(&self) -> &[(Vec<i64>, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.entries.iter().all(|(_, m)| *m == 1)
    }

    pub fn contains(&self, w: &[i64]) -> bool {
        self.entries.iter().any(|(x, _)| x == w)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(w, m)| {
                    let weight: serde_json::Map<String, Value> = w
                        .iter()
                        .enumerate()
                        .map(|(i, c)| ((i + 1).to_string(), json!(c)))
                        .collect();
                    json!({"weight": weight, "mult": m})
                })
                .collect(),
        )
    }
}

fn classical_weight(rank: usize, parts: &[(usize, i64)]) -> Vec<i64> {
    let mut w = vec![0; rank];
    for &(node, c) in parts {
        w[node - 1] += c;
    }
    w
}

pub fn closed_form_decompose(case: CaseId, s: i64) -> Result<Decomposition> {
    if s <= 0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let rank = case.family().node_count() - 1;
    let one = |r: usize, x: usize| {
        Decomposition::from_entries((0..=s).map(|k| (classical_weight(rank, &[(r, s - k), (x, k)]), 1)))
    };
    let two = |r: usize, x: usize| {
        Decomposition::from_entries((0..=s).flat_map(|k| {
            (0..=k).map(move |kp| (classical_weight(rank, &[(r, s - k), (x, k - kp)]), 1))
        }))
    };
    Ok(match case {
        CaseId::E6R3 => one(3, 6),
        CaseId::E6R5 => one(5, 1),
        CaseId::E7R2 => one(2, 7),
        CaseId::E6TwistedR4 => two(4, 1),
        CaseId::E7R6 => two(6, 1),
        CaseId::E8R1 => two(1, 8),
        CaseId::F4R4 => Decomposition::from_entries((0..=s / 2).flat_map(|t2| {
            (0..=t2).map(move |t1| (classical_weight(rank, &[(4, s - 2 * t2), (1, t1)]), 1))
        })),
    })
}

struct KNode {
    weight: Vec<i64>,
    parent: Option<usize>,
    depth: usize,
    /// `wt(parent) - wt(self)` in simple-root coordinates.
    beta: Vec<i64>,
}

/// Classical decomposition of `W^{r,s}` from the Kleber tree of a single
/// rectangle. Only untwisted simply-laced families are supported.
pub fn kleber_decompose(family: Family, r: usize, s: i64) -> Result<Decomposition> {
    if !family.is_simply_laced() {
        return Err(Error::Unsupported(format!("Kleber tree for non-simply-laced {family}")));
    }
    let d = AffineDiagram::get(family);
    if r == 0 || r >= d.len() {
        return Err(Error::InvalidArgument(format!("node {r} is not classical in {family}")));
    }
    if s <= 0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let sys = ClassicalRootSystem::for_family(family);
    let rank = sys.rank();
    let mut nodes = vec![KNode {
        weight: vec![0; rank],
        parent: None,
        depth: 0,
        beta: vec![0; rank],
    }];
    let mut level = 1usize;
    loop {
        if (level as i64) <= s {
            for n in nodes.iter_mut() {
                n.weight[r - 1] += 1;
            }
        }
        let frontier: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].depth == level - 1).collect();
        let mut added = false;
        for x in frontier {
            let wx = nodes[x].weight.clone();
            for y in sys.dominant_weights_below(&wx) {
                if y == wx {
                    continue;
                }
                let diff: Vec<i64> = wx.iter().zip(&y).map(|(a, b)| a - b).collect();
                let beta: Vec<i64> = sys
                    .root_coords(&diff)
                    .iter()
                    .map(|c| c.to_integer() as i64)
                    .collect();
                let bounded = nodes[x].parent.is_none() || beta.iter().zip(&nodes[x].beta).all(|(b, p)| b <= p);
                if bounded {
                    nodes.push(KNode {
                        weight: y,
                        parent: Some(x),
                        depth: level,
                        beta,
                    });
                    added = true;
                }
            }
        }
        if !added && (level as i64) >= s {
            break;
        }
        level += 1;
    }
    let mut out = Vec::new();
    for idx in 0..nodes.len() {
        let m = kleber_multiplicity(d, &nodes, idx, r, s);
        if m > 0 {
            out.push((nodes[idx].weight.clone(), m));
        }
    }
    Ok(Decomposition::from_entries(out))
}

fn kleber_multiplicity(d: &AffineDiagram, nodes: &[KNode], idx: usize, r: usize, s: i64) -> u64 {
    let rank = d.rank();
    // betas[l-1] = beta^{(l)} along the path from the root.
    let mut betas = Vec::new();
    let mut cur = idx;
    while let Some(p) = nodes[cur].parent {
        betas.push(nodes[cur].beta.clone());
        cur = p;
    }
    betas.reverse();
    let depth = betas.len();
    let beta_at = |l: usize| -> Vec<i64> {
        if l >= 1 && l <= depth {
            betas[l - 1].clone()
        } else {
            vec![0; rank]
        }
    };
    let mut result = 1u64;
    for i in 1..=depth {
        let mut q = vec![0i64; rank];
        for l in 1..=i {
            for (a, v) in beta_at(l).iter().enumerate() {
                q[a] += v;
            }
        }
        let next = beta_at(i + 1);
        let cur_beta = beta_at(i);
        for a in 0..rank {
            let m = cur_beta[a] - next[a];
            if m == 0 {
                continue;
            }
            let l_term = if a + 1 == r { (i as i64).min(s) } else { 0 };
            let mut vac = l_term;
            for b in 0..rank {
                vac -= d.a(a + 1, b + 1) * q[b];
            }
            result *= binomial(vac + m, m);
            if result == 0 {
                return 0;
            }
        }
    }
    result
}

fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut acc = Ratio::<i128>::from(1);
    for j in 0..k {
        acc = acc * Ratio::from((n - j) as i128) / Ratio::from((j + 1) as i128);
    }
    if acc.is_zero() {
        0
    } else {
        acc.to_integer() as u64
    }
}
