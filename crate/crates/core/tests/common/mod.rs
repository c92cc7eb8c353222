#![allow(dead_code)]
//! Brute-force subgroup oracle for GL_2(F_q), q prime and small.

use std::collections::{BTreeSet, HashSet};

use drinfeld::frobenius::FrobSample;
use drinfeld::gfq::FieldSpec;
use drinfeld::image::TraceDet;
use drinfeld::linalg::Matrix;

pub type Bits = [u64; 8];

/// GL_2(F_q) for prime q <= 5 with plain integer arithmetic.
pub struct Gl2 {
    pub q: u64,
    pub elems: Vec<[u64; 4]>,
    table: Vec<u16>,
}

impl Gl2 {
    pub fn new(q: u64) -> Self {
        let mut elems = Vec::new();
        let mut pos = vec![u16::MAX; q.pow(4) as usize];
        let code = |m: &[u64; 4]| (((m[0] * q + m[1]) * q + m[2]) * q + m[3]) as usize;
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let m = [a, b, c, d];
                        if (a * d + q * q - b * c) % q != 0 {
                            pos[code(&m)] = elems.len() as u16;
                            elems.push(m);
                        }
                    }
                }
            }
        }
        let n = elems.len();
        assert!(n <= 512);
        let mut table = vec![0u16; n * n];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                let p = [
                    (x[0] * y[0] + x[1] * y[2]) % q,
                    (x[0] * y[1] + x[1] * y[3]) % q,
                    (x[2] * y[0] + x[3] * y[2]) % q,
                    (x[2] * y[1] + x[3] * y[3]) % q,
                ];
                table[i * n + j] = pos[code(&p)];
            }
        }
        Gl2 { q, elems, table }
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn identity(&self) -> usize {
        self.elems.iter().position(|m| *m == [1, 0, 0, 1]).unwrap()
    }

    pub fn closure(&self, gens: &[usize]) -> Bits {
        let mut bits = [0u64; 8];
        let e = self.identity();
        bits[e / 64] |= 1 << (e % 64);
        let mut list = vec![e];
        let mut k = 0;
        while k < list.len() {
            let x = list[k];
            k += 1;
            for &g in gens {
                let y = self.table[x * self.n() + g] as usize;
                if bits[y / 64] >> (y % 64) & 1 == 0 {
                    bits[y / 64] |= 1 << (y % 64);
                    list.push(y);
                }
            }
        }
        bits
    }

    pub fn members(&self, h: &Bits) -> Vec<usize> {
        (0..self.n()).filter(|&i| h[i / 64] >> (i % 64) & 1 == 1).collect()
    }

    pub fn trace_det(&self, i: usize) -> (u64, u64) {
        let m = self.elems[i];
        ((m[0] + m[3]) % self.q, (m[0] * m[3] + self.q * self.q - m[1] * m[2]) % self.q)
    }

    /// Every subgroup, by adjoining one element at a time.
    pub fn all_subgroups(&self) -> Vec<Bits> {
        let mut seen: HashSet<Bits> = HashSet::new();
        let trivial = self.closure(&[]);
        seen.insert(trivial);
        let mut stack = vec![(trivial, Vec::<usize>::new())];
        while let Some((h, gens)) = stack.pop() {
            let mut done = h;
            for g in 0..self.n() {
                if done[g / 64] >> (g % 64) & 1 == 1 {
                    continue;
                }
                // <H, g> = <H, hg>, so skip the rest of the coset Hg.
                for x in self.members(&h) {
                    let y = self.table[x * self.n() + g] as usize;
                    done[y / 64] |= 1 << (y % 64);
                }
                let mut next = gens.clone();
                next.push(g);
                let k = self.closure(&next);
                if seen.insert(k) {
                    stack.push((k, next));
                }
            }
        }
        seen.into_iter().collect()
    }
}

pub fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

pub struct Oracle {
    pub maximal_full_det: Vec<BTreeSet<TraceDet>>,
    pub proper_full_det: Vec<BTreeSet<TraceDet>>,
    pub maximal_elements: Vec<Vec<[u64; 4]>>,
}

pub fn oracle(q: u64) -> Oracle {
    let fq = FieldSpec::new(q, 1).unwrap();
    let g = Gl2::new(q);
    let subs = g.all_subgroups();
    let whole = g.closure(&(0..g.n()).collect::<Vec<_>>());
    let full_det = |h: &Bits| g.members(h).iter().map(|&i| g.trace_det(i).1).collect::<BTreeSet<_>>().len() as u64 == q - 1;
    let proper: Vec<&Bits> = subs.iter().filter(|h| **h != whole && full_det(h)).collect();
    let charpolys = |h: &Bits| -> BTreeSet<TraceDet> {
        g.members(h).iter().map(|&i| {
            let (t, d) = g.trace_det(i);
            (fq.elem(t), fq.elem(d))
        }).collect()
    };
    let maximal: Vec<&Bits> = proper
        .iter()
        .filter(|h| !proper.iter().any(|k| k != *h && subset(h, k)))
        .copied()
        .collect();
    Oracle {
        maximal_full_det: maximal.iter().map(|h| charpolys(h)).collect(),
        proper_full_det: proper.iter().map(|h| charpolys(h)).collect(),
        maximal_elements: maximal.iter().map(|h| g.members(h).iter().map(|&i| g.elems[i]).collect()).collect(),
    }
}

pub fn synthetic(fq: &'static FieldSpec, m: &[u64; 4]) -> FrobSample {
    let rows = vec![vec![fq.elem(m[0]), fq.elem(m[1])], vec![fq.elem(m[2]), fq.elem(m[3])]];
    FrobSample::synthetic(&Matrix::from_rows(&fq, rows))
}

