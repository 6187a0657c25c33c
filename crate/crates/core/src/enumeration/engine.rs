//! Depth-first product search over per-position candidates, pruned by the
//! running lower bound of the ideal norm times the archimedean weight.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_complex::Complex64;
use rayon::prelude::*;

use super::candidates::{weight, Cand, CandidateSet, SLACK};
use crate::heights::arch_height_factor;
use crate::mahler::{arch_measure_product, compare_arch_measure, ComplexPolynomial};
use crate::numberfield::{FieldElement, PlaceSet};
use crate::poly::KPolynomial;
use crate::rational::{from_u128, to_f64, Rational};
use crate::{Error, Result};

/// Margin around the bound inside which the exact comparison decides.
const EXACT_MARGIN: f64 = 1e-10;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Leaf {
    MaxNorm,
    Mahler { irreducible_only: bool },
}

pub(crate) struct Problem<'a> {
    pub ps: &'a PlaceSet,
    pub positions: Vec<&'a CandidateSet>,
    /// `T^m`.
    pub bound: Rational,
    /// Whether the ideal norm of the denominator enters the weight.
    pub weighted: bool,
    pub leaf: Leaf,
    pub materialize: bool,
    pub ceiling: u128,
    pub workers: usize,
}

pub(crate) type Coords = (i128, i128, i128);

#[derive(Default, Debug)]
pub(crate) struct Outcome {
    pub count: u128,
    pub per_ideal: BTreeMap<Vec<u32>, u128>,
    pub points: Vec<Vec<Coords>>,
    pub visited: u128,
}

impl Outcome {
    fn absorb(&mut self, o: Outcome) {
        self.count += o.count;
        for (k, v) in o.per_ideal {
            *self.per_ideal.entry(k).or_insert(0) += v;
        }
        self.points.extend(o.points);
        self.visited += o.visited;
    }
}

struct State<'c> {
    exps: Vec<u32>,
    mlo: [f64; 2],
    mhi: [f64; 2],
    chosen: Vec<&'c Cand>,
}

struct Ctx<'a, 'b> {
    p: &'b Problem<'a>,
    norms: Vec<u64>,
    tf: f64,
    visited: &'b AtomicU64,
    local: u64,
}

fn ideal_norm(norms: &[u64], exps: &[u32]) -> u128 {
    let mut acc: u128 = 1;
    for (&n, &g) in norms.iter().zip(exps) {
        for _ in 0..g {
            acc = acc.saturating_mul(n as u128);
        }
    }
    acc
}

impl<'a, 'b> Ctx<'a, 'b> {
    fn tick(&mut self) -> Result<()> {
        self.local += 1;
        if self.local >= 4096 {
            let total = self.visited.fetch_add(self.local, AtomicOrdering::Relaxed) + self.local;
            self.local = 0;
            if total as u128 > self.p.ceiling {
                return Err(Error::ResourceLimit { projected: total as u128, ceiling: self.p.ceiling });
            }
        }
        Ok(())
    }

    fn flush(&mut self) {
        self.visited.fetch_add(self.local, AtomicOrdering::Relaxed);
        self.local = 0;
    }

    fn norm_of(&self, exps: &[u32]) -> u128 {
        if self.p.weighted {
            ideal_norm(&self.norms, exps)
        } else {
            1
        }
    }

    fn limit(&self) -> f64 {
        self.tf * (1.0 + SLACK)
    }

    fn dfs<'c>(&mut self, depth: usize, st: &mut State<'c>, out: &mut Outcome) -> Result<()>
    where
        'a: 'c,
    {
        if depth == self.p.positions.len() {
            return self.leaf(st, out);
        }
        let field = &self.p.ps.field;
        let places = field.arch_places();
        let set: &'c CandidateSet = self.p.positions[depth];
        let base_w = weight(&st.mlo, field);
        for stratum in &set.strata {
            let exps: Vec<u32> = st.exps.iter().zip(&stratum.exps).map(|(a, b)| *a.max(b)).collect();
            let n = self.norm_of(&exps) as f64;
            if n * base_w > self.limit() {
                continue;
            }
            for c in &stratum.cands {
                if n * c.wlo > self.limit() {
                    break;
                }
                self.tick()?;
                let mut mlo = st.mlo;
                let mut mhi = st.mhi;
                for i in 0..places {
                    mlo[i] = mlo[i].max(c.vlo[i]);
                    mhi[i] = mhi[i].max(c.vhi[i]);
                }
                if n * weight(&mlo, field) > self.limit() {
                    continue;
                }
                let saved = (std::mem::replace(&mut st.exps, exps.clone()), st.mlo, st.mhi);
                st.mlo = mlo;
                st.mhi = mhi;
                st.chosen.push(c);
                let r = self.dfs(depth + 1, st, out);
                st.chosen.pop();
                st.exps = saved.0;
                st.mlo = saved.1;
                st.mhi = saved.2;
                r?;
            }
        }
        Ok(())
    }

    fn elements(&self, st: &State<'_>) -> Vec<FieldElement> {
        let omega = self.p.ps.field.omega;
        st.chosen.iter().map(|c| FieldElement::from_coords(omega, c.x, c.y, c.den)).collect()
    }

    fn poly(&self, st: &State<'_>) -> KPolynomial {
        let omega = self.p.ps.field.omega;
        KPolynomial::monic(omega, &self.elements(st))
    }

    fn leaf(&mut self, st: &State<'_>, out: &mut Outcome) -> Result<()> {
        let field = &self.p.ps.field;
        let norm = self.norm_of(&st.exps);
        let nf = norm as f64;
        let accept = match self.p.leaf {
            Leaf::MaxNorm => {
                let hi = nf * weight(&st.mhi, field);
                let lo = nf * weight(&st.mlo, field);
                if hi <= self.tf * (1.0 - EXACT_MARGIN) {
                    true
                } else if lo > self.tf * (1.0 + EXACT_MARGIN) {
                    false
                } else {
                    let arch = arch_height_factor(field, &self.elements(st));
                    arch.scale(&from_u128(norm)).cmp_rational(&self.p.bound) != Ordering::Greater
                }
            }
            Leaf::Mahler { irreducible_only } => {
                let embedded: Vec<ComplexPolynomial> = (0..field.arch_places())
                    .map(|i| {
                        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
                        let mut radii = vec![0.0];
                        for c in &st.chosen {
                            coeffs.push(c.emb[i]);
                            radii.push(c.err[i]);
                        }
                        ComplexPolynomial::with_radii(coeffs, radii)
                    })
                    .collect();
                let verdict = match arch_measure_product(field, &embedded) {
                    Ok(m) if nf * m.hi <= self.tf * (1.0 - EXACT_MARGIN) => Some(true),
                    Ok(m) if nf * m.lo > self.tf * (1.0 + EXACT_MARGIN) => Some(false),
                    _ => None,
                };
                let keep = match verdict {
                    Some(v) => v,
                    None => {
                        let f = self.poly(st);
                        let target = &self.p.bound / from_u128(norm);
                        compare_arch_measure(field, &f, &target)? != Ordering::Greater
                    }
                };
                if keep && irreducible_only {
                    super::is_irreducible_over(field, &self.poly(st))?
                } else {
                    keep
                }
            }
        };
        if accept {
            out.count += 1;
            *out.per_ideal.entry(st.exps.clone()).or_insert(0) += 1;
            if self.p.materialize {
                out.points.push(st.chosen.iter().map(|c| (c.x, c.y, c.den)).collect());
            }
        }
        Ok(())
    }
}

/// Runs the search. Work is split over the first-position candidates and
/// merged in their order, so the outcome does not depend on `workers`.
pub(crate) fn run(p: &Problem<'_>) -> Result<Outcome> {
    let field = &p.ps.field;
    let tf = to_f64(&p.bound);
    let visited = AtomicU64::new(0);
    if p.positions.is_empty() {
        return Ok(Outcome::default());
    }
    let first = p.positions[0];
    let mut tops: Vec<&Cand> = Vec::new();
    let mut top_exps: Vec<&Vec<u32>> = Vec::new();
    for s in &first.strata {
        let n = if p.weighted { s.norm as f64 } else { 1.0 };
        for c in &s.cands {
            if n * c.wlo > tf * (1.0 + SLACK) {
                break;
            }
            tops.push(c);
            top_exps.push(&s.exps);
        }
    }
    let work = |idx: usize| -> Result<Outcome> {
        let mut ctx = Ctx { p, norms: p.ps.norms(), tf, visited: &visited, local: 0 };
        let c = tops[idx];
        let mut st = State {
            exps: top_exps[idx].clone(),
            mlo: [0.0; 2],
            mhi: [0.0; 2],
            chosen: vec![c],
        };
        for i in 0..field.arch_places() {
            st.mlo[i] = c.vlo[i];
            st.mhi[i] = c.vhi[i];
        }
        let mut out = Outcome::default();
        let n = ctx.norm_of(&st.exps) as f64;
        if n * weight(&st.mlo, field) <= ctx.limit() {
            ctx.dfs(1, &mut st, &mut out)?;
        }
        ctx.flush();
        Ok(out)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(p.workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let parts: Vec<Result<Outcome>> = pool.install(|| (0..tops.len()).into_par_iter().map(work).collect());
    let mut total = Outcome { per_ideal: BTreeMap::new(), ..Default::default() };
    for part in parts {
        total.absorb(part?);
    }
    total.visited = visited.load(AtomicOrdering::Relaxed) as u128 + tops.len() as u128;
    Ok(total)
}
