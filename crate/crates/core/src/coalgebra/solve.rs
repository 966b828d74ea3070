use std::collections::{BTreeMap, HashMap};

use super::{coderivation_expand, compositions, CogeneratingFamily, FamilyKind};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseRow};
use crate::multimap::{add_into, odd, Column, MultiMap, Tuple};
use crate::scalar::Scalar;

fn tensor_columns(one: Scalar, parts: &[&Column]) -> Column {
    let mut acc = Column::from([(Tuple::new(), one)]);
    for part in parts {
        let mut next = Column::new();
        for (a, x) in &acc {
            for (b, y) in *part {
                let mut key = a.clone();
                key.extend_from_slice(b);
                add_into(&mut next, key, x * y);
            }
        }
        acc = next;
    }
    acc
}

/// Product of the columns `family_{r_j}(segment_j)` over the given
/// segments, or `None` if one factor vanishes.
fn segment_product(family: &CogeneratingFamily, z: &[u32], segments: &[(usize, usize)]) -> Option<Column> {
    let mut cols = Vec::with_capacity(segments.len());
    for &(start, len) in segments {
        let col = family.component(len)?.column(&z[start..start + len])?;
        cols.push(col);
    }
    Some(tensor_columns(family.field().one(), &cols))
}

/// Finds a homotopy `η` rel `(φ, ψ)` with `ψ − φ = δ″η + ηδ′`, or returns
/// `None` if there is none. The equation is linear in `η` once `φ` and
/// `ψ` are fixed; it is solved exactly with free coefficients set to zero.
pub fn solve_homotopy(
    phi: &CogeneratingFamily,
    psi: &CogeneratingFamily,
    d_source: &CogeneratingFamily,
    d_target: &CogeneratingFamily,
) -> Result<Option<CogeneratingFamily>> {
    phi.require(FamilyKind::Morphism)?;
    psi.require(FamilyKind::Morphism)?;
    d_source.require(FamilyKind::Coderivation)?;
    d_target.require(FamilyKind::Coderivation)?;
    let n_max = phi.truncation();
    for t in [psi.truncation(), d_source.truncation(), d_target.truncation()] {
        if t != n_max {
            return Err(Error::TruncationMismatch(n_max, t));
        }
    }
    if phi.source() != d_source.source() || phi.target() != d_target.source() {
        return Err(Error::SpaceMismatch {
            expected: format!("{} -> {}", d_source.source(), d_target.source()),
            found: format!("{} -> {}", phi.source(), phi.target()),
        });
    }
    let field = phi.field();
    let src = phi.source();
    let tgt = phi.target();

    // unknowns: coefficients of η_r, highest arity first
    let mut var_base: HashMap<(usize, Tuple), (usize, u32)> = HashMap::new();
    let mut vars: Vec<(usize, Tuple, u32)> = Vec::new();
    for r in (1..=n_max).rev() {
        for x in src.tuples(r) {
            let range = tgt.basis_in_degree(src.tuple_degree(&x) + 1);
            if range.is_empty() {
                continue;
            }
            let x = Tuple::from_vec(x);
            var_base.insert((r, x.clone()), (vars.len(), range.start));
            for y in range {
                vars.push((r, x.clone(), y));
            }
        }
    }

    let mut ech = Echelon::new(field);
    for n in 1..=n_max {
        let dexp: Vec<(usize, MultiMap)> = (1..=n)
            .map(|m| coderivation_expand(d_source, n, m).map(|e| (m, e)))
            .collect::<Result<_>>()?;
        let parts: Vec<(usize, Vec<usize>)> = (1..=n)
            .filter(|m| d_target.component(*m).is_some())
            .flat_map(|m| compositions(n, m).into_iter().map(move |r| (m, r)))
            .collect();
        for z in src.tuples(n) {
            let mut rows: BTreeMap<u32, SparseRow> = BTreeMap::new();
            let mut bump = |o: u32, var: usize, v: Scalar| {
                let row = rows.entry(o).or_default();
                let slot = row.entry(var).or_insert_with(|| field.zero());
                *slot += &v;
            };
            // η ∘ δ′
            for (m, dm) in &dexp {
                let Some(col) = dm.column(&z) else { continue };
                for (w, c) in col {
                    let Some(&(base, start)) = var_base.get(&(*m, w.clone())) else {
                        continue;
                    };
                    for y in tgt.basis_in_degree(src.tuple_degree(w) + 1) {
                        bump(y, base + (y - start) as usize, c.clone());
                    }
                }
            }
            // δ″ ∘ η
            for (m, r) in &parts {
                let bm = d_target.component(*m).expect("filtered");
                let mut starts = Vec::with_capacity(r.len());
                let mut acc = 0;
                for &k in r {
                    starts.push(acc);
                    acc += k;
                }
                let segs: Vec<(usize, usize)> = starts.iter().copied().zip(r.iter().copied()).collect();
                for i in 0..*m {
                    let (s_i, r_i) = segs[i];
                    let seg = &z[s_i..s_i + r_i];
                    let Some(&(base, start)) = var_base.get(&(r_i, Tuple::from_slice(seg))) else {
                        continue;
                    };
                    let Some(left) = segment_product(psi, &z, &segs[..i]) else {
                        continue;
                    };
                    let Some(right) = segment_product(phi, &z, &segs[i + 1..]) else {
                        continue;
                    };
                    let sign = odd(src.tuple_degree(&z[..s_i]));
                    for (a, la) in &left {
                        for (c, rc) in &right {
                            let lr = (la * rc).signed(sign);
                            for y in tgt.basis_in_degree(src.tuple_degree(seg) + 1) {
                                let mut key = a.clone();
                                key.push(y);
                                key.extend_from_slice(c);
                                let Some(bcol) = bm.column(&key) else { continue };
                                for (o, bv) in bcol {
                                    bump(o[0], base + (y - start) as usize, &lr * bv);
                                }
                            }
                        }
                    }
                }
            }
            for o in tgt.basis_in_degree(src.tuple_degree(&z)) {
                let key = [o];
                let rhs = &psi.component(n).map_or(field.zero(), |c| c.coefficient(&z, &key))
                    - &phi.component(n).map_or(field.zero(), |c| c.coefficient(&z, &key));
                let row = rows.remove(&o).unwrap_or_default();
                if !ech.insert(row, rhs) {
                    return Ok(None);
                }
            }
        }
    }
    let Some(x) = ech.solve(vars.len()) else {
        return Ok(None);
    };
    let mut comps: BTreeMap<usize, MultiMap> = BTreeMap::new();
    for ((r, input, y), v) in vars.into_iter().zip(x) {
        if v.is_zero() {
            continue;
        }
        comps
            .entry(r)
            .or_insert_with(|| MultiMap::zero(field, src, tgt, r, 1, 1))
            .add_entry(input, Tuple::from_slice(&[y]), v);
    }
    CogeneratingFamily::homotopy(phi, psi, comps).map(Some)
}
