//! Executable checks of the index identities between CSLs, the prime
//! decompositions of CSLs and isometries, and the multiplicativity
//! implications between `f_iso` and `f`.
//!
//! Every check is finite: sweeps report what they tested and never claim
//! more than that.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::factorize;
use crate::counting::{check_multiplicative, multiplicity_table, MultiplicityTable, Which};
use crate::csl::{csl_lattice, mcsl, sigma, CoincidenceRecord, MCSLRecord};
use crate::enumerate::{enumerate_auto, EnumerationResult};
use crate::error::{Error, Result};
use crate::isometry::{Isometry, PointGroup};
use crate::lattice::{Lattice, Preset};

fn require_coprime(m: u64, n: u64) -> Result<()> {
    if m.gcd(&n) != 1 {
        return Err(Error::Precondition(format!("indices {m} and {n} are not coprime")));
    }
    Ok(())
}

/// `Σ(R₁R₂) | Σ(R₁)Σ(R₂)`.
pub fn check_divisibility(l: &Lattice, r1: &Isometry, r2: &Isometry) -> Result<bool> {
    let (m, n) = (sigma(l, r1)?, sigma(l, r2)?);
    Ok((m * n) % sigma(l, &r1.compose(r2))? == 0)
}

/// `Σ(R₁R₂) = Σ(R₁)Σ(R₂)` for coprime indices.
pub fn check_coprime_multiplicativity(l: &Lattice, r1: &Isometry, r2: &Isometry) -> Result<bool> {
    let (m, n) = (sigma(l, r1)?, sigma(l, r2)?);
    require_coprime(m, n)?;
    Ok(sigma(l, &r1.compose(r2))? == m * n)
}

/// `Γ(R₁R₂) = Γ ∩ R₁Γ ∩ R₁R₂Γ = Γ(R₁) ∩ R₁Γ(R₂)` for coprime indices.
pub fn check_intersection_identity(l: &Lattice, r1: &Isometry, r2: &Isometry) -> Result<bool> {
    let t = Tower::new(l, r1, r2)?;
    require_coprime(t.m, t.n)?;
    t.intersection_identity()
}

/// One inclusion `lower ⊆ upper` of the tower with its predicted index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerEdge {
    pub lower: String,
    pub upper: String,
    pub label: String,
    /// `None` when the label does not evaluate to an integer.
    pub expected: Option<u64>,
    /// `None` when `lower` is not a sublattice of `upper`.
    pub observed: Option<u64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub lattices: BTreeMap<String, Lattice>,
    pub m: u64,
    pub n: u64,
    /// `[R₁Γ : Γ(R₁) + R₁Γ(R₂)]`.
    pub d: u64,
    /// `[Γ(R₁) + Γ(R₁R₂) : Γ(R₁)]`.
    pub k: u64,
    pub edges: Vec<TowerEdge>,
    pub consistent: bool,
    /// For coprime `m, n`: whether the tower collapses to `d = k = 1` with
    /// `Γ(R₁) + R₁Γ(R₂) = R₁Γ` and `Γ(R₁) ∩ R₁Γ(R₂) = Γ(R₁R₂)`.
    pub collapse: Option<bool>,
}

pub const GAMMA: &str = "gamma";
pub const R1_GAMMA: &str = "r1_gamma";
pub const R1R2_GAMMA: &str = "r1r2_gamma";
pub const CSL_R1: &str = "csl_r1";
pub const R1_CSL_R2: &str = "r1_csl_r2";
pub const CSL_R1R2: &str = "csl_r1r2";
pub const SUM_LEFT: &str = "csl_r1+csl_r1r2";
pub const SUM_MIDDLE: &str = "csl_r1+r1_csl_r2";
pub const SUM_RIGHT: &str = "r1_csl_r2+csl_r1r2";
pub const TRIPLE: &str = "gamma&r1_gamma&r1r2_gamma";

/// All lattices of the tower for one pair, computed once.
struct Tower {
    m: u64,
    n: u64,
    nodes: BTreeMap<&'static str, Lattice>,
}

impl Tower {
    fn new(l: &Lattice, r1: &Isometry, r2: &Isometry) -> Result<Tower> {
        let r12 = r1.compose(r2);
        let r1g = l.transform(r1.mat())?;
        let r12g = l.transform(r12.mat())?;
        let c1 = l.intersect(&r1g)?;
        let r1c2 = r1g.intersect(&r12g)?;
        let c12 = l.intersect(&r12g)?;
        let m = c1.index_in(l)?;
        let n = r1c2.index_in(&r1g)?;
        let nodes = BTreeMap::from([
            (SUM_LEFT, c1.sum(&c12)?),
            (SUM_MIDDLE, c1.sum(&r1c2)?),
            (SUM_RIGHT, r1c2.sum(&c12)?),
            (TRIPLE, c1.intersect(&r12g)?),
            (GAMMA, l.clone()),
            (R1_GAMMA, r1g),
            (R1R2_GAMMA, r12g),
            (CSL_R1, c1),
            (R1_CSL_R2, r1c2),
            (CSL_R1R2, c12),
        ]);
        Ok(Tower { m, n, nodes })
    }

    fn get(&self, name: &str) -> &Lattice {
        &self.nodes[name]
    }

    fn index(&self, lower: &str, upper: &str) -> Result<Option<u64>> {
        let (a, b) = (self.get(lower), self.get(upper));
        Ok(if a.is_sublattice_of(b)? { Some(a.index_in(b)?) } else { None })
    }

    fn intersection_identity(&self) -> Result<bool> {
        let direct = self.get(CSL_R1).intersect(self.get(R1_CSL_R2))?;
        Ok(self.get(TRIPLE) == self.get(CSL_R1R2) && &direct == self.get(CSL_R1R2))
    }

    fn report(&self) -> Result<TowerReport> {
        let (m, n) = (self.m, self.n);
        let d = self.index(SUM_MIDDLE, R1_GAMMA)?.ok_or_else(|| Error::Internal("sum is not below R1 gamma".into()))?;
        let k = self.index(CSL_R1, SUM_LEFT)?.ok_or_else(|| Error::Internal("csl is not below its sum".into()))?;
        let ratio = |num: u64, den: u64| if num.is_multiple_of(den) { Some(num / den) } else { None };
        let labels: [(&str, &str, &str, Option<u64>); 18] = [
            (SUM_LEFT, GAMMA, "m/k", ratio(m, k)),
            (CSL_R1R2, SUM_LEFT, "n/d", ratio(n, d)),
            (CSL_R1, SUM_LEFT, "k", Some(k)),
            (SUM_MIDDLE, R1_GAMMA, "d", Some(d)),
            (CSL_R1, SUM_MIDDLE, "m/d", ratio(m, d)),
            (R1_CSL_R2, SUM_MIDDLE, "n/d", ratio(n, d)),
            (SUM_RIGHT, R1R2_GAMMA, "n/k", ratio(n, k)),
            (R1_CSL_R2, SUM_RIGHT, "k", Some(k)),
            (CSL_R1R2, SUM_RIGHT, "m/d", ratio(m, d)),
            (CSL_R1R2, GAMMA, "mn/dk", ratio(m * n, d * k)),
            (CSL_R1, GAMMA, "m", Some(m)),
            (CSL_R1, R1_GAMMA, "m", Some(m)),
            (R1_CSL_R2, R1_GAMMA, "n", Some(n)),
            (R1_CSL_R2, R1R2_GAMMA, "n", Some(n)),
            (CSL_R1R2, R1R2_GAMMA, "mn/dk", ratio(m * n, d * k)),
            (TRIPLE, CSL_R1, "n/d", ratio(n, d)),
            (TRIPLE, R1_CSL_R2, "m/d", ratio(m, d)),
            (TRIPLE, CSL_R1R2, "k", Some(k)),
        ];
        let mut edges = Vec::with_capacity(labels.len());
        for (lower, upper, label, expected) in labels {
            let observed = self.index(lower, upper)?;
            let holds = expected.is_some() && observed == expected;
            edges.push(TowerEdge { lower: lower.into(), upper: upper.into(), label: label.into(), expected, observed, holds });
        }
        let consistent = edges.iter().all(|e| e.holds);
        let collapse = if m.gcd(&n) == 1 {
            Some(
                d == 1
                    && k == 1
                    && self.get(SUM_MIDDLE) == self.get(R1_GAMMA)
                    && self.get(CSL_R1).intersect(self.get(R1_CSL_R2))? == *self.get(CSL_R1R2)
                    && self.get(TRIPLE) == self.get(CSL_R1R2),
            )
        } else {
            None
        };
        let lattices = self.nodes.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        Ok(TowerReport { lattices, m, n, d, k, edges, consistent, collapse })
    }

    /// `(nΓ ∩ Γ(RS) = nΓ(R), mRΓ ∩ Γ(RS) = mRΓ(S), mRΓ ∩ Γ(RS) = nRΓ(S))`.
    fn recovery(&self) -> Result<RecoveryReport> {
        let (m, n) = (self.m, self.n);
        let c12 = self.get(CSL_R1R2);
        let first = self.get(GAMMA).scale_int(n)?.intersect(c12)? == self.get(CSL_R1).scale_int(n)?;
        let lhs = self.get(R1_GAMMA).scale_int(m)?.intersect(c12)?;
        let second_m = lhs == self.get(R1_CSL_R2).scale_int(m)?;
        let second_n = lhs == self.get(R1_CSL_R2).scale_int(n)?;
        Ok(RecoveryReport { m, n, first, second_m, second_n })
    }
}

/// The full tower of lattices spanned by `Γ`, `R₁Γ` and `R₁R₂Γ`.
pub fn build_tower(l: &Lattice, r1: &Isometry, r2: &Isometry) -> Result<TowerReport> {
    Tower::new(l, r1, r2)?.report()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub m: u64,
    pub n: u64,
    /// `nΓ ∩ Γ(RS) = nΓ(R)`.
    pub first: bool,
    /// `mRΓ ∩ Γ(RS) = mRΓ(S)`.
    pub second_m: bool,
    /// `mRΓ ∩ Γ(RS) = nRΓ(S)`.
    pub second_n: bool,
}

/// Recovers `Γ(R)` and `RΓ(S)` from `Γ(RS)` for coprime `Σ(R)`, `Σ(S)`.
pub fn check_recovery(l: &Lattice, r: &Isometry, s: &Isometry) -> Result<RecoveryReport> {
    let t = Tower::new(l, r, s)?;
    require_coprime(t.m, t.n)?;
    t.recovery()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub r1: Option<Isometry>,
    pub r2: Option<Isometry>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub lattice: String,
    pub range: u64,
    pub pairs_tested: u64,
    pub failures: Vec<Failure>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Which scalar makes `?·RΓ ∩ Γ(RS) = ?·RΓ(S)` hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryReading {
    /// `mRΓ ∩ Γ(RS) = mRΓ(S)` on every pair, and the `n` form fails somewhere.
    M,
    /// `mRΓ ∩ Γ(RS) = nRΓ(S)` on every pair, and the `m` form fails somewhere.
    N,
    /// Both forms hold on every pair tested.
    Undecided,
    /// Neither form holds on every pair.
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub lattice: String,
    pub range: u64,
    pub pairs_tested: u64,
    pub coprime_pairs: u64,
    pub lemma1: TheoremReport,
    pub thm2: TheoremReport,
    pub cor3: TheoremReport,
    pub tower: TheoremReport,
    pub lemma6: TheoremReport,
    pub reading: RecoveryReading,
    pub second_m_failures: u64,
    pub second_n_failures: u64,
}

impl SweepReport {
    pub fn reports(&self) -> [&TheoremReport; 5] {
        [&self.lemma1, &self.thm2, &self.cor3, &self.tower, &self.lemma6]
    }
}

/// Human name of a lattice: preset name when it is one, else its HNF.
pub fn lattice_label(l: &Lattice) -> String {
    Preset::identify(l).map(|p| p.name().to_string()).unwrap_or_else(|| l.to_string())
}

#[derive(Default)]
struct PairOutcome {
    coprime: bool,
    lemma1: Option<String>,
    thm2: Option<String>,
    cor3: Option<String>,
    tower: Option<String>,
    lemma6: Option<String>,
    second_m: bool,
    second_n: bool,
}

fn analyze_pair(l: &Lattice, r1: &Isometry, r2: &Isometry) -> Result<PairOutcome> {
    let t = Tower::new(l, r1, r2)?;
    let (m, n) = (t.m, t.n);
    let s12 = t.get(CSL_R1R2).index_in(l)?;
    let mut out = PairOutcome { coprime: m.gcd(&n) == 1, ..Default::default() };
    if (m * n) % s12 != 0 {
        out.lemma1 = Some(format!("Σ(R1R2)={s12} does not divide {m}·{n}"));
    }
    let report = t.report()?;
    if !report.consistent {
        let bad: Vec<String> = report.edges.iter().filter(|e| !e.holds).map(|e| format!("{}⊆{} ({})", e.lower, e.upper, e.label)).collect();
        out.tower = Some(format!("m={m} n={n} d={} k={}: {}", report.d, report.k, bad.join(", ")));
    }
    if out.coprime {
        if s12 != m * n {
            out.thm2 = Some(format!("Σ(R1R2)={s12} but Σ(R1)Σ(R2)={}", m * n));
        }
        if !t.intersection_identity()? {
            out.cor3 = Some("lattice identities fail".into());
        }
        if report.collapse != Some(true) {
            out.tower = Some(format!("coprime tower does not collapse (d={}, k={})", report.d, report.k));
        }
        let rec = t.recovery()?;
        if !rec.first {
            out.lemma6 = Some(format!("nΓ ∩ Γ(RS) ≠ nΓ(R) for m={m} n={n}"));
        }
        out.second_m = rec.second_m;
        out.second_n = rec.second_n;
    }
    Ok(out)
}

/// The pairs `(A, Q·B)` for all classes `A`, `B` of the pool with
/// `Σ ≤ max_sigma` and all `Q ∈ P`.
pub fn sweep_pairs(pool: &EnumerationResult, p: &PointGroup, max_sigma: u64) -> Result<Vec<(Isometry, Isometry)>> {
    pool.covers(max_sigma)?;
    let reps: Vec<&Isometry> = pool.records.iter().filter(|r| r.sigma <= max_sigma).map(|r| &r.isometry).collect();
    let mut pairs = Vec::with_capacity(reps.len() * reps.len() * p.order());
    for a in &reps {
        for b in &reps {
            for q in p.elements() {
                pairs.push(((*a).clone(), q.compose(b)));
            }
        }
    }
    Ok(pairs)
}

/// Exhaustive sweep over [`sweep_pairs`].
pub fn sweep(pool: &EnumerationResult, p: &PointGroup, max_sigma: u64) -> Result<SweepReport> {
    let pairs = sweep_pairs(pool, p, max_sigma)?;
    sweep_on(&pool.lattice, &pairs, max_sigma)
}

/// Runs every pair check on the given pairs and aggregates the failures.
pub fn sweep_on(l: &Lattice, pairs: &[(Isometry, Isometry)], max_sigma: u64) -> Result<SweepReport> {
    let l = l.clone();
    let outcomes: Vec<PairOutcome> = pairs.par_iter().map(|(a, b)| analyze_pair(&l, a, b)).collect::<Result<_>>()?;
    let label = lattice_label(&l);
    let blank = |name: &str, tested: u64| TheoremReport {
        theorem: name.into(),
        lattice: label.clone(),
        range: max_sigma,
        pairs_tested: tested,
        failures: vec![],
    };
    let total = pairs.len() as u64;
    let coprime = outcomes.iter().filter(|o| o.coprime).count() as u64;
    let mut rep = SweepReport {
        lattice: label.clone(),
        range: max_sigma,
        pairs_tested: total,
        coprime_pairs: coprime,
        lemma1: blank("lemma1", total),
        thm2: blank("thm2", coprime),
        cor3: blank("cor3", coprime),
        tower: blank("tower", total),
        lemma6: blank("lemma6", coprime),
        reading: RecoveryReading::Undecided,
        second_m_failures: 0,
        second_n_failures: 0,
    };
    for ((a, b), o) in pairs.iter().zip(&outcomes) {
        let fail = |detail: &String| Failure { r1: Some(a.clone()), r2: Some(b.clone()), detail: detail.clone() };
        for (slot, msg) in [
            (&mut rep.lemma1, &o.lemma1),
            (&mut rep.thm2, &o.thm2),
            (&mut rep.cor3, &o.cor3),
            (&mut rep.tower, &o.tower),
            (&mut rep.lemma6, &o.lemma6),
        ] {
            if let Some(msg) = msg {
                slot.failures.push(fail(msg));
            }
        }
        if o.coprime {
            rep.second_m_failures += u64::from(!o.second_m);
            rep.second_n_failures += u64::from(!o.second_n);
        }
    }
    rep.reading = match (rep.second_m_failures, rep.second_n_failures) {
        (0, 0) => RecoveryReading::Undecided,
        (0, _) => RecoveryReading::M,
        (_, 0) => RecoveryReading::N,
        _ => RecoveryReading::Neither,
    };
    if matches!(rep.reading, RecoveryReading::Neither | RecoveryReading::Undecided) {
        rep.lemma6.failures.push(Failure {
            r1: None,
            r2: None,
            detail: format!(
                "no single reading of the second identity holds uniformly ({} m-failures, {} n-failures)",
                rep.second_m_failures, rep.second_n_failures
            ),
        });
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CSLDecomposition {
    pub target: Lattice,
    pub parts: Vec<CoincidenceRecord>,
    /// The intersection of the parts is the target.
    pub exact: bool,
    /// Number of distinct tuples of CSLs in the pool that also work.
    pub alternatives: usize,
}

impl CSLDecomposition {
    pub fn unique(&self) -> bool {
        self.alternatives == 1
    }
}

/// Distinct CSLs of the pool at index `q` containing `target`, one record each.
fn csls_above<'a>(pool: &'a EnumerationResult, q: u64, target: &Lattice) -> Result<Vec<&'a CoincidenceRecord>> {
    let mut seen = BTreeSet::new();
    let mut out = vec![];
    for rec in pool.records_at(q) {
        if !seen.contains(&rec.csl) && target.is_sublattice_of(&rec.csl)? {
            seen.insert(&rec.csl);
            out.push(rec);
        }
    }
    Ok(out)
}

/// All choices, one per slot, whose common intersection equals `target`.
fn matching_choices<'a, T, F>(slots: &[Vec<&'a T>], target: &Lattice, lattice_of: F) -> Result<Vec<Vec<&'a T>>>
where
    F: Fn(&T) -> &Lattice + Copy,
{
    fn go<'a, T, F: Fn(&T) -> &Lattice + Copy>(
        slots: &[Vec<&'a T>],
        acc: Option<Lattice>,
        chosen: &mut Vec<&'a T>,
        target: &Lattice,
        lattice_of: F,
        out: &mut Vec<Vec<&'a T>>,
    ) -> Result<()> {
        let Some((first, rest)) = slots.split_first() else {
            if acc.as_ref() == Some(target) {
                out.push(chosen.clone());
            }
            return Ok(());
        };
        for c in first {
            let next = match &acc {
                None => lattice_of(c).clone(),
                Some(a) => a.intersect(lattice_of(c))?,
            };
            chosen.push(c);
            go(rest, Some(next), chosen, target, lattice_of, out)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut out = vec![];
    go(slots, None, &mut vec![], target, lattice_of, &mut out)?;
    Ok(out)
}

/// Writes `Γ(R)` as an intersection of CSLs whose indices are the prime
/// power parts of `Σ(R)`, searching the whole pool.
pub fn decompose_csl(target: &CoincidenceRecord, pool: &EnumerationResult) -> Result<Option<CSLDecomposition>> {
    pool.covers(target.sigma)?;
    let parts = factorize(target.sigma);
    if parts.len() <= 1 {
        return Ok(Some(CSLDecomposition { target: target.csl.clone(), parts: vec![target.clone()], exact: true, alternatives: 1 }));
    }
    let slots = parts
        .iter()
        .map(|&(p, e)| csls_above(pool, p.pow(e), &target.csl))
        .collect::<Result<Vec<_>>>()?;
    let found = matching_choices(&slots, &target.csl, |r: &CoincidenceRecord| &r.csl)?;
    Ok(found.first().map(|choice| CSLDecomposition {
        target: target.csl.clone(),
        parts: choice.iter().map(|r| (*r).clone()).collect(),
        exact: true,
        alternatives: found.len(),
    }))
}

/// Writes the MCSL of `rs` as an intersection of MCSLs of order at most
/// `rs.len()` whose indices are powers of distinct primes.
pub fn decompose_mcsl(l: &Lattice, rs: &[Isometry], pool: &EnumerationResult) -> Result<Option<Vec<MCSLRecord>>> {
    if pool.lattice != *l {
        return Err(Error::Precondition("pool belongs to a different lattice".into()));
    }
    let whole = mcsl(l, rs)?;
    pool.covers(whole.sigma_multi)?;
    let parts = factorize(whole.sigma_multi);
    if parts.len() <= 1 {
        return Ok(Some(vec![whole]));
    }
    let order = rs.len().max(1);
    let mut slots: Vec<Vec<MCSLRecord>> = vec![];
    for &(p, e) in &parts {
        let q = p.pow(e);
        // CSLs above the MCSL with index a power of p; the p-part must be an
        // intersection of at most `order` of them
        let mut base = vec![];
        for a in 0..=e {
            base.extend(csls_above(pool, p.pow(a), &whole.mcsl)?);
        }
        let mut found: BTreeMap<Lattice, MCSLRecord> = BTreeMap::new();
        let mut stack: Vec<(usize, Vec<Isometry>, Lattice)> = vec![(0, vec![], l.clone())];
        while let Some((start, isos, acc)) = stack.pop() {
            if !isos.is_empty() && acc.index_in(l)? == q {
                found.entry(acc.clone()).or_insert(MCSLRecord { isometries: isos.clone(), mcsl: acc.clone(), sigma_multi: q });
            }
            if isos.len() == order {
                continue;
            }
            for (i, rec) in base.iter().enumerate().skip(start) {
                let next = acc.intersect(&rec.csl)?;
                if q % next.index_in(l)? == 0 {
                    let mut more = isos.clone();
                    more.push(rec.isometry.clone());
                    stack.push((i + 1, more, next));
                }
            }
        }
        slots.push(found.into_values().collect());
    }
    let refs: Vec<Vec<&MCSLRecord>> = slots.iter().map(|s| s.iter().collect()).collect();
    let found = matching_choices(&refs, &whole.mcsl, |r: &MCSLRecord| &r.mcsl)?;
    Ok(found.first().map(|c| c.iter().map(|r| (*r).clone()).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiDecomposition {
    pub ordering: Vec<u64>,
    pub factors: Vec<Isometry>,
    pub target: Isometry,
}

impl PiDecomposition {
    pub fn product(&self) -> Isometry {
        let dim = self.target.dim();
        self.factors.iter().fold(Isometry::identity(dim), |acc, f| acc.compose(f))
    }
}

/// Factors `R = R₁⋯Rₙ` with `Σ(Rᵢ)` the `πᵢ`-part of `Σ(R)`, searching all
/// isometries of the pool at those indices.
pub fn pi_decompose(r: &Isometry, pi: &[u64], pool: &EnumerationResult, p: &PointGroup) -> Result<Option<PiDecomposition>> {
    let l = &pool.lattice;
    if p.lattice() != l {
        return Err(Error::Precondition("point group belongs to a different lattice".into()));
    }
    let total = sigma(l, r)?;
    pool.covers(total)?;
    let distinct: BTreeSet<u64> = pi.iter().copied().collect();
    if distinct.len() != pi.len() {
        return Err(Error::Precondition("ordering repeats a prime".into()));
    }
    for (q, _) in factorize(total) {
        if !distinct.contains(&q) {
            return Err(Error::Precondition(format!("ordering misses the prime {q}")));
        }
    }
    let parts: Vec<u64> = pi.iter().map(|&q| crate::arith::prime_power_part(total, q)).collect();
    let mut factors = vec![];
    if pi_search(l, p, pool, r, &parts, total, &mut factors)? {
        Ok(Some(PiDecomposition { ordering: pi.to_vec(), factors, target: r.clone() }))
    } else {
        Ok(None)
    }
}

fn pi_search(
    l: &Lattice,
    p: &PointGroup,
    pool: &EnumerationResult,
    rest: &Isometry,
    parts: &[u64],
    rest_sigma: u64,
    factors: &mut Vec<Isometry>,
) -> Result<bool> {
    let Some((&q, tail)) = parts.split_first() else {
        return Ok(rest_sigma == 1 && p.contains(rest));
    };
    if tail.is_empty() {
        if sigma(l, rest)? == q {
            factors.push(rest.clone());
            return Ok(true);
        }
        return Ok(false);
    }
    for rec in pool.records_at(q) {
        for member in rec.sym_class.members(p) {
            let next = member.inverse().compose(rest);
            let s = sigma(l, &next)?;
            if s * q != rest_sigma {
                continue;
            }
            factors.push(member);
            if pi_search(l, p, pool, &next, tail, s, factors)? {
                return Ok(true);
            }
            factors.pop();
        }
    }
    Ok(false)
}

/// Pairs `R₁R₂ ≠ R₂R₁` with coprime indices for which the naive
/// `Γ(R₁) ∩ Γ(R₂)` misses `Γ(R₁R₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaiveIntersectionReport {
    pub lattice: String,
    pub range: u64,
    pub pairs_tested: u64,
    pub instances: u64,
    pub example: Option<(Isometry, Isometry)>,
}

impl NaiveIntersectionReport {
    pub fn conclusive(&self) -> bool {
        self.instances > 0
    }
}

pub fn naive_intersection_search(pool: &EnumerationResult, max_sigma: u64) -> Result<NaiveIntersectionReport> {
    pool.covers(max_sigma)?;
    let l = &pool.lattice;
    let recs: Vec<&CoincidenceRecord> = pool.records.iter().filter(|r| r.sigma > 1 && r.sigma <= max_sigma).collect();
    let mut pairs = vec![];
    for a in &recs {
        for b in &recs {
            if a.sigma.gcd(&b.sigma) == 1 && a.isometry.compose(&b.isometry) != b.isometry.compose(&a.isometry) {
                pairs.push((*a, *b));
            }
        }
    }
    let hits: Vec<bool> = pairs
        .par_iter()
        .map(|(a, b)| Ok(a.csl.intersect(&b.csl)? != csl_lattice(l, &a.isometry.compose(&b.isometry))?))
        .collect::<Result<_>>()?;
    let example = pairs.iter().zip(&hits).find(|(_, &h)| h).map(|((a, b), _)| (a.isometry.clone(), b.isometry.clone()));
    Ok(NaiveIntersectionReport {
        lattice: lattice_label(l),
        range: max_sigma,
        pairs_tested: pairs.len() as u64,
        instances: hits.iter().filter(|&&h| h).count() as u64,
        example,
    })
}

/// Multiplicativity of `f_iso` in range forces multiplicativity of `f`.
pub fn theorem9_check(t: &MultiplicityTable) -> Result<TheoremReport> {
    let iso = check_multiplicative(&t.series(Which::FIso)?);
    let f = check_multiplicative(&t.series(Which::F)?);
    let mut failures = vec![];
    if iso.is_empty() && !f.is_empty() {
        failures.push(Failure { r1: None, r2: None, detail: format!("f_iso multiplicative but f fails at {}", f[0]) });
    }
    Ok(TheoremReport {
        theorem: "thm9".into(),
        lattice: lattice_label(&t.lattice),
        range: t.max_index,
        pairs_tested: crate::arith::coprime_pairs(t.max_index).len() as u64,
        failures,
    })
}

fn composite_indices(pool: &EnumerationResult, max_sigma: u64) -> impl Iterator<Item = &CoincidenceRecord> {
    pool.records.iter().filter(move |r| r.sigma <= max_sigma && factorize(r.sigma).len() >= 2)
}

/// Within range: `f` is multiplicative iff every CSL whose index has at
/// least two prime factors splits into prime power CSLs, and every split
/// found is unique.
pub fn theorem7_check(pool: &EnumerationResult, p: &PointGroup, max_sigma: u64) -> Result<TheoremReport> {
    pool.covers(max_sigma)?;
    let mut truncated = pool.clone();
    truncated.records.retain(|r| r.sigma <= max_sigma);
    truncated.max_sigma = max_sigma;
    let f_mult = check_multiplicative(&multiplicity_table(&truncated, p)?.series(Which::F)?).is_empty();
    let mut seen = BTreeSet::new();
    let mut failures = vec![];
    let mut tested = 0;
    let mut undecomposable = 0;
    for rec in composite_indices(pool, max_sigma) {
        if !seen.insert(&rec.csl) {
            continue;
        }
        tested += 1;
        match decompose_csl(rec, pool)? {
            None => {
                undecomposable += 1;
                if f_mult {
                    failures.push(Failure {
                        r1: Some(rec.isometry.clone()),
                        r2: None,
                        detail: format!("CSL of index {} does not split although f is multiplicative", rec.sigma),
                    });
                }
            }
            Some(dec) if !dec.unique() => failures.push(Failure {
                r1: Some(rec.isometry.clone()),
                r2: None,
                detail: format!("CSL of index {} splits in {} ways", rec.sigma, dec.alternatives),
            }),
            Some(_) => {}
        }
    }
    if !f_mult && undecomposable == 0 {
        failures.push(Failure { r1: None, r2: None, detail: "f is not multiplicative yet every CSL splits".into() });
    }
    Ok(TheoremReport { theorem: "thm7".into(), lattice: lattice_label(&pool.lattice), range: max_sigma, pairs_tested: tested, failures })
}

fn permutations(items: &[u64]) -> Vec<Vec<u64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = vec![];
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Within range: `f_iso` is multiplicative iff every coincidence isometry
/// whose index has at least two prime factors has a π-decomposition for
/// every ordering π of its primes.
pub fn theorem8_check(pool: &EnumerationResult, p: &PointGroup, max_sigma: u64) -> Result<TheoremReport> {
    pool.covers(max_sigma)?;
    let mut truncated = pool.clone();
    truncated.records.retain(|r| r.sigma <= max_sigma);
    truncated.max_sigma = max_sigma;
    let iso_mult = check_multiplicative(&multiplicity_table(&truncated, p)?.series(Which::FIso)?).is_empty();
    let mut failures = vec![];
    let mut tested = 0;
    let mut missing = 0;
    for rec in composite_indices(pool, max_sigma) {
        let primes: Vec<u64> = factorize(rec.sigma).into_iter().map(|(q, _)| q).collect();
        for pi in permutations(&primes) {
            tested += 1;
            if pi_decompose(&rec.isometry, &pi, pool, p)?.is_none() {
                missing += 1;
                if iso_mult {
                    failures.push(Failure {
                        r1: Some(rec.isometry.clone()),
                        r2: None,
                        detail: format!("no decomposition along {pi:?} although f_iso is multiplicative"),
                    });
                }
            }
        }
    }
    if !iso_mult && missing == 0 {
        failures.push(Failure { r1: None, r2: None, detail: "f_iso is not multiplicative yet every isometry decomposes".into() });
    }
    Ok(TheoremReport { theorem: "thm8".into(), lattice: lattice_label(&pool.lattice), range: max_sigma, pairs_tested: tested, failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenQuestionEntry {
    pub lattice: String,
    pub range: u64,
    pub f_multiplicative: bool,
    pub f_iso_multiplicative: bool,
    /// `f` multiplicative while `f_iso` is not: a candidate negative answer.
    pub flag: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenQuestionReport {
    pub entries: Vec<OpenQuestionEntry>,
    pub note: String,
}

pub fn open_question_entry(t: &MultiplicityTable) -> Result<OpenQuestionEntry> {
    let f_multiplicative = check_multiplicative(&t.series(Which::F)?).is_empty();
    let f_iso_multiplicative = check_multiplicative(&t.series(Which::FIso)?).is_empty();
    Ok(OpenQuestionEntry {
        lattice: lattice_label(&t.lattice),
        range: t.max_index,
        f_multiplicative,
        f_iso_multiplicative,
        flag: f_multiplicative && !f_iso_multiplicative,
    })
}

/// Does multiplicativity of `f` force multiplicativity of `f_iso`? Tabulates
/// both on each lattice up to `n` and flags any counterexample in range.
pub fn open_question_experiment(lattices: &[Lattice], n: u64) -> Result<OpenQuestionReport> {
    let entries = lattices
        .iter()
        .map(|l| {
            let e = enumerate_auto(l, n)?;
            open_question_entry(&multiplicity_table(&e, &PointGroup::of(l)?)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let note = if entries.iter().any(|e| e.flag) {
        "candidate counterexample found: f multiplicative in range while f_iso is not".to_string()
    } else {
        format!("no flag up to {n}; this says nothing beyond the tested range")
    };
    Ok(OpenQuestionReport { entries, note })
}
